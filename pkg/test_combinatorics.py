"""
组合模块测试
"""
import pytest

from combinatorics import (
    Composition,
    Signature,
    Subset,
    dim_T_formula,
    enumerate_compositions,
    enumerate_signatures,
    multinomial,
    ordered_bipartitions,
    sign_s,
    signature_of,
    subsets,
)


def S(*elements, n=4):
    return Subset(tuple(elements), n)


@pytest.mark.parametrize("a, b, expected", [
    ((1, 2), (3, 4), 1),
    ((1, 3), (2, 4), -1),
    ((3, 4), (1, 2), 1),
    ((2,), (1,), -1),
    ((1,), (2,), 1),
    ((2, 3, 4), (1,), -1),
])
def test_sign_s_examples(a, b, expected):
    assert sign_s(S(*a), S(*b)) == expected


def test_sign_s_rejects_overlap_and_empty():
    with pytest.raises(ValueError):
        sign_s(S(1, 2), S(2, 3))
    with pytest.raises(ValueError):
        sign_s(S(), S(1))


def test_sign_s_cocycle_identity():
    """s(A∪B, C) s(A,B) = s(A, B∪C) s(B,C) 对 {1..6} 中所有不交非空三元组成立"""
    n = 6
    checked = 0
    for code in range(4 ** n):
        # 每个元素归入 A / B / C 或不取
        parts = ([], [], [], [])
        for x in range(1, n + 1):
            parts[code % 4].append(x)
            code //= 4
        a, b, c = (Subset(tuple(part), n) for part in parts[:3])
        if not (a.elements and b.elements and c.elements):
            continue
        assert sign_s(a.union(b), c) * sign_s(a, b) == sign_s(a, b.union(c)) * sign_s(b, c)
        checked += 1
    assert checked == 4 ** 6 - 3 * 3 ** 6 + 3 * 2 ** 6 - 1


def test_sign_s_antisymmetry():
    """s(A,B) s(B,A) = (-1)^{|A||B|} 对 {1..6} 中所有不交非空对成立"""
    n = 6
    checked = 0
    for code in range(3 ** n):
        parts = ([], [], [])
        for x in range(1, n + 1):
            parts[code % 3].append(x)
            code //= 3
        a, b = (Subset(tuple(part), n) for part in parts[:2])
        if not (a.elements and b.elements):
            continue
        assert sign_s(a, b) * sign_s(b, a) == (-1) ** (len(a) * len(b))
        checked += 1
    assert checked == 3 ** 6 - 2 * 2 ** 6 + 1


def test_ordered_bipartitions():
    assert ordered_bipartitions(S(1, 2)) == [(S(1), S(2)), (S(2), S(1))]
    assert len(ordered_bipartitions(S(1, 2, 3, 4))) == 14
    assert ordered_bipartitions(S(4)) == []
    for b, c in ordered_bipartitions(S(1, 2, 3, 4)):
        assert b.is_disjoint(c)
        assert b.union(c) == S(1, 2, 3, 4)


def test_subsets():
    assert subsets(3, 2) == [Subset((1, 2), 3), Subset((1, 3), 3), Subset((2, 3), 3)]
    assert subsets(2, 3) == []
    assert subsets(4, 0) == [Subset((), 4)]


def test_subset_validation():
    with pytest.raises(ValueError):
        Subset((2, 1), 3)
    with pytest.raises(ValueError):
        Subset((1, 4), 3)
    with pytest.raises(ValueError):
        Subset((1,), 3).union(Subset((2,), 4))
    assert Subset.of([3, 1], 3) == Subset((1, 3), 3)
    assert Subset((1, 3), 3).render() == "{1,3}"


@pytest.mark.parametrize("t, p, max_part, expected", [
    (3, 2, 3, [(1, 2), (2, 1)]),
    (4, 3, 2, [(1, 1, 2), (1, 2, 1), (2, 1, 1)]),
    (5, 1, 4, []),
    (0, 0, 1, [()]),
])
def test_enumerate_compositions(t, p, max_part, expected):
    assert [c.parts for c in enumerate_compositions(t, p, max_part)] == expected


def test_enumerate_compositions_rejects_negative():
    with pytest.raises(ValueError):
        enumerate_compositions(-1, 1, 2)


def test_composition_rejects_zero_part():
    with pytest.raises(ValueError):
        Composition((1, 0))


@pytest.mark.parametrize("parts, n, expected", [
    ((1, 1, 2), 2, (2, 1)),
    ((2, 2), 4, (0, 2, 0, 0)),
    ((3,), 3, (0, 0, 1)),
])
def test_signature_of(parts, n, expected):
    sig = signature_of(Composition(parts), n)
    assert sig.counts == expected
    assert sig.t == sum(parts)
    assert sig.p == len(parts)


def test_signature_of_rejects_large_part():
    with pytest.raises(ValueError):
        signature_of(Composition((3,)), 2)


@pytest.mark.parametrize("counts, expected", [
    ((2, 1), 3),
    ((0, 2), 1),
    ((0, 0, 0), 1),
])
def test_multinomial(counts, expected):
    assert multinomial(Signature(counts)) == expected


def test_signature_groups_compositions():
    """同一签名下分拆的个数等于多项式系数"""
    for n in range(1, 5):
        for t in range(1, 7):
            for p in range(1, t + 1):
                groups = {}
                for c in enumerate_compositions(t, p, n):
                    sig = signature_of(c, n)
                    groups[sig] = groups.get(sig, 0) + 1
                assert sorted(groups, key=lambda s: s.counts) == enumerate_signatures(t, p, n)
                for sig, count in groups.items():
                    assert multinomial(sig) == count


@pytest.mark.parametrize("n, t, dims", [
    (4, 1, [4]),
    (4, 2, [6, 16]),
    (4, 3, [4, 48, 64]),
    (4, 4, [1, 68, 288, 256]),
    (2, 4, [0, 1, 12, 16]),
    (3, 3, [1, 18, 27]),
])
def test_dim_T_formula(n, t, dims):
    assert [dim_T_formula(n, t, p) for p in range(1, t + 1)] == dims


def test_dim_T_formula_trivial_term():
    assert dim_T_formula(3, 0, 0) == 1
