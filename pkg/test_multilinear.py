"""
多重线性代数模块测试
"""
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from combinatorics import Subset, dim_T_formula
from exact_linalg import ExactMatrix, FieldSpec, kron, multiply, rank
from multilinear import (
    Monomial,
    TensorWord,
    build_T,
    character,
    det_pairing,
    export_basis,
    gl_action,
    pairing_determinant,
    projection_pi,
    sym_basis,
    sym_tensor_space,
    wedge_basis,
    wedge_of_vectors,
)

Q = FieldSpec.rationals()


def test_wedge_basis_examples():
    space = wedge_basis(3, 2)
    assert space.dim == 3
    assert list(space.basis) == [Subset((1, 2), 3), Subset((1, 3), 3), Subset((2, 3), 3)]
    assert wedge_basis(2, 3).dim == 0
    assert wedge_basis(4, 0).dim == 1


def test_sym_basis_examples():
    assert sym_basis(2, 4).dim == 5
    assert sym_basis(3, 0).dim == 1
    assert sym_basis(5, 1).dim == 5
    assert [m.exponents for m in sym_basis(2, 2).basis] == [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("n, t, p, dim", [
    (3, 3, 2, 18),
    (2, 4, 2, 1),
    (2, 4, 1, 0),
    (3, 4, 4, 81),
    (4, 3, 1, 4),
])
def test_build_T_examples(n, t, p, dim):
    assert build_T(n, t, p).dim == dim


def test_build_T_matches_signature_formula():
    for n in range(1, 5):
        for t in range(1, 7):
            for p in range(1, t + 1):
                assert build_T(n, t, p).dim == dim_T_formula(n, t, p)


def test_build_T_two_dimensional_closed_form():
    """n = 2 时 dim T_t^{t-i} = C(t-i, i)·2^{t-2i}"""
    for t in range(1, 9):
        for i in range(0, (t + 1) // 2 + 1):
            if t - i < 1:
                continue
            expected = comb(t - i, i) * 2 ** (t - 2 * i) if 2 * i <= t else 0
            assert build_T(2, t, t - i).dim == expected


def test_build_T_order():
    """分拆按字典序，块内按乘积字典序"""
    words = [word.render() for word in build_T(2, 3, 2).basis]
    assert words == ["{1}|{1,2}", "{2}|{1,2}", "{1,2}|{1}", "{1,2}|{2}"]
    assert build_T(2, 0, 0).dim == 1
    with pytest.raises(ValueError):
        build_T(0, 1, 1)


def test_gl_action_identity():
    identity = ExactMatrix.identity(3, Q)
    for space in (wedge_basis(3, 2), sym_basis(3, 2), build_T(3, 3, 2)):
        assert gl_action(identity, space).matrix == ExactMatrix.identity(space.dim, Q)


def test_gl_action_swap_on_top_wedge():
    swap = ExactMatrix.from_dense([[0, 1], [1, 0]], Q)
    assert gl_action(swap, wedge_basis(2, 2)).matrix.to_dense() == [[-1]]


def test_gl_action_on_sym_square():
    g = ExactMatrix.from_dense([[1, 1], [0, 1]], Q)
    assert gl_action(g, sym_basis(2, 2)).matrix.to_dense() == [[1, 1, 1], [0, 1, 2], [0, 0, 1]]


def test_gl_action_on_tensor_square_is_kronecker():
    g = ExactMatrix.from_dense([[2, -1], [1, 3]], Q)
    assert gl_action(g, build_T(2, 2, 2)).matrix == kron(g, g)


def test_gl_action_rejects_wrong_size():
    with pytest.raises(ValueError):
        gl_action(ExactMatrix.identity(2, Q), wedge_basis(3, 1))


def test_gl_action_on_empty_wedge():
    action = gl_action(ExactMatrix.identity(2, Q), wedge_basis(2, 3))
    assert action.matrix.shape == (0, 0)


@pytest.mark.parametrize("space", [
    wedge_basis(3, 2), wedge_basis(3, 3), sym_basis(3, 2), sym_basis(2, 3), build_T(3, 3, 2), build_T(2, 4, 3),
], ids=lambda s: s.label)
def test_gl_action_is_multiplicative(space):
    rng = np.random.default_rng(7)
    for _ in range(5):
        g, h = (
            ExactMatrix.from_dense([[int(x) for x in row] for row in rng.integers(-2, 3, size=(space.n, space.n))], Q)
            for _ in range(2)
        )
        assert gl_action(multiply(g, h), space).matrix == multiply(gl_action(g, space).matrix, gl_action(h, space).matrix)


def test_projection_pi():
    pi = projection_pi(2, 2)
    source, target = pi.source, pi.target
    e12 = TensorWord((Subset((1,), 2), Subset((2,), 2)))
    e21 = TensorWord((Subset((2,), 2), Subset((1,), 2)))
    mixed = target.index_of(Monomial((1, 1)))
    assert pi.matrix.column(source.index_of(e12)) == {mixed: 1}
    assert pi.matrix.column(source.index_of(e21)) == {mixed: 1}
    assert rank(pi.matrix) == 3
    assert projection_pi(3, 1).matrix == ExactMatrix.identity(3, Q)


def test_det_pairing():
    assert det_pairing(Subset((1, 3), 3), Subset((1, 3), 3)) == 1
    assert det_pairing(Subset((1, 2), 3), Subset((1, 3), 3)) == 0
    with pytest.raises(ValueError):
        det_pairing(Subset((1,), 3), Subset((1, 2), 3))


def test_pairing_determinant():
    assert pairing_determinant([[1, 0], [1, 0]], [[1, 0], [1, 0]]) == 0
    assert pairing_determinant([[1, 0], [0, 1]], [[1, 0], [0, 1]]) == 1
    assert pairing_determinant([[1, 2, 0], [0, 1, 1]], [[1, 0, 0], [0, 0, 1]]) == 1


def test_wedge_of_vectors():
    assert wedge_of_vectors([[1, 0, 0], [0, 1, 0]], 3) == {Subset((1, 2), 3): 1}
    assert wedge_of_vectors([[1, 2], [3, 4]], 2) == {Subset((1, 2), 2): -2}


def test_character():
    assert character(wedge_basis(3, 2), (1, 2, 3)) == 11
    assert character(sym_basis(2, 2), (1, 2)) == 7
    assert character(build_T(2, 2, 2), (1, 2)) == 9
    assert character(sym_basis(1, 3), (Fraction(1, 2),)) == Fraction(1, 8)


def test_sym_tensor_space_order():
    space = sym_tensor_space(2, 1, 1)
    assert [(a.elements, m.exponents) for a, m in space.basis] == [
        ((1,), (1, 0)), ((1,), (0, 1)), ((2,), (1, 0)), ((2,), (0, 1)),
    ]


def test_export_basis():
    assert export_basis(sym_basis(2, 2)) == "2 0\n1 1\n0 2\n"
    assert export_basis(build_T(2, 2, 1)) == "{1,2}\n"
