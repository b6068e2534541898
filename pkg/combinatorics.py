"""
组合模块 - 子集、符号函数 s(A,B)、有序分拆（composition）及其签名与多项式系数
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from typing import Iterable, List, Tuple


@dataclass(frozen=True, order=True)
class Subset:
    """{1..n} 的子集，元素严格递增；携带环境维数 n，防止不同 n 混用"""

    elements: Tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"环境维数 n 必须为正数，当前为 {self.n}")
        if any(b <= a for a, b in zip(self.elements, self.elements[1:])):
            raise ValueError(f"子集元素必须严格递增: {self.elements}")
        if self.elements and (self.elements[0] < 1 or self.elements[-1] > self.n):
            raise ValueError(f"子集元素超出范围 [1, {self.n}]: {self.elements}")

    @classmethod
    def of(cls, elements: Iterable[int], n: int) -> "Subset":
        return cls(tuple(sorted(elements)), n)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item: int) -> bool:
        return item in self.elements

    def _check_same_n(self, other: "Subset"):
        if self.n != other.n:
            raise ValueError(f"子集的环境维数不一致: {self.n} != {other.n}")

    def is_disjoint(self, other: "Subset") -> bool:
        self._check_same_n(other)
        return not set(self.elements) & set(other.elements)

    def union(self, other: "Subset") -> "Subset":
        self._check_same_n(other)
        return Subset.of(set(self.elements) | set(other.elements), self.n)

    def minus(self, other: "Subset") -> "Subset":
        self._check_same_n(other)
        return Subset.of(set(self.elements) - set(other.elements), self.n)

    def render(self) -> str:
        return "{" + ",".join(str(a) for a in self.elements) + "}"


@dataclass(frozen=True, order=True)
class Composition:
    """t 的有序分拆 (i_1, ..., i_p)，每个部分 ≥ 1"""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(part < 1 for part in self.parts):
            raise ValueError(f"分拆的每个部分必须 ≥ 1: {self.parts}")

    @property
    def t(self) -> int:
        return sum(self.parts)

    @property
    def p(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class Signature:
    """签名 (ℓ_1, ..., ℓ_n)，ℓ_k 为分拆中等于 k 的部分个数"""

    counts: Tuple[int, ...]

    @property
    def t(self) -> int:
        return sum(k * count for k, count in enumerate(self.counts, start=1))

    @property
    def p(self) -> int:
        return sum(self.counts)


def sign_s(a: Subset, b: Subset) -> int:
    """
    计算符号 s(A,B)，满足 v_{A∪B} = s(A,B) v_A ∧ v_B

    Args:
        a: 非空子集 A
        b: 与 A 不交的非空子集 B

    Returns:
        (-1)^inv，其中 inv = #{(x, y) ∈ A×B : x > y}
    """
    if not a.elements or not b.elements:
        raise ValueError(f"s(A,B) 要求 A、B 非空: A={a.render()}, B={b.render()}")
    if not a.is_disjoint(b):
        raise ValueError(f"s(A,B) 要求 A、B 不交: A={a.render()}, B={b.render()}")
    inversions = sum(1 for x in a.elements for y in b.elements if x > y)
    return -1 if inversions % 2 else 1


def ordered_bipartitions(a: Subset) -> List[Tuple[Subset, Subset]]:
    """
    枚举 A 的所有有序二分 (B, C)：B、C 非空、不交且 B ∪ C = A

    顺序：先按 |B| 升序，再按 B 的字典序。共 2^{|A|} - 2 项；|A| < 2 时返回空列表。
    """
    result = []
    for size in range(1, len(a)):
        for chosen in combinations(a.elements, size):
            b = Subset(chosen, a.n)
            result.append((b, a.minus(b)))
    return result


def subsets(n: int, i: int) -> List[Subset]:
    """{1..n} 中所有 i 元子集，字典序；i 超出 [0, n] 时为空"""
    if i < 0 or i > n:
        return []
    return [Subset(chosen, n) for chosen in combinations(range(1, n + 1), i)]


@lru_cache(maxsize=None)
def _compositions(t: int, p: int, max_part: int) -> Tuple[Tuple[int, ...], ...]:
    if p == 0:
        return ((),) if t == 0 else ()
    if t < p or t > p * max_part:
        return ()
    result = []
    for first in range(1, max_part + 1):
        for rest in _compositions(t - first, p - 1, max_part):
            result.append((first,) + rest)
    return tuple(result)


def enumerate_compositions(t: int, p: int, max_part: int) -> List[Composition]:
    """
    枚举 t 分成恰好 p 个部分、每部分在 [1, max_part] 内的所有有序分拆

    Args:
        t: 总次数 t ≥ 0
        p: 部分个数 p ≥ 0
        max_part: 每部分的上界（通常取 n）

    Returns:
        字典序排列的 Composition 列表；不可行时返回空列表
    """
    if t < 0 or p < 0 or max_part < 1:
        raise ValueError(f"参数非法: t={t}, p={p}, max_part={max_part}")
    return [Composition(parts) for parts in _compositions(t, p, max_part)]


def signature_of(c: Composition, n: int) -> Signature:
    """统计分拆中每个 k ∈ [1, n] 出现的次数"""
    if any(part > n for part in c.parts):
        raise ValueError(f"分拆 {c.parts} 中存在超过 n={n} 的部分")
    counts = [0] * n
    for part in c.parts:
        counts[part - 1] += 1
    return Signature(tuple(counts))


def multinomial(sig: Signature) -> int:
    """多项式系数 (ℓ_1 + ... + ℓ_n)! / (ℓ_1! ... ℓ_n!)"""
    if any(count < 0 for count in sig.counts):
        raise ValueError(f"签名计数必须非负: {sig.counts}")
    return factorial(sum(sig.counts)) // prod(factorial(count) for count in sig.counts)


def enumerate_signatures(t: int, p: int, n: int) -> List[Signature]:
    """所有满足 Σ kℓ_k = t、Σ ℓ_k = p 的签名，按计数向量字典序"""

    def walk(k: int, t_left: int, p_left: int) -> List[Tuple[int, ...]]:
        if k > n:
            return [()] if t_left == 0 and p_left == 0 else []
        found = []
        for count in range(0, min(p_left, t_left // k) + 1):
            for rest in walk(k + 1, t_left - k * count, p_left - count):
                found.append((count,) + rest)
        return found

    if t < 0 or p < 0:
        return []
    return [Signature(counts) for counts in walk(1, t, p)]


def dim_T_formula(n: int, t: int, p: int) -> int:
    """按签名公式计算 dim T_t^p = Σ multinomial(ℓ) · Π C(n,k)^{ℓ_k}，不构造基"""
    if t == 0 and p == 0:
        return 1
    return sum(
        multinomial(sig) * prod(comb(n, k) ** count for k, count in enumerate(sig.counts, start=1))
        for sig in enumerate_signatures(t, p, n)
    )
