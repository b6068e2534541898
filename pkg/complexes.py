"""
复形构造模块 - 微分 δ、反转 Koszul 复形、Koszul 切片、滤链与分次块、bar 对偶微分、复形导出
"""
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from combinatorics import Subset, ordered_bipartitions, sign_s
from exact_linalg import ExactMatrix, ExactScalar, FieldSpec, export_matrix, kron, multiply
from multilinear import (
    BasedSpace,
    LinearMapOnBasis,
    RATIONALS,
    TensorWord,
    build_T,
    export_basis,
    projection_pi,
    sym_tensor_space,
    tensor_wedge_space,
    wedge_basis,
)


@dataclass(frozen=True)
class ChainComplex:
    """上链复形：terms[k] 位于次数 start + k，differentials[k]: terms[k] → terms[k+1]"""

    label: str
    terms: Tuple[BasedSpace, ...]
    differentials: Tuple[LinearMapOnBasis, ...]
    start: int = 1
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise ValueError(f"复形 {self.label}: {len(self.terms)} 项却有 {len(self.differentials)} 个微分")
        for k, d in enumerate(self.differentials):
            if d.source.dim != self.terms[k].dim or d.target.dim != self.terms[k + 1].dim:
                raise ValueError(f"复形 {self.label}: 第 {k} 个微分的维数与相邻项不匹配")

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(term.dim for term in self.terms)

    @property
    def field(self) -> Optional[FieldSpec]:
        return self.differentials[0].matrix.field if self.differentials else None

    def composition_zero_violations(self) -> List[int]:
        """返回 d_{k+1} ∘ d_k ≠ 0 的位置 k"""
        return [
            k for k in range(len(self.differentials) - 1)
            if not multiply(self.differentials[k + 1].matrix, self.differentials[k].matrix).is_zero()
        ]

    def is_complex(self) -> bool:
        return not self.composition_zero_violations()


@dataclass(frozen=True)
class FilteredComplex:
    """带滤链的复形：level_of[k][j] 为第 k 项第 j 个基元素的滤链层次 f = i_1"""

    base: ChainComplex
    level_of: Tuple[Tuple[int, ...], ...]

    def words_at_level(self, k: int, f: int) -> List[int]:
        return [j for j, level in enumerate(self.level_of[k]) if level == f]

    def respects_filtration(self) -> bool:
        """δ(F^f) ⊆ F^f：每个非零项的目标层次不超过源层次"""
        for k, d in enumerate(self.base.differentials):
            source_levels, target_levels = self.level_of[k], self.level_of[k + 1]
            if any(target_levels[i] > source_levels[j] for (i, j) in d.matrix.entries):
                return False
        return True


@lru_cache(maxsize=None)
def _split_terms(a: Subset) -> Tuple[Tuple[Subset, Subset, int], ...]:
    return tuple((b, c, sign_s(b, c)) for b, c in ordered_bipartitions(a))


def delta(n: int, t: int, p: int, field_spec: FieldSpec = RATIONALS) -> LinearMapOnBasis:
    """
    微分 δ: T_t^p → T_t^{p+1}

    Args:
        n: 维数
        t: 总次数
        p: 部分次数，要求 1 ≤ p ≤ t - 1
        field_spec: 系数域

    Returns:
        δ(α_1 ⊗ ... ⊗ α_p) = Σ_j (-1)^{j-1} α_1 ⊗ ... ⊗ δ(α_j) ⊗ ... ⊗ α_p 的矩阵
    """
    if not 1 <= p <= t - 1:
        raise ValueError(f"δ 要求 1 ≤ p ≤ t-1，当前 t={t}, p={p}")
    source, target = build_T(n, t, p), build_T(n, t, p + 1)
    columns: List[Dict[int, ExactScalar]] = []
    for word in source.basis:
        column: Dict[int, int] = {}
        for j, factor in enumerate(word.factors):
            slot_sign = -1 if j % 2 else 1
            for b, c, s in _split_terms(factor):
                image = TensorWord(word.factors[:j] + (b, c) + word.factors[j + 1:])
                row = target.index_of(image)
                column[row] = column.get(row, 0) + slot_sign * s
        columns.append(column)
    return LinearMapOnBasis(source, target, ExactMatrix.from_columns(target.dim, columns, field_spec))


def delta_wedge(n: int, i: int, field_spec: FieldSpec = RATIONALS) -> LinearMapOnBasis:
    """δ: ∧^i = T_i^1 → T_i^2，e_A ↦ Σ s(B,C) e_B ⊗ e_C；i = 1 时为零映射"""
    if i < 1:
        raise ValueError(f"δ 要求 i ≥ 1，当前为 {i}")
    if i == 1:
        return zero_map(build_T(n, 1, 1), build_T(n, 1, 2), field_spec)
    return delta(n, i, 1, field_spec)


def zero_map(source: BasedSpace, target: BasedSpace, field_spec: FieldSpec) -> LinearMapOnBasis:
    return LinearMapOnBasis(source, target, ExactMatrix.zero(target.dim, source.dim, field_spec))


def delta_or_zero(n: int, t: int, p: int, field_spec: FieldSpec = RATIONALS) -> LinearMapOnBasis:
    """p 超出 [1, t-1] 时返回 T_t^p → T_t^{p+1} 的零映射（含 T_0^0 = k 的约定）"""
    if 1 <= p <= t - 1:
        return delta(n, t, p, field_spec)
    return zero_map(build_T(n, t, max(p, 0)), build_T(n, t, max(p, 0) + 1), field_spec)


def build_inverted_koszul(n: int, t: int, field_spec: FieldSpec = RATIONALS,
                          with_projection: bool = True) -> ChainComplex:
    """
    反转 Koszul 复形 0 → T_t^1 → ... → T_t^t (→ S^t) → 0

    Args:
        n: 维数
        t: 总次数 t ≥ 1
        field_spec: 系数域
        with_projection: True 时接上 π 得到完整序列，False 时为截断复形
    """
    if t < 1:
        raise ValueError(f"反转 Koszul 复形要求 t ≥ 1，当前为 {t}")
    terms = [build_T(n, t, p) for p in range(1, t + 1)]
    differentials = [delta(n, t, p, field_spec) for p in range(1, t)]
    names = ["delta"] * len(differentials)
    if with_projection:
        pi = projection_pi(n, t, field_spec)
        terms.append(pi.target)
        differentials.append(pi)
        names.append("pi")
    label = f"T_{t}^*" if not with_projection else f"T_{t}^*->S^{t}"
    return ChainComplex(label, tuple(terms), tuple(differentials), 1, tuple(names))


def koszul_slice(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> ChainComplex:
    """
    Koszul 复形在总次数 t 的切片 0 → ∧^t⊗S^0 → ∧^{t-1}⊗S^1 → ... → ∧^1⊗S^{t-1} → 0

    微分取 δ 中 |C| = 1 的部分再对称化：e_A ⊗ m ↦ Σ_{a∈A} s(A∖{a},{a}) e_{A∖{a}} ⊗ (e_a · m)。
    """
    if t < 1:
        raise ValueError(f"Koszul 切片要求 t ≥ 1，当前为 {t}")
    terms = [sym_tensor_space(n, f, t - f) for f in range(t, 0, -1)]
    differentials = []
    for source, target in zip(terms, terms[1:]):
        columns = []
        for a, monomial in source.basis:
            column = {}
            for x in a.elements:
                single = Subset((x,), n)
                rest = a.minus(single)
                column[target.index_of((rest, monomial.times(x)))] = sign_s(rest, single)
            columns.append(column)
        differentials.append(LinearMapOnBasis(source, target, ExactMatrix.from_columns(target.dim, columns, field_spec)))
    names = tuple("koszul" for _ in differentials)
    return ChainComplex(f"K_{t}", tuple(terms), tuple(differentials), 1, names)


def filtration_levels(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> FilteredComplex:
    """给截断复形每个基元素标上层次 f = i_1，并检查 δ(F^f) ⊆ F^f"""
    base = build_inverted_koszul(n, t, field_spec, with_projection=False)
    levels = tuple(tuple(len(word.factors[0]) for word in term.basis) for term in base.terms)
    filtered = FilteredComplex(base, levels)
    if not filtered.respects_filtration():
        raise ValueError(f"δ 不保持滤链 (n={n}, t={t})")
    return filtered


def _level_words(n: int, t: int, f: int, p: int) -> Tuple[BasedSpace, List[int]]:
    space = build_T(n, t, max(p, 0))
    positions = [j for j, word in enumerate(space.basis) if word.factors and len(word.factors[0]) == f]
    piece = BasedSpace(f"G^{f}(T_{t}^{p})", tuple(space.basis[j] for j in positions), "tensor", n)
    return piece, positions


def graded_piece(n: int, t: int, f: int, p: int,
                 field_spec: FieldSpec = RATIONALS) -> Tuple[BasedSpace, LinearMapOnBasis]:
    """
    分次块 G^f(T_t^p) 及其诱导微分 G^f(T_t^p) → G^f(T_t^{p+1})

    Args:
        n: 维数
        t: 总次数
        f: 层次，1 ≤ f ≤ t
        p: 部分次数

    Returns:
        (G^f(T_t^p), δ 中保持 i_1 = f 的分量)
    """
    if not 1 <= f <= t:
        raise ValueError(f"分次块要求 1 ≤ f ≤ t，当前 t={t}, f={f}")
    piece, cols = _level_words(n, t, f, p)
    next_piece, rows = _level_words(n, t, f, p + 1)
    full = delta_or_zero(n, t, p, field_spec).matrix
    return piece, LinearMapOnBasis(piece, next_piece, full.submatrix(rows, cols))


def graded_identification(n: int, t: int, f: int, p: int) -> Tuple[BasedSpace, List[int]]:
    """
    显式基双射 ∧^f ⊗ T_{t-f}^{p-1} → G^f(T_t^p)

    Returns:
        (∧^f ⊗ T_{t-f}^{p-1}, 每个乘积基元素在 G^f(T_t^p) 中的位置)
    """
    piece, _ = _level_words(n, t, f, p)
    if p < 1:
        return tensor_wedge_space(n, f, BasedSpace(f"T_{t - f}^{p - 1}", (), "tensor", n)), []
    product_space = tensor_wedge_space(n, f, build_T(n, t - f, p - 1))
    positions = [piece.index_of(TensorWord((a,) + word.factors)) for a, word in product_space.basis]
    return product_space, positions


def one_tensor_minus_delta(n: int, t: int, f: int, p: int, field_spec: FieldSpec = RATIONALS) -> ExactMatrix:
    """1 ⊗ (-δ): ∧^f ⊗ T_{t-f}^{p-1} → ∧^f ⊗ T_{t-f}^p"""
    inner = delta_or_zero(n, t - f, p - 1, field_spec).matrix if p >= 1 else ExactMatrix.zero(0, 0, field_spec)
    return kron(ExactMatrix.identity(wedge_basis(n, f).dim, field_spec), inner.negate())


# ---- bar 对偶 ----

def exterior_product(b: Subset, c: Subset) -> Optional[Tuple[int, Subset]]:
    """Λ = ∧(V*) 中 e*_B ∧ e*_C = s(B,C) e*_{B∪C}；相交时为 0（返回 None）"""
    if not b.elements or not c.elements:
        return 1, b.union(c)
    if not b.is_disjoint(c):
        return None
    return sign_s(b, c), b.union(c)


def bar_dual_differential(n: int, t: int, p: int, field_spec: FieldSpec = RATIONALS) -> LinearMapOnBasis:
    """
    bar 对偶微分 d*_{p+1}: (Λ̄*)^{⊗p} → (Λ̄*)^{⊗p+1} 在总次数 t 的分量

    逐个目标对偶词 λ̄_1 ⊗ ... ⊗ λ̄_{p+1} 求值：
    ⟨d*φ, λ̄_1⊗...⊗λ̄_{p+1}⟩ = ε(λ_1)φ(λ̄_2⊗...) + Σ_j (-1)^j φ(...⊗ λ_jλ_{j+1} ⊗...)
                               + (-1)^{p+1} ε(λ_{p+1}) φ(λ̄_1⊗...⊗λ̄_p)，
    其中 φ 与对偶词的配对由行列式配对给出。
    """
    if not 1 <= p <= t - 1:
        raise ValueError(f"d* 要求 1 ≤ p ≤ t-1，当前 t={t}, p={p}")
    source, target = build_T(n, t, p), build_T(n, t, p + 1)
    items = []
    for row, dual in enumerate(target.basis):
        lambdas = dual.factors
        # Λ̄ 只含正次数，两端的 ε 项恒为 0
        for j in range(p):
            merged = exterior_product(lambdas[j], lambdas[j + 1])
            if merged is None:
                continue
            s, union = merged
            contracted = TensorWord(lambdas[:j] + (union,) + lambdas[j + 2:])
            if contracted not in source:
                continue
            # 对偶基下行列式配对为 Kronecker δ，只有 α = contracted 的列非零
            slot_sign = -1 if (j + 1) % 2 else 1
            items.append((row, source.index_of(contracted), slot_sign * s))
    return LinearMapOnBasis(source, target, ExactMatrix.from_accumulated(target.dim, source.dim, items, field_spec))


def bar_dual_complex(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> ChainComplex:
    """bar 对偶复形在总次数 t 的分量：t = 0 时只有 k（d*_1 = 0），t ≥ 1 时为 p = 1..t 各项"""
    if t < 0:
        raise ValueError(f"总次数必须非负，当前为 {t}")
    if t == 0:
        return ChainComplex("Bar_0", (build_T(n, 0, 0),), (), 0, ())
    terms = tuple(build_T(n, t, p) for p in range(1, t + 1))
    differentials = tuple(bar_dual_differential(n, t, p, field_spec) for p in range(1, t))
    return ChainComplex(f"Bar_{t}", terms, differentials, 1, tuple("dstar" for _ in differentials))


# ---- 导出 ----

def _file_label(label: str) -> str:
    return label.replace("^", "_").replace("*", "").replace("->", "_")


def _write(path: Path, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise OSError(f"写入文件失败 {path}: {e}") from e


def export_complex(complex_: ChainComplex, directory: Path) -> List[Path]:
    """
    导出复形：清单文件 manifest.txt、每项的基列表、每个微分的矩阵文件

    Returns:
        写出的文件路径列表（按写出顺序）
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"创建目录失败 {directory}: {e}") from e
    written: List[Path] = []
    field_code = complex_.field.code if complex_.field else "q"
    manifest = [f"complex {complex_.label}", f"field {field_code}"]
    for term in complex_.terms:
        name = f"basis_{_file_label(term.label)}.txt"
        _write(directory / name, export_basis(term))
        written.append(directory / name)
        manifest.append(f"term {term.label} {term.dim} {name}")
    names = complex_.names or tuple("d" for _ in complex_.differentials)
    for d, kind in zip(complex_.differentials, names):
        name = f"{kind}_{_file_label(d.source.label)}.txt"
        _write(directory / name, export_matrix(d.matrix))
        written.append(directory / name)
        manifest.append(f"map {kind} {d.source.label} {d.target.label} {name}")
    _write(directory / "manifest.txt", "\n".join(manifest) + "\n")
    written.append(directory / "manifest.txt")
    return written
