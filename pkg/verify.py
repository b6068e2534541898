"""
定理检验模块 - 平方零、正合性、Euler/Hilbert 恒等式、bar 比较、Ext 维数、等变性
"""
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from combinatorics import Subset, dim_T_formula, enumerate_compositions, ordered_bipartitions, sign_s
from complexes import (
    ChainComplex,
    bar_dual_complex,
    bar_dual_differential,
    build_inverted_koszul,
    delta,
    delta_wedge,
    koszul_slice,
)
from config import Config
from exact_linalg import ExactMatrix, ExactScalar, FieldSpec, det, kernel_dim, multiply, rank
from multilinear import (
    RATIONALS,
    build_T,
    character,
    gl_action,
    pairing_determinant,
    projection_pi,
    sym_basis,
    wedge_basis,
    wedge_of_vectors,
)


@dataclass(frozen=True)
class DegreeCohomology:
    degree: int
    dim: int
    kernel_dim: int
    incoming_rank: int

    @property
    def cohomology_dim(self) -> int:
        return self.kernel_dim - self.incoming_rank


@dataclass(frozen=True)
class CohomologyReport:
    """逐次数的核维数、入射像的秩与上同调维数"""

    label: str
    degrees: Tuple[DegreeCohomology, ...]

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(d.cohomology_dim for d in self.degrees)

    @property
    def is_exact(self) -> bool:
        return all(d.cohomology_dim == 0 for d in self.degrees)

    def at(self, degree: int) -> int:
        for d in self.degrees:
            if d.degree == degree:
                return d.cohomology_dim
        return 0


@dataclass(frozen=True)
class CheckOutcome:
    """单项检验的结论"""

    name: str
    params: Dict[str, Any]
    passed: bool
    details: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass(frozen=True)
class SeriesOverRepRing:
    """截断到 truncation 次的形式幂级数；mode 为 dimension 或 character"""

    truncation: int
    coefficients: Tuple[Fraction, ...]
    mode: str = "dimension"
    point: Optional[Tuple[int, ...]] = field(default=None)


def default_point(n: int) -> Tuple[int, ...]:
    return tuple(range(1, n + 1))


# ---- 上同调 ----

def cohomology(complex_: ChainComplex) -> CohomologyReport:
    """
    计算复形每一项的上同调维数

    Args:
        complex_: 已通过平方零检查的复形

    Returns:
        CohomologyReport；两端用零映射补齐
    """
    violations = complex_.composition_zero_violations()
    if violations:
        raise ValueError(f"复形 {complex_.label} 在位置 {violations} 处 d∘d ≠ 0")
    ranks = [rank(d.matrix) for d in complex_.differentials]
    degrees = []
    for k, term in enumerate(complex_.terms):
        outgoing = ranks[k] if k < len(ranks) else 0
        incoming = ranks[k - 1] if k > 0 else 0
        degrees.append(DegreeCohomology(complex_.start + k, term.dim, term.dim - outgoing, incoming))
    return CohomologyReport(complex_.label, tuple(degrees))


def _params(n: int, t: int, field_spec: FieldSpec, **extra) -> Dict[str, Any]:
    params: Dict[str, Any] = {"n": n, "t": t, "field": field_spec.code}
    params.update(extra)
    return params


def square_zero(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> CheckOutcome:
    """δδ = 0、πδ = 0，且每个微分矩阵的元素都在 {-1, 0, +1} 中"""
    full = build_inverted_koszul(n, t, field_spec, with_projection=True)
    violations = full.composition_zero_violations()
    allowed = {field_spec.coerce(1), field_spec.coerce(-1)}
    bad_entries = [d.source.label for d in full.differentials if not d.matrix.entry_values() <= allowed]
    passed = not violations and not bad_entries
    details = f"products checked={max(len(full.differentials) - 1, 0)}"
    if violations:
        details += f"; nonzero products at {[full.terms[k + 1].label for k in violations]}"
    if bad_entries:
        details += f"; entries outside {{-1,0,1}} in maps from {bad_entries}"
    return CheckOutcome("square-zero", _params(n, t, field_spec), passed, details)


def verify_exactness(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> CheckOutcome:
    """
    截断复形只在最后一项有上同调且维数为 dim S^t，并且 π 诱导出到 S^t 的同构

    Args:
        n: 维数
        t: 总次数 t ≥ 1
        field_spec: 系数域
    """
    if t < 1:
        raise ValueError(f"正合性检验要求 t ≥ 1，当前为 {t}")
    truncated = build_inverted_koszul(n, t, field_spec, with_projection=False)
    report = cohomology(truncated)
    expected_top = sym_basis(n, t).dim
    problems = [f"H^{d.degree}={d.cohomology_dim}" for d in report.degrees[:-1] if d.cohomology_dim != 0]
    top = report.degrees[-1].cohomology_dim
    if top != expected_top:
        problems.append(f"top H^{t}={top} != {expected_top}")

    pi = projection_pi(n, t, field_spec)
    rank_pi = rank(pi.matrix)
    if rank_pi != expected_top:
        problems.append(f"rank π={rank_pi} != {expected_top}")
    incoming = report.degrees[-1].incoming_rank
    if t >= 2 and not multiply(pi.matrix, truncated.differentials[-1].matrix).is_zero():
        problems.append("πδ != 0")
    if kernel_dim(pi.matrix) != incoming:
        problems.append(f"dim ker π={kernel_dim(pi.matrix)} != rank δ_(t-1)={incoming}")
    if Config.DEBUG:
        print(f"🔄 exactness n={n} t={t} field={field_spec.code}: H={report.dims}", file=sys.stderr)
    details = f"cohomology={list(report.dims)} rank_pi={rank_pi}"
    if problems:
        details += "; " + ", ".join(problems)
    return CheckOutcome("exactness", _params(n, t, field_spec), not problems, details)


def koszul_exactness(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> CheckOutcome:
    """Koszul 切片是复形，且上同调只在 ∧^1 ⊗ S^{t-1} 一端、维数为 dim S^t"""
    slice_ = koszul_slice(n, t, field_spec)
    if not slice_.is_complex():
        return CheckOutcome("koszul", _params(n, t, field_spec), False, "composition of consecutive maps is nonzero")
    report = cohomology(slice_)
    expected = sym_basis(n, t).dim
    passed = all(d == 0 for d in report.dims[:-1]) and report.dims[-1] == expected
    return CheckOutcome("koszul", _params(n, t, field_spec), passed, f"cohomology={list(report.dims)} expected_end={expected}")


# ---- Euler / Hilbert 恒等式 ----

def euler_identity(n: int, t: int, point: Optional[Sequence[int]] = None) -> CheckOutcome:
    """
    Σ_p (-1)^{p-1} T_t^p + (-1)^t S^t = 0：维数形式与在对角点处的特征标形式
    """
    if t < 1:
        raise ValueError(f"Euler 恒等式要求 t ≥ 1，当前为 {t}")
    point = tuple(point) if point is not None else default_point(n)
    dims = [build_T(n, t, p).dim for p in range(1, t + 1)]
    dim_sum = sum((-1) ** (p - 1) * d for p, d in enumerate(dims, start=1)) + (-1) ** t * sym_basis(n, t).dim
    char_sum = sum(
        ((-1) ** (p - 1) * character(build_T(n, t, p), point) for p in range(1, t + 1)), Fraction(0)
    ) + (-1) ** t * character(sym_basis(n, t), point)
    passed = dim_sum == 0 and char_sum == 0
    details = f"dims={dims} dim S^t={sym_basis(n, t).dim} dimension_sum={dim_sum} character_sum={char_sum}"
    return CheckOutcome("euler", {"n": n, "t": t, "point": list(point)}, passed, details)


def _truncated_product(a: Sequence, b: Sequence, truncation: int) -> List:
    product = np.convolve(np.array(a, dtype=object), np.array(b, dtype=object))
    coefficients = list(product[: truncation + 1])
    return coefficients + [0] * (truncation + 1 - len(coefficients))


def hilbert_series(n: int, truncation: int, point: Optional[Sequence[int]] = None) -> SeriesOverRepRing:
    """S-级数 Σ_t S^t x^t：point 为 None 时取维数，否则取对角点处的特征标"""
    if point is None:
        coefficients = tuple(Fraction(sym_basis(n, t).dim) for t in range(truncation + 1))
        return SeriesOverRepRing(truncation, coefficients, "dimension", None)
    point = tuple(point)
    coefficients = tuple(character(sym_basis(n, t), point) for t in range(truncation + 1))
    return SeriesOverRepRing(truncation, coefficients, "character", point)


def _wedge_classes(n: int, point: Optional[Tuple[int, ...]]) -> List[Fraction]:
    if point is None:
        return [Fraction(wedge_basis(n, i).dim) for i in range(n + 1)]
    return [character(wedge_basis(n, i), point) for i in range(n + 1)]


def _t_class(n: int, t: int, p: int, wedge_classes: List[Fraction]) -> Fraction:
    """T_t^p 的类：对分拆求 Π [∧^{i_j}] 之和"""
    total = Fraction(0)
    for composition in enumerate_compositions(t, p, n):
        term = Fraction(1)
        for part in composition.parts:
            term *= wedge_classes[part]
        total += term
    return total


def hilbert_identity(n: int, truncation: Optional[int] = None, point: Optional[Sequence[int]] = None) -> CheckOutcome:
    """
    (Σ S^t x^t)(Σ (-1)^i ∧^i x^i) = 1 截断到 truncation 次，维数形式与特征标形式；
    并检验 (Σ_{i≥1} ∧^i x^i)^p 的 x^t 系数就是 T_t^p 的类

    Args:
        n: 维数
        truncation: 截断次数，默认 Config.HILBERT_TRUNCATION
        point: 对角取值点，默认 (1, 2, ..., n)
    """
    truncation = truncation if truncation is not None else Config.HILBERT_TRUNCATION
    if truncation < 1:
        raise ValueError(f"截断次数必须 ≥ 1，当前为 {truncation}")
    point = tuple(point) if point is not None else default_point(n)
    problems = []
    for mode_point in (None, point):
        mode = "dimension" if mode_point is None else "character"
        series = hilbert_series(n, truncation, mode_point)
        wedge = _wedge_classes(n, mode_point)
        if series.coefficients[0] != 1:
            problems.append(f"{mode}: constant term {series.coefficients[0]}")
        alternating = [(-1) ** i * c for i, c in enumerate(wedge)]
        product = _truncated_product(series.coefficients, alternating, truncation)
        if product != [1] + [0] * truncation:
            problems.append(f"{mode}: S-series times alternating wedge series = {product}")
        if mode_point is not None:
            # 用 Π(1 + x_k z) 独立核对初等对称函数
            generating = [1]
            for x in mode_point:
                generating = list(np.convolve(np.array(generating, dtype=object), np.array([1, x], dtype=object)))
            if [Fraction(v) for v in generating] != wedge:
                problems.append(f"character: wedge classes {wedge} != elementary symmetric {generating}")
        positive = [Fraction(0)] + wedge[1:]
        power = [Fraction(1)] + [Fraction(0)] * truncation
        coefficient_table: Dict[Tuple[int, int], Fraction] = {}
        for p in range(1, truncation + 1):
            power = _truncated_product(power, positive, truncation)
            for t in range(1, truncation + 1):
                coefficient_table[(t, p)] = power[t]
                expected = Fraction(dim_T_formula(n, t, p)) if mode_point is None else _t_class(n, t, p, wedge)
                if power[t] != expected:
                    problems.append(f"{mode}: [x^{t}] (Σ∧^i x^i)^{p} = {power[t]} != class of T_{t}^{p} = {expected}")
        for t in range(1, truncation + 1):
            alternating_sum = sum(((-1) ** p * coefficient_table[(t, p)] for p in range(1, t + 1)), Fraction(0))
            if alternating_sum != (-1) ** t * series.coefficients[t]:
                problems.append(f"{mode}: alternating coefficient sum at x^{t} disagrees with S^{t}")
    details = f"truncation={truncation} point={list(point)}"
    if problems:
        details += "; " + "; ".join(problems[:5])
    return CheckOutcome("hilbert", {"n": n, "truncation": truncation, "point": list(point)}, not problems, details)


# ---- bar 比较与 Ext ----

def laplace_expansion(gram: Sequence[Sequence[ExactScalar]], i1: int, field_spec: FieldSpec = RATIONALS) -> ExactScalar:
    """
    按大小为 i1、i2 的互补子式展开 det(G)：Σ_{|A| = i1} s(A,B) det(G[A, :i1]) det(G[B, i1:])
    """
    i = len(gram)
    if not 1 <= i1 <= i - 1:
        raise ValueError(f"Laplace 展开要求 1 ≤ i1 ≤ i-1，当前 i={i}, i1={i1}")
    matrix = ExactMatrix.from_dense(gram, field_spec, cols=i)
    total = field_spec.zero
    for a, b in ordered_bipartitions(Subset(tuple(range(1, i + 1)), i)):
        if len(a) != i1:
            continue
        left = det(matrix.submatrix([x - 1 for x in a], list(range(i1))))
        right = det(matrix.submatrix([x - 1 for x in b], list(range(i1, i))))
        total = field_spec.add(total, field_spec.mul(field_spec.coerce(sign_s(a, b)), field_spec.mul(left, right)))
    return total


def _pair_with_split(image: Dict[int, ExactScalar], target_basis, lam1: Dict[Subset, ExactScalar],
                     lam2: Dict[Subset, ExactScalar]) -> Fraction:
    total = Fraction(0)
    for row, value in image.items():
        word = target_basis[row]
        total += value * lam1.get(word.factors[0], 0) * lam2.get(word.factors[1], 0)
    return total


def _random_vectors(rng: np.random.Generator, count: int, n: int, bound: int) -> List[List[int]]:
    return [[int(x) for x in rng.integers(-bound, bound + 1, size=n)] for _ in range(count)]


def laplace_spot_checks(n: int, t: int, checks: int, seed: int) -> List[str]:
    """
    在随机（非基）向量上核对：⟨δα, λ̄₁⊗λ̄₂⟩ = Laplace 展开 = det(⟨v_j, v*_k⟩) = -⟨d*α, λ̄₁⊗λ̄₂⟩

    Returns:
        发现的问题列表（空表示全部通过）
    """
    i = min(t, n)
    if i < 2:
        return []
    rng = np.random.default_rng(seed)
    delta_map = delta_wedge(n, i)
    dstar_map = bar_dual_differential(n, i, 1)
    wedge_space = wedge_basis(n, i)
    delta_columns = delta_map.matrix.columns()
    dstar_columns = dstar_map.matrix.columns()
    problems = []
    for trial in range(checks):
        i1 = int(rng.integers(1, i))
        vectors = _random_vectors(rng, i, n, Config.RANDOM_ENTRY_BOUND)
        covectors = _random_vectors(rng, i, n, Config.RANDOM_ENTRY_BOUND)
        gram = [[sum(x * y for x, y in zip(v, w)) for w in covectors] for v in vectors]
        determinant = pairing_determinant(vectors, covectors)
        expansion = laplace_expansion(gram, i1)
        alpha = wedge_of_vectors(vectors, n)
        lam1 = wedge_of_vectors(covectors[:i1], n)
        lam2 = wedge_of_vectors(covectors[i1:], n)
        delta_image: Dict[int, Fraction] = {}
        dstar_image: Dict[int, Fraction] = {}
        for subset, coeff in alpha.items():
            col = wedge_space.index_of(subset)
            for row, value in delta_columns[col].items():
                delta_image[row] = delta_image.get(row, 0) + coeff * value
            for row, value in dstar_columns[col].items():
                dstar_image[row] = dstar_image.get(row, 0) + coeff * value
        via_delta = _pair_with_split(delta_image, delta_map.target.basis, lam1, lam2)
        via_dstar = _pair_with_split(dstar_image, dstar_map.target.basis, lam1, lam2)
        if not (via_delta == expansion == determinant == -via_dstar):
            problems.append(
                f"trial {trial} (i1={i1}): <δα,λ>={via_delta} laplace={expansion} det={determinant} <d*α,λ>={via_dstar}"
            )
    return problems


def ext_table(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> Dict[int, int]:
    """bar 对偶复形总次数 t 分量在每个上同调次数 p 处的维数（只用 d* 的秩）"""
    report = cohomology(bar_dual_complex(n, t, field_spec))
    return {d.degree: d.cohomology_dim for d in report.degrees}


def ext_dims(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> int:
    """Ext^t 在内次数 t 处的维数：bar 对偶复形在 p = t 处的上同调"""
    if t < 0:
        raise ValueError(f"t 必须非负，当前为 {t}")
    return ext_table(n, t, field_spec).get(t, 0)


def ext_check(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> CheckOutcome:
    table = ext_table(n, t, field_spec)
    expected = sym_basis(n, t).dim
    diagonal = table.get(t, 0)
    off_diagonal = {p: d for p, d in table.items() if p != t and d}
    passed = diagonal == expected and not off_diagonal
    details = f"ext_dim={diagonal} expected={expected} table={table}"
    return CheckOutcome("ext", _params(n, t, field_spec), passed, details)


def bar_comparison(n: int, t: int, field_spec: FieldSpec = RATIONALS,
                   spot_checks: Optional[int] = None, seed: Optional[int] = None) -> CheckOutcome:
    """
    每个 p ∈ [1, t-1] 上 d* = -δ（精确矩阵相等），外加 Laplace 展开的随机抽检，
    并交叉核对 bar 对偶复形的 Ext 维数与截断复形顶端上同调

    Args:
        n: 维数
        t: 总次数 t ≥ 2
        field_spec: 系数域（Laplace 抽检始终在有理数域上进行）
        spot_checks: 抽检次数，默认 Config.LAPLACE_SPOT_CHECKS
        seed: 随机种子，默认 Config.DEFAULT_SEED
    """
    if t < 2:
        raise ValueError(f"bar 比较要求 t ≥ 2，当前为 {t}")
    spot_checks = spot_checks if spot_checks is not None else Config.LAPLACE_SPOT_CHECKS
    seed = seed if seed is not None else Config.DEFAULT_SEED
    problems = []
    for p in range(1, t):
        dstar = bar_dual_differential(n, t, p, field_spec).matrix
        minus_delta = delta(n, t, p, field_spec).matrix.negate()
        if dstar != minus_delta:
            problems.append(f"d* != -δ at p={p}")
    problems.extend(laplace_spot_checks(n, t, spot_checks, seed))
    ext_top = ext_dims(n, t, field_spec)
    koszul_top = cohomology(build_inverted_koszul(n, t, field_spec, with_projection=False)).degrees[-1].cohomology_dim
    if ext_top != koszul_top:
        problems.append(f"Ext dim {ext_top} != top cohomology {koszul_top}")
    details = f"maps compared={t - 1} laplace checks={spot_checks} ext={ext_top}"
    if problems:
        details += "; " + "; ".join(problems[:5])
    return CheckOutcome("bar", _params(n, t, field_spec, seed=seed, spot_checks=spot_checks), not problems, details)


# ---- 等变性 ----

def random_invertible(n: int, rng: np.random.Generator, field_spec: FieldSpec = RATIONALS,
                      bound: Optional[int] = None) -> ExactMatrix:
    """元素在 [-bound, bound] 中的随机整数矩阵，不可逆时重新生成"""
    bound = bound if bound is not None else Config.RANDOM_ENTRY_BOUND
    while True:
        data = [[int(x) for x in rng.integers(-bound, bound + 1, size=n)] for _ in range(n)]
        g = ExactMatrix.from_dense(data, field_spec, cols=n)
        if det(g) != 0:
            return g


def equivariance_check(n: int, t: int, trials: Optional[int] = None, seed: Optional[int] = None,
                       field_spec: FieldSpec = RATIONALS) -> CheckOutcome:
    """
    对 trials 个随机可逆 g 检验 g∘δ = δ∘g 与 g∘π = π∘g

    Args:
        n: 维数
        t: 总次数
        trials: 随机群元素个数，默认 Config.DEFAULT_TRIALS
        seed: 随机种子，默认 Config.DEFAULT_SEED
    """
    trials = trials if trials is not None else Config.DEFAULT_TRIALS
    seed = seed if seed is not None else Config.DEFAULT_SEED
    if trials < 1:
        raise ValueError(f"trials 必须 ≥ 1，当前为 {trials}")
    rng = np.random.default_rng(seed)
    deltas = [delta(n, t, p, field_spec) for p in range(1, t)]
    pi = projection_pi(n, t, field_spec)
    problems = []
    for trial in range(trials):
        g = random_invertible(n, rng, field_spec)
        actions = {p: gl_action(g, build_T(n, t, p)).matrix for p in range(1, t + 1)}
        for p, d in enumerate(deltas, start=1):
            if multiply(actions[p + 1], d.matrix) != multiply(d.matrix, actions[p]):
                problems.append(f"trial {trial}: δ on T_{t}^{p} not equivariant")
        g_sym = gl_action(g, sym_basis(n, t)).matrix
        if multiply(g_sym, pi.matrix) != multiply(pi.matrix, actions[t]):
            problems.append(f"trial {trial}: π not equivariant")
    details = f"trials={trials} maps={len(deltas) + 1}"
    if problems:
        details += "; " + "; ".join(problems[:5])
    return CheckOutcome("equivariance", _params(n, t, field_spec, seed=seed, trials=trials), not problems, details)
