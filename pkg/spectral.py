"""
谱序列模块 - 截断复形按首因子次数 i_1 滤链后的 E₀ / E₁ / E₂ 页及其检验
"""
import sys
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Mapping, Tuple

from combinatorics import Subset
from complexes import (
    delta_or_zero,
    graded_identification,
    graded_piece,
    koszul_slice,
    one_tensor_minus_delta,
)
from config import Config
from exact_linalg import ExactMatrix, FieldSpec, multiply, rank
from multilinear import RATIONALS, BasedSpace, Monomial, TensorWord, build_T, sym_basis, sym_tensor_space
from verify import CheckOutcome


@dataclass(frozen=True)
class SpectralPage:
    """第 index 页：dims[(f, p)] 为该位置的维数，differentials[(f, p)] 为从该位置出发的微分矩阵"""

    index: int
    dims: Mapping[Tuple[int, int], int]
    differentials: Mapping[Tuple[int, int], ExactMatrix]

    def nonzero_positions(self) -> List[Tuple[int, int]]:
        return sorted(pos for pos, dim in self.dims.items() if dim)


def _top_projection(n: int, t: int, f: int, space: BasedSpace, field_spec: FieldSpec) -> ExactMatrix:
    """1 ⊗ π：把层次 f、其余因子全为一次的词 (A, e_{b_1}, ...) 送到 ∧^f ⊗ S^{t-f}；其余词送到 0"""
    model = sym_tensor_space(n, f, t - f)
    columns = []
    for word in space.basis:
        head, rest = word.factors[0], word.factors[1:]
        if len(head) == f and all(len(factor) == 1 for factor in rest):
            monomial = Monomial.from_indices([factor.elements[0] for factor in rest], n)
            columns.append({model.index_of((head, monomial)): 1})
        else:
            columns.append({})
    return ExactMatrix.from_columns(model.dim, columns, field_spec)


def _lift(n: int, t: int, f: int, field_spec: FieldSpec) -> ExactMatrix:
    """∧^f ⊗ S^{t-f} → T_t^{t-f+1}：单项式取有序词 e_{a_1} ⊗ ... ⊗ e_{a_s}（a_1 ≤ ... ≤ a_s）作代表"""
    model = sym_tensor_space(n, f, t - f)
    space = build_T(n, t, t - f + 1)
    columns = []
    for head, monomial in model.basis:
        word = TensorWord((head,) + tuple(Subset((a,), n) for a in monomial.sorted_word()))
        columns.append({space.index_of(word): 1})
    return ExactMatrix.from_columns(space.dim, columns, field_spec)


def _column_cohomology(n: int, t: int, f: int, field_spec: FieldSpec) -> Dict[int, int]:
    dims = {p: graded_piece(n, t, f, p, field_spec)[0].dim for p in range(1, t + 1)}
    ranks = {p: rank(graded_piece(n, t, f, p, field_spec)[1].matrix) for p in range(0, t + 1)}
    return {p: dims[p] - ranks[p] - ranks[p - 1] for p in range(1, t + 1)}


def spectral_pages(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> Tuple[SpectralPage, SpectralPage, SpectralPage]:
    """
    计算 E₀、E₁、E₂ 三页

    Args:
        n: 维数
        t: 总次数 t ≥ 2
        field_spec: 系数域

    Returns:
        (E₀, E₁, E₂)：E₀ 为分次块及 d₀；E₁ 维数由各列的 d₀ 秩算出，
        d₁ 通过 提升 → δ → 取层次 f-1 分量 → 1⊗π 得到，定义在 ∧^f ⊗ S^{t-f} 上；
        E₂ 维数由 d₁ 的秩算出
    """
    if t < 2:
        raise ValueError(f"谱序列检验要求 t ≥ 2（t = 1 平凡），当前为 {t}")
    e0_dims: Dict[Tuple[int, int], int] = {}
    e0_maps: Dict[Tuple[int, int], ExactMatrix] = {}
    for f in range(1, t + 1):
        for p in range(1, t + 1):
            piece, d0 = graded_piece(n, t, f, p, field_spec)
            e0_dims[(f, p)] = piece.dim
            e0_maps[(f, p)] = d0.matrix

    e1_dims: Dict[Tuple[int, int], int] = {}
    for f in range(1, t + 1):
        for p, dim in _column_cohomology(n, t, f, field_spec).items():
            e1_dims[(f, p)] = dim

    e1_maps: Dict[Tuple[int, int], ExactMatrix] = {}
    for f in range(t, 1, -1):
        p = t - f + 1
        full = delta_or_zero(n, t, p, field_spec)
        project = _top_projection(n, t, f - 1, full.target, field_spec)
        e1_maps[(f, p)] = multiply(project, multiply(full.matrix, _lift(n, t, f, field_spec)))

    model_dims = {f: sym_tensor_space(n, f, t - f).dim for f in range(1, t + 1)}
    e2_dims: Dict[Tuple[int, int], int] = {}
    for f in range(1, t + 1):
        p = t - f + 1
        outgoing = rank(e1_maps[(f, p)]) if (f, p) in e1_maps else 0
        incoming = rank(e1_maps[(f + 1, p - 1)]) if (f + 1, p - 1) in e1_maps else 0
        e2_dims[(f, p)] = model_dims[f] - outgoing - incoming

    return SpectralPage(0, e0_dims, e0_maps), SpectralPage(1, e1_dims, e1_maps), SpectralPage(2, e2_dims, {})


def verify_spectral(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> CheckOutcome:
    """
    检验谱序列各页：d₀ = 1 ⊗ (-δ)；E₁ 集中在 p = t-f+1 且维数为 C(n,f)·C(n+t-f-1, t-f)；
    E₁ 的模型 ∧^f ⊗ S^{t-f} 确实是顶端上同调；d₁ 与提升无关且等于 Koszul 切片的微分；
    E₂ 只在一个角上非零，维数为 dim S^t
    """
    e0, e1, e2 = spectral_pages(n, t, field_spec)
    problems = []

    for f in range(1, t + 1):
        for p in range(1, t + 1):
            _, cols = graded_identification(n, t, f, p)
            _, rows = graded_identification(n, t, f, p + 1)
            if e0.differentials[(f, p)].submatrix(rows, cols) != one_tensor_minus_delta(n, t, f, p, field_spec):
                problems.append(f"E0: d0 at (f={f}, p={p}) != 1⊗(-δ)")

    for (f, p), dim in sorted(e1.dims.items()):
        expected = comb(n, f) * comb(n + t - f - 1, t - f) if p == t - f + 1 else 0
        if dim != expected:
            problems.append(f"E1: dim at (f={f}, p={p}) = {dim}, expected {expected}")

    for f in range(1, t + 1):
        p = t - f + 1
        space = build_T(n, t, p)
        project = _top_projection(n, t, f, space, field_spec)
        _, incoming = graded_piece(n, t, f, p - 1, field_spec)
        level_words = graded_piece(n, t, f, p, field_spec)[0]
        restrict = ExactMatrix.from_columns(
            space.dim, [{space.index_of(word): 1} for word in level_words.basis], field_spec
        )
        incoming_full = multiply(restrict, incoming.matrix)
        rank_projection = rank(project)
        if rank_projection != sym_tensor_space(n, f, t - f).dim:
            problems.append(f"E1: 1⊗π at f={f} not surjective")
        if not multiply(project, incoming_full).is_zero():
            problems.append(f"E1: 1⊗π does not kill d0-boundaries at f={f}")
        if rank_projection + rank(incoming.matrix) != level_words.dim:
            problems.append(f"E1: ker(1⊗π) != im d0 at f={f}")
        if f >= 2:
            full = delta_or_zero(n, t, p, field_spec)
            lower = _top_projection(n, t, f - 1, full.target, field_spec)
            if not multiply(lower, multiply(full.matrix, incoming_full)).is_zero():
                problems.append(f"E1: d1 depends on the lift at f={f}")

    koszul = koszul_slice(n, t, field_spec)
    for f in range(t, 1, -1):
        if e1.differentials[(f, t - f + 1)] != koszul.differentials[t - f].matrix:
            problems.append(f"E1: d1 from f={f} != Koszul differential")
    for f in range(t, 2, -1):
        if not multiply(e1.differentials[(f - 1, t - f + 2)], e1.differentials[(f, t - f + 1)]).is_zero():
            problems.append(f"E1: d1∘d1 != 0 at f={f}")

    expected_corner = sym_basis(n, t).dim
    nonzero = e2.nonzero_positions()
    if nonzero != [(1, t)] or e2.dims[(1, t)] != expected_corner:
        problems.append(f"E2: nonzero entries {[(pos, e2.dims[pos]) for pos in nonzero]}, expected (1,{t}) of dim {expected_corner}")

    if Config.DEBUG:
        print(f"🔄 spectral n={n} t={t}: E1 row={[e1.dims[(f, t - f + 1)] for f in range(t, 0, -1)]} E2={nonzero}", file=sys.stderr)
    details = f"E1 row={[e1.dims[(f, t - f + 1)] for f in range(t, 0, -1)]} E2 corner={e2.dims[(1, t)]}"
    if problems:
        details += "; " + "; ".join(problems[:5])
    return CheckOutcome("spectral", {"n": n, "t": t, "field": field_spec.code}, not problems, details)
