"""
多重线性代数模块 - ∧^i V、S^t V、张量积 T_t^p 的规范基，GL(V) 作用，投影 π 与行列式配对
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import prod
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

from combinatorics import Subset, enumerate_compositions, subsets
from exact_linalg import ExactMatrix, ExactScalar, FieldSpec, det, multiply

RATIONALS = FieldSpec.rationals()


@dataclass(frozen=True, order=True)
class TensorWord:
    """张量基元素 e_{A_1} ⊗ ... ⊗ e_{A_p}"""

    factors: Tuple[Subset, ...]

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(factor) for factor in self.factors)

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    @property
    def partial_degree(self) -> int:
        return len(self.factors)

    def render(self) -> str:
        return "|".join(factor.render() for factor in self.factors)


@dataclass(frozen=True, order=True)
class Monomial:
    """S^t 的单项式基元素，以指数向量 (m_1, ..., m_n) 存储"""

    exponents: Tuple[int, ...]

    def __post_init__(self):
        if any(m < 0 for m in self.exponents):
            raise ValueError(f"单项式指数必须非负: {self.exponents}")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @classmethod
    def from_indices(cls, indices: Sequence[int], n: int) -> "Monomial":
        exponents = [0] * n
        for a in indices:
            exponents[a - 1] += 1
        return cls(tuple(exponents))

    def times(self, a: int) -> "Monomial":
        """乘以 e_a"""
        exponents = list(self.exponents)
        exponents[a - 1] += 1
        return Monomial(tuple(exponents))

    def sorted_word(self) -> Tuple[int, ...]:
        return tuple(k for k, m in enumerate(self.exponents, start=1) for _ in range(m))

    def render(self) -> str:
        return " ".join(str(m) for m in self.exponents)


@dataclass(frozen=True)
class BasedSpace:
    """带有序基的向量空间；kind ∈ {wedge, sym, tensor, pair}"""

    label: str
    basis: Tuple[Any, ...]
    kind: str
    n: int
    _index: Mapping[Any, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {element: k for k, element in enumerate(self.basis)}
        if len(index) != len(self.basis):
            raise ValueError(f"空间 {self.label} 的基元素有重复")
        object.__setattr__(self, "_index", index)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index_of(self, element: Any) -> int:
        return self._index[element]

    def __contains__(self, element: Any) -> bool:
        return element in self._index


@dataclass(frozen=True)
class LinearMapOnBasis:
    """基上的线性映射：matrix 的第 j 列为源空间第 j 个基元素的像"""

    source: BasedSpace
    target: BasedSpace
    matrix: ExactMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(
                f"映射 {self.source.label} → {self.target.label} 的矩阵尺寸 {self.matrix.shape} "
                f"与 ({self.target.dim}, {self.source.dim}) 不符"
            )

    def __matmul__(self, other: "LinearMapOnBasis") -> "LinearMapOnBasis":
        """复合 self ∘ other"""
        if other.target.basis != self.source.basis:
            raise ValueError(f"无法复合 {self.source.label} ← {other.target.label}")
        return LinearMapOnBasis(other.source, self.target, multiply(self.matrix, other.matrix))


def render_element(element: Any) -> str:
    if isinstance(element, tuple):
        return "⊗".join(render_element(part) for part in element)
    return element.render()


@lru_cache(maxsize=None)
def wedge_basis(n: int, i: int) -> BasedSpace:
    """∧^i V 的基：所有 i 元子集，字典序；i 不在 [0, n] 时为零空间"""
    if n < 1:
        raise ValueError(f"n 必须 ≥ 1，当前为 {n}")
    return BasedSpace(f"∧^{i}", tuple(subsets(n, i)), "wedge", n)


@lru_cache(maxsize=None)
def sym_basis(n: int, t: int) -> BasedSpace:
    """
    S^t V 的基：t 次单项式

    顺序为有序下标词 a_1 ≤ ... ≤ a_t 的字典序（n = 2, t = 2 时为 e₁², e₁e₂, e₂²）。
    """
    if n < 1:
        raise ValueError(f"n 必须 ≥ 1，当前为 {n}")
    if t < 0:
        return BasedSpace(f"S^{t}", (), "sym", n)
    basis = tuple(Monomial.from_indices(word, n) for word in combinations_with_replacement(range(1, n + 1), t))
    return BasedSpace(f"S^{t}", basis, "sym", n)


@lru_cache(maxsize=None)
def build_T(n: int, t: int, p: int) -> BasedSpace:
    """
    构造 T_t^p = ⊕ ∧^{i_1} ⊗ ... ⊗ ∧^{i_p}

    Args:
        n: 维数 n ≥ 1
        t: 总次数 t ≥ 0
        p: 部分次数 p ≥ 0

    Returns:
        基为所有张量词的空间：分拆按字典序，块内按子集的乘积字典序；T_0^0 = k
    """
    if n < 1 or t < 0 or p < 0:
        raise ValueError(f"参数非法: n={n}, t={t}, p={p}")
    basis: List[TensorWord] = []
    for composition in enumerate_compositions(t, p, n):
        factor_bases = [subsets(n, part) for part in composition.parts]
        basis.extend(TensorWord(tuple(factors)) for factors in product(*factor_bases))
    return BasedSpace(f"T_{t}^{p}", tuple(basis), "tensor", n)


def tensor_wedge_space(n: int, f: int, inner: BasedSpace) -> BasedSpace:
    """∧^f ⊗ X，基为 (子集, X 的基元素) 的乘积字典序"""
    basis = tuple((a, element) for a in subsets(n, f) for element in inner.basis)
    return BasedSpace(f"∧^{f}⊗{inner.label}", basis, "pair", n)


def sym_tensor_space(n: int, f: int, s: int) -> BasedSpace:
    """∧^f ⊗ S^s"""
    return tensor_wedge_space(n, f, sym_basis(n, s))


# ---- GL(V) 作用 ----

def _check_group_element(g: ExactMatrix, n: int):
    if g.shape != (n, n):
        raise ValueError(f"群元素必须是 {n}×{n} 矩阵，当前为 {g.shape}")


def _wedge_columns(g: ExactMatrix, n: int, i: int) -> List[Dict[Subset, ExactScalar]]:
    field_ = g.field
    result = []
    for a in subsets(n, i):
        column = {}
        for b in subsets(n, i):
            value = det(g.submatrix([x - 1 for x in b], [x - 1 for x in a])) if i else field_.one
            if value != 0:
                column[b] = value
        result.append(column)
    return result


def _sym_image(g: ExactMatrix, monomial: Monomial) -> Dict[Monomial, ExactScalar]:
    """把 e_k ↦ Σ_j g[j,k] e_j 代入单项式后展开"""
    field_ = g.field
    n = len(monomial.exponents)
    columns = g.columns()
    poly: Dict[Monomial, ExactScalar] = {Monomial((0,) * n): field_.one}
    for k in monomial.sorted_word():
        expanded: Dict[Monomial, ExactScalar] = {}
        for term, coeff in poly.items():
            for j, g_value in columns[k - 1].items():
                key = term.times(j + 1)
                expanded[key] = field_.add(expanded.get(key, field_.zero), field_.mul(coeff, g_value))
        poly = {key: value for key, value in expanded.items() if value != 0}
    return poly


def gl_action(g: ExactMatrix, space: BasedSpace) -> LinearMapOnBasis:
    """
    g ∈ GL(V) 在基空间上诱导的作用

    Args:
        g: n×n 可逆矩阵，约定 g e_k = Σ_j g[j,k] e_j
        space: wedge / sym / tensor 类型的空间

    Returns:
        诱导映射：∧^i 上为 i×i 子式，张量上逐因子作用，S^t 上为代入展开
    """
    n = space.n
    _check_group_element(g, n)
    field_ = g.field
    columns: List[Dict[int, ExactScalar]] = []
    if space.kind == "wedge":
        # i > n 时 ∧^i 为零空间，作用为 0×0 矩阵
        if space.dim:
            for image in _wedge_columns(g, n, len(space.basis[0])):
                columns.append({space.index_of(b): v for b, v in image.items()})
    elif space.kind == "sym":
        for monomial in space.basis:
            columns.append({space.index_of(m): v for m, v in _sym_image(g, monomial).items()})
    elif space.kind == "tensor":
        wedge_cache: Dict[int, Dict[Subset, Dict[Subset, ExactScalar]]] = {}
        for word in space.basis:
            per_factor = []
            for factor in word.factors:
                i = len(factor)
                if i not in wedge_cache:
                    wedge_cache[i] = dict(zip(subsets(n, i), _wedge_columns(g, n, i)))
                per_factor.append(list(wedge_cache[i][factor].items()))
            column: Dict[int, ExactScalar] = {}
            for choice in product(*per_factor):
                image = TensorWord(tuple(b for b, _ in choice))
                value = field_.one
                for _, coeff in choice:
                    value = field_.mul(value, coeff)
                row = space.index_of(image)
                column[row] = field_.add(column.get(row, field_.zero), value)
            columns.append(column)
    else:
        raise ValueError(f"空间 {space.label} 的类型 {space.kind} 不支持 GL 作用")
    return LinearMapOnBasis(space, space, ExactMatrix.from_columns(space.dim, columns, field_))


def projection_pi(n: int, t: int, field_spec: FieldSpec = RATIONALS) -> LinearMapOnBasis:
    """自然投影 π: V^{⊗t} = T_t^t → S^t，把 e_{a_1} ⊗ ... ⊗ e_{a_t} 映到对应单项式"""
    if t < 1:
        raise ValueError(f"π 要求 t ≥ 1，当前为 {t}")
    source = build_T(n, t, t)
    target = sym_basis(n, t)
    columns = [
        {target.index_of(Monomial.from_indices([factor.elements[0] for factor in word.factors], n)): 1}
        for word in source.basis
    ]
    return LinearMapOnBasis(source, target, ExactMatrix.from_columns(target.dim, columns, field_spec))


# ---- 行列式配对 ----

def det_pairing(alpha: Subset, dual_word: Subset, field_spec: FieldSpec = RATIONALS) -> ExactScalar:
    """⟨e_A, e*_B⟩ = det(⟨e_{a_j}, e*_{b_k}⟩)：A = B 时为 1，否则为 0"""
    if len(alpha) != len(dual_word):
        raise ValueError(f"配对两侧次数不一致: {len(alpha)} vs {len(dual_word)}")
    if alpha.n != dual_word.n:
        raise ValueError(f"配对两侧环境维数不一致: {alpha.n} vs {dual_word.n}")
    return field_spec.one if alpha == dual_word else field_spec.zero


def pairing_determinant(vectors: Sequence[Sequence[Union[int, Fraction]]],
                        covectors: Sequence[Sequence[Union[int, Fraction]]],
                        field_spec: FieldSpec = RATIONALS) -> ExactScalar:
    """一般情形：⟨v_1 ∧ ... ∧ v_i, v*_1 ∧ ... ∧ v*_i⟩ = det(⟨v_j, v*_k⟩)"""
    if len(vectors) != len(covectors):
        raise ValueError(f"向量与余向量个数不一致: {len(vectors)} vs {len(covectors)}")
    gram = [[sum(x * y for x, y in zip(v, w)) for w in covectors] for v in vectors]
    return det(ExactMatrix.from_dense(gram, field_spec, cols=len(covectors)))


def wedge_of_vectors(vectors: Sequence[Sequence[Union[int, Fraction]]], n: int,
                     field_spec: FieldSpec = RATIONALS) -> Dict[Subset, ExactScalar]:
    """v_1 ∧ ... ∧ v_i 在子集基下的坐标：e_A 的系数为坐标矩阵在行 A 上的子式"""
    i = len(vectors)
    coords = ExactMatrix.from_dense([[v[row] for v in vectors] for row in range(n)], field_spec, cols=i)
    result = {}
    for a in subsets(n, i):
        value = det(coords.submatrix([x - 1 for x in a], list(range(i)))) if i else field_spec.one
        if value != 0:
            result[a] = value
    return result


# ---- 特征标与导出 ----

def _weight(element: Any) -> Tuple[int, ...]:
    if isinstance(element, Subset):
        return element.elements
    if isinstance(element, TensorWord):
        return tuple(a for factor in element.factors for a in factor.elements)
    if isinstance(element, Monomial):
        return element.sorted_word()
    if isinstance(element, tuple):
        return tuple(a for part in element for a in _weight(part))
    raise TypeError(f"无法计算 {element!r} 的权")


def character(space: BasedSpace, point: Sequence[Union[int, Fraction]]) -> Fraction:
    """在对角点 diag(x_1, ..., x_n) 处求空间的环面特征标（对基逐项求和）"""
    if len(point) != space.n:
        raise ValueError(f"取值点维数 {len(point)} 与 n={space.n} 不符")
    return sum((Fraction(prod(point[a - 1] for a in _weight(element))) for element in space.basis), Fraction(0))


def export_basis(space: BasedSpace) -> str:
    """每行一个基元素：张量词写作 {a,b}|{c}，单项式写作空格分隔的指数"""
    return "".join(render_element(element) + "\n" for element in space.basis)
