"""
精确线性代数模块 - 有理数域 / 素数域上的稀疏矩阵、秩、行列式与导出格式
"""
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from config import Config

ExactScalar = Union[Fraction, int]

FIELD_CODES = {"q": None, "f2": 2, "f3": 3, "f5": 5, "f7": 7}


@dataclass(frozen=True)
class FieldSpec:
    """精确域：prime 为 None 表示有理数域 Q，否则为素数域 F_p"""

    prime: Optional[int] = None

    def __post_init__(self):
        if self.prime is not None:
            if self.prime < 2 or any(self.prime % d == 0 for d in range(2, self.prime)):
                raise ValueError(f"模数 {self.prime} 不是素数")
            if self.prime not in Config.SUPPORTED_PRIMES:
                raise ValueError(f"不支持的素数域 F_{self.prime}，可选: {Config.SUPPORTED_PRIMES}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime_field(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, code: str) -> "FieldSpec":
        """解析命令行域代码 q / f2 / f3 / f5 / f7"""
        key = code.strip().lower()
        if key not in FIELD_CODES:
            raise ValueError(f"未知的域代码 '{code}'，可选: {', '.join(FIELD_CODES)}")
        return cls(FIELD_CODES[key])

    @property
    def kind(self) -> str:
        return "rationals" if self.prime is None else "prime"

    @property
    def code(self) -> str:
        return "q" if self.prime is None else f"f{self.prime}"

    @property
    def zero(self) -> ExactScalar:
        return Fraction(0) if self.prime is None else 0

    @property
    def one(self) -> ExactScalar:
        return Fraction(1) if self.prime is None else 1

    def coerce(self, value: Union[int, Fraction]) -> ExactScalar:
        """把整数或分数转换为本域中的精确标量"""
        value = Fraction(value)
        if self.prime is None:
            return value
        if value.denominator % self.prime == 0:
            raise ValueError(f"分母 {value.denominator} 可被 {self.prime} 整除，无法约化")
        return value.numerator * pow(value.denominator, -1, self.prime) % self.prime

    def add(self, a: ExactScalar, b: ExactScalar) -> ExactScalar:
        return a + b if self.prime is None else (a + b) % self.prime

    def sub(self, a: ExactScalar, b: ExactScalar) -> ExactScalar:
        return a - b if self.prime is None else (a - b) % self.prime

    def mul(self, a: ExactScalar, b: ExactScalar) -> ExactScalar:
        return a * b if self.prime is None else (a * b) % self.prime

    def neg(self, a: ExactScalar) -> ExactScalar:
        return -a if self.prime is None else (-a) % self.prime

    def inv(self, a: ExactScalar) -> ExactScalar:
        if a == 0:
            raise ValueError("零元不可逆")
        return 1 / Fraction(a) if self.prime is None else pow(a, -1, self.prime)

    def render(self, value: ExactScalar) -> str:
        if self.prime is not None:
            return str(value)
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"


class ExactMatrix:
    """稀疏精确矩阵：entries 为 (行, 列) → 非零标量，索引从 0 开始"""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, rows: int, cols: int, entries: Mapping[Tuple[int, int], ExactScalar], field: FieldSpec):
        if rows < 0 or cols < 0:
            raise ValueError(f"矩阵尺寸必须非负: {rows}×{cols}")
        cleaned = {}
        for (i, j), value in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"矩阵索引 ({i}, {j}) 超出 {rows}×{cols}")
            value = field.coerce(value)
            if value != 0:
                cleaned[(i, j)] = value
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", MappingProxyType(cleaned))
        object.__setattr__(self, "field", field)

    def __setattr__(self, key, value):
        raise AttributeError("ExactMatrix 构造后不可修改")

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}×{self.cols}, nnz={self.nnz}, field={self.field.code})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.field) == (other.rows, other.cols, other.field) \
            and dict(self.entries) == dict(other.entries)

    __hash__ = None

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return multiply(self, other)

    def __neg__(self) -> "ExactMatrix":
        return self.negate()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    # ---- 构造 ----

    @classmethod
    def zero(cls, rows: int, cols: int, field: FieldSpec) -> "ExactMatrix":
        return cls(rows, cols, {}, field)

    @classmethod
    def identity(cls, size: int, field: FieldSpec) -> "ExactMatrix":
        return cls(size, size, {(i, i): 1 for i in range(size)}, field)

    @classmethod
    def from_accumulated(cls, rows: int, cols: int, items: Iterable[Tuple[int, int, ExactScalar]],
                         field: FieldSpec) -> "ExactMatrix":
        """累加重复位置的项后构造矩阵"""
        acc: Dict[Tuple[int, int], ExactScalar] = defaultdict(lambda: field.zero)
        for i, j, value in items:
            acc[(i, j)] = field.add(acc[(i, j)], field.coerce(value))
        return cls(rows, cols, acc, field)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, ExactScalar]], field: FieldSpec) -> "ExactMatrix":
        return cls.from_accumulated(
            rows, len(columns),
            ((i, j, value) for j, column in enumerate(columns) for i, value in column.items()),
            field,
        )

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[Union[int, Fraction]]], field: FieldSpec,
                   cols: Optional[int] = None) -> "ExactMatrix":
        rows = len(data)
        width = cols if cols is not None else (len(data[0]) if rows else 0)
        return cls(rows, width, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v != 0}, field)

    def to_dense(self) -> List[List[ExactScalar]]:
        dense = [[self.field.zero] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense

    # ---- 基本运算 ----

    def column(self, j: int) -> Dict[int, ExactScalar]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self) -> List[Dict[int, ExactScalar]]:
        result: List[Dict[int, ExactScalar]] = [dict() for _ in range(self.cols)]
        for (i, j), value in self.entries.items():
            result[j][i] = value
        return result

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}, self.field)

    def scale(self, c: Union[int, Fraction]) -> "ExactMatrix":
        c = self.field.coerce(c)
        return ExactMatrix(self.rows, self.cols, {k: self.field.mul(c, v) for k, v in self.entries.items()}, self.field)

    def negate(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, {k: self.field.neg(v) for k, v in self.entries.items()}, self.field)

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise ValueError(f"矩阵加法尺寸不匹配: {self.shape} vs {other.shape}")
        acc = dict(self.entries)
        for key, value in other.entries.items():
            acc[key] = self.field.add(acc.get(key, self.field.zero), value)
        return ExactMatrix(self.rows, self.cols, acc, self.field)

    def submatrix(self, row_index: Sequence[int], col_index: Sequence[int]) -> "ExactMatrix":
        """按给定顺序抽取行、列（可用于重排）"""
        row_pos = {r: k for k, r in enumerate(row_index)}
        col_pos = {c: k for k, c in enumerate(col_index)}
        return ExactMatrix(
            len(row_index), len(col_index),
            {(row_pos[i], col_pos[j]): v for (i, j), v in self.entries.items() if i in row_pos and j in col_pos},
            self.field,
        )

    def is_zero(self) -> bool:
        return not self.entries

    def entry_values(self) -> set:
        return set(self.entries.values())


def _check_same_field(a: ExactMatrix, b: ExactMatrix):
    if a.field != b.field:
        raise ValueError(f"矩阵所在域不一致: {a.field.code} vs {b.field.code}")


def multiply(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """
    精确矩阵乘法 a·b

    Args:
        a: 左矩阵
        b: 右矩阵，要求 a.cols == b.rows 且同域

    Returns:
        乘积矩阵
    """
    _check_same_field(a, b)
    if a.cols != b.rows:
        raise ValueError(f"矩阵乘法尺寸不匹配: {a.shape} · {b.shape}")
    field = a.field
    a_by_col: Dict[int, List[Tuple[int, ExactScalar]]] = defaultdict(list)
    for (i, k), value in a.entries.items():
        a_by_col[k].append((i, value))
    acc: Dict[Tuple[int, int], ExactScalar] = defaultdict(lambda: field.zero)
    for (k, j), b_value in b.entries.items():
        for i, a_value in a_by_col.get(k, ()):
            acc[(i, j)] = field.add(acc[(i, j)], field.mul(a_value, b_value))
    return ExactMatrix(a.rows, b.cols, acc, field)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker 积，行列索引为 (i_a, i_b) 的字典序"""
    _check_same_field(a, b)
    field = a.field
    return ExactMatrix(
        a.rows * b.rows, a.cols * b.cols,
        {
            (ia * b.rows + ib, ja * b.cols + jb): field.mul(va, vb)
            for (ia, ja), va in a.entries.items()
            for (ib, jb), vb in b.entries.items()
        },
        field,
    )


def _connected_blocks(m: ExactMatrix) -> List[List[Dict[int, ExactScalar]]]:
    """按行列二部图的连通分量把矩阵拆成互不相交的行块"""
    parent = list(range(m.rows + m.cols))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rows: Dict[int, Dict[int, ExactScalar]] = defaultdict(dict)
    for (i, j), value in m.entries.items():
        rows[i][j] = value
        ri, rj = find(i), find(m.rows + j)
        if ri != rj:
            parent[ri] = rj
    blocks: Dict[int, List[Dict[int, ExactScalar]]] = defaultdict(list)
    for i in sorted(rows):
        blocks[find(i)].append(rows[i])
    return list(blocks.values())


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    content = reduce(gcd, row.values(), 0)
    if content > 1:
        return {k: v // content for k, v in row.items()}
    return row


def _fraction_free_rank(rows: List[Dict[int, ExactScalar]]) -> int:
    """有理数域上的无分式消元：每行先化为本原整数行，消元只做整数交叉相乘"""
    pivots: Dict[int, Dict[int, int]] = {}
    for raw in rows:
        scale = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(v).denominator for v in raw.values()), 1)
        row = _primitive({k: int(Fraction(v) * scale) for k, v in raw.items()})
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                pivots[lead] = row
                break
            a, b = row[lead], pivot[lead]
            reduced = {k: b * v for k, v in row.items()}
            for k, v in pivot.items():
                w = reduced.get(k, 0) - a * v
                if w:
                    reduced[k] = w
                else:
                    reduced.pop(k, None)
            row = _primitive(reduced)
    return len(pivots)


def _modular_rank(rows: List[Dict[int, int]], p: int) -> int:
    pivots: Dict[int, Dict[int, int]] = {}
    for raw in rows:
        row = {k: v % p for k, v in raw.items() if v % p}
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                inv = pow(row[lead], -1, p)
                pivots[lead] = {k: v * inv % p for k, v in row.items()}
                break
            factor = row[lead]
            for k, v in pivot.items():
                w = (row.get(k, 0) - factor * v) % p
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)
    return len(pivots)


def rank(m: ExactMatrix) -> int:
    """
    精确秩：先按连通块拆分，再在有理数域上做无分式消元、在素数域上做普通消元

    Args:
        m: 任意精确矩阵

    Returns:
        矩阵的秩
    """
    total = 0
    for block in _connected_blocks(m):
        if m.field.prime is None:
            total += _fraction_free_rank(block)
        else:
            total += _modular_rank(block, m.field.prime)
    return total


def kernel_dim(m: ExactMatrix) -> int:
    return m.cols - rank(m)


def det(m: ExactMatrix) -> ExactScalar:
    """行列式：有理数域上用 Bareiss 无分式消元，素数域上用高斯消元"""
    if m.rows != m.cols:
        raise ValueError(f"行列式要求方阵，当前为 {m.shape}")
    field = m.field
    size = m.rows
    if size == 0:
        return field.one
    a = m.to_dense()
    sign = 1
    if field.prime is None:
        previous = Fraction(1)
        for k in range(size - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, size) if a[i][k] != 0), None)
                if swap is None:
                    return field.zero
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, size):
                for j in range(k + 1, size):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous
            previous = a[k][k]
        return sign * a[size - 1][size - 1]
    p = field.prime
    result = 1
    for k in range(size):
        pivot = next((i for i in range(k, size) if a[i][k] % p), None)
        if pivot is None:
            return 0
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        inv = pow(a[k][k], -1, p)
        result = result * a[k][k] % p
        for i in range(k + 1, size):
            factor = a[i][k] * inv % p
            if factor:
                for j in range(k, size):
                    a[i][j] = (a[i][j] - factor * a[k][j]) % p
    return sign * result % p


def reduce_mod(m: ExactMatrix, p: int) -> ExactMatrix:
    """把有理数矩阵逐项约化到 F_p"""
    if m.field.prime is not None:
        raise ValueError(f"reduce_mod 只接受有理数矩阵，当前域为 {m.field.code}")
    target = FieldSpec.prime_field(p)
    return ExactMatrix(m.rows, m.cols, {k: target.coerce(v) for k, v in m.entries.items()}, target)


def export_matrix(m: ExactMatrix) -> str:
    """按 `rows cols nnz` + `r c v`（1 起始、按 (r, c) 排序）的格式导出"""
    lines = [f"{m.rows} {m.cols} {m.nnz}"]
    for (i, j) in sorted(m.entries):
        lines.append(f"{i + 1} {j + 1} {m.field.render(m.entries[(i, j)])}")
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, field: FieldSpec) -> ExactMatrix:
    """解析 export_matrix 的输出"""
    lines = [line for line in text.split("\n") if line]
    if not lines:
        raise ValueError("矩阵文本为空")
    rows, cols, nnz = (int(x) for x in lines[0].split())
    if len(lines) - 1 != nnz:
        raise ValueError(f"矩阵文本声明 {nnz} 项，实际 {len(lines) - 1} 项")
    entries = {}
    for line in lines[1:]:
        r, c, v = line.split()
        entries[(int(r) - 1, int(c) - 1)] = Fraction(v)
    return ExactMatrix(rows, cols, entries, field)
