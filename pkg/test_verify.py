"""
定理检验模块测试
"""
from fractions import Fraction

import pytest

from combinatorics import Subset
from complexes import ChainComplex, build_inverted_koszul
from config import Config
from exact_linalg import ExactMatrix, FieldSpec
from multilinear import BasedSpace, LinearMapOnBasis
from verify import (
    bar_comparison,
    cohomology,
    equivariance_check,
    euler_identity,
    ext_check,
    ext_dims,
    ext_table,
    hilbert_identity,
    hilbert_series,
    koszul_exactness,
    laplace_expansion,
    laplace_spot_checks,
    square_zero,
    verify_exactness,
)

Q = FieldSpec.rationals()
F2 = FieldSpec.prime_field(2)
F3 = FieldSpec.prime_field(3)

# n ≤ 4, t ≤ 6 且 n^t ≤ 4096
GRID = [(n, t) for n in range(1, 5) for t in range(1, 7) if n ** t <= 4096]


def test_cohomology_of_truncated_complex():
    report = cohomology(build_inverted_koszul(2, 2, with_projection=False))
    assert report.dims == (0, 3)
    assert report.at(2) == 3
    assert report.at(7) == 0
    assert not report.is_exact


def test_cohomology_rejects_non_complex():
    space = BasedSpace("X", (Subset((1,), 1),), "wedge", 1)
    identity = LinearMapOnBasis(space, space, ExactMatrix.identity(1, Q))
    with pytest.raises(ValueError):
        cohomology(ChainComplex("bad", (space, space, space), (identity, identity)))


@pytest.mark.parametrize("field_spec", [Q, F2, F3], ids=lambda f: f.code)
def test_exactness_grid(field_spec):
    for n, t in GRID:
        outcome = verify_exactness(n, t, field_spec)
        assert outcome.passed, outcome.details
        assert outcome.status == "PASS"


@pytest.mark.parametrize("field_spec", [Q, F2, F3], ids=lambda f: f.code)
def test_square_zero_grid(field_spec):
    for n, t in GRID:
        assert square_zero(n, t, field_spec).passed


def test_koszul_exactness_grid():
    for n in range(1, 5):
        for t in range(1, 5):
            outcome = koszul_exactness(n, t)
            assert outcome.passed, outcome.details


def test_euler_identity():
    outcome = euler_identity(2, 4)
    assert outcome.passed
    assert "dims=[0, 1, 12, 16]" in outcome.details
    for n in range(1, 5):
        for t in range(1, 7):
            assert euler_identity(n, t).passed
    with pytest.raises(ValueError):
        euler_identity(2, 0)


def test_hilbert_series():
    series = hilbert_series(2, 4)
    assert series.coefficients == tuple(Fraction(k) for k in (1, 2, 3, 4, 5))
    assert series.mode == "dimension"
    at_point = hilbert_series(1, 3, point=(2,))
    assert at_point.coefficients == (1, 2, 4, 8)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hilbert_identity(n):
    outcome = hilbert_identity(n)
    assert outcome.passed, outcome.details
    assert outcome.params["truncation"] == Config.HILBERT_TRUNCATION


def test_laplace_expansion_examples():
    assert laplace_expansion([[1, 2], [3, 4]], 1) == -2
    gram = [[2, 0, 1], [1, 3, 0], [0, 1, 4]]
    assert laplace_expansion(gram, 1) == 25
    assert laplace_expansion(gram, 2) == 25
    with pytest.raises(ValueError):
        laplace_expansion(gram, 3)


def test_laplace_spot_checks():
    assert laplace_spot_checks(3, 3, 20, seed=11) == []
    assert laplace_spot_checks(2, 4, 10, seed=11) == []


@pytest.mark.parametrize("n, t", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)])
def test_bar_comparison(n, t):
    outcome = bar_comparison(n, t, spot_checks=50, seed=3)
    assert outcome.passed, outcome.details
    assert outcome.params["seed"] == 3


def test_bar_comparison_over_f2():
    assert bar_comparison(2, 2, F2, spot_checks=5).passed


def test_bar_comparison_requires_t_at_least_two():
    with pytest.raises(ValueError):
        bar_comparison(2, 1)


@pytest.mark.parametrize("field_spec", [Q, F2], ids=lambda f: f.code)
def test_ext_dims(field_spec):
    for n in (2, 3):
        for t in range(0, 5):
            expected = {2: [1, 2, 3, 4, 5], 3: [1, 3, 6, 10, 15]}[n][t]
            assert ext_dims(n, t, field_spec) == expected


def test_ext_table_is_diagonal():
    assert ext_table(2, 3) == {1: 0, 2: 0, 3: 4}
    assert ext_check(3, 3).passed
    with pytest.raises(ValueError):
        ext_dims(2, -1)


def test_equivariance_check():
    for n in (2, 3):
        for t in (2, 3, 4):
            outcome = equivariance_check(n, t, trials=20, seed=7)
            assert outcome.passed, outcome.details
    assert equivariance_check(2, 3, trials=2, seed=5, field_spec=F3).passed


def test_equivariance_is_deterministic():
    first = equivariance_check(2, 3, trials=2, seed=99)
    second = equivariance_check(2, 3, trials=2, seed=99)
    assert first == second
    with pytest.raises(ValueError):
        equivariance_check(2, 3, trials=0)
