import numpy as np
import pytest
from sympy import Poly, Rational

from toda_cells.divisor import (
    component_count,
    divisor_table,
    expected_degree,
    nemethi_matrix,
    nemethi_poly,
    sturm_interval_roots,
    sturm_real_roots,
    w_minus_count,
    x,
    y,
)
from toda_cells.errors import DomainError


def test_matrix_is_anti_triangular():
    m = nemethi_matrix(3)
    assert m[2, 2] == 0
    assert m[0, 2] == y
    assert m[2, 0] == y
    assert m[1, 1] == y
    assert m[0, 1] == x * y**2


def test_divisor_polynomial_small_ranks():
    assert nemethi_poly(2) == Poly(x - 1, x)
    assert nemethi_poly(3) == Poly(2 * x - 1, x)
    assert nemethi_poly(4) == Poly(x**2 - 3 * x + 1, x)


@pytest.mark.parametrize("l", range(2, 9))
def test_divisor_polynomial_degree(l):
    assert nemethi_poly(l).degree() == expected_degree(l)


def test_divisor_polynomial_needs_rank_two():
    with pytest.raises(DomainError):
        nemethi_poly(1)


def test_sturm_counts():
    assert sturm_real_roots(x**2 - 2) == 2
    assert sturm_real_roots(x**2 + 1) == 0
    assert sturm_real_roots((x - 1) ** 2 * (x + 3)) == 2
    assert sturm_real_roots(Poly(5, x)) == 0
    with pytest.raises(DomainError):
        sturm_real_roots(Poly(0, x))


def test_sturm_interval():
    p = Poly(x**2 - 2, x)
    assert sturm_interval_roots(p, Rational(0), Rational(2)) == 1
    assert sturm_interval_roots(p, Rational(-2), Rational(2)) == 2
    assert sturm_interval_roots(p, Rational(2), Rational(3)) == 0


@pytest.mark.parametrize("l,expected", [(2, 2), (3, 4), (4, 4), (5, 6), (6, 6)])
def test_component_count(l, expected):
    assert component_count(l) == expected
    assert w_minus_count(l, 2) == expected


def test_divisor_table():
    rows = divisor_table([2, 3, 4])
    assert [(r.l, r.degree, r.real_roots, r.components) for r in rows] == [
        (2, 1, 1, 2),
        (3, 1, 1, 4),
        (4, 2, 2, 4),
    ]


@pytest.mark.parametrize("seed", range(6))
def test_sturm_count_matches_companion_roots(seed):
    rng = np.random.default_rng(seed)
    roots = rng.choice(np.arange(-6, 7), size=int(rng.integers(0, 5)), replace=False)
    shifts = rng.integers(1, 5, size=int(rng.integers(0, 3)))
    expr = Rational(int(rng.integers(1, 4)))
    for r in roots:
        expr *= x - int(r)
    for c in shifts:
        expr *= x**2 + int(c)
    p = Poly(expr, x)
    if p.degree() > 0:
        companion = np.roots([float(c) for c in p.all_coeffs()])
        real = int(np.sum(np.abs(companion.imag) < 1e-6))
    else:
        real = 0
    assert sturm_real_roots(p) == real == len(roots)
