import pytest
import sympy as sp
from sympy import Rational

from toda_cells.errors import BlowUpError, DomainError
from toda_cells.tau import (
    axis_taus,
    check_bilinear,
    check_toda_equations,
    divisor_curve_check,
    format_poly,
    multiplicity_profile,
    schur_p,
    schur_pbar,
    solution_constants,
    tau_axis_coefficient,
    tau_bar_system,
    tau_system,
    toda_solution_at,
    weighted_degrees,
    wronskian,
)

t1, t2, t3, t5 = sp.symbols("t1 t2 t3 t5")


def _same(poly, expr) -> bool:
    return sp.expand(poly.as_expr() - expr) == 0


def test_schur_polynomials():
    assert _same(schur_p(1), t1)
    assert _same(schur_p(2), t1**2 / 2 + t2)
    assert _same(schur_p(3), t1**3 / 6 + t1 * t2 + t3)
    assert _same(schur_p(0, 2), 1)


@pytest.mark.parametrize("k", range(1, 13))
def test_schur_derivative_lowers_index(k):
    assert _same(schur_p(k, 12).diff(t1), schur_p(k - 1, 12).as_expr())


def test_elementary_schur_polynomials():
    assert _same(schur_pbar(1), t1)
    assert _same(schur_pbar(2), t1**2 / 2 - t2)
    with pytest.raises(DomainError):
        schur_pbar(-1)


def test_wronskian_needs_entries():
    with pytest.raises(DomainError):
        wronskian([])


def test_sl3_taus():
    system = tau_system("A", 2)
    assert _same(system.taus[0], t2 + t1**2 / 2)
    assert _same(system.taus[1], t2 - t1**2 / 2)


def test_c2_taus():
    system = tau_system("C", 2)
    assert system.gens == (t1, t3)
    assert _same(system.taus[0], t1**3 / 6 + t3)
    assert _same(system.taus[1], -(t1**4) / 12 + t1 * t3)


def test_b2_taus():
    system = tau_system("B", 2)
    assert _same(system.taus[0], t1**4 / 24 + t1 * t3)
    assert _same(system.taus[1], t3 - t1**3 / 12)


def test_g2_constraint():
    system = tau_system("G", 2)
    assert system.gens == (t1, t3, t5)
    assert system.constraint is not None
    assert system.constraint.degree() >= 1
    with pytest.raises(DomainError, match="constrained"):
        solution_constants(system)


def test_unsupported_family():
    with pytest.raises(DomainError, match="A, B, C and G2"):
        tau_system("D", 4)


@pytest.mark.parametrize("l", range(1, 6))
def test_taus_are_weighted_homogeneous(l):
    system = tau_system("A", l)
    for k, tau in enumerate(system.taus, start=1):
        assert weighted_degrees(tau, system.weights) == {k * (l - k + 1)}


def test_bilinear_constants():
    assert check_bilinear(1) == [-1]
    assert check_bilinear(2) == [1, -1]
    for l in (3, 4):
        constants = check_bilinear(l)
        assert len(constants) == l
        assert all(c != 0 for c in constants)
    with pytest.raises(DomainError):
        check_bilinear(0)


def test_b3_last_tau_is_rescaled_square_root():
    tau3 = tau_system("B", 3).taus[2]
    assert _same(tau3, (t1**6 - 60 * t1**3 * t3 + 720 * t1 * t5 - 720 * t3**2) / 1440)


@pytest.mark.parametrize("family,rank", [("B", 3), ("B", 4), ("C", 3), ("C", 4)])
def test_higher_rank_b_c_systems(family, rank):
    system = tau_system(family, rank)
    assert system.weights == tuple(range(1, 2 * rank, 2))
    for k, tau in enumerate(system.taus, start=1):
        if family == "C":
            degree = k * (2 * rank - k)
        elif k < rank:
            degree = k * (2 * rank - k + 1)
        else:
            degree = rank * (rank + 1) // 2
        assert weighted_degrees(tau, system.weights) == {degree}
    constants = solution_constants(system)
    assert len(constants) == rank
    assert all(c != 0 for c in constants)


@pytest.mark.parametrize("family", ["B", "C"])
def test_rank_three_tau_solution_satisfies_toda(family):
    assert check_toda_equations(tau_system(family, 3))


def test_solution_constants_b2_c2():
    assert solution_constants(tau_system("B", 2)) == [-1, Rational(-1, 2)]
    assert solution_constants(tau_system("C", 2)) == [1, -1]


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 2)])
def test_tau_solution_satisfies_toda(family, rank):
    assert check_toda_equations(tau_system(family, rank))


def test_toda_solution_at_axis_point():
    a, b = toda_solution_at(tau_system("A", 2), (1, 0))
    assert a == [-2, -2]
    assert b == [2, 2]


def test_rank_one_solution():
    a, b = toda_solution_at(tau_system("A", 1), (Rational(1, 2),))
    assert a == [-4]
    assert b == [2]


def test_solution_blows_up_on_divisor():
    with pytest.raises(BlowUpError) as excinfo:
        toda_solution_at(tau_system("A", 2), (0, 0))
    assert excinfo.value.k == 1


def test_solution_checks_point_length():
    with pytest.raises(DomainError):
        toda_solution_at(tau_system("A", 2), (1,))


@pytest.mark.parametrize("l", range(1, 7))
def test_multiplicity_profile(l):
    assert multiplicity_profile(l) == [k * (l - k + 1) for k in range(1, l + 1)]


@pytest.mark.parametrize("l", range(1, 6))
def test_axis_closed_form(l):
    for k, tau in enumerate(axis_taus(l), start=1):
        assert tau.LC() == tau_axis_coefficient(l, k)


def test_axis_coefficients_a2():
    assert tau_axis_coefficient(2, 1) == Rational(1, 2)
    assert tau_axis_coefficient(2, 2) == Rational(-1, 2)


@pytest.mark.parametrize("l", range(2, 6))
def test_divisor_curve_kills_lower_taus(l):
    assert divisor_curve_check(l)


@pytest.mark.parametrize("l", range(1, 6))
def test_dual_taus_agree_up_to_sign(l):
    for bar, tau in zip(tau_bar_system(l), tau_system("A", l).taus):
        assert _same(bar, tau.as_expr()) or _same(bar, -tau.as_expr())


def test_dual_taus_a2():
    bars = tau_bar_system(2)
    taus = tau_system("A", 2).taus
    for bar, tau in zip(bars, taus):
        assert _same(bar, -tau.as_expr())


def test_format_poly():
    a2 = tau_system("A", 2)
    assert format_poly(a2.taus[0]) == "1/2*t1^2 + t2"
    assert format_poly(a2.taus[1]) == "-1/2*t1^2 + t2"
    assert format_poly(tau_system("C", 2).taus[1]) == "-1/12*t1^4 + t1*t3"
    assert format_poly(tau_system("A", 1).taus[0]) == "t1"
