"""Schur polynomials, Wronskian tau-functions and the tau-solution of the Toda lattice.

Polynomials are sympy ``Poly`` objects over QQ in time variables t1, t2, ...;
the weight of t_k is k. Derivatives are always taken in t1.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Union

import sympy as sp
from sympy import Poly, QQ, Rational, Symbol

from toda_cells.errors import BlowUpError, DomainError, VerificationError
from toda_cells.lie import root_datum

Number = Union[int, float, Fraction, Rational]

TAU_FAMILIES = ("A", "B", "C", "G")


def time_symbol(k: int) -> Symbol:
    return Symbol(f"t{k}")


def time_symbols(indices: Sequence[int]) -> tuple[Symbol, ...]:
    return tuple(time_symbol(k) for k in indices)


def time_index(symbol: Symbol) -> int:
    return int(symbol.name[1:])


def schur_sequence(kmax: int, gens: Sequence[Symbol]) -> list[Poly]:
    """p_0..p_kmax from k p_k = sum_i i t_i p_{k-i}; times missing from gens are 0."""
    gens = tuple(gens)
    by_index = {time_index(g): g for g in gens}
    ps = [Poly(1, *gens, domain=QQ)]
    for m in range(1, kmax + 1):
        acc = Poly(0, *gens, domain=QQ)
        for i in range(1, m + 1):
            if i in by_index:
                acc += Poly(i * by_index[i], *gens, domain=QQ) * ps[m - i]
        ps.append(acc * Rational(1, m))
    return ps


@lru_cache(maxsize=None)
def schur_p(k: int, nvars: Optional[int] = None) -> Poly:
    """Complete homogeneous Schur polynomial p_k in t1..t_nvars (default t1..t_k)."""
    if k < 0:
        raise DomainError(f"Schur index must be nonnegative, got {k}")
    n = max(nvars or k, 1)
    return schur_sequence(k, time_symbols(range(1, n + 1)))[k]


def wronskian(fs: Sequence[Poly]) -> Poly:
    """det[d^r f_c / dt1^r] for r, c = 0..n-1."""
    if not fs:
        raise DomainError("Wronskian of an empty list")
    gens = fs[0].gens
    t1 = gens[0]
    n = len(fs)
    columns = []
    for f in fs:
        derivs = [f]
        for _ in range(n - 1):
            derivs.append(derivs[-1].diff(t1))
        columns.append(derivs)
    if n == 1:
        return fs[0]
    matrix = sp.Matrix(n, n, lambda r, c: columns[c][r].as_expr())
    det = sp.expand(matrix.det(method="berkowitz"))
    return Poly(det, *gens, domain=QQ)


@lru_cache(maxsize=None)
def schur_pbar(k: int, nvars: Optional[int] = None) -> Poly:
    """p-bar_k = ||p_1, ..., p_k||, the elementary symmetric function."""
    if k < 0:
        raise DomainError(f"Schur index must be nonnegative, got {k}")
    n = max(nvars or k, 1)
    gens = time_symbols(range(1, n + 1))
    if k == 0:
        return Poly(1, *gens, domain=QQ)
    ps = schur_sequence(k, gens)
    return wronskian(ps[1 : k + 1])


def _hankel_taus(n: int, count: int, gens: Sequence[Symbol]) -> list[Poly]:
    """||p_n, ..., p_{n-k}|| for k = 0..count-1."""
    ps = schur_sequence(n, gens)
    return [wronskian([ps[n - j] for j in range(k + 1)]) for k in range(count)]


@dataclass
class TauSystem:
    """tau_1..tau_l of one family, with the G2 quadratic constraint when present."""

    family: str
    rank: int
    gens: tuple[Symbol, ...]
    taus: list[Poly]
    constraint: Optional[Poly] = None
    cartan: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(time_index(g) for g in self.gens)


def _positive_sqrt(poly: Poly) -> Poly:
    """Square root of the factor part, scaled by the rational part of sqrt(content).

    The content need not be a rational square (B3 has 1/(2 * 720^2)); the
    leftover irrational factor is a constant and moves into a_l^0.
    """
    coeff, factors = poly.factor_list()
    if coeff <= 0:
        raise VerificationError(f"{poly.as_expr()} is not a square: content {coeff}")
    scale, _ = sp.sqrt(coeff).as_coeff_Mul()
    result = Poly(scale, *poly.gens, domain=QQ)
    for f, e in factors:
        if e % 2:
            raise VerificationError(f"{poly.as_expr()} is not a square")
        result *= f ** (e // 2)
    leading = Poly(result.as_expr(), *reversed(poly.gens)).LC()
    return -result if leading < 0 else result


@lru_cache(maxsize=None)
def tau_system(family: str, rank: int) -> TauSystem:
    """Wronskian tau-functions of types A_l, B_l, C_l and G2.

    Raises:
        DomainError: For other families or invalid ranks.
    """
    if family not in TAU_FAMILIES:
        raise DomainError(
            f"tau-functions are constructed for A, B, C and G2 only, not {family}"
        )
    datum = root_datum(family, rank)
    l = rank
    if family == "A":
        gens = time_symbols(range(1, l + 1))
        taus = _hankel_taus(l, l, gens)
        return TauSystem(family, l, gens, taus, cartan=datum.cartan)
    if family == "C":
        gens = time_symbols(range(1, 2 * l, 2))
        taus = _hankel_taus(2 * l - 1, l, gens)
        return TauSystem(family, l, gens, taus, cartan=datum.cartan)
    if family == "B":
        gens = time_symbols(range(1, 2 * l, 2))
        dets = _hankel_taus(2 * l, l, gens)
        taus = dets[:-1] + [_positive_sqrt(-dets[-1])]
        return TauSystem(family, l, gens, taus, cartan=datum.cartan)

    gens = time_symbols((1, 3, 5))
    dets = _hankel_taus(6, 3, gens)
    t1, t3, t5 = gens
    constraint = Poly(
        (dets[2] + dets[0] ** 2).as_expr(), t5, domain=QQ.poly_ring(t1, t3)
    )
    return TauSystem(family, 2, gens, dets[:2], constraint=constraint, cartan=datum.cartan)


def tau_bar_system(l: int) -> list[Poly]:
    """tau-bar_{k+1} = ||pbar_l, ..., pbar_{k+1}|| for k = 0..l-1."""
    gens = time_symbols(range(1, l + 1))
    pbars = [schur_pbar(j, l) for j in range(l + 1)]
    pbars = [Poly(p.as_expr(), *gens, domain=QQ) for p in pbars]
    return [wronskian([pbars[j] for j in range(l, k, -1)]) for k in range(l)]


def weighted_degrees(poly: Poly, weights: Sequence[int]) -> set[int]:
    return {sum(w * e for w, e in zip(weights, m)) for m in poly.monoms()}


def _denominator(system: TauSystem, j: int) -> Poly:
    one = Poly(1, *system.gens, domain=QQ)
    out = one
    for k, tau in enumerate(system.taus):
        c = system.cartan[j][k]
        if k != j and c:
            out *= tau ** (-c)
    return out


def solution_constants(system: TauSystem) -> list[Rational]:
    """a_j^0 with (ln tau_j)'' = a_j^0 prod_k tau_k^(-C_jk).

    Raises:
        VerificationError: If some ratio is not a constant.
    """
    if system.constraint is not None:
        raise DomainError("G2 tau-functions are constrained; no closed solution")
    t1 = system.gens[0]
    out = []
    for j, tau in enumerate(system.taus):
        d1 = tau.diff(t1)
        lhs = tau * tau.diff((t1, 2)) - d1**2
        q, r = lhs.div(_denominator(system, j))
        if not r.is_zero or not q.is_ground:
            raise VerificationError(
                f"{system.family}{system.rank}: tau_{j + 1} fails the bilinear identity"
            )
        out.append(Rational(q.LC()) if not q.is_zero else Rational(0))
    return out


def check_bilinear(l: int) -> list[Rational]:
    """c_j with tau_j tau_j'' - tau_j'^2 = c_j tau_{j-1} tau_{j+1} in type A_l."""
    if l < 1:
        raise DomainError(f"Rank must be positive, got {l}")
    return solution_constants(tau_system("A", l))


def tau_axis_coefficient(l: int, k: int) -> Rational:
    """Coefficient of t1^(k(l-k+1)) in tau_k(t1, 0, ..., 0)."""
    value = Rational((-1) ** (k * (k - 1) // 2))
    for j in range(1, k + 1):
        value *= Rational(factorial(k - j), factorial(l - k + j))
    return value


def axis_taus(l: int) -> list[Poly]:
    """tau_1..tau_l restricted to the t1-axis."""
    return _hankel_taus(l, l, (time_symbol(1),))


def multiplicity_profile(l: int) -> list[int]:
    """Lowest t1-degree of tau_k(t1, 0, ..., 0), k = 1..l.

    Raises:
        VerificationError: If some tau_k vanishes on the axis or its order is
            not k(l-k+1).
    """
    profile = []
    for k, tau in enumerate(axis_taus(l), start=1):
        if tau.is_zero:
            raise VerificationError(f"tau_{k} vanishes identically on the t1-axis")
        order = min(m[0] for m in tau.monoms())
        if order != k * (l - k + 1):
            raise VerificationError(
                f"tau_{k} of A{l} vanishes to order {order}, expected {k * (l - k + 1)}"
            )
        profile.append(order)
    return profile


def divisor_curve_check(l: int) -> bool:
    """t_k = s^k/k kills tau_2..tau_l and leaves tau_1 = +-s^l."""
    system = tau_system("A", l)
    s = Symbol("s")
    substitution = {g: s ** time_index(g) / time_index(g) for g in system.gens}
    values = [sp.expand(tau.as_expr().subs(substitution)) for tau in system.taus]
    first = values[0]
    return all(v == 0 for v in values[1:]) and sp.expand(first**2 - s ** (2 * l)) == 0


def check_toda_equations(system: TauSystem) -> bool:
    """b_j' = a_j and a_j' = -(sum_k C_jk b_k) a_j for the tau-solution."""
    t1 = system.gens[0]
    a0 = solution_constants(system)
    taus = [tau.as_expr() for tau in system.taus]
    b = [sp.diff(tau, t1) / tau for tau in taus]
    a = []
    for j in range(system.rank):
        value = a0[j]
        for k, tau in enumerate(taus):
            value *= tau ** (-system.cartan[j][k])
        a.append(value)
    for j in range(system.rank):
        if sp.cancel(sp.diff(b[j], t1) - a[j]) != 0:
            return False
        drift = sum(system.cartan[j][k] * b[k] for k in range(system.rank))
        if sp.cancel(sp.diff(a[j], t1) + drift * a[j]) != 0:
            return False
    return True


def _exact(value: Number) -> Rational:
    if isinstance(value, float):
        return Rational(str(value))
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    return Rational(value)


def toda_solution_at(
    system: TauSystem,
    point: Sequence[Number],
    a0: Optional[Sequence[Number]] = None,
) -> tuple[list[Rational], list[Rational]]:
    """(a_j, b_j) of the tau-solution at a point of the time variables.

    Args:
        system: tau-functions of type A, B or C.
        point: values of system.gens, in order.
        a0: the constants a_j^0; defaults to the ones making the Toda
            equations hold (the c_j of check_bilinear in type A).

    Raises:
        BlowUpError: If some tau_k vanishes at the point.
    """
    if len(point) != len(system.gens):
        raise DomainError(
            f"Point has {len(point)} coordinates, expected {len(system.gens)}"
        )
    constants = [_exact(c) for c in a0] if a0 is not None else solution_constants(system)
    values = [_exact(x) for x in point]
    t1 = system.gens[0]
    taus = []
    for k, tau in enumerate(system.taus, start=1):
        value = tau(*values)
        if value == 0:
            raise BlowUpError(k, tuple(values))
        taus.append(value)
    b = [tau.diff(t1)(*values) / taus[j] for j, tau in enumerate(system.taus)]
    a = []
    for j in range(system.rank):
        value = constants[j]
        for k, tau_value in enumerate(taus):
            value *= tau_value ** (-system.cartan[j][k])
        a.append(sp.nsimplify(value))
    return a, [sp.nsimplify(v) for v in b]


def format_poly(poly: Poly) -> str:
    """Canonical text: weighted degree descending, then exponents lexicographic."""
    weights = [time_index(g) for g in poly.gens]
    names = [g.name for g in poly.gens]
    terms = sorted(
        poly.terms(),
        key=lambda t: (-sum(w * e for w, e in zip(weights, t[0])), [-e for e in t[0]]),
    )
    if not terms:
        return "0"
    pieces = []
    for index, (monom, coeff) in enumerate(terms):
        coeff = Rational(coeff)
        factors = [
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, monom) if e
        ]
        magnitude = abs(coeff)
        body = "*".join(([] if magnitude == 1 and factors else [str(magnitude)]) + factors)
        if index == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(pieces)
