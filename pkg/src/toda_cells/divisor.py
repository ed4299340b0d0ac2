"""Real points of the Painleve divisor near the top cell of type A.

The determinant of the anti-triangular matrix of elementary Schur polynomials,
restricted to pbar_k = 0 for k >= 3 and pbar_2 = x pbar_1^2, is y^l f(x). Real
roots of f, counted exactly with Sturm chains, give the connected components.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import sympy as sp
from sympy import Poly, QQ, Rational, Symbol

from toda_cells.errors import DomainError, VerificationError
from toda_cells.lie import root_datum
from toda_cells.models import DivisorRow
from toda_cells.signs import w_minus_set

x = Symbol("x")
y = Symbol("y")


def _pbar(k: int) -> sp.Expr:
    if k == 0:
        return sp.Integer(1)
    if k == 1:
        return y
    if k == 2:
        return x * y**2
    return sp.Integer(0)


def nemethi_matrix(l: int) -> sp.Matrix:
    """Entry (r, c) is pbar_{l-r-c}, zero below the anti-diagonal of ones."""
    return sp.Matrix(l, l, lambda r, c: _pbar(l - r - c) if l - r - c >= 0 else 0)


def nemethi_poly(l: int) -> Poly:
    """The divisor polynomial f(x) with det = y^l f(x).

    Raises:
        DomainError: If l < 2.
        VerificationError: If the determinant is not divisible by y^l.
    """
    if l < 2:
        raise DomainError(f"Divisor polynomial needs l >= 2, got {l}")
    det = sp.expand(nemethi_matrix(l).det(method="berkowitz"))
    quotient, remainder = sp.div(Poly(det, y, x, domain=QQ), Poly(y**l, y, x, domain=QQ))
    if not remainder.is_zero or quotient.degree(y) != 0:
        raise VerificationError(f"det of order {l} is not y^{l} times a polynomial of x")
    return Poly(quotient.as_expr(), x, domain=QQ)


def expected_degree(l: int) -> int:
    """deg f = floor(l/2), all roots real."""
    return l // 2


def sturm_chain(p: Poly) -> list[Poly]:
    return [Poly(q.as_expr(), p.gen, domain=QQ) for q in sp.sturm(p)]


def _sign_changes(values: Iterable[Rational]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _signs_at_infinity(chain: Sequence[Poly], positive: bool) -> list[Rational]:
    out = []
    for q in chain:
        lc = q.LC()
        if not positive and q.degree() % 2:
            lc = -lc
        out.append(lc)
    return out


def sturm_real_roots(p: Poly | sp.Expr, gen: Symbol = x) -> int:
    """Number of distinct real roots, from the sign changes of a Sturm chain.

    Raises:
        DomainError: If p is the zero polynomial.
    """
    poly = p if isinstance(p, Poly) else Poly(p, gen, domain=QQ)
    if poly.is_zero:
        raise DomainError("Zero polynomial has no finite root count")
    square_free = poly.sqf_part()
    if square_free.degree() <= 0:
        return 0
    chain = sturm_chain(square_free)
    return _sign_changes(_signs_at_infinity(chain, positive=False)) - _sign_changes(
        _signs_at_infinity(chain, positive=True)
    )


def sturm_interval_roots(p: Poly, a: Rational, b: Rational) -> int:
    """Distinct real roots in (a, b]."""
    chain = sturm_chain(p.sqf_part())
    return _sign_changes(q.eval(a) for q in chain) - _sign_changes(
        q.eval(b) for q in chain
    )


def w_minus_count(l: int, k: int) -> int:
    """|W^-_[alpha_k]| of type A_l."""
    return len(w_minus_set(root_datum("A", l), {k}))


def component_count(l: int) -> int:
    """Components of the divisor through the top cell along alpha_2.

    Raises:
        VerificationError: If the Sturm count, the closed form and the Weyl
            group count disagree.
    """
    poly = nemethi_poly(l)
    roots = sturm_real_roots(poly)
    if not roots == poly.degree() == expected_degree(l):
        raise VerificationError(
            f"l={l}: {roots} real roots for a polynomial of degree {poly.degree()}"
        )
    count = 2 * (roots + l % 2)
    closed = 2 * ((l + 1) // 2)
    weyl = w_minus_count(l, 2)
    if not count == closed == weyl:
        raise VerificationError(
            f"l={l}: divisor count {count}, closed form {closed}, |W-| {weyl}"
        )
    return count


def divisor_table(ranks: Iterable[int]) -> list[DivisorRow]:
    rows = []
    for l in ranks:
        poly = nemethi_poly(l)
        rows.append(
            DivisorRow(
                l=l,
                degree=poly.degree(),
                real_roots=sturm_real_roots(poly),
                components=component_count(l),
            )
        )
    return rows
