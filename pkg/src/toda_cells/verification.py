"""The acceptance suite behind `toda-cells verify`.

Every criterion returns (measured, expected, passed). Criteria tagged as
budgeted are skipped once the deadline, started by the first budgeted
criterion that runs, has expired.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np
import sympy as sp

from toda_cells.complex import (
    build_complex,
    connection_pattern,
    homology,
    local_complex_Q,
    schubert_variant,
    torsion_corollary_holds,
    z2_expected,
)
from toda_cells.divisor import component_count, nemethi_poly, sturm_real_roots, w_minus_count
from toda_cells.errors import TodaCellsError
from toda_cells.incidence import (
    check_d_squared,
    incidence_a_closed_form,
    top_edges,
    top_incidence,
    type_a_edge,
)
from toda_cells.lie import (
    RootDatum,
    braid_order,
    element_from_word,
    is_valid_type,
    longest_in_parabolic,
    root_datum,
    walk_cosets,
)
from toda_cells.models import AbelianGroup
from toda_cells.signs import act_word, all_minus, sign_matrix
from toda_cells.tau import (
    axis_taus,
    check_bilinear,
    divisor_curve_check,
    multiplicity_profile,
    tau_axis_coefficient,
    tau_system,
    toda_solution_at,
)
from toda_cells.toda import (
    TodaState,
    exact_rank_one,
    final_state,
    integrate,
    relative_error,
    spectrum_drift,
    tau_initial_state,
    tau_point,
)
from toda_cells.utils import Deadline, Settings, Tally, console

Outcome = tuple[str, str, bool]
Check = Callable[[Settings], Outcome]

SUITES = ("paper", "quick")


@dataclass(frozen=True)
class Criterion:
    name: str
    check: Check
    budgeted: bool = False


def _types(max_rank: int, exceptional: bool = True) -> Iterator[RootDatum]:
    for family in "ABCDEFG":
        if family in "EFG" and not exceptional:
            continue
        for rank in range(1, max_rank + 1):
            if is_valid_type(family, rank):
                if family == "E" and rank > 6:
                    continue
                yield root_datum(family, rank)


def _groups_str(groups: list[AbelianGroup]) -> str:
    return ", ".join(str(g) for g in groups)


def _homology_z(family: str, rank: int) -> list[AbelianGroup]:
    return homology(build_complex(root_datum(family, rank)), "Z")


def check_homology_a2_a3(settings: Settings) -> Outcome:
    expected = {
        2: [AbelianGroup(free=1), AbelianGroup(free=1, torsion=[2]), AbelianGroup()],
        3: [
            AbelianGroup(free=1),
            AbelianGroup(free=1, torsion=[2, 2]),
            AbelianGroup(torsion=[4]),
            AbelianGroup(),
        ],
    }
    measured = {l: _homology_z("A", l) for l in expected}
    return (
        " | ".join(_groups_str(measured[l]) for l in expected),
        " | ".join(_groups_str(expected[l]) for l in expected),
        measured == expected,
    )


def check_top_incidence_a(settings: Settings) -> Outcome:
    bad = [
        (l, k)
        for l in range(1, 11)
        for k in range(1, l + 1)
        if top_incidence(root_datum("A", l), k) != incidence_a_closed_form(l, k)
    ]
    return f"{len(bad)} mismatches", "0 mismatches", not bad


def _z2_matches(datum: RootDatum) -> bool:
    groups = homology(build_complex(datum), "Z2")
    return groups == z2_expected(datum.rank)


def check_z2_homology(settings: Settings) -> Outcome:
    bad = [d.label for d in _types(6) if not _z2_matches(d)]
    return ",".join(bad) or "all C(l,k)", "all C(l,k)", not bad


def check_z2_homology_e7(settings: Settings) -> Outcome:
    ok = _z2_matches(root_datum("E", 7))
    return "C(7,k)" if ok else "mismatch", "C(7,k)", ok


def check_e8_sampled_squares(settings: Settings) -> Outcome:
    checked = check_d_squared(
        root_datum("E", 8), sample=settings.e8_samples, seed=settings.seed
    )
    return f"{checked} squares", f"{settings.e8_samples} squares", True


def _expected_top_edges(datum: RootDatum) -> Optional[dict[int, int]]:
    family, l = datum.family, datum.rank
    if family in "BCF" or (family == "E" and l > 6):
        return {}
    if family == "D":
        return {1: 4} if l % 2 else {}
    if family == "E":
        return {1: 6, 5: 6}
    return None


def check_top_edges(settings: Settings) -> Outcome:
    bad = []
    for l in range(1, 9):
        datum = root_datum("A", l)
        edges = set(top_edges(datum))
        rule = {k for k in range(1, l + 1) if type_a_edge(frozenset(), k, l)}
        if edges != rule:
            bad.append(datum.label)
    candidates = [root_datum(f, l) for f in "BC" for l in range(2, 9) if is_valid_type(f, l)]
    candidates += [root_datum("D", l) for l in range(4, 10)]
    candidates += [root_datum("F", 4), root_datum("E", 6)]
    for datum in candidates:
        if top_edges(datum) != _expected_top_edges(datum):
            bad.append(datum.label)
    return ",".join(bad) or "all rules hold", "all rules hold", not bad


def check_top_edges_e7_e8(settings: Settings) -> Outcome:
    bad = [l for l in (7, 8) if top_edges(root_datum("E", l))]
    return ",".join(f"E{l}" for l in bad) or "none", "none", not bad


def _betti_matches(datum: RootDatum) -> bool:
    groups = homology(build_complex(datum), "Q")
    return [g.free for g in groups] == connection_pattern(datum)


def check_betti_patterns(settings: Settings) -> Outcome:
    bad = [d.label for d in _types(8) if not _betti_matches(d)]
    return ",".join(bad) or "all patterns", "all patterns", not bad


def check_betti_e7(settings: Settings) -> Outcome:
    ok = _betti_matches(root_datum("E", 7))
    return "1,1,0,0,0,0,1,1" if ok else "mismatch", "1,1,0,0,0,0,1,1", ok


def check_betti_e8(settings: Settings) -> Outcome:
    ok = _betti_matches(root_datum("E", 8))
    return "1,1,0,...,0,1,1" if ok else "mismatch", "1,1,0,...,0,1,1", ok


def check_torsion_corollaries(settings: Settings) -> Outcome:
    ranks = (2, 4, 6, 8, 3, 5, 9)
    bad = [l for l in ranks if not torsion_corollary_holds(l)]
    return ",".join(f"A{l}" for l in bad) or "all hold", "all hold", not bad


def _schubert_expected(l: int) -> list[AbelianGroup]:
    head = [AbelianGroup(free=1), AbelianGroup(free=1)]
    return head + [AbelianGroup(torsion=[2] * comb(l - 1, k - 1)) for k in range(2, l + 1)]


def check_schubert_variant(settings: Settings) -> Outcome:
    bad = [
        l
        for l in range(2, 9)
        if schubert_variant(root_datum("A", l)) != _schubert_expected(l)
    ]
    return ",".join(f"A{l}" for l in bad) or "all hold", "all hold", not bad


def check_local_vanishing(settings: Settings) -> Outcome:
    bad = [l for l in range(2, 9) if any(local_complex_Q(root_datum("A", l)))]
    return ",".join(f"A{l}" for l in bad) or "all zero", "all zero", not bad


def check_divisor_counts(settings: Settings) -> Outcome:
    bad = []
    for l in range(2, 11):
        poly = nemethi_poly(l)
        try:
            count = component_count(l)
        except TodaCellsError:
            bad.append(l)
            continue
        if (
            w_minus_count(l, 1) != 2
            or count != 2 * ((l + 1) // 2)
            or sturm_real_roots(poly) != poly.degree()
        ):
            bad.append(l)
    return ",".join(f"l={l}" for l in bad) or "all hold", "all hold", not bad


def _tau_goldens() -> dict[tuple[str, int], list[sp.Expr]]:
    t1, t3 = sp.symbols("t1 t3")
    t2 = sp.Symbol("t2")
    half = sp.Rational(1, 2)
    return {
        ("A", 2): [t2 + half * t1**2, t2 - half * t1**2],
        ("C", 2): [t1**3 / 6 + t3, -(t1**4) / 12 + t1 * t3],
        ("B", 2): [t1**4 / 24 + t1 * t3, t3 - t1**3 / 12],
    }


def check_tau_systems(settings: Settings) -> Outcome:
    failures = []
    for (family, rank), goldens in _tau_goldens().items():
        taus = [tau.as_expr() for tau in tau_system(family, rank).taus]
        if any(sp.expand(a - b) != 0 for a, b in zip(taus, goldens)):
            failures.append(f"{family}{rank}")
    for l in range(1, 5):
        try:
            check_bilinear(l)
        except TodaCellsError:
            failures.append(f"bilinear A{l}")
    for l in range(1, 7):
        try:
            multiplicity_profile(l)
        except TodaCellsError:
            failures.append(f"profile A{l}")
        for k, tau in enumerate(axis_taus(l), start=1):
            if tau.LC() != tau_axis_coefficient(l, k):
                failures.append(f"axis A{l} k={k}")
    for l in range(2, 6):
        if not divisor_curve_check(l):
            failures.append(f"curve A{l}")
    return ",".join(failures) or "all hold", "all hold", not failures


def _tau_cross_check(family: str, rank: int, params: dict[str, float]) -> float:
    system = tau_system(family, rank)
    datum = root_datum(family, rank)
    start = tau_initial_state(system, 1.0, params)
    traj = integrate(datum, start, 3.0, 1e-3)
    a, b = toda_solution_at(system, tau_point(system, 3.0, params))
    end = final_state(traj)
    expected = [float(v) for v in a] + [float(v) for v in b]
    return relative_error(end.vector(), expected)


def check_ode_cross_validation(settings: Settings) -> Outcome:
    start = exact_rank_one(0.5)
    traj = integrate(root_datum("A", 1), start, 2.0, 1e-3)
    exact = np.concatenate(
        [[-1.0 / t**2 for t in traj.times], [1.0 / t for t in traj.times]]
    )
    numeric = np.concatenate([[row[0] for row in traj.a], [row[0] for row in traj.b]])
    exact_error = relative_error(numeric, exact)

    cross = max(
        _tau_cross_check(family, rank, params)
        for family, rank, params in (
            ("A", 2, {}),
            ("A", 3, {}),
            ("B", 2, {"t3": 0.0}),
            ("C", 2, {"t3": 0.0}),
        )
    )

    rng = np.random.default_rng(settings.seed)
    drift = 0.0
    blowups = 0
    for trial in range(20):
        l = 1 + trial % 4
        datum = root_datum("A", l)
        state = TodaState(a=rng.uniform(0.1, 1.0, l), b=rng.uniform(-1.0, 1.0, l))
        traj = integrate(datum, state, 1.0, 1e-3, threshold=settings.blowup_threshold)
        blowups += traj.blowup
        drift = max(drift, spectrum_drift(datum, traj))

    ok = (
        exact_error <= 1e-8
        and cross <= 1e-6
        and drift <= settings.drift_tolerance
        and not blowups
    )
    measured = f"exact={exact_error:.1e} tau={cross:.1e} drift={drift:.1e}"
    expected = f"exact<=1e-08 tau<=1e-06 drift<={settings.drift_tolerance:.0e}"
    return measured, expected, ok


def _bitmask(eps: tuple[int, ...]) -> int:
    return sum(bit << r for r, bit in enumerate(eps))


def _sign_map(datum: RootDatum, w_word: tuple[int, ...]) -> tuple[int, ...]:
    """Columns of the F2 matrix of a word's action, as bitmasks."""
    element = element_from_word(datum, w_word)
    basis = [tuple(1 if r == c else 0 for r in range(datum.rank)) for c in range(datum.rank)]
    return tuple(_bitmask(act_word(datum, element, e)) for e in basis)


def _apply(cols: tuple[int, ...], v: int) -> int:
    out = 0
    for c, col in enumerate(cols):
        if v >> c & 1:
            out ^= col
    return out


def pdw_duality_holds(datum: RootDatum) -> bool:
    """x in W^-_[J] iff w_* x w^J in W^-_[J], tested on the sign part of the condition.

    (w_* x w^J)^{-1} . (-...-) = w^J . x^{-1} . (-...-) because w_* fixes the
    all-minus vector, which is checked first.
    """
    full = (1 << datum.rank) - 1
    w_star = longest_in_parabolic(datum, datum.simple)
    if _bitmask(act_word(datum, w_star, all_minus(datum.rank))) != full:
        return False
    for mask in range(1 << datum.rank):
        J = frozenset(i + 1 for i in range(datum.rank) if mask >> i & 1)
        outside = full & ~mask
        w_upper = longest_in_parabolic(datum, datum.simple - J)
        upper_cols = _sign_map(datum, w_upper.word)
        for _, cols in walk_cosets(datum.cartan, J):
            v = 0
            for col in cols:
                v ^= col
            before = v & outside == outside
            after = _apply(upper_cols, v) & outside == outside
            if before != after:
                return False
    return True


def braid_relations_hold(datum: RootDatum) -> bool:
    n = datum.rank
    mats = [sign_matrix(datum, i) for i in range(1, n + 1)]
    ident = np.eye(n, dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            m = braid_order(datum.cartan, i + 1, j + 1)
            product = ident
            step = mats[i] @ mats[j] % 2
            for _ in range(m):
                product = product @ step % 2
            if not np.array_equal(product, ident):
                return False
    return True


def check_duality_and_braids(settings: Settings) -> Outcome:
    bad = [d.label for d in _types(6) if not pdw_duality_holds(d)]
    bad += [
        f"braid {d.label}"
        for d in list(_types(8)) + [root_datum("E", 7), root_datum("E", 8)]
        if not braid_relations_hold(d)
    ]
    return ",".join(bad) or "all hold", "all hold", not bad


def check_duality_a7_a8(settings: Settings) -> Outcome:
    bad = [l for l in (7, 8) if not pdw_duality_holds(root_datum("A", l))]
    return ",".join(f"A{l}" for l in bad) or "all hold", "all hold", not bad


CRITERIA: tuple[Criterion, ...] = (
    Criterion("homology-a2-a3", check_homology_a2_a3),
    Criterion("top-incidence-closed-form", check_top_incidence_a),
    Criterion("z2-homology", check_z2_homology),
    Criterion("z2-homology-e7", check_z2_homology_e7, budgeted=True),
    Criterion("e8-sampled-squares", check_e8_sampled_squares, budgeted=True),
    Criterion("top-edges", check_top_edges),
    Criterion("top-edges-e7-e8", check_top_edges_e7_e8, budgeted=True),
    Criterion("betti-patterns", check_betti_patterns),
    Criterion("betti-e7", check_betti_e7, budgeted=True),
    Criterion("betti-e8", check_betti_e8, budgeted=True),
    Criterion("torsion-corollaries", check_torsion_corollaries),
    Criterion("schubert-variant", check_schubert_variant),
    Criterion("local-vanishing", check_local_vanishing),
    Criterion("divisor-components", check_divisor_counts),
    Criterion("tau-systems", check_tau_systems),
    Criterion("ode-cross-validation", check_ode_cross_validation),
    Criterion("duality-and-braids", check_duality_and_braids),
    Criterion("duality-a7-a8", check_duality_a7_a8, budgeted=True),
)


def run_suite(
    settings: Settings,
    suite: str = "paper",
    only: Optional[list[str]] = None,
    verbose: bool = False,
) -> Tally:
    """Run the criteria in a fixed order; budgeted ones in 'quick' are skipped."""
    tally = Tally()
    deadline: Optional[Deadline] = None
    for criterion in CRITERIA:
        if only and criterion.name not in only:
            continue
        if criterion.budgeted:
            if deadline is None:
                deadline = Deadline(settings.budget_seconds)
            if suite == "quick" or deadline.expired():
                tally.record(criterion.name, "SKIP", "budget", "")
                continue
        if verbose:
            console.print(f"[dim]running {criterion.name}[/dim]")
        started = time.perf_counter()
        try:
            measured, expected, passed = criterion.check(settings)
        except TodaCellsError as e:
            measured, expected, passed = f"error: {e}", "", False
        tally.record(
            criterion.name,
            "PASS" if passed else "FAIL",
            measured,
            expected,
            time.perf_counter() - started,
        )
    return tally
