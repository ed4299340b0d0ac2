"""Numeric Toda lattice: db/dt = a, da/dt = -(C b) a for any Cartan matrix."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np
import sympy as sp

from toda_cells.errors import BlowUpError, DomainError
from toda_cells.lie import RootDatum
from toda_cells.models import Trajectory
from toda_cells.tau import TauSystem, time_index, toda_solution_at

DEFAULT_BLOWUP = 1e9


@dataclass
class TodaState:
    a: np.ndarray
    b: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if self.a.shape != self.b.shape:
            raise DomainError(
                f"a has shape {self.a.shape}, b has shape {self.b.shape}"
            )

    @property
    def rank(self) -> int:
        return int(self.a.shape[0])

    def vector(self) -> np.ndarray:
        return np.concatenate([self.a, self.b])

    @classmethod
    def from_vector(cls, y: np.ndarray, t: float) -> "TodaState":
        n = y.shape[0] // 2
        return cls(a=y[:n].copy(), b=y[n:].copy(), t=t)


def _cartan_array(datum: RootDatum) -> np.ndarray:
    return np.array(datum.cartan, dtype=float)


def _field(cartan: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = cartan.shape[0]
    a, b = y[:n], y[n:]
    return np.concatenate([-(cartan @ b) * a, a])


def rhs(datum: RootDatum, state: TodaState) -> np.ndarray:
    """(da/dt, db/dt) stacked as one vector."""
    if state.rank != datum.rank:
        raise DomainError(f"State has rank {state.rank}, datum {datum.label}")
    return _field(_cartan_array(datum), state.vector())


def _blown_up(y: np.ndarray, n: int, threshold: float) -> bool:
    if not np.all(np.isfinite(y)):
        return True
    return bool(np.max(np.abs(y[:n]), initial=0.0) > threshold)


def integrate(
    datum: RootDatum,
    state0: TodaState,
    t_end: float,
    dt: float,
    threshold: float = DEFAULT_BLOWUP,
) -> Trajectory:
    """Fixed-step classical Runge-Kutta from state0.t to t_end (either direction).

    The step is (t_end - t0)/n with n = round(|t_end - t0|/dt). On blow-up the
    partial trajectory is returned with the last finite step time.

    Raises:
        DomainError: If dt is not positive or the state has the wrong rank.
    """
    if dt <= 0:
        raise DomainError(f"Step must be positive, got {dt}")
    if state0.rank != datum.rank:
        raise DomainError(f"State has rank {state0.rank}, datum {datum.label}")
    cartan = _cartan_array(datum)
    n = datum.rank
    span = t_end - state0.t
    steps = max(int(round(abs(span) / dt)), 1) if span else 0
    h = span / steps if steps else 0.0

    y = state0.vector()
    traj = Trajectory(times=[state0.t], a=[y[:n].tolist()], b=[y[n:].tolist()])
    for step in range(1, steps + 1):
        t = state0.t + (step - 1) * h
        k1 = _field(cartan, y)
        k2 = _field(cartan, y + 0.5 * h * k1)
        k3 = _field(cartan, y + 0.5 * h * k2)
        k4 = _field(cartan, y + h * k3)
        candidate = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if _blown_up(candidate, n, threshold):
            traj.blowup = True
            traj.blowup_time = t
            return traj
        y = candidate
        traj.times.append(state0.t + step * h)
        traj.a.append(y[:n].tolist())
        traj.b.append(y[n:].tolist())
    return traj


def final_state(traj: Trajectory) -> TodaState:
    return TodaState(a=traj.a[-1], b=traj.b[-1], t=traj.times[-1])


def _require_type_a(datum: RootDatum) -> None:
    if datum.family != "A":
        raise DomainError(
            f"The tridiagonal Lax matrix exists for type A only, not {datum.label}"
        )


def lax_matrix_a(state: TodaState) -> np.ndarray:
    """(l+1)x(l+1) Lax matrix: diagonal b_k - b_{k-1}, a below, ones above."""
    l = state.rank
    diagonal = np.append(state.b, 0.0) - np.insert(state.b, 0, 0.0)
    mat = np.diag(diagonal)
    if l:
        mat += np.diag(state.a, k=-1) + np.diag(np.ones(l), k=1)
    return mat


def conserved_spectrum(datum: RootDatum, state: TodaState) -> np.ndarray:
    """Coefficients gamma_1..gamma_{l+1} of det(lambda - L) after the leading 1."""
    _require_type_a(datum)
    return np.poly(lax_matrix_a(state))[1:]


def eigenvalues(datum: RootDatum, state: TodaState) -> np.ndarray:
    _require_type_a(datum)
    values = np.linalg.eigvals(lax_matrix_a(state))
    return np.sort_complex(values)


def spectrum_drift(datum: RootDatum, traj: Trajectory) -> float:
    """Largest deviation of any spectral coefficient from its start, per unit time."""
    start = conserved_spectrum(datum, TodaState(a=traj.a[0], b=traj.b[0]))
    worst = 0.0
    for a, b in zip(traj.a[1:], traj.b[1:]):
        spectrum = conserved_spectrum(datum, TodaState(a=a, b=b))
        worst = max(worst, float(np.max(np.abs(spectrum - start), initial=0.0)))
    duration = abs(traj.times[-1] - traj.times[0]) or 1.0
    return worst / duration


def exact_rank_one(t: float) -> TodaState:
    """The nilpotent A1 solution a = -1/t^2, b = 1/t."""
    if t == 0:
        raise DomainError("The rank one solution is singular at t = 0")
    return TodaState(a=[-1.0 / t**2], b=[1.0 / t], t=t)


def tau_point(
    system: TauSystem, t1: float, params: Optional[Mapping[str, float]] = None
) -> list[float]:
    """Coordinates of system.gens with t1 given and the other times from params."""
    params = dict(params or {})
    point = []
    for g in system.gens:
        point.append(t1 if time_index(g) == 1 else float(params.get(g.name, 0.0)))
    return point


def tau_initial_state(
    system: TauSystem,
    t1: float,
    params: Optional[Mapping[str, float]] = None,
    branch: Optional[int] = None,
) -> TodaState:
    """State read off the tau-solution; higher times are frozen parameters.

    G2 needs a branch: the index of the real t5 root of the constraint.
    """
    if system.constraint is not None:
        if branch is None:
            raise DomainError("G2 tau-functions are constrained; choose a t5 branch")
        t3 = float((params or {}).get("t3", 0.0))
        return g2_branch_state(system, t1, t3, branch)
    a, b = toda_solution_at(system, tau_point(system, t1, params))
    return TodaState(a=[float(v) for v in a], b=[float(v) for v in b], t=t1)


def relative_error(actual: Sequence[float], expected: Sequence[float]) -> float:
    actual_arr = np.asarray(actual, dtype=float)
    expected_arr = np.asarray(expected, dtype=float)
    scale = np.maximum(np.abs(expected_arr), 1e-300)
    return float(np.max(np.abs(actual_arr - expected_arr) / scale, initial=0.0))


def g2_t5_branches(system: TauSystem, t1: float, t3: float) -> list[float]:
    """Real t5 solving the G2 constraint at fixed t1 and t3, ascending."""
    if system.constraint is None:
        raise DomainError(
            f"{system.family}{system.rank} tau-functions carry no constraint"
        )
    t1_sym, t3_sym = sp.Symbol("t1"), sp.Symbol("t3")
    values = {t1_sym: sp.Rational(str(t1)), t3_sym: sp.Rational(str(t3))}
    coeffs = [float(sp.sympify(c).subs(values)) for c in system.constraint.all_coeffs()]
    while coeffs and coeffs[0] == 0.0:
        coeffs.pop(0)
    if len(coeffs) < 2:
        return []
    roots = np.roots(coeffs)
    real = [float(r.real) for r in roots if abs(r.imag) < 1e-12]
    return sorted(real)


def g2_branch_state(system: TauSystem, t1: float, t3: float, branch: int) -> TodaState:
    """(a, b) at t1 along the branch t5(t1) of the G2 constraint, t3 frozen.

    b_j = d/dt1 ln tau_j and a_j = b_j', with t5' and t5'' from implicit
    differentiation of the constraint F(t1, t3, t5) = 0.

    Raises:
        DomainError: If the branch index has no real root.
        BlowUpError: If some tau_j vanishes on the branch.
    """
    roots = g2_t5_branches(system, t1, t3)
    if not 0 <= branch < len(roots):
        raise DomainError(
            f"Branch {branch} unavailable: {len(roots)} real t5 roots at t1={t1}, t3={t3}"
        )
    x, y, z = system.gens
    point = {x: t1, y: t3, z: roots[branch]}

    def at(expr: sp.Expr) -> float:
        return float(expr.subs(point))

    F = system.constraint.as_expr()
    F_z = at(sp.diff(F, z))
    slope = -at(sp.diff(F, x)) / F_z
    curvature = -(
        at(sp.diff(F, x, 2))
        + 2 * at(sp.diff(F, x, z)) * slope
        + at(sp.diff(F, z, 2)) * slope**2
    ) / F_z

    a, b = [], []
    for k, tau in enumerate(system.taus, start=1):
        e = tau.as_expr()
        value = at(e)
        if value == 0:
            raise BlowUpError(k, (t1, t3, roots[branch]))
        d1 = at(sp.diff(e, x)) + at(sp.diff(e, z)) * slope
        d2 = (
            at(sp.diff(e, x, 2))
            + 2 * at(sp.diff(e, x, z)) * slope
            + at(sp.diff(e, z, 2)) * slope**2
            + at(sp.diff(e, z)) * curvature
        )
        b.append(d1 / value)
        a.append((value * d2 - d1**2) / value**2)
    return TodaState(a=a, b=b, t=t1)
