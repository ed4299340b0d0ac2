from collections.abc import Iterable

from toda_cells.models import (
    DivisorRow,
    HomologyReport,
    IncidenceEntry,
    TauReport,
    Trajectory,
)

_COEFF_NAMES = {"Z": "Z", "Q": "Q", "Z2": "Z2"}


def homology_text(report: HomologyReport) -> str:
    label = "H_{k}" if report.kind == "homology" else "H^{k}"
    coeff = _COEFF_NAMES[report.coefficients]
    lines = [f"# {report.kind} of {report.family}{report.rank} over {coeff}"]
    if report.coefficients == "Z2":
        for k, g in enumerate(report.groups):
            n = len(g.torsion)
            value = "0" if n == 0 else ("Z2" if n == 1 else f"Z2^{n}")
            lines.append(f"{label.format(k=k)} = {value}")
    else:
        for k, g in enumerate(report.groups):
            value = str(g) if report.coefficients == "Z" else _rational(g.free)
            lines.append(f"{label.format(k=k)} = {value}")
    return "\n".join(lines) + "\n"


def _rational(n: int) -> str:
    if n == 0:
        return "0"
    return "Q" if n == 1 else f"Q^{n}"


def incidence_text(entries: Iterable[IncidenceEntry]) -> str:
    return "".join(f"[{e.source}; {e.target}] = {e.value}\n" for e in entries)


def tau_text(report: TauReport) -> str:
    lines = [f"tau_{k} = {tau}" for k, tau in enumerate(report.taus, start=1)]
    if report.constraint is not None:
        lines.append(f"constraint: {report.constraint} = 0")
    return "\n".join(lines) + "\n"


def divisor_text(rows: Iterable[DivisorRow]) -> str:
    lines = []
    for r in rows:
        lines.append(
            f"l={r.l}: degree {r.degree}, {r.real_roots} real roots,"
            f" {r.components} components"
        )
    return "\n".join(lines) + "\n"


def trajectory_text(traj: Trajectory) -> str:
    if not traj.times:
        return "empty trajectory\n"
    end = (
        f"blow-up after t={traj.blowup_time!r}"
        if traj.blowup
        else f"reached t={traj.times[-1]!r}"
    )
    lines = [
        f"{len(traj.times)} samples, {end}",
        "a = " + " ".join(repr(v) for v in traj.a[-1]),
        "b = " + " ".join(repr(v) for v in traj.b[-1]),
    ]
    return "\n".join(lines) + "\n"
