import csv
import io
from collections.abc import Iterable, Sequence

from toda_cells.models import (
    DivisorRow,
    GraphReport,
    HomologyReport,
    IncidenceEntry,
    Trajectory,
)


def _render(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def homology_csv(report: HomologyReport) -> str:
    return _render(
        ["k", "free", "torsion"],
        (
            [k, g.free, ";".join(str(d) for d in g.torsion)]
            for k, g in enumerate(report.groups)
        ),
    )


def incidence_csv(entries: Iterable[IncidenceEntry]) -> str:
    return _render(
        ["source", "k", "target", "value"],
        ([e.source, e.k, e.target, e.value] for e in entries),
    )


def graph_csv(report: GraphReport) -> str:
    return _render(
        ["source", "target", "weight"],
        (
            [e.source, e.target, "" if e.weight is None else e.weight]
            for e in report.edges
        ),
    )


def divisor_csv(rows: Iterable[DivisorRow]) -> str:
    return _render(
        ["l", "degree", "real_roots", "components"],
        ([r.l, r.degree, r.real_roots, r.components] for r in rows),
    )


def trajectory_csv(traj: Trajectory) -> str:
    """t, a_1..a_l, b_1..b_l, blowup_flag; the flag is set on the last row only."""
    l = len(traj.a[0]) if traj.a else 0
    header = ["t"] + [f"a_{i}" for i in range(1, l + 1)]
    header += [f"b_{i}" for i in range(1, l + 1)] + ["blowup_flag"]
    last = len(traj.times) - 1
    rows = (
        [repr(t)]
        + [repr(v) for v in a]
        + [repr(v) for v in b]
        + [int(traj.blowup and n == last)]
        for n, (t, a, b) in enumerate(zip(traj.times, traj.a, traj.b))
    )
    return _render(header, rows)
