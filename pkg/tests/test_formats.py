import json
from pathlib import Path

import pytest

from toda_cells.complex import build_complex, homology
from toda_cells.formats import (
    divisor_csv,
    dumps,
    graph_csv,
    graph_to_dot,
    homology_csv,
    homology_json,
    homology_text,
    incidence_csv,
    incidence_text,
    tau_text,
    trajectory_csv,
    trajectory_text,
)
from toda_cells.incidence import graph_report, incidence_entries
from toda_cells.lie import root_datum
from toda_cells.models import (
    AbelianGroup,
    DivisorRow,
    HomologyReport,
    TauReport,
    Trajectory,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _report(family, rank, coeff="Z", kind="homology"):
    datum = root_datum(family, rank)
    return HomologyReport(
        family=family,
        rank=rank,
        coefficients=coeff,
        kind=kind,
        groups=homology(build_complex(datum), coeff),
    )


@pytest.mark.parametrize(
    "family,rank",
    [
        ("A", 2),
        ("A", 3),
        ("B", 2),
        ("C", 2),
        ("D", 5),
        pytest.param("E", 6, marks=pytest.mark.slow),
    ],
)
def test_homology_json_matches_golden(family, rank):
    golden = (FIXTURES / f"homology_{family}{rank}.json").read_text(encoding="utf-8")
    assert homology_json(_report(family, rank)) == golden


def test_cohomology_json_key():
    report = HomologyReport(
        family="A",
        rank=2,
        coefficients="Z",
        kind="cohomology",
        groups=[AbelianGroup(free=1)],
    )
    assert json.loads(homology_json(report)) == {"Hc": [{"free": 1, "torsion": []}]}


def test_dumps_is_compact_and_sorted():
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}\n'
    row = DivisorRow(l=2, degree=1, real_roots=1, components=2)
    assert dumps([row]) == '[{"components":2,"degree":1,"l":2,"real_roots":1}]\n'


def test_homology_csv_and_text():
    report = _report("A", 3)
    assert homology_csv(report).splitlines() == [
        "k,free,torsion",
        "0,1,",
        "1,1,2;2",
        "2,0,4",
        "3,0,",
    ]
    text = homology_text(report).splitlines()
    assert text[0] == "# homology of A3 over Z"
    assert text[2] == "H_1 = Z + Z2^2"
    assert text[4] == "H_3 = 0"


def test_z2_and_rational_text():
    z2 = homology_text(_report("A", 2, "Z2")).splitlines()
    assert z2[1:] == ["H_0 = Z2", "H_1 = Z2^2", "H_2 = Z2"]
    q = homology_text(_report("A", 2, "Q", kind="cohomology")).splitlines()
    assert q[1] == "H^0 = Q"


def test_graph_dot_a2():
    dot = graph_to_dot(graph_report(root_datum("A", 2)))
    lines = dot.splitlines()
    assert lines[0] == "digraph G_A2 {"
    assert lines[-1] == "}"
    assert sum(1 for line in lines if line.endswith(";") and "->" not in line) == 5
    assert '  "(**)" -> "(0*)" [label="2", weight=2];' in lines
    assert '  "(**)" -> "(*0)" [label="-2", weight=-2];' in lines


def test_local_graph_dot_has_no_weights():
    dot = graph_to_dot(graph_report(root_datum("A", 2), "GL"))
    assert dot.startswith("digraph GL_A2 {")
    assert "label" not in dot


def test_graph_and_incidence_csv():
    datum = root_datum("A", 2)
    assert graph_csv(graph_report(datum)).splitlines()[0] == "source,target,weight"
    entries = incidence_entries(datum, nonzero_only=True)
    assert incidence_csv(entries).splitlines() == [
        "source,k,target,value",
        "(**),1,(0*),2",
        "(**),2,(*0),-2",
    ]
    assert incidence_text(entries) == "[(**); (0*)] = 2\n[(**); (*0)] = -2\n"


def test_tau_text():
    report = TauReport(family="C", rank=2, taus=["1/6*t1^3 + t3", "-1/12*t1^4 + t1*t3"])
    assert tau_text(report) == "tau_1 = 1/6*t1^3 + t3\ntau_2 = -1/12*t1^4 + t1*t3\n"
    report.constraint = "t5"
    assert tau_text(report).endswith("constraint: t5 = 0\n")


def test_divisor_csv():
    rows = [DivisorRow(l=3, degree=1, real_roots=1, components=4)]
    assert divisor_csv(rows) == "l,degree,real_roots,components\n3,1,1,4\n"


def test_trajectory_outputs():
    traj = Trajectory(
        times=[1.0, 1.5], a=[[-1.0], [-0.5]], b=[[1.0], [0.5]], blowup=True, blowup_time=1.5
    )
    lines = trajectory_csv(traj).splitlines()
    assert lines == ["t,a_1,b_1,blowup_flag", "1.0,-1.0,1.0,0", "1.5,-0.5,0.5,1"]
    assert trajectory_text(traj).startswith("2 samples, blow-up after t=1.5")
    assert trajectory_text(Trajectory()) == "empty trajectory\n"
