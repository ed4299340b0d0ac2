"""Artifact writers: JSON, CSV, DOT and plain text."""

from toda_cells.formats.dot import graph_to_dot
from toda_cells.formats.json_out import dumps, homology_json
from toda_cells.formats.tables import (
    divisor_csv,
    graph_csv,
    homology_csv,
    incidence_csv,
    trajectory_csv,
)
from toda_cells.formats.text import (
    divisor_text,
    homology_text,
    incidence_text,
    tau_text,
    trajectory_text,
)

__all__ = [
    "divisor_csv",
    "divisor_text",
    "dumps",
    "graph_csv",
    "graph_to_dot",
    "homology_csv",
    "homology_json",
    "homology_text",
    "incidence_csv",
    "incidence_text",
    "tau_text",
    "trajectory_csv",
    "trajectory_text",
]
