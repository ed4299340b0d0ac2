"""Incidence numbers [J; J'] and the graphs built from them.

The magnitude of [J; J u {alpha_k}] is the top incidence of the connected
component of Pi minus J containing alpha_k; the sign is (-1)^nu(J, k).
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Optional

import networkx as nx
import numpy as np

from toda_cells.errors import BoundaryError, DomainError
from toda_cells.lie import (
    RootDatum,
    SubsetJ,
    _subset,
    classify_subdiagram,
    components,
    longest_in_parabolic,
    root_datum,
)
from toda_cells.models import GraphEdge, GraphReport, IncidenceEntry
from toda_cells.signs import signed_minus_count
from toda_cells.utils import star_string

Square = tuple[SubsetJ, int, int]


@lru_cache(maxsize=None)
def top_incidence(datum: RootDatum, k: int) -> int:
    """[empty; {alpha_k}] = (-1)^(k-1) |sum over W_[alpha_k]^- of (-1)^length|."""
    if not 1 <= k <= datum.rank:
        raise DomainError(f"Root index {k} outside 1..{datum.rank}")
    _, total = signed_minus_count(datum, {k})
    return (-1) ** (k - 1) * abs(total)


def nu(J: Iterable[int], k: int) -> int:
    """Number of j < k with alpha_j not in J."""
    members = set(J)
    if k in members:
        raise DomainError(f"alpha_{k} already belongs to J")
    return sum(1 for j in range(1, k) if j not in members)


def _component_of(datum: RootDatum, J: SubsetJ, k: int) -> SubsetJ:
    for comp in components(datum, datum.simple - J):
        if k in comp:
            return comp
    raise DomainError(f"alpha_{k} is not outside J")


def incidence(datum: RootDatum, J: Iterable[int], k: int) -> int:
    """[J; J u {alpha_k}] for alpha_k not in J."""
    subset = _subset(datum, J)
    sign = (-1) ** nu(subset, k)
    comp = _component_of(datum, subset, k)
    family, n, mapping = classify_subdiagram(datum, comp)
    magnitude = abs(top_incidence(root_datum(family, n), mapping[k]))
    return sign * magnitude


def incidence_a_closed_form(l: int, k: int) -> int:
    """Closed form of the type A_l top incidence [empty; {alpha_k}]."""
    if not 1 <= k <= l:
        raise DomainError(f"Root index {k} outside 1..{l}")
    if l % 2:
        return ((-1) ** (k - 1) - 1) * comb((l + 1) // 2, k // 2)
    return 2 * (-1) ** (k - 1) * comb(l // 2, k // 2)


def subsets(rank: int) -> Iterator[SubsetJ]:
    """All subsets of 1..rank in ascending bitmask order."""
    for mask in range(1 << rank):
        yield frozenset(i + 1 for i in range(rank) if mask >> i & 1)


def mask_of(J: Iterable[int]) -> int:
    out = 0
    for i in J:
        out |= 1 << (i - 1)
    return out


@dataclass
class IncidenceTable:
    """All [J; J u {alpha_k}] of a datum, keyed by (J, k)."""

    datum: RootDatum
    entries: dict[tuple[SubsetJ, int], int] = field(default_factory=dict)

    def __getitem__(self, key: tuple[SubsetJ, int]) -> int:
        return self.entries[key]

    def nonzero(self) -> dict[tuple[SubsetJ, int], int]:
        return {key: v for key, v in self.entries.items() if v}


def incidence_table(datum: RootDatum) -> IncidenceTable:
    table = IncidenceTable(datum=datum)
    for J in subsets(datum.rank):
        for k in sorted(datum.simple - J):
            table.entries[(J, k)] = incidence(datum, J, k)
    return table


def squares(datum: RootDatum) -> Iterator[Square]:
    """Every (J1, i, j) with i < j both outside J1."""
    for J in subsets(datum.rank):
        free = sorted(datum.simple - J)
        for a, i in enumerate(free):
            for j in free[a + 1 :]:
                yield J, i, j


def square_sum(datum: RootDatum, square: Square) -> int:
    J, i, j = square
    return incidence(datum, J, i) * incidence(datum, J | {i}, j) + incidence(
        datum, J, j
    ) * incidence(datum, J | {j}, i)


def _sample_squares(datum: RootDatum, count: int, seed: int) -> Iterator[Square]:
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        mask = int(rng.integers(0, 1 << datum.rank))
        J = frozenset(i + 1 for i in range(datum.rank) if mask >> i & 1)
        free = sorted(datum.simple - J)
        if len(free) < 2:
            continue
        i, j = sorted(int(x) for x in rng.choice(free, size=2, replace=False))
        produced += 1
        yield J, i, j


def check_d_squared(
    datum: RootDatum, sample: Optional[int] = None, seed: int = 0
) -> int:
    """Verify the square identity on all squares, or on a seeded sample.

    Returns:
        Number of squares checked.

    Raises:
        BoundaryError: On the first square whose two paths do not cancel.
    """
    source = squares(datum) if sample is None else _sample_squares(datum, sample, seed)
    checked = 0
    for square in source:
        value = square_sum(datum, square)
        if value:
            J, i, j = square
            raise BoundaryError((star_string(J, datum.rank), i, j), value)
        checked += 1
    return checked


def graph_G(datum: RootDatum) -> nx.DiGraph:
    """Weighted graph: an edge J -> J u {alpha_k} whenever the incidence is nonzero."""
    graph = nx.DiGraph()
    for J in subsets(datum.rank):
        graph.add_node(J, label=star_string(J, datum.rank))
    for (J, k), value in incidence_table(datum).nonzero().items():
        graph.add_edge(J, J | {k}, weight=value, root=k)
    return graph


def extended_datum(datum: RootDatum) -> tuple[RootDatum, dict[int, int], int]:
    """Rank l+1 diagram with one extra node on a chain end.

    Type A gets alpha_{l+1} on the right; B, C and D are extended at the alpha_1
    end, which is the only end whose extension stays of the same family.

    Returns:
        (extended datum, embedding of old indices, index of the new node)

    Raises:
        DomainError: For exceptional families, which have no such extension.
    """
    l = datum.rank
    if datum.family == "A":
        return root_datum("A", l + 1), {i: i for i in range(1, l + 1)}, l + 1
    if datum.family in "BCD":
        shifted = {i: i + 1 for i in range(1, l + 1)}
        return root_datum(datum.family, l + 1), shifted, 1
    raise DomainError(
        f"No extended diagram for type {datum.label}: only A, B, C and D extend"
    )


def local_incidence(datum: RootDatum, J: Iterable[int], k: int) -> int:
    """[J_1; J_1 u {alpha_k}] computed in the extended diagram."""
    ext, embed, _ = extended_datum(datum)
    return incidence(ext, {embed[i] for i in J}, embed[k])


def graph_GL(datum: RootDatum) -> nx.DiGraph:
    """Unweighted oriented graph of edges that survive in the extended diagram."""
    graph = nx.DiGraph()
    for J in subsets(datum.rank):
        graph.add_node(J, label=star_string(J, datum.rank))
    for J in subsets(datum.rank):
        for k in sorted(datum.simple - J):
            if local_incidence(datum, J, k):
                graph.add_edge(J, J | {k}, root=k)
    return graph


def top_bottom_isomorphic(datum: RootDatum) -> bool:
    """Whether the top (alpha_l free) and bottom (alpha_l in J) parts of G^L agree."""
    graph = graph_GL(datum)
    l = datum.rank
    top = graph.subgraph([J for J in graph if l not in J])
    bottom = graph.subgraph([J for J in graph if l in J])
    return nx.is_isomorphic(top, bottom)


def is_orientable(datum: RootDatum) -> bool:
    """No edge leaves the top cell."""
    return all(top_incidence(datum, k) == 0 for k in range(1, datum.rank + 1))


def top_edges(datum: RootDatum) -> dict[int, int]:
    """Nonzero [empty; {alpha_k}] keyed by k."""
    values = {k: top_incidence(datum, k) for k in range(1, datum.rank + 1)}
    return {k: v for k, v in values.items() if v}


def odd_length_filter(datum: RootDatum, k: int) -> bool:
    """True when l(w_* w^{alpha_k}) is odd, which forces [empty; {alpha_k}] = 0."""
    w_upper = longest_in_parabolic(datum, datum.simple - {k})
    return (datum.n_pos_roots - w_upper.length) % 2 == 1


def run_flanks(J: Iterable[int], k: int, l: int) -> tuple[int, int]:
    """Free roots immediately left and right of alpha_k along the A_l path."""
    members = set(J)
    n1 = 0
    while k - n1 - 1 >= 1 and k - n1 - 1 not in members:
        n1 += 1
    n2 = 0
    while k + n2 + 1 <= l and k + n2 + 1 not in members:
        n2 += 1
    return n1, n2


def type_a_edge(J: Iterable[int], k: int, l: int) -> bool:
    n1, n2 = run_flanks(J, k, l)
    return n1 % 2 == 1 or n2 % 2 == 1


def type_a_local_edge(J: Iterable[int], k: int, l: int) -> bool:
    n1, n2 = run_flanks(J, k, l)
    if k + n2 == l:
        return n1 % 2 == 1 or n2 % 2 == 0
    return n1 % 2 == 1 or n2 % 2 == 1


def parity_transfer_holds(l: int) -> bool:
    """Top edges of A_l depend only on the parity of the left flank."""
    datum = root_datum("A", l)
    seen: dict[int, bool] = {}
    for k in range(1, l + 1):
        parity = (k - 1) % 2
        edge = top_incidence(datum, k) != 0
        if seen.setdefault(parity, edge) != edge:
            return False
    return True


def graph_report(datum: RootDatum, kind: str = "G") -> GraphReport:
    """Serializable form of graph_G or graph_GL, vertices in bitmask order."""
    graph = graph_G(datum) if kind == "G" else graph_GL(datum)
    l = datum.rank
    order = {J: mask_of(J) for J in graph}
    edges = sorted(graph.edges(data=True), key=lambda e: (order[e[0]], order[e[1]]))
    return GraphReport(
        family=datum.family,
        rank=l,
        kind="G" if kind == "G" else "GL",
        vertices=[graph.nodes[J]["label"] for J in sorted(graph, key=order.__getitem__)],
        edges=[
            GraphEdge(
                source=star_string(u, l), target=star_string(v, l), weight=data.get("weight")
            )
            for u, v, data in edges
        ],
    )


def incidence_entries(
    datum: RootDatum, nonzero_only: bool = False, subset: Optional[SubsetJ] = None
) -> list[IncidenceEntry]:
    """Table rows, optionally restricted to the edges leaving one cell <J>."""
    l = datum.rank
    table = incidence_table(datum)
    items = table.nonzero() if nonzero_only else table.entries
    return [
        IncidenceEntry(
            source=star_string(J, l), k=k, target=star_string(J | {k}, l), value=value
        )
        for (J, k), value in items.items()
        if subset is None or J == subset
    ]
