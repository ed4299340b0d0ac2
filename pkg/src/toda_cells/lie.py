"""Root data, Weyl groups and parabolic coset tables for split simple types.

Conventions:
    * simple roots are 1-based in every public signature;
    * ``cartan[i][j] = <alpha_i, alpha_j^vee>`` (0-based storage);
    * ``s_i(alpha_j) = alpha_j - C_{j,i} alpha_i``, so the reflection matrices act
      on root coordinates written as column vectors.

The node labelling is reconstructed from explicit lengths and reduced words: A
is a path; in B and C the multiple bond joins alpha_{l-1} and alpha_l; D_l has
tips alpha_{l-1} and alpha_l attached to alpha_{l-2}; E_n is the path
alpha_1..alpha_{n-1} with alpha_n attached to alpha_3; F4 has its double bond
between alpha_2 and alpha_3.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import prod

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import DiGraphMatcher

from toda_cells.errors import ClassificationError, DomainError

SubsetJ = frozenset[int]
Cartan = tuple[tuple[int, ...], ...]

FAMILIES = "ABCDEFG"

VALID_RANKS: dict[str, str] = {
    "A": "rank >= 1",
    "B": "rank >= 2",
    "C": "rank >= 2",
    "D": "rank >= 4",
    "E": "6 <= rank <= 8",
    "F": "rank = 4",
    "G": "rank = 2",
}

E8_DEGREES = (2, 8, 12, 14, 18, 20, 24, 30)


def is_valid_type(family: str, rank: int) -> bool:
    if family == "A":
        return rank >= 1
    if family in ("B", "C"):
        return rank >= 2
    if family == "D":
        return rank >= 4
    if family == "E":
        return 6 <= rank <= 8
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return False


def _check_type(family: str, rank: int) -> None:
    if not is_valid_type(family, rank):
        ranges = "; ".join(f"{f}: {r}" for f, r in VALID_RANKS.items())
        raise DomainError(f"Invalid type {family}{rank}. Valid ranges: {ranges}")


def _cartan(family: str, rank: int) -> Cartan:
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def bond(i: int, j: int, cij: int = -1, cji: int = -1) -> None:
        c[i - 1][j - 1] = cij
        c[j - 1][i - 1] = cji

    if family in "ABC":
        for i in range(1, rank):
            bond(i, i + 1)
        if family == "B":
            bond(rank - 1, rank, -2, -1)
        elif family == "C":
            bond(rank - 1, rank, -1, -2)
    elif family == "D":
        for i in range(1, rank - 1):
            bond(i, i + 1)
        bond(rank - 2, rank)
    elif family == "E":
        for i in range(1, rank - 1):
            bond(i, i + 1)
        bond(3, rank)
    elif family == "F":
        bond(1, 2)
        bond(2, 3, -2, -1)
        bond(3, 4)
    elif family == "G":
        bond(1, 2, -1, -3)
    return tuple(tuple(row) for row in c)


def _reflection(cartan: Cartan, i: int) -> tuple[tuple[int, ...], ...]:
    n = len(cartan)
    return tuple(
        tuple(
            int(m == col) - (cartan[col][i] if m == i else 0) for col in range(n)
        )
        for m in range(n)
    )


def _positive_roots(cartan: Cartan) -> tuple[tuple[int, ...], ...]:
    n = len(cartan)
    simple = [tuple(int(j == i) for j in range(n)) for i in range(n)]
    seen = set(simple)
    queue = list(simple)
    while queue:
        beta = queue.pop()
        for i in range(n):
            pairing = sum(beta[m] * cartan[m][i] for m in range(n))
            image = tuple(beta[m] - (pairing if m == i else 0) for m in range(n))
            if all(x >= 0 for x in image) and any(image) and image not in seen:
                seen.add(image)
                queue.append(image)
    return tuple(sorted(seen, key=lambda r: (sum(r), r)))


@dataclass(frozen=True)
class RootDatum:
    """Cartan data of a split simple (or, for sub-diagrams, semisimple) type."""

    family: str
    rank: int
    cartan: Cartan
    refl: tuple[tuple[tuple[int, ...], ...], ...] = field(compare=False, repr=False)
    n_pos_roots: int = field(compare=False)

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    @cached_property
    def refl_arrays(self) -> tuple[np.ndarray, ...]:
        return tuple(np.array(r, dtype=np.int64) for r in self.refl)

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        return _positive_roots(self.cartan)

    @property
    def simple(self) -> SubsetJ:
        return frozenset(range(1, self.rank + 1))


@dataclass(frozen=True)
class WeylElement:
    """Weyl group element, compared by its matrix on root coordinates."""

    word: tuple[int, ...] = field(compare=False)
    mat: tuple[tuple[int, ...], ...]
    length: int = field(compare=False)

    def __str__(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"s{i}" for i in self.word)


def _datum_from_cartan(family: str, cartan: Cartan) -> RootDatum:
    n = len(cartan)
    refl = tuple(_reflection(cartan, i) for i in range(n))
    return RootDatum(
        family=family,
        rank=n,
        cartan=cartan,
        refl=refl,
        n_pos_roots=len(_positive_roots(cartan)),
    )


@lru_cache(maxsize=None)
def root_datum(family: str, rank: int) -> RootDatum:
    """Build the root datum of a split simple type.

    Raises:
        DomainError: If (family, rank) is not a simple type.
    """
    _check_type(family, rank)
    return _datum_from_cartan(family, _cartan(family, rank))


def _identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _as_tuple(mat: np.ndarray) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in mat)


def inversion_count(datum: RootDatum, mat: Sequence[Sequence[int]]) -> int:
    """Number of positive roots sent to negative roots by mat."""
    m = np.array(mat, dtype=np.int64).reshape(datum.rank, datum.rank)
    roots = np.array(datum.positive_roots, dtype=np.int64).T
    images = m @ roots
    return int(np.sum(np.all(images <= 0, axis=0)))


def element_from_word(datum: RootDatum, word: Iterable[int]) -> WeylElement:
    """Weyl element of a word s_{i1} s_{i2} ... (matrix R_{i1} R_{i2} ...)."""
    word = tuple(word)
    for i in word:
        if not 1 <= i <= datum.rank:
            raise DomainError(f"Generator index {i} outside 1..{datum.rank}")
    mat = _identity(datum.rank)
    for i in word:
        mat = mat @ datum.refl_arrays[i - 1]
    length = inversion_count(datum, mat)
    return WeylElement(word=word, mat=_as_tuple(mat), length=length)


def multiply(datum: RootDatum, x: WeylElement, y: WeylElement) -> WeylElement:
    """Product x*y, carrying the concatenated word reduced by its length."""
    mat = np.array(x.mat, dtype=np.int64) @ np.array(y.mat, dtype=np.int64)
    length = inversion_count(datum, mat)
    word = x.word + y.word
    if len(word) != length:
        word = reduced_word(datum, mat)
    return WeylElement(word=word, mat=_as_tuple(mat), length=length)


def reduced_word(datum: RootDatum, mat: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """A reduced word for the element with matrix mat (right descents peeled off)."""
    m = np.array(mat, dtype=np.int64).reshape(datum.rank, datum.rank)
    word: list[int] = []
    while True:
        for i in range(datum.rank):
            # w(alpha_i) < 0 means l(w s_i) < l(w)
            if np.all(m[:, i] <= 0):
                word.append(i + 1)
                m = m @ datum.refl_arrays[i]
                break
        else:
            break
    return tuple(reversed(word))


def longest_in_parabolic(datum: RootDatum, S: Iterable[int]) -> WeylElement:
    """Longest element of the parabolic subgroup generated by s_i, i in S.

    Generators are appended round-robin in increasing index order, which yields
    the word s1 s2 ... ss s1 ... s(s-1) ... s1 on a type-A chain.
    """
    gens = sorted(set(S))
    mat = _identity(datum.rank)
    word: list[int] = []
    last = 0
    while gens:
        order = [i for i in gens if i > last] + [i for i in gens if i <= last]
        for i in order:
            if np.all(mat[:, i - 1] >= 0):
                mat = mat @ datum.refl_arrays[i - 1]
                word.append(i)
                last = i
                break
        else:
            break
    return WeylElement(word=tuple(word), mat=_as_tuple(mat), length=len(word))


def walk_cosets(
    cartan: Cartan, J: Iterable[int]
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Breadth-first walk of W/W^J, W^J = <s_i : alpha_i not in J>.

    Walks the orbit of the weight sum_{j in J} omega_j, whose stabiliser is
    exactly W^J. Yields, level by level, a reduced word of each minimal coset
    representative w together with the F2 matrix of w^{-1} acting on sign
    vectors, stored as column bitmasks.
    """
    n = len(cartan)
    members = set(J)
    start = tuple(1 if i + 1 in members else 0 for i in range(n))
    ident = tuple(1 << r for r in range(n))
    odd = [tuple(j for j in range(n) if j != i and cartan[j][i] % 2) for i in range(n)]

    previous: set[tuple[int, ...]] = set()
    frontier: dict[tuple[int, ...], tuple[tuple[int, ...], tuple[int, ...]]] = {
        start: ((), ident)
    }
    while frontier:
        upcoming: dict[tuple[int, ...], tuple[tuple[int, ...], tuple[int, ...]]] = {}
        for mu, (word, cols) in frontier.items():
            yield word, cols
            for i in range(n):
                m = mu[i]
                if m == 0:
                    continue
                row = cartan[i]
                nu = tuple(mu[j] - m * row[j] for j in range(n))
                if nu in previous or nu in frontier or nu in upcoming:
                    continue
                # M_{(s_i w)^{-1}} = M_{w^{-1}} S_i
                col = cols[i]
                for j in odd[i]:
                    col ^= cols[j]
                upcoming[nu] = ((i + 1,) + word, cols[:i] + (col,) + cols[i + 1 :])
        previous = set(frontier)
        frontier = upcoming


def coset_count(cartan: Cartan, J: Iterable[int]) -> int:
    return sum(1 for _ in walk_cosets(cartan, J))


@lru_cache(maxsize=None)
def _minimal_coset_reps(datum: RootDatum, J: SubsetJ) -> tuple[WeylElement, ...]:
    mats: dict[tuple[int, ...], np.ndarray] = {(): _identity(datum.rank)}
    reps = []
    for word, _ in walk_cosets(datum.cartan, J):
        if word:
            mats[word] = datum.refl_arrays[word[0] - 1] @ mats[word[1:]]
        reps.append(
            WeylElement(word=word, mat=_as_tuple(mats[word]), length=len(word))
        )
    return tuple(reps)


def minimal_coset_reps(datum: RootDatum, J: Iterable[int]) -> list[WeylElement]:
    """Minimal length representatives of W/W^J in breadth-first order."""
    return list(_minimal_coset_reps(datum, _subset(datum, J)))


def _subset(datum: RootDatum, J: Iterable[int]) -> SubsetJ:
    subset = frozenset(J)
    if not subset <= datum.simple:
        raise DomainError(f"{sorted(subset)} is not a subset of 1..{datum.rank}")
    return subset


def _chain_order(cartan: Cartan) -> int:
    n = len(cartan)
    if n == 0:
        return 1
    sub = tuple(row[: n - 1] for row in cartan[: n - 1])
    return coset_count(cartan, {n}) * _chain_order(sub)


def weyl_order(datum: RootDatum) -> int:
    """|W| via an orbit-stabiliser chain; E8 from its invariant degrees."""
    if datum.family == "E" and datum.rank == 8:
        return prod(E8_DEGREES)
    return _chain_order(datum.cartan)


def invariant_degrees(family: str, rank: int) -> tuple[int, ...]:
    """Degrees of the basic invariants; their product is |W|."""
    _check_type(family, rank)
    if family == "A":
        return tuple(range(2, rank + 2))
    if family in "BC":
        return tuple(range(2, 2 * rank + 1, 2))
    if family == "D":
        return tuple(sorted((*range(2, 2 * rank - 1, 2), rank)))
    if family == "E":
        return {
            6: (2, 5, 6, 8, 9, 12),
            7: (2, 6, 8, 10, 12, 14, 18),
            8: E8_DEGREES,
        }[rank]
    if family == "F":
        return (2, 6, 8, 12)
    return (2, 6)


def braid_order(cartan: Cartan, i: int, j: int) -> int:
    """Order m_ij of s_i s_j (1-based indices)."""
    if i == j:
        return 1
    product = cartan[i - 1][j - 1] * cartan[j - 1][i - 1]
    return {0: 2, 1: 3, 2: 4, 3: 6}[product]


def dynkin_graph(datum: RootDatum) -> nx.DiGraph:
    """Directed Dynkin graph on 1..l, edge i->j carrying c = C_ij."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, datum.rank + 1))
    for i in range(datum.rank):
        for j in range(datum.rank):
            if i != j and datum.cartan[i][j]:
                graph.add_edge(i + 1, j + 1, c=datum.cartan[i][j])
    return graph


def components(datum: RootDatum, nodes: Iterable[int]) -> list[SubsetJ]:
    """Connected components of the subdiagram on the given nodes, sorted."""
    sub = dynkin_graph(datum).subgraph(nodes).to_undirected()
    return sorted((frozenset(c) for c in nx.connected_components(sub)), key=min)


def _classification_candidates(n: int) -> list[tuple[str, int]]:
    return [(f, n) for f in FAMILIES if is_valid_type(f, n)]


@lru_cache(maxsize=None)
def _classify(
    cartan: Cartan, nodes: SubsetJ
) -> tuple[str, int, tuple[tuple[int, int], ...]]:
    ordered = sorted(nodes)
    sub = nx.DiGraph()
    sub.add_nodes_from(ordered)
    for i in ordered:
        for j in ordered:
            if i != j and cartan[i - 1][j - 1]:
                sub.add_edge(i, j, c=cartan[i - 1][j - 1])
    for family, n in _classification_candidates(len(ordered)):
        std = dynkin_graph(root_datum(family, n))
        matcher = DiGraphMatcher(sub, std, edge_match=lambda a, b: a["c"] == b["c"])
        if matcher.is_isomorphic():
            return family, n, tuple(sorted(matcher.mapping.items()))
    raise ClassificationError(f"Subdiagram on nodes {ordered} matches no simple type")


def classify_subdiagram(
    datum: RootDatum, nodes: Iterable[int]
) -> tuple[str, int, dict[int, int]]:
    """Identify a connected subdiagram with a standard type.

    Returns:
        (family, rank, mapping) where mapping sends ambient node indices to
        positions in the standard labelling.

    Raises:
        ClassificationError: If the nodes do not form a connected simple diagram.
    """
    family, n, mapping = _classify(datum.cartan, frozenset(nodes))
    return family, n, dict(mapping)
