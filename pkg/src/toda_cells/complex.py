"""Cellular chain complexes of the compactified variety and their (co)homology.

Grade k has the basis {J : |J| = l - k} in ascending bitmask order and
(d_k)_{J', J} = [J; J'].
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np

from toda_cells.errors import BoundaryError, DomainError
from toda_cells.incidence import incidence, local_incidence, mask_of, nu, subsets
from toda_cells.lie import RootDatum, SubsetJ, root_datum
from toda_cells.models import AbelianGroup, Coefficients
from toda_cells.utils import star_string

Entry = Callable[[SubsetJ, int], int]


def _identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


@dataclass
class SNFResult:
    """U @ A @ V == D with D diagonal in divisibility order."""

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        n = min(self.D.shape) if self.D.size else 0
        return [int(self.D[i, i]) for i in range(n)]

    @property
    def invariants(self) -> list[int]:
        """Nonzero diagonal entries."""
        return [d for d in self.diagonal if d != 0]


class SmithNormalForm:
    """
    Smith normal form by repeated pivoting on the smallest nonzero entry.

    Entries are Python integers held in object arrays, so intermediate growth
    never overflows.
    """

    def __init__(self, A: np.ndarray, transforms: bool = True) -> None:
        self.A_ = np.array(A, dtype=object).reshape(np.shape(A))
        self.transforms = transforms
        self.left = _identity(self.num_row)
        self.right = _identity(self.num_column)

    @property
    def num_row(self) -> int:
        return self.A_.shape[0]

    @property
    def num_column(self) -> int:
        return self.A_.shape[1]

    def compute(self) -> SNFResult:
        s = 0
        while s < min(self.num_row, self.num_column):
            pivot = self._nonzero_min_abs(s)
            if pivot is None:
                break
            row, col = pivot
            self._swap_rows(s, row)
            self._swap_columns(s, col)

            p = self.A_[s, s]
            for i in range(s + 1, self.num_row):
                if self.A_[i, s] != 0:
                    self._add_row(i, s, -(self.A_[i, s] // p))
            for j in range(s + 1, self.num_column):
                if self.A_[s, j] != 0:
                    self._add_column(j, s, -(self.A_[s, j] // p))

            if np.any(self.A_[s + 1 :, s] != 0) or np.any(self.A_[s, s + 1 :] != 0):
                # remainders are smaller than the pivot; pivot again
                continue

            row_next = self._non_divisible_row(s)
            if row_next is not None:
                self._add_row(s, row_next, 1)
                continue

            if self.A_[s, s] < 0:
                self._negate_row(s)
            s += 1
        return SNFResult(D=self.A_, U=self.left, V=self.right)

    def _nonzero_min_abs(self, s: int) -> Optional[tuple[int, int]]:
        sub = self.A_[s:, s:]
        rows, cols = np.nonzero(sub != 0)
        if rows.size == 0:
            return None
        best = min(range(rows.size), key=lambda t: abs(sub[rows[t], cols[t]]))
        return s + int(rows[best]), s + int(cols[best])

    def _non_divisible_row(self, s: int) -> Optional[int]:
        p = self.A_[s, s]
        rest = self.A_[s + 1 :, s + 1 :]
        if rest.size == 0:
            return None
        rows, _ = np.nonzero(rest % p != 0)
        if rows.size == 0:
            return None
        return s + 1 + int(rows[0])

    def _swap_rows(self, a: int, b: int) -> None:
        if a == b:
            return
        self.A_[[a, b]] = self.A_[[b, a]]
        if self.transforms:
            self.left[[a, b]] = self.left[[b, a]]

    def _swap_columns(self, a: int, b: int) -> None:
        if a == b:
            return
        self.A_[:, [a, b]] = self.A_[:, [b, a]]
        if self.transforms:
            self.right[:, [a, b]] = self.right[:, [b, a]]

    def _negate_row(self, axis: int) -> None:
        self.A_[axis] *= -1
        if self.transforms:
            self.left[axis] *= -1

    def _add_row(self, axis1: int, axis2: int, k: int) -> None:
        """Add k times row axis2 to row axis1."""
        self.A_[axis1] += self.A_[axis2] * k
        if self.transforms:
            self.left[axis1] += self.left[axis2] * k

    def _add_column(self, axis1: int, axis2: int, k: int) -> None:
        """Add k times column axis2 to column axis1."""
        self.A_[:, axis1] += self.A_[:, axis2] * k
        if self.transforms:
            self.right[:, axis1] += self.right[:, axis2] * k


def smith_normal_form(A: np.ndarray | list[list[int]]) -> SNFResult:
    return SmithNormalForm(np.array(A, dtype=object)).compute()


def _invariants(mat: Optional[np.ndarray]) -> list[int]:
    if mat is None or mat.size == 0:
        return []
    return SmithNormalForm(mat, transforms=False).compute().invariants


@dataclass
class ChainComplexZ:
    """Graded bases of subsets and integer boundary matrices d_1..d_l."""

    rank: int
    bases: list[list[SubsetJ]]
    boundaries: dict[int, np.ndarray] = field(default_factory=dict)

    def dim(self, k: int) -> int:
        return len(self.bases[k]) if 0 <= k <= self.rank else 0

    def boundary(self, k: int) -> Optional[np.ndarray]:
        """d_k : C_k -> C_{k-1}; None outside 1..l."""
        return self.boundaries.get(k)


def assemble(
    rank: int,
    entry: Entry,
    keep: Callable[[SubsetJ], bool] = lambda J: True,
    check: bool = True,
) -> ChainComplexZ:
    """Build the complex with (d_k)_{J u {k'}, J} = entry(J, k').

    Raises:
        BoundaryError: If check is set and some d_{k-1} d_k is nonzero.
    """
    everything = sorted(subsets(rank), key=mask_of)
    bases = [
        [J for J in everything if len(J) == rank - k and keep(J)]
        for k in range(rank + 1)
    ]
    complex_ = ChainComplexZ(rank=rank, bases=bases)
    for k in range(1, rank + 1):
        rows = {J: r for r, J in enumerate(bases[k - 1])}
        mat = np.zeros((len(bases[k - 1]), len(bases[k])), dtype=object)
        for c, J in enumerate(bases[k]):
            for root in range(1, rank + 1):
                target = J | {root}
                if root in J or target not in rows:
                    continue
                mat[rows[target], c] = entry(J, root)
        complex_.boundaries[k] = mat
    if check:
        _check_square_zero(complex_)
    return complex_


def _check_square_zero(complex_: ChainComplexZ) -> None:
    for k in range(2, complex_.rank + 1):
        lower = complex_.boundaries[k - 1]
        upper = complex_.boundaries[k]
        if lower.size == 0 or upper.size == 0:
            continue
        product = lower.dot(upper)
        rows, cols = np.nonzero(product != 0)
        if rows.size:
            J = complex_.bases[k][int(cols[0])]
            target = complex_.bases[k - 2][int(rows[0])]
            i, j = sorted(target - J)
            raise BoundaryError(
                (star_string(J, complex_.rank), i, j), int(product[rows[0], cols[0]])
            )


def build_complex(datum: RootDatum, check: bool = True) -> ChainComplexZ:
    """Chain complex of the compactified isospectral variety of the datum."""
    return assemble(datum.rank, lambda J, k: incidence(datum, J, k), check=check)


def _groups(
    dims: list[int],
    outgoing: list[Optional[np.ndarray]],
    incoming: list[Optional[np.ndarray]],
    coefficients: Coefficients,
) -> list[AbelianGroup]:
    inv_out = [_invariants(m) for m in outgoing]
    inv_in = [_invariants(m) for m in incoming]
    groups = []
    for k, dim in enumerate(dims):
        if coefficients == "Z2":
            rank_out = sum(1 for d in inv_out[k] if d % 2)
            rank_in = sum(1 for d in inv_in[k] if d % 2)
            nullity = dim - rank_out - rank_in
            groups.append(AbelianGroup(free=0, torsion=[2] * nullity))
            continue
        free = dim - len(inv_out[k]) - len(inv_in[k])
        torsion = [d for d in inv_in[k] if d > 1] if coefficients == "Z" else []
        groups.append(AbelianGroup(free=free, torsion=torsion))
    return groups


def homology(
    complex_: ChainComplexZ, coefficients: Coefficients = "Z"
) -> list[AbelianGroup]:
    """H_k = ker d_k / im d_{k+1} for k = 0..l."""
    l = complex_.rank
    dims = [complex_.dim(k) for k in range(l + 1)]
    outgoing = [complex_.boundary(k) for k in range(l + 1)]
    incoming = [complex_.boundary(k + 1) for k in range(l + 1)]
    return _groups(dims, outgoing, incoming, coefficients)


def cohomology(
    complex_: ChainComplexZ, coefficients: Coefficients = "Z"
) -> list[AbelianGroup]:
    """H^k = ker d_{k+1}^T / im d_k^T for k = 0..l."""
    l = complex_.rank

    def transpose(m: Optional[np.ndarray]) -> Optional[np.ndarray]:
        return None if m is None else m.T

    dims = [complex_.dim(k) for k in range(l + 1)]
    outgoing = [transpose(complex_.boundary(k + 1)) for k in range(l + 1)]
    incoming = [transpose(complex_.boundary(k)) for k in range(l + 1)]
    return _groups(dims, outgoing, incoming, coefficients)


def _require_type_a(datum: RootDatum, what: str) -> None:
    if datum.family != "A":
        raise DomainError(f"The {what} is only defined for type A, not {datum.label}")


def schubert_complex(datum: RootDatum) -> ChainComplexZ:
    """Every nonzero incidence replaced by (-1)^nu * 2."""
    _require_type_a(datum, "Schubert variant")

    def entry(J: SubsetJ, k: int) -> int:
        return (-1) ** nu(J, k) * 2 if incidence(datum, J, k) else 0

    return assemble(datum.rank, entry)


def schubert_variant(datum: RootDatum) -> list[AbelianGroup]:
    """Integral cohomology of the +-2 complex."""
    return cohomology(schubert_complex(datum), "Z")


def local_complex(datum: RootDatum) -> ChainComplexZ:
    """Complex on the edges of G^L, each carrying the unit weight (-1)^nu."""
    _require_type_a(datum, "local complex")

    def entry(J: SubsetJ, k: int) -> int:
        return (-1) ** nu(J, k) if local_incidence(datum, J, k) else 0

    return assemble(datum.rank, entry)


def local_complex_Q(datum: RootDatum) -> list[int]:
    """Rational Betti numbers of the cochain complex on G^L."""
    return [g.free for g in cohomology(local_complex(datum), "Q")]


def split_by_last_node(datum: RootDatum) -> tuple[list[int], list[int]]:
    """Rational Betti numbers of the subcomplex alpha_l in J and its quotient."""
    l = datum.rank

    def entry(J: SubsetJ, k: int) -> int:
        return incidence(datum, J, k)

    sub = assemble(l, entry, keep=lambda J: l in J)
    quotient = assemble(l, entry, keep=lambda J: l not in J)
    return betti_numbers(homology(sub, "Q")), betti_numbers(homology(quotient, "Q"))


def betti_numbers(groups: Iterable[AbelianGroup]) -> list[int]:
    return [g.free for g in groups]


def euler_characteristic(
    groups: Iterable[AbelianGroup], coefficients: Coefficients = "Q"
) -> int:
    """Alternating sum of dimensions over Q (free ranks) or Z2."""
    total = 0
    for k, g in enumerate(groups):
        dim = g.two_rank() if coefficients == "Z2" else g.free
        total += (-1) ** k * dim
    return total


def connection_pattern(datum: RootDatum) -> list[int]:
    """Rational Betti numbers predicted for the family."""
    l = datum.rank
    family = datum.family
    nonorientable = family == "A" or (family == "D" and l % 2) or (
        family == "E" and l == 6
    )
    if nonorientable:
        return [1 if k in (0, 1) else 0 for k in range(l + 1)]
    if family in "DE":
        return [1 if k in (0, 1, l - 1, l) else 0 for k in range(l + 1)]
    return [1 if k in (0, l) else 2 for k in range(l + 1)]


def z2_expected(l: int) -> list[AbelianGroup]:
    return [AbelianGroup(torsion=[2] * comb(l, k)) for k in range(l + 1)]


def torsion_corollaries(l: int) -> dict[int, AbelianGroup]:
    """The predicted torsion degree of A_l and its group there.

    Even l: H_{l-1} has torsion Z2 (free for l = 2 only). Odd l = 2p - 1:
    H_{2p-2} = Z_{2p}.
    """
    if l < 2:
        raise DomainError(f"Torsion corollaries need l >= 2, got {l}")
    groups = homology(build_complex(root_datum("A", l)), "Z")
    degree = l - 1
    return {degree: groups[degree]}


def torsion_corollary_holds(l: int) -> bool:
    ((_, group),) = torsion_corollaries(l).items()
    if l % 2 == 0:
        return group.torsion == [2] and (l == 2 or group.free == 0)
    p = (l + 1) // 2
    return group == AbelianGroup(torsion=[2 * p])
