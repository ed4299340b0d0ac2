"""Weyl group action on sign vectors and the signed cell decomposition.

Sign vectors are tuples of bits, 1 for a minus sign and 0 for a plus sign. Only
the Cartan entries mod 2 enter the action, so each simple reflection is an F2
linear map.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from toda_cells.errors import DomainError
from toda_cells.lie import (
    RootDatum,
    SubsetJ,
    WeylElement,
    _minimal_coset_reps,
    _subset,
    longest_in_parabolic,
    minimal_coset_reps,
    multiply,
    walk_cosets,
)

SignVector = tuple[int, ...]
Sigma = tuple[int, ...]

_SYMBOLS = {-1: "-", 0: "0", 1: "+"}


def parse_signs(text: str) -> SignVector:
    """'(--+)' or '--+' -> (1, 1, 0)."""
    raw = text.strip().strip("()")
    if not raw or set(raw) - {"+", "-"}:
        raise DomainError(f"Cannot parse sign vector {text!r}")
    return tuple(1 if ch == "-" else 0 for ch in raw)


def all_minus(rank: int) -> SignVector:
    return (1,) * rank


def format_sigma(sigma: Sequence[int]) -> str:
    return "(" + "".join(_SYMBOLS[s] for s in sigma) + ")"


def act_simple(datum: RootDatum, i: int, eps: SignVector) -> SignVector:
    """s_i . eps: eps_j <- eps_j * eps_i^(C_{j,i} mod 2)."""
    if not 1 <= i <= datum.rank:
        raise DomainError(f"Generator index {i} outside 1..{datum.rank}")
    bit = eps[i - 1]
    if not bit:
        return tuple(eps)
    column = i - 1
    return tuple(
        e ^ (datum.cartan[j][column] % 2 if j != column else 0)
        for j, e in enumerate(eps)
    )


def act_word(
    datum: RootDatum, w: WeylElement, eps: SignVector, inverse: bool = False
) -> SignVector:
    """w . eps (word read right to left) or, with inverse, w^{-1} . eps."""
    letters = w.word if inverse else reversed(w.word)
    out = tuple(eps)
    for i in letters:
        out = act_simple(datum, i, out)
    return out


def sign_matrix(datum: RootDatum, i: int) -> np.ndarray:
    """F2 matrix of act_simple for s_i (entries 0/1)."""
    n = datum.rank
    mat = np.eye(n, dtype=np.int64)
    for j in range(n):
        if j != i - 1:
            mat[j, i - 1] = datum.cartan[j][i - 1] % 2
    return mat


def sigma_J(J: Iterable[int], eps: SignVector) -> Sigma:
    """Zeros at J, +1/-1 from eps elsewhere."""
    members = set(J)
    return tuple(
        0 if k + 1 in members else (-1 if bit else 1) for k, bit in enumerate(eps)
    )


def _is_negative_outside(value: int, outside_mask: int) -> bool:
    return value & outside_mask == outside_mask


def _mask(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << (i - 1)
    return out


def signed_minus_count(datum: RootDatum, J: Iterable[int]) -> tuple[int, int]:
    """Stream W_[J]^-: returns (size, sum of (-1)^length) without building matrices."""
    subset = _subset(datum, J)
    outside = _mask(datum.simple - subset)
    size = 0
    total = 0
    for word, cols in walk_cosets(datum.cartan, subset):
        value = 0
        for col in cols:
            value ^= col
        if _is_negative_outside(value, outside):
            size += 1
            total += -1 if len(word) % 2 else 1
    return size, total


@lru_cache(maxsize=None)
def _w_minus_set(datum: RootDatum, J: SubsetJ) -> tuple[WeylElement, ...]:
    outside = _mask(datum.simple - J)
    reps = _minimal_coset_reps(datum, J)
    keep = []
    for rep, (_, cols) in zip(reps, walk_cosets(datum.cartan, J)):
        value = 0
        for col in cols:
            value ^= col
        if _is_negative_outside(value, outside):
            keep.append(rep)
    return tuple(keep)


def w_minus_set(datum: RootDatum, J: Iterable[int]) -> list[WeylElement]:
    """Minimal coset representatives w with sigma_J(w^{-1}.(-...-)) all minus."""
    return list(_w_minus_set(datum, _subset(datum, J)))


@dataclass(frozen=True)
class SignedCell:
    """Cell <J; w; sigma> of the generic polytope."""

    J: SubsetJ
    w: WeylElement
    sigma: Sigma
    orientation: int

    @property
    def dimension(self) -> int:
        return len(self.sigma) - len(self.J)


def enumerate_cells(datum: RootDatum, eps: SignVector) -> list[SignedCell]:
    """All cells <J; w; sigma_J(w^{-1}.eps)>, J in ascending bitmask order."""
    if len(eps) != datum.rank:
        raise DomainError(f"Sign vector has length {len(eps)}, rank is {datum.rank}")
    cells = []
    for mask in range(1 << datum.rank):
        J = frozenset(i + 1 for i in range(datum.rank) if mask >> i & 1)
        for w in minimal_coset_reps(datum, J):
            cells.append(
                SignedCell(
                    J=J,
                    w=w,
                    sigma=sigma_J(J, act_word(datum, w, eps, inverse=True)),
                    orientation=-1 if w.length % 2 else 1,
                )
            )
    return cells


def pdw_dual(datum: RootDatum, J: Iterable[int], x: WeylElement) -> WeylElement:
    """w_* x w^J with w^J the longest element of <s_i : alpha_i not in J>."""
    subset = _subset(datum, J)
    w_star = longest_in_parabolic(datum, datum.simple)
    w_upper = longest_in_parabolic(datum, datum.simple - subset)
    return multiply(datum, multiply(datum, w_star, x), w_upper)
