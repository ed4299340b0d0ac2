"""Report and artifact models (serialisable with pydantic)."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Coefficients = Literal["Z", "Q", "Z2"]
Status = Literal["PASS", "FAIL", "SKIP"]


class AbelianGroup(BaseModel):
    """Finitely generated abelian group: Z^free plus cyclic torsion factors."""

    free: int = 0
    torsion: list[int] = Field(default_factory=list)

    @property
    def is_zero(self) -> bool:
        return self.free == 0 and not self.torsion

    def two_rank(self) -> int:
        """Dimension of the group tensored with Z2."""
        return self.free + sum(1 for d in self.torsion if d % 2 == 0)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        if self.free:
            parts.append("Z" if self.free == 1 else f"Z^{self.free}")
        counts: dict[int, int] = {}
        for d in self.torsion:
            counts[d] = counts.get(d, 0) + 1
        for d, n in counts.items():
            parts.append(f"Z{d}" if n == 1 else f"Z{d}^{n}")
        return " + ".join(parts)


class HomologyReport(BaseModel):
    """(Co)homology of one complex, indexed by degree."""

    family: str
    rank: int
    coefficients: Coefficients
    kind: Literal["homology", "cohomology"] = "homology"
    variant: Literal["standard", "schubert", "local"] = "standard"
    groups: list[AbelianGroup] = Field(default_factory=list)

    def betti(self) -> list[int]:
        if self.coefficients == "Z2":
            return [len(g.torsion) for g in self.groups]
        return [g.free for g in self.groups]


class SplitReport(BaseModel):
    """Rational Betti numbers of the last-node subcomplex and its quotient."""

    family: str
    rank: int
    sub: list[int]
    quotient: list[int]


class GraphEdge(BaseModel):
    source: str
    target: str
    weight: Optional[int] = None


class GraphReport(BaseModel):
    """Incidence graph with star/zero vertex labels."""

    family: str
    rank: int
    kind: Literal["G", "GL"] = "G"
    vertices: list[str] = Field(default_factory=list)
    edges: list[GraphEdge] = Field(default_factory=list)


class IncidenceEntry(BaseModel):
    source: str
    k: int
    target: str
    value: int


class TauReport(BaseModel):
    family: str
    rank: int
    taus: list[str]
    constraint: Optional[str] = None


class DivisorRow(BaseModel):
    l: int
    degree: int
    real_roots: int
    components: int


class Trajectory(BaseModel):
    """Sampled solution of the Toda equations."""

    times: list[float] = Field(default_factory=list)
    a: list[list[float]] = Field(default_factory=list)
    b: list[list[float]] = Field(default_factory=list)
    blowup: bool = False
    blowup_time: Optional[float] = None


class CriterionResult(BaseModel):
    """Outcome of one verification criterion."""

    name: str
    status: Status
    measured: str = ""
    expected: str = ""
    seconds: float = 0.0
