"""Finite chain complexes of dimension at most 3 and their (co)homology."""
import logging
from dataclasses import dataclass, field
from enum import Enum

import pandas as pd

from boundaryk.errors import (
    BoundarySquareNonzero,
    DimensionMismatch,
    DimensionTooHigh,
    MissingFace,
    NonIncreasingVertices,
)
from boundaryk.fgab import FgAbGroup, FieldSpec, GroupElement, iso_check
from boundaryk.intlin import IntMatrix, rank_mod_p, rank_over_rationals, smith_normal_form

logger = logging.getLogger(__name__)

MAX_DIM = 3


class Provenance(str, Enum):
    SIMPLICIAL = "Simplicial"
    RAW_MATRICES = "RawMatrices"


@dataclass(frozen=True)
class ChainComplexData:
    """Chain groups ``Z^ranks[n]`` with boundaries ``boundaries[n-1] = d_n: C_n -> C_{n-1}``."""

    ranks: tuple
    boundaries: tuple
    provenance: Provenance = Provenance.RAW_MATRICES
    simplices: tuple = ()

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if not ranks:
            raise DimensionMismatch("A chain complex needs at least the degree-0 rank.")
        if any(r < 0 for r in ranks):
            raise DimensionMismatch(f"Chain ranks must be non-negative, got {ranks}.")
        if self.top_dim > MAX_DIM:
            raise DimensionTooHigh(self.top_dim, MAX_DIM)
        if len(self.boundaries) != self.top_dim:
            raise DimensionMismatch(
                f"Expected {self.top_dim} boundary matrices for ranks {ranks}, got {len(self.boundaries)}."
            )
        for n, d in enumerate(self.boundaries, start=1):
            if d.shape != (ranks[n - 1], ranks[n]):
                raise DimensionMismatch(
                    f"d_{n} must be {ranks[n - 1]}x{ranks[n]}, got {d.rows}x{d.cols}."
                )
        for n in range(2, self.top_dim + 1):
            if not (self.boundary(n - 1) @ self.boundary(n)).is_zero():
                raise BoundarySquareNonzero(n)

    @property
    def top_dim(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, n: int) -> IntMatrix:
        """``d_n``, with zero maps outside ``1..top_dim``."""
        if 1 <= n <= self.top_dim:
            return self.boundaries[n - 1]
        source = self.ranks[n] if 0 <= n <= self.top_dim else 0
        target = self.ranks[n - 1] if 0 <= n - 1 <= self.top_dim else 0
        return IntMatrix.zeros(target, source)

    @classmethod
    def from_matrices(cls, ranks, boundaries) -> "ChainComplexData":
        return cls(ranks=tuple(ranks), boundaries=tuple(boundaries), provenance=Provenance.RAW_MATRICES)

    @classmethod
    def from_simplicial(cls, simplices) -> "ChainComplexData":
        """Build the simplicial chain complex from per-degree lists of vertex tuples.

        ``d[v_0 ... v_k] = sum_i (-1)^i [v_0 ... v_i-hat ... v_k]``.
        """
        degrees = [[tuple(int(v) for v in s) for s in level] for level in simplices]
        while len(degrees) > 1 and not degrees[-1]:
            degrees.pop()
        if not degrees:
            degrees = [[]]
        if len(degrees) - 1 > MAX_DIM:
            raise DimensionTooHigh(len(degrees) - 1, MAX_DIM)

        index = []
        for k, level in enumerate(degrees):
            positions = {}
            for s in level:
                if len(s) != k + 1:
                    raise DimensionMismatch(f"Simplex {s} listed in degree {k} has {len(s)} vertices.")
                if any(a >= b for a, b in zip(s, s[1:])):
                    raise NonIncreasingVertices(s)
                if s in positions:
                    raise DimensionMismatch(f"Simplex {s} is listed twice.")
                positions[s] = len(positions)
            index.append(positions)

        boundaries = []
        for k in range(1, len(degrees)):
            rows = [[0] * len(degrees[k]) for _ in degrees[k - 1]]
            for j, s in enumerate(degrees[k]):
                for i in range(k + 1):
                    face = s[:i] + s[i + 1:]
                    row = index[k - 1].get(face)
                    if row is None:
                        raise MissingFace(s, face)
                    rows[row][j] += (-1) ** i
            boundaries.append(IntMatrix.from_rows(rows, cols=len(degrees[k])))

        logger.debug("Simplicial complex with f-vector %s", [len(level) for level in degrees])
        return cls(
            ranks=tuple(len(level) for level in degrees),
            boundaries=tuple(boundaries),
            provenance=Provenance.SIMPLICIAL,
            simplices=tuple(tuple(level) for level in degrees),
        )


class Subquotient:
    """``ker(outgoing) / im(incoming)`` with coordinates for its classes.

    With ``u @ outgoing @ v = s`` of rank ``r``, the last columns of ``v`` span the
    kernel and ``v^-1`` gives kernel coordinates; a second Smith form of the
    incoming map in those coordinates presents the quotient.
    """

    def __init__(self, outgoing: IntMatrix, incoming: IntMatrix):
        if outgoing.cols != incoming.rows:
            raise DimensionMismatch("Outgoing and incoming maps do not share their middle term.")
        if not (outgoing @ incoming).is_zero():
            raise ValueError("The maps do not compose to zero.")
        out = smith_normal_form(outgoing)
        n = outgoing.cols
        self._to_kernel = out.v_inverse[out.rank:, :]
        relations = self._to_kernel @ incoming
        rel = smith_normal_form(relations)
        self._relation_u = rel.u
        self._factors = rel.invariant_factors
        kernel_rank = n - out.rank
        self.group = FgAbGroup(
            free_rank=kernel_rank - rel.rank,
            torsion=tuple(d for d in rel.invariant_factors if d > 1),
        )

    def classify(self, cycle) -> GroupElement:
        """Class of a cycle (a coordinate vector in the middle term)."""
        kernel_coords = self._to_kernel.apply(cycle)
        image = self._relation_u.apply(kernel_coords)
        torsion = tuple(y % d for y, d in zip(image, self._factors) if d > 1)
        free = tuple(image[len(self._factors):])
        return GroupElement(free, torsion)


@dataclass(frozen=True)
class HomologyProfile:
    """Integral homology in degrees 0..3 and the class of a base vertex in H_0."""

    h: tuple
    base_point_class: GroupElement

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(self.h))
        if len(self.h) != MAX_DIM + 1:
            raise ValueError(f"A homology profile lists degrees 0..{MAX_DIM}.")
        if not self.h[0].contains(self.base_point_class):
            raise ValueError("The base point class must lie in H_0.")

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * g.free_rank for k, g in enumerate(self.h))

    def is_connected(self) -> bool:
        return iso_check(self.h[0], FgAbGroup(1))


def homology(c: ChainComplexData) -> HomologyProfile:
    groups = []
    base = None
    for n in range(MAX_DIM + 1):
        if n > c.top_dim:
            groups.append(FgAbGroup())
            continue
        sq = Subquotient(c.boundary(n), c.boundary(n + 1))
        groups.append(sq.group)
        if n == 0:
            if c.ranks[0] > 0:
                vertex = [0] * c.ranks[0]
                vertex[0] = 1
                base = sq.classify(vertex)
                # orient each free generator of H_0 so the base point has non-negative coordinates
                base = GroupElement(tuple(abs(x) for x in base.free_coords), base.torsion_coords)
            else:
                base = sq.group.zero()
    profile = HomologyProfile(tuple(groups), base)
    logger.info("Homology: %s", ", ".join(str(g) for g in profile.h))
    return profile


def cohomology(c: ChainComplexData) -> tuple:
    """``H^n = ker d_{n+1}^T / im d_n^T`` for n = 0..top_dim."""
    return tuple(
        Subquotient(c.boundary(n + 1).T, c.boundary(n).T).group for n in range(c.top_dim + 1)
    )


def _rank_over(a: IntMatrix, f: FieldSpec) -> int:
    return rank_over_rationals(a) if f.is_rational else rank_mod_p(a, f.characteristic)


def homology_with_field(c: ChainComplexData, f: FieldSpec) -> tuple:
    ranks = [_rank_over(c.boundary(n), f) for n in range(c.top_dim + 2)]
    return tuple(c.ranks[k] - ranks[k] - ranks[k + 1] for k in range(c.top_dim + 1))


def euler_characteristic(c: ChainComplexData) -> int:
    return sum((-1) ** k * r for k, r in enumerate(c.ranks))


@dataclass(frozen=True)
class Clause:
    id: str
    claim: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    clauses: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def failures(self):
        return [c for c in self.clauses if not c.passed]

    def clause(self, clause_id: str) -> Clause:
        for c in self.clauses:
            if c.id == clause_id:
                return c
        raise KeyError(clause_id)


def validate_closed_oriented_3mfld(c: ChainComplexData, profile: HomologyProfile = None) -> ValidationReport:
    """Check the homological consequences of being a closed connected orientable 3-manifold.

    Being a genuine manifold is not decided here; only the clauses below are.
    """
    profile = profile or homology(c)
    h = profile.h
    coh = cohomology(c) + (FgAbGroup(),) * (MAX_DIM - c.top_dim)
    z = FgAbGroup(1)
    chi = euler_characteristic(c)
    duality_gaps = [
        f"H^{k} = {coh[k]} but H_{MAX_DIM - k} = {h[MAX_DIM - k]}"
        for k in range(MAX_DIM + 1)
        if not iso_check(coh[k], h[MAX_DIM - k])
    ]
    clauses = (
        Clause("o", "complex has dimension 3", c.top_dim == MAX_DIM, f"top_dim = {c.top_dim}"),
        Clause("i", "H_0 ≅ Z (connected)", iso_check(h[0], z), f"H_0 = {h[0]}"),
        Clause("ii", "H_3 ≅ Z (closed and orientable)", iso_check(h[3], z), f"H_3 = {h[3]}"),
        Clause("iii", "Euler characteristic is 0", chi == 0, f"chi = {chi}"),
        Clause("iv", "H^k ≅ H_{3-k} for k = 0..3", not duality_gaps, "; ".join(duality_gaps)),
        Clause("v", "H^1 is torsion-free", coh[1].is_free(), f"H^1 = {coh[1]}"),
    )
    report = ValidationReport(clauses)
    for failure in report.failures:
        logger.info("Validation clause (%s) failed: %s (%s)", failure.id, failure.claim, failure.detail)
    return report


def homology_table(c: ChainComplexData, field_spec: FieldSpec = None) -> pd.DataFrame:
    """Homology and cohomology per degree, optionally with field dimensions."""
    profile = homology(c)
    coh = cohomology(c) + (FgAbGroup(),) * (MAX_DIM - c.top_dim)
    table = pd.DataFrame(
        {
            "H_k": [str(g) for g in profile.h],
            "H^k": [str(g) for g in coh],
        },
        index=pd.RangeIndex(MAX_DIM + 1, name="k"),
    )
    if field_spec is not None:
        dims = homology_with_field(c, field_spec) + (0,) * (MAX_DIM - c.top_dim)
        table[f"dim H_k({field_spec.label})"] = list(dims)
    return table
