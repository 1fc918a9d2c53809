"""Pointed K-theory of boundary crossed products and Kirchberg-Phillips comparison.

For ``G = pi_1(M)`` the Emerson-Meyer sequences

    0 -> K_*(C*_r G) -> K_*(C(dG) x| G) -> K^{1-*}(M) -> 0

are evaluated with ``K_*(C*_r G) := K_*(M)`` (Baum-Connes assembly is an
isomorphism for these groups). The unit class is the image of the base point
class of ``K_0(M)``, i.e. the first coordinate of the ``K_0(M)`` summand.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import pandas as pd

from boundaryk.errors import ExtensionUnresolved, IntegralTorsionUnsupported, MixedModes
from boundaryk.fgab import (
    FgAbGroup,
    FieldSpec,
    PointedGroup,
    Verdict,
    direct_sum,
    embed_first,
    iso_check,
    pointed_iso_check,
    pointed_vector_space_check,
    tensor_with_field,
    tor_with_field,
)

logger = logging.getLogger(__name__)

BAUM_CONNES = "Baum-Connes assembly K_*(M) -> K_*(C*_r G) is an isomorphism (M is a model for BG)"
UNIT_TRACKING = "the assembly map sends [1_M] to [1_{C*_r G}] and u_* sends that to the unit class"


@dataclass(frozen=True)
class CoefficientMode:
    """Integral mode (``field is None``) or coefficients in a field."""

    field: FieldSpec = None

    @classmethod
    def integral(cls) -> "CoefficientMode":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "CoefficientMode":
        if text.strip().lower() == "z":
            return cls.integral()
        return cls(FieldSpec.parse(text))

    @property
    def is_integral(self) -> bool:
        return self.field is None

    @property
    def label(self) -> str:
        return "Z" if self.is_integral else self.field.label

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class ShortExactSequence:
    """``0 -> left -> middle -> quotient -> 0`` in one degree."""

    degree: int
    left: FgAbGroup
    middle: FgAbGroup
    quotient: FgAbGroup
    left_source: str
    quotient_name: str
    split_reason: str

    def to_record(self):
        return {
            "degree": str(self.degree),
            "left": str(self.left),
            "left_source": self.left_source,
            "middle": str(self.middle),
            "quotient": str(self.quotient),
            "quotient_name": self.quotient_name,
            "split_reason": self.split_reason,
        }


@dataclass(frozen=True)
class EmersonMeyerLadder:
    sequences: tuple

    def to_records(self):
        return [s.to_record() for s in self.sequences]


@dataclass(frozen=True)
class PointedKInvariants:
    """``(K_0, [1], K_1)`` of a crossed product, in one coefficient mode."""

    k0: PointedGroup
    k1: FgAbGroup
    mode: CoefficientMode
    assumptions: tuple = ()
    ladder: EmersonMeyerLadder = field(default=None, compare=False)

    def sort_key(self):
        return (
            self.k0.group.free_rank,
            self.k1.free_rank,
            self.k0.group.torsion,
            self.k1.torsion,
            self.k0.point.free_coords,
            self.k0.point.torsion_coords,
        )


def crossed_product_k_integral(hom_k, coh_k, profile, assumptions=()) -> PointedKInvariants:
    """Integral invariants: ``K_0 ≅ K_0(M) ⊕ K^1(M)`` and ``K_1 ≅ K_1(M) ⊕ K^0(M)``.

    Requires a validated profile with torsion-free ``H_1``; the resulting groups are
    ``Z^{2d+2}`` with the unit at ``(1, 0, ..., 0)``.
    """
    h1 = profile.h[1]
    if not h1.is_free():
        raise IntegralTorsionUnsupported(
            f"H_1 = {h1} has torsion; the integral K_1 extension is not covered. Use field coefficients."
        )
    hom_k0, hom_k1 = hom_k
    coh_k0, coh_k1 = coh_k
    for name, group in (("K^0(M)", coh_k0), ("K^1(M)", coh_k1)):
        if not group.is_free():
            raise ExtensionUnresolved(
                f"{name} = {group} is not free, so the crossed-product sequence need not split.",
                precondition="K^{1-*}(M) is free",
            )

    k0 = embed_first(hom_k0, coh_k1)
    k1 = direct_sum(hom_k1, coh_k0)
    ladder = EmersonMeyerLadder(
        (
            ShortExactSequence(0, hom_k0.group, k0.group, coh_k1, BAUM_CONNES, "K^1(M)", "K^1(M) is free"),
            ShortExactSequence(1, hom_k1, k1, coh_k0, BAUM_CONNES, "K^0(M)", "K^0(M) is free"),
        )
    )
    invariants = PointedKInvariants(
        k0=k0,
        k1=k1,
        mode=CoefficientMode.integral(),
        assumptions=tuple(assumptions) + (BAUM_CONNES, UNIT_TRACKING),
        ladder=ladder,
    )
    logger.info("Integral crossed-product invariants: K_0 = %s, K_1 = %s", k0.group, k1)
    return invariants


def field_homology_dims(profile, f: FieldSpec) -> tuple:
    """``dim H_k(M; F) = free_rank(H_k) + t_F(H_k) + t_F(H_{k-1})``."""
    h = profile.h
    return tuple(
        tensor_with_field(h[k], f) + (tor_with_field(h[k - 1], f) if k > 0 else 0) for k in range(len(h))
    )


def crossed_product_k_field(profile, f: FieldSpec, assumptions=()) -> PointedKInvariants:
    """``K_0(-; F) ≅ K_1(-; F) ≅ F^2 ⊕ H_1(M; F) ⊕ H^1(M; F)`` with the unit at ``(1, 0, ..., 0)``."""
    dims = field_homology_dims(profile, f)
    h1 = dims[1]
    dimension = 2 + 2 * h1
    space = FgAbGroup(dimension)
    k0 = PointedGroup(space, space.basis_element(0))

    # field cohomology is the dual space: K_0(M; F) and K^0(M; F) share dimension, as do K_1 and K^1
    even, odd = dims[0] + dims[2], dims[1] + dims[3]
    split = f"{f.label} is a field"
    ladder = EmersonMeyerLadder(
        (
            ShortExactSequence(0, FgAbGroup(even), space, FgAbGroup(odd), BAUM_CONNES, "K^1(M; F)", split),
            ShortExactSequence(1, FgAbGroup(odd), space, FgAbGroup(even), BAUM_CONNES, "K^0(M; F)", split),
        )
    )
    logger.info("Crossed-product invariants over %s: dimension %d", f.label, dimension)
    return PointedKInvariants(
        k0=k0,
        k1=FgAbGroup(dimension),
        mode=CoefficientMode(f),
        assumptions=tuple(assumptions) + (BAUM_CONNES, UNIT_TRACKING),
        ladder=ladder,
    )


def kp_compare(a: PointedKInvariants, b: PointedKInvariants) -> Verdict:
    """Kirchberg-Phillips comparison of ``(K_0, [1], K_1)``."""
    if a.mode != b.mode:
        return Verdict.INCOMPARABLE
    if not iso_check(a.k1, b.k1):
        return Verdict.NOT_ISOMORPHIC
    if a.mode.is_integral:
        return pointed_iso_check(a.k0, b.k0)
    return pointed_vector_space_check(a.k0, b.k0)


@dataclass(frozen=True)
class EquivalenceClass:
    members: tuple
    representative: PointedKInvariants


def _labels(invariants, labels):
    if labels is None:
        return [str(i) for i in range(len(invariants))]
    labels = list(labels)
    if len(labels) != len(invariants):
        raise ValueError("One label per invariant is required.")
    return labels


def _pairwise(invariants, threads: int) -> dict:
    pairs = [(i, j) for i in range(len(invariants)) for j in range(i + 1, len(invariants))]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        verdicts = list(pool.map(lambda ij: kp_compare(invariants[ij[0]], invariants[ij[1]]), pairs))
    return dict(zip(pairs, verdicts))


def classify_corpus(invariants, labels=None, threads: int = 1):
    """Partition invariants into Kirchberg-Phillips classes.

    Classes are ordered by their invariants' ranks and data, then by first member;
    members keep their input order.
    """
    invariants = list(invariants)
    labels = _labels(invariants, labels)
    modes = {inv.mode for inv in invariants}
    if len(modes) > 1:
        raise MixedModes(modes)

    parent = list(range(len(invariants)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (i, j), verdict in _pairwise(invariants, threads).items():
        if verdict is Verdict.ISOMORPHIC:
            parent[find(j)] = find(i)
        elif verdict is Verdict.UNDECIDED:
            logger.warning("Comparison of %s and %s is undecided; kept apart", labels[i], labels[j])

    groups = {}
    for i in range(len(invariants)):
        groups.setdefault(find(i), []).append(i)
    classes = [
        EquivalenceClass(tuple(labels[i] for i in members), invariants[members[0]])
        for members in groups.values()
    ]
    classes.sort(key=lambda c: (c.representative.sort_key(), c.members[0]))
    logger.info("%d invariants fall into %d classes", len(invariants), len(classes))
    return classes


def verdict_matrix(invariants, labels=None, threads: int = 1) -> pd.DataFrame:
    invariants = list(invariants)
    labels = _labels(invariants, labels)
    pairwise = _pairwise(invariants, threads)
    table = pd.DataFrame(index=pd.Index(labels, name="fixture"), columns=labels, dtype=object)
    for i in range(len(invariants)):
        table.iat[i, i] = kp_compare(invariants[i], invariants[i]).value
    for (i, j), verdict in pairwise.items():
        table.iat[i, j] = verdict.value
        table.iat[j, i] = verdict.value
    return table
