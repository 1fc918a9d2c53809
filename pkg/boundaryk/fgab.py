"""Finitely generated abelian groups in invariant-factor normal form."""
import logging
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum

from sympy import factorint

from boundaryk.intlin import IntMatrix, require_prime, smith_normal_form

logger = logging.getLogger(__name__)

_TERM = re.compile(r"^Z(?:\^(?P<rank>\d+)|/(?P<order>\d+))?$")


class Verdict(str, Enum):
    ISOMORPHIC = "Isomorphic"
    NOT_ISOMORPHIC = "NotIsomorphic"
    UNDECIDED = "Undecided"
    INCOMPARABLE = "Incomparable"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (characteristic 0) or the prime field F_p."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0:
            object.__setattr__(self, "characteristic", require_prime(self.characteristic))

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(require_prime(p))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``q`` or ``f<p>`` (case-insensitive)."""
        token = text.strip().lower()
        if token == "q":
            return cls.rationals()
        if token.startswith("f") and token[1:].isascii() and token[1:].isdigit():
            return cls.prime(int(token[1:]))
        raise ValueError(f"Unknown field {text!r}; expected 'q' or 'f<p>'.")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def label(self) -> str:
        return "Q" if self.is_rational else f"F{self.characteristic}"

    def __str__(self):
        return self.label


def _invariant_factors(orders):
    """Merge cyclic orders (each >= 2) into a divisibility chain via prime powers."""
    powers = defaultdict(list)
    for n in orders:
        for p, e in factorint(n).items():
            powers[p].append(p**e)
    if not powers:
        return ()
    for p in powers:
        powers[p].sort(reverse=True)
    length = max(len(v) for v in powers.values())
    largest_first = [math.prod(v[k] for v in powers.values() if k < len(v)) for k in range(length)]
    return tuple(reversed(largest_first))


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m`` with ``t_1 | t_2 | ... | t_m``, every ``t_i >= 2``.

    The normal form is unique, so structural equality is isomorphism.
    """

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        if not isinstance(self.free_rank, int) or self.free_rank < 0:
            raise ValueError("free_rank must be a non-negative integer.")
        torsion = tuple(int(t) for t in self.torsion)
        for t in torsion:
            if t < 2:
                raise ValueError("Torsion coefficients must be at least 2.")
        for smaller, larger in zip(torsion, torsion[1:]):
            if larger % smaller != 0:
                raise ValueError(f"Torsion coefficients {torsion} do not form a divisibility chain.")
        object.__setattr__(self, "torsion", torsion)

    @classmethod
    def from_orders(cls, *orders) -> "FgAbGroup":
        """Normalise a direct sum of cyclic groups; order 0 means Z, order 1 is trivial."""
        free = sum(1 for n in orders if n == 0)
        finite = [abs(int(n)) for n in orders if abs(int(n)) > 1]
        return cls(free_rank=free, torsion=_invariant_factors(finite))

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls()

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        """Parse the canonical rendering, e.g. ``Z^2 ⊕ Z/5``; ``+`` also separates terms."""
        stripped = text.strip()
        if stripped in ("0", ""):
            return cls()
        orders = []
        for term in re.split(r"[⊕+]", stripped):
            match = _TERM.match(term.strip())
            if match is None:
                raise ValueError(f"Cannot parse group term {term.strip()!r} in {text!r}.")
            if match.group("rank") is not None:
                orders.extend([0] * int(match.group("rank")))
            elif match.group("order") is not None:
                order = int(match.group("order"))
                if order == 0:
                    raise ValueError(f"Z/0 is not allowed in {text!r}; write Z.")
                orders.append(order)
            else:
                orders.append(0)
        return cls.from_orders(*orders)

    @property
    def rank(self) -> int:
        return self.free_rank

    def is_free(self) -> bool:
        return not self.torsion

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        if not self.is_finite():
            raise ValueError("An infinite group has no finite order.")
        return math.prod(self.torsion)

    def torsion_count(self, p: int) -> int:
        """Number of invariant factors divisible by ``p``."""
        return sum(1 for t in self.torsion if t % p == 0)

    def zero(self) -> "GroupElement":
        return GroupElement((0,) * self.free_rank, (0,) * len(self.torsion))

    def basis_element(self, index: int = 0) -> "GroupElement":
        if not 0 <= index < self.free_rank:
            raise IndexError(f"Group {self} has no free generator {index}.")
        coords = [0] * self.free_rank
        coords[index] = 1
        return GroupElement(tuple(coords), (0,) * len(self.torsion))

    def contains(self, element: "GroupElement") -> bool:
        return (
            len(element.free_coords) == self.free_rank
            and len(element.torsion_coords) == len(self.torsion)
            and all(0 <= x < t for x, t in zip(element.torsion_coords, self.torsion))
        )

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    free_coords: tuple = ()
    torsion_coords: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "free_coords", tuple(int(x) for x in self.free_coords))
        object.__setattr__(self, "torsion_coords", tuple(int(x) for x in self.torsion_coords))

    def is_zero(self) -> bool:
        return not any(self.free_coords) and not any(self.torsion_coords)

    def content(self) -> int:
        return math.gcd(*self.free_coords) if self.free_coords else 0


@dataclass(frozen=True)
class PointedGroup:
    group: FgAbGroup
    point: GroupElement

    def __post_init__(self):
        if not self.group.contains(self.point):
            raise ValueError(f"Point {self.point} is not an element of {self.group}.")


def content(element: GroupElement) -> int:
    return element.content()


def direct_sum(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    return FgAbGroup(free_rank=a.free_rank + b.free_rank, torsion=_invariant_factors(a.torsion + b.torsion))


def iso_check(a: FgAbGroup, b: FgAbGroup) -> bool:
    return a == b


def hom_to_Z(a: FgAbGroup) -> FgAbGroup:
    return FgAbGroup(free_rank=a.free_rank)


def tensor_with_field(a: FgAbGroup, field: FieldSpec) -> int:
    if field.is_rational:
        return a.free_rank
    return a.free_rank + a.torsion_count(field.characteristic)


def tor_with_field(a: FgAbGroup, field: FieldSpec) -> int:
    if field.is_rational:
        return 0
    return a.torsion_count(field.characteristic)


def _transport_torsion(moduli, coords):
    """Coordinates of ``coords ∈ ⊕ Z/moduli`` in the normal form of that group.

    With ``u @ diag(moduli) @ v = s`` the map ``x ↦ u x`` identifies the two
    cokernels; summands with ``s_i = 1`` are dropped.
    """
    if not moduli:
        return ()
    snf = smith_normal_form(IntMatrix.diagonal(moduli))
    image = snf.u.apply(coords)
    return tuple(y % d for y, d in zip(image, snf.invariant_factors) if d > 1)


def embed_first(pointed: PointedGroup, other: FgAbGroup) -> PointedGroup:
    """``(A, a) ↦ (A ⊕ B, (a, 0))``."""
    group = direct_sum(pointed.group, other)
    free = pointed.point.free_coords + (0,) * other.free_rank
    torsion = _transport_torsion(
        pointed.group.torsion + other.torsion,
        pointed.point.torsion_coords + (0,) * len(other.torsion),
    )
    return PointedGroup(group, GroupElement(free, torsion))


def pointed_iso_check(a: PointedGroup, b: PointedGroup) -> Verdict:
    """Decide whether an isomorphism of groups can carry one point onto the other.

    Decided when both points have zero torsion coordinates: the content of the free
    part is a complete invariant of the automorphism orbit. Points with torsion
    coordinates are left ``UNDECIDED``.
    """
    if not iso_check(a.group, b.group):
        return Verdict.NOT_ISOMORPHIC
    zero_a, zero_b = a.point.is_zero(), b.point.is_zero()
    if zero_a and zero_b:
        return Verdict.ISOMORPHIC
    if zero_a != zero_b:
        return Verdict.NOT_ISOMORPHIC
    if any(a.point.torsion_coords) or any(b.point.torsion_coords):
        logger.debug("Pointed comparison with torsion points left undecided: %s vs %s", a.point, b.point)
        return Verdict.UNDECIDED
    if a.point.content() == b.point.content():
        return Verdict.ISOMORPHIC
    return Verdict.NOT_ISOMORPHIC


def pointed_vector_space_check(a: PointedGroup, b: PointedGroup) -> Verdict:
    """Pointed comparison of vector spaces stored as free groups (dimension = free rank)."""
    if not (a.group.is_free() and b.group.is_free()):
        raise ValueError("Vector spaces are stored as free groups without torsion.")
    if a.group.free_rank != b.group.free_rank:
        return Verdict.NOT_ISOMORPHIC
    if a.point.is_zero() == b.point.is_zero():
        return Verdict.ISOMORPHIC
    return Verdict.NOT_ISOMORPHIC
