"""Atiyah-Hirzebruch spectral sequence for complexes of dimension at most 3.

The sequence is not run as a general differential engine. Every differential on
the window is shown to vanish by one of three structural rules, each application
is written to a ``JustificationLog``, and the filtration extensions are split by
rules that are checked against the data.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import pandas as pd

from boundaryk.errors import DegenerationNotCertified, ExtensionUnresolved
from boundaryk.fgab import FgAbGroup, PointedGroup, direct_sum, embed_first, iso_check

logger = logging.getLogger(__name__)

Q_WINDOW = (-4, 2)
LIMIT = math.inf


class DifferentialRule(str, Enum):
    ODD_ROW_ZERO = "OddRowZero"
    WINDOW_EXIT = "WindowExit"
    RETRACT_ARGUMENT = "RetractArgument"


class SplittingRule(str, Enum):
    FREE_QUOTIENT = "FreeQuotient"
    ZERO_QUOTIENT = "ZeroQuotient"
    ZERO_SUBGROUP = "ZeroSubgroup"


ANCHORS = {
    DifferentialRule.ODD_ROW_ZERO: "K^q(pt) = 0 for odd q: the differential has a vanishing domain or range",
    DifferentialRule.WINDOW_EXIT: "H^p vanishes above the top dimension: the target column is zero",
    DifferentialRule.RETRACT_ARGUMENT: (
        "pt -> M -> pt makes E_3(pt) a retract of E_3(M); with H^0(M) ≅ H^3(M) ≅ Z, "
        "d_3: H^0 -> H^3 factors through H^3(pt) = 0"
    ),
    SplittingRule.FREE_QUOTIENT: "an extension with a free quotient splits",
    SplittingRule.ZERO_QUOTIENT: "a zero quotient leaves the filtration step unchanged",
    SplittingRule.ZERO_SUBGROUP: "the grading is Hausdorff: the deeper step is zero and the step equals its quotient",
}


@dataclass(frozen=True)
class DifferentialStatus:
    rule: DifferentialRule = None
    reason: str = ""

    @property
    def structurally_zero(self) -> bool:
        return self.rule is not None


UNKNOWN = DifferentialStatus()


@dataclass(frozen=True)
class JustificationEntry:
    claim: str
    rule: Enum
    anchor: str


class JustificationLog:
    """Ordered audit trail; each entry cites exactly one rule."""

    def __init__(self):
        self._entries = []

    def add(self, claim: str, rule: Enum) -> JustificationEntry:
        entry = JustificationEntry(claim, rule, ANCHORS[rule])
        self._entries.append(entry)
        logger.debug("%s [%s]", claim, rule.value)
        return entry

    @property
    def entries(self):
        return tuple(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def rule_counts(self) -> dict:
        counts = {}
        for entry in self._entries:
            counts[entry.rule.value] = counts.get(entry.rule.value, 0) + 1
        return dict(sorted(counts.items()))

    def to_records(self):
        return [{"claim": e.claim, "rule": e.rule.value, "anchor": e.anchor} for e in self._entries]


@dataclass(frozen=True)
class SpectralPage:
    """One page of a cohomological spectral sequence on a finite (p, q) window.

    ``differentials`` maps ``(i, p, q)`` to the status of ``d_i^{p,q}``, which
    targets ``(p + i, q - i + 1)``.
    """

    index: float
    p_range: tuple
    entries: dict
    q_range: tuple = Q_WINDOW
    differentials: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return "E_∞" if self.index == LIMIT else f"E_{int(self.index)}"

    def window(self):
        return [
            (p, q)
            for p in range(self.p_range[0], self.p_range[1] + 1)
            for q in range(self.q_range[1], self.q_range[0] - 1, -1)
        ]

    def entry(self, p: int, q: int) -> FgAbGroup:
        """``E^{p,q}``; rows outside the q window are read through 2-periodicity."""
        if not self.p_range[0] <= p <= self.p_range[1]:
            return FgAbGroup()
        low, high = self.q_range
        while q > high:
            q -= 2
        while q < low:
            q += 2
        return self.entries.get((p, q), FgAbGroup())

    def to_frame(self) -> pd.DataFrame:
        ps = list(range(self.p_range[0], self.p_range[1] + 1))
        qs = list(range(self.q_range[1], self.q_range[0] - 1, -1))
        return pd.DataFrame(
            [[str(self.entry(p, q)) for p in ps] for q in qs],
            index=pd.Index(qs, name="q"),
            columns=pd.Index(ps, name="p"),
        )


def second_page(coh, p_max: int = None) -> SpectralPage:
    """``E_2^{p,q} = H^p(M; K^q(pt))``: ``H^p`` on even rows, zero on odd rows."""
    coh = tuple(coh)
    if p_max is None:
        p_max = len(coh) - 1
    entries = {}
    for p in range(0, p_max + 1):
        for q in range(Q_WINDOW[0], Q_WINDOW[1] + 1):
            if q % 2 == 0 and p < len(coh):
                entries[(p, q)] = coh[p]
            else:
                entries[(p, q)] = FgAbGroup()
    return SpectralPage(index=2, p_range=(0, p_max), entries=entries)


def _status(page: SpectralPage, i: int, p: int, q: int):
    target_p, target_q = p + i, q - i + 1
    name = f"d_{i}^{{{p},{q}}}: E^{{{p},{q}}} -> E^{{{target_p},{target_q}}}"
    if q % 2 or target_q % 2:
        return name, DifferentialRule.ODD_ROW_ZERO
    if target_p > page.p_range[1]:
        return name, DifferentialRule.WINDOW_EXIT
    if i == 3 and p == 0 and target_p == 3:
        source, target = page.entry(p, q), page.entry(target_p, target_q)
        if iso_check(source, FgAbGroup(1)) and iso_check(target, FgAbGroup(1)):
            return name, DifferentialRule.RETRACT_ARGUMENT
        raise DegenerationNotCertified(
            f"{name}: the retract argument needs H^0 ≅ H^3 ≅ Z, found {source} and {target}.",
            precondition="H^0(M) ≅ Z and H^3(M) ≅ Z",
        )
    raise DegenerationNotCertified(f"{name} matches no vanishing rule.")


def certify_degeneration(page2: SpectralPage):
    """Mark every differential from page 2 on as structurally zero.

    Returns the limit page (entrywise equal to ``page2``) and the log. Pages are
    examined until every target has left the nonzero columns.
    """
    if page2.index != 2:
        raise ValueError(f"Degeneration is certified from E_2, got {page2.label}.")
    log = JustificationLog()
    statuses = {}
    width = page2.p_range[1] - page2.p_range[0]
    for i in range(2, width + 4):
        for p, q in page2.window():
            claim, rule = _status(page2, i, p, q)
            statuses[(i, p, q)] = DifferentialStatus(rule, claim)
            log.add(f"{claim} vanishes", rule)
    logger.info("Spectral sequence degenerates at E_2 (%d differentials certified)", len(statuses))
    return replace(page2, index=LIMIT, differentials=statuses), log


@dataclass(frozen=True)
class Rung:
    """``0 -> G^{p+1}A^n -> G^pA^n -> E_∞^{p,n-p} -> 0``."""

    p: int
    sub: FgAbGroup
    step: FgAbGroup
    quotient: FgAbGroup
    rule: SplittingRule


@dataclass(frozen=True)
class FiltrationLadder:
    """Filtration ``K^n = G^0 ⊇ G^1 ⊇ ...`` for total degrees 0 and 1; rungs ordered by p."""

    rungs: dict

    def group(self, n: int) -> FgAbGroup:
        return self.rungs[n][0].step

    def terminates_at_zero(self) -> bool:
        return all(rungs[-1].sub.is_trivial() for rungs in self.rungs.values())

    def to_records(self):
        return {
            f"K^{n}": [
                {
                    "p": str(r.p),
                    "sub": str(r.sub),
                    "step": str(r.step),
                    "quotient": str(r.quotient),
                    "rule": r.rule.value,
                }
                for r in rungs
            ]
            for n, rungs in sorted(self.rungs.items())
        }


def assemble_k_groups(einf: SpectralPage, log: JustificationLog = None):
    """Resolve the filtration of ``K^0`` and ``K^1`` from a certified limit page.

    Works upward from ``G^{p_max + 1} = 0``; each rung is split by one rule.
    """
    if einf.index != LIMIT or not einf.differentials:
        raise DegenerationNotCertified("Assembly needs a certified limit page.")
    if not all(status.structurally_zero for status in einf.differentials.values()):
        raise DegenerationNotCertified("The limit page carries a differential of unknown status.")
    log = log if log is not None else JustificationLog()
    p_min, p_max = einf.p_range
    ladder = {}
    for n in (0, 1):
        deeper = FgAbGroup()
        rungs = []
        for p in range(p_max, p_min - 1, -1):
            quotient = einf.entry(p, n - p)
            if quotient.is_trivial():
                rule, step = SplittingRule.ZERO_QUOTIENT, deeper
            elif deeper.is_trivial():
                rule, step = SplittingRule.ZERO_SUBGROUP, quotient
            elif quotient.is_free():
                rule, step = SplittingRule.FREE_QUOTIENT, direct_sum(deeper, quotient)
            else:
                raise ExtensionUnresolved(
                    f"0 -> {deeper} -> G^{p}K^{n} -> {quotient} -> 0 has a torsion quotient and a nonzero subgroup."
                )
            log.add(f"G^{p}K^{n} ≅ {step} from 0 -> {deeper} -> G^{p}K^{n} -> {quotient} -> 0", rule)
            rungs.append(Rung(p, deeper, step, quotient, rule))
            deeper = step
        ladder[n] = tuple(reversed(rungs))
    result = FiltrationLadder(ladder)
    return result.group(0), result.group(1), result


def k_homology(profile):
    """``K_0 = H_0 ⊕ H_2`` pointed by the base point class, ``K_1 = H_1 ⊕ H_3``."""
    h = profile.h
    k0 = embed_first(PointedGroup(h[0], profile.base_point_class), h[2])
    k1 = direct_sum(h[1], h[3])
    return k0, k1


@dataclass(frozen=True)
class DualityReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def duality_crosscheck(coh_k, hom_k) -> DualityReport:
    """Kasparov duality ``K^* ≅ K_{3-*}``: ``K^0 ≅ K_1`` and ``K^1 ≅ K_0``."""
    k_0, k_1 = coh_k
    pointed_k0, k1_hom = hom_k
    checks = (
        (f"K^0 = {k_0} ≅ K_1 = {k1_hom}", iso_check(k_0, k1_hom)),
        (f"K^1 = {k_1} ≅ K_0 = {pointed_k0.group}", iso_check(k_1, pointed_k0.group)),
    )
    report = DualityReport(checks)
    if not report.passed:
        logger.warning("Duality cross-check failed: %s", [c for c, ok in checks if not ok])
    return report


@dataclass(frozen=True)
class ManifoldKTheory:
    k0: FgAbGroup
    k1: FgAbGroup
    homology_k0: PointedGroup
    homology_k1: FgAbGroup
    second_page: SpectralPage
    limit_page: SpectralPage
    ladder: FiltrationLadder
    log: JustificationLog
    duality: DualityReport


def k_theory_of_complex(profile, coh) -> ManifoldKTheory:
    page2 = second_page(coh)
    einf, log = certify_degeneration(page2)
    k0, k1, ladder = assemble_k_groups(einf, log)
    hom_k0, hom_k1 = k_homology(profile)
    duality = duality_crosscheck((k0, k1), (hom_k0, hom_k1))
    return ManifoldKTheory(k0, k1, hom_k0, hom_k1, page2, einf, ladder, log, duality)
