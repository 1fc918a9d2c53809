"""Per-fixture pipeline and corpus classification.

A fixture runs through the stages ``validate -> homology -> ktheory -> crossed``
and yields one report section. Refused computations become records in the
section; they never abort the run.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum

from boundaryk.ahss import k_theory_of_complex
from boundaryk.chain import cohomology, homology, homology_table, validate_closed_oriented_3mfld
from boundaryk.config import Settings
from boundaryk.crossed_product import (
    CoefficientMode,
    PointedKInvariants,
    classify_corpus,
    crossed_product_k_field,
    crossed_product_k_integral,
    verdict_matrix,
)
from boundaryk.errors import (
    HyperbolicityNotDeclared,
    ManifoldFlagsNotDeclared,
    ManifoldValidationFailed,
    RefusedComputation,
    SchemaError,
)
from boundaryk.fgab import direct_sum, iso_check
from boundaryk.fixtures import FixtureLoader, ManifoldFixture, load_fixture
from boundaryk.report import digest, element_record, frame_record, refusal_record

logger = logging.getLogger(__name__)

STAGES = ("validate", "homology", "ktheory", "crossed")

MANIFOLD_MODEL = (
    "the complex models a closed connected orientable 3-manifold M with M = BG; "
    "only the homological consequences of this are checked"
)
HYPERBOLIC = "M is hyperbolic, so G acts on its Gromov boundary as a hyperbolic group"


class Status(IntEnum):
    """Process exit codes."""

    OK = 0
    SCHEMA_ERROR = 2
    VALIDATION_FAILED = 3
    REFUSED = 4


@dataclass(frozen=True)
class PipelineResult:
    name: str
    section: dict
    status: Status
    invariants: PointedKInvariants = None


class Pipeline:
    """Runs one fixture up to a stage in a fixed coefficient mode."""

    def __init__(self, coefficients: CoefficientMode = None):
        self.coefficients = coefficients or CoefficientMode.integral()

    def run(self, fixture: ManifoldFixture, stage: str = "crossed") -> PipelineResult:
        if stage not in STAGES:
            raise ValueError(f"Unknown stage {stage!r}; expected one of {', '.join(STAGES)}.")
        depth = STAGES.index(stage)
        c = fixture.complex
        section = {
            "name": fixture.name,
            "flags": {
                "closed": fixture.flags.closed,
                "orientable": fixture.flags.orientable,
                "hyperbolic": fixture.flags.hyperbolic,
            },
            "refusals": [],
        }
        refusals = section["refusals"]

        profile = homology(c)
        validation = validate_closed_oriented_3mfld(c, profile)
        regression = self._regression(fixture, profile)
        valid = validation.passed and (regression is None or regression["passed"])
        section["validation"] = {
            "passed": valid,
            "clauses": [
                {"id": cl.id, "claim": cl.claim, "passed": cl.passed, "detail": cl.detail}
                for cl in validation.clauses
            ],
            "regression": regression,
        }

        if depth >= STAGES.index("homology"):
            field = None if self.coefficients.is_integral else self.coefficients.field
            section["homology"] = {
                "table": frame_record(homology_table(c, field)),
                "base_point_class": element_record(profile.base_point_class),
                "euler_characteristic": profile.euler_characteristic,
            }

        kt = None
        if depth >= STAGES.index("ktheory"):
            if not valid:
                refusals.append(
                    refusal_record(
                        "ktheory",
                        ManifoldValidationFailed(
                            f"{fixture.name} fails validation clauses "
                            f"{', '.join(cl.id for cl in validation.failures) or 'regression'}."
                        ),
                    )
                )
            else:
                coh = cohomology(c)
                try:
                    kt = k_theory_of_complex(profile, coh)
                except RefusedComputation as exc:
                    refusals.append(refusal_record("ktheory", exc))
                else:
                    section["k_theory"] = self._k_theory_section(kt, coh)

        invariants = None
        if depth >= STAGES.index("crossed") and kt is not None:
            invariants = self._crossed(fixture, profile, kt, refusals)
            if invariants is not None:
                section["crossed_product"] = self._crossed_section(invariants)

        if not valid and stage != "homology":
            status = Status.VALIDATION_FAILED
        elif refusals:
            status = Status.REFUSED
        else:
            status = Status.OK
        logger.info("Pipeline %s for %s finished with %s", stage, fixture.name, status.name)
        return PipelineResult(fixture.name, section, status, invariants)

    @staticmethod
    def _regression(fixture, profile):
        if fixture.expected is None:
            return None
        expected = tuple(fixture.expected)
        passed = len(expected) == len(profile.h) and all(iso_check(a, b) for a, b in zip(expected, profile.h))
        return {
            "expected": [str(g) for g in expected],
            "computed": [str(g) for g in profile.h],
            "passed": passed,
        }

    @staticmethod
    def _k_theory_section(kt, coh):
        formula = iso_check(kt.k0, direct_sum(coh[0], coh[2])) and iso_check(kt.k1, direct_sum(coh[1], coh[3]))
        log_records = kt.log.to_records()
        return {
            "K^0": str(kt.k0),
            "K^1": str(kt.k1),
            "K_0": str(kt.homology_k0.group),
            "K_0_unit": element_record(kt.homology_k0.point),
            "K_1": str(kt.homology_k1),
            "second_page": frame_record(kt.second_page.to_frame()),
            "degenerates_at": "2",
            "ladder": kt.ladder.to_records(),
            "direct_sum_formula": formula,
            "duality": {
                "passed": kt.duality.passed,
                "checks": [{"claim": claim, "passed": ok} for claim, ok in kt.duality.checks],
            },
            "justification": {
                "entries": len(kt.log),
                "rules": kt.log.rule_counts(),
                "sha256": digest(log_records),
            },
        }

    def _crossed(self, fixture, profile, kt, refusals):
        undeclared = [name for name in ("closed", "orientable") if not getattr(fixture.flags, name)]
        if undeclared:
            refusals.append(
                refusal_record(
                    "crossed",
                    ManifoldFlagsNotDeclared(f"{fixture.name} declares {', '.join(undeclared)} false."),
                )
            )
            return None
        if not fixture.flags.hyperbolic:
            refusals.append(
                refusal_record(
                    "crossed",
                    HyperbolicityNotDeclared(f"{fixture.name} does not declare the hyperbolic flag."),
                )
            )
            return None
        assumptions = (MANIFOLD_MODEL, HYPERBOLIC)
        try:
            if self.coefficients.is_integral:
                return crossed_product_k_integral(
                    (kt.homology_k0, kt.homology_k1), (kt.k0, kt.k1), profile, assumptions
                )
            return crossed_product_k_field(profile, self.coefficients.field, assumptions)
        except RefusedComputation as exc:
            refusals.append(refusal_record("crossed", exc))
            return None

    @staticmethod
    def _crossed_section(invariants):
        ladder = invariants.ladder.to_records()
        return {
            "mode": invariants.mode.label,
            "K_0": str(invariants.k0.group),
            "unit": element_record(invariants.k0.point),
            "K_1": str(invariants.k1),
            "assumptions": list(invariants.assumptions),
            "evidence": {"exact_sequences": ladder, "sha256": digest(ladder)},
        }


def run_pipeline(fixture: ManifoldFixture, coefficients: CoefficientMode = None, stage: str = "crossed"):
    return Pipeline(coefficients).run(fixture, stage)


def _failure(name, status, error):
    record = {"fixture": name, "status": status.name, "error": type(error).__name__, "message": str(error)}
    if isinstance(error, SchemaError):
        record["reason"] = error.reason
    return record


def _class_record(cls):
    return {
        "members": list(cls.members),
        "K_0": str(cls.representative.k0.group),
        "unit": element_record(cls.representative.k0.point),
        "K_1": str(cls.representative.k1),
    }


def classify_command(directory, coefficients: CoefficientMode = None, keep_going: bool = False, settings=None):
    """Run the full pipeline on every fixture of a corpus and partition the results.

    Returns ``(report, exit_code)``. Without ``keep_going`` the first failure (in
    file-name order) stops the corpus and decides the exit code.
    """
    coefficients = coefficients or CoefficientMode.integral()
    settings = settings or Settings()
    report = {
        "command": "classify",
        "coefficients": coefficients.label,
        "fixtures": {},
        "failures": [],
        "classes": [],
        "partition": [],
        "verdicts": {},
    }

    fixtures = {}
    for path in FixtureLoader(directory).paths():
        try:
            fixture = load_fixture(path)
            if fixture.name in fixtures:
                raise SchemaError("DuplicateName", f"fixture name {fixture.name!r} is used twice", path.name)
        except ValueError as exc:
            logger.error("Cannot load %s: %s", path.name, exc)
            report["failures"].append(_failure(path.name, Status.SCHEMA_ERROR, exc))
            if not keep_going:
                return report, Status.SCHEMA_ERROR
            continue
        fixtures[fixture.name] = fixture

    pipeline = Pipeline(coefficients)
    names = sorted(fixtures)
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        results = dict(zip(names, pool.map(lambda n: pipeline.run(fixtures[n]), names)))

    classified = []
    for name in names:
        result = results[name]
        report["fixtures"][name] = result.section
        if result.status is not Status.OK:
            refusal = result.section["refusals"][0] if result.section["refusals"] else {}
            report["failures"].append(
                {
                    "fixture": name,
                    "status": result.status.name,
                    "error": refusal.get("error", "ValidationFailed"),
                    "message": refusal.get("message", "validation failed"),
                    "precondition": refusal.get("precondition", ""),
                }
            )
            if not keep_going:
                return report, result.status
            continue
        classified.append(result)

    if classified:
        labels = [r.name for r in classified]
        invariants = [r.invariants for r in classified]
        classes = classify_corpus(invariants, labels, settings.threads)
        report["classes"] = [_class_record(cls) for cls in classes]
        report["partition"] = [list(cls.members) for cls in classes]
        report["verdicts"] = frame_record(verdict_matrix(invariants, labels, settings.threads))
    return report, Status.OK
