from boundaryk.ahss import (
    FiltrationLadder,
    JustificationLog,
    SpectralPage,
    assemble_k_groups,
    certify_degeneration,
    duality_crosscheck,
    k_homology,
    k_theory_of_complex,
    second_page,
)
from boundaryk.chain import (
    ChainComplexData,
    HomologyProfile,
    Subquotient,
    ValidationReport,
    cohomology,
    homology,
    homology_table,
    homology_with_field,
    validate_closed_oriented_3mfld,
)
from boundaryk.config import Settings
from boundaryk.crossed_product import (
    CoefficientMode,
    PointedKInvariants,
    classify_corpus,
    crossed_product_k_field,
    crossed_product_k_integral,
    kp_compare,
    verdict_matrix,
)
from boundaryk.engine import Pipeline, PipelineResult, Status, classify_command, run_pipeline
from boundaryk.fgab import (
    FgAbGroup,
    FieldSpec,
    GroupElement,
    PointedGroup,
    Verdict,
    content,
    direct_sum,
    embed_first,
    hom_to_Z,
    iso_check,
    pointed_iso_check,
    tensor_with_field,
    tor_with_field,
)
from boundaryk.fixtures import ManifoldFixture, load_corpus, load_fixture, parse_fixture, serialize_fixture
from boundaryk.intlin import IntMatrix, SnfResult, rank_mod_p, rank_over_rationals, smith_normal_form

__all__ = [
    "ChainComplexData",
    "CoefficientMode",
    "FgAbGroup",
    "FieldSpec",
    "FiltrationLadder",
    "GroupElement",
    "HomologyProfile",
    "IntMatrix",
    "JustificationLog",
    "ManifoldFixture",
    "Pipeline",
    "PipelineResult",
    "PointedGroup",
    "PointedKInvariants",
    "Settings",
    "SnfResult",
    "SpectralPage",
    "Status",
    "Subquotient",
    "ValidationReport",
    "Verdict",
    "assemble_k_groups",
    "certify_degeneration",
    "classify_command",
    "classify_corpus",
    "cohomology",
    "content",
    "crossed_product_k_field",
    "crossed_product_k_integral",
    "direct_sum",
    "duality_crosscheck",
    "embed_first",
    "hom_to_Z",
    "homology",
    "homology_table",
    "homology_with_field",
    "iso_check",
    "k_homology",
    "k_theory_of_complex",
    "kp_compare",
    "load_corpus",
    "load_fixture",
    "parse_fixture",
    "pointed_iso_check",
    "rank_mod_p",
    "rank_over_rationals",
    "run_pipeline",
    "second_page",
    "serialize_fixture",
    "smith_normal_form",
    "tensor_with_field",
    "tor_with_field",
    "validate_closed_oriented_3mfld",
    "verdict_matrix",
]
