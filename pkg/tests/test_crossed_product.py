import pytest

from boundaryk.ahss import k_theory_of_complex
from boundaryk.chain import cohomology, homology
from boundaryk.crossed_product import (
    BAUM_CONNES,
    CoefficientMode,
    classify_corpus,
    crossed_product_k_field,
    crossed_product_k_integral,
    field_homology_dims,
    kp_compare,
    verdict_matrix,
)
from boundaryk.errors import IntegralTorsionUnsupported, MixedModes, NotPrime
from boundaryk.fgab import FgAbGroup, FieldSpec, Verdict


def integral_invariants(c):
    profile = homology(c)
    kt = k_theory_of_complex(profile, cohomology(c))
    return crossed_product_k_integral((kt.homology_k0, kt.homology_k1), (kt.k0, kt.k1), profile)


class TestCoefficientMode:
    """Tests for coefficient modes."""

    def test_parse(self):
        """z, q and f<p> parse with matching labels."""
        assert CoefficientMode.parse("z").is_integral
        assert CoefficientMode.parse("Q").label == "Q"
        assert CoefficientMode.parse("f7").label == "F7"
        assert str(CoefficientMode.integral()) == "Z"

    def test_parse_rejects_unknown(self):
        """Unknown modes raise ValueError."""
        with pytest.raises(ValueError):
            CoefficientMode.parse("x")

    def test_f0_is_not_rationals(self):
        """f0 raises NotPrime rather than selecting Q."""
        with pytest.raises(NotPrime):
            CoefficientMode.parse("f0")


class TestIntegralInvariants:
    """Tests for the integral crossed-product invariants."""

    def test_rank_formula(self, synthetic):
        """H_1 = Z^d gives K_0 = K_1 = Z^{2d+2} with unit (1, 0, ..., 0)."""
        for d in range(6):
            invariants = integral_invariants(synthetic(d))
            assert invariants.k0.group == FgAbGroup(2 * d + 2)
            assert invariants.k1 == FgAbGroup(2 * d + 2)
            assert invariants.k0.point.free_coords == (1,) + (0,) * (2 * d + 1)

    def test_assumptions_recorded(self, synthetic):
        """Baum-Connes is listed among the assumptions."""
        invariants = integral_invariants(synthetic(1))
        assert BAUM_CONNES in invariants.assumptions

    def test_ladder(self, synthetic):
        """The exact-sequence ladder for d = 1 has Z², Z² -> Z⁴."""
        ladder = integral_invariants(synthetic(1)).ladder
        zero, one = ladder.sequences
        assert zero.left == FgAbGroup(2) and zero.quotient == FgAbGroup(2)
        assert zero.middle == FgAbGroup(4)
        assert one.quotient_name == "K^0(M)"
        assert len(ladder.to_records()) == 2

    def test_invariants_depend_only_on_homology(self, s3_fixture, synthetic):
        """The boundary of the 4-simplex and the d = 0 stand-in give identical invariants."""
        s3, stand_in = s3_fixture.complex, synthetic(0)
        assert homology(s3).h == homology(stand_in).h
        a, b = integral_invariants(s3), integral_invariants(stand_in)
        assert a == b
        assert a.ladder.to_records() == b.ladder.to_records()
        f2 = FieldSpec.prime(2)
        assert crossed_product_k_field(homology(s3), f2) == crossed_product_k_field(homology(stand_in), f2)

    def test_torsion_refused(self, torsion_fixture):
        """Torsion in H_1 refuses the integral computation."""
        with pytest.raises(IntegralTorsionUnsupported, match="Use field coefficients") as info:
            integral_invariants(torsion_fixture.complex)
        assert info.value.precondition == "H_1(M) is torsion-free"


class TestFieldInvariants:
    """Tests for the field-coefficient invariants."""

    def test_torsion_fixture_dimensions(self, torsion_fixture):
        """H_1 = (Z/5)² gives dimension 6 over F5 and 2 over F2 and Q."""
        profile = homology(torsion_fixture.complex)
        for field, dim in ((FieldSpec.prime(5), 6), (FieldSpec.prime(2), 2), (FieldSpec.rationals(), 2)):
            invariants = crossed_product_k_field(profile, field)
            assert invariants.k0.group == FgAbGroup(dim)
            assert invariants.k1 == FgAbGroup(dim)
            assert invariants.k0.point == FgAbGroup(dim).basis_element(0)

    def test_field_homology_dims(self, torsion_fixture):
        """Universal coefficients give (1, 2, 2, 1) over F5."""
        profile = homology(torsion_fixture.complex)
        assert field_homology_dims(profile, FieldSpec.prime(5)) == (1, 2, 2, 1)

    def test_torsion_free_matches_integral_rank(self, synthetic):
        """Without torsion every field gives 2d + 2, the integral rank."""
        for d in range(6):
            profile = homology(synthetic(d))
            rank = integral_invariants(synthetic(d)).k0.group.free_rank
            for field in (FieldSpec.rationals(), FieldSpec.prime(2), FieldSpec.prime(3)):
                assert crossed_product_k_field(profile, field).k0.group.free_rank == rank == 2 * d + 2

    def test_field_ladder_splits(self, torsion_fixture):
        """Field ladders record the field splitting."""
        invariants = crossed_product_k_field(homology(torsion_fixture.complex), FieldSpec.prime(5))
        assert invariants.ladder.sequences[0].split_reason == "F5 is a field"
        assert invariants.ladder.sequences[0].left == FgAbGroup(3)


class TestComparison:
    """Tests for Kirchberg-Phillips comparison and classification."""

    def test_same_rank_isomorphic(self, synthetic):
        """Equal d gives isomorphic invariants."""
        assert kp_compare(integral_invariants(synthetic(2)), integral_invariants(synthetic(2))) is Verdict.ISOMORPHIC

    def test_different_rank(self, synthetic):
        """Different d gives non-isomorphic invariants."""
        assert (
            kp_compare(integral_invariants(synthetic(1)), integral_invariants(synthetic(2)))
            is Verdict.NOT_ISOMORPHIC
        )

    def test_modes_incomparable(self, synthetic):
        """Invariants from different modes are incomparable."""
        a = integral_invariants(synthetic(1))
        b = crossed_product_k_field(homology(synthetic(1)), FieldSpec.rationals())
        assert kp_compare(a, b) is Verdict.INCOMPARABLE

    def test_field_mode_comparison(self, synthetic, torsion_fixture):
        """Over F5 the torsion fixture matches d = 2 and differs from d = 0."""
        f5 = FieldSpec.prime(5)
        torsion = crossed_product_k_field(homology(torsion_fixture.complex), f5)
        d2 = crossed_product_k_field(homology(synthetic(2)), f5)
        d0 = crossed_product_k_field(homology(synthetic(0)), f5)
        assert kp_compare(torsion, d2) is Verdict.ISOMORPHIC
        assert kp_compare(torsion, d0) is Verdict.NOT_ISOMORPHIC

    def test_one_class_per_rank(self, synthetic):
        """Three d = 2 members form one class; a d = 0 member adds exactly one more."""
        invariants = [integral_invariants(synthetic(d)) for d in (2, 2, 2)]
        classes = classify_corpus(invariants, ["a", "b", "c"])
        assert [c.members for c in classes] == [("a", "b", "c")]

        classes = classify_corpus(invariants + [integral_invariants(synthetic(0))], ["a", "b", "c", "z"])
        assert [c.members for c in classes] == [("z",), ("a", "b", "c")]

    def test_partition_independent_of_threads(self, synthetic):
        """Thread count does not change the partition."""
        invariants = [integral_invariants(synthetic(d)) for d in (0, 1, 0, 2, 1, 0)]
        serial = classify_corpus(invariants, threads=1)
        parallel = classify_corpus(invariants, threads=4)
        assert [c.members for c in serial] == [c.members for c in parallel]
        assert [c.members for c in serial] == [("0", "2", "5"), ("1", "4"), ("3",)]

    def test_empty_corpus(self):
        """No invariants, no classes."""
        assert classify_corpus([]) == []

    def test_mixed_modes_rejected(self, synthetic):
        """A corpus must use one coefficient mode."""
        a = integral_invariants(synthetic(1))
        b = crossed_product_k_field(homology(synthetic(1)), FieldSpec.rationals())
        with pytest.raises(MixedModes, match="Q, Z"):
            classify_corpus([a, b])

    def test_label_count_checked(self, synthetic):
        """Labels must match the invariants one to one."""
        with pytest.raises(ValueError, match="One label"):
            classify_corpus([integral_invariants(synthetic(1))], ["a", "b"])

    def test_verdict_matrix(self, synthetic):
        """The verdict matrix is symmetric with isomorphic diagonal."""
        invariants = [integral_invariants(synthetic(d)) for d in (0, 1, 0)]
        table = verdict_matrix(invariants, ["x", "y", "w"])
        assert table.loc["x", "x"] == "Isomorphic"
        assert table.loc["x", "w"] == "Isomorphic"
        assert table.loc["x", "y"] == table.loc["y", "x"] == "NotIsomorphic"
