from dataclasses import replace

import pytest

from boundaryk.ahss import (
    LIMIT,
    DifferentialRule,
    JustificationLog,
    SplittingRule,
    assemble_k_groups,
    certify_degeneration,
    duality_crosscheck,
    k_homology,
    k_theory_of_complex,
    second_page,
)
from boundaryk.chain import cohomology, homology
from boundaryk.errors import DegenerationNotCertified, ExtensionUnresolved
from boundaryk.fgab import FgAbGroup, GroupElement, PointedGroup, direct_sum

Z = FgAbGroup(1)
ZERO = FgAbGroup()


class TestSecondPage:
    """Tests for the E_2 page."""

    def test_entries_follow_cohomology(self, s3_fixture):
        """Even rows carry H^p, odd rows vanish."""
        page = second_page(cohomology(s3_fixture.complex))
        assert page.label == "E_2"
        assert page.p_range == (0, 3)
        assert page.entry(0, 0) == Z
        assert page.entry(3, -2) == Z
        assert page.entry(1, 0) == ZERO
        assert page.entry(0, -1) == ZERO

    def test_two_periodicity(self, s3_fixture):
        """Rows outside the window are read through Bott periodicity."""
        page = second_page(cohomology(s3_fixture.complex))
        assert page.entry(0, 4) == page.entry(0, 2) == Z
        assert page.entry(3, -6) == Z
        assert page.entry(0, 5) == ZERO

    def test_columns_outside_window(self, s3_fixture):
        """Columns beyond the range are zero."""
        page = second_page(cohomology(s3_fixture.complex))
        assert page.entry(4, 0) == ZERO
        assert page.entry(-1, 0) == ZERO

    def test_to_frame(self, torsion_fixture):
        """The frame has q descending as rows and p as columns."""
        frame = second_page(cohomology(torsion_fixture.complex)).to_frame()
        assert list(frame.index) == [2, 1, 0, -1, -2, -3, -4]
        assert list(frame.columns) == [0, 1, 2, 3]
        assert frame.loc[0, 2] == "Z/5 ⊕ Z/5"
        assert frame.loc[-1, 2] == "0"

    def test_window_order(self, point_complex):
        """window() lists p ascending and q descending."""
        page = second_page(cohomology(point_complex))
        assert page.window() == [(0, q) for q in range(2, -5, -1)]


class TestDegeneration:
    """Tests for the degeneration certificate."""

    def test_s3_certificate(self, s3_fixture):
        """Every differential on ∂Δ⁴ vanishes by a recorded rule."""
        page2 = second_page(cohomology(s3_fixture.complex))
        einf, log = certify_degeneration(page2)
        assert einf.label == "E_∞"
        assert einf.entries == page2.entries
        assert len(log) == 5 * 28
        assert all(status.structurally_zero for status in einf.differentials.values())
        assert log.rule_counts()["RetractArgument"] == 4

    def test_point_uses_only_structural_rules(self, point_complex):
        """The point needs only the odd-row and window-exit rules."""
        _, log = certify_degeneration(second_page(cohomology(point_complex)))
        assert {entry.rule for entry in log} == {DifferentialRule.ODD_ROW_ZERO, DifferentialRule.WINDOW_EXIT}

    def test_every_entry_cites_one_rule(self, torus_fixture):
        """Each log entry carries a rule and its anchor text."""
        _, log = certify_degeneration(second_page(cohomology(torus_fixture.complex)))
        for record in log.to_records():
            assert record["rule"] in {rule.value for rule in DifferentialRule}
            assert record["anchor"]
            assert record["claim"].endswith("vanishes")

    def test_widened_window_is_not_certified(self, s3_fixture):
        """With a fifth column d_3 lands inside the window and no rule applies."""
        page2 = second_page(cohomology(s3_fixture.complex), p_max=4)
        with pytest.raises(DegenerationNotCertified, match="no vanishing rule"):
            certify_degeneration(page2)

    def test_retract_needs_fundamental_class(self):
        """d_3: H^0 -> H^3 is only certified when both ends are Z."""
        page2 = second_page((Z, ZERO, ZERO, ZERO))
        with pytest.raises(DegenerationNotCertified) as info:
            certify_degeneration(page2)
        assert "H^3(M) ≅ Z" in info.value.precondition

    def test_requires_second_page(self, s3_fixture):
        """Certification starts from E_2."""
        page3 = replace(second_page(cohomology(s3_fixture.complex)), index=3)
        with pytest.raises(ValueError, match="from E_2"):
            certify_degeneration(page3)


class TestAssembly:
    """Tests for the filtration ladder."""

    def test_torus(self, torus_fixture):
        """K^0 = K^1 = Z^4 for the 3-torus."""
        einf, log = certify_degeneration(second_page(cohomology(torus_fixture.complex)))
        k0, k1, ladder = assemble_k_groups(einf, log)
        assert k0 == FgAbGroup(4)
        assert k1 == FgAbGroup(4)
        assert ladder.terminates_at_zero()
        assert ladder.rungs[0][0].rule is SplittingRule.FREE_QUOTIENT
        assert len(log) == 5 * 28 + 8

    def test_direct_sum_formula(self, s3_fixture, torus_fixture, torsion_fixture, synthetic):
        """Assembly equals H^0 ⊕ H^2 and H^1 ⊕ H^3 on every validated complex."""
        complexes = [f.complex for f in (s3_fixture, torus_fixture, torsion_fixture)]
        complexes += [synthetic(d) for d in range(6)]
        for c in complexes:
            coh = cohomology(c)
            k0, k1, _ = assemble_k_groups(certify_degeneration(second_page(coh))[0])
            assert k0 == direct_sum(coh[0], coh[2])
            assert k1 == direct_sum(coh[1], coh[3])

    def test_torsion_subgroup_with_free_quotient_splits(self, torsion_fixture):
        """K^0 = Z ⊕ (Z/5)² for the torsion fixture."""
        einf, _ = certify_degeneration(second_page(cohomology(torsion_fixture.complex)))
        k0, _, ladder = assemble_k_groups(einf)
        assert k0 == FgAbGroup(1, (5, 5))
        rules = [rung.rule for rung in ladder.rungs[0]]
        assert rules == [
            SplittingRule.FREE_QUOTIENT,
            SplittingRule.ZERO_QUOTIENT,
            SplittingRule.ZERO_SUBGROUP,
            SplittingRule.ZERO_QUOTIENT,
        ]

    def test_torsion_quotient_is_unresolved(self):
        """A torsion quotient over a nonzero subgroup is refused."""
        einf, _ = certify_degeneration(second_page((FgAbGroup(0, (2,)), ZERO, Z)))
        with pytest.raises(ExtensionUnresolved, match="torsion quotient"):
            assemble_k_groups(einf)

    def test_requires_limit_page(self, s3_fixture):
        """Assembly refuses an uncertified page."""
        with pytest.raises(DegenerationNotCertified, match="certified limit page"):
            assemble_k_groups(second_page(cohomology(s3_fixture.complex)))

    def test_ladder_records(self, s3_fixture):
        """Ladder records list both total degrees with string fields."""
        einf, _ = certify_degeneration(second_page(cohomology(s3_fixture.complex)))
        _, _, ladder = assemble_k_groups(einf)
        records = ladder.to_records()
        assert set(records) == {"K^0", "K^1"}
        assert records["K^0"][0] == {"p": "0", "sub": "0", "step": "Z", "quotient": "Z", "rule": "ZeroSubgroup"}


class TestKHomologyAndDuality:
    """Tests for K-homology and the duality cross-check."""

    def test_k_homology_pointed(self, s3_fixture):
        """K_0(S³) = Z pointed at 1, K_1(S³) = Z."""
        k0, k1 = k_homology(homology(s3_fixture.complex))
        assert k0 == PointedGroup(Z, GroupElement((1,), ()))
        assert k1 == Z

    def test_k_homology_synthetic(self, synthetic):
        """K_0 = Z^{d+1} pointed at the first coordinate."""
        for d in range(6):
            k0, k1 = k_homology(homology(synthetic(d)))
            assert k0.group == FgAbGroup(d + 1)
            assert k0.point == FgAbGroup(d + 1).basis_element(0)
            assert k1 == FgAbGroup(d + 1)

    def test_duality_passes_on_manifolds(self, s3_fixture, torus_fixture, torsion_fixture):
        """K^0 ≅ K_1 and K^1 ≅ K_0 on every manifold fixture."""
        for fixture in (s3_fixture, torus_fixture, torsion_fixture):
            c = fixture.complex
            result = k_theory_of_complex(homology(c), cohomology(c))
            assert result.duality.passed
            assert result.limit_page.index == LIMIT

    def test_duality_detects_mismatch(self):
        """Mismatched groups fail the cross-check."""
        report = duality_crosscheck((Z, ZERO), (PointedGroup(Z, GroupElement((1,), ())), ZERO))
        assert not report.passed

    def test_empty_log_counts(self):
        """A fresh log is empty."""
        log = JustificationLog()
        assert len(log) == 0
        assert log.rule_counts() == {}
        assert log.entries == ()
