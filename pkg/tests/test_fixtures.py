import json

import pytest

from boundaryk.errors import MissingFace, SchemaError
from boundaryk.fgab import FgAbGroup
from boundaryk.fixtures import FixtureLoader, load_corpus, parse_fixture, serialize_fixture


def document(**overrides):
    base = {
        "schema": "boundaryk.fixture/1",
        "name": "point",
        "mode": "matrices",
        "ranks": ["1"],
        "boundaries": [],
    }
    base.update(overrides)
    return json.dumps(base)


class TestParseFixture:
    """Tests for fixture parsing."""

    def test_minimal_matrices_fixture(self):
        """A single rank-one degree parses as a point."""
        fixture = parse_fixture(document())
        assert fixture.name == "point"
        assert fixture.complex.ranks == (1,)
        assert fixture.flags.hyperbolic is False
        assert fixture.expected is None

    def test_plain_json_integers_accepted(self):
        """Integers may also be written as JSON numbers."""
        fixture = parse_fixture(document(ranks=[1, 1], boundaries=[[[0]]]))
        assert fixture.complex.ranks == (1, 1)

    def test_s3_fixture(self, s3_fixture):
        """The shipped ∂Δ⁴ fixture has 30 simplices and declared homology."""
        assert sum(len(level) for level in s3_fixture.payload) == 30
        assert s3_fixture.expected == (FgAbGroup(1), FgAbGroup(), FgAbGroup(), FgAbGroup(1))

    def test_boundary_square_nonzero(self):
        """∂∂ != 0 is a schema error with reason BoundarySquare."""
        text = document(ranks=["1", "1", "1"], boundaries=[[["1"]], [["1"]]])
        with pytest.raises(SchemaError) as info:
            parse_fixture(text)
        assert info.value.reason == "BoundarySquare"

    def test_invalid_json_reports_line(self):
        """Broken JSON carries its line number."""
        with pytest.raises(SchemaError) as info:
            parse_fixture('{\n  "schema": \n}')
        assert info.value.reason == "InvalidJSON"
        assert info.value.line == 3

    @pytest.mark.parametrize(
        "overrides, reason, path",
        [
            ({"schema": "other/1"}, "UnknownSchema", "schema"),
            ({"name": ""}, "BadName", "name"),
            ({"mode": "cells"}, "BadMode", "mode"),
            ({"ranks": ["one"]}, "BadInteger", "ranks[0]"),
            ({"ranks": [True]}, "BadInteger", "ranks[0]"),
            ({"ranks": ["-1"]}, "BadInteger", "ranks[0]"),
            ({"ranks": ["\u00b2"]}, "BadInteger", "ranks[0]"),
            ({"ranks": ["\u0661"]}, "BadInteger", "ranks[0]"),
            ({"ranks": ["1_0"]}, "BadInteger", "ranks[0]"),
            ({"ranks": ["1", "1"]}, "DimensionMismatch", "boundaries"),
            ({"ranks": ["1", "2"], "boundaries": [[["0"]]]}, "DimensionMismatch", "boundaries[0]"),
            ({"flags": {"spherical": True}}, "UnknownFlag", "flags.spherical"),
            ({"flags": {"hyperbolic": "yes"}}, "BadType", "flags.hyperbolic"),
            ({"expected": {"homology": ["Q"]}}, "BadGroup", "expected.homology"),
            ({"expected": []}, "BadType", "expected"),
            ({"note": 3}, "BadType", "note"),
        ],
    )
    def test_schema_errors(self, overrides, reason, path):
        """Malformed documents raise SchemaError with a reason and a field path."""
        with pytest.raises(SchemaError) as info:
            parse_fixture(document(**overrides))
        assert info.value.reason == reason
        assert info.value.path == path

    def test_missing_field(self):
        """Required fields are named in the error."""
        with pytest.raises(SchemaError, match="MissingField at ranks"):
            parse_fixture(json.dumps({"schema": "boundaryk.fixture/1", "name": "x", "mode": "matrices"}))

    def test_not_an_object(self):
        """The top level is a JSON object."""
        with pytest.raises(SchemaError, match="BadType"):
            parse_fixture("[]")

    def test_missing_face_propagates(self):
        """Chain errors from simplicial input propagate unchanged."""
        text = document(mode="simplices", simplices=[[["0"], ["1"]], [["0", "2"]]])
        with pytest.raises(MissingFace):
            parse_fixture(text)

    def test_round_trip(self, s3_fixture, torsion_fixture, corpus_dir):
        """serialize then parse gives an identical fixture."""
        fixtures = [s3_fixture, torsion_fixture, *load_corpus(corpus_dir).values()]
        for fixture in fixtures:
            again = parse_fixture(serialize_fixture(fixture))
            assert again == fixture
            assert again.complex.boundaries == fixture.complex.boundaries


class TestFixtureLoader:
    """Tests for corpus loading."""

    def test_corpus_sorted_and_complete(self, corpus_dir):
        """The synthetic corpus holds d = 0..5 in file-name order."""
        corpus = load_corpus(corpus_dir)
        assert list(corpus) == [f"synthetic-d{d}" for d in range(6)]

    def test_duplicate_names_rejected(self, tmp_path):
        """Two files with the same fixture name are rejected."""
        (tmp_path / "a.json").write_text(document(), encoding="utf-8")
        (tmp_path / "b.json").write_text(document(), encoding="utf-8")
        with pytest.raises(SchemaError) as info:
            FixtureLoader(tmp_path).corpus()
        assert info.value.reason == "DuplicateName"

    def test_missing_directory(self, tmp_path):
        """A missing corpus directory raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            FixtureLoader(tmp_path / "absent")

    def test_load_by_name(self, fixtures_dir):
        """load() reads NAME.json from the directory."""
        fixture = FixtureLoader(fixtures_dir / "complexes").load("point")
        assert fixture.complex.top_dim == 0
