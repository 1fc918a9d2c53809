"""Fixture files: JSON descriptions of complexes with declared manifold flags.

Schema ``boundaryk.fixture/1``::

    {
      "schema": "boundaryk.fixture/1",
      "name": "s3-boundary-4-simplex",
      "mode": "simplices" | "matrices",
      "simplices": [[["0"], ["1"]], [["0", "1"]]],             # simplices mode, per degree
      "ranks": ["1", "0", "0", "1"],                            # matrices mode
      "boundaries": [[["0"]], ...],                             # matrices mode, d_1..d_top as rows
      "flags": {"closed": true, "orientable": true, "hyperbolic": false},
      "expected": {"homology": ["Z", "0", "0", "Z"]},           # optional
      "note": "free text"                                       # optional
    }

Integers are written as decimal strings so that arbitrary precision survives
any JSON tooling; plain JSON integers are accepted on input.
"""
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from boundaryk.chain import ChainComplexData
from boundaryk.errors import BoundarySquareNonzero, DimensionMismatch, SchemaError
from boundaryk.fgab import FgAbGroup
from boundaryk.intlin import IntMatrix

logger = logging.getLogger(__name__)

FIXTURE_SCHEMA = "boundaryk.fixture/1"
MODES = ("simplices", "matrices")
FLAG_NAMES = ("closed", "orientable", "hyperbolic")
_DECIMAL = re.compile(r"[+-]?[0-9]+")


@dataclass(frozen=True)
class FixtureFlags:
    closed: bool = True
    orientable: bool = True
    hyperbolic: bool = False


@dataclass(frozen=True)
class ManifoldFixture:
    """A parsed fixture; ``payload`` is per-degree simplices or ``(ranks, boundaries)``."""

    name: str
    mode: str
    payload: tuple
    flags: FixtureFlags = FixtureFlags()
    expected: tuple = None
    note: str = ""
    complex: ChainComplexData = field(default=None, compare=False, repr=False)


def _integer(value, path):
    if isinstance(value, bool):
        raise SchemaError("BadInteger", f"expected an integer, got {value!r}", path)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        if _DECIMAL.fullmatch(text):
            return int(text)
    raise SchemaError("BadInteger", f"expected an integer or a decimal string, got {value!r}", path)


def _list(value, path):
    if not isinstance(value, list):
        raise SchemaError("BadType", f"expected a list, got {type(value).__name__}", path)
    return value


def _required(document, key, path=""):
    if key not in document:
        raise SchemaError("MissingField", f"field {key!r} is required", f"{path}{key}")
    return document[key]


def _parse_simplices(raw):
    degrees = []
    for k, level in enumerate(_list(raw, "simplices")):
        simplices = []
        for j, simplex in enumerate(_list(level, f"simplices[{k}]")):
            path = f"simplices[{k}][{j}]"
            simplices.append(tuple(_integer(v, f"{path}[{i}]") for i, v in enumerate(_list(simplex, path))))
        degrees.append(tuple(simplices))
    if not degrees:
        raise SchemaError("MissingField", "at least one degree of simplices is required", "simplices")
    return tuple(degrees)


def _parse_matrices(document):
    ranks = tuple(_integer(r, f"ranks[{n}]") for n, r in enumerate(_list(_required(document, "ranks"), "ranks")))
    for n, r in enumerate(ranks):
        if r < 0:
            raise SchemaError("BadInteger", f"chain ranks are non-negative, got {r}", f"ranks[{n}]")
    raw_boundaries = _list(_required(document, "boundaries"), "boundaries")
    if len(raw_boundaries) != max(len(ranks) - 1, 0):
        raise SchemaError(
            "DimensionMismatch",
            f"{len(ranks)} ranks need {max(len(ranks) - 1, 0)} boundary matrices, got {len(raw_boundaries)}",
            "boundaries",
        )
    boundaries = []
    for n, raw in enumerate(raw_boundaries, start=1):
        path = f"boundaries[{n - 1}]"
        rows = [
            [_integer(x, f"{path}[{i}][{j}]") for j, x in enumerate(_list(row, f"{path}[{i}]"))]
            for i, row in enumerate(_list(raw, path))
        ]
        try:
            boundaries.append(IntMatrix.from_rows(rows, cols=ranks[n]))
        except DimensionMismatch as exc:
            raise SchemaError("DimensionMismatch", str(exc), path) from None
    return ranks, tuple(boundaries)


def _build_complex(mode, payload):
    try:
        if mode == "simplices":
            return ChainComplexData.from_simplicial(payload)
        ranks, boundaries = payload
        return ChainComplexData.from_matrices(ranks, boundaries)
    except BoundarySquareNonzero as exc:
        raise SchemaError("BoundarySquare", str(exc), "boundaries") from None
    except DimensionMismatch as exc:
        raise SchemaError("DimensionMismatch", str(exc), mode) from None


def parse_fixture(text: str) -> ManifoldFixture:
    """Parse fixture JSON text; raises ``SchemaError`` (and the chain errors such as ``MissingFace``)."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("InvalidJSON", exc.msg, line=exc.lineno) from None
    if not isinstance(document, dict):
        raise SchemaError("BadType", "a fixture is a JSON object")

    schema = _required(document, "schema")
    if schema != FIXTURE_SCHEMA:
        raise SchemaError("UnknownSchema", f"expected {FIXTURE_SCHEMA!r}, got {schema!r}", "schema")

    name = _required(document, "name")
    if not isinstance(name, str) or not name.strip():
        raise SchemaError("BadName", "name must be a nonempty string", "name")

    mode = _required(document, "mode")
    if mode not in MODES:
        raise SchemaError("BadMode", f"mode must be one of {', '.join(MODES)}, got {mode!r}", "mode")
    if mode == "simplices":
        payload = _parse_simplices(_required(document, "simplices"))
    else:
        payload = _parse_matrices(document)

    raw_flags = document.get("flags", {})
    if not isinstance(raw_flags, dict):
        raise SchemaError("BadType", "flags must be an object", "flags")
    for key, value in raw_flags.items():
        if key not in FLAG_NAMES:
            raise SchemaError("UnknownFlag", f"unknown flag {key!r}", f"flags.{key}")
        if not isinstance(value, bool):
            raise SchemaError("BadType", "flags are booleans", f"flags.{key}")
    flags = FixtureFlags(**raw_flags)

    expected = None
    if "expected" in document:
        raw_expected = document["expected"]
        if not isinstance(raw_expected, dict):
            raise SchemaError("BadType", "expected must be an object", "expected")
        raw = _list(_required(raw_expected, "homology", "expected."), "expected.homology")
        try:
            expected = tuple(FgAbGroup.parse(g) for g in raw)
        except (TypeError, ValueError, AttributeError) as exc:
            raise SchemaError("BadGroup", str(exc), "expected.homology") from None

    note = document.get("note", "")
    if not isinstance(note, str):
        raise SchemaError("BadType", "note must be a string", "note")

    fixture = ManifoldFixture(
        name=name,
        mode=mode,
        payload=payload,
        flags=flags,
        expected=expected,
        note=note,
        complex=_build_complex(mode, payload),
    )
    logger.debug("Parsed fixture %s (%s mode, ranks %s)", name, mode, fixture.complex.ranks)
    return fixture


def serialize_fixture(fixture: ManifoldFixture) -> str:
    document = {
        "schema": FIXTURE_SCHEMA,
        "name": fixture.name,
        "mode": fixture.mode,
        "flags": {
            "closed": fixture.flags.closed,
            "orientable": fixture.flags.orientable,
            "hyperbolic": fixture.flags.hyperbolic,
        },
    }
    if fixture.mode == "simplices":
        document["simplices"] = [[[str(v) for v in s] for s in level] for level in fixture.payload]
    else:
        ranks, boundaries = fixture.payload
        document["ranks"] = [str(r) for r in ranks]
        document["boundaries"] = [[[str(x) for x in row] for row in d.tolist()] for d in boundaries]
    if fixture.expected is not None:
        document["expected"] = {"homology": [str(g) for g in fixture.expected]}
    if fixture.note:
        document["note"] = fixture.note
    return json.dumps(document, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def load_fixture(path) -> ManifoldFixture:
    path = Path(path)
    return parse_fixture(path.read_text(encoding="utf-8"))


class FixtureLoader:
    """Loads the ``*.json`` fixtures of a corpus directory in file-name order."""

    def __init__(self, directory):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise FileNotFoundError(f"Corpus directory {self.directory} does not exist.")

    def paths(self):
        return sorted(self.directory.glob("*.json"))

    def load(self, name: str) -> ManifoldFixture:
        return load_fixture(self.directory / f"{name}.json")

    def corpus(self):
        fixtures = {}
        for path in self.paths():
            fixture = load_fixture(path)
            if fixture.name in fixtures:
                raise SchemaError("DuplicateName", f"fixture name {fixture.name!r} is used twice", path.name)
            fixtures[fixture.name] = fixture
        return fixtures


def load_corpus(directory):
    return FixtureLoader(directory).corpus()
