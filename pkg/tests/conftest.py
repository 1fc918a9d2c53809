from pathlib import Path

import numpy as np
import pytest

from boundaryk.chain import ChainComplexData
from boundaryk.fixtures import load_fixture
from boundaryk.intlin import IntMatrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def rng():
    # deterministic seed for every randomized suite
    return np.random.default_rng(20240613)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def corpus_dir():
    return FIXTURES / "corpus"


@pytest.fixture
def s3_fixture():
    return load_fixture(FIXTURES / "manifolds" / "s3-boundary-4-simplex.json")


@pytest.fixture
def torus_fixture():
    return load_fixture(FIXTURES / "manifolds" / "three-torus.json")


@pytest.fixture
def torsion_fixture():
    return load_fixture(FIXTURES / "manifolds" / "torsion-z5-z5.json")


@pytest.fixture
def point_fixture():
    return load_fixture(FIXTURES / "complexes" / "point.json")


@pytest.fixture
def solid_tetrahedron_fixture():
    return load_fixture(FIXTURES / "complexes" / "cone-tetrahedron.json")


def synthetic_complex(d: int) -> ChainComplexData:
    """Ranks ``(1, d, d, 1)`` with zero boundaries: homology ``Z, Z^d, Z^d, Z``."""
    return ChainComplexData.from_matrices(
        (1, d, d, 1),
        (IntMatrix.zeros(1, d), IntMatrix.zeros(d, d), IntMatrix.zeros(d, 1)),
    )


@pytest.fixture
def synthetic():
    return synthetic_complex


@pytest.fixture
def point_complex():
    return ChainComplexData.from_simplicial([[(0,)]])
