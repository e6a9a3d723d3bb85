import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from talgebra.spectral import TShape
from talgebra.tmatrix import TMatrix
from talgebra.tscalar import TScalar

SHAPES = [(1,), (2,), (3,), (2, 2), (3, 3), (2, 3, 2)]


def rand_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_tscalar(rng, dims):
    return TScalar.from_spatial(rand_complex(rng, dims))


def rand_selfconj(rng, dims):
    s = rng.standard_normal(dims)
    return TScalar.from_spectrum(s)


def rand_nonneg(rng, dims):
    return TScalar.from_spectrum(np.abs(rng.standard_normal(dims)))


def rand_tmatrix(rng, dims, m1, m2):
    return TMatrix.from_spatial(rand_complex(rng, tuple(dims) + (m1, m2)), dims)


def rel(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
