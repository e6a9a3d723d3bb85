"""Multi-way DFT between the spatial and spectral forms of t-scalars.

Arrays are kept in their natural multi-dimensional layout; flattening is
row-major (C order, last index fastest), which fixes the slice index k.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import ShapeError


@dataclass(frozen=True)
class TShape:
    dims: tuple = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims):
            raise ShapeError(f"t-scalar dims must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def N(self) -> int:
        return len(self.dims)

    @property
    def K(self) -> int:
        return math.prod(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __repr__(self):
        return f"TShape{self.dims}"


def as_shape(shape) -> TShape:
    if isinstance(shape, TShape):
        return shape
    if isinstance(shape, (int, np.integer)):
        return TShape((int(shape),))
    return TShape(tuple(shape))


@lru_cache(maxsize=64)
def _fourier(n):
    m = np.arange(n)
    w = np.exp(-2j * np.pi * np.outer(m, m) / n)
    w.setflags(write=False)
    return w


def fourier_matrix(n: int) -> np.ndarray:
    """n x n DFT matrix, entry (m1, m2) = exp(-2 pi i m1 m2 / n) (0-based)."""
    if int(n) < 1:
        raise ShapeError(f"Fourier matrix size must be >= 1, got {n}")
    return _fourier(int(n))


def _check(x, shape, lead=True):
    x = np.asarray(x)
    dims = shape.dims
    got = x.shape[:len(dims)] if lead else x.shape
    if got != dims:
        raise ShapeError(f"array shape {x.shape} does not match t-scalar dims {dims}")
    return x


def dft(x, shape=None) -> np.ndarray:
    """Spectrum of x over its leading t-scalar axes.

    `x` has shape dims (a single t-scalar) or dims + trailing axes, in which
    case every trailing position is transformed independently.
    """
    x = np.asarray(x)
    shape = TShape(x.shape) if shape is None else as_shape(shape)
    x = _check(x, shape)
    if shape.N == 0:
        return x.astype(np.complex128, copy=True)
    return np.fft.fftn(x, axes=tuple(range(shape.N)))


def idft(s, shape=None) -> np.ndarray:
    s = np.asarray(s)
    shape = TShape(s.shape) if shape is None else as_shape(shape)
    s = _check(s, shape)
    if shape.N == 0:
        return s.astype(np.complex128, copy=True)
    return np.fft.ifftn(s, axes=tuple(range(shape.N)))


def dft_modeproduct(x, shape=None, inverse=False) -> np.ndarray:
    """Reference transform: successive n-mode products with the Fourier matrices."""
    x = np.asarray(x, dtype=np.complex128)
    shape = TShape(x.shape) if shape is None else as_shape(shape)
    x = _check(x, shape)
    for n, dim in enumerate(shape.dims):
        w = fourier_matrix(dim)
        if inverse:
            w = w.conj() / dim
        x = np.moveaxis(np.tensordot(w, x, axes=([1], [n])), 0, n)
    return x
