"""t-matrices stored as a stack of K spectral slices (K, M1, M2).

Every operation acts slice by slice, so tsvd/pinv/matmul accept an optional
`workers` count that maps over chunks of slices in a thread pool.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import NumericError, ShapeError
from .spectral import TShape, as_shape, dft, idft
from .tscalar import DEFAULT_TOL, TScalar, ToleranceProfile


class TMatrix:
    __slots__ = ("shape", "slices")
    __hash__ = None

    def __init__(self, shape, slices):
        shape = as_shape(shape)
        slices = np.asarray(slices, dtype=np.complex128)
        if slices.ndim != 3 or slices.shape[0] != shape.K:
            raise ShapeError(f"expected ({shape.K}, M1, M2) slices, got {slices.shape}")
        if slices.shape[1] < 1 or slices.shape[2] < 1:
            raise ShapeError("t-matrix dimensions must be positive")
        self.shape = shape
        self.slices = slices

    @property
    def K(self):
        return self.shape.K

    @property
    def rows(self):
        return self.slices.shape[1]

    @property
    def cols(self):
        return self.slices.shape[2]

    @property
    def dims(self):
        return self.rows, self.cols

    def __repr__(self):
        return f"TMatrix({self.shape.dims}, {self.rows}x{self.cols})"

    @classmethod
    def from_spatial(cls, array, shape=None):
        """From an array over (I1..IN, M1, M2); by default all but the last two axes are t-scalar axes."""
        array = np.asarray(array)
        if array.ndim < 2:
            raise ShapeError("need at least the two matrix axes")
        shape = TShape(array.shape[:-2]) if shape is None else as_shape(shape)
        if array.shape[:-2] != shape.dims:
            raise ShapeError(f"array {array.shape} does not match t-scalar dims {shape.dims}")
        m1, m2 = array.shape[-2:]
        return cls(shape, dft(array, shape).reshape(shape.K, m1, m2))

    def to_spatial(self) -> np.ndarray:
        s = self.slices.reshape(self.shape.dims + self.dims)
        return idft(s, self.shape)

    def slice(self, k) -> np.ndarray:
        return self.slices[k]

    def entry(self, m1, m2) -> TScalar:
        return TScalar(self.shape, spectrum=self.slices[:, m1, m2].reshape(self.shape.dims))

    @classmethod
    def from_entries(cls, rows):
        rows = [list(r) for r in rows]
        shape = rows[0][0].shape
        s = np.stack([np.stack([x.spectrum.reshape(-1) for x in r], axis=-1) for r in rows], axis=-2)
        return cls(shape, s)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __neg__(self):
        return TMatrix(self.shape, -self.slices)

    def __matmul__(self, other):
        return matmul(self, other)

    def __mul__(self, other):
        if isinstance(other, TScalar):
            return tscalar_mul(other, self)
        if np.isscalar(other):
            return scalar_mul(other, self)
        return NotImplemented

    __rmul__ = __mul__

    @property
    def H(self):
        return conj_transpose(self)


def assemble(shape, mats) -> TMatrix:
    shape = as_shape(shape)
    mats = np.asarray(mats, dtype=np.complex128)
    if mats.shape[0] != shape.K:
        raise ShapeError(f"need {shape.K} slices, got {mats.shape[0]}")
    return TMatrix(shape, mats)


def zeros(shape, m1, m2) -> TMatrix:
    shape = as_shape(shape)
    return TMatrix(shape, np.zeros((shape.K, m1, m2), dtype=np.complex128))


def identity_tmatrix(shape, m) -> TMatrix:
    shape = as_shape(shape)
    if m < 1:
        raise ShapeError("identity size must be >= 1")
    return TMatrix(shape, np.broadcast_to(np.eye(m, dtype=np.complex128), (shape.K, m, m)).copy())


def diag(values: List[TScalar]) -> TMatrix:
    shape = values[0].shape
    d = np.stack([v.spectrum.reshape(-1) for v in values], axis=-1)
    out = np.zeros((shape.K, len(values), len(values)), dtype=np.complex128)
    idx = np.arange(len(values))
    out[:, idx, idx] = d
    return TMatrix(shape, out)


def _same_shape(x, y):
    if x.shape != y.shape:
        raise ShapeError(f"t-scalar shape mismatch: {x.shape} vs {y.shape}")


def add(x: TMatrix, y: TMatrix) -> TMatrix:
    _same_shape(x, y)
    if x.dims != y.dims:
        raise ShapeError(f"dimension mismatch: {x.dims} vs {y.dims}")
    return TMatrix(x.shape, x.slices + y.slices)


def scalar_mul(alpha, x: TMatrix) -> TMatrix:
    return TMatrix(x.shape, alpha * x.slices)


def tscalar_mul(lam: TScalar, x: TMatrix) -> TMatrix:
    _same_shape(lam, x)
    return TMatrix(x.shape, lam.spectrum.reshape(-1, 1, 1) * x.slices)


def ltimes(y_mat, x: TScalar) -> TMatrix:
    """Complex matrix times t-scalar: slice k is y_mat scaled by spectrum(x)[k]."""
    y_mat = np.atleast_2d(np.asarray(y_mat, dtype=np.complex128))
    return TMatrix(x.shape, x.spectrum.reshape(-1, 1, 1) * y_mat[None])


def slice_map(fn, stack, workers=None, chunk=None):
    """Apply fn to chunks of a (K, ...) stack; results are concatenated in slice order."""
    K = stack.shape[0]
    if not workers or workers <= 1 or K <= 1:
        return fn(stack)
    chunk = chunk or -(-K // workers)
    parts = [stack[i:i + chunk] for i in range(0, K, chunk)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        res = list(ex.map(fn, parts))
    if isinstance(res[0], tuple):
        return tuple(np.concatenate(r, axis=0) for r in zip(*res))
    return np.concatenate(res, axis=0)


def matmul(x: TMatrix, y: TMatrix, workers=None) -> TMatrix:
    _same_shape(x, y)
    if x.cols != y.rows:
        raise ShapeError(f"cannot multiply {x.dims} by {y.dims}")
    if not workers or workers <= 1:
        return TMatrix(x.shape, x.slices @ y.slices)
    both = np.concatenate([x.slices.reshape(x.K, -1), y.slices.reshape(y.K, -1)], axis=1)
    n = x.rows * x.cols

    def f(c):
        a = c[:, :n].reshape(-1, x.rows, x.cols)
        b = c[:, n:].reshape(-1, y.rows, y.cols)
        return a @ b

    return TMatrix(x.shape, slice_map(f, both, workers))


def conj_transpose(x: TMatrix) -> TMatrix:
    return TMatrix(x.shape, np.conj(np.swapaxes(x.slices, 1, 2)))


def trace(x: TMatrix) -> TScalar:
    if x.rows != x.cols:
        raise ShapeError("trace needs a square t-matrix")
    return TScalar(x.shape, spectrum=np.trace(x.slices, axis1=1, axis2=2).reshape(x.shape.dims))


@dataclass(frozen=True)
class TsvdFactors:
    U: TMatrix
    S: tuple  # M TScalar singular values
    V: TMatrix
    sigma: np.ndarray  # (K, M) real, per-slice descending

    def reconstruct(self) -> TMatrix:
        return TMatrix(self.U.shape, (self.U.slices * self.sigma[:, None, :]) @ np.conj(np.swapaxes(self.V.slices, 1, 2)))


def _svd(stack):
    try:
        return np.linalg.svd(stack, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"slice SVD did not converge: {e}") from e


def tsvd(x: TMatrix, workers=None) -> TsvdFactors:
    u, s, vh = slice_map(_svd, x.slices, workers)
    sv = tuple(TScalar(x.shape, spectrum=s[:, m].reshape(x.shape.dims)) for m in range(s.shape[1]))
    return TsvdFactors(TMatrix(x.shape, u), sv, TMatrix(x.shape, np.conj(np.swapaxes(vh, 1, 2))), s)


def _cutoff(s, m1, m2, tol):
    smax = s[:, :1] if s.shape[1] else np.zeros((s.shape[0], 1))
    return np.maximum(tol.rank_factor(m1, m2) * smax, tol.pinv_floor)


def slice_ranks(x: TMatrix, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    s = np.linalg.svd(x.slices, compute_uv=False)
    return np.sum(s > _cutoff(s, x.rows, x.cols, tol), axis=1)


def pinv(x: TMatrix, tol: ToleranceProfile = DEFAULT_TOL, workers=None) -> TMatrix:
    m1, m2 = x.dims

    def f(stack):
        u, s, vh = _svd(stack)
        keep = s > _cutoff(s, m1, m2, tol)
        inv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
        return (np.conj(np.swapaxes(vh, 1, 2)) * inv[:, None, :]) @ np.conj(np.swapaxes(u, 1, 2))

    return TMatrix(x.shape, slice_map(f, x.slices, workers))


def rank(x: TMatrix, tol: ToleranceProfile = DEFAULT_TOL) -> TScalar:
    """sum_k rank(slice k) Q_k."""
    r = slice_ranks(x, tol).astype(float)
    return TScalar(x.shape, spectrum=r.reshape(x.shape.dims))


def psi(x: TMatrix, y: TMatrix) -> TScalar:
    """Sesquilinear form sum_{m1,m2} conj(x_m) o y_m."""
    _same_shape(x, y)
    if x.dims != y.dims:
        raise ShapeError(f"dimension mismatch: {x.dims} vs {y.dims}")
    s = np.einsum("kij,kij->k", np.conj(x.slices), y.slices)
    return TScalar(x.shape, spectrum=s.reshape(x.shape.dims))


def frob_norm_r(x: TMatrix) -> TScalar:
    s = np.linalg.norm(x.slices.reshape(x.K, -1), axis=1)
    return TScalar(x.shape, spectrum=s.reshape(x.shape.dims))


def distance_d(x: TMatrix, y: TMatrix) -> TScalar:
    _same_shape(x, y)
    if x.dims != y.dims:
        raise ShapeError(f"dimension mismatch: {x.dims} vs {y.dims}")
    return frob_norm_r(add(x, -y))


def hstack(cols: List[TMatrix]) -> TMatrix:
    for c in cols[1:]:
        _same_shape(cols[0], c)
    return TMatrix(cols[0].shape, np.concatenate([c.slices for c in cols], axis=2))
