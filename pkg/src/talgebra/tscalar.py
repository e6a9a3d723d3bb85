"""t-scalars: fixed-shape complex arrays multiplied by circular convolution.

All multiplicative, order, root and rank operations act on the spectrum,
where the algebra splits into K independent copies of the complex field.
Slice indices are 0-based and follow the row-major order of `spectral`.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, ShapeError, SingularError
from .spectral import TShape, as_shape, dft, idft


@dataclass(frozen=True)
class ToleranceProfile:
    eq_tol: float = 1e-10
    cone_tol: float = 1e-10
    cone_floor: float = 1e-12
    rank_tol_factor: Optional[float] = None  # None -> eps * max(M1, M2)
    pinv_floor: float = 1e-14

    def __post_init__(self):
        vals = [self.eq_tol, self.cone_tol, self.cone_floor, self.pinv_floor]
        if self.rank_tol_factor is not None:
            vals.append(self.rank_tol_factor)
        if any(not v > 0 for v in vals):
            raise ValueError("all tolerances must be positive")

    def cone_abs(self, *spectra) -> float:
        scale = max((float(np.max(np.abs(s))) if np.size(s) else 0.0) for s in spectra)
        return max(self.cone_tol * scale, self.cone_floor)

    def rank_factor(self, m1, m2) -> float:
        if self.rank_tol_factor is not None:
            return self.rank_tol_factor
        return np.finfo(np.float64).eps * max(m1, m2)


DEFAULT_TOL = ToleranceProfile()


class TScalar:
    """Element of the t-algebra, held lazily in spatial and/or spectral form."""

    __slots__ = ("shape", "_spatial", "_spectrum")
    __hash__ = None

    def __init__(self, shape, spatial=None, spectrum=None):
        shape = as_shape(shape)
        if spatial is None and spectrum is None:
            raise ValueError("need a spatial or spectral form")
        if spatial is not None:
            spatial = np.array(spatial, dtype=np.complex128).reshape(shape.dims)
            spatial.setflags(write=False)
        if spectrum is not None:
            spectrum = np.array(spectrum, dtype=np.complex128).reshape(shape.dims)
            spectrum.setflags(write=False)
        self.shape = shape
        self._spatial = spatial
        self._spectrum = spectrum

    @classmethod
    def from_spatial(cls, x, shape=None):
        x = np.asarray(x)
        return cls(x.shape if shape is None else shape, spatial=x)

    @classmethod
    def from_spectrum(cls, s, shape=None):
        s = np.asarray(s)
        return cls(s.shape if shape is None else shape, spectrum=s)

    @property
    def spatial(self) -> np.ndarray:
        if self._spatial is None:
            x = idft(self._spectrum, self.shape)
            x.setflags(write=False)
            self._spatial = x
        return self._spatial

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            s = dft(self._spatial, self.shape)
            s.setflags(write=False)
            self._spectrum = s
        return self._spectrum

    @property
    def K(self):
        return self.shape.K

    def __repr__(self):
        return f"TScalar({self.shape.dims}, spatial={np.round(self.spatial, 6).tolist()})"

    def __add__(self, other):
        return add(self, _coerce(other, self.shape))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, negate(_coerce(other, self.shape)))

    def __rsub__(self, other):
        return add(_coerce(other, self.shape), negate(self))

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, TScalar):
            return mul(self, other)
        if np.isscalar(other):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return scale(other, self)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return scale(1.0 / other, self)
        return mul(self, invert(other))

    def __pow__(self, p):
        return power(self, p)

    def __eq__(self, other):
        if not isinstance(other, TScalar):
            return NotImplemented
        return isclose(self, other)

    def conj(self):
        return conj(self)


def _coerce(x, shape):
    if isinstance(x, TScalar):
        return x
    if np.isscalar(x):
        return scale(x, one(shape))
    raise TypeError(f"cannot combine TScalar with {type(x).__name__}")


def _same(x, y):
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch: {x.shape} vs {y.shape}")


def isclose(x: TScalar, y: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Relative Frobenius closeness of the spectra."""
    _same(x, y)
    a, b = x.spectrum, y.spectrum
    d = np.linalg.norm(a - b)
    scale_ = max(np.linalg.norm(a), np.linalg.norm(b))
    return bool(d <= tol.eq_tol * scale_ or d <= tol.cone_floor)


def zero(shape) -> TScalar:
    shape = as_shape(shape)
    return TScalar(shape, spatial=np.zeros(shape.dims), spectrum=np.zeros(shape.dims))


def one(shape) -> TScalar:
    shape = as_shape(shape)
    x = np.zeros(shape.dims)
    x[(0,) * shape.N] = 1.0
    return TScalar(shape, spatial=x, spectrum=np.ones(shape.dims))


def add(x: TScalar, y: TScalar) -> TScalar:
    _same(x, y)
    if x._spatial is not None and y._spatial is not None:
        return TScalar(x.shape, spatial=x._spatial + y._spatial)
    return TScalar(x.shape, spectrum=x.spectrum + y.spectrum)


def negate(x: TScalar) -> TScalar:
    return scale(-1, x)


def scale(alpha, x: TScalar) -> TScalar:
    if x._spatial is not None:
        return TScalar(x.shape, spatial=alpha * x._spatial)
    return TScalar(x.shape, spectrum=alpha * x._spectrum)


def mul(x: TScalar, y: TScalar) -> TScalar:
    _same(x, y)
    return TScalar(x.shape, spectrum=x.spectrum * y.spectrum)


def power(x: TScalar, p: int) -> TScalar:
    p = int(p)
    if p < 0:
        raise DomainError("negative powers need invert()")
    if p == 0:
        return one(x.shape)
    return TScalar(x.shape, spectrum=x.spectrum ** p)


def conj(x: TScalar) -> TScalar:
    return TScalar(x.shape, spectrum=np.conj(x.spectrum))


def conj_spatial(x: TScalar) -> TScalar:
    """Conjugation through the index reflection i -> mod(-i, I), no transform."""
    a = np.conj(x.spatial)
    for n in range(x.shape.N):
        a = np.roll(np.flip(a, axis=n), 1, axis=n)
    return TScalar(x.shape, spatial=a)


def is_self_conjugate(x: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    s = x.spectrum
    return bool(np.all(np.abs(s.imag) <= tol.cone_abs(s)))


def re(x: TScalar) -> TScalar:
    return TScalar(x.shape, spectrum=(x.spectrum + np.conj(x.spectrum)) / 2)


def im(x: TScalar) -> TScalar:
    return TScalar(x.shape, spectrum=(x.spectrum - np.conj(x.spectrum)) / 2j)


def _require_self_conjugate(tol, *xs):
    s = np.stack([x.spectrum for x in xs])
    if np.any(np.abs(s.imag) > tol.cone_abs(s)):
        raise DomainError("order comparison needs self-conjugate t-scalars")


def is_nonnegative(x: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    _require_self_conjugate(tol, x)
    s = x.spectrum
    return bool(np.all(s.real >= -tol.cone_abs(s)))


def partial_le(x: TScalar, y: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """x <= y in the spectral cone order."""
    _same(x, y)
    _require_self_conjugate(tol, x, y)
    d = y.spectrum.real - x.spectrum.real
    return bool(np.all(d >= -tol.cone_abs(x.spectrum, y.spectrum)))


def nth_root(x: TScalar, p: int, tol: ToleranceProfile = DEFAULT_TOL) -> TScalar:
    if int(p) < 1:
        raise DomainError("root order must be >= 1")
    if not is_nonnegative(x, tol):
        raise DomainError("nth_root needs a nonnegative t-scalar")
    s = np.clip(x.spectrum.real, 0.0, None)
    return TScalar(x.shape, spectrum=s ** (1.0 / int(p)))


def abs_r(x: TScalar) -> TScalar:
    return TScalar(x.shape, spectrum=np.abs(x.spectrum))


def psi(x: TScalar, y: TScalar) -> TScalar:
    """Inner product conj(x) o y, valued in the t-algebra."""
    _same(x, y)
    return TScalar(x.shape, spectrum=np.conj(x.spectrum) * y.spectrum)


def inner_canonical(x: TScalar, y: TScalar) -> complex:
    _same(x, y)
    return complex(np.vdot(x.spatial, y.spatial))


@dataclass(frozen=True)
class IdempotentSet:
    shape: TShape
    members: tuple

    def __len__(self):
        return len(self.members)

    def __getitem__(self, k):
        return self.members[k]

    def __iter__(self):
        return iter(self.members)


def idempotent(shape, k: int) -> TScalar:
    """Primitive idempotent Q_k: spectrum is the k-th basis vector."""
    shape = as_shape(shape)
    if not 0 <= k < shape.K:
        raise IndexError(f"slice index {k} out of range for K={shape.K}")
    s = np.zeros(shape.K)
    s[k] = 1.0
    return TScalar(shape, spectrum=s.reshape(shape.dims))


def primitive_idempotents(shape) -> IdempotentSet:
    shape = as_shape(shape)
    return IdempotentSet(shape, tuple(idempotent(shape, k) for k in range(shape.K)))


def is_idempotent(x: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    s = x.spectrum
    t = max(tol.cone_tol, tol.cone_floor)
    return bool(np.all((np.abs(s) <= t) | (np.abs(s - 1) <= t)))


def from_slices(shape, values) -> TScalar:
    """sum_k values[k] Q_k."""
    shape = as_shape(shape)
    return TScalar(shape, spectrum=np.asarray(values, dtype=np.complex128).reshape(shape.dims))


def tau(k: int, y: TScalar) -> complex:
    """k-th coordinate of y in the series sum_k tau_k Q_k."""
    q = idempotent(y.shape, k)
    return y.shape.K * inner_canonical(q, y)


def series_coords(y: TScalar) -> np.ndarray:
    return np.array([tau(k, y) for k in range(y.shape.K)])


def _dead(x, tol):
    s = x.spectrum.reshape(-1)
    return np.flatnonzero(np.abs(s) <= tol.cone_abs(s))


def is_invertible(x: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    return _dead(x, tol).size == 0


def invert(x: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> TScalar:
    dead = _dead(x, tol)
    if dead.size:
        raise SingularError(f"t-scalar not invertible, zero spectrum at slices {dead.tolist()}", dead)
    return TScalar(x.shape, spectrum=1.0 / x.spectrum)


def tscalar_rank(x: TScalar, tol: ToleranceProfile = DEFAULT_TOL) -> TScalar:
    s = x.spectrum
    return TScalar(x.shape, spectrum=(np.abs(s) > tol.cone_abs(s)).astype(float))
