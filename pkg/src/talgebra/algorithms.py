"""Low-rank approximation, least squares, TPCA, pooling, PSNR and TNN over the t-algebra."""
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientDataError, RankError, ShapeError
from .spectral import as_shape
from .tmatrix import (TMatrix, TsvdFactors, _cutoff, _svd, conj_transpose, frob_norm_r,
                      hstack, identity_tmatrix, matmul, pinv, slice_ranks, tsvd)
from .tscalar import DEFAULT_TOL, TScalar, ToleranceProfile


@dataclass(frozen=True)
class RankSpec:
    """Target generalized rank: r*E (uniform) or sum_k r_k Q_k (per slice)."""
    uniform: Optional[int] = None
    per_slice: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if (self.uniform is None) == (self.per_slice is None):
            raise ValueError("give exactly one of uniform / per_slice")
        vals = [self.uniform] if self.uniform is not None else list(self.per_slice)
        for v in vals:
            if isinstance(v, (float, np.floating)) and not float(v).is_integer():
                raise RankError(f"ranks must be integers, got {v}")
            if int(v) < 0:
                raise RankError(f"ranks must be nonnegative, got {v}")
        if self.per_slice is not None:
            object.__setattr__(self, "per_slice", tuple(int(v) for v in self.per_slice))
        else:
            object.__setattr__(self, "uniform", int(self.uniform))

    @classmethod
    def parse(cls, text):
        parts = [p for p in str(text).replace("(", "").replace(")", "").split(",") if p.strip()]
        if len(parts) == 1 and "," not in str(text):
            return cls(uniform=int(parts[0]))
        return cls(per_slice=tuple(int(p) for p in parts))

    def ranks(self, K: int) -> np.ndarray:
        if self.uniform is not None:
            return np.full(K, self.uniform, dtype=int)
        if len(self.per_slice) != K:
            raise RankError(f"per-slice rank has {len(self.per_slice)} entries, need K={K}")
        return np.array(self.per_slice, dtype=int)

    def label(self) -> str:
        if self.uniform is not None:
            return str(self.uniform)
        return "(" + " ".join(str(r) for r in self.per_slice) + ")"

    def sort_key(self):
        return (0, self.uniform, ()) if self.uniform is not None else (1, 0, self.per_slice)

    def as_tscalar(self, shape) -> TScalar:
        shape = as_shape(shape)
        return TScalar(shape, spectrum=self.ranks(shape.K).astype(float).reshape(shape.dims))


def _rank_mask(H: RankSpec, M: int, K: int) -> np.ndarray:
    r = H.ranks(K)
    if np.any(r > M):
        raise RankError(f"rank {int(r.max())} exceeds available {M}")
    return np.arange(M)[None, :] < r[:, None]  # (K, M)


def delta_from_rank(H: RankSpec, M: int, shape) -> List[TScalar]:
    shape = as_shape(shape)
    mask = _rank_mask(H, M, shape.K).astype(float)
    return [TScalar(shape, spectrum=mask[:, m].reshape(shape.dims)) for m in range(M)]


def truncate(f: TsvdFactors, H: RankSpec) -> TMatrix:
    """U o diag(lambda o delta) o V* from precomputed factors."""
    mask = _rank_mask(H, f.sigma.shape[1], f.U.K)
    s = f.sigma * mask
    vh = np.conj(np.swapaxes(f.V.slices, 1, 2))
    return TMatrix(f.U.shape, (f.U.slices * s[:, None, :]) @ vh)


def low_rank_approx(x: TMatrix, H: RankSpec, workers=None) -> TMatrix:
    _rank_mask(H, min(x.dims), x.K)
    return truncate(tsvd(x, workers), H)


def truncation_error(f: TsvdFactors, H: RankSpec) -> np.ndarray:
    """Per-slice squared Frobenius error of the rank-H truncation (Eckart-Young tail)."""
    mask = _rank_mask(H, f.sigma.shape[1], f.U.K)
    return np.sum(np.where(mask, 0.0, f.sigma ** 2), axis=1)


@dataclass(frozen=True)
class LstsqResult:
    beta: TMatrix
    projection: TMatrix
    residual_norm: TScalar
    unique_flag: bool
    projection_tmatrix: Optional[TMatrix] = None


def lstsq(W: TMatrix, A: TMatrix, tol: ToleranceProfile = DEFAULT_TOL,
          projection_matrix=False) -> LstsqResult:
    if W.rows < W.cols:
        raise ShapeError(f"need D >= M, got {W.dims}")
    if A.rows != W.rows:
        raise ShapeError(f"target has {A.rows} rows, W has {W.rows}")
    beta = matmul(pinv(W, tol), A)
    proj = matmul(W, beta)
    res = frob_norm_r(A - proj)
    unique = bool(np.all(slice_ranks(W, tol) == W.cols))
    P = None
    if projection_matrix:
        Wh = conj_transpose(W)
        P = matmul(matmul(W, pinv(matmul(Wh, W), tol)), Wh)
    return LstsqResult(beta, proj, res, unique, P)


def lstsq_general(W: TMatrix, A: TMatrix, xi: TMatrix, tol: ToleranceProfile = DEFAULT_TOL) -> TMatrix:
    if W.rows < W.cols:
        raise ShapeError(f"need D >= M, got {W.dims}")
    Wp = pinv(W, tol)
    free = identity_tmatrix(W.shape, W.cols) - matmul(Wp, W)
    return matmul(Wp, A) + matmul(free, xi)


@dataclass(frozen=True)
class TpcaModel:
    mean: TMatrix  # D x 1
    components: TMatrix  # D x Q_m
    singular_values: tuple
    Q_m: int
    full_rank_flag: bool
    sigma: np.ndarray  # (K, Q_m)


def _as_columns(samples) -> TMatrix:
    if isinstance(samples, TMatrix):
        return samples
    samples = list(samples)
    return hstack(samples)


def pca_slices(w, q_m, tol: ToleranceProfile = DEFAULT_TOL):
    """Per-slice thin SVD of centered data (k, D, N); components beyond the slice rank are zeroed."""
    u, s, _ = _svd(w)
    u, s = u[:, :, :q_m], s[:, :q_m]
    keep = s > _cutoff(s, w.shape[1], w.shape[2], tol)
    return u * keep[:, None, :], np.where(keep, s, 0.0), keep.all(axis=1)


def tpca_fit(samples, tol: ToleranceProfile = DEFAULT_TOL) -> TpcaModel:
    X = _as_columns(samples)
    D, N = X.dims
    if N < 2:
        raise InsufficientDataError("TPCA needs at least two samples")
    mean = X.slices.mean(axis=2, keepdims=True)
    q_m = min(D, N - 1)
    u, s, full = pca_slices(X.slices - mean, q_m, tol)
    sv = tuple(TScalar(X.shape, spectrum=s[:, m].reshape(X.shape.dims)) for m in range(q_m))
    return TpcaModel(TMatrix(X.shape, mean), TMatrix(X.shape, u), sv, q_m, bool(full.all()), s)


def _masked_components(model, H):
    mask = _rank_mask(H, model.Q_m, model.components.K)
    return model.components.slices * mask[:, None, :]


def tpca_transform(model: TpcaModel, y: TMatrix, H: RankSpec) -> TMatrix:
    """Coordinates U_hat* o (y - mean); entries past the rank are zero. y may hold several columns."""
    u = _masked_components(model, H)
    c = np.conj(np.swapaxes(u, 1, 2)) @ (y.slices - model.mean.slices)
    return TMatrix(y.shape, c)


def tpca_reconstruct(model: TpcaModel, y: TMatrix, H: RankSpec) -> TMatrix:
    """P o y + (I - P) o mean with P = U_hat o U_hat*."""
    u = _masked_components(model, H)
    c = np.conj(np.swapaxes(u, 1, 2)) @ (y.slices - model.mean.slices)
    return TMatrix(y.shape, u @ c + model.mean.slices)


def tpca_projection(model: TpcaModel, H: RankSpec) -> TMatrix:
    u = _masked_components(model, H)
    return TMatrix(model.components.shape, u @ np.conj(np.swapaxes(u, 1, 2)))


def average_pool(x: TMatrix) -> np.ndarray:
    """Mean of the K entries of every t-scalar, i.e. the zero-frequency slice over K."""
    return x.slices[0] / x.K


def psnr_from_sse(sse, n_entry, max_value=255.0) -> float:
    if sse <= 0:
        return float("inf")
    return float(20 * np.log10(np.sqrt(n_entry) * max_value / np.sqrt(sse)))


def psnr(x, x_hat, max_value=255.0, n_entry=None) -> float:
    x = np.asarray(x)
    x_hat = np.asarray(x_hat)
    if x.size != x_hat.size:
        raise ShapeError(f"element counts differ: {x.size} vs {x_hat.size}")
    if max_value <= 0:
        raise ValueError("max_value must be positive")
    d = (x.astype(np.complex128) - x_hat).reshape(-1)
    return psnr_from_sse(float(np.vdot(d, d).real), x.size if n_entry is None else n_entry, max_value)


@dataclass(frozen=True)
class TnnVerdict:
    distances: tuple
    least_index: Optional[int]
    minimal_indices: tuple
    chosen_index: int
    chosen_label: object


def frobenius_slices(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Default slice metric: Frobenius distance per slice of two (K, M1, M2) stacks."""
    d = (x - y).reshape(x.shape[0], -1)
    return np.sqrt(np.einsum("ij,ij->i", d.real, d.real) + np.einsum("ij,ij->i", d.imag, d.imag))


def minimal_elements(d: np.ndarray, tol: ToleranceProfile = DEFAULT_TOL):
    """Least element (if any) and minimal set of J real spectra d (J, K) under the cone order."""
    t = tol.cone_abs(d)
    # le[a, b]: d_a <= d_b in every slice
    le = np.all(d[:, None, :] <= d[None, :, :] + t, axis=2)
    equiv = le & le.T
    strictly_below = le & ~equiv
    minimal = np.flatnonzero(~strictly_below.any(axis=0))
    least = np.flatnonzero(le.all(axis=1))
    least_index = int(least[0]) if least.size else None
    if least_index is not None:
        minimal = np.flatnonzero(equiv[least_index])
    return least_index, tuple(int(j) for j in minimal)


def tnn_classify(train: Sequence[Tuple[TMatrix, object]], query: TMatrix,
                 slice_metric: Callable = frobenius_slices,
                 tol: ToleranceProfile = DEFAULT_TOL) -> TnnVerdict:
    """Nearest neighbour under the t-scalar distance sum_k metric(X_k, Y_k) Q_k."""
    if not train:
        raise InsufficientDataError("empty training set")
    for x, _ in train:
        if x.shape != query.shape or x.dims != query.dims:
            raise ShapeError("training sample and query differ in shape")
    d = np.stack([np.asarray(slice_metric(query.slices, x.slices), dtype=float) for x, _ in train])
    least, minimal = minimal_elements(d, tol)
    if least is not None:
        chosen = least
    else:
        agg = d[list(minimal)].mean(axis=1)
        chosen = minimal[int(np.argmin(agg))]  # argmin keeps the lowest index on ties
    dists = tuple(TScalar(query.shape, spectrum=row.reshape(query.shape.dims)) for row in d)
    return TnnVerdict(dists, least, minimal, chosen, train[chosen][1])
