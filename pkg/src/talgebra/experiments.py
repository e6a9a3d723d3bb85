"""Experiment drivers producing PSNR reports for approximation, least squares, TPCA and TNN."""
import csv
import io
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .algorithms import (RankSpec, _rank_mask, lstsq, pca_slices, psnr, psnr_from_sse,
                         tnn_classify, truncate, truncation_error)
from .errors import RankError, ShapeError
from .lift import VARIANTS, image_to_tvector, inception_slice, lift_k, tvector_shape, tvector_to_image
from .spectral import TShape, dft, idft
from .tmatrix import TMatrix, hstack, tsvd
from .tscalar import DEFAULT_TOL


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{float(v):.6f}"


@dataclass
class ExperimentReport:
    experiment: str
    param_name: str
    methods: List[str]
    rows: List[tuple] = field(default_factory=list)  # (sort key, param label, {method: value})
    metadata: Dict = field(default_factory=dict)

    def add(self, key, label, values):
        self.rows.append((key, label, dict(values)))

    def sorted_rows(self):
        return sorted(self.rows, key=lambda r: r[0])

    def value(self, label, method):
        for _, l, vals in self.rows:
            if l == str(label):
                return vals.get(method)
        raise KeyError(label)

    def column(self, method):
        return [vals.get(method) for _, _, vals in self.sorted_rows()]

    def params(self):
        return [l for _, l, _ in self.sorted_rows()]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param"] + list(self.methods))
        for _, label, vals in self.sorted_rows():
            w.writerow([label] + [_fmt(vals.get(m)) for m in self.methods])
        return buf.getvalue()

    def write(self, path):
        with open(path, "w", newline="") as f:
            f.write(self.to_csv())
        with open(str(path) + ".meta.json", "w") as f:
            json.dump({"experiment": self.experiment, "param": self.param_name, **self.metadata},
                      f, indent=2, sort_keys=True, default=str)
            f.write("\n")


def _as_ranks(ranks):
    out = []
    for r in ranks:
        if isinstance(r, RankSpec):
            out.append(r)
        elif isinstance(r, (tuple, list)):
            out.append(RankSpec(per_slice=tuple(r)))
        else:
            out.append(RankSpec(uniform=int(r)))
    return out


def _image_tmatrix(img, lifts):
    """Gray H x W -> t-scalar (3,3)*L; colour H x W x C -> (3,3)*L + (C,)."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        arr = lift_k(img, k=lifts)
        return TMatrix.from_spatial(arr), arr, None
    if img.ndim != 3:
        raise ShapeError(f"expected a 2-D or 3-D image, got {img.shape}")
    arr = lift_k(np.moveaxis(img, 2, 0), k=lifts)
    return TMatrix.from_spatial(arr), arr, img.shape[2]


def _inception_from_slices(slices, shape: TShape, channels):
    """Inception entries over the lift axes, keeping a trailing channel axis if present."""
    m1, m2 = slices.shape[1:]
    if channels is None:
        return slices.mean(axis=0)
    s = slices.reshape(-1, channels, m1, m2).mean(axis=0)
    return np.fft.ifft(s, axis=0)


def run_approx(image, lifts=0, ranks=(0,), max_value=255.0, workers=None, metadata=None):
    """SVD baseline vs TSVD on a gray or colour image.

    Methods: svd (flattened matrix, colour channels side by side), tsvd (whole
    lifted array), tsvd_inception (inception slice against the original image).
    """
    img = np.asarray(image, dtype=np.float64)
    X, arr, channels = _image_tmatrix(img, lifts)
    base = img if img.ndim == 2 else np.hstack([img[:, :, c] for c in range(img.shape[2])])
    s_base = np.linalg.svd(base, compute_uv=False)
    f = tsvd(X, workers)
    orig = img if channels is None else np.moveaxis(img, 2, 0)
    report = ExperimentReport("approx", "r", ["svd", "tsvd", "tsvd_inception"], metadata={
        "tscalar_shape": list(X.shape.dims), "K": X.K, "M1": X.rows, "M2": X.cols,
        "N_entry_svd": int(base.size), "N_entry_tsvd": int(arr.size),
        "N_entry_tsvd_inception": int(img.size), "MAX": max_value, "lifts": lifts,
        **(metadata or {})})
    for H in _as_ranks(ranks):
        vals = {}
        if H.uniform is not None:
            if H.uniform > len(s_base):
                raise RankError(f"rank {H.uniform} exceeds baseline rank bound {len(s_base)}")
            vals["svd"] = psnr_from_sse(float(np.sum(s_base[H.uniform:] ** 2)), base.size, max_value)
        err = truncation_error(f, H)
        vals["tsvd"] = psnr_from_sse(float(err.sum()) / X.K, arr.size, max_value)
        approx = truncate(f, H)
        inc = _inception_from_slices(approx.slices, X.shape, channels)
        vals["tsvd_inception"] = psnr(orig, inc, max_value)
        report.add(H.sort_key(), H.label(), vals)
    return report


def approx_image(image, lifts, H: RankSpec):
    """Inception-slice reconstruction of the image at generalized rank H."""
    img = np.asarray(image, dtype=np.float64)
    X, _, channels = _image_tmatrix(img, lifts)
    inc = _inception_from_slices(truncate(tsvd(X), H).slices, X.shape, channels).real
    return inc if channels is None else np.moveaxis(inc, 0, 2)


def _lifted_tvector(img, lifts):
    arr = lift_k(np.asarray(img, dtype=np.float64), k=lifts)
    lead = arr.shape[:-2]
    return arr.reshape(lead + (-1, 1))


def run_lstsq(image_a, image_b, image_c, lift_orders=range(5), max_value=255.0, metadata=None):
    """Approximate A by lam o B + xi o C over the t-algebra, against complex alpha*B + beta*C."""
    shapes = {np.shape(image_a), np.shape(image_b), np.shape(image_c)}
    if len(shapes) != 1 or len(np.shape(image_a)) != 2:
        raise ShapeError(f"need three gray images of one size, got {sorted(shapes)}")
    h, w = np.shape(image_a)
    report = ExperimentReport("lstsq", "lifts", ["canonical", "generalized"], metadata={
        "image_shape": [h, w], "MAX": max_value, **(metadata or {})})
    for L in lift_orders:
        a, b, c = (_lifted_tvector(x, L) for x in (image_a, image_b, image_c))
        K = int(np.prod(a.shape[:-2]))
        A = TMatrix.from_spatial(a)
        W = hstack([TMatrix.from_spatial(b), TMatrix.from_spatial(c)])
        res = lstsq(W, A)
        sse_gen = float(np.sum(np.abs(res.residual_norm.spectrum) ** 2)) / K
        M = np.stack([b.reshape(-1), c.reshape(-1)], axis=1).astype(np.complex128)
        coef = np.linalg.lstsq(M, a.reshape(-1).astype(np.complex128), rcond=None)[0]
        r = a.reshape(-1) - M @ coef
        n_entry = h * w * K
        report.add((L,), str(L), {
            "canonical": psnr_from_sse(float(np.vdot(r, r).real), n_entry, max_value),
            "generalized": psnr_from_sse(sse_gen, n_entry, max_value)})
        report.metadata[f"N_entry_lift{L}"] = n_entry
    return report


def _resolve_variant(variant, layout, lifts):
    if variant is not None:
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; choose from {sorted(VARIANTS)}")
        return VARIANTS[variant]
    return layout, lifts


def spectral_stack(images, layout, lifts):
    """(K, D, n) stack of the spectral slices of each image's t-vector."""
    first = image_to_tvector(images[0], layout, lifts)
    tdims = first.shape[:-2]
    D = first.shape[-2]
    K = int(np.prod(tdims))
    out = np.empty((K, D, len(images)), dtype=np.complex128)
    for j, img in enumerate(images):
        a = first if j == 0 else image_to_tvector(img, layout, lifts)
        out[:, :, j] = dft(a[..., 0].astype(np.float64), tdims).reshape(K, D)
    return out, TShape(tdims)


def run_tpca(train_images, query_images, variant=None, ranks=(1,), pool=False, layout="channel",
             lifts=0, max_value=255.0, chunk=64, tol=DEFAULT_TOL, metadata=None, return_images=None):
    """Fit TPCA on the training images and report reconstruction PSNR of the queries.

    Works slice by slice on the spectral stacks: the residual of every query
    at every uniform rank follows from its coordinates, and the PSNR follows by
    Parseval.  Pooling averages over the lift axes only, so every variant pools
    down to H*W*C scalars per image.
    """
    layout, lifts = _resolve_variant(variant, layout, lifts)
    name = variant or f"{layout}-L{lifts}"
    imgs = [np.asarray(i, dtype=np.float64) for i in train_images]
    qimgs = [np.asarray(i, dtype=np.float64) for i in query_images]
    if len(imgs) < 2:
        raise ShapeError("need at least two training images")
    img_shape = qimgs[0].shape
    C = img_shape[2] if len(img_shape) == 3 else 1
    X, shape = spectral_stack(imgs, layout, lifts)
    Y, _ = spectral_stack(qimgs, layout, lifts)
    K, D, N = X.shape
    nq = Y.shape[2]
    mean = X.mean(axis=2, keepdims=True)
    X -= mean
    Y -= mean
    q_m = min(D, N - 1)
    specs = _as_ranks(ranks)
    masks = [_rank_mask(H, q_m, K) for H in specs]

    err = np.empty((K, q_m + 1))  # residual energy of all queries, slice k, uniform rank r
    full = True
    keep_img = return_images is not None
    if keep_img:
        mask_img = _rank_mask(return_images, q_m, K)
        recon = np.empty_like(Y)
    for i in range(0, K, chunk):
        u, s, fr = pca_slices(X[i:i + chunk], q_m, tol)
        full &= bool(fr.all())
        yc = Y[i:i + chunk]
        coef = np.conj(np.swapaxes(u, 1, 2)) @ yc  # (c, q_m, nq)
        base = np.sum(np.abs(yc) ** 2, axis=(1, 2))
        gain = np.cumsum(np.sum(np.abs(coef) ** 2, axis=2), axis=1)
        err[i:i + chunk, 0] = base
        err[i:i + chunk, 1:] = np.maximum(base[:, None] - gain, 0.0)
        if keep_img:
            m = mask_img[i:i + chunk]
            recon[i:i + chunk] = (u * m[:, None, :]) @ coef + mean[i:i + chunk]
    del X

    k_lift = K if layout == "flatten" else K // C
    pool_slices = np.arange(1) if layout == "flatten" else np.arange(C)
    pool_scale = 1.0 / k_lift ** 2 / (1 if layout == "flatten" else C)
    n_entry = nq * D * K
    n_pool = nq * int(np.prod(img_shape))
    methods = [name] + ([name + "-pool"] if pool else [])
    report = ExperimentReport("tpca", "r", methods, metadata={
        "variant": name, "layout": layout, "lifts": lifts, "tscalar_shape": list(shape.dims),
        "K": K, "D": D, "N_train": N, "N_query": nq, "Q_m": q_m, "full_rank": full,
        "N_entry": n_entry, "N_entry_pool": n_pool if pool else None, "MAX": max_value,
        **(metadata or {})})
    for H, mask in zip(specs, masks):
        r = mask.sum(axis=1)
        per_slice = err[np.arange(K), r]
        vals = {name: psnr_from_sse(float(per_slice.sum()) / K, n_entry, max_value)}
        if pool:
            vals[name + "-pool"] = psnr_from_sse(float(per_slice[pool_slices].sum()) * pool_scale,
                                                 n_pool, max_value)
        report.add(H.sort_key(), H.label(), vals)
    if keep_img:
        sp = idft((recon + 0).reshape(shape.dims + (D, nq)), shape).real
        images = [tvector_to_image(sp[..., j:j + 1], layout, img_shape, lifts) for j in range(nq)]
        return report, images
    return report


def run_tnn(train, queries, variant=None, layout="channel", lifts=0, metadata=None):
    """Tensorial nearest neighbour over labelled (label, image) pairs."""
    layout, lifts = _resolve_variant(variant, layout, lifts)
    tr = [(TMatrix.from_spatial(image_to_tvector(np.asarray(im, dtype=np.float64), layout, lifts)), lab)
          for lab, im in train]
    report = ExperimentReport("tnn", "query", ["predicted", "truth", "least", "n_minimal", "correct"])
    n_least = n_ok = 0
    for j, (lab, im) in enumerate(queries):
        q = TMatrix.from_spatial(image_to_tvector(np.asarray(im, dtype=np.float64), layout, lifts))
        v = tnn_classify(tr, q)
        ok = v.chosen_label == lab
        n_ok += ok
        n_least += v.least_index is not None
        report.add((j,), str(j), {"predicted": v.chosen_label, "truth": lab,
                                  "least": int(v.least_index is not None),
                                  "n_minimal": len(v.minimal_indices), "correct": int(ok)})
    n = len(queries)
    report.metadata.update({"variant": variant or f"{layout}-L{lifts}", "layout": layout, "lifts": lifts,
                            "tscalar_shape": list(tr[0][0].shape.dims), "N_train": len(train),
                            "N_query": n, "accuracy": n_ok / n if n else None,
                            "least_decisions": n_least, "minimal_set_decisions": n - n_least,
                            **(metadata or {})})
    return report
