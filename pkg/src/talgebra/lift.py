"""Neighbourhood lifting of images into higher-order t-matrices.

Every lift prepends two window axes (h, w).  With the inception anchor the
entry (a, b) at pixel (m1, m2) is the input at (m1 + a, m2 + b), zero padded,
so window entry (0, 0) reproduces the input.
"""
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ShapeError
from .spectral import TShape
from .tmatrix import TMatrix


@dataclass(frozen=True)
class LiftConfig:
    window: tuple = (3, 3)
    anchor: str = "inception"
    padding: float = 0.0
    repetitions: int = 1

    def __post_init__(self):
        if len(self.window) != 2 or min(self.window) < 1:
            raise ValueError(f"bad window {self.window}")
        if self.anchor not in ("inception", "central"):
            raise ValueError(f"unknown anchor {self.anchor!r}")
        if self.repetitions < 0:
            raise ValueError("repetitions must be >= 0")


def lift_once(x, cfg: LiftConfig = LiftConfig()) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim < 2:
        raise ShapeError("lifting needs two trailing spatial axes")
    h, w = cfg.window
    if cfg.anchor == "inception":
        pads = ((0, h - 1), (0, w - 1))
    else:
        pads = (((h - 1) // 2, h // 2), ((w - 1) // 2, w // 2))
    xp = np.pad(x, ((0, 0),) * (x.ndim - 2) + pads, constant_values=cfg.padding)
    win = sliding_window_view(xp, (h, w), axis=(-2, -1))  # (..., M1, M2, h, w)
    return np.ascontiguousarray(np.moveaxis(win, (-2, -1), (0, 1)))


def lift_k(x, cfg: LiftConfig = LiftConfig(), k=None) -> np.ndarray:
    k = cfg.repetitions if k is None else k
    x = np.asarray(x)
    for _ in range(k):
        x = lift_once(x, cfg)
    return x


def inception_slice(x, n_axes=2, cfg: LiftConfig = LiftConfig()) -> np.ndarray:
    """Drop `n_axes` leading window axes by taking the window entry that holds the pixel itself."""
    x = np.asarray(x)
    if x.ndim < n_axes + 2:
        raise ShapeError(f"array of order {x.ndim} has no {n_axes} leading t-scalar axes")
    if cfg.anchor == "inception":
        idx = (0,) * n_axes
    else:
        c = ((cfg.window[0] - 1) // 2, (cfg.window[1] - 1) // 2)
        idx = c * (n_axes // 2) + c[:n_axes % 2]
    return x[idx]


LAYOUTS = ("channel", "flatten", "channel-into")

# named variants: (layout, number of lifts)
VARIANTS = {
    "PCA": ("flatten", 0),
    "TPCA": ("channel", 0),
    "TPCA-I": ("flatten", 1),
    "TPCA-1": ("channel-into", 1),
    "TPCA-II": ("flatten", 2),
    "TPCA-2": ("channel-into", 2),
    "TPCA-III": ("flatten", 3),
    "TPCA-3": ("channel-into", 3),
}


def _hwc(image):
    image = np.asarray(image)
    if image.ndim == 2:
        image = image[:, :, None]
    if image.ndim != 3:
        raise ShapeError(f"expected H x W or H x W x C image, got {image.shape}")
    return image


def image_to_tvector(image, layout="channel", lifts=0, cfg: LiftConfig = LiftConfig()) -> np.ndarray:
    """Array over t-scalar dims + (D, 1) holding the image as a t-vector.

    channel:      t-scalar (C,),           D = H*W   (no lifting allowed)
    flatten:      t-scalar (h, w)*lifts,   D = H*W*C
    channel-into: t-scalar (h, w)*lifts + (C,), D = H*W
    """
    if layout not in LAYOUTS:
        raise ValueError(f"unknown layout {layout!r}, expected one of {LAYOUTS}")
    if layout == "channel" and lifts:
        raise ValueError("layout 'channel' has no lift axes; use 'channel-into'")
    img = _hwc(image)
    H, W, C = img.shape
    cube = lift_k(np.moveaxis(img, 2, 0), cfg, lifts)  # (win..., C, H, W)
    lead = cube.shape[:-3]
    if layout == "flatten":
        return np.moveaxis(cube, -3, -1).reshape(lead + (H * W * C, 1))
    return cube.reshape(lead + (C, H * W, 1))


def tvector_shape(layout, lifts, channels, cfg: LiftConfig = LiftConfig()) -> TShape:
    win = tuple(cfg.window) * lifts
    return TShape(win if layout == "flatten" else win + (channels,))


def tvector_from_image(image, layout="channel", lifts=0, cfg: LiftConfig = LiftConfig()) -> TMatrix:
    a = image_to_tvector(image, layout, lifts, cfg)
    return TMatrix.from_spatial(a, a.shape[:-2])


def tvector_to_image(a, layout, image_shape, lifts=0, cfg: LiftConfig = LiftConfig()) -> np.ndarray:
    """Inverse of image_to_tvector, read off the inception entries."""
    a = np.asarray(a)
    H, W = image_shape[:2]
    C = image_shape[2] if len(image_shape) == 3 else 1
    if lifts:
        a = inception_slice(a, 2 * lifts, cfg)
    if layout == "flatten":
        img = a.reshape(H, W, C)
    else:
        img = np.moveaxis(a.reshape(C, H, W), 0, 2)
    return img.reshape(image_shape)
