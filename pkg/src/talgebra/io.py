"""File formats: binary PNM (P5/P6), CIFAR-10 binary batches, TMX t-matrix container."""
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .spectral import TShape

CIFAR_RECORD = 1 + 32 * 32 * 3
TMX_MAGIC = b"TMX1"


def _pnm_tokens(buf, n):
    """Read n whitespace separated header tokens, skipping comments; returns tokens and payload offset."""
    toks, i = [], 0
    while len(toks) < n:
        while i < len(buf) and buf[i:i + 1].isspace():
            i += 1
        if i >= len(buf):
            raise FormatError("truncated PNM header")
        if buf[i:i + 1] == b"#":
            while i < len(buf) and buf[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < len(buf) and not buf[j:j + 1].isspace() and buf[j:j + 1] != b"#":
            j += 1
        toks.append(buf[i:j])
        i = j
    # exactly one whitespace byte separates header and raster
    return toks, i + 1


def read_pnm(path) -> np.ndarray:
    buf = Path(path).read_bytes()
    toks, off = _pnm_tokens(buf, 4)
    magic = toks[0]
    if magic not in (b"P5", b"P6"):
        raise FormatError(f"unsupported PNM magic {magic!r}")
    try:
        w, h, maxval = (int(t) for t in toks[1:])
    except ValueError as e:
        raise FormatError(f"malformed PNM header: {e}") from e
    if w < 1 or h < 1 or not 0 < maxval <= 255:
        raise FormatError(f"unsupported PNM geometry {w}x{h} maxval {maxval}")
    c = 3 if magic == b"P6" else 1
    n = w * h * c
    raster = buf[off:off + n]
    if len(raster) < n:
        raise FormatError(f"truncated PNM payload: {len(raster)} of {n} bytes")
    img = np.frombuffer(raster, dtype=np.uint8).reshape((h, w, c) if c == 3 else (h, w))
    return img.copy()


def write_pnm(array, path):
    a = np.asarray(array)
    if a.ndim == 3 and a.shape[2] == 1:
        a = a[:, :, 0]
    if a.ndim == 2:
        magic = b"P5"
    elif a.ndim == 3 and a.shape[2] == 3:
        magic = b"P6"
    else:
        raise FormatError(f"cannot write array of shape {a.shape} as PNM")
    if a.dtype != np.uint8:
        a = np.clip(np.rint(np.real(a)), 0, 255).astype(np.uint8)
    h, w = a.shape[:2]
    Path(path).write_bytes(magic + b"\n%d %d\n255\n" % (w, h) + a.tobytes())


def read_cifar_batch(path, max_records=None):
    """List of (label, 32x32x3 uint8 image) from a CIFAR-10 binary batch."""
    buf = Path(path).read_bytes()
    if len(buf) == 0 or len(buf) % CIFAR_RECORD:
        raise FormatError(f"{path}: size {len(buf)} is not a multiple of {CIFAR_RECORD}")
    rec = np.frombuffer(buf, dtype=np.uint8).reshape(-1, CIFAR_RECORD)
    if max_records is not None:
        rec = rec[:max_records]
    imgs = rec[:, 1:].reshape(-1, 3, 32, 32).transpose(0, 2, 3, 1)
    return [(int(l), im.copy()) for l, im in zip(rec[:, 0], imgs)]


def write_cifar_batch(records, path):
    out = bytearray()
    for label, img in records:
        img = np.asarray(img, dtype=np.uint8)
        out.append(int(label))
        out += img.transpose(2, 0, 1).tobytes()
    Path(path).write_bytes(bytes(out))


def write_tmx(path, array, shape):
    """Write a spatial t-matrix array over dims + (M1, M2)."""
    shape = TShape(tuple(shape))
    a = np.asarray(array, dtype=np.complex128)
    if a.ndim != shape.N + 2 or a.shape[:-2] != shape.dims:
        raise FormatError(f"array {a.shape} does not match t-scalar dims {shape.dims}")
    m1, m2 = a.shape[-2:]
    head = TMX_MAGIC + struct.pack("<B", shape.N) + struct.pack(f"<{shape.N}I", *shape.dims)
    head += struct.pack("<II", m1, m2)
    Path(path).write_bytes(head + np.ascontiguousarray(a).astype("<c16").tobytes())


def read_tmx(path):
    """Returns (spatial array over dims + (M1, M2), TShape)."""
    buf = Path(path).read_bytes()
    if buf[:4] != TMX_MAGIC:
        raise FormatError("not a TMX1 file")
    if len(buf) < 5:
        raise FormatError("truncated TMX header")
    n = buf[4]
    hl = 5 + 4 * n + 8
    if len(buf) < hl:
        raise FormatError("truncated TMX header")
    dims = struct.unpack(f"<{n}I", buf[5:5 + 4 * n])
    m1, m2 = struct.unpack("<II", buf[5 + 4 * n:hl])
    shape = TShape(dims)
    count = shape.K * m1 * m2
    if len(buf) - hl != 16 * count:
        raise FormatError(f"TMX payload has {len(buf) - hl} bytes, expected {16 * count}")
    a = np.frombuffer(buf, dtype="<c16", count=count, offset=hl).astype(np.complex128)
    return a.reshape(dims + (m1, m2)), shape
