"""Build the local test images used by the figure scripts.

baboon: the 512x512 RGB mandrill that ships with the OpenCV samples
(opencv-python sdist, opencv/samples/data/baboon.jpg), decoded to PPM.
cameraman: scikit-image's 512x512 `camera`, 2x2 box-averaged to 256x256.
"""
import argparse
import tarfile
from pathlib import Path

import numpy as np


def baboon_from_sdist(sdist, out):
    from PIL import Image

    with tarfile.open(sdist) as tf:
        member = next(m for m in tf.getmembers() if m.name.endswith("samples/data/baboon.jpg"))
        img = np.asarray(Image.open(tf.extractfile(member)).convert("RGB"))
    write(out, img)
    return img.shape


def cameraman(out):
    from skimage import data

    img = data.camera().astype(np.float64)
    small = img.reshape(256, 2, 256, 2).mean(axis=(1, 3))
    write(out, np.clip(np.rint(small), 0, 255).astype(np.uint8))
    return small.shape


def write(path, img):
    from talgebra.io import write_pnm
    write_pnm(img, path)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--sdist", help="path to opencv-python-*.tar.gz")
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.sdist:
        print("baboon", baboon_from_sdist(args.sdist, out / "baboon.ppm"))
    print("cameraman", cameraman(out / "cameraman.pgm"))
