#!/usr/bin/env python3
"""Populate data/ with 8-bit grayscale PNGs from scikit-image's bundled set.

The repository keeps two disjoint groups:
  data/train/  natural images used to sample training patch pairs
  data/test/   evaluation targets (never used for training)

Color sources are converted with BT.601 luma (0.299 R + 0.587 G + 0.114 B),
rounded to the nearest integer, to match the tool's own color handling.
Run from the repository root:  python3 scripts/fetch_images.py
"""

import os

import numpy as np
import skimage.data as skd
from PIL import Image

TRAIN = {
    "coffee": skd.coffee,
    "chelsea": skd.chelsea,
    "rocket": skd.rocket,
    "hubble": skd.hubble_deep_field,
    "ihc": skd.immunohistochemistry,
    "motorcycle": lambda: skd.stereo_motorcycle()[0],
    "brick": skd.brick,
    "grass": skd.grass,
    "gravel": skd.gravel,
}

TEST = {
    "camera": skd.camera,
    "astronaut": skd.astronaut,
    "coins": skd.coins,
    "moon": skd.moon,
}


def to_gray_u8(img):
    a = np.asarray(img)
    if a.ndim == 3:
        a = a[..., :3].astype(np.float64)
        y = 0.299 * a[..., 0] + 0.587 * a[..., 1] + 0.114 * a[..., 2]
        a = np.clip(np.rint(y), 0, 255).astype(np.uint8)
    elif a.dtype != np.uint8:
        a = np.clip(np.rint(a.astype(np.float64)), 0, 255).astype(np.uint8)
    return a


def main():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    for sub, table in (("train", TRAIN), ("test", TEST)):
        outdir = os.path.join(root, "data", sub)
        os.makedirs(outdir, exist_ok=True)
        for name, fn in sorted(table.items()):
            a = to_gray_u8(fn())
            path = os.path.join(outdir, name + ".png")
            Image.fromarray(a, mode="L").save(path, optimize=True)
            print(f"{path}: {a.shape[1]}x{a.shape[0]}")


if __name__ == "__main__":
    main()
