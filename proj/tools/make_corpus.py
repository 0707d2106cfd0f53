#!/usr/bin/env python3
"""Regenerates tests/data/corpus from the color photographs bundled with
scikit-image, scikit-learn and matplotlib.

Every bundled color photograph is used (graphics, charts and grayscale images
are skipped). Images larger than the Kodak frame are center-cropped to
768x512 (or 512x768 for portrait content) so that native pixel statistics are
preserved.
"""
import os
import sys

import matplotlib
import numpy as np
import skimage.data as data
from matplotlib import image as mpimg
from sklearn.datasets import load_sample_image


def sources():
    mpl = os.path.join(matplotlib.get_data_path(), "sample_data", "grace_hopper.jpg")
    return {
        "astronaut": data.astronaut(),
        "chelsea": data.chelsea(),
        "coffee": data.coffee(),
        "rocket": data.rocket(),
        "motorcycle": data.stereo_motorcycle()[0],
        "china": load_sample_image("china.jpg"),
        "flower": load_sample_image("flower.jpg"),
        "hopper": mpimg.imread(mpl),
        "retina": data.retina(),
        "hubble": data.hubble_deep_field(),
        "ihc": data.immunohistochemistry(),
    }


def kodak_crop(img):
    img = img[..., :3]
    h, w = img.shape[:2]
    ch, cw = (min(h, 512), min(w, 768)) if w >= h else (min(h, 768), min(w, 512))
    y, x = (h - ch) // 2, (w - cw) // 2
    return np.ascontiguousarray(img[y:y + ch, x:x + cw]).astype(np.uint8)


def write_ppm(path, img):
    h, w = img.shape[:2]
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for name, img in sources().items():
        write_ppm(os.path.join(out_dir, name + ".ppm"), kodak_crop(img))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/corpus")
