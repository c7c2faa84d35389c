"""Build the desk-scale MNIST fixture used by the acceptance tests.

Source: the 5000-digit MNIST sample bundled with mlxtend
(``mlxtend/data/data/mnist_5k.csv.gz``, 500 images per digit, sorted by
digit).  The rows are shuffled with a seeded Fisher-Yates pass and the first
4000 are written as gzipped IDX files, which gives 2000 train / 2000 test
items after the odd/even split.

    pip install mlxtend
    python scripts/make_mnist_subset.py tests/data
"""

import gzip
import sys
from pathlib import Path

import numpy as np

from spiral.core import rng_new
from spiral.data import write_idx_images, write_idx_labels

N_KEEP = 4000
SEED = 20170101


def main(out_dir):
    import mlxtend.data

    src = Path(mlxtend.data.__file__).parent / "data" / "mnist_5k.csv.gz"
    table = np.loadtxt(src, delimiter=",", dtype=np.int64)
    images, labels = table[:, :-1], table[:, -1]

    order = list(range(len(labels)))
    rng = rng_new(SEED)
    for i in range(len(order) - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    order = order[:N_KEEP]

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    # mtime=0 keeps the gzip bytes reproducible
    (out / "mnist4k-images-idx3-ubyte.gz").write_bytes(
        gzip.compress(write_idx_images(images[order], 28, 28), mtime=0))
    (out / "mnist4k-labels-idx1-ubyte.gz").write_bytes(
        gzip.compress(write_idx_labels(labels[order]), mtime=0))
    print(f"wrote {N_KEEP} items to {out}; digit counts {np.bincount(labels[order]).tolist()}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
