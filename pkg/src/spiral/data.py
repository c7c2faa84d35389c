"""Dataset ingestion and manipulation.

MNIST is read from local IDX files (``train-images-idx3-ubyte`` and
``train-labels-idx1-ubyte``, optionally gzipped); nothing is downloaded.
"""

from __future__ import annotations

import csv
import gzip
import struct
from dataclasses import dataclass

import numpy as np

from .core import Dataset, RngBatch, RngStream, fnv1a64, rng_new, splitmix64

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


@dataclass
class RawMnist:
    images: np.ndarray  # (n, rows*cols), pixels scaled to [0, 1]
    labels: np.ndarray  # (n,), digits 0..9

    def __post_init__(self):
        if len(self.images) != len(self.labels):
            raise ValueError(
                f"{len(self.images)} images but {len(self.labels)} labels")


@dataclass
class BinaryTask:
    digit: int
    train: Dataset
    test: Dataset
    name: str = ""

    def __post_init__(self):
        if not self.name:
            self.name = f"digit{self.digit}"


@dataclass
class CorruptionSpec:
    keep_fraction: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.keep_fraction <= 1.0:
            raise ValueError(f"keep_fraction must lie in (0, 1], got {self.keep_fraction!r}")


def _header(data: bytes, magic: int, n_ints: int, what: str):
    size = 4 * n_ints
    if len(data) >= 4:
        (found,) = struct.unpack(">I", data[:4])
        if found != magic:
            raise ValueError(
                f"bad IDX {what} magic: expected {magic:#010x}, found {found:#010x}")
    if len(data) < size:
        raise ValueError(
            f"truncated IDX {what} header: expected {size} bytes, got {len(data)}")
    return struct.unpack(f">{n_ints}I", data[:size])[1:], size


def parse_idx_images(data: bytes) -> np.ndarray:
    (n, rows, cols), offset = _header(data, IMAGE_MAGIC, 4, "image")
    expected = n * rows * cols
    actual = len(data) - offset
    if actual < expected:
        raise ValueError(
            f"truncated IDX image payload: expected {expected} bytes, got {actual}")
    pixels = np.frombuffer(data, dtype=np.uint8, count=expected, offset=offset)
    return pixels.reshape(n, rows * cols) / 255.0


def parse_idx_labels(data: bytes) -> np.ndarray:
    (n,), offset = _header(data, LABEL_MAGIC, 2, "label")
    actual = len(data) - offset
    if actual < n:
        raise ValueError(f"truncated IDX label payload: expected {n} bytes, got {actual}")
    labels = np.frombuffer(data, dtype=np.uint8, count=n, offset=offset).astype(np.int64)
    bad = np.flatnonzero(labels > 9)
    if bad.size:
        raise ValueError(f"label {labels[bad[0]]} at index {bad[0]} is not a digit 0-9")
    return labels


def write_idx_images(images, rows: int, cols: int) -> bytes:
    """Serialize uint8 images (n, rows*cols) to IDX bytes."""
    images = np.asarray(images, dtype=np.uint8)
    header = struct.pack(">4I", IMAGE_MAGIC, images.shape[0], rows, cols)
    return header + images.tobytes()


def write_idx_labels(labels) -> bytes:
    labels = np.asarray(labels, dtype=np.uint8)
    return struct.pack(">2I", LABEL_MAGIC, labels.shape[0]) + labels.tobytes()


def read_bytes(path) -> bytes:
    with open(path, "rb") as f:
        data = f.read()
    if str(path).endswith(".gz"):
        data = gzip.decompress(data)
    return data


def load_mnist(images_path, labels_path, limit=None) -> RawMnist:
    """Read an IDX image/label pair; ``limit`` keeps the first items only."""
    images = parse_idx_images(read_bytes(images_path))
    labels = parse_idx_labels(read_bytes(labels_path))
    raw = RawMnist(images, labels)
    if limit is not None:
        raw = RawMnist(raw.images[:limit], raw.labels[:limit])
    return raw


def make_binary_tasks(raw: RawMnist, digits=range(10)) -> list[BinaryTask]:
    """One-vs-rest tasks; odd positions train, even positions test."""
    if len(raw.labels) == 0:
        raise ValueError("no MNIST items")
    tasks = []
    for digit in digits:
        y = np.where(raw.labels == digit, 1, -1)
        tasks.append(BinaryTask(
            digit,
            Dataset(raw.images[1::2], y[1::2], f"digit{digit}-train"),
            Dataset(raw.images[0::2], y[0::2], f"digit{digit}-test"),
        ))
    return tasks


def keep_count(keep_fraction: float, d: int) -> int:
    # Python's round() is banker's rounding; floor(x + 0.5) is the portable rule
    return min(d, max(1, int(np.floor(keep_fraction * d + 0.5))))


def corrupt_keep(x, spec: CorruptionSpec, rng: RngStream) -> np.ndarray:
    """Keep ``keep_count`` randomly chosen features of ``x``, zero the rest.

    The kept indices are the first k slots of a partial Fisher-Yates shuffle
    of ``0..d-1`` where slot i swaps with ``i + rng.below(d - i)``.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[0]
    k = keep_count(spec.keep_fraction, d)
    if k == d:
        return x.copy()
    perm = list(range(d))
    for i in range(k):
        j = i + rng.below(d - i)
        perm[i], perm[j] = perm[j], perm[i]
    out = np.zeros_like(x)
    kept = perm[:k]
    out[kept] = x[kept]
    return out


def example_seeds(master: int, tags, n: int) -> np.ndarray:
    """``derive_seed(master, [*tags, i])`` for i in 0..n-1."""
    prefix = fnv1a64("/".join(str(t) for t in tags) + "/")
    master &= (1 << 64) - 1
    return np.array(
        [splitmix64(master ^ fnv1a64(str(i), prefix)) for i in range(n)],
        dtype=np.uint64)


def corrupt_dataset(data: Dataset, keep_fraction: float, master: int, tags) -> Dataset:
    """Corrupt every example with its own mask.

    Example i uses the stream ``rng_derive(master, [*tags, i])``; the result
    equals calling ``corrupt_keep`` row by row with those streams.
    """
    n, d = data.X.shape
    k = keep_count(keep_fraction, d)
    if k == d:
        return Dataset(data.X.copy(), data.y.copy(), data.name)
    batch = RngBatch(example_seeds(master, tags, n))
    perm = np.tile(np.arange(d), (n, 1))
    rows = np.arange(n)
    for i in range(k):
        j = i + (batch.uniform() * (d - i)).astype(np.int64)
        held = perm[rows, j]
        perm[rows, j] = perm[:, i]
        perm[:, i] = held
    kept = perm[:, :k]
    X = np.zeros_like(data.X)
    X[rows[:, None], kept] = data.X[rows[:, None], kept]
    return Dataset(X, data.y.copy(), data.name)


def synth_blobs(n: int, d: int, separation: float, seed: int) -> Dataset:
    """Two unit-variance Gaussian blobs at +/- separation along the first axis.

    Labels alternate +1, -1, +1, ...
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be a positive even number, got {n}")
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    rng = rng_new(seed)
    y = np.tile([1, -1], n // 2)
    X = np.empty((n, d))
    for i in range(n):
        X[i] = rng.normals(d)
        X[i, 0] += y[i] * separation
    return Dataset(X, y, f"blobs-n{n}-d{d}")


def random_relabel(data: Dataset, rng: RngStream) -> Dataset:
    """Fair coin labels from the top bit of each draw; features are shared."""
    y = np.array([1 if rng.next_u64() >> 63 else -1 for _ in range(len(data))],
                 dtype=np.int64)
    return Dataset(data.X, y, data.name)


def write_csv(path, data: Dataset):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["label"] + [f"f{i}" for i in range(data.dim)])
        for x, y in zip(data.X, data.y):
            w.writerow([int(y)] + [repr(float(v)) for v in x])


def read_csv(path, name=None) -> Dataset:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or header[0] != "label":
            raise ValueError(f"{path}: expected a header starting with 'label'")
        rows = [r for r in reader if r]
    d = len(header) - 1
    X = np.empty((len(rows), d))
    y = np.empty(len(rows), dtype=np.int64)
    for i, r in enumerate(rows):
        if len(r) != d + 1:
            raise ValueError(f"{path}: row {i + 1} has {len(r) - 1} features, expected {d}")
        y[i] = int(r[0])
        X[i] = [float(v) for v in r[1:]]
    return Dataset(X, y, name or str(path))
