#!/usr/bin/env python3
"""Convert the digit JSON files shipped in the npm `mnist` package into
gzipped big-endian IDX3/IDX1 files.

Usage: npm pack mnist && tar xzf mnist-*.tgz
       python3 scripts/npm_mnist_to_idx.py package/src/digits data/
"""
import gzip
import json
import struct
import sys
from pathlib import Path

import numpy as np


def main(src: Path, dst: Path) -> None:
    images, labels = [], []
    for digit in range(10):
        flat = np.asarray(json.loads((src / f"{digit}.json").read_text())["data"], dtype=np.float64)
        rows = flat.reshape(-1, 784)
        images.append(np.clip(np.rint(rows * 255.0), 0, 255).astype(np.uint8))
        labels.append(np.full(len(rows), digit, dtype=np.uint8))
    images = np.concatenate(images)
    labels = np.concatenate(labels)
    # interleave classes deterministically so prefixes are class-balanced
    rank = np.concatenate([np.arange(np.sum(labels == d)) for d in range(10)])
    order = np.argsort(rank * 10 + labels, kind="stable")
    images, labels = images[order], labels[order]
    n = len(labels)
    with gzip.GzipFile(dst / "mnist-10k-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x803, n, 28, 28))
        f.write(images.tobytes())
    with gzip.GzipFile(dst / "mnist-10k-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x801, n))
        f.write(labels.tobytes())
    print(f"wrote {n} samples")


if __name__ == "__main__":
    main(Path(sys.argv[1]), Path(sys.argv[2]))
