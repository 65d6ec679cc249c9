"""Gaussian-blob stand-in for the memory-forensics table, in the same CSV layout."""
from __future__ import annotations

import csv
import io

import numpy as np

from .errors import UsageError
from .pipeline import make_rng

_FAMILIES = ("Spyware", "Ransomware", "Trojan")


def synth_labels(classes: int, rows: int) -> np.ndarray:
    """Round-robin class assignment; leftover rows go to the lowest classes."""
    return np.arange(rows) % classes


def synth_table(classes: int, rows: int, features: int, separation: float, seed: int):
    if not 2 <= classes <= 4:
        raise UsageError("classes must be between 2 and 4 (benign plus up to three families)")
    if rows < 0 or features < 1:
        raise UsageError("rows must be >= 0 and features >= 1")
    y = synth_labels(classes, rows)
    X = make_rng(seed).standard_normal((rows, features)) + separation * y[:, None]
    return X, y


def synth_csv(classes: int, rows: int, features: int, separation: float, seed: int) -> str:
    """CSV text: Category, f0..f{n-1}, Class. Class c sits at c*separation."""
    X, y = synth_table(classes, rows, features, separation, seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Category", *(f"f{j}" for j in range(features)), "Class"])
    for i, (row, c) in enumerate(zip(X.tolist(), y.tolist())):
        if c == 0:
            category, cls = "Benign", "Benign"
        else:
            category, cls = f"{_FAMILIES[c - 1]}-Synth{c}-{i:06d}.raw", "Malicious"
        writer.writerow([category, *(repr(v) for v in row), cls])
    return buf.getvalue()
