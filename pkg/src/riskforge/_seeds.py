"""Deterministic seed derivation for independent subtasks.

Every parallelizable unit of work (a tree in a forest, an ECOC column, a
permutation repeat, a grid cell) draws its own seed from the master seed and
a stable subtask identity, so results never depend on execution order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(*parts) -> int:
    """Mix arbitrary (str/int) parts into a stable 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(str(part).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "big")


def rng_for(*parts) -> np.random.Generator:
    """Fresh generator keyed by the given subtask identity."""
    return np.random.default_rng(derive_seed(*parts))
