"""Deterministic sub-seed derivation.

Every random choice in the pipeline flows from one user-facing seed.  Each
consumer derives its own stream with a stable label, so adding a new
randomized step never perturbs the streams of existing steps.
"""
from __future__ import annotations

import hashlib


def derive_seed(seed: int, label: str) -> int:
    """Map (seed, label) to a stable 63-bit integer sub-seed."""
    payload = f"{seed}:{label}".encode("utf-8")
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1
