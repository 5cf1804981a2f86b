"""Code-point classification tables for the batch scorer kernels.

Built lazily once per process: a full table over the Unicode range costs
about a second to construct but makes every later lookup a plain array
index inside compiled code.
"""
from __future__ import annotations

import numpy as np

_UNICODE_SIZE = 0x110000
_tables: tuple[np.ndarray, np.ndarray] | None = None


def char_tables() -> tuple[np.ndarray, np.ndarray]:
    """(is_whitespace, is_alpha) uint8 tables indexed by code point."""
    global _tables
    if _tables is None:
        is_ws = np.zeros(_UNICODE_SIZE, dtype=np.uint8)
        is_alpha = np.zeros(_UNICODE_SIZE, dtype=np.uint8)
        for i in range(_UNICODE_SIZE):
            ch = chr(i)
            if ch.isspace():
                is_ws[i] = 1
            elif ch.isalpha():
                is_alpha[i] = 1
        _tables = (is_ws, is_alpha)
    return _tables
