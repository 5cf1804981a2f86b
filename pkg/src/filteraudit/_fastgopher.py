"""Compiled batch kernel for the heuristic quality rules.

One fused pass over UTF-32 code points per document computes every
measurement the rule set needs.  Token, n-gram, and line identity use
64-bit FNV-1a hashes; a collision would need two distinct strings inside
one document sharing a hash, which is negligible at document scale.  All
fractions are ratios of the same integers the pure-Python path computes,
so both paths produce bit-identical doubles.

Scratch arrays are sized once per batch and reused across documents; the
open-addressing count table is cleared by epoch tags instead of memsets.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

# measurement matrix column count; layout documented in gopher.MEASUREMENT_NAMES
N_COLS = 18


def fnv1a(codepoints) -> int:
    """Reference FNV-1a over code points (Python side, for word hashes)."""
    h = FNV_OFFSET
    for c in codepoints:
        h = ((h ^ c) * FNV_PRIME) & _MASK64
    return h


def word_hash(word: str) -> int:
    return fnv1a(ord(c) for c in word)


@njit(cache=True, nogil=True)
def _measure_doc(
    cp, start, end, is_ws, is_alpha, req_hashes,
    th, prefix, wh, dupflag, lh, lc, tk, tc, tf, te, mask, epoch, out,
):
    prime = np.uint64(FNV_PRIME)
    offset = np.uint64(FNV_OFFSET)

    ti = 0
    total_chars = 0
    alpha_words = 0
    symbols = 0
    dot_run = 0
    req_mask = 0
    h = offset
    tlen = 0
    has_alpha = False
    nlines = 0
    bullets = 0
    ellipses = 0
    la = start
    lfirst = -1
    llast = -1
    lhash = offset
    prefix[0] = 0

    for i in range(start, end + 1):
        c = np.uint32(10) if i == end else cp[i]
        if c == 10:
            if tlen > 0:
                th[ti] = h
                prefix[ti + 1] = prefix[ti] + tlen
                total_chars += tlen
                if has_alpha:
                    alpha_words += 1
                for r in range(req_hashes.size):
                    if h == req_hashes[r]:
                        req_mask |= 1 << r
                ti += 1
                tlen = 0
                h = offset
                has_alpha = False
            if lfirst >= 0:
                c0 = cp[lfirst]
                if c0 == 0x2022 or c0 == 45 or c0 == 42:
                    bullets += 1
                if cp[llast] == 0x2026:
                    ellipses += 1
                elif (
                    llast - la >= 2
                    and cp[llast] == 46
                    and cp[llast - 1] == 46
                    and cp[llast - 2] == 46
                ):
                    ellipses += 1
                lh[nlines] = lhash
                lc[nlines] = i - la
                nlines += 1
            la = i + 1
            lfirst = -1
            lhash = offset
            symbols += dot_run // 3
            dot_run = 0
            continue
        lhash = (lhash ^ np.uint64(c)) * prime
        if c == 46:
            dot_run += 1
        else:
            symbols += dot_run // 3
            dot_run = 0
            if c == 35 or c == 0x2026:
                symbols += 1
        if is_ws[c]:
            if tlen > 0:
                th[ti] = h
                prefix[ti + 1] = prefix[ti] + tlen
                total_chars += tlen
                if has_alpha:
                    alpha_words += 1
                for r in range(req_hashes.size):
                    if h == req_hashes[r]:
                        req_mask |= 1 << r
                ti += 1
                tlen = 0
                h = offset
                has_alpha = False
        else:
            if lfirst < 0:
                lfirst = i
            llast = i
            h = (h ^ np.uint64(c)) * prime
            tlen += 1
            if is_alpha[c]:
                has_alpha = True

    w = ti
    if w == 0:
        return epoch

    req_hits = 0
    for r in range(req_hashes.size):
        if req_mask & (1 << r):
            req_hits += 1

    out[0] = w
    out[1] = total_chars / w
    out[2] = symbols / w
    out[5] = alpha_words / w
    out[6] = req_hits
    if nlines > 0:
        out[3] = bullets / nlines
        out[4] = ellipses / nlines

    # duplicate lines: dup accounting happens as counts cross 2
    epoch += 1
    dup_lines = 0
    dup_chars = 0
    total_line_chars = 0
    for i in range(nlines):
        total_line_chars += lc[i]
        key = lh[i]
        slot = np.int64(key & np.uint64(mask))
        while True:
            if te[slot] != epoch:
                te[slot] = epoch
                tk[slot] = key
                tc[slot] = 1
                tf[slot] = i
                break
            elif tk[slot] == key:
                tc[slot] += 1
                if tc[slot] == 2:
                    dup_lines += 2
                    dup_chars += lc[tf[slot]] + lc[i]
                else:
                    dup_lines += 1
                    dup_chars += lc[i]
                break
            slot = (slot + 1) & mask
    if nlines > 0:
        out[16] = dup_lines / nlines
        if total_line_chars > 0:
            out[17] = dup_chars / total_line_chars

    # n-gram repetition over rolling window hashes; seeding each window from
    # the FNV offset keeps the chain order-sensitive
    for i in range(w):
        wh[i] = (offset ^ th[i]) * prime
    for n in range(2, 11):
        m = w - n + 1
        if m <= 0:
            break
        for i in range(m):
            wh[i] = (wh[i] ^ th[i + n - 1]) * prime
        epoch += 1
        if n <= 4:
            best_c = 0
            best_f = 0
            for i in range(m):
                key = wh[i]
                cnt = 0
                fst = 0
                slot = np.int64(key & np.uint64(mask))
                while True:
                    if te[slot] != epoch:
                        te[slot] = epoch
                        tk[slot] = key
                        tc[slot] = 1
                        tf[slot] = i
                        cnt = 1
                        fst = i
                        break
                    elif tk[slot] == key:
                        tc[slot] += 1
                        cnt = tc[slot]
                        fst = tf[slot]
                        break
                    slot = (slot + 1) & mask
                if cnt > best_c or (cnt == best_c and fst < best_f):
                    best_c = cnt
                    best_f = fst
            gram_chars = prefix[best_f + n] - prefix[best_f]
            frac = best_c * gram_chars / total_chars
            if frac > 1.0:
                frac = 1.0
            out[7 + (n - 2)] = frac
        else:
            for i in range(m):
                dupflag[i] = 0
            for i in range(m):
                key = wh[i]
                slot = np.int64(key & np.uint64(mask))
                while True:
                    if te[slot] != epoch:
                        te[slot] = epoch
                        tk[slot] = key
                        tc[slot] = 1
                        tf[slot] = i
                        break
                    elif tk[slot] == key:
                        tc[slot] += 1
                        if tc[slot] == 2:
                            dupflag[tf[slot]] = 1
                        dupflag[i] = 1
                        break
                    slot = (slot + 1) & mask
            marked = 0
            cover_end = 0
            for i in range(m):
                if dupflag[i]:
                    s = i if i > cover_end else cover_end
                    if i + n > s:
                        marked += prefix[i + n] - prefix[s]
                    cover_end = i + n
            out[10 + (n - 5)] = marked / total_chars
    return epoch


@njit(cache=True, nogil=True)
def measure_batch(cp, offsets, is_ws, is_alpha, req_hashes):
    n_docs = offsets.size - 1
    out = np.zeros((n_docs, N_COLS), np.float64)
    max_len = 0
    for d in range(n_docs):
        length = offsets[d + 1] - offsets[d]
        if length > max_len:
            max_len = length
    # every token and non-blank line holds at least one code point
    max_tokens = (max_len // 2) + 2
    th = np.empty(max_tokens, np.uint64)
    prefix = np.empty(max_tokens + 1, np.int64)
    wh = np.empty(max_tokens, np.uint64)
    dupflag = np.empty(max_tokens, np.uint8)
    # a non-blank line holds at least one token, so lines never outnumber tokens
    lh = np.empty(max_tokens, np.uint64)
    lc = np.empty(max_tokens, np.int64)
    cap = 64
    while cap < 2 * (max_tokens + 2):
        cap <<= 1
    tk = np.empty(cap, np.uint64)
    tc = np.empty(cap, np.int32)
    tf = np.empty(cap, np.int32)
    te = np.zeros(cap, np.int64)
    mask = cap - 1
    epoch = 0
    for d in range(n_docs):
        epoch = _measure_doc(
            cp, offsets[d], offsets[d + 1], is_ws, is_alpha, req_hashes,
            th, prefix, wh, dupflag, lh, lc, tk, tc, tf, te, mask, epoch, out[d],
        )
    return out
