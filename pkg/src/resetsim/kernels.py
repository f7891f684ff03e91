"""Numba-compiled inner loops: gate layers, the reset update, and whole
trajectories.

All functions operate on the packed representation used by
StabilizerState: X and Z of shape (capacity, L) uint8, a sign-bit vector
S, and an explicit generator count k (capacity is k + 1 or more so a
reset can append its +Z row in place).  These are the single
implementation of the hot operations; the Python-level wrappers in
reset.py and circuit.py call them on copies or on preallocated buffers.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .pauli import PHASE_TABLE

_PHASE16 = PHASE_TABLE.astype(np.int64)


@njit(cache=True)
def row_mul(X, Z, S, dst, src):
    """generator[dst] *= generator[src]; raises if the phase comes out
    imaginary (anticommuting rows), which would be a bookkeeping bug."""
    L = X.shape[1]
    e = 0
    for c in range(L):
        idx = (X[dst, c] << 3) | (Z[dst, c] << 2) | (X[src, c] << 1) | Z[src, c]
        e += _PHASE16[idx]
        X[dst, c] ^= X[src, c]
        Z[dst, c] ^= Z[src, c]
    e %= 4
    if e & 1:
        raise ValueError("row product of anticommuting generators")
    S[dst] ^= S[src] ^ (e >> 1)


@njit(cache=True)
def reduce_site(X, Z, S, k, i, reps):
    """Leave at most one generator per site-i letter class.

    reps must be an int64[4] work array; on return reps[code] holds the
    surviving row for letter code (z=1, x=2, y=3) or -1.
    """
    for code in range(4):
        reps[code] = -1
    for r in range(k):
        code = (X[r, i] << 1) | Z[r, i]
        if code != 0:
            if reps[code] < 0:
                reps[code] = r
            else:
                row_mul(X, Z, S, r, reps[code])


@njit(cache=True)
def reset_site(X, Z, S, k, i):
    """In-place reset channel tr_i(.) (x) |0><0|_i on the generator set.

    Requires row capacity >= k + 1.  Returns the new generator count.
    """
    reps = np.empty(4, dtype=np.int64)
    reduce_site(X, Z, S, k, i, reps)
    n_classes = 0
    for code in range(1, 4):
        if reps[code] >= 0:
            n_classes += 1

    delete = np.zeros(k, dtype=np.uint8)
    if n_classes == 3:
        # tr_i kills all three representatives but keeps their triple
        # product, which carries I at site i (the X*Y*Z = iI factor is
        # resolved into the sign by row_mul).
        dst = reps[2]
        row_mul(X, Z, S, dst, reps[3])
        row_mul(X, Z, S, dst, reps[1])
        delete[reps[3]] = 1
        delete[reps[1]] = 1
    else:
        for code in range(1, 4):
            if reps[code] >= 0:
                delete[reps[code]] = 1

    w = 0
    for r in range(k):
        if delete[r] == 0:
            if w != r:
                for c in range(X.shape[1]):
                    X[w, c] = X[r, c]
                    Z[w, c] = Z[r, c]
                S[w] = S[r]
            w += 1
    # Site i is now untouched by every surviving generator, so +Z_i is
    # independent of the group and gets appended.
    for c in range(X.shape[1]):
        X[w, c] = 0
        Z[w, c] = 0
    Z[w, i] = 1
    S[w] = 0
    return w + 1


@njit(cache=True)
def apply_layer(X, Z, S, k, ca, cb, syms, sbs, pattern_map, sign_base, parity):
    """Apply one brickwork layer: gate g acts on sites (ca[g], cb[g])."""
    for g in range(ca.shape[0]):
        i = ca[g]
        j = cb[g]
        sym = syms[g]
        sb = sbs[g]
        for r in range(k):
            idx = (X[r, i] << 3) | (Z[r, i] << 2) | (X[r, j] << 1) | Z[r, j]
            out = pattern_map[sym, idx]
            S[r] ^= sign_base[sym, idx] ^ parity[sb & idx]
            X[r, i] = (out >> 3) & 1
            Z[r, i] = (out >> 2) & 1
            X[r, j] = (out >> 1) & 1
            Z[r, j] = out & 1


@njit(cache=True)
def run_steps(
    X, Z, S, k,
    ea, eb, oa, ob,
    syms, sbs, coins,
    rec_mask, rec_X, rec_Z, rec_S, rec_k, rec_resets,
    pattern_map, sign_base, parity,
):
    """Run T time steps (two gate layers + one reset layer each).

    syms/sbs: (T, 2, L//2) gate draws; coins: (T, L) uint8 reset flags.
    rec_mask[t] selects steps t in 1..T whose post-step state is
    snapshotted into the rec_* buffers in order.  Returns (k, resets).
    """
    T = syms.shape[0]
    L = X.shape[1]
    resets = 0
    rec_pos = 0
    for t in range(T):
        apply_layer(X, Z, S, k, ea, eb, syms[t, 0], sbs[t, 0], pattern_map, sign_base, parity)
        apply_layer(X, Z, S, k, oa, ob, syms[t, 1], sbs[t, 1], pattern_map, sign_base, parity)
        for site in range(L):
            if coins[t, site]:
                k = reset_site(X, Z, S, k, site)
                resets += 1
        if rec_mask[t + 1]:
            for r in range(k):
                for c in range(L):
                    rec_X[rec_pos, r, c] = X[r, c]
                    rec_Z[rec_pos, r, c] = Z[r, c]
                rec_S[rec_pos, r] = S[r]
            rec_k[rec_pos] = k
            rec_resets[rec_pos] = resets
            rec_pos += 1
    return k, resets
