"""Logarithmic purity and many-body negativity of stabilizer states.

For a k-generator mixed stabilizer state on L sites, tr[rho^2] = 2^(k-L),
so the logarithmic purity is the integer L - k.  The negativity over a
cut A is half the GF(2) rank of the anticommutation matrix K of the
generators truncated to A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix, rank
from .pauli import StabilizerState


@dataclass(frozen=True)
class Cut:
    """A nonempty proper subset of sites defining the bipartition."""

    subsystem_sites: tuple

    def __init__(self, sites):
        object.__setattr__(self, "subsystem_sites", tuple(int(s) for s in sites))

    def validate(self, L: int) -> None:
        s = set(self.subsystem_sites)
        if not s or len(s) != len(self.subsystem_sites):
            raise ValueError("cut must be a nonempty set of distinct sites")
        if not all(0 <= i < L for i in s):
            raise ValueError("cut site out of range")
        if len(s) >= L:
            raise ValueError("cut must be a proper subset of the sites")

    def complement(self, L: int) -> "Cut":
        inside = set(self.subsystem_sites)
        return Cut([i for i in range(L) if i not in inside])


def half_cut(L: int) -> Cut:
    """The default contiguous half-chain subsystem, sites 0..L/2-1."""
    return Cut(range(L // 2))


def log_purity(state: StabilizerState) -> int:
    """S_p = -log2 tr[rho^2] = L - k, in bits."""
    return state.sites - state.k


def build_K(state: StabilizerState, cut: Cut) -> BitMatrix:
    """The k x k binary anticommutation matrix of the truncated generators."""
    cut.validate(state.sites)
    cols = list(cut.subsystem_sites)
    XA = state.X[:, cols].astype(np.int64)
    ZA = state.Z[:, cols].astype(np.int64)
    K = (XA @ ZA.T + ZA @ XA.T) % 2
    return BitMatrix.from_dense(K)


def negativity(state: StabilizerState, cut: Cut) -> int:
    """E_N = rank_F2(K) / 2, in bits; always an integer since K is
    alternating (zero diagonal, symmetric)."""
    r = rank(build_K(state, cut))
    assert r % 2 == 0, "alternating matrix with odd rank"
    return r // 2
