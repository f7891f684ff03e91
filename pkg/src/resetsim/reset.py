"""The single-site reset channel R_i(rho) = tr_i(rho) (x) |0><0|_i on
stabilizer generator sets.

The update first reduces the generators so at most one carries each of
X, Y, Z at the reset site, then branches on the number c of nonempty
letter classes: the c surviving representatives are traced away (for
c = 3 their triple product, which carries I at the site, is kept) and
+Z_i is added.  k changes by +1, 0, -1, -1 for c = 0, 1, 2, 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .pauli import StabilizerState


@dataclass
class SiteClassification:
    """Generator indices partitioned by their letter at one site."""

    n_x: int
    n_y: int
    n_z: int
    n_i: int
    x_rows: list
    y_rows: list
    z_rows: list
    i_rows: list


def classify_site(state: StabilizerState, i: int) -> SiteClassification:
    """Count and partition generators by site-i letter."""
    _check_site(state, i)
    code = (state.X[:, i].astype(int) << 1) | state.Z[:, i]
    rows = [np.flatnonzero(code == c).tolist() for c in range(4)]
    return SiteClassification(
        n_x=len(rows[2]), n_y=len(rows[3]), n_z=len(rows[1]), n_i=len(rows[0]),
        x_rows=rows[2], y_rows=rows[3], z_rows=rows[1], i_rows=rows[0],
    )


def reduce_to_representatives(state: StabilizerState, i: int) -> StabilizerState:
    """Multiply generators so only one per class touches site i.

    The generated group is unchanged; k is unchanged.
    """
    _check_site(state, i)
    out = state.copy()
    reps = np.empty(4, dtype=np.int64)
    kernels.reduce_site(out.X, out.Z, out.signs, out.k, i, reps)
    return out


def reset_site(state: StabilizerState, i: int) -> StabilizerState:
    """Return the state of R_i applied to state."""
    _check_site(state, i)
    L = state.sites
    k = state.k
    X = np.zeros((k + 1, L), dtype=np.uint8)
    Z = np.zeros((k + 1, L), dtype=np.uint8)
    S = np.zeros(k + 1, dtype=np.uint8)
    X[:k], Z[:k], S[:k] = state.X, state.Z, state.signs
    nk = kernels.reset_site(X, Z, S, k, i)
    assert nk <= L, "reset produced more generators than sites"
    return StabilizerState(L, X[:nk], Z[:nk], S[:nk])


def _check_site(state: StabilizerState, i: int) -> None:
    if not 0 <= i < state.sites:
        raise ValueError(f"site {i} out of range for L={state.sites}")
