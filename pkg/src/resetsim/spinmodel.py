"""Closed-form large-qudit reference predictions for the logarithmic
purity, and extraction of the domain-wall tension S0(p) from data.

Below the transition the purity grows as T*p*log2(d); above it the
leading contribution is a single domain wall crossing the circuit plane,
giving S0(p)*L*log2(d) with a size-independent tension S0.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2

import numpy as np


@dataclass(frozen=True)
class SpinModelParams:
    d: int
    T: int
    L: int
    p: float
    p_c_ref: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("qudit dimension must be >= 2")
        if self.T <= 0 or self.L <= 0:
            raise ValueError("T and L must be positive")


def predict_Sp(params: SpinModelParams, S0: float = 1.0) -> float:
    """Piecewise leading-order purity: T*p*log2(d) below the reference
    transition point, S0*L*log2(d) above it."""
    if params.p <= params.p_c_ref:
        return params.T * params.p * log2(params.d)
    if not 0.0 <= S0 <= 1.0:
        raise ValueError("S0 must lie in [0, 1] for the large-p branch")
    return S0 * params.L * log2(params.d)


def extract_S0(stats, sizes=None) -> float:
    """Domain-wall tension from the slope of mean S_p versus L.

    stats: EnsembleStats at a fixed (T/L, p) across system sizes.  An
    intercept is fitted (and discarded) to absorb finite-size offsets;
    the slope is interpreted as S0 * log2(d) with d = 2.
    """
    stats = list(stats)
    if sizes is not None:
        wanted = set(int(s) for s in sizes)
        stats = [s for s in stats if s.L in wanted]
    if len(stats) < 2:
        raise ValueError("need >= 2 system sizes to fit a slope")
    L = np.array([s.L for s in stats], dtype=float)
    y = np.array([s.mean_sp for s in stats], dtype=float)
    slope, _ = np.polyfit(L, y, 1)
    return float(slope)
