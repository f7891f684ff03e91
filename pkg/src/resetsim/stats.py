"""Ensemble aggregation over trajectory samples: means, unbiased
variances, bootstrap standard errors, and finite-difference second
derivatives over the reset-strength grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_BOOTSTRAP = 200


@dataclass
class EnsembleStats:
    """Sample statistics of (S_p, E_N) at one (L, T, p) point."""

    L: int
    T: int
    p: float
    n_samples: int
    mean_sp: float
    var_sp: float
    se_mean_sp: float
    se_var_sp: float
    mean_en: float
    var_en: float
    se_mean_en: float
    se_var_en: float

    @property
    def key(self):
        return (self.L, self.T, self.p)


def aggregate_values(
    sp, en, key, n_bootstrap: int = DEFAULT_BOOTSTRAP, bootstrap_seed: int = 0
) -> EnsembleStats:
    """Statistics from raw per-trajectory observable arrays."""
    sp = np.asarray(sp, dtype=float)
    en = np.asarray(en, dtype=float)
    n = len(sp)
    if n < 2 or len(en) != n:
        raise ValueError("need >= 2 samples with matching lengths")
    rng = np.random.default_rng(bootstrap_seed)
    idx = rng.integers(0, n, size=(n_bootstrap, n))
    bs_sp, bs_en = sp[idx], en[idx]
    L, T, p = key
    return EnsembleStats(
        L=int(L), T=int(T), p=float(p), n_samples=n,
        mean_sp=float(sp.mean()), var_sp=float(sp.var(ddof=1)),
        se_mean_sp=float(bs_sp.mean(axis=1).std(ddof=1)),
        se_var_sp=float(bs_sp.var(axis=1, ddof=1).std(ddof=1)),
        mean_en=float(en.mean()), var_en=float(en.var(ddof=1)),
        se_mean_en=float(bs_en.mean(axis=1).std(ddof=1)),
        se_var_en=float(bs_en.var(axis=1, ddof=1).std(ddof=1)),
    )


def aggregate(
    records, key=None, n_bootstrap: int = DEFAULT_BOOTSTRAP, bootstrap_seed: int = 0
) -> EnsembleStats:
    """Aggregate the final-step observables of trajectory records.

    All records must share (L, T, p); the statistics are permutation
    invariant in the input order.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")
    keys = {(r.config.L, r.config.T, r.config.p) for r in records}
    if len(keys) != 1:
        raise ValueError(f"mixed ensemble keys: {sorted(keys)}")
    found = keys.pop()
    if key is not None and tuple(key) != found:
        raise ValueError(f"records carry key {found}, expected {tuple(key)}")
    sp = [r.final.sp for r in records]
    en = [r.final.en for r in records]
    return aggregate_values(sp, en, found, n_bootstrap, bootstrap_seed)


def second_derivative(curve, method: str = "quadratic"):
    """Central second differences of (p, value) points.

    The coefficients come from the local quadratic through each interior
    triple, so non-uniform grids are handled exactly for parabolas.
    Endpoints are omitted.
    """
    pts = sorted((float(p), float(v)) for p, v in curve)
    p = np.array([a for a, _ in pts])
    y = np.array([b for _, b in pts])
    if len(p) < 3:
        raise ValueError("need at least 3 grid points")
    if np.any(np.diff(p) <= 0):
        raise ValueError("p grid must be strictly increasing")
    if method != "quadratic":
        raise ValueError(f"unknown method {method!r}")
    h1 = p[1:-1] - p[:-2]
    h2 = p[2:] - p[1:-1]
    d2 = 2.0 * (y[:-2] / (h1 * (h1 + h2)) - y[1:-1] / (h1 * h2) + y[2:] / (h2 * (h1 + h2)))
    return list(zip(p[1:-1].tolist(), d2.tolist()))
