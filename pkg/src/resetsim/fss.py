"""Finite-size-scaling data collapse.

Rescales per-size curves with x' = L^(1/nu) (p - p_c) under either the
variance ansatz (subtract the interpolated value at p_c) or the bare
ansatz, scores the overlay with a Houdayer-Hartmann style reduced
chi-square against the local master curve of the other sizes, and fits
(p_c, nu) by a coarse grid scan followed by Nelder-Mead restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize


@dataclass
class FssSeries:
    """One system size's curve: strictly increasing p, values, errors."""

    L: int
    p: np.ndarray
    y: np.ndarray
    y_err: np.ndarray

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.y_err = np.asarray(self.y_err, dtype=float)
        if not (len(self.p) == len(self.y) == len(self.y_err)):
            raise ValueError("series arrays must have equal length")
        if len(self.p) < 4:
            raise ValueError("each series needs >= 4 points")
        if np.any(np.diff(self.p) <= 0):
            raise ValueError("p grid must be strictly increasing")
        if np.any(self.y_err <= 0):
            raise ValueError("y_err must be positive")


@dataclass
class FssDataset:
    series: list
    ansatz: str = "variance_form"
    zeta: float = 0.0

    def __post_init__(self):
        if self.ansatz not in ("variance_form", "bare_form"):
            raise ValueError(f"unknown ansatz {self.ansatz!r}")
        if len(self.series) < 2:
            raise ValueError("need >= 2 system sizes")


@dataclass
class FssFit:
    p_c: float
    nu: float
    quality: float
    p_c_err: float = float("nan")
    nu_err: float = float("nan")
    converged: bool = True
    n_evaluations: int = 0

    def as_dict(self) -> dict:
        return {
            "p_c": self.p_c, "nu": self.nu, "quality": self.quality,
            "p_c_err": self.p_c_err, "nu_err": self.nu_err,
            "converged": self.converged, "n_evaluations": self.n_evaluations,
        }


def rescale(ds: FssDataset, p_c: float, nu: float):
    """Rescaled (x', y', y_err') triples per series."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    out = []
    for s in ds.series:
        scale = float(s.L) ** (-ds.zeta / nu)
        x = float(s.L) ** (1.0 / nu) * (s.p - p_c)
        if ds.ansatz == "variance_form":
            if not (s.p[0] <= p_c <= s.p[-1]):
                raise ValueError(f"p_c = {p_c} outside the L={s.L} interpolation range")
            y0 = np.interp(p_c, s.p, s.y)
            y = (s.y - y0) * scale
        else:
            y = s.y * scale
        out.append((x, y, s.y_err * scale))
    return out


def collapse_quality(rescaled) -> float:
    """Reduced chi-square of each point against the error-weighted local
    linear fit through the bracketing points of the other series.

    ~0 for a noiseless perfect collapse, ~1 when scatter matches the
    stated errors, >> 1 for curves that do not overlay.
    """
    n_used = 0
    total = 0.0
    for i, (xi, yi, ei) in enumerate(rescaled):
        others = [r for j, r in enumerate(rescaled) if j != i]
        for x, y, e in zip(xi, yi, ei):
            sel_x, sel_y, sel_w = [], [], []
            for ox, oy, oe in others:
                below = np.flatnonzero(ox <= x)
                above = np.flatnonzero(ox > x)
                if below.size == 0 or above.size == 0:
                    continue
                for idx in (below[-1], above[0]):
                    sel_x.append(ox[idx])
                    sel_y.append(oy[idx])
                    sel_w.append(1.0 / oe[idx] ** 2)
            if len(sel_x) < 2:
                continue
            sx = np.array(sel_x)
            sy = np.array(sel_y)
            w = np.array(sel_w)
            # weighted linear fit and its prediction variance at x
            K = w.sum()
            Kx = (w * sx).sum()
            Kxx = (w * sx * sx).sum()
            Ky = (w * sy).sum()
            Kxy = (w * sx * sy).sum()
            delta = K * Kxx - Kx * Kx
            if delta <= 0:
                continue
            a = (Kxx * Ky - Kx * Kxy) / delta
            b = (K * Kxy - Kx * Ky) / delta
            var_fit = (Kxx - 2 * x * Kx + x * x * K) / delta
            total += (y - (a + b * x)) ** 2 / (e**2 + var_fit)
            n_used += 1
    if n_used == 0:
        raise ValueError("no rescaled-x overlap between series")
    return total / n_used


def _objective(ds: FssDataset, theta) -> float:
    p_c, nu = theta
    try:
        return collapse_quality(rescale(ds, float(p_c), float(nu)))
    except ValueError:
        return 1e12


def fit(
    ds: FssDataset,
    init=None,
    bounds=((0.05, 0.45), (0.3, 4.0)),
    grid: int = 7,
    n_bootstrap: int = 20,
    bootstrap_seed: int = 0,
    max_evaluations: int = 4000,
) -> FssFit:
    """Minimize the collapse objective over (p_c, nu).

    Coarse grid scan over the bounds, then Nelder-Mead from the best few
    starts (the landscape is shallow in nu and can hold local minima).
    Bootstrap errors come from refits of error-perturbed data.
    """
    (p_lo, p_hi), (nu_lo, nu_hi) = bounds
    starts = []
    if init is not None:
        if not (p_lo <= init[0] <= p_hi and nu_lo <= init[1] <= nu_hi):
            raise ValueError("init outside bounds")
        starts.append((tuple(init), _objective(ds, init)))
    for pc in np.linspace(p_lo, p_hi, grid):
        for nu in np.linspace(nu_lo, nu_hi, grid):
            starts.append(((pc, nu), _objective(ds, (pc, nu))))
    starts.sort(key=lambda s: s[1])

    n_eval = len(starts)
    best = None
    converged = False
    for theta0, q0 in starts[:3]:
        if q0 >= 1e12:
            continue
        res = minimize(
            lambda th: _objective(ds, th),
            x0=np.array(theta0),
            method="Nelder-Mead",
            bounds=[(p_lo, p_hi), (nu_lo, nu_hi)],
            options={"xatol": 1e-5, "fatol": 1e-8, "maxfev": max_evaluations},
        )
        n_eval += res.nfev
        if best is None or res.fun < best.fun:
            best = res
            converged = bool(res.success)
    if best is None:
        raise ValueError("no feasible starting point inside bounds")

    p_c, nu = float(best.x[0]), float(best.x[1])
    errs = (float("nan"), float("nan"))
    if n_bootstrap > 1:
        rng = np.random.default_rng(bootstrap_seed)
        samples = []
        for _ in range(n_bootstrap):
            perturbed = FssDataset(
                series=[
                    FssSeries(s.L, s.p, s.y + rng.normal(0.0, s.y_err), s.y_err)
                    for s in ds.series
                ],
                ansatz=ds.ansatz,
                zeta=ds.zeta,
            )
            r = minimize(
                lambda th: _objective(perturbed, th),
                x0=best.x,
                method="Nelder-Mead",
                bounds=[(p_lo, p_hi), (nu_lo, nu_hi)],
                options={"xatol": 1e-4, "fatol": 1e-6, "maxfev": 400},
            )
            n_eval += r.nfev
            samples.append(r.x)
        samples = np.array(samples)
        errs = (float(samples[:, 0].std(ddof=1)), float(samples[:, 1].std(ddof=1)))

    return FssFit(
        p_c=p_c, nu=nu, quality=float(best.fun),
        p_c_err=errs[0], nu_err=errs[1],
        converged=converged, n_evaluations=n_eval,
    )
