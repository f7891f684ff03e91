"""(1+1)-D trajectory driver: PBC brickwork of random two-site Cliffords
with a per-site reset layer of probability q = p/L.

Random-decision order is pinned so the dense oracle can replay the same
stream: per time step, one batch of gate draws for the even-link layer
(gates left to right), one for the odd-link layer, then L reset coin
flips in ascending site order.  Per-trajectory streams come from a
counter-based Philox generator keyed by (seed, stream).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels, observables, reset
from .clifford import CliffordGate2, gate_tables, sample_clifford2_indices
from .pauli import StabilizerState

RecordSchedule = "final_only"  # or "every_step" or an explicit step tuple


@dataclass(frozen=True)
class CircuitConfig:
    """One trajectory distribution: sites, depth, reset strength, seed."""

    L: int
    T: int
    p: float
    seed: int
    record_schedule: object = "final_only"
    stream: int = 0

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ValueError("L must be even and >= 2 for PBC brickwork")
        if self.T < 0:
            raise ValueError("T must be nonnegative")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q = p/L = {self.q} outside [0, 1]")
        self.recorded_steps()  # validate the schedule

    @property
    def q(self) -> float:
        return self.p / self.L

    def recorded_steps(self) -> tuple:
        sched = self.record_schedule
        if sched == "final_only":
            return (self.T,) if self.T > 0 else ()
        if sched == "every_step":
            return tuple(range(1, self.T + 1))
        steps = tuple(sorted(set(int(t) for t in sched)))
        if any(t < 1 or t > self.T for t in steps):
            raise ValueError("recorded steps must lie in 1..T")
        return steps


@dataclass
class StepRecord:
    t: int
    sp: int
    en: int
    k: int
    resets_applied: int


@dataclass
class TrajectoryRecord:
    """Observables of a single trajectory sample at the recorded steps."""

    config: CircuitConfig
    entries: list
    final_state: StabilizerState = field(repr=False, default=None)

    @property
    def final(self) -> StepRecord:
        return self.entries[-1]


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based per-trajectory generator; independent streams for
    distinct (seed, stream) pairs."""
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), stream & (2**64 - 1)]))


def brickwork_links(L: int):
    """Even links (0,1),(2,3),... and odd links (1,2),...,(L-1,0)."""
    ea = np.arange(0, L, 2, dtype=np.int64)
    eb = ea + 1
    oa = np.arange(1, L, 2, dtype=np.int64)
    ob = (oa + 1) % L
    return ea, eb, oa, ob


@dataclass
class StepDraws:
    """All random decisions of one time step, in draw order."""

    even_gates: np.ndarray
    odd_gates: np.ndarray
    coins: np.ndarray


def draw_step(cfg: CircuitConfig, rng: np.random.Generator) -> StepDraws:
    G = cfg.L // 2
    even = sample_clifford2_indices(rng, G)
    odd = sample_clifford2_indices(rng, G)
    coins = rng.random(cfg.L) < cfg.q
    return StepDraws(even, odd, coins)


def apply_step(state: StabilizerState, draws: StepDraws) -> StabilizerState:
    """Reference (non-kernel) application of one time step, in place
    except for the reset rebuilds."""
    L = state.sites
    ea, eb, oa, ob = brickwork_links(L)
    from .clifford import apply_gate

    for gates, ca, cb in ((draws.even_gates, ea, eb), (draws.odd_gates, oa, ob)):
        for g in range(len(ca)):
            idx = int(gates[g])
            apply_gate(state, CliffordGate2(idx >> 4, idx & 15), (int(ca[g]), int(cb[g])))
    for site in range(L):
        if draws.coins[site]:
            state = reset.reset_site(state, site)
    return state


def step(state: StabilizerState, cfg: CircuitConfig, t: int, rng: np.random.Generator) -> StabilizerState:
    """One time step: even-link gates, odd-link gates, reset layer."""
    return apply_step(state, draw_step(cfg, rng))


def run_trajectory(cfg: CircuitConfig, cut: observables.Cut | None = None) -> TrajectoryRecord:
    """Run T steps from |0...0>, recording observables per the schedule.

    Deterministic given (seed, stream); the fast kernel consumes exactly
    the random stream that repeated step() calls would.
    """
    L, T = cfg.L, cfg.T
    rng = make_rng(cfg.seed, cfg.stream)
    G = L // 2
    syms = np.empty((T, 2, G), dtype=np.int64)
    sbs = np.empty((T, 2, G), dtype=np.uint8)
    coins = np.empty((T, L), dtype=np.uint8)
    for t in range(T):
        d = draw_step(cfg, rng)
        syms[t, 0], sbs[t, 0] = d.even_gates >> 4, (d.even_gates & 15).astype(np.uint8)
        syms[t, 1], sbs[t, 1] = d.odd_gates >> 4, (d.odd_gates & 15).astype(np.uint8)
        coins[t] = d.coins

    rec_steps = cfg.recorded_steps()
    rec_mask = np.zeros(T + 1, dtype=np.uint8)
    for t in rec_steps:
        rec_mask[t] = 1
    n_rec = len(rec_steps)

    X = np.zeros((L + 1, L), dtype=np.uint8)
    Z = np.zeros((L + 1, L), dtype=np.uint8)
    S = np.zeros(L + 1, dtype=np.uint8)
    Z[:L] = np.eye(L, dtype=np.uint8)
    rec_X = np.zeros((n_rec, L, L), dtype=np.uint8)
    rec_Z = np.zeros((n_rec, L, L), dtype=np.uint8)
    rec_S = np.zeros((n_rec, L), dtype=np.uint8)
    rec_k = np.zeros(n_rec, dtype=np.int64)
    rec_resets = np.zeros(n_rec, dtype=np.int64)

    _, pattern_map, sign_base, parity = gate_tables()
    ea, eb, oa, ob = brickwork_links(L)
    k, _ = kernels.run_steps(
        X, Z, S, L,
        ea, eb, oa, ob,
        syms, sbs, coins,
        rec_mask, rec_X, rec_Z, rec_S, rec_k, rec_resets,
        pattern_map, sign_base, parity,
    )

    if cut is None:
        cut = observables.half_cut(L)
    entries = []
    for n, t in enumerate(rec_steps):
        kk = int(rec_k[n])
        snap = StabilizerState(L, rec_X[n, :kk], rec_Z[n, :kk], rec_S[n, :kk])
        entries.append(
            StepRecord(
                t=t,
                sp=observables.log_purity(snap),
                en=observables.negativity(snap, cut),
                k=kk,
                resets_applied=int(rec_resets[n]),
            )
        )
    final_state = StabilizerState(L, X[:k].copy(), Z[:k].copy(), S[:k].copy())
    if not entries:  # T = 0: record the initial state
        entries = [StepRecord(0, 0, 0, L, 0)]
    return TrajectoryRecord(config=cfg, entries=entries, final_state=final_state)
