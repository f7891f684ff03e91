"""Exact dense density-matrix simulator for small systems.

Ground truth for the stabilizer engine: it evaluates rho as an explicit
2^L x 2^L matrix (L <= 8), applies the same gate/reset decision stream,
and computes tr[rho^2] and the partial-transpose trace norm exactly.
Site 0 is the leftmost (most significant) tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import observables, reset
from .circuit import CircuitConfig, brickwork_links, draw_step, make_rng
from .clifford import CliffordGate2, apply_gate
from .observables import Cut
from .pauli import PauliString, StabilizerState

MAX_DENSE_SITES = 8

_I2 = np.eye(2, dtype=complex)
_PAULI_1 = {
    "I": _I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass
class DenseState:
    """An exact density matrix on L sites."""

    rho: np.ndarray
    L: int

    def validate(self) -> None:
        d = 2**self.L
        if self.rho.shape != (d, d):
            raise ValueError("density matrix shape mismatch")
        if not np.allclose(self.rho, self.rho.conj().T, atol=1e-12):
            raise ValueError("density matrix not Hermitian")
        if abs(np.trace(self.rho) - 1.0) > 1e-12:
            raise ValueError("density matrix trace != 1")
        if np.linalg.eigvalsh(self.rho).min() < -1e-10:
            raise ValueError("density matrix not positive semidefinite")

    def copy(self) -> "DenseState":
        return DenseState(self.rho.copy(), self.L)


def dense_zero_state(L: int) -> DenseState:
    _check_sites(L)
    d = 2**L
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1.0
    return DenseState(rho, L)


def pauli_matrix(g: PauliString) -> np.ndarray:
    """The dense matrix of a signed Pauli string."""
    _check_sites(g.sites)
    m = np.array([[g.sign]], dtype=complex)
    label = g.label()[1:]
    for letter in label:
        m = np.kron(m, _PAULI_1[letter])
    return m


def dense_stabilizer_state(s: StabilizerState) -> DenseState:
    """rho = 2^-L * sum of the 2^k signed group-element matrices."""
    _check_sites(s.sites)
    d = 2**s.sites
    elements = [np.eye(d, dtype=complex)]
    for g in s.generators:
        gm = pauli_matrix(g)
        elements += [e @ gm for e in elements]
    rho = sum(elements) / d
    return DenseState(rho, s.sites)


def dense_purity(st: DenseState) -> float:
    """-log2 tr[rho^2]."""
    return float(-np.log2(max(np.trace(st.rho @ st.rho).real, 1e-300)))


def dense_reset(st: DenseState, i: int) -> DenseState:
    """Exact channel tr_i(rho) (x) |0><0|_i."""
    L = st.L
    if not 0 <= i < L:
        raise ValueError(f"site {i} out of range")
    t = st.rho.reshape((2,) * (2 * L))
    rest = np.trace(t, axis1=i, axis2=L + i)
    expanded = np.expand_dims(rest, axis=(i, L + i))
    out = np.zeros((2,) * (2 * L), dtype=complex)
    sel = tuple(slice(0, 1) if ax in (i, L + i) else slice(None) for ax in range(2 * L))
    out[sel] = expanded
    return DenseState(out.reshape(2**L, 2**L), L)


def partial_transpose(st: DenseState, cut: Cut) -> np.ndarray:
    cut.validate(st.L)
    L = st.L
    t = st.rho.reshape((2,) * (2 * L))
    perm = list(range(2 * L))
    for i in cut.subsystem_sites:
        perm[i], perm[L + i] = perm[L + i], perm[i]
    return t.transpose(perm).reshape(2**L, 2**L)


def dense_negativity(st: DenseState, cut: Cut) -> float:
    """log2 of the trace norm of the partial transpose over the cut."""
    sv = np.linalg.svd(partial_transpose(st, cut), compute_uv=False)
    return float(np.log2(sv.sum()))


@lru_cache(maxsize=None)
def _sym_unitary_cached(sym: int) -> np.ndarray:
    """Solve the intertwiner equations for the sign-free gate (sym, 0)."""
    gate = CliffordGate2(sym, 0)
    basis = [
        PauliString.from_label(lbl)
        for lbl in ("+XI", "+ZI", "+IX", "+IZ")
    ]
    blocks = []
    eye = np.eye(4, dtype=complex)
    for p, q in zip(basis, gate.images()):
        P, Q = pauli_matrix(p), pauli_matrix(q)
        blocks.append(np.kron(eye, Q) - np.kron(P.T, eye))
    m = np.vstack(blocks)
    _, sv, vh = np.linalg.svd(m)
    assert sv[-1] < 1e-10, "no intertwiner for gate truth table"
    u = vh[-1].conj().reshape(4, 4, order="F")
    norm = u @ u.conj().T
    return u / np.sqrt(norm[0, 0].real)


@lru_cache(maxsize=16)
def _sign_pauli(sign_bits: int) -> np.ndarray:
    """The two-site Pauli whose conjugation flips exactly the basis
    images selected by sign_bits (X1, Z1, X2, Z2 on bits 3..0)."""
    x1, z1 = (sign_bits >> 2) & 1, (sign_bits >> 3) & 1
    x2, z2 = sign_bits & 1, (sign_bits >> 1) & 1
    w = PauliString(np.array([x1, x2], dtype=np.uint8),
                    np.array([z1, z2], dtype=np.uint8))
    return pauli_matrix(w)


@lru_cache(maxsize=None)
def _gate_unitary_cached(sym: int, sign_bits: int) -> np.ndarray:
    gate = CliffordGate2(sym, sign_bits)
    u = _sym_unitary_cached(sym) @ _sign_pauli(sign_bits)
    for p, q in zip(("+XI", "+ZI", "+IX", "+IZ"), gate.images()):
        P = pauli_matrix(PauliString.from_label(p))
        assert np.allclose(u @ P @ u.conj().T, pauli_matrix(q), atol=1e-9)
    return u


def gate_unitary(gate: CliffordGate2) -> np.ndarray:
    """The 4x4 unitary of a two-qubit Clifford gate, up to global phase."""
    return _gate_unitary_cached(gate.sym, gate.sign_bits)


@lru_cache(maxsize=None)
def _embed_arrays(L: int, i: int, j: int):
    """Index machinery placing a 4x4 block matrix on sites (i, j).

    Returns (pair, same): pair[a] is the two-bit (site i, site j) value
    of standard basis state a, and same[a, b] flags agreement on all
    remaining sites, so U_full = u4[pair x pair] * same.
    """
    a = np.arange(2**L)
    bit_i = (a >> (L - 1 - i)) & 1
    bit_j = (a >> (L - 1 - j)) & 1
    pair = (bit_i << 1) | bit_j
    rest_mask = (2**L - 1) ^ (1 << (L - 1 - i)) ^ (1 << (L - 1 - j))
    rest = a & rest_mask
    same = (rest[:, None] == rest[None, :]).astype(complex)
    return pair, same


def apply_unitary_two_site(st: DenseState, u4: np.ndarray, i: int, j: int) -> DenseState:
    """rho -> U rho U^dag with U acting on sites (i, j)."""
    pair, same = _embed_arrays(st.L, i, j)
    u_full = u4[np.ix_(pair, pair)] * same
    return DenseState(u_full @ st.rho @ u_full.conj().T, st.L)


@dataclass
class CosimResult:
    """Final-step observables from the two engines on one shared stream."""

    stab_sp: int
    stab_en: int
    dense_sp: float
    dense_en: float
    matches: bool

    @classmethod
    def compare(cls, sp, en, dsp, den, tol=1e-9):
        return cls(sp, en, dsp, den, abs(sp - dsp) <= tol and abs(en - den) <= tol)


def cosimulate(cfg: CircuitConfig, cut: Cut | None = None, tol: float = 1e-9) -> CosimResult:
    """Run the brickwork circuit on both engines from one decision stream."""
    _check_sites(cfg.L)
    L = cfg.L
    if cut is None:
        cut = observables.half_cut(L)
    rng = make_rng(cfg.seed, cfg.stream)
    state = StabilizerState.zero_state(L)
    dense = dense_zero_state(L)
    ea, eb, oa, ob = brickwork_links(L)
    for _ in range(cfg.T):
        d = draw_step(cfg, rng)
        for gates, ca, cb in ((d.even_gates, ea, eb), (d.odd_gates, oa, ob)):
            for g in range(len(ca)):
                idx = int(gates[g])
                gate = CliffordGate2(idx >> 4, idx & 15)
                apply_gate(state, gate, (int(ca[g]), int(cb[g])))
                dense = apply_unitary_two_site(dense, gate_unitary(gate), int(ca[g]), int(cb[g]))
        for site in range(L):
            if d.coins[site]:
                state = reset.reset_site(state, site)
                dense = dense_reset(dense, site)
    return CosimResult.compare(
        observables.log_purity(state),
        observables.negativity(state, cut),
        dense_purity(dense),
        dense_negativity(dense, cut),
        tol,
    )


def cosimulate_pairs(
    L: int, T: int, p: float, seed: int, cut: Cut | None = None, tol: float = 1e-9
) -> CosimResult:
    """Co-simulation with gates on random adjacent PBC pairs.

    Unlike the brickwork driver this works for odd L too: each step draws
    L random links and a reset layer with probability q = p/L per site.
    """
    _check_sites(L)
    if cut is None:
        cut = observables.half_cut(L)
    q = p / L
    rng = make_rng(seed, 0)
    state = StabilizerState.zero_state(L)
    dense = dense_zero_state(L)
    for _ in range(T):
        links = rng.integers(0, L, size=L)
        gidx = rng.integers(0, 11520, size=L)
        coins = rng.random(L) < q
        for l, gi in zip(links, gidx):
            i, j = int(l), int((l + 1) % L)
            gate = CliffordGate2(int(gi) >> 4, int(gi) & 15)
            apply_gate(state, gate, (i, j))
            dense = apply_unitary_two_site(dense, gate_unitary(gate), i, j)
        for site in range(L):
            if coins[site]:
                state = reset.reset_site(state, site)
                dense = dense_reset(dense, site)
    return CosimResult.compare(
        observables.log_purity(state),
        observables.negativity(state, cut),
        dense_purity(dense),
        dense_negativity(dense, cut),
        tol,
    )


def _check_sites(L: int) -> None:
    if L > MAX_DENSE_SITES:
        raise ValueError(f"dense oracle capped at L = {MAX_DENSE_SITES}")
