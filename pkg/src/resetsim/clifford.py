"""Two-qubit Clifford gates and uniform sampling.

A gate is identified by (symplectic index, sign bits).  The 720 elements
of Sp(4, F2) are enumerated once in a pinned lexicographic order; with 4
sign bits for the images of X1, Z1, X2, Z2 this covers all 11520 group
elements up to global phase.  For each symplectic element we tabulate the
conjugation action on the 16 two-site Pauli patterns (new pattern plus
base sign), so gate application is a table lookup per generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli import PHASE_TABLE, PauliString, StabilizerState

N_SYMPLECTIC = 720
N_CLIFFORD2 = N_SYMPLECTIC * 16

# Pattern encoding: (x1<<3) | (z1<<2) | (x2<<1) | z2.
_X1, _Z1, _X2, _Z2 = 0b1000, 0b0100, 0b0010, 0b0001

PARITY16 = np.array([bin(i).count("1") & 1 for i in range(16)], dtype=np.uint8)


def _sp(u: int, v: int) -> int:
    """Symplectic product of two 4-bit patterns."""
    return (
        ((u >> 3) & (v >> 2))
        ^ ((u >> 2) & (v >> 3))
        ^ ((u >> 1) & v)
        ^ (u & (v >> 1))
    ) & 1


def _pattern_phase(u: int, v: int) -> int:
    """Exponent of i (mod 4) in the product of two pattern Paulis."""
    s1 = ((u >> 2) & 0b11) << 2 | ((v >> 2) & 0b11)
    s2 = (u & 0b11) << 2 | (v & 0b11)
    return (int(PHASE_TABLE[s1]) + int(PHASE_TABLE[s2])) % 4


def _y_count(p: int) -> int:
    return (((p >> 3) & (p >> 2)) & 1) + (((p >> 1) & p) & 1)


@lru_cache(maxsize=1)
def gate_tables():
    """(symplectics, pattern_map, sign_base, parity16).

    symplectics: (720, 4) images of X1, Z1, X2, Z2 as 4-bit patterns.
    pattern_map: (720, 16) conjugation action on each Pauli pattern.
    sign_base:   (720, 16) sign bit of the image with all-plus images.
    """
    elems = []
    for e1 in range(1, 16):
        for f1 in range(16):
            if _sp(e1, f1) != 1:
                continue
            for e2 in range(1, 16):
                if _sp(e1, e2) or _sp(f1, e2):
                    continue
                for f2 in range(16):
                    if f2 == 0 or _sp(e1, f2) or _sp(f1, f2) or _sp(e2, f2) != 1:
                        continue
                    elems.append((e1, f1, e2, f2))
    assert len(elems) == N_SYMPLECTIC
    symplectics = np.array(elems, dtype=np.uint8)

    pattern_map = np.zeros((N_SYMPLECTIC, 16), dtype=np.uint8)
    sign_base = np.zeros((N_SYMPLECTIC, 16), dtype=np.uint8)
    for s, (e1, f1, e2, f2) in enumerate(elems):
        for p in range(16):
            q = 0
            exp = _y_count(p)
            for bit, img in ((_X1, e1), (_Z1, f1), (_X2, e2), (_Z2, f2)):
                if p & bit:
                    exp += _pattern_phase(q, img)
                    q ^= img
            exp %= 4
            assert exp % 2 == 0, "conjugation produced a non-Hermitian image"
            pattern_map[s, p] = q
            sign_base[s, p] = 1 if exp == 2 else 0
    return symplectics, pattern_map, sign_base, PARITY16


def _pattern_to_pauli(p: int, sign_bit: int) -> PauliString:
    return PauliString(
        np.array([(p >> 3) & 1, (p >> 1) & 1], dtype=np.uint8),
        np.array([(p >> 2) & 1, p & 1], dtype=np.uint8),
        -1 if sign_bit else 1,
    )


@dataclass(frozen=True)
class CliffordGate2:
    """A two-qubit Clifford gate as a 4-letter truth table.

    sym indexes the symplectic part; sign_bits flips the signs of the
    images of (X1, Z1, X2, Z2) via bits (3, 2, 1, 0).
    """

    sym: int
    sign_bits: int = 0

    def __post_init__(self):
        if not (0 <= self.sym < N_SYMPLECTIC and 0 <= self.sign_bits < 16):
            raise ValueError("gate index out of range")

    @property
    def index(self) -> int:
        return self.sym * 16 + self.sign_bits

    def images(self) -> list[PauliString]:
        """Images of X1, Z1, X2, Z2 under conjugation."""
        symplectics, _, sign_base, parity = gate_tables()
        out = []
        for bit, col in zip((_X1, _Z1, _X2, _Z2), range(4)):
            p = int(symplectics[self.sym, col])
            sb = int(sign_base[self.sym, bit]) ^ int(parity[self.sign_bits & bit])
            out.append(_pattern_to_pauli(p, sb))
        return out

    def image_of(self, pattern: int) -> PauliString:
        """Image of an arbitrary two-site Pauli pattern."""
        _, pattern_map, sign_base, parity = gate_tables()
        q = int(pattern_map[self.sym, pattern])
        sb = int(sign_base[self.sym, pattern]) ^ int(parity[self.sign_bits & pattern])
        return _pattern_to_pauli(q, sb)

    @classmethod
    def from_images(cls, images) -> "CliffordGate2":
        """Build a gate from the images of X1, Z1, X2, Z2."""
        if len(images) != 4:
            raise ValueError("need images of X1, Z1, X2, Z2")
        pats = []
        sign_bits = 0
        for n, img in enumerate(images):
            if img.sites != 2:
                raise ValueError("images must be two-site Paulis")
            p = (int(img.x[0]) << 3) | (int(img.z[0]) << 2) | (int(img.x[1]) << 1) | int(img.z[1])
            pats.append(p)
            if img.sign == -1:
                sign_bits |= 8 >> n
        sym = _symplectic_index().get(tuple(pats))
        if sym is None:
            raise ValueError("images do not form a valid symplectic map")
        return cls(sym, sign_bits)


@lru_cache(maxsize=1)
def _symplectic_index() -> dict:
    symplectics, _, _, _ = gate_tables()
    return {tuple(int(v) for v in row): s for s, row in enumerate(symplectics)}


def cnot_gate() -> CliffordGate2:
    """CNOT with the first pair site as control."""
    return CliffordGate2.from_images(
        [
            PauliString.from_label("+XX"),
            PauliString.from_label("+ZI"),
            PauliString.from_label("+IX"),
            PauliString.from_label("+ZZ"),
        ]
    )


def identity_gate() -> CliffordGate2:
    return CliffordGate2.from_images(
        [
            PauliString.from_label("+XI"),
            PauliString.from_label("+ZI"),
            PauliString.from_label("+IX"),
            PauliString.from_label("+IZ"),
        ]
    )


def sample_clifford2_indices(rng: np.random.Generator, size=None):
    """Uniform gate indices in [0, 11520); sym = idx >> 4, signs = idx & 15."""
    return rng.integers(0, N_CLIFFORD2, size=size)


def sample_clifford2(rng: np.random.Generator) -> CliffordGate2:
    """A uniformly random two-qubit Clifford gate (table-based sampler)."""
    idx = int(sample_clifford2_indices(rng))
    return CliffordGate2(idx >> 4, idx & 15)


def apply_gate(state: StabilizerState, gate: CliffordGate2, site_pair) -> StabilizerState:
    """Conjugate every generator by the gate acting on (i, j), in place."""
    i, j = site_pair
    L = state.sites
    if not (0 <= i < L and 0 <= j < L) or i == j:
        raise ValueError(f"invalid site pair ({i}, {j}) for L={L}")
    _, pattern_map, sign_base, parity = gate_tables()
    X, Z = state.X, state.Z
    idx = (X[:, i] << 3) | (Z[:, i] << 2) | (X[:, j] << 1) | Z[:, j]
    out = pattern_map[gate.sym][idx]
    state.signs ^= sign_base[gate.sym][idx] ^ parity[gate.sign_bits & idx]
    X[:, i] = (out >> 3) & 1
    Z[:, i] = (out >> 2) & 1
    X[:, j] = (out >> 1) & 1
    Z[:, j] = out & 1
    return state
