"""Signed Pauli strings and stabilizer states as generator lists.

A Pauli string is stored in binary symplectic form: x and z bit vectors
over the sites plus a sign in {+1, -1}.  The site letter decodes as
I=(0,0), X=(1,0), Z=(0,1), Y=(1,1) with the convention Y = iXZ, so the
imaginary units arising in products are resolved into the sign before
storage.  A mixed stabilizer state on L sites is a list of k <= L
commuting, independent generators; the represented density matrix is
rho = (1/2^L) * sum over the 2^k signed group elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf2 import symplectic_product

# Exponent of i (mod 4) in the site-letter product a*b, indexed by
# (a.x<<3)|(a.z<<2)|(b.x<<1)|b.z.  E.g. X*Z = -iY gives exponent 3.
PHASE_TABLE = np.zeros(16, dtype=np.uint8)
for _ax in range(2):
    for _az in range(2):
        for _bx in range(2):
            for _bz in range(2):
                if _ax and _az:
                    _g = _bz - _bx
                elif _ax:
                    _g = _bz * (2 * _bx - 1)
                elif _az:
                    _g = _bx * (1 - 2 * _bz)
                else:
                    _g = 0
                PHASE_TABLE[(_ax << 3) | (_az << 2) | (_bx << 1) | _bz] = _g % 4

_LETTERS = "IZXY"  # indexed by (x<<1)|z


@dataclass
class PauliString:
    """A signed L-site Pauli operator."""

    x: np.ndarray
    z: np.ndarray
    sign: int = 1

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.uint8) & 1
        self.z = np.asarray(self.z, dtype=np.uint8) & 1
        if self.x.shape != self.z.shape or self.x.ndim != 1:
            raise ValueError("x and z must be 1-D bit vectors of equal length")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def sites(self) -> int:
        return len(self.x)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse e.g. '+XXI' or '-IZY' (sign character optional)."""
        sign = 1
        if label and label[0] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        x = np.array([c in "XY" for c in label], dtype=np.uint8)
        z = np.array([c in "ZY" for c in label], dtype=np.uint8)
        if any(c not in "IXYZ" for c in label):
            raise ValueError(f"invalid Pauli label {label!r}")
        return cls(x, z, sign)

    def label(self) -> str:
        body = "".join(_LETTERS[(int(a) << 1) | int(b)] for a, b in zip(self.x, self.z))
        return ("+" if self.sign == 1 else "-") + body

    def copy(self) -> "PauliString":
        return PauliString(self.x.copy(), self.z.copy(), self.sign)

    def commutes_with(self, other: "PauliString") -> bool:
        return symplectic_product(self, other) == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and self.sign == other.sign
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __repr__(self) -> str:
        return f"PauliString({self.label()!r})"


def phase_exponent(ax, az, bx, bz) -> int:
    """Exponent of i (mod 4) in the product of two Pauli strings."""
    idx = (
        (np.asarray(ax, dtype=np.uint8) << 3)
        | (np.asarray(az, dtype=np.uint8) << 2)
        | (np.asarray(bx, dtype=np.uint8) << 1)
        | np.asarray(bz, dtype=np.uint8)
    )
    return int(PHASE_TABLE[idx].sum()) % 4


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Operator product a*b with accumulated sign.

    Raises if the inputs anticommute: the product then carries a factor
    +/-i and cannot be stored as a Hermitian string.
    """
    if a.sites != b.sites:
        raise ValueError(f"length mismatch: {a.sites} != {b.sites}")
    e = phase_exponent(a.x, a.z, b.x, b.z)
    if e % 2:
        raise ValueError("product of anticommuting Paulis is anti-Hermitian")
    sign = a.sign * b.sign * (1 if e == 0 else -1)
    return PauliString(a.x ^ b.x, a.z ^ b.z, sign)


class StabilizerError(ValueError):
    """Invalid stabilizer generator set (dependent or anticommuting)."""


@dataclass
class StabilizerState:
    """k commuting independent generators on L sites.

    Internally kept as packed uint8 arrays: X and Z of shape (k, L) and a
    sign-bit vector (0 for +, 1 for -), which is what the gate and reset
    kernels operate on.
    """

    sites: int
    X: np.ndarray = field(default=None)
    Z: np.ndarray = field(default=None)
    signs: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.X is None:
            self.X = np.zeros((0, self.sites), dtype=np.uint8)
            self.Z = np.zeros((0, self.sites), dtype=np.uint8)
            self.signs = np.zeros(0, dtype=np.uint8)
        self.X = np.ascontiguousarray(self.X, dtype=np.uint8)
        self.Z = np.ascontiguousarray(self.Z, dtype=np.uint8)
        self.signs = np.ascontiguousarray(self.signs, dtype=np.uint8)
        if self.X.shape != self.Z.shape or self.X.shape[1] != self.sites:
            raise ValueError("generator array shape mismatch")
        if self.signs.shape != (self.X.shape[0],):
            raise ValueError("sign vector length mismatch")

    @property
    def k(self) -> int:
        return self.X.shape[0]

    @classmethod
    def zero_state(cls, sites: int) -> "StabilizerState":
        """|0...0>: stabilized by +Z_i on every site."""
        return cls(
            sites,
            X=np.zeros((sites, sites), dtype=np.uint8),
            Z=np.eye(sites, dtype=np.uint8),
            signs=np.zeros(sites, dtype=np.uint8),
        )

    @classmethod
    def from_paulis(cls, sites: int, generators) -> "StabilizerState":
        gens = list(generators)
        X = np.zeros((len(gens), sites), dtype=np.uint8)
        Z = np.zeros((len(gens), sites), dtype=np.uint8)
        signs = np.zeros(len(gens), dtype=np.uint8)
        for i, g in enumerate(gens):
            if g.sites != sites:
                raise ValueError("generator length mismatch")
            X[i], Z[i] = g.x, g.z
            signs[i] = 0 if g.sign == 1 else 1
        return cls(sites, X, Z, signs)

    @classmethod
    def from_labels(cls, labels, sites: int | None = None) -> "StabilizerState":
        gens = [PauliString.from_label(s) for s in labels]
        if sites is None:
            if not gens:
                raise ValueError("sites required for an empty generator list")
            sites = gens[0].sites
        return cls.from_paulis(sites, gens)

    @property
    def generators(self) -> list[PauliString]:
        return [
            PauliString(self.X[i].copy(), self.Z[i].copy(), 1 if self.signs[i] == 0 else -1)
            for i in range(self.k)
        ]

    def generator(self, i: int) -> PauliString:
        return PauliString(self.X[i].copy(), self.Z[i].copy(), 1 if self.signs[i] == 0 else -1)

    def copy(self) -> "StabilizerState":
        return StabilizerState(self.sites, self.X.copy(), self.Z.copy(), self.signs.copy())

    def dump(self) -> str:
        """Debug format: one generator per line, e.g. '+XXI'."""
        return "\n".join(g.label() for g in self.generators)

    def validate(self) -> None:
        """Check mutual commutation, independence, and no -I in the group."""
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if symplectic_product(gens[i], gens[j]):
                    raise StabilizerError(f"generators {i} and {j} anticommute")
        canonicalize(self)  # raises on dependence / sign contradiction

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StabilizerState)
            and self.sites == other.sites
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.Z, other.Z)
            and np.array_equal(self.signs, other.signs)
        )


def row_multiply(state: StabilizerState, dst: int, src: int) -> None:
    """generator[dst] <- generator[dst] * generator[src], sign tracked."""
    e = phase_exponent(state.X[dst], state.Z[dst], state.X[src], state.Z[src])
    if e % 2:
        raise StabilizerError("row product of anticommuting generators")
    state.X[dst] ^= state.X[src]
    state.Z[dst] ^= state.Z[src]
    state.signs[dst] ^= state.signs[src] ^ (1 if e == 2 else 0)


def canonicalize(state: StabilizerState) -> StabilizerState:
    """Deterministic row-reduced echelon form over the (x|z) matrix.

    Pivots scan x columns left to right, then z columns.  The generated
    group (including signs) is unchanged; the output is unique for a
    given group, so canonicalize is idempotent.  Raises StabilizerError
    on dependent or anticommuting inputs.
    """
    out = state.copy()
    gens = out.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if symplectic_product(gens[i], gens[j]):
                raise StabilizerError(f"generators {i} and {j} anticommute")
    L = out.sites
    r = 0
    k = out.k
    for col in range(2 * L):
        vec = out.X[:, col] if col < L else out.Z[:, col - L]
        pivot = -1
        for i in range(r, k):
            if vec[i]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            out.X[[r, pivot]] = out.X[[pivot, r]]
            out.Z[[r, pivot]] = out.Z[[pivot, r]]
            out.signs[[r, pivot]] = out.signs[[pivot, r]]
        for i in range(k):
            if i != r and vec[i]:
                row_multiply(out, i, r)
        r += 1
        if r == k:
            break
    for i in range(k):
        if not (out.X[i].any() or out.Z[i].any()):
            raise StabilizerError(
                "dependent generators" + (" (sign contradiction: -I in group)" if out.signs[i] else "")
            )
    return out
