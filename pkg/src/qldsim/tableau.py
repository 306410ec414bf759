"""Clifford tableaux: conjugation action on Paulis, inversion, dense export.

A tableau stores the images U X_q U^dag and U Z_q U^dag for q = 0..n-1 as
phased Paulis.  All images must be Hermitian (their squares are +I), which
makes exponent arithmetic on them work modulo 2.  The dense unitary is
reconstructed column-by-column from the stabilizer state U|0...0> and is
exact: conjugating any Pauli by it reproduces the tableau image including
the phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import CapacityError, CodeValidationError, DimensionError
from .pauli import PauliOperator, qubit_bit

DENSE_TABLEAU_LIMIT = 12


def pauli_to_vec(p: PauliOperator) -> np.ndarray:
    """Symplectic vector [x_0..x_{n-1}, z_0..z_{n-1}] indexed by qubit."""
    v = np.zeros(2 * p.n, dtype=np.uint8)
    for q in range(p.n):
        bit = qubit_bit(p.n, q)
        if p.x & bit:
            v[q] = 1
        if p.z & bit:
            v[p.n + q] = 1
    return v


def vec_to_pauli(v: np.ndarray, phase: int | None = None) -> PauliOperator:
    """Inverse of pauli_to_vec; default phase is the Hermitian '+' canonical one."""
    v = gf2.as_gf2(v)
    n = v.shape[0] // 2
    x = z = 0
    for q in range(n):
        bit = qubit_bit(n, q)
        if v[q]:
            x |= bit
        if v[n + q]:
            z |= bit
    if phase is None:
        phase = hermitian_phase(n, x, z)
    return PauliOperator(n, x, z, phase)


def hermitian_phase(n: int, x: int, z: int) -> int:
    """Canonical phase making i^phase X^x Z^z the '+' Hermitian representative."""
    return bin(x & z).count("1") % 4


def symplectic_rows(paulis) -> np.ndarray:
    return np.array([pauli_to_vec(p) for p in paulis], dtype=np.uint8)


def sp(u: np.ndarray, v: np.ndarray) -> int:
    """Symplectic form: 1 iff the corresponding Paulis anticommute."""
    n = u.shape[0] // 2
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)


def omega_row(v: np.ndarray) -> np.ndarray:
    """Row w such that w . u == sp(v, u) for all u."""
    n = v.shape[0] // 2
    return np.concatenate([v[n:], v[:n]])


@dataclass(frozen=True)
class CliffordTableau:
    """Images of the single-qubit X and Z operators under conjugation."""

    n: int
    x_images: tuple[PauliOperator, ...]
    z_images: tuple[PauliOperator, ...]

    def __post_init__(self):
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise CodeValidationError("tableau needs exactly n X-images and n Z-images")
        for img in (*self.x_images, *self.z_images):
            if img.n != self.n:
                raise DimensionError("tableau image acts on wrong qubit count")
            if not img.is_hermitian():
                raise CodeValidationError(f"tableau image {img} is not Hermitian")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        xs = tuple(PauliOperator.single(n, q, "X") for q in range(n))
        zs = tuple(PauliOperator.single(n, q, "Z") for q in range(n))
        return cls(n, xs, zs)

    # -- validity ------------------------------------------------------------

    def symplectic_matrix(self) -> np.ndarray:
        """2n x 2n matrix with image vectors as columns (X images first)."""
        cols = [pauli_to_vec(p) for p in (*self.x_images, *self.z_images)]
        return np.array(cols, dtype=np.uint8).T

    def is_valid(self) -> bool:
        """Commutation relations preserved: sp(img_i, img_j) matches the basis pattern."""
        vecs = [pauli_to_vec(p) for p in (*self.x_images, *self.z_images)]
        n = self.n
        for i in range(2 * n):
            for j in range(i, 2 * n):
                want = 1 if abs(i - j) == n else 0
                if sp(vecs[i], vecs[j]) != want:
                    return False
        return True

    def validate(self) -> "CliffordTableau":
        if not self.is_valid():
            raise CodeValidationError("tableau does not preserve commutation relations")
        return self

    # -- action ----------------------------------------------------------------

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        """U P U^dag with exact phase tracking."""
        if p.n != self.n:
            raise DimensionError(f"operand on {p.n} qubits, tableau on {self.n}")
        out = PauliOperator(self.n, 0, 0, p.phase)
        for q in range(self.n):
            if p.x & qubit_bit(self.n, q):
                out = out.mul(self.x_images[q])
        for q in range(self.n):
            if p.z & qubit_bit(self.n, q):
                out = out.mul(self.z_images[q])
        return out

    def inverse(self) -> "CliffordTableau":
        """Tableau of U^dag (so inverse().conjugate(P) == U^dag P U)."""
        m = self.symplectic_matrix()
        minv = gf2.inv(m)
        x_images = []
        z_images = []
        for j in range(2 * self.n):
            candidate = vec_to_pauli(minv[:, j])
            forward = self.conjugate(candidate)
            target = self._basis_pauli(j)
            if forward.key() != target.key():
                raise CodeValidationError("tableau inversion produced inconsistent images")
            k = (forward.phase - target.phase) % 4
            fixed = candidate.with_phase((candidate.phase - k) % 4)
            (x_images if j < self.n else z_images).append(fixed)
        return CliffordTableau(self.n, tuple(x_images), tuple(z_images))

    def _basis_pauli(self, j: int) -> PauliOperator:
        if j < self.n:
            return PauliOperator.single(self.n, j, "X")
        return PauliOperator.single(self.n, j - self.n, "Z")

    # -- dense export ------------------------------------------------------------

    def to_unitary(self) -> np.ndarray:
        """One dense unitary realizing this tableau (global phase fixed arbitrarily)."""
        if self.n > DENSE_TABLEAU_LIMIT:
            raise CapacityError(f"dense tableau export capped at {DENSE_TABLEAU_LIMIT} qubits")
        dim = 1 << self.n
        psi0 = self._stabilized_state()
        cols = np.zeros((dim, dim), dtype=complex)
        cols[:, 0] = psi0
        for b in range(1, dim):
            low = b & -b  # lowest set mask bit = highest qubit index present in b
            q = self.n - low.bit_length()
            cols[:, b] = self.x_images[q].apply(cols[:, b ^ low])
        return cols

    def _stabilized_state(self) -> np.ndarray:
        """Unit vector fixed by every Z-image (the image of |0...0>)."""
        dim = 1 << self.n
        for seed in range(dim):
            v = np.zeros(dim, dtype=complex)
            v[seed] = 1.0
            for s in self.z_images:
                v = 0.5 * (v + s.apply(v))
            norm = np.linalg.norm(v)
            if norm > 1e-9:
                v = v / norm
                anchor = np.argmax(np.abs(v) > 1e-9)
                v = v * (abs(v[anchor]) / v[anchor])
                return v
        raise CodeValidationError("Z-images have no common +1 eigenvector")
