"""Dense complex linear-algebra core: states, ensembles, measurement, metrics.

States are complex128 vectors over computational-basis indices in which
qubit 0 is the leftmost tensor factor (most significant bit).  Mixtures are
kept as weighted pure-state ensembles for as long as possible; density
matrices are materialized only inside fidelity / trace-distance / partial
trace, which is where they are actually needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, QldError
from .pauli import PauliOperator

NORM_TOL = 1e-12
DEAD_BRANCH_PROB = 1e-14

#: set True to verify unitarity on every apply_unitary call
debug_checks = False


@dataclass(frozen=True)
class StateVector:
    """Pure state; normalized unless the flag says otherwise."""

    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.shape[0] & (amps.shape[0] - 1):
            raise DimensionError("state dimension must be a power of two")
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized and abs(np.linalg.norm(amps) - 1.0) > 1e-9:
            raise QldError(f"state norm {np.linalg.norm(amps)} is not 1")

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "StateVector":
        v = np.zeros(1 << n_qubits, dtype=complex)
        v[index] = 1.0
        return cls(v)

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        v = np.asarray(amps, dtype=complex)
        return cls(v / np.linalg.norm(v))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        self._check_dim(other.dim)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def overlap(self, other: "StateVector") -> float:
        """|<self|other>|^2."""
        return abs(self.inner(other)) ** 2

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def _check_dim(self, dim: int):
        if self.dim != dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {dim}")

    def to_json(self) -> str:
        pairs = [[float(a.real), float(a.imag)] for a in self.amplitudes]
        return json.dumps({"dim": self.dim, "amplitudes": pairs})

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        doc = json.loads(text)
        amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
        if len(amps) != doc["dim"]:
            raise QldError("state dump dim header disagrees with amplitude count")
        return cls(amps)


@dataclass(frozen=True)
class Ensemble:
    """Weighted set of pure states; weights sum to one."""

    entries: tuple[tuple[float, StateVector], ...]

    def __post_init__(self):
        if not self.entries:
            raise QldError("ensemble needs at least one entry")
        total = sum(w for w, _ in self.entries)
        if abs(total - 1.0) > 1e-9:
            raise QldError(f"ensemble weights sum to {total}, not 1")
        if any(w < -NORM_TOL for w, _ in self.entries):
            raise QldError("negative ensemble weight")
        dims = {s.dim for _, s in self.entries}
        if len(dims) != 1:
            raise DimensionError("mixed dimensions inside ensemble")

    @classmethod
    def pure(cls, state: StateVector) -> "Ensemble":
        return cls(((1.0, state),))

    @classmethod
    def uniform(cls, states) -> "Ensemble":
        states = list(states)
        w = 1.0 / len(states)
        return cls(tuple((w, s) for s in states))

    @property
    def dim(self) -> int:
        return self.entries[0][1].dim

    def is_pure(self) -> bool:
        return len(self.entries) == 1

    def density_matrix(self) -> np.ndarray:
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        for w, s in self.entries:
            rho += w * s.density_matrix()
        return rho

    def purity(self) -> float:
        rho = self.density_matrix()
        return float(np.real(np.trace(rho @ rho)))


@dataclass(frozen=True)
class ProjectionOutcome:
    """One branch of a two-outcome measurement."""

    probability: float
    post_state: StateVector | None
    valid: bool = True


def _as_ensemble(state) -> Ensemble:
    if isinstance(state, StateVector):
        return Ensemble.pure(state)
    if isinstance(state, Ensemble):
        return state
    raise TypeError(f"expected StateVector or Ensemble, got {type(state)}")


def apply_unitary(u: np.ndarray, psi: StateVector, check: bool = False) -> StateVector:
    """U |psi>; optionally verifies ||U^dag U - I|| <= 1e-9 first."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (psi.dim, psi.dim):
        raise DimensionError(f"unitary shape {u.shape} does not match dim {psi.dim}")
    if check or debug_checks:
        defect = np.linalg.norm(u.conj().T @ u - np.eye(psi.dim))
        if defect > 1e-9:
            raise QldError(f"matrix is not unitary (defect {defect:.2e})")
    return StateVector(u @ psi.amplitudes, normalized=psi.normalized)


def apply_pauli(p: PauliOperator, psi: StateVector) -> StateVector:
    """Pauli fast path: bit permutation plus phase flips."""
    return StateVector(p.apply(psi.amplitudes), normalized=psi.normalized)


def tag_mask(n_qubits: int, tag_qubits) -> int:
    mask = 0
    for q in tag_qubits:
        if not 0 <= q < n_qubits:
            raise DimensionError(f"tag qubit {q} out of range")
        mask |= 1 << (n_qubits - 1 - q)
    return mask


def project(psi: StateVector, tag_qubits) -> tuple[ProjectionOutcome, ProjectionOutcome]:
    """Two-outcome measurement {Pi, I - Pi} with Pi = |0..0><0..0| on the tag qubits.

    Branches with probability below 1e-14 come back flagged invalid with no
    post-state; callers must not use them.
    """
    mask = tag_mask(psi.n_qubits, tag_qubits)
    idx = np.arange(psi.dim)
    keep = (idx & mask) == 0
    inside = psi.amplitudes * keep
    outside = psi.amplitudes * ~keep
    p_zero = float(np.vdot(inside, inside).real)
    p_rest = float(np.vdot(outside, outside).real)

    def outcome(prob, amps):
        if prob < DEAD_BRANCH_PROB:
            return ProjectionOutcome(max(prob, 0.0), None, valid=False)
        return ProjectionOutcome(prob, StateVector(amps / np.sqrt(prob)))

    return outcome(p_zero, inside), outcome(p_rest, outside)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(np.kron(a.amplitudes, b.amplitudes), normalized=a.normalized and b.normalized)


def partial_trace(state, keep) -> np.ndarray:
    """Reduced density matrix on the kept qubits (sorted by qubit index)."""
    ens = _as_ensemble(state)
    n = ens.entries[0][1].n_qubits
    keep = sorted(set(keep))
    if any(not 0 <= q < n for q in keep):
        raise DimensionError("keep indices out of range")
    rho = ens.density_matrix().reshape((2,) * (2 * n))
    m = n
    for q in [q for q in range(n) if q not in keep][::-1]:
        rho = np.trace(rho, axis1=q, axis2=q + m)
        m -= 1
    dim = 1 << len(keep)
    return rho.reshape(dim, dim)


def _sqrtm_psd(rho: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(rho)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(a, b) -> float:
    """Uhlmann fidelity; when one side is pure this reduces to Tr(rho sigma)."""
    ea, eb = _as_ensemble(a), _as_ensemble(b)
    if ea.dim != eb.dim:
        raise DimensionError(f"dimension mismatch: {ea.dim} vs {eb.dim}")
    if eb.is_pure() or ea.is_pure():
        pure, other = (eb, ea) if eb.is_pure() else (ea, eb)
        v = pure.entries[0][1]
        value = sum(w * v.overlap(s) for w, s in other.entries)
        return float(min(max(value, 0.0), 1.0))
    sq = _sqrtm_psd(ea.density_matrix())
    inner = sq @ eb.density_matrix() @ sq
    vals = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(min(np.sum(np.sqrt(vals)) ** 2, 1.0))


def trace_distance(a, b) -> float:
    """Half the trace norm of the density-matrix difference."""
    ea, eb = _as_ensemble(a), _as_ensemble(b)
    if ea.dim != eb.dim:
        raise DimensionError(f"dimension mismatch: {ea.dim} vs {eb.dim}")
    vals = np.linalg.eigvalsh(ea.density_matrix() - eb.density_matrix())
    return float(0.5 * np.sum(np.abs(vals)))
