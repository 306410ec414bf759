"""Dense verification of the list-decoding recovery conditions.

Checks the two operator identities that characterize list decodability on
stabilizer codes, plus a concrete recovery-isometry construction:

  * errors with different syndromes satisfy Pi E^dag F Pi = 0 exactly;
  * errors sharing a syndrome give M = Pi E^dag F Pi with M^dag M = Pi
    (a partial isometry on the code space);
  * when the branch data is Gram-consistent, the assembled isometry V(s)
    realizes the uniform-mixture recovery channel.

Everything here is an oracle for the tableau-based fast paths: dense,
desk-scale, and deliberately independent of the symplectic shortcuts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ConsistencyError, DimensionError
from .listdec import ErrorSet, ListTable, NoErrorClassError
from .pauli import PauliOperator
from .simengine import StateVector
from .stabilizer import StabilizerCode, Syndrome

DENSE_KL_LIMIT = 10
CROSS_TOL = 1e-10
SAME_TOL = 1e-12
ISOMETRY_TOL = 1e-9


@dataclass
class CrossSyndromeResult:
    pairs_checked: int
    max_norm: float
    worst_pair: tuple[str, str] | None
    tol: float = CROSS_TOL

    @property
    def passed(self) -> bool:
        return self.max_norm <= self.tol


@dataclass
class SameSyndromeResult:
    results: list[tuple[tuple[str, str], float]]
    tol: float = SAME_TOL

    @property
    def max_defect(self) -> float:
        return max((d for _, d in self.results), default=0.0)

    @property
    def worst_pair(self) -> tuple[str, str] | None:
        if not self.results:
            return None
        return max(self.results, key=lambda item: item[1])[0]

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.tol


@dataclass
class KLReport:
    code_label: str
    error_descriptor: str
    cross: CrossSyndromeResult
    same: SameSyndromeResult

    @property
    def passed(self) -> bool:
        return self.cross.passed and self.same.passed

    def to_json(self) -> str:
        return json.dumps({
            "code": self.code_label,
            "errors": self.error_descriptor,
            "cross_syndrome": {
                "pairs_checked": self.cross.pairs_checked,
                "max_norm": self.cross.max_norm,
                "worst_pair": self.cross.worst_pair,
                "tol": self.cross.tol,
                "passed": self.cross.passed,
            },
            "same_syndrome": {
                "pairs_checked": len(self.same.results),
                "max_defect": self.same.max_defect,
                "worst_pair": self.same.worst_pair,
                "tol": self.same.tol,
                "passed": self.same.passed,
            },
            "passed": self.passed,
        }, indent=2, sort_keys=True)


def _members(errors) -> tuple[PauliOperator, ...]:
    return tuple(errors.members if isinstance(errors, ErrorSet) else errors)


def _check_capacity(code: StabilizerCode):
    if code.n_physical > DENSE_KL_LIMIT:
        raise CapacityError(f"dense KL checks capped at {DENSE_KL_LIMIT} qubits")


def _sandwich(projector: np.ndarray, op: PauliOperator) -> np.ndarray:
    """Pi P Pi without building the dense Pauli matrix."""
    return projector @ op.apply(projector)


def check_cross_syndrome(code: StabilizerCode, errors, tol: float = CROSS_TOL,
                         projector: np.ndarray | None = None) -> CrossSyndromeResult:
    """Spectral norm of Pi E^dag F Pi over all pairs with different syndromes.

    `projector` overrides the code projector; substituting the identity is
    the standard negative control (the products no longer vanish).
    """
    _check_capacity(code)
    members = _members(errors)
    pi = code.projector if projector is None else projector
    by_syndrome: dict[Syndrome, list[PauliOperator]] = {}
    for e in members:
        by_syndrome.setdefault(code.syndrome(e), []).append(e)
    syndromes = sorted(by_syndrome, key=str)
    checked = 0
    max_norm = -1.0
    worst = None
    for i, s1 in enumerate(syndromes):
        for s2 in syndromes[i + 1:]:
            for e in by_syndrome[s1]:
                for f in by_syndrome[s2]:
                    m = pi @ e.adjoint().mul(f).apply(pi)
                    norm = float(np.linalg.norm(m, 2))
                    checked += 1
                    if norm > max_norm:
                        max_norm, worst = norm, (e.to_string(), f.to_string())
    return CrossSyndromeResult(checked, max(max_norm, 0.0), worst, tol)


def check_same_syndrome(code: StabilizerCode, errors, tol: float = SAME_TOL,
                        projector: np.ndarray | None = None) -> SameSyndromeResult:
    """Partial-isometry defect ||M^dag M - Pi|| for same-syndrome pairs.

    E^dag F for a same-syndrome pair is a phase times a normalizer element,
    so M = Pi E^dag F Pi restricted to the code space must be norm
    preserving; the defect measures the failure of M^dag M = Pi.
    """
    _check_capacity(code)
    members = _members(errors)
    pi = code.projector if projector is None else projector
    by_syndrome: dict[Syndrome, list[PauliOperator]] = {}
    for e in members:
        by_syndrome.setdefault(code.syndrome(e), []).append(e)
    results = []
    for s in sorted(by_syndrome, key=str):
        bucket = by_syndrome[s]
        for i, e in enumerate(bucket):
            for f in bucket[i:]:
                m = _sandwich(pi, e.adjoint().mul(f))
                defect = float(np.linalg.norm(m.conj().T @ m - pi, 2))
                results.append(((e.to_string(), f.to_string()), defect))
    return SameSyndromeResult(results, tol)


def knill_laflamme_report(code: StabilizerCode, errors,
                          cross_tol: float = CROSS_TOL,
                          same_tol: float = SAME_TOL) -> KLReport:
    members = _members(errors)
    descriptor = (f"bounded_weight(n={errors.n}, w={errors.max_weight})"
                  if isinstance(errors, ErrorSet) else f"custom({len(members)} errors)")
    return KLReport(
        code_label=code.label(),
        error_descriptor=descriptor,
        cross=check_cross_syndrome(code, members, cross_tol),
        same=check_same_syndrome(code, members, same_tol),
    )


def _code_basis(code: StabilizerCode) -> np.ndarray:
    """Columns = orthonormal code-space basis vectors (encoded logical basis)."""
    dim = 1 << code.n_physical
    k = code.n_logical
    basis = np.zeros((dim, 1 << k), dtype=complex)
    for a in range(1 << k):
        basis[:, a] = code.encode_state(StateVector.basis(k, a)).amplitudes
    return basis


def build_recovery_isometry(code: StabilizerCode, table: ListTable, s: Syndrome,
                            branch_unitaries=None, tol: float = ISOMETRY_TOL) -> np.ndarray:
    """Assemble V(s) column-by-column on the syndrome-s subspace.

    With branch unitaries U(E) (default: identity for every list member),
    the branch combinations are Y_k(E) = sum_i U(E)[k, i] E_i and the map

        V(s) E Pi |psi>  =  sqrt(c(s)) sum_k Y_k(E) Pi |psi>  (x)  |k>

    is built from the first list element's columns.  Before returning, the
    construction is checked for well-definedness against every other list
    element (the Gram condition) and for isometry on the subspace; failures
    raise ConsistencyError carrying the worst-violating pair.

    The returned matrix has shape (2^n * l, 2^n) and is zero outside the
    syndrome-s subspace, so V^dag V equals the subspace projector.
    """
    reps = table.list_for(s)
    if not reps:
        raise NoErrorClassError(f"syndrome {s} has no error class")
    _check_capacity(code)
    ell = len(reps)
    if branch_unitaries is None:
        branch_unitaries = [np.eye(ell)] * ell
    branch_unitaries = [np.asarray(u, dtype=complex) for u in branch_unitaries]
    if len(branch_unitaries) != ell or any(u.shape != (ell, ell) for u in branch_unitaries):
        raise DimensionError(f"need {ell} branch unitaries of shape ({ell}, {ell})")

    dim = 1 << code.n_physical
    basis = _code_basis(code)
    n_code = basis.shape[1]
    c = 1.0 / ell
    rep_on_basis = np.stack([e.apply(basis) for e in reps])  # (ell, dim, n_code)

    def branch_image(j: int) -> np.ndarray:
        # columns sqrt(c) sum_k Y_k(E_j) psi_a (x) |k> for the code basis
        out = np.zeros((dim * ell, n_code), dtype=complex)
        for k in range(ell):
            y = np.tensordot(branch_unitaries[j][k, :], rep_on_basis, axes=(0, 0))
            out += np.sqrt(c) * np.kron(y, _aux_ket(ell, k)[:, None])
        return out

    in_cols = rep_on_basis[0]  # E_1 Pi basis: orthonormal subspace basis
    out_cols = branch_image(0)
    v = out_cols @ in_cols.conj().T

    worst_defect = 0.0
    worst_pair = None
    for j in range(ell):
        direct = branch_image(j)
        linear = v @ rep_on_basis[j]
        defect = float(np.max(np.abs(direct - linear)))
        if defect > worst_defect:
            worst_defect, worst_pair = defect, (reps[0].to_string(), reps[j].to_string())
    if worst_defect > tol:
        raise ConsistencyError(
            f"recovery isometry is not well-defined at syndrome {s}: "
            f"Gram condition fails with defect {worst_defect:.3e}",
            worst_pair=worst_pair, defect=worst_defect)

    subspace_proj = in_cols @ in_cols.conj().T
    iso_defect = float(np.linalg.norm(v.conj().T @ v - subspace_proj, 2))
    if iso_defect > tol:
        raise ConsistencyError(
            f"V(s) is not an isometry on the syndrome subspace (defect {iso_defect:.3e})",
            worst_pair=None, defect=iso_defect)
    return v


def _aux_ket(ell: int, k: int) -> np.ndarray:
    e = np.zeros(ell, dtype=complex)
    e[k] = 1.0
    return e


def verify_recovery_channel(code: StabilizerCode, table: ListTable, s: Syndrome,
                            v: np.ndarray, n_states: int = 20, seed: int = 7) -> float:
    """Max entrywise deviation of Tr_aux(V . V^dag) from the uniform list mixture.

    Applies the channel to E |psi><psi| E^dag for every list member E and a
    set of random code states |psi>, and compares densely against
    c(s) sum_i E_i |psi><psi| E_i^dag.
    """
    reps = table.list_for(s)
    if not reps:
        raise NoErrorClassError(f"syndrome {s} has no error class")
    dim = 1 << code.n_physical
    ell = len(reps)
    if v.shape != (dim * ell, dim):
        raise DimensionError(f"isometry shape {v.shape} does not match (dim*l, dim)")
    rng = np.random.default_rng(seed)
    c = 1.0 / ell
    worst = 0.0
    for _ in range(n_states):
        raw = rng.standard_normal(1 << code.n_logical) + 1j * rng.standard_normal(1 << code.n_logical)
        psi = code.encode_state(StateVector.from_amplitudes(raw)).amplitudes
        expected = np.zeros((dim, dim), dtype=complex)
        for e in reps:
            w = e.apply(psi)
            expected += c * np.outer(w, w.conj())
        for e in reps:
            out = (v @ e.apply(psi)).reshape(dim, ell)
            rho_out = out @ out.conj().T  # trace over the auxiliary index
            worst = max(worst, float(np.max(np.abs(rho_out - expected))))
    return worst
