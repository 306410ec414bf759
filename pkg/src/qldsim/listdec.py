"""Syndrome -> error-list tables for bounded-weight Pauli error sets.

A list table partitions an error set by syndrome and reduces each class
modulo the stabilizer group, keeping the first member in enumeration order
(equivalently the lexicographically least one) as the coset representative.
The maximum list length over syndromes is the L in "L-list-decodable".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gf2
from .errors import ContractViolationError, DimensionError, QldError
from .pauli import PauliOperator, enumerate_paulis, split_at
from .simengine import Ensemble, StateVector
from .stabilizer import StabilizerCode, Syndrome
from .tableau import pauli_to_vec

EIGENSTATE_TOL = 1e-9


class NoErrorClassError(QldError):
    """Requested syndrome has no representatives in the table."""


@dataclass(frozen=True)
class ErrorSet:
    """All phase-0 Paulis of weight at most max_weight, in enumeration order."""

    n: int
    max_weight: int
    members: tuple[PauliOperator, ...]

    @classmethod
    def bounded_weight(cls, n: int, max_weight: int) -> "ErrorSet":
        return cls(n, max_weight, tuple(enumerate_paulis(n, max_weight)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(eq=False)
class ListTable:
    """Syndrome -> ordered coset representatives for one code and error set."""

    code: StabilizerCode
    max_weight: int
    entries: dict[Syndrome, tuple[PauliOperator, ...]]
    L_max: int

    def list_for(self, s: Syndrome) -> tuple[PauliOperator, ...]:
        return self.entries.get(s, ())

    def nonempty_syndromes(self) -> list[Syndrome]:
        return [s for s in self.entries if self.entries[s]]

    def is_L_qld(self, L: int) -> bool:
        return self.L_max <= L

    @cached_property
    def inverse_tableau(self):
        return self.code.encoding_tableau.inverse()

    def to_json(self) -> str:
        entries = []
        for s in sorted(self.entries, key=str):
            entries.append({"syndrome": str(s),
                            "reps": [p.letters() for p in self.entries[s]]})
        doc = {"code": self.code.name or self.code.label(),
               "max_weight": self.max_weight,
               "L_max": self.L_max,
               "entries": entries}
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, code: StabilizerCode, text: str) -> "ListTable":
        doc = json.loads(text)
        entries = {}
        for row in doc["entries"]:
            s = Syndrome.from_string(row["syndrome"])
            entries[s] = tuple(PauliOperator.from_string(r) for r in row["reps"])
        return cls(code, doc["max_weight"], entries, doc["L_max"])


def _coset_key(reduced: np.ndarray) -> bytes:
    return np.packbits(reduced).tobytes()


def build_list_table(code: StabilizerCode, errors) -> ListTable:
    """Partition an error set by syndrome and reduce modulo the stabilizer.

    `errors` may be an ErrorSet or any ordered sequence of Paulis; the first
    member of each stabilizer coset (in the given order) becomes its
    representative.  Entries for unreached syndromes are retained empty.
    """
    members = tuple(errors.members if isinstance(errors, ErrorSet) else errors)
    max_weight = errors.max_weight if isinstance(errors, ErrorSet) else \
        max((p.weight() for p in members), default=0)
    if members and members[0].n != code.n_physical:
        raise DimensionError("error set qubit count does not match the code")

    gen_rref, pivots = gf2.rref(np.array([pauli_to_vec(g) for g in code.generators],
                                         dtype=np.uint8))
    gen_rref = gen_rref[: len(pivots)]

    r = len(code.generators)
    entries: dict[Syndrome, list[PauliOperator]] = {
        Syndrome(tuple(int(b) for b in np.binary_repr(i, width=r))): []
        for i in range(1 << r)
    } if r <= 12 else {}
    seen: set[tuple[str, bytes]] = set()
    for e in members:
        s = code.syndrome(e)
        v = pauli_to_vec(e)
        for row, col in zip(gen_rref, pivots):
            if v[col]:
                v = (v + row) % 2
        key = (str(s), _coset_key(v))
        if key in seen:
            continue
        seen.add(key)
        entries.setdefault(s, []).append(e)

    table = {s: tuple(reps) for s, reps in entries.items()}
    l_max = max((len(reps) for reps in table.values()), default=0)
    return ListTable(code, max_weight, table, l_max)


def is_L_qld(table: ListTable, L: int) -> bool:
    return table.is_L_qld(L)


def measure_syndrome(code: StabilizerCode, state: StateVector,
                     tol: float = EIGENSTATE_TOL) -> Syndrome:
    """Syndrome of a state that must already be a joint generator eigenstate."""
    if state.dim != 1 << code.n_physical:
        raise DimensionError("state dimension does not match the code")
    bits = []
    for i, g in enumerate(code.generators):
        # projection probability onto the +1 eigenspace of g
        p_plus = 0.5 * (1.0 + np.vdot(state.amplitudes, g.apply(state.amplitudes)).real)
        if p_plus > 1.0 - tol:
            bits.append(0)
        elif p_plus < tol:
            bits.append(1)
        else:
            raise ContractViolationError(
                f"state is not an eigenstate of generator {i} (p={p_plus:.6f})")
    return Syndrome(tuple(bits))


def list_decode(code: StabilizerCode, table: ListTable, state: StateVector,
                tol: float = EIGENSTATE_TOL):
    """Algorithm step 1: measure the syndrome, return (syndrome, list, state).

    The input is assumed to be a corrupted code state E|psi>, so the
    measurement is deterministic and leaves the state unchanged.
    """
    s = measure_syndrome(code, state, tol)
    return s, table.list_for(s), state


def mixture_channel(code: StabilizerCode, table: ListTable, logical: StateVector,
                    s: Syndrome) -> Ensemble:
    """Decoder output when the true error within the list is unknown: the
    uniform mixture over representatives applied to the encoded state."""
    reps = table.list_for(s)
    if not reps:
        raise NoErrorClassError(f"syndrome {s} has no error class in the table")
    encoded = code.encode_state(logical)
    states = [StateVector(e.apply(encoded.amplitudes)) for e in reps]
    return Ensemble.uniform(states)


def logical_list_errors(code: StabilizerCode, table: ListTable, s: Syndrome
                        ) -> list[tuple[PauliOperator, PauliOperator]]:
    """Representatives conjugated into the logical frame and split as P (x) A.

    Conjugating a physical Pauli through the inverse encoding tableau always
    yields a product operator across the logical/ancilla cut; phases are
    folded into the logical factor.  The ancilla factor's X pattern equals
    the syndrome bits (its job is to flag the coset).
    """
    reps = table.list_for(s)
    if not reps:
        raise NoErrorClassError(f"syndrome {s} has no error class in the table")
    out = []
    inv = table.inverse_tableau
    for e in reps:
        conj = inv.conjugate(e)
        logical, ancilla = split_at(conj, code.n_logical)
        out.append((logical, ancilla))
    return out
