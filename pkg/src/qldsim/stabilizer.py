"""Stabilizer codes: validation, syndromes, coset tests, encoding tableaux.

The encoding tableau realizes the isometry that maps |logical> (x) |0...0>
onto the code space: conjugation sends X_j / Z_j on the first n_logical
qubits to the chosen logical operators and Z on ancilla slot i to
generators[i].  Destabilizers (the ancilla X images) are synthesized by
deterministic GF(2) elimination, so the same inputs always give the same
tableau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gf2
from .errors import CapacityError, CodeValidationError, DimensionError, RankError
from .pauli import PauliOperator, embed
from .simengine import StateVector
from .tableau import CliffordTableau, omega_row, pauli_to_vec, sp, symplectic_rows, vec_to_pauli

DENSE_CODE_LIMIT = 12


@dataclass(frozen=True)
class Syndrome:
    """Commutation pattern of an error against the generator list (bit i = generator i)."""

    bits: tuple[int, ...]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from_string(cls, text: str) -> "Syndrome":
        return cls(tuple(int(c) for c in text.strip()))

    @classmethod
    def trivial(cls, r: int) -> "Syndrome":
        return cls((0,) * r)

    def is_trivial(self) -> bool:
        return not any(self.bits)

    def __len__(self) -> int:
        return len(self.bits)


def _symplectic_logical_pairs(gen_vecs: list[np.ndarray], n: int):
    """Complete commuting generators to a symplectic basis; return logical (x, z) vector pairs.

    Symplectic Gram-Schmidt: repeatedly take the first remaining vector,
    find a partner it anticommutes with, and strip both from everything
    left.  Seeding the worklist with the generators first guarantees each
    one is consumed into a generator/destabilizer pair, so the leftovers
    commute with the whole stabilizer group.
    """
    basis = [np.eye(2 * n, dtype=np.uint8)[i] for i in range(2 * n)]
    work = [v.copy() for v in gen_vecs] + basis
    pairs = []
    while True:
        work = [v for v in work if v.any()]
        if not work:
            break
        v = work.pop(0)
        partner = next((i for i, w in enumerate(work) if sp(v, w) == 1), None)
        if partner is None:
            raise CodeValidationError("symplectic completion failed (degenerate input)")
        w = work.pop(partner)
        work = [(u + sp(u, w) * v + sp(u, v) * w) % 2 for u in work]
        pairs.append((v, w))
    logical = pairs[len(gen_vecs):]
    return [(w, v) for v, w in logical]  # (x-like, z-like)


def _destabilizer_vecs(gen_vecs, lx_vecs, lz_vecs) -> list[np.ndarray]:
    """Vectors D_i with sp(D_i, g_j) = delta_ij, commuting with all logicals and each other."""
    rows = [omega_row(v) for v in (*gen_vecs, *lx_vecs, *lz_vecs)]
    a = np.array(rows, dtype=np.uint8)
    out: list[np.ndarray] = []
    for i in range(len(gen_vecs)):
        b = np.zeros(len(rows), dtype=np.uint8)
        b[i] = 1
        d = gf2.solve(a, b)
        if d is None:
            raise CodeValidationError("no destabilizer exists; generator/logical set inconsistent")
        out.append(d)
    for i in range(len(out)):
        for j in range(i):
            if sp(out[i], out[j]):
                out[i] = (out[i] + gen_vecs[j]) % 2
    return out


@dataclass(eq=False)
class StabilizerCode:
    """Validated [[n_physical, n_logical]] stabilizer code. Immutable after construction."""

    n_physical: int
    n_logical: int
    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]
    encoding_tableau: CliffordTableau
    name: str | None = None
    distance: int | None = None

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, generators, logical_x, logical_z, name=None, distance=None) -> "StabilizerCode":
        generators = tuple(generators)
        logical_x = tuple(logical_x)
        logical_z = tuple(logical_z)
        if not generators:
            raise CodeValidationError("need at least one generator")
        n = generators[0].n
        cls._validate_generators(generators, n)
        k = n - len(generators)
        if len(logical_x) != k or len(logical_z) != k:
            raise CodeValidationError(f"expected {k} logical X and Z operators, got "
                                      f"{len(logical_x)}/{len(logical_z)}")
        cls._validate_logicals(generators, logical_x, logical_z)
        tableau = cls._synthesize_tableau(generators, logical_x, logical_z, n)
        return cls(n, k, generators, logical_x, logical_z, tableau,
                   name=name, distance=distance)

    @classmethod
    def from_generators(cls, generators, name=None, distance=None) -> "StabilizerCode":
        """Build a code choosing logical operators by symplectic completion."""
        generators = tuple(generators)
        if not generators:
            raise CodeValidationError("need at least one generator")
        n = generators[0].n
        cls._validate_generators(generators, n)
        gen_vecs = [pauli_to_vec(g) for g in generators]
        pairs = _symplectic_logical_pairs(gen_vecs, n)
        logical_x = tuple(vec_to_pauli(x) for x, _ in pairs)
        logical_z = tuple(vec_to_pauli(z) for _, z in pairs)
        return cls.build(generators, logical_x, logical_z, name=name, distance=distance)

    @staticmethod
    def _validate_generators(generators, n):
        for i, g in enumerate(generators):
            if g.n != n:
                raise DimensionError(f"generator {i} acts on {g.n} qubits, expected {n}")
            if g.key() == (0, 0):
                raise CodeValidationError(f"generator {i} is the identity")
            if not g.is_hermitian():
                raise CodeValidationError(f"generator {i} ({g}) is not Hermitian")
        for i in range(len(generators)):
            for j in range(i + 1, len(generators)):
                if not generators[i].commutes(generators[j]):
                    raise CodeValidationError(
                        f"generators {i} and {j} anticommute: {generators[i]} vs {generators[j]}")
        if gf2.rank(symplectic_rows(generators)) != len(generators):
            raise RankError("generator set is linearly dependent")
        if len(generators) > n:
            raise RankError(f"{len(generators)} generators cannot be independent on {n} qubits")

    @staticmethod
    def _validate_logicals(generators, logical_x, logical_z):
        k = len(logical_x)
        for kind, ops in (("X", logical_x), ("Z", logical_z)):
            for i, op in enumerate(ops):
                if op.n != generators[0].n:
                    raise DimensionError(f"logical {kind}[{i}] has wrong qubit count")
                if not op.is_hermitian():
                    raise CodeValidationError(f"logical {kind}[{i}] is not Hermitian")
                for j, g in enumerate(generators):
                    if not op.commutes(g):
                        raise CodeValidationError(
                            f"logical {kind}[{i}] anticommutes with generator {j}")
        for i in range(k):
            for j in range(k):
                want_anti = i == j
                if logical_x[i].commutes(logical_z[j]) == want_anti:
                    raise CodeValidationError(
                        f"logical pairing broken: X[{i}] vs Z[{j}] should "
                        f"{'anticommute' if want_anti else 'commute'}")
                if i < j and not logical_x[i].commutes(logical_x[j]):
                    raise CodeValidationError(f"logical X[{i}] and X[{j}] anticommute")
                if i < j and not logical_z[i].commutes(logical_z[j]):
                    raise CodeValidationError(f"logical Z[{i}] and Z[{j}] anticommute")

    @staticmethod
    def _synthesize_tableau(generators, logical_x, logical_z, n) -> CliffordTableau:
        gen_vecs = [pauli_to_vec(g) for g in generators]
        lx_vecs = [pauli_to_vec(p) for p in logical_x]
        lz_vecs = [pauli_to_vec(p) for p in logical_z]
        destab = [vec_to_pauli(v) for v in _destabilizer_vecs(gen_vecs, lx_vecs, lz_vecs)]
        x_images = tuple(logical_x) + tuple(destab)
        z_images = tuple(logical_z) + tuple(generators)
        return CliffordTableau(n, x_images, z_images).validate()

    # -- basic queries ------------------------------------------------------

    @property
    def n_ancilla(self) -> int:
        return self.n_physical - self.n_logical

    def syndrome(self, error: PauliOperator) -> Syndrome:
        if error.n != self.n_physical:
            raise DimensionError(f"error acts on {error.n} qubits, code has {self.n_physical}")
        return Syndrome(tuple(0 if error.commutes(g) else 1 for g in self.generators))

    def in_normalizer(self, p: PauliOperator) -> bool:
        return self.syndrome(p).is_trivial()

    def in_stabilizer(self, p: PauliOperator) -> bool:
        """True iff p equals a product of generators up to phase."""
        if p.n != self.n_physical:
            raise DimensionError("dimension mismatch")
        return gf2.in_rowspan(self._gen_rows, pauli_to_vec(p))

    def stabilizer_distinct(self, p: PauliOperator, q: PauliOperator) -> bool:
        """True iff p and q lie in different cosets of the stabilizer group."""
        return not self.in_stabilizer(p.mul(q.inverse()))

    @cached_property
    def _gen_rows(self) -> np.ndarray:
        return symplectic_rows(self.generators)

    def stabilizer_elements(self) -> list[PauliOperator]:
        """All 2^r products of generators (canonical phases as multiplied)."""
        elems = [PauliOperator.identity(self.n_physical)]
        for g in self.generators:
            elems += [e.mul(g) for e in elems]
        return elems

    # -- dense objects ------------------------------------------------------

    def _check_dense(self):
        if self.n_physical > DENSE_CODE_LIMIT:
            raise CapacityError(f"dense code-space operations capped at {DENSE_CODE_LIMIT} qubits")

    @cached_property
    def projector(self) -> np.ndarray:
        """Code-space projector Pi = prod_i (I + g_i) / 2."""
        self._check_dense()
        m = np.eye(1 << self.n_physical, dtype=complex)
        for g in self.generators:
            m = 0.5 * (m + g.apply(m))
        return m

    def code_projector(self) -> np.ndarray:
        return self.projector

    def syndrome_projector(self, s: Syndrome) -> np.ndarray:
        """Projector onto the subspace with syndrome s."""
        self._check_dense()
        if len(s) != len(self.generators):
            raise DimensionError("syndrome length does not match generator count")
        m = np.eye(1 << self.n_physical, dtype=complex)
        for bit, g in zip(s.bits, self.generators):
            sign = -1.0 if bit else 1.0
            m = 0.5 * (m + sign * g.apply(m))
        return m

    @cached_property
    def encoding_unitary(self) -> np.ndarray:
        self._check_dense()
        return self.encoding_tableau.to_unitary()

    def encode_state(self, logical: StateVector) -> StateVector:
        """Isometry V: |psi> -> U_enc (|psi> (x) |0^r>)."""
        if logical.dim != 1 << self.n_logical:
            raise DimensionError(f"logical state dim {logical.dim} != 2^{self.n_logical}")
        full = np.zeros(1 << self.n_physical, dtype=complex)
        step = 1 << self.n_ancilla
        full[::step] = logical.amplitudes
        return StateVector(self.encoding_unitary @ full, normalized=logical.normalized)

    def logical_operator(self, p: PauliOperator) -> PauliOperator:
        """Physical representative of a logical-register Pauli (tableau image)."""
        if p.n != self.n_logical:
            raise DimensionError("operand must act on the logical register")
        return self.encoding_tableau.conjugate(embed(p, self.n_physical, 0))

    def label(self) -> str:
        base = f"[[{self.n_physical},{self.n_logical}"
        base += f",{self.distance}]]" if self.distance is not None else "]]"
        return f"{self.name} {base}" if self.name else base


def new_code(generators, logical_x, logical_z, **kw) -> StabilizerCode:
    return StabilizerCode.build(generators, logical_x, logical_z, **kw)


def conjugate_by_tableau(tab: CliffordTableau, p: PauliOperator) -> PauliOperator:
    return tab.conjugate(p)


# -- built-in code library ----------------------------------------------------


def _code_from_strings(gens, lx, lz, name, distance):
    return StabilizerCode.build(
        [PauliOperator.from_string(s) for s in gens],
        [PauliOperator.from_string(s) for s in lx],
        [PauliOperator.from_string(s) for s in lz],
        name=name, distance=distance)


def _rep3() -> StabilizerCode:
    return _code_from_strings(["ZZI", "IZZ"], ["XXX"], ["ZII"], "rep3", 1)


def _perfect5() -> StabilizerCode:
    gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    return _code_from_strings(gens, ["XXXXX"], ["ZZZZZ"], "perfect5", 3)


def _steane7() -> StabilizerCode:
    gens = ["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]
    return _code_from_strings(gens, ["XXXXXXX"], ["ZZZZZZZ"], "steane7", 3)


def _c422() -> StabilizerCode:
    return _code_from_strings(["XXXX", "ZZZZ"], ["XIXI", "XXII"], ["ZZII", "ZIZI"], "c422", 2)


def _gottesman8() -> StabilizerCode:
    """[[8,3,3]] code; logicals synthesized by symplectic completion."""
    gens = ["XXXXXXXX", "ZZZZZZZZ", "IXIXYZYZ", "IXZYIXZY", "IYXZXZIY"]
    return StabilizerCode.from_generators(
        [PauliOperator.from_string(s) for s in gens], name="gottesman8", distance=3)


def _z_chain_code(n: int, blocks: list[int], name: str) -> StabilizerCode:
    """Z_i Z_{i+1} chains over consecutive blocks; remaining qubits untouched.

    Gives [[n, n - sum(len-1)]] codes whose weight-1 error lists have small,
    known lengths: the head qubit of a length-b block yields a two-element
    list {X_head, Y_head} on its own syndrome.
    """
    gens = []
    q = 0
    for b in blocks:
        for i in range(b - 1):
            letters = ["I"] * n
            letters[q + i] = "Z"
            letters[q + i + 1] = "Z"
            gens.append(PauliOperator.from_string("".join(letters)))
        q += b
    return StabilizerCode.from_generators(gens, name=name, distance=1)


_LIBRARY = {
    "rep3": _rep3,
    "perfect5": _perfect5,
    "steane7": _steane7,
    "c422": _c422,
    "gottesman8": _gottesman8,
    "zchain6_4": lambda: _z_chain_code(6, [3], "zchain6_4"),
    "zchain8_5": lambda: _z_chain_code(8, [3, 2], "zchain8_5"),
}

_CACHE: dict[str, StabilizerCode] = {}


def available_codes() -> list[str]:
    return sorted(_LIBRARY)


def named_code(name: str) -> StabilizerCode:
    if name not in _LIBRARY:
        raise KeyError(f"unknown code {name!r}; available: {', '.join(available_codes())}")
    if name not in _CACHE:
        _CACHE[name] = _LIBRARY[name]()
    return _CACHE[name]


# -- line-oriented definition files -------------------------------------------


def format_code_file(code: StabilizerCode) -> str:
    """Header "n k", then generators, then logical X lines, then logical Z lines."""
    lines = [f"{code.n_physical} {code.n_logical}"]
    lines += [g.to_string() for g in code.generators]
    lines += [p.to_string() for p in code.logical_x]
    lines += [p.to_string() for p in code.logical_z]
    return "\n".join(lines) + "\n"


def parse_code_file(text: str, name: str | None = None) -> StabilizerCode:
    rows = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in rows if ln and not ln.startswith("#")]
    if not rows:
        raise CodeValidationError("empty code definition")
    try:
        n, k = (int(tok) for tok in rows[0].split())
    except ValueError as exc:
        raise CodeValidationError(f"bad header line {rows[0]!r}") from exc
    r = n - k
    expected = 1 + r + 2 * k
    if len(rows) != expected:
        raise CodeValidationError(f"expected {expected} lines for [[{n},{k}]], got {len(rows)}")
    ops = [PauliOperator.from_string(s) for s in rows[1:]]
    if any(op.n != n for op in ops):
        raise CodeValidationError("operator length disagrees with header")
    return StabilizerCode.build(ops[:r], ops[r:r + k], ops[r + k:], name=name)
