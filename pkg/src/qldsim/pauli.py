"""Exact n-qubit Pauli group algebra in the bit-packed symplectic representation.

A Pauli operator is stored as a pair of n-bit masks plus a phase exponent:

    P = i^phase * (prod_q X_q^{x_q}) * (prod_q Z_q^{z_q})

with the X factors collected to the left of the Z factors (the canonical
order used for all phase bookkeeping).  Qubit 0 is the leftmost tensor
factor; inside the integer masks, qubit q occupies bit (n-1-q) so that the
masks line up directly with computational-basis indices.  The letter Y is
the canonical-phase-1 element: Y = i * X * Z.

Phases are exponents of i modulo 4.  Tracking mod 4 (rather than signs
only) keeps products such as Tr(T T) = +/- d exact.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import CapacityError, DimensionError

DENSE_QUBIT_LIMIT = 14

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"+": 0, "": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}

# (has_x, has_z) -> letter, letter -> (has_x, has_z, canonical phase contribution)
_BITS_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_LETTER_BITS = {"I": (0, 0, 0), "X": (1, 0, 0), "Y": (1, 1, 1), "Z": (0, 1, 0)}


def qubit_bit(n: int, q: int) -> int:
    """Mask bit for qubit q (qubit 0 = leftmost tensor factor = highest bit)."""
    if not 0 <= q < n:
        raise IndexError(f"qubit index {q} out of range for n={n}")
    return 1 << (n - 1 - q)


def _parity(mask: int) -> int:
    return bin(mask).count("1") & 1


@dataclass(frozen=True)
class PauliOperator:
    """Immutable phased Pauli on n qubits in symplectic form."""

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"need at least one qubit, got n={self.n}")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise DimensionError("bit mask exceeds qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, q: int, letter: str) -> "PauliOperator":
        """Single-qubit Pauli `letter` on qubit q (identity elsewhere)."""
        hx, hz, ph = _LETTER_BITS[letter.upper()]
        bit = qubit_bit(n, q)
        return cls(n, bit if hx else 0, bit if hz else 0, ph)

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Parse either compact ("-iXIZY") or sparse ("+iX_0 Z_3 @ 5") form.

        The sparse form lists single-qubit letters with qubit subscripts and
        must carry an explicit qubit count after '@' unless every qubit is
        mentioned.  Both forms round-trip with to_string()/to_sparse_string().
        """
        text = text.strip()
        m = re.match(r"^([+-]?i?)\s*(.*)$", text)
        prefix, body = m.group(1), m.group(2).strip()
        phase = _PREFIX_PHASE[prefix]
        if "_" in body:
            n = None
            if "@" in body:
                body, count = body.split("@")
                n = int(count)
            terms = re.findall(r"([IXYZ])_(\d+)", body.upper())
            if not terms and not body.strip():
                raise ValueError("empty sparse Pauli string")
            max_q = max(int(q) for _, q in terms)
            if n is None:
                n = max_q + 1
            if max_q >= n:
                raise DimensionError(f"qubit {max_q} out of range for n={n}")
            letters = ["I"] * n
            for letter, q in terms:
                if letters[int(q)] != "I":
                    raise ValueError(f"qubit {q} listed twice")
                letters[int(q)] = letter
            body = "".join(letters)
        x = z = 0
        n = len(body)
        if n == 0:
            raise ValueError("empty Pauli string")
        for q, letter in enumerate(body.upper()):
            hx, hz, ph = _LETTER_BITS[letter]
            bit = qubit_bit(n, q)
            x |= bit * hx
            z |= bit * hz
            phase += ph
        return cls(n, x, z, phase)

    # -- textual forms -----------------------------------------------------

    def letters(self) -> str:
        """Letter string "IXYZ..." (qubit 0 first), phase not included."""
        out = []
        for q in range(self.n):
            bit = qubit_bit(self.n, q)
            out.append(_BITS_LETTER[(1 if self.x & bit else 0, 1 if self.z & bit else 0)])
        return "".join(out)

    def sign_phase(self) -> int:
        """Phase exponent relative to the plain letter string (0 for "+XZY" etc.)."""
        n_y = bin(self.x & self.z).count("1")
        return (self.phase - n_y) % 4

    def to_string(self) -> str:
        """Compact form, e.g. "-iXIZY"."""
        return _PHASE_PREFIX[self.sign_phase()] + self.letters()

    def to_sparse_string(self) -> str:
        """Sparse form, e.g. "+iX_0 Z_3 @ 5"."""
        terms = [f"{letter}_{q}" for q, letter in enumerate(self.letters()) if letter != "I"]
        body = " ".join(terms) if terms else "I_0"
        return f"{_PHASE_PREFIX[self.sign_phase()]}{body} @ {self.n}"

    def __str__(self) -> str:
        return self.to_string()

    # -- algebra -----------------------------------------------------------

    def key(self) -> tuple[int, int]:
        """Phase-stripped identity of the operator, used for coset bookkeeping."""
        return (self.x, self.z)

    def is_identity(self, up_to_phase: bool = False) -> bool:
        trivial = self.x == 0 and self.z == 0
        return trivial if up_to_phase else (trivial and self.phase == 0)

    def weight(self) -> int:
        """Number of qubits acted on nontrivially."""
        return bin(self.x | self.z).count("1")

    def mul(self, other: "PauliOperator") -> "PauliOperator":
        """Exact group product; to_matrix(a.mul(b)) == to_matrix(a) @ to_matrix(b)."""
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")
        # moving Z^{z1} past X^{x2} costs (-1) per overlapping qubit
        phase = self.phase + other.phase + 2 * _parity(self.z & other.x)
        return PauliOperator(self.n, self.x ^ other.x, self.z ^ other.z, phase)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return self.mul(other)

    def adjoint(self) -> "PauliOperator":
        """Hermitian adjoint; for a Pauli this is also the inverse."""
        phase = (-self.phase + 2 * _parity(self.x & self.z)) % 4
        return PauliOperator(self.n, self.x, self.z, phase)

    inverse = adjoint

    def with_phase(self, phase: int) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, phase)

    def times_i(self, k: int = 1) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, self.phase + k)

    def commutes(self, other: "PauliOperator") -> bool:
        """Symplectic commutation test: x1.z2 + z1.x2 = 0 (mod 2)."""
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")
        return (_parity(self.x & other.z) ^ _parity(self.z & other.x)) == 0

    def is_hermitian(self) -> bool:
        return self.adjoint() == self

    def trace(self) -> complex:
        """Tr P: zero unless the Pauli part is the identity."""
        if self.x or self.z:
            return 0.0
        return (1j**self.phase) * (2**self.n)

    # -- dense export ------------------------------------------------------

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n complex matrix (guarded at n <= 14)."""
        if self.n > DENSE_QUBIT_LIMIT:
            raise CapacityError(f"dense export capped at {DENSE_QUBIT_LIMIT} qubits, got {self.n}")
        dim = 1 << self.n
        idx = np.arange(dim)
        m = np.zeros((dim, dim), dtype=complex)
        m[idx ^ self.x, idx] = (1j**self.phase) * self._column_signs(idx)
        return m

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Fast action on a vector or on the rows of a matrix (axis 0).

        Pure bit permutation plus phases; no matrix is built.
        """
        arr = np.asarray(amplitudes, dtype=complex)
        if arr.shape[0] != 1 << self.n:
            raise DimensionError(f"state dim {arr.shape[0]} != 2^{self.n}")
        idx = np.arange(arr.shape[0])
        coeff = (1j**self.phase) * self._column_signs(idx)
        out = np.empty_like(arr)
        out[idx ^ self.x] = coeff[:, None] * arr if arr.ndim == 2 else coeff * arr
        return out

    def _column_signs(self, idx: np.ndarray) -> np.ndarray:
        parities = np.bitwise_count(np.bitwise_and(idx, self.z)) & 1
        return 1.0 - 2.0 * parities


def mul(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    return p.mul(q)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return p.commutes(q)


def weight(p: PauliOperator) -> int:
    return p.weight()


def to_matrix(p: PauliOperator) -> np.ndarray:
    return p.to_matrix()


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """0 if the operators commute, 1 if they anticommute."""
    return 0 if p.commutes(q) else 1


def embed(p: PauliOperator, n_total: int, offset: int = 0) -> PauliOperator:
    """Place p on qubits [offset, offset + p.n) of an n_total-qubit register."""
    if offset < 0 or offset + p.n > n_total:
        raise DimensionError(f"cannot embed {p.n} qubits at offset {offset} into {n_total}")
    shift = n_total - (offset + p.n)
    return PauliOperator(n_total, p.x << shift, p.z << shift, p.phase)


def split_at(p: PauliOperator, cut: int) -> tuple[PauliOperator, PauliOperator]:
    """Split a Pauli across the tensor cut after qubit `cut` - 1.

    Returns (left, right) with p == embed(left, p.n) * embed(right, p.n, cut).
    The right factor keeps the '+' Hermitian convention; any remaining phase
    is folded into the left factor.
    """
    if not 0 < cut < p.n:
        raise DimensionError(f"cut {cut} outside (0, {p.n})")
    shift = p.n - cut
    right_mask = (1 << shift) - 1
    right = PauliOperator(shift, p.x & right_mask, p.z & right_mask,
                          bin(p.x & p.z & right_mask).count("1"))
    left = PauliOperator(cut, p.x >> shift, p.z >> shift, (p.phase - right.phase) % 4)
    return left, right


def pauli_count(n: int, max_weight: int) -> int:
    """Number of phase-0 Paulis of weight at most max_weight on n qubits."""
    return sum(comb(n, w) * 3**w for w in range(max_weight + 1))


def enumerate_paulis(n: int, max_weight: int) -> list[PauliOperator]:
    """All phase-0 Paulis of weight <= max_weight, in a fixed deterministic order.

    Ordering: ascending weight, then lexicographic support (as a qubit-index
    tuple), then letters per site with X < Y < Z.  The identity comes first.
    List-table representatives inherit this order, so transcripts are
    reproducible across runs.

    "Phase 0" means the plain Hermitian letter-string operator (sign prefix
    "+"); in the X-then-Z canonical form that is a phase exponent of one i
    per Y letter.
    """
    if not 0 <= max_weight <= n:
        raise ValueError(f"max_weight must lie in [0, {n}], got {max_weight}")
    out = [PauliOperator.identity(n)]
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(n), w):
            bits = [qubit_bit(n, q) for q in support]
            for letters in itertools.product("XYZ", repeat=w):
                x = z = phase = 0
                for bit, letter in zip(bits, letters):
                    hx, hz, ph = _LETTER_BITS[letter]
                    x |= bit * hx
                    z |= bit * hz
                    phase += ph
                out.append(PauliOperator(n, x, z, phase))
    return out
