"""Exact Haar-moment engine for orders 2 and 4 (Weingarten calculus on S4).

Order-2 averages decompose over {I, SWAP}; order-4 averages over the 24
permutation operators of S4, with coefficients given by the closed-form
Weingarten function per cycle type.  Coefficients are evaluated in exact
rational arithmetic and converted to floats only at the boundary, so the
orthogonality identity (the Gram-inverse property of the Weingarten
function) tests exactly.

Conventions, pinned by dense tests:

  * permutation_operator(pi, d) acts as V |i_0 .. i_{k-1}> =
    |i_{pi^{-1}(0)} .. i_{pi^{-1}(k-1)}>, a group homomorphism
    V(pi) V(sigma) = V(pi o sigma);
  * Tr[(A_0 (x) .. (x) A_{k-1}) V(tau)] = prod over cycles of tau of
    Tr(A_c A_{tau^{-1}(c)} A_{tau^{-2}(c)} ...);
  * cyclic_contraction_perm(k) is the tau whose operator G satisfies
    Tr[(A_0 (x) .. ) G] = Tr[A_0 A_1 ...].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapacityError, DimensionError, PoleError
from .pauli import PauliOperator

DENSE_MOMENT_LIMIT = 1 << 12


# -- permutations --------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Permutation of {0..k-1}; images[i] = pi(i)."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(k)))

    @classmethod
    def from_cycles(cls, k: int, *cycles) -> "Permutation":
        images = list(range(k))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls(tuple(images))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self o other)(i) = self(other(i))."""
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.k)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.k
        out = []
        for start in range(self.k):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return tuple(out)

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def num_cycles(self) -> int:
        return len(self.cycles())

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.images)) + ")"


def symmetric_group(k: int) -> tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in itertools.permutations(range(k)))


S4 = symmetric_group(4)


def cyclic_contraction_perm(k: int) -> Permutation:
    """tau with Tr[(A_0 (x) ... (x) A_{k-1}) V(tau)] = Tr[A_0 A_1 ... A_{k-1}]."""
    # the cycle walk follows tau^{-1}, so tau maps i -> i-1 (mod k)
    return Permutation(tuple((i - 1) % k for i in range(k)))


def permutation_operator(perm: Permutation, d: int) -> np.ndarray:
    """Dense V_d(perm) on (C^d)^{(x) k}."""
    k = perm.k
    if d**k > DENSE_MOMENT_LIMIT:
        raise CapacityError(f"dense permutation operator needs dim {d**k} > {DENSE_MOMENT_LIMIT}")
    dim = d**k
    idx = np.arange(dim)
    digits = np.empty((k, dim), dtype=np.int64)
    rem = idx
    for a in range(k - 1, -1, -1):
        digits[a] = rem % d
        rem = rem // d
    inv = perm.inverse()
    new_idx = np.zeros(dim, dtype=np.int64)
    for a in range(k):
        new_idx = new_idx * d + digits[inv(a)]
    v = np.zeros((dim, dim))
    v[new_idx, idx] = 1.0
    return v


def tensor_perm_trace(ops, tau: Permutation) -> complex:
    """Tr[(A_0 (x) ... ) V(tau)] via the cycle-product rule (no big tensors)."""
    ops = [np.asarray(a, dtype=complex) for a in ops]
    if len(ops) != tau.k:
        raise DimensionError("operator count does not match permutation order")
    total = 1.0 + 0.0j
    inv = tau.inverse()
    for cyc in tau.cycles():
        start = cyc[0]
        prod = ops[start]
        j = inv(start)
        while j != start:
            prod = prod @ ops[j]
            j = inv(j)
        total *= np.trace(prod)
    return complex(total)


def pauli_cycle_trace(ops: list[PauliOperator], tau: Permutation) -> complex:
    """Same cycle-product rule, but on Paulis via exact group algebra."""
    if len(ops) != tau.k:
        raise DimensionError("operator count does not match permutation order")
    total = 1.0 + 0.0j
    inv = tau.inverse()
    for cyc in tau.cycles():
        start = cyc[0]
        prod = ops[start]
        j = inv(start)
        while j != start:
            prod = prod.mul(ops[j])
            j = inv(j)
        total *= prod.trace()
        if total == 0:
            return 0.0j
    return complex(total)


# -- Weingarten coefficients ---------------------------------------------------


def wg_exact(cycle_type, d: int) -> Fraction:
    """Order-4 Weingarten coefficient for a cycle type, exact in d."""
    ct = tuple(sorted(cycle_type, reverse=True))
    if sum(ct) != 4:
        raise ValueError(f"cycle type {ct} is not a partition of 4")
    if d <= 3:
        raise PoleError(f"order-4 Weingarten coefficients have poles for d <= 3 (got d={d})")
    d = Fraction(d)
    d2 = d * d
    base = d2 * (d2 - 1) * (d2 - 4) * (d2 - 9)
    if ct == (1, 1, 1, 1):
        return (d2 * d2 - 8 * d2 + 6) / base
    if ct == (2, 1, 1):
        return Fraction(-1) / (d * (d2 - 1) * (d2 - 9))
    if ct == (2, 2):
        return (d2 + 6) / base
    if ct == (3, 1):
        return (2 * d2 - 3) / base
    if ct == (4,):
        return Fraction(-5) / (d * (d2 - 1) * (d2 - 4) * (d2 - 9))
    raise ValueError(f"unknown cycle type {ct}")


def wg_coefficient(cycle_type, d: int) -> float:
    return float(wg_exact(cycle_type, d))


def weingarten_orthogonality(d: int) -> dict[Permutation, Fraction]:
    """sum_sigma Wg(pi^-1 sigma, d) d^{#cycles(sigma)} for every pi in S4.

    Exactly 1 at the identity and 0 elsewhere; this is the sharpest single
    test of the coefficient table.
    """
    out = {}
    for pi in S4:
        total = Fraction(0)
        for sigma in S4:
            rel = pi.inverse().compose(sigma)
            total += wg_exact(rel.cycle_type(), d) * Fraction(d) ** sigma.num_cycles()
        out[pi] = total
    return out


def weingarten_gram_matrix(d: int) -> np.ndarray:
    """Gram matrix G[pi, sigma] = d^{#cycles(pi^-1 sigma)} in S4 order."""
    n = len(S4)
    g = np.zeros((n, n))
    for i, pi in enumerate(S4):
        for j, sigma in enumerate(S4):
            g[i, j] = float(d) ** pi.inverse().compose(sigma).num_cycles()
    return g


# -- order 2 --------------------------------------------------------------------


def swap_operator(d: int) -> np.ndarray:
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[j * d + i, i * d + j] = 1.0
    return f


def moment2_coefficients(o: np.ndarray, d: int) -> tuple[complex, complex]:
    """(c_I, c_F) with E_U[U^dag(x)2 O U^(x)2] = c_I I + c_F F.

        c_I = (Tr O - Tr(O F)/d) / (d^2 - 1)
        c_F = (Tr(F O) - Tr(O)/d) / (d^2 - 1)
    """
    o = np.asarray(o, dtype=complex)
    if o.shape != (d * d, d * d):
        raise DimensionError(f"operator shape {o.shape} is not ({d * d}, {d * d})")
    f = swap_operator(d)
    tr_o = np.trace(o)
    tr_of = np.trace(o @ f)
    c_i = (tr_o - tr_of / d) / (d * d - 1)
    c_f = (tr_of - tr_o / d) / (d * d - 1)
    return complex(c_i), complex(c_f)


def moment2_reconstruct(o: np.ndarray, d: int) -> np.ndarray:
    c_i, c_f = moment2_coefficients(o, d)
    return c_i * np.eye(d * d) + c_f * swap_operator(d)


def expected_p0_exact(n: int, m: int) -> Fraction:
    """Key-averaged pass probability of a wrong guess: (2^n d - 1)/(d^2 - 1)."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    d = 1 << (n + m)
    return Fraction(2**n * d - 1, d * d - 1)


def expected_p0(n: int, m: int) -> float:
    return float(expected_p0_exact(n, m))


# -- order 4 --------------------------------------------------------------------


@dataclass
class MomentResult:
    """Haar moment as a combination of permutation operators.

    coefficients maps pi to c_pi with E[...] = sum_pi c_pi V_d(pi);
    breakdown maps (pi, sigma) to the term Wg(pi^-1 sigma, d) Tr(V(sigma)^dag O).
    """

    order: int
    d: int
    coefficients: dict[Permutation, complex]
    breakdown: dict[tuple[Permutation, Permutation], complex] = field(default_factory=dict)
    value: np.ndarray | None = None

    def as_matrix(self) -> np.ndarray:
        if self.value is None:
            dim = self.d**self.order
            if dim > DENSE_MOMENT_LIMIT:
                raise CapacityError(f"dense moment needs dim {dim} > {DENSE_MOMENT_LIMIT}")
            acc = np.zeros((dim, dim), dtype=complex)
            for pi, c in self.coefficients.items():
                acc += c * permutation_operator(pi, self.d)
            self.value = acc
        return self.value

    def contract(self, ops) -> complex:
        """Tr[(A_0 (x) A_1 (x) ...) M G] for the cyclic contraction G.

        The single-matrix operators A_i live on C^d, so this evaluates
        fourth-moment averages of products like Tr[A_0 U... ] without ever
        forming a d^4-dimensional object.
        """
        gamma = cyclic_contraction_perm(self.order)
        total = 0.0j
        for pi, c in self.coefficients.items():
            total += c * tensor_perm_trace(ops, pi.compose(gamma))
        return complex(total)


def moment4(o, d: int) -> MomentResult:
    """Exact Haar average E_U[U^dag(x)4 O U^(x)4].

    `o` is either a dense array on (C^d)^(x)4 (guarded at d^4 <= 2^12) or a
    sequence of four PauliOperators interpreted as O = o[0] (x) .. (x) o[3];
    the structured form works at any d = 2^q up to 2^12 because the traces
    Tr(V(sigma)^dag O) reduce to Pauli cycle products.
    """
    if isinstance(o, (list, tuple)) and all(isinstance(p, PauliOperator) for p in o):
        if len(o) != 4:
            raise DimensionError("structured moment4 needs exactly 4 Paulis")
        if any(1 << p.n != d for p in o):
            raise DimensionError("Pauli factors must act on dimension d")
        beta = {sigma: pauli_cycle_trace(list(o), sigma.inverse()) for sigma in S4}
        dense = None
    else:
        o = np.asarray(o, dtype=complex)
        if d**4 > DENSE_MOMENT_LIMIT:
            raise CapacityError(f"dense moment4 capped at d^4 <= {DENSE_MOMENT_LIMIT}")
        if o.shape != (d**4, d**4):
            raise DimensionError(f"operator shape {o.shape} is not ({d**4}, {d**4})")
        beta = {}
        idx = np.arange(d**4)
        for sigma in S4:
            v = permutation_operator(sigma, d)
            beta[sigma] = complex(np.trace(v.T @ o))
        dense = o

    coeffs: dict[Permutation, complex] = {}
    breakdown: dict[tuple[Permutation, Permutation], complex] = {}
    for pi in S4:
        total = 0.0j
        for sigma in S4:
            rel = pi.inverse().compose(sigma)
            term = wg_coefficient(rel.cycle_type(), d) * beta[sigma]
            breakdown[(pi, sigma)] = term
            total += term
        coeffs[pi] = total
    return MomentResult(order=4, d=d, coefficients=coeffs, breakdown=breakdown)


# -- the restoration-fidelity closed form ---------------------------------------


def t_squared_sign(t: PauliOperator) -> int:
    """+1 if T^2 = +I, -1 if T^2 = -I (every phased Pauli squares to one of these)."""
    sq = t.mul(t)
    if sq.key() != (0, 0):
        raise ValueError("operator does not square to a scalar")
    if sq.phase == 0:
        return 1
    if sq.phase == 2:
        return -1
    raise ValueError("Pauli squared to +/-iI; non-Hermitian phase bookkeeping bug")


def _beta_symbolic(sigma: Permutation, d: int, sign: int) -> Fraction:
    """Tr(V(sigma)^dag T^dag(x)T(x)T^dag(x)T) for traceless Pauli T with T^2 = sign*I.

    Per cycle, the slot operators multiply to a power of T; odd powers are
    traceless, even powers contribute sign^{|net|/2} * d.
    """
    slot_t = (-1, 1, -1, 1)  # T^dag, T, T^dag, T as powers of T
    total = Fraction(1)
    for cyc in sigma.inverse().cycles():
        net = sum(slot_t[i] for i in cyc)
        if net % 2:
            return Fraction(0)
        total *= Fraction(sign) ** (abs(net) // 2) * d
    return total


def _alpha_exact(pi: Permutation, d: int, m: int) -> Fraction:
    """Tr[(rho_0 (x) J (x) rho_0 (x) J) V(pi) G] with J = I - Pi_tag.

    rho_0 is a pure state inside the tag-zero subspace, so rho_0 J = 0 and
    any cycle mixing the two operator kinds vanishes; pure cycles give
    Tr rho_0^l = 1 and Tr J^l = Tr J = d - d/2^m.
    """
    tau = pi.compose(cyclic_contraction_perm(4))
    tr_j = Fraction(d) - Fraction(d, 2**m)
    total = Fraction(1)
    for cyc in tau.cycles():
        kinds = {i % 2 for i in cyc}  # slots 0,2 hold rho_0; slots 1,3 hold J
        if len(kinds) > 1:
            return Fraction(0)
        if kinds == {1}:
            total *= tr_j
    return total


@dataclass(frozen=True)
class RestorationFidelity:
    """Exact Haar-averaged unnormalized restoration fidelity after one wrong guess."""

    n: int
    m: int
    t_squared_sign: int
    exact: Fraction
    breakdown: dict[tuple[Permutation, Permutation], Fraction]

    @property
    def value(self) -> float:
        return float(self.exact)

    @property
    def tail_constant(self) -> float:
        """c with value = 1 - c * 2^-m (how much of the loss the tag register explains)."""
        return float((1 - self.exact) * 2**self.m)


def restoration_fidelity_detail(n: int, m: int, t_sq_sign: int = 1) -> RestorationFidelity:
    """Full 24 x 24 Weingarten sum for E_U Tr[rho_0' A rho_0' A] at d = 2^(n+m).

    This is the exact finite-d value of the quantity whose leading order is
    1 - O(2^-m) + O(1/d^2); no asymptotics are taken.  The sign of T^2
    enters the (2,2)-type trace factors but cancels in their products, so
    the result is sign-independent; the parameter is kept for the caller to
    state its case explicitly.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if t_sq_sign not in (1, -1):
        raise ValueError("t_squared_sign must be +1 or -1")
    d = 1 << (n + m)
    breakdown: dict[tuple[Permutation, Permutation], Fraction] = {}
    total = Fraction(0)
    for pi in S4:
        alpha = _alpha_exact(pi, d, m)
        if alpha == 0:
            continue
        for sigma in S4:
            beta = _beta_symbolic(sigma, d, t_sq_sign)
            if beta == 0:
                continue
            term = wg_exact(pi.inverse().compose(sigma).cycle_type(), d) * beta * alpha
            breakdown[(pi, sigma)] = term
            total += term
    return RestorationFidelity(n, m, t_sq_sign, total, breakdown)


def expected_unnormalized_fidelity(n: int, m: int, t_squared_sign: int = 1) -> float:
    return restoration_fidelity_detail(n, m, t_squared_sign).value
