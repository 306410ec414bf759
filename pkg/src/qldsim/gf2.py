"""Small dense linear algebra over GF(2), backed by uint8 numpy arrays.

Everything here is deterministic: elimination always pivots on the first
available row/column, which is what makes tableau synthesis reproducible.
"""

from __future__ import annotations

import numpy as np


def as_gf2(a) -> np.ndarray:
    return np.asarray(a, dtype=np.uint8) & 1


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (R, pivot column list)."""
    r = as_gf2(a).copy()
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + hits[0]
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        mask = r[:, col].copy()
        mask[row] = 0
        r[mask == 1] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray) -> int:
    _, pivots = rref(a)
    return len(pivots)


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of A x = b (mod 2), or None if inconsistent.

    Free variables are set to zero, so the solution is deterministic.
    """
    a = as_gf2(a)
    b = as_gf2(b).reshape(-1)
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(aug)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for i, col in enumerate(pivots):
        x[col] = r[i, cols]
    return x


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of the kernel of A (rows of the result); shape (dim_kernel, cols)."""
    a = as_gf2(a)
    rows, cols = a.shape
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = r[i, fc]
    return basis


def inv(a: np.ndarray) -> np.ndarray:
    """Inverse of a square invertible matrix over GF(2)."""
    a = as_gf2(a)
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.uint8)], axis=1)
    r, pivots = rref(aug)
    if pivots[: n if len(pivots) >= n else len(pivots)] != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return r[:, n:]


def in_rowspan(rows: np.ndarray, v: np.ndarray) -> bool:
    """True if v lies in the GF(2) span of the given rows."""
    rows = as_gf2(rows)
    if rows.size == 0:
        return not np.any(as_gf2(v))
    return rank(np.vstack([rows, as_gf2(v)])) == rank(rows)
