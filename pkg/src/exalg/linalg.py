"""
Dense exact linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced to [0, p).  Row
reduction uses deterministic pivoting (first nonzero entry in column
order), so every result is bit-reproducible.  Large eliminations go
through a panel-blocked Gauss-Jordan whose trailing updates run as
float64 BLAS products; with p < 2^26 every dot product of the sizes we
use is exactly representable in a double, so the fast path is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_PRIME = 32003

# Panel width for the blocked elimination, and the size threshold below
# which the plain per-pivot loop is faster.
_PANEL = 64
_BLOCK_THRESHOLD = 1 << 14


class DimensionMismatch(ValueError):
    pass


def _as_mat(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inv_mod(x: int, p: int) -> int:
    return pow(int(x), p - 2, p)


@lru_cache(maxsize=64)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for word-sized moduli."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact a @ b mod p, using float64 BLAS when the inner dimension allows.

    A dot product of length k has magnitude at most k*(p-1)^2; as long as
    that stays below 2^53 the float64 product is exact.  Longer inner
    dimensions are accumulated in chunks.
    """
    a = _as_mat(a)
    b = _as_mat(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"matmul {a.shape} @ {b.shape}")
    k = a.shape[1]
    if k == 0:
        return zeros(a.shape[0], b.shape[1])
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    safe = (1 << 53) // ((p - 1) * (p - 1))
    if safe < 1:
        return (a @ b) % p
    if k <= safe:
        c = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(c, p).astype(np.int64)
    acc = zeros(a.shape[0], b.shape[1])
    for lo in range(0, k, safe):
        hi = min(lo + safe, k)
        c = a[:, lo:hi].astype(np.float64) @ b[lo:hi].astype(np.float64)
        acc = (acc + np.mod(c, p).astype(np.int64)) % p
    return acc


def _rref_small(a: np.ndarray, p: int) -> tuple[int, np.ndarray, list[int]]:
    m, n = a.shape
    r = a % p
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        k = row + int(nz[0])
        if k != row:
            r[[row, k]] = r[[k, row]]
        r[row] = (r[row] * inv_mod(r[row, col], p)) % p
        other = np.nonzero(r[:, col])[0]
        other = other[other != row]
        if other.size:
            r[other] = (r[other] - np.outer(r[other, col], r[row])) % p
        pivots.append(col)
        row += 1
    return len(pivots), r, pivots


def _rref_blocked(a: np.ndarray, p: int) -> tuple[int, np.ndarray, list[int]]:
    # Gauss-Jordan with delayed rank-one updates: pending pivots are
    # flushed as one exact BLAS product.  Column peeks and pivot-row reads
    # apply the pending updates lazily, so the result matches the
    # sequential elimination entry for entry.
    m, n = a.shape
    A = a % p
    pend_u: list[np.ndarray] = []  # multiplier columns (length m)
    pend_v: list[np.ndarray] = []  # frozen normalized pivot rows (length n)
    pivots: list[int] = []
    pivot_rows: list[int] = []
    used = np.zeros(m, dtype=bool)

    def flush() -> None:
        nonlocal A
        if not pend_u:
            return
        u = np.stack(pend_u, axis=1)
        v = np.stack(pend_v, axis=0)
        A = (A - matmul_mod(u, v, p)) % p
        pend_u.clear()
        pend_v.clear()

    for col in range(n):
        if len(pivots) == m:
            break
        cur = A[:, col].copy()
        if pend_u:
            # pending panel is narrow (< _PANEL), int64 dot stays exact
            u = np.stack(pend_u, axis=1)
            vc = np.array([row[col] for row in pend_v], dtype=np.int64)
            cur = (cur - u @ vc) % p
        cand = np.nonzero((cur != 0) & ~used)[0]
        if cand.size == 0:
            continue
        r = int(cand[0])
        rowvec = A[r].copy()
        if pend_u:
            ur = np.array([uu[r] for uu in pend_u], dtype=np.int64)
            v = np.stack(pend_v, axis=0)
            rowvec = (rowvec - ur @ v) % p
        rowvec = (rowvec * inv_mod(int(rowvec[col]), p)) % p
        u_col = cur.copy()
        u_col[r] = 0
        # A's copy of the pivot row is brought current here, so its pending
        # multipliers must be cleared or the flush would apply them twice.
        A[r] = rowvec
        for uu in pend_u:
            uu[r] = 0
        pend_u.append(u_col)
        pend_v.append(rowvec)
        used[r] = True
        pivots.append(col)
        pivot_rows.append(r)
        if len(pend_u) >= _PANEL:
            flush()
    flush()
    rank = len(pivots)
    out = zeros(m, n)
    for i, r in enumerate(pivot_rows):
        out[i] = A[r]
    # rows never chosen as pivots are exactly zero after full reduction
    return rank, out, pivots


def rref(mat, p: int) -> tuple[int, np.ndarray, list[int]]:
    """Reduced row echelon form over F_p.

    Returns (rank, reduced, pivot_columns).  Pivoting is deterministic:
    the first not-yet-used row with a nonzero entry in the current column
    wins, and pivot rows are emitted in pivot-column order.
    """
    a = _as_mat(mat)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0, a % p, []
    if a.size <= _BLOCK_THRESHOLD:
        return _rref_small(a, p)
    return _rref_blocked(a, p)


@dataclass
class Subspace:
    """A subspace of F_p^ambient, stored as an RREF basis (rows)."""

    ambient: int
    basis: np.ndarray  # shape (dim, ambient), reduced row echelon form
    p: int

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> list[int]:
        out = []
        for row in self.basis:
            nz = np.nonzero(row)[0]
            out.append(int(nz[0]))
        return out

    def contains(self, vec) -> bool:
        v = np.asarray(vec, dtype=np.int64) % self.p
        if v.shape != (self.ambient,):
            raise DimensionMismatch("vector/ambient mismatch")
        return reduce_mod_subspace(v, self).max(initial=0) == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.p == other.p
            and self.basis.shape == other.basis.shape
            and bool(np.array_equal(self.basis, other.basis))
        )


def subspace_from_rows(rows, ambient: int, p: int) -> Subspace:
    a = _as_mat(rows) if len(rows) else zeros(0, ambient)
    if a.shape[1] != ambient:
        raise DimensionMismatch("row length/ambient mismatch")
    rank, red, _ = rref(a, p)
    return Subspace(ambient, red[:rank], p)


def zero_subspace(ambient: int, p: int) -> Subspace:
    return Subspace(ambient, zeros(0, ambient), p)


def full_subspace(ambient: int, p: int) -> Subspace:
    return Subspace(ambient, identity(ambient), p)


def reduce_mod_subspace(vec: np.ndarray, s: Subspace) -> np.ndarray:
    """Canonical coset representative of vec modulo the subspace."""
    v = np.asarray(vec, dtype=np.int64) % s.p
    if s.dim == 0:
        return v
    # RREF basis: the pivot coordinates are the coefficients outright.
    coeffs = v[s.pivots]
    return (v - matmul_mod(coeffs.reshape(1, -1), s.basis, s.p).ravel()) % s.p


def coords_in_rref_basis(vec: np.ndarray, s: Subspace) -> np.ndarray | None:
    """Coordinates of vec in the RREF basis of s, or None if not a member."""
    v = np.asarray(vec, dtype=np.int64) % s.p
    piv = s.pivots
    coords = v[piv] if piv else zeros(1, 0)[0]
    if s.dim:
        rem = (v - matmul_mod(coords.reshape(1, -1), s.basis, s.p).ravel()) % s.p
    else:
        rem = v
    if rem.any():
        return None
    return coords


def kernel_basis(mat, p: int) -> Subspace:
    """Right null space {v : mat @ v = 0}, returned as rows of a Subspace."""
    a = _as_mat(mat)
    rows, cols = a.shape
    if cols == 0:
        return zero_subspace(0, p)
    if rows == 0:
        return full_subspace(cols, p)
    rank, red, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    if not free:
        return zero_subspace(cols, p)
    basis = zeros(len(free), cols)
    basis[np.arange(len(free)), free] = 1
    if pivots:
        basis[:, pivots] = (-red[:rank, free].T) % p
    return subspace_from_rows(basis, cols, p)


def left_kernel_basis(mat, p: int) -> Subspace:
    """Left null space {v : v @ mat = 0}."""
    a = _as_mat(mat)
    return kernel_basis(a.T, p)


def row_space(mat, p: int) -> Subspace:
    a = _as_mat(mat)
    return subspace_from_rows(a, a.shape[1], p)


def solve(a, b, p: int) -> np.ndarray | None:
    """Some x with a @ x = b, or None if the system is inconsistent."""
    a = _as_mat(a)
    bv = np.asarray(b, dtype=np.int64) % p
    if bv.ndim != 1 or bv.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"solve: {a.shape} vs b of shape {bv.shape}")
    aug = np.hstack([a % p, bv.reshape(-1, 1)])
    rank, red, pivots = rref(aug, p)
    n = a.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = zeros(1, n)[0]
    for i, c in enumerate(pivots):
        x[c] = red[i, n]
    return x


def solve_matrix(a, b, p: int) -> np.ndarray | None:
    """Some X with a @ X = b (b a matrix), or None if inconsistent."""
    a = _as_mat(a)
    b = _as_mat(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch("solve_matrix row mismatch")
    aug = np.hstack([a % p, b % p])
    rank, red, pivots = rref(aug, p)
    n = a.shape[1]
    if pivots and pivots[-1] >= n:
        return None
    x = zeros(n, b.shape[1])
    for i, c in enumerate(pivots):
        if c < n:
            x[c] = red[i, n:]
    return x


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    if u.ambient != w.ambient:
        raise DimensionMismatch("subspace ambient mismatch")
    stacked = np.vstack([u.basis, w.basis]) if (u.dim or w.dim) else zeros(0, u.ambient)
    return subspace_from_rows(stacked, u.ambient, u.p)


def subspace_intersection(u: Subspace, w: Subspace) -> Subspace:
    if u.ambient != w.ambient:
        raise DimensionMismatch("subspace ambient mismatch")
    p = u.p
    if u.dim == 0 or w.dim == 0:
        return zero_subspace(u.ambient, p)
    # Pairs (s, t) with s @ u.basis = t @ w.basis sweep out the intersection.
    stacked = np.vstack([u.basis, (-w.basis) % p])
    pairs = left_kernel_basis(stacked, p)  # rows (s | t)
    if pairs.dim == 0:
        return zero_subspace(u.ambient, p)
    vecs = matmul_mod(pairs.basis[:, : u.dim], u.basis, p)
    return subspace_from_rows(vecs, u.ambient, p)


def subspace_ops(u: Subspace, w: Subspace) -> tuple[Subspace, Subspace]:
    """Sum and intersection; dims satisfy dim(u)+dim(w) = dim(sum)+dim(meet)."""
    return subspace_sum(u, w), subspace_intersection(u, w)


def random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(rows, cols), dtype=np.int64)
