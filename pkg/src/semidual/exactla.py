"""Dense linear algebra over prime fields F_p.

Matrices are plain ``numpy`` integer arrays whose entries are kept reduced
into ``[0, p)``.  Every function returns a fresh array; inputs are never
modified, so results can be shared freely between threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DTYPE = np.int64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field with ``p`` elements."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise ValueError(f"{self.p!r} is not a prime")
        # products of two residues must fit in int64
        if self.p >= 2**31:
            raise ValueError("modulus must be a machine-word prime below 2^31")

    def __str__(self):
        return f"F_{self.p}"

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.p)

    def matrix(self, rows) -> np.ndarray:
        return as_matrix(rows, self.p)

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=DTYPE)


def as_matrix(rows, p: int) -> np.ndarray:
    a = np.array(rows, dtype=DTYPE)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=DTYPE)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 entries below p < 2^31: accumulate in float-free chunks to avoid overflow
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    k = a.shape[-1]
    limit = max(1, (2**62) // max(1, (p - 1) ** 2))
    if k <= limit:
        return (a @ b) % p
    out = np.zeros(a.shape[:-1] + b.shape[-1:], dtype=DTYPE)
    for s in range(0, k, limit):
        out = (out + a[..., s : s + limit] @ b[..., s : s + limit, :]) % p
    return out


def _eliminate(a: np.ndarray, p: int, reduced: bool) -> tuple[np.ndarray, list[int]]:
    """In-place Gaussian elimination; returns the array and its pivot columns."""
    if p == 2:
        return _eliminate_gf2(a, reduced)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r, c:] = a[r, c:] * pow(piv, -1, p) % p
        blocks = [slice(r + 1, rows)] + ([slice(0, r)] if reduced else [])
        for blk in blocks:
            f = a[blk, c]
            if f.any():
                sub = a[blk, c:]
                sub -= np.outer(f, a[r, c:])
                sub %= p
        pivots.append(c)
        r += 1
    return a, pivots


def _eliminate_gf2(a: np.ndarray, reduced: bool) -> tuple[np.ndarray, list[int]]:
    # rows packed eight columns to a byte; row operations become byte-wise XOR
    rows, cols = a.shape
    packed = np.packbits(a.astype(np.uint8), axis=1, bitorder="little")
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        byte, bit = c >> 3, np.uint8(1 << (c & 7))
        col = packed[:, byte] & bit
        nz = np.flatnonzero(col[r:])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            packed[[r, k]] = packed[[k, r]]
            col[[r, k]] = col[[k, r]]
        if reduced:
            hit = np.flatnonzero(col)
            hit = hit[hit != r]
        else:
            hit = np.flatnonzero(col[r + 1 :]) + r + 1
        if hit.size:
            packed[hit, byte:] ^= packed[r, byte:]
        pivots.append(c)
        r += 1
    out = np.unpackbits(packed, axis=1, count=cols, bitorder="little").astype(DTYPE)
    a[...] = out
    return a, pivots


def rref(m, p: int) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form of ``m`` over F_p: ``(reduced, rank, pivot_cols)``."""
    a = np.array(m, dtype=DTYPE) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    a, pivots = _eliminate(a, p, reduced=True)
    return a, len(pivots), pivots


def rank(m, p: int) -> int:
    a = np.array(m, dtype=DTYPE) % p
    if a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = np.ascontiguousarray(a.T)
    return len(_eliminate(a, p, reduced=False)[1])


def nullspace(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Basis of the null space together with its free columns.

    The returned basis ``k`` has shape ``(cols, nullity)`` and satisfies
    ``k[free] == identity``, so the coordinates of a null vector ``v`` in
    this basis are simply ``v[free]``.
    """
    a = np.array(m, dtype=DTYPE) % p
    cols = a.shape[1]
    red, _, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    k = np.zeros((cols, len(free)), dtype=DTYPE)
    if free:
        k[free, np.arange(len(free))] = 1
        if pivots:
            k[pivots, :] = (-red[: len(pivots)][:, free]) % p
    return k, free


def kernel_basis(m, p: int) -> np.ndarray:
    """Columns form a basis of ``{x : m @ x == 0}``."""
    return nullspace(m, p)[0]


def column_space(m, p: int) -> np.ndarray:
    """A basis (as columns) of the span of the columns of ``m``, in RREF shape."""
    a = np.array(m, dtype=DTYPE) % p
    red, r, _ = rref(a.T, p)
    return np.ascontiguousarray(red[:r].T)


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x == b`` or ``None`` when inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (solved jointly).
    """
    a = np.array(a, dtype=DTYPE) % p
    b = np.array(b, dtype=DTYPE) % p
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs right-hand side {b.shape}")
    n = a.shape[1]
    aug = np.hstack([a, b])
    red, _, pivots = rref(aug, p)
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, b.shape[1]), dtype=DTYPE)
    for r, c in enumerate(pivots):
        x[c] = red[r, n:]
    return x[:, 0] if vector else x


def inverse(a, p: int) -> np.ndarray | None:
    a = np.array(a, dtype=DTYPE) % p
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    return solve(a, identity(n), p) if rank(a, p) == n else None


def batch_invertible(mats: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask: which of the square matrices ``mats[b]`` are invertible."""
    a = np.array(mats, dtype=DTYPE) % p
    nb, n, _ = a.shape
    ok = np.ones(nb, dtype=bool)
    inv_table = np.array([0] + [pow(v, -1, p) for v in range(1, p)], dtype=DTYPE)
    idx = np.arange(nb)
    for c in range(n):
        colvals = a[:, c:, c]
        has = colvals != 0
        anyp = has.any(axis=1)
        ok &= anyp
        piv = c + np.argmax(has, axis=1)
        rows_c = a[idx, c].copy()
        a[idx, c] = a[idx, piv]
        a[idx, piv] = rows_c
        scale = inv_table[a[idx, c, c]]
        a[:, c] = a[:, c] * scale[:, None] % p
        factors = a[:, c + 1 :, c].copy()
        a[:, c + 1 :] = (a[:, c + 1 :] - factors[:, :, None] * a[:, c][:, None, :]) % p
    return ok
