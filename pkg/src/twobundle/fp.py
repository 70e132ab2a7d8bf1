"""Dense linear algebra over the prime field F_p.

Matrices are numpy integer arrays with entries reduced into ``range(p)``.
Only what the chain-complex and cochain code needs: row reduction, rank,
inverse, kernel, and a column-space complement.
"""
from __future__ import annotations

import itertools

import numpy as np


def as_fp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the list of pivot columns."""
    m = as_fp(a, p).copy()
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def inverse(a, p: int) -> np.ndarray:
    a = as_fp(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return a.copy()
    red, piv = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular mod %d" % p)
    return red[:, n:].copy()


def is_invertible(a, p: int) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def kernel(a, p: int) -> np.ndarray:
    """Columns form a basis of the right kernel {x : a x = 0}."""
    a = as_fp(a, p)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    red, piv = rref(a, p)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(piv):
            basis[pc, j] = (-red[i, fc]) % p
    return basis


def extend_to_basis(cols_in, n: int, p: int) -> np.ndarray:
    """Append standard basis vectors to independent columns until they span F_p^n."""
    cur = as_fp(cols_in, p).reshape(n, -1)
    for i in range(n):
        if cur.shape[1] == n:
            break
        e = np.zeros((n, 1), dtype=np.int64)
        e[i, 0] = 1
        trial = np.hstack([cur, e])
        if rank(trial, p) > cur.shape[1]:
            cur = trial
    return cur


def all_matrices(rows: int, cols: int, p: int):
    """Every rows x cols matrix over F_p, in lexicographic order of entries."""
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def general_linear(n: int, p: int) -> list[np.ndarray]:
    return [m for m in all_matrices(n, n, p) if is_invertible(m, p)]


def key(a) -> tuple:
    """Hashable form of a matrix that keeps its shape."""
    a = np.asarray(a)
    return (a.shape, tuple(int(x) for x in a.ravel()))
