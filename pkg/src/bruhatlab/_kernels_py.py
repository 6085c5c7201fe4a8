"""Pure-Python kernel implementations.

Same call signatures as the compiled extension `_kernels`; selected by
`_backend` when the extension is unavailable or BRUHATLAB_KERNELS=py.

Conventions shared with the extension:
  * F_ell vectors/matrices are numpy int64 arrays with entries in [0, ell).
  * Field-tower scalars are "codes": c in [0, Q1) means generator^c, and the
    value Q1 itself is zero.  `zech` is the Zech logarithm table, with
    zech[k] = Q1 marking 1 + g^k = 0.
  * Echelon bases are fixed-size square arrays `rows` (D x D) plus a uint8
    flag vector `have`: have[c] says rows[c] is live with pivot column c and
    pivot value 1; live rows are fully reduced against each other.
"""

from __future__ import annotations

import numpy as np

BACKEND = "py"


# -- F_ell row echelon -------------------------------------------------------

def echelon_reduce(rows: np.ndarray, have: np.ndarray, vec: np.ndarray, ell: int) -> int:
    """Reduce vec in place against the live rows; return its pivot column or -1."""
    D = vec.shape[0]
    c = 0
    while c < D:
        x = vec[c]
        if x:
            if have[c]:
                vec -= x * rows[c]
                vec %= ell
            else:
                return c
        c += 1
    return -1


def echelon_insert(rows: np.ndarray, have: np.ndarray, vec: np.ndarray, ell: int) -> int:
    """Insert vec into the echelon basis; return new pivot column or -1 if dependent."""
    c = echelon_reduce(rows, have, vec, ell)
    if c < 0:
        return -1
    inv = pow(int(vec[c]), -1, ell)
    vec *= inv
    vec %= ell
    rows[c] = vec
    have[c] = 1
    # back-substitute into older rows to keep the basis fully reduced
    live = np.nonzero(have)[0]
    for r in live:
        if r != c and rows[r, c]:
            rows[r] -= rows[r, c] * vec
            rows[r] %= ell
    return c


# -- code-matrix helpers ---------------------------------------------------------

def _code_add(a: int, b: int, zech: np.ndarray, Q1: int) -> int:
    if a == Q1:
        return b
    if b == Q1:
        return a
    z = zech[(b - a) % Q1]
    if z == Q1:
        return Q1
    return (a + z) % Q1


def mat_mul_codes(A: np.ndarray, B: np.ndarray, m: int, zech: np.ndarray, Q1: int) -> np.ndarray:
    out = np.empty(m * m, dtype=np.int64)
    for i in range(m):
        for j in range(m):
            acc = Q1
            for k in range(m):
                x, y = A[i * m + k], B[k * m + j]
                if x != Q1 and y != Q1:
                    acc = _code_add(acc, (x + y) % Q1, zech, Q1)
            out[i * m + j] = acc
    return out


def mat_is_upper(A: np.ndarray, m: int, Q1: int) -> bool:
    for i in range(1, m):
        for j in range(i):
            if A[i * m + j] != Q1:
                return False
    return True


def scan_conj_upper(
    P: np.ndarray,
    G: np.ndarray,
    Q: np.ndarray,
    m: int,
    zech: np.ndarray,
    Q1: int,
    start: int = 0,
) -> int:
    """First index idx >= start with P @ G[idx] @ Q upper-triangular, else -1.

    G is an (nG, m*m) int64 array of code matrices.
    """
    nG = G.shape[0]
    for idx in range(start, nG):
        T = mat_mul_codes(mat_mul_codes(P, G[idx], m, zech, Q1), Q, m, zech, Q1)
        if mat_is_upper(T, m, Q1):
            return idx
    return -1
