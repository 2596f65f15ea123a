"""Dense linear algebra over F_q on int64 numpy arrays.

Matrices are plain 2-d ``np.int64`` arrays of element codes; the field is
passed explicitly.  Vectors are 1-d arrays.
"""

from __future__ import annotations

import numpy as np

from .field import Field, FieldError

__all__ = [
    "as_matrix",
    "identity",
    "matmul",
    "scale",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "inverse",
    "batch_rank",
    "random_invertible",
    "random_permutation",
    "permutation_matrix",
    "rank_one_update_inverse",
    "outer",
    "matrix_to_json",
    "matrix_from_json",
]

_FLOAT_EXACT = float(1 << 52)


def as_matrix(M, field: Field | None = None) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise FieldError(f"expected a matrix, got shape {A.shape}")
    if field is not None:
        field.check(A)
    return A


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def scale(M, c: int, field: Field) -> np.ndarray:
    return field.mul(np.asarray(M, dtype=np.int64), c)


def outer(u, v, field: Field) -> np.ndarray:
    """The matrix ``u^T v`` for row vectors u, v."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return field.mul(u[:, None], v[None, :])


def matmul(A, B, field: Field) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.ndim == 1:
        return matmul(A[None, :], B, field)[0]
    if A.shape[1] != B.shape[0]:
        raise FieldError(f"shape mismatch {A.shape} @ {B.shape}")
    rows, inner = A.shape
    cols = B.shape[1] if B.ndim == 2 else 1
    if B.ndim == 1:
        return matmul(A, B[:, None], field)[:, 0]
    if inner == 0:
        return np.zeros((rows, cols), dtype=np.int64)
    if field.m == 1:
        p = field.p
        # float64 BLAS is exact while every partial sum stays below 2^52
        step = max(1, int(_FLOAT_EXACT // ((p - 1) ** 2 or 1)))
        Af = A.astype(np.float64)
        Bf = B.astype(np.float64)
        acc = np.zeros((rows, cols), dtype=np.int64)
        for s in range(0, inner, step):
            part = Af[:, s : s + step] @ Bf[s : s + step]
            acc = (acc + np.fmod(part, p).astype(np.int64)) % p
        return acc
    if field.p == 2 and inner < (1 << 52):
        return _matmul_char2(A, B, field)
    acc = np.zeros((rows, cols), dtype=np.int64)
    for t in range(inner):
        col = A[:, t]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        row = B[t]
        if not row.any():
            continue
        acc[nz] = field.add(acc[nz], field.mul(col[nz, None], row[None, :]))
    return acc


_PACK_CACHE: dict[int, tuple[np.ndarray, int, int]] = {}


def _pack_table(m: int) -> tuple[np.ndarray, int, int]:
    # element code -> its m bits spread into slots of width 52 // m
    if m not in _PACK_CACHE:
        slot = 52 // m
        codes = np.arange(1 << m, dtype=np.int64)
        table = np.zeros(1 << m, dtype=np.int64)
        mask = 0
        for v in range(m):
            table |= ((codes >> v) & 1) << (slot * v)
            mask |= 1 << (slot * v)
        _PACK_CACHE[m] = (table.astype(np.float64), slot, mask)
    return _PACK_CACHE[m]


def _matmul_char2(A: np.ndarray, B: np.ndarray, field: Field) -> np.ndarray:
    # a*b = sum_u a_u (x^u b).  For each u the bits of x^u * B sit in separate
    # slots of one float, so a 0/1 matmul against bit plane u of A counts each
    # output bit on its own; slot parities, XOR-ed over u, give the product.
    m = field.m
    table, slot, mask = _pack_table(m)
    chunk = (1 << slot) - 1
    rows, inner = A.shape
    acc = np.zeros((rows, B.shape[1]), dtype=np.int64)
    for u in range(m):
        Au = ((A >> u) & 1).astype(np.float64)
        if not Au.any():
            continue
        packed = table[field.mul(B, 1 << u) if u else B]
        for s0 in range(0, inner, chunk):
            cnt = (Au[:, s0 : s0 + chunk] @ packed[s0 : s0 + chunk]).astype(np.int64)
            acc ^= cnt & mask
    out = np.zeros_like(acc)
    for v in range(m):
        out |= ((acc >> (slot * v)) & 1) << v
    return out


def _gauss_jordan(A: np.ndarray, field: Field, limit: int | None) -> tuple[np.ndarray, list[int]]:
    # in place on A; returns the nonzero RREF rows and pivot columns
    rows, cols = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        pv = int(A[r, c])
        if pv != 1:
            A[r, c:] = field.mul(A[r, c:], field.inv(pv))
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            f = A[others, c]
            A[others, c:] = field.sub(A[others, c:], field.mul(f[:, None], A[r, c:][None, :]))
        pivots.append(c)
        r += 1
        if limit is not None and r > limit:
            break
    return A[:r], pivots


def rref(M, field: Field, limit: int | None = None) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form.

    Returns ``(R, rank, pivot_cols)`` where ``R`` holds only the nonzero rows.
    Pivots are chosen as the first nonzero entry scanning columns left to
    right, so the result is the unique RREF.  With ``limit`` set, elimination
    stops as soon as the rank exceeds ``limit`` (``R`` is then partial).
    """
    A = as_matrix(M).copy()
    rows, cols = A.shape
    block = max(2 * cols, 64)
    if rows <= block:
        R, piv = _gauss_jordan(A, field, limit)
        return R, len(piv), piv
    # tall input: fold blocks of rows into a running RREF basis
    basis = np.zeros((0, cols), dtype=np.int64)
    piv: list[int] = []
    for start in range(0, rows, block):
        X = A[start : start + block]
        if piv:
            X = field.sub(X, matmul(X[:, piv], basis, field))
        Xr, xp = _gauss_jordan(X, field, None if limit is None else limit - len(piv))
        if not xp:
            continue
        basis = field.sub(basis, matmul(basis[:, xp], Xr, field)) if piv else basis
        basis = np.vstack([basis, Xr])
        piv = piv + xp
        order = np.argsort(piv, kind="stable")
        basis = basis[order]
        piv = [piv[i] for i in order]
        if limit is not None and len(piv) > limit:
            break
        if len(piv) == cols:
            break
    return basis, len(piv), piv


def rank(M, field: Field, limit: int | None = None) -> int:
    """Rank of ``M``; with ``limit``, any value above ``limit`` means "exceeds"."""
    return rref(M, field, limit)[1]


def nullspace(M, field: Field) -> np.ndarray:
    """Basis (as RREF rows) of the right kernel ``{v : M v^T = 0}``."""
    A = as_matrix(M)
    cols = A.shape[1]
    R, r, piv = rref(A, field)
    free = [j for j in range(cols) if j not in set(piv)]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    N = np.zeros((len(free), cols), dtype=np.int64)
    N[np.arange(len(free)), free] = 1
    if r:
        N[:, piv] = field.neg(R[:, free].T)
    return rref(N, field)[0]


def solve(A, b, field: Field) -> np.ndarray | None:
    """One solution x of ``A x^T = b^T``, free variables set to 0.

    Returns ``None`` when the system is inconsistent.
    """
    A = as_matrix(A)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.shape[0] != b.shape[0]:
        raise FieldError(f"{A.shape[0]} equations but right-hand side of length {b.shape[0]}")
    cols = A.shape[1]
    R, r, piv = rref(np.hstack([A, b[:, None]]), field)
    if piv and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    if r:
        x[piv] = R[:, cols]
    return x


def inverse(M, field: Field) -> np.ndarray | None:
    """Inverse by Gauss-Jordan; ``None`` when singular."""
    A = as_matrix(M)
    n = A.shape[0]
    if A.shape[1] != n:
        raise FieldError(f"cannot invert non-square {A.shape}")
    R, r, piv = rref(np.hstack([A, identity(n)]), field)
    if r < n or piv[n - 1] != n - 1:
        return None
    return R[:, n:]


def batch_rank(A, field: Field) -> np.ndarray:
    """Ranks of a stack of matrices of shape (T, R, C), eliminated together.

    Forward elimination only: each step clears the current column below the
    pivot row and touches only the columns to its right.
    """
    A = np.array(A, dtype=np.int64)
    T, R, C = A.shape
    rk = np.zeros(T, dtype=np.int64)
    rows = np.arange(R)
    ar = np.arange(T)
    for c in range(C):
        col = A[:, :, c]
        mask = (col != 0) & (rows[None, :] >= rk[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        t = ar[has]
        src = mask[t].argmax(axis=1)
        dst = rk[t]
        tail = A[t, :, c + 1 :]
        prow = tail[np.arange(t.size), src].copy()
        tail[np.arange(t.size), src] = tail[np.arange(t.size), dst]
        piv = A[t, src, c]
        f = A[t, :, c].copy()
        f[np.arange(t.size), src] = f[np.arange(t.size), dst]
        f[rows[None, :] <= dst[:, None]] = 0
        f = field.mul(f, field.inv(piv)[:, None])
        tail = field.sub(tail, field.mul(f[:, :, None], prow[:, None, :]))
        tail[np.arange(t.size), dst] = prow
        A[t, :, c + 1 :] = tail
        rk[t] += 1
        if (rk >= R).all():
            break
    return rk


def random_invertible(k: int, field: Field, rng: np.random.Generator) -> np.ndarray:
    if k < 1:
        raise FieldError("matrix size must be >= 1")
    while True:
        S = field.random(rng, (k, k))
        if rank(S, field) == k:
            return S


def permutation_matrix(perm) -> np.ndarray:
    """Matrix with a 1 at (i, perm[i]), so ``(v @ P)[perm[i]] == v[i]``."""
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.size
    P = np.zeros((n, n), dtype=np.int64)
    P[np.arange(n), perm] = 1
    return P


def random_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise FieldError("matrix size must be >= 1")
    return permutation_matrix(rng.permutation(n))


def rank_one_update_inverse(a, b, field: Field) -> np.ndarray | None:
    """Inverse of ``I + b^T a`` in closed form, or ``None`` if it is singular.

    The matrix is invertible exactly when ``<a, b> != -1``; the inverse is
    then ``I - (1 + <a, b>)^{-1} b^T a``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise FieldError("vectors must have equal length")
    denom = field.add(field.dot(a, b), 1)
    if denom == 0:
        return None
    corr = field.mul(outer(b, a, field), field.inv(denom))
    return field.sub(identity(a.size), corr)


def matrix_to_json(M) -> dict:
    A = as_matrix(M)
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "data": [int(v) for v in A.reshape(-1)]}


def matrix_from_json(obj: dict, field: Field | None = None) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), list(obj["data"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FieldError(f"malformed matrix: {exc}") from None
    if len(data) != rows * cols:
        raise FieldError(f"matrix data has {len(data)} entries, expected {rows}x{cols}")
    A = np.asarray(data, dtype=np.int64).reshape(rows, cols)
    if field is not None:
        field.check(A)
    return A
