"""Linear codes over F_q stored by their canonical (RREF) generator matrix.

The zero code is never a ``LinearCode``: operations whose result may be
``{0}`` either return ``None`` (queries such as ``intersect``) or raise
``EmptyCodeError`` (constructions such as ``shorten``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import matgf
from .field import Field, FieldError

__all__ = [
    "CodeError",
    "EmptyCodeError",
    "LinearCode",
    "cw_product",
    "inner_product",
    "hamming_weight",
    "span",
    "random_code",
    "star_product",
    "square",
    "square_dim",
    "dual",
    "shorten",
    "vanishing_subcode",
    "puncture",
    "restrict",
    "code_sum",
    "intersect",
    "contains",
    "code_equal",
    "SquareReport",
    "square_dim_report",
]


class CodeError(FieldError):
    pass


class EmptyCodeError(CodeError):
    """Raised when a construction would produce the zero code."""


class LinearCode:
    """A nonzero linear code, kept as its unique RREF generator matrix."""

    __slots__ = ("field", "n", "gen", "pivots")

    def __init__(self, field: Field, gen, n: int | None = None):
        G = np.asarray(gen, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(1, -1)
        if n is None:
            n = G.shape[1]
        if G.shape[1] != n:
            raise CodeError(f"generator has {G.shape[1]} columns, expected {n}")
        if n < 1:
            raise CodeError("code length must be >= 1")
        field.check(G)
        R, r, piv = matgf.rref(G, field)
        if r == 0:
            raise EmptyCodeError("generator spans the zero code")
        R.setflags(write=False)
        self.field = field
        self.n = int(n)
        self.gen = R
        self.pivots = tuple(piv)

    @property
    def k(self) -> int:
        return self.gen.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return self.field == other.field and self.n == other.n and np.array_equal(self.gen, other.gen)

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.gen.tobytes()))

    def __repr__(self) -> str:
        return f"LinearCode([{self.n}, {self.k}] over {self.field!r})"

    def encode(self, msg) -> np.ndarray:
        return matgf.matmul(np.asarray(msg, dtype=np.int64), self.gen, self.field)

    def random_word(self, rng: np.random.Generator) -> np.ndarray:
        return self.encode(self.field.random(rng, self.k))

    def parity_check(self) -> np.ndarray:
        """Generator of the dual as an RREF matrix (possibly with zero rows if k == n)."""
        return matgf.nullspace(self.gen, self.field)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "n": self.n, "gen": matgf.matrix_to_json(self.gen)}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        try:
            field = Field.from_json(obj["field"])
            n = int(obj["n"])
            gen = matgf.matrix_from_json(obj["gen"], field)
        except (KeyError, TypeError, ValueError) as exc:
            raise CodeError(f"malformed code: {exc}") from None
        return cls(field, gen, n)


def _same_space(A: LinearCode, B: LinearCode) -> None:
    if A.field != B.field:
        raise CodeError(f"field mismatch: {A.field!r} vs {B.field!r}")
    if A.n != B.n:
        raise CodeError(f"length mismatch: {A.n} vs {B.n}")


def _vec_pair(a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise CodeError(f"length mismatch: {a.shape} vs {b.shape}")
    return a, b


def cw_product(a, b, field: Field) -> np.ndarray:
    a, b = _vec_pair(a, b)
    return field.mul(a, b)


def inner_product(a, b, field: Field) -> int:
    a, b = _vec_pair(a, b)
    return field.dot(a, b)


def hamming_weight(v) -> int:
    return int(np.count_nonzero(v))


def span(field: Field, rows, n: int) -> LinearCode | None:
    """Code spanned by ``rows``; ``None`` if they span {0}."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    if not rows.any():
        return None
    return LinearCode(field, rows, n)


def random_code(field: Field, n: int, k: int, rng: np.random.Generator) -> LinearCode:
    """Uniform random code of dimension exactly k (rejection on rank)."""
    if not 1 <= k <= n:
        raise CodeError(f"need 1 <= k <= n, got k={k}, n={n}")
    while True:
        C = LinearCode(field, field.random(rng, (k, n)), n)
        if C.k == k:
            return C


def star_product(A: LinearCode, B: LinearCode) -> LinearCode:
    _same_space(A, B)
    if A == B:
        return square(A)
    F = A.field
    rows = F.mul(A.gen[:, None, :], B.gen[None, :, :]).reshape(-1, A.n)
    return LinearCode(F, rows, A.n)


def _square_rows(C: LinearCode) -> np.ndarray:
    i, j = np.triu_indices(C.k)
    return C.field.mul(C.gen[i], C.gen[j])


def square(C: LinearCode) -> LinearCode:
    """The square code, from the k(k+1)/2 unordered products of generator rows."""
    return LinearCode(C.field, _square_rows(C), C.n)


def square_dim(C: LinearCode, limit: int | None = None) -> int:
    """dim of the square code without building it; ``limit`` allows early exit."""
    return matgf.rank(_square_rows(C), C.field, limit)


def dual(C: LinearCode) -> LinearCode:
    if C.k == C.n:
        raise EmptyCodeError("the dual of the full space is the zero code")
    return LinearCode(C.field, C.parity_check(), C.n)


def _positions(I: Iterable[int], n: int) -> list[int]:
    idx = sorted({int(i) for i in I})
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise CodeError(f"positions out of range for length {n}: {idx}")
    return idx


def vanishing_subcode(C: LinearCode, I: Iterable[int]) -> LinearCode:
    """Codewords of C that are zero on I, keeping the full length n."""
    idx = _positions(I, C.n)
    if not idx:
        return C
    rest = [j for j in range(C.n) if j not in set(idx)]
    order = idx + rest
    R, r, piv = matgf.rref(C.gen[:, order], C.field)
    keep = [t for t, p in enumerate(piv) if p >= len(idx)]
    if not keep:
        raise EmptyCodeError(f"no nonzero codeword vanishes on {len(idx)} positions")
    out = np.zeros((len(keep), C.n), dtype=np.int64)
    out[:, order] = R[keep]
    return LinearCode(C.field, out, C.n)


def shorten(C: LinearCode, I: Iterable[int]) -> LinearCode:
    """Codewords vanishing on I, with the I coordinates deleted."""
    idx = _positions(I, C.n)
    if not idx:
        return C
    if len(idx) == C.n:
        raise EmptyCodeError("shortening at every position")
    return puncture(vanishing_subcode(C, idx), idx)


def puncture(C: LinearCode, I: Iterable[int]) -> LinearCode:
    """Delete the coordinates in I."""
    idx = set(_positions(I, C.n))
    return restrict(C, [j for j in range(C.n) if j not in idx])


def restrict(C: LinearCode, I: Iterable[int]) -> LinearCode:
    """Keep only the coordinates in I (in increasing order)."""
    idx = _positions(I, C.n)
    if not idx:
        raise EmptyCodeError("restriction to an empty support")
    if len(idx) == C.n:
        return C
    return LinearCode(C.field, C.gen[:, idx], len(idx))


def code_sum(A: LinearCode, B: LinearCode) -> LinearCode:
    _same_space(A, B)
    return LinearCode(A.field, np.vstack([A.gen, B.gen]), A.n)


def intersect(A: LinearCode, B: LinearCode) -> LinearCode | None:
    """Intersection by stacking parity checks; ``None`` for the zero code."""
    _same_space(A, B)
    H = np.vstack([A.parity_check(), B.parity_check()])
    if H.shape[0] == 0:
        return A
    N = matgf.nullspace(H, A.field)
    if N.shape[0] == 0:
        return None
    return LinearCode(A.field, N, A.n)


def contains(C: LinearCode, v) -> bool:
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if v.size != C.n:
        raise CodeError(f"vector of length {v.size} vs code length {C.n}")
    if not v.any():
        return True
    # reduce v against the RREF basis; membership iff the residue vanishes
    res = C.field.sub(v, matgf.matmul(v[list(C.pivots)], C.gen, C.field))
    return not res.any()


def code_equal(A: LinearCode, B: LinearCode) -> bool:
    return A == B


@dataclass(frozen=True)
class SquareReport:
    k: int
    n: int
    dim_sq: int
    dim_dual_sq: int | None
    grs_like: bool

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "dim_sq": self.dim_sq,
            "dim_dual_sq": self.dim_dual_sq,
            "grs_like": self.grs_like,
        }


def square_dim_report(C: LinearCode) -> SquareReport:
    """Square-code dimensions of C and its dual, and whether they look GRS.

    A GRS code of dimension k has a square of dimension 2k - 1 (while that is
    at most n); for high rates the dual's square, of dimension 2(n - k) - 1,
    carries the signal instead.
    """
    k, n = C.k, C.n
    d_sq = square_dim(C)
    d_dual = square_dim(dual(C)) if k < n else None
    if 2 * k - 1 <= n:
        grs_like = d_sq == 2 * k - 1
    else:
        grs_like = d_dual is not None and d_dual == 2 * (n - k) - 1
    return SquareReport(k, n, d_sq, d_dual, grs_like)
