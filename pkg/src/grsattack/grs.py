"""Generalized Reed-Solomon codes: generator, encoder, Berlekamp-Welch decoder, dual."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matgf
from .codes import CodeError, LinearCode
from .field import Field

__all__ = [
    "GrsSpec",
    "DecodeResult",
    "vandermonde",
    "poly_eval",
    "poly_divmod",
    "grs_generator",
    "grs_encode",
    "grs_decode",
    "grs_dual_spec",
    "grs_square_spec",
    "grs_shorten_spec",
    "random_grs_spec",
]


@dataclass(frozen=True, eq=False)
class GrsSpec:
    """GRS_k(x, y): words (y_1 p(x_1), ..., y_n p(x_n)) with deg p < k."""

    field: Field
    k: int
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        F = self.field
        x = F.check(np.asarray(self.x, dtype=np.int64).reshape(-1))
        y = F.check(np.asarray(self.y, dtype=np.int64).reshape(-1))
        n = x.size
        if y.size != n:
            raise CodeError(f"x has {n} entries but y has {y.size}")
        if not 1 <= self.k <= n:
            raise CodeError(f"need 1 <= k <= n, got k={self.k}, n={n}")
        if n > F.q:
            raise CodeError(f"length {n} exceeds field order {F.q}")
        if np.unique(x).size != n:
            raise CodeError("support elements must be pairwise distinct")
        if np.any(y == 0):
            raise CodeError("multipliers must be nonzero")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "k", int(self.k))

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def t(self) -> int:
        """Number of errors the decoder corrects."""
        return (self.n - self.k) // 2

    def generator(self) -> np.ndarray:
        return grs_generator(self)

    def code(self) -> LinearCode:
        return LinearCode(self.field, grs_generator(self), self.n)

    def encode(self, msg) -> np.ndarray:
        return grs_encode(self, msg)

    def decode(self, received) -> "DecodeResult | None":
        return grs_decode(self, received)

    def dual(self) -> "GrsSpec":
        return grs_dual_spec(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrsSpec):
            return NotImplemented
        return (
            self.field == other.field
            and self.k == other.k
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.k, self.x.tobytes(), self.y.tobytes()))

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "k": self.k,
            "x": [int(v) for v in self.x],
            "y": [int(v) for v in self.y],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GrsSpec":
        try:
            field = Field.from_json(obj["field"])
            return cls(field, int(obj["k"]), np.asarray(obj["x"], dtype=np.int64), np.asarray(obj["y"], dtype=np.int64))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CodeError):
                raise
            raise CodeError(f"malformed GRS spec: {exc}") from None


@dataclass(frozen=True)
class DecodeResult:
    codeword: np.ndarray
    msg: np.ndarray
    errors: int


def vandermonde(x, d: int, field: Field) -> np.ndarray:
    """n x d matrix with entries x_i^j, j = 0..d-1."""
    x = np.asarray(x, dtype=np.int64)
    V = np.empty((x.size, d), dtype=np.int64)
    if d == 0:
        return V
    V[:, 0] = 1
    for j in range(1, d):
        V[:, j] = field.mul(V[:, j - 1], x)
    return V


def poly_eval(coeffs, x, field: Field):
    """Horner evaluation; coefficients in increasing degree."""
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros_like(x)
    for c in reversed(list(np.asarray(coeffs, dtype=np.int64))):
        acc = field.add(field.mul(acc, x), int(c))
    return acc


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def poly_divmod(num, den, field: Field) -> tuple[np.ndarray, np.ndarray]:
    num = _trim(np.asarray(num, dtype=np.int64).copy())
    den = _trim(np.asarray(den, dtype=np.int64))
    if den.size == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if num.size < den.size:
        return np.zeros(1, dtype=np.int64), num
    lead_inv = field.inv(int(den[-1]))
    quo = np.zeros(num.size - den.size + 1, dtype=np.int64)
    for s in range(quo.size - 1, -1, -1):
        c = field.mul(int(num[s + den.size - 1]), lead_inv)
        quo[s] = c
        if c:
            num[s : s + den.size] = field.sub(num[s : s + den.size], field.mul(den, c))
    return quo, _trim(num)


def grs_generator(spec: GrsSpec) -> np.ndarray:
    """Row j is (y_1 x_1^j, ..., y_n x_n^j)."""
    F = spec.field
    return F.mul(vandermonde(spec.x, spec.k, F).T, spec.y[None, :])


def grs_encode(spec: GrsSpec, msg) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.int64).reshape(-1)
    if msg.size != spec.k:
        raise CodeError(f"message of length {msg.size}, expected {spec.k}")
    F = spec.field
    return F.mul(spec.y, poly_eval(msg, spec.x, F))


def grs_decode(spec: GrsSpec, received, t: int | None = None) -> DecodeResult | None:
    """Berlekamp-Welch decoding up to t = floor((n-k)/2) errors.

    Returns ``None`` when no codeword lies within distance t.
    """
    F = spec.field
    r = np.asarray(received, dtype=np.int64).reshape(-1)
    n, k = spec.n, spec.k
    if r.size != n:
        raise CodeError(f"received word of length {r.size}, expected {n}")
    F.check(r)
    if t is None:
        t = spec.t
    t = max(0, min(int(t), (n - k) // 2))
    rr = F.mul(r, F.inv(spec.y))
    # E(x_i) rr_i = N(x_i) with E monic of degree t and deg N < t + k
    V = vandermonde(spec.x, t + k, F)
    A = np.hstack([F.mul(V[:, :t], rr[:, None]), F.neg(V)])
    rhs = F.neg(F.mul(F.pow(spec.x, t), rr))
    sol = matgf.solve(A, rhs, F)
    if sol is None:
        return None
    E = np.append(sol[:t], 1)
    N = sol[t:]
    msg, rem = poly_divmod(N, E, F)
    if rem.size or _trim(msg).size > k:
        return None
    msg = np.concatenate([msg, np.zeros(max(0, k - msg.size), dtype=np.int64)])[:k]
    cw = grs_encode(spec, msg)
    errs = int(np.count_nonzero(cw != r))
    if errs > t:
        return None
    return DecodeResult(cw, msg, errs)


def grs_dual_spec(spec: GrsSpec) -> GrsSpec:
    """GRS_{n-k}(x, y') with y'_i = (y_i prod_{j != i} (x_i - x_j))^{-1}."""
    F = spec.field
    n = spec.n
    if spec.k >= n:
        raise CodeError("dual of the full space is the zero code")
    diff = F.sub(spec.x[:, None], spec.x[None, :])
    diff[np.arange(n), np.arange(n)] = 1
    prod = np.ones(n, dtype=np.int64)
    for j in range(n):
        prod = F.mul(prod, diff[:, j])
    return GrsSpec(F, n - spec.k, spec.x, F.inv(F.mul(spec.y, prod)))


def grs_square_spec(spec: GrsSpec) -> GrsSpec:
    """GRS_{2k-1}(x, y*y), the square of GRS_k(x, y) when 2k - 1 <= n."""
    F = spec.field
    return GrsSpec(F, min(2 * spec.k - 1, spec.n), spec.x, F.mul(spec.y, spec.y))


def grs_shorten_spec(spec: GrsSpec, I) -> GrsSpec:
    """Spec of the code shortened at positions I: divide out prod (X - x_s)."""
    F = spec.field
    idx = sorted({int(i) for i in I})
    if len(idx) >= spec.k:
        raise CodeError("shortening at k or more positions leaves the zero code")
    keep = np.array([j for j in range(spec.n) if j not in set(idx)], dtype=np.int64)
    x = spec.x[keep]
    y = spec.y[keep].copy()
    for s in idx:
        y = F.mul(y, F.sub(x, int(spec.x[s])))
    return GrsSpec(F, spec.k - len(idx), x, y)


def random_grs_spec(field: Field, n: int, k: int, rng: np.random.Generator, nonzero_support: bool = False) -> GrsSpec:
    pool = np.arange(1 if nonzero_support else 0, field.q, dtype=np.int64)
    if n > pool.size:
        raise CodeError(f"length {n} exceeds the {pool.size} available support points")
    x = rng.choice(pool, size=n, replace=False)
    y = field.random_nonzero(rng, n)
    return GrsSpec(field, k, x, y)
