"""Recovering (x, y) of a GRS code from a generator matrix alone.

Positions 0 and 1 are declared to be the support points 0 and 1 (affine
maps act 2-transitively, so this loses nothing).  C(i, j) is the subcode of
polynomials divisible by x^i (x - 1)^j.  C(1,0), C(0,1), C(1,1) come from
shortening; deeper terms follow from

    C(i+1, j) = {c in C(i, j) : c * C(i-1, j) is inside C(i, j)^2}

which is a linear condition on c.  The one-dimensional ends C(k-1, 0) and
C(k-2, 1) then reveal the support, and the multipliers follow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import matgf
from ..codes import EmptyCodeError, LinearCode, dual, square, square_dim, vanishing_subcode
from ..field import Field
from ..grs import GrsSpec, grs_dual_spec
from .common import AttackStats, NotGRSError, RateTooHighError

__all__ = [
    "SubcodeChain",
    "filtration_step",
    "build_chain",
    "attack_filtration",
    "recover_grs",
    "support_from_end_words",
]


@dataclass
class SubcodeChain:
    """C(i, j) for the indices computed so far; C(0, 0) is the base code."""

    field: Field
    base: LinearCode
    codes: dict[tuple[int, int], LinearCode] = field(default_factory=dict)

    def __post_init__(self):
        self.codes.setdefault((0, 0), self.base)

    def __getitem__(self, ij: tuple[int, int]) -> LinearCode:
        return self.codes[ij]

    def __contains__(self, ij) -> bool:
        return ij in self.codes


def filtration_step(C_ij: LinearCode, C_prev: LinearCode) -> LinearCode:
    """Next term of the chain from C(i, j) and C(i-1, j) (or C(i, j-1)).

    Unknown c = mu . B (B a basis of C(i, j)) must satisfy <c * h, w> = 0 for
    every h in C(i-1, j) and w in the dual of C(i, j)^2, i.e.
    sum_t mu_t <B_t, h * w> = 0.
    """
    F = C_ij.field
    d = C_ij.k
    if d < 2:
        raise NotGRSError(f"cannot descend below a {d}-dimensional subcode")
    W = square(C_ij).parity_check()
    if W.shape[0] == 0:
        raise NotGRSError("square of a subcode fills the whole space")
    HW = F.mul(C_prev.gen[:, None, :], W[None, :, :]).reshape(-1, C_ij.n)
    HW = matgf.rref(HW, F)[0]
    E = matgf.matmul(HW, C_ij.gen.T, F)
    ker = matgf.nullspace(E, F)
    if ker.shape[0] != d - 1:
        raise NotGRSError(f"filtration system has a {ker.shape[0]}-dimensional solution space, expected {d - 1}")
    return LinearCode(F, matgf.matmul(ker, C_ij.gen, F), C_ij.n)


def build_chain(C: LinearCode, stats: AttackStats | None = None) -> SubcodeChain:
    """C(i, 0) for i < k and C(i, 1) for i < k - 1."""
    k = C.k
    chain = SubcodeChain(C.field, C)
    try:
        chain.codes[(1, 0)] = vanishing_subcode(C, [0])
        chain.codes[(0, 1)] = vanishing_subcode(C, [1])
        if k >= 3:
            chain.codes[(1, 1)] = vanishing_subcode(C, [0, 1])
    except EmptyCodeError as exc:
        raise NotGRSError(f"shortening collapsed: {exc}") from None
    for ij, want in (((1, 0), k - 1), ((0, 1), k - 1), ((1, 1), k - 2)):
        if ij in chain and chain[ij].k != want:
            raise NotGRSError(f"C{ij} has dimension {chain[ij].k}, expected {want}")
    for j in (0, 1):
        for i in range(1, k - 1 - j):
            chain.codes[(i + 1, j)] = filtration_step(chain[(i, j)], chain[(i - 1, j)])
            if stats is not None:
                stats.bump("filtration_steps")
    return chain


def _nonzero_not_in(values: set[int], F: Field) -> int | None:
    if 1 not in values:
        return 1
    for v in range(2, F.q):
        if v not in values:
            return v
    return None


def support_from_end_words(c, c1, F: Field) -> np.ndarray:
    """Support from c ~ x^(k-1) and c1 ~ x^(k-2) (x - 1), both times the multipliers.

    On positions >= 2 the quotient c1 / c evaluates nu (x - 1) / x.  Any
    nonzero nu outside the set of quotients yields a valid support (other
    choices differ by a Moebius map fixing 0 and 1); nu = 1 is preferred.
    """
    c = np.asarray(c, dtype=np.int64)
    c1 = np.asarray(c1, dtype=np.int64)
    n = c.size
    rest = np.arange(2, n)
    if np.any(c[rest] == 0) or np.any(c1[rest] == 0):
        raise NotGRSError("end-of-chain codewords vanish outside the first two positions")
    v = F.mul(c1[rest], F.inv(c[rest]))
    if np.unique(v).size != v.size or np.any(v == 0):
        raise NotGRSError("support readings collide")
    nu = _nonzero_not_in(set(int(t) for t in v), F)
    if nu is None:
        raise NotGRSError("no admissible normalization constant")
    a = np.zeros(n, dtype=np.int64)
    a[1] = 1
    a[rest] = F.mul(nu, F.inv(F.sub(nu, v)))
    if np.unique(a).size != n:
        raise NotGRSError("recovered support is not injective")
    return a


def attack_filtration(C: LinearCode, stats: AttackStats | None = None) -> GrsSpec:
    """GrsSpec with GRS(spec) == C, for a GRS code of dimension k <= n/2.

    Raises ``RateTooHighError`` if k > n/2 and ``NotGRSError`` whenever a
    dimension or support reading is inconsistent with C being GRS.
    """
    F, n, k = C.field, C.n, C.k
    if 2 * k > n:
        raise RateTooHighError(f"k={k} > n/2 with n={n}; attack the dual code")
    if n > F.q:
        raise NotGRSError(f"length {n} exceeds the field size {F.q}")
    if k == 1:
        g = C.gen[0]
        if np.any(g == 0):
            raise NotGRSError("a one-dimensional GRS code has a full-weight generator")
        return GrsSpec(F, 1, np.arange(n, dtype=np.int64), g)
    if square_dim(C, limit=2 * k - 1) != 2 * k - 1:
        raise NotGRSError("square code dimension differs from 2k - 1")

    chain = build_chain(C, stats)
    c = chain[(k - 1, 0)].gen[0]
    a = support_from_end_words(c, chain[(k - 2, 1)].gen[0], F)

    # c is the evaluation of x^(k-1) times the multipliers
    b = np.zeros(n, dtype=np.int64)
    b[1:] = F.mul(c[1:], F.inv(F.pow(a[1:], k - 1)))
    # position 0 (support point 0): interpolate a codeword that is nonzero there
    pts = np.arange(1, k + 1)
    V = np.stack([F.pow(a[pts], j) for j in range(k)], axis=1)
    for g in C.gen:
        if g[0] == 0:
            continue
        coeffs = matgf.solve(V, F.mul(g[pts], F.inv(b[pts])), F)
        if coeffs is None or coeffs[0] == 0:
            continue
        b[0] = F.div(int(g[0]), int(coeffs[0]))
        break
    else:
        raise NotGRSError("no codeword determines the first multiplier")

    spec = GrsSpec(F, k, a, b)
    if spec.code() != C:
        raise NotGRSError("recovered GRS description does not reproduce the code")
    return spec


def recover_grs(C: LinearCode, stats: AttackStats | None = None) -> GrsSpec:
    """Filtration on C, or on its dual when the rate exceeds 1/2."""
    if 2 * C.k <= C.n:
        return attack_filtration(C, stats)
    if C.k == C.n:
        F = C.field
        if C.n > F.q:
            raise NotGRSError(f"length {C.n} exceeds the field size {F.q}")
        return GrsSpec(F, C.n, np.arange(C.n, dtype=np.int64), np.ones(C.n, dtype=np.int64))
    spec = grs_dual_spec(attack_filtration(dual(C), stats))
    if spec.code() != C:
        raise NotGRSError("dual description does not reproduce the code")
    return spec
