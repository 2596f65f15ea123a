"""Recovering the secret set L of a Bogdanov-Lee public key.

Off L the public code looks like GRS_k(x, x).  Restricted to a set I that
meets L in J, with |J| <= ell - 1 and |I| - |J| >= 2k, its square has
dimension exactly 2k - 1 + |J|.  Dropping one element of I therefore lowers
that dimension iff the element lies in L, and swapping a non-L element of I
for an outside one raises it iff the newcomer lies in L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..codes import LinearCode, restrict, square_dim
from ..schemes import DecryptionFailure, bl_decryption_vector
from .common import AttackFailure, AttackStats, UnsupportedParameters

__all__ = ["BlCrack", "attack_bl", "bl_crack_decrypt"]


@dataclass
class BlCrack:
    L: list[int]

    def to_json(self) -> dict:
        return {"scheme": "bl", "L": [int(v) for v in self.L]}

    @classmethod
    def from_json(cls, obj: dict) -> "BlCrack":
        return cls(sorted(int(v) for v in obj["L"]))


def _k_sq(pub: LinearCode, I) -> int | None:
    """dim of the square of pub restricted to I, or None if the restriction loses rank."""
    C = restrict(pub, sorted(I))
    if C.k != pub.k:
        return None
    return square_dim(C)


def _one_sample(pub: LinearCode, ell: int, rng, stats: AttackStats) -> list[int] | None:
    n, k = pub.n, pub.k
    size = 2 * k + ell - 1
    I = sorted(int(v) for v in rng.choice(n, size=size, replace=False))
    kI = _k_sq(pub, I)
    if kI is None:
        return None
    j = kI - (2 * k - 1)
    # leave room for one more element of L during the swap scan
    if not 0 <= j <= ell - 2:
        return None
    J = []
    for x in I:
        d = _k_sq(pub, [v for v in I if v != x])
        stats.bump("square_dims")
        if d == kI - 1:
            J.append(x)
        elif d != kI:
            return None
    if len(J) != j:
        return None
    x0 = next(v for v in I if v not in set(J))
    base = [v for v in I if v != x0]
    L = list(J)
    for y in range(n):
        if y in set(I):
            continue
        d = _k_sq(pub, base + [y])
        stats.bump("square_dims")
        if d == kI + 1:
            L.append(y)
        elif d != kI:
            return None
    return sorted(L)


def attack_bl(
    pub: LinearCode, ell: int, rng: np.random.Generator, max_samples: int = 100, stats: AttackStats | None = None
) -> BlCrack:
    """Sample I of size 2k + ell - 1, read |I n L| off the square, then scan."""
    stats = stats if stats is not None else AttackStats()
    n, k = pub.n, pub.k
    if ell < 2 or 2 * k + ell - 1 > n:
        raise UnsupportedParameters(f"need ell >= 2 and 2k + ell - 1 <= n; got n={n}, k={k}, ell={ell}", stats)
    F = pub.field
    with stats.phase("scan"):
        for _ in range(max_samples):
            stats.bump("samples")
            L = _one_sample(pub, ell, rng, stats)
            if L is None or len(L) != 3 * ell:
                stats.bump("resamples")
                continue
            try:
                bl_decryption_vector(pub.gen, L, F)
            except DecryptionFailure:
                stats.bump("resamples")
                continue
            return BlCrack(L)
    raise AttackFailure(f"no consistent L after {max_samples} samples", stats)


def bl_crack_decrypt(crack: BlCrack, P, c, field) -> int:
    """<y, c> for a solution y of the decryption system built from the public matrix."""
    y = bl_decryption_vector(P, crack.L, field)
    return field.dot(y, np.asarray(c, dtype=np.int64))
