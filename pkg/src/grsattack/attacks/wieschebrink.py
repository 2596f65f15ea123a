"""Locating the random columns of a Wieschebrink public key.

Write C' for the public code: a GRS_k code of length n with r random
coordinates inserted.  Its square has dimension 2k - 1 + r as long as that
fits, and deleting coordinate i lowers it by one exactly when i is random.
When 2k - 1 + r exceeds the length, shortening at a set I of a positions
(a0 random, a1 GRS) first brings the square down to 2(k - a1) - 1 + r - a0,
after which shortening one more GRS position costs two dimensions and one
more random position costs one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..codes import EmptyCodeError, LinearCode, puncture, shorten, square_dim
from ..grs import GrsSpec
from ..schemes import DecryptionFailure, solve_message
from .common import AttackFailure, AttackStats, UnsupportedParameters
from .filtration import recover_grs

__all__ = ["WieschebrinkCrack", "attack_wieschebrink", "wieschebrink_crack_decrypt"]


@dataclass
class WieschebrinkCrack:
    """Random positions of the public code and a GRS description of the rest."""

    random_positions: list[int]
    recovered_spec: GrsSpec

    def grs_positions(self, length: int) -> list[int]:
        rand = set(self.random_positions)
        return [j for j in range(length) if j not in rand]

    def to_json(self) -> dict:
        return {
            "scheme": "wieschebrink",
            "random_positions": [int(v) for v in self.random_positions],
            "recovered_spec": self.recovered_spec.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WieschebrinkCrack":
        return cls(sorted(int(v) for v in obj["random_positions"]), GrsSpec.from_json(obj["recovered_spec"]))


def _direct_scan(pub: LinearCode, k: int, r: int, stats: AttackStats) -> list[int] | None:
    D = square_dim(pub)
    if D != 2 * k - 1 + r:
        stats.notes.append(f"direct branch: square dimension {D}, expected {2 * k - 1 + r}")
        return None
    found = []
    for i in range(pub.n):
        d = square_dim(puncture(pub, [i]))
        stats.bump("square_dims")
        if d == D - 1:
            found.append(i)
        elif d != D:
            stats.notes.append(f"direct branch: position {i} gave dimension {d}")
            return None
    if len(found) != r:
        stats.notes.append(f"direct branch: found {len(found)} random positions, expected {r}")
        return None
    return found


def _shortened_round(pub: LinearCode, I: list[int], k: int, r: int, n: int, unknown: list[int]):
    """Classify each position in ``unknown`` (disjoint from I) as random or GRS.

    Returns (a0, a1, {position: is_random}) or None on an inconsistent reading.
    """
    a = len(I)
    try:
        Ca = shorten(pub, I)
    except EmptyCodeError:
        return None
    if Ca.k != k - a:
        return None
    D = square_dim(Ca)
    s = 2 * k - 1 + r - D  # = 2 a1 + a0
    a1 = s - a
    a0 = a - a1
    if not (0 <= a0 <= r and a1 > 2 * k - 1 - n and a1 >= 0):
        return None
    rest = [j for j in range(pub.n) if j not in set(I)]
    where = {j: t for t, j in enumerate(rest)}
    out = {}
    for j in unknown:
        try:
            d = square_dim(shorten(Ca, [where[j]]))
        except EmptyCodeError:
            return None
        drop = D - d
        if drop == 1:
            out[j] = True
        elif drop == 2:
            out[j] = False
        else:
            return None
    return a0, a1, out


def _shortening_scan(pub: LinearCode, n: int, k: int, r: int, rng, max_rounds: int, stats: AttackStats) -> list[int]:
    lower = 2 * k - 1 + r - n  # a must exceed this
    a = max(lower + 2, 1)
    if a >= k:
        a = lower + 1
    if a < 1 or a >= k:
        raise UnsupportedParameters(f"no shortening size a with {lower} < a < {k}", stats)
    N = pub.n
    label: dict[int, bool] = {}
    for _ in range(max_rounds):
        stats.bump("rounds")
        unknown = [j for j in range(N) if j not in label]
        if not unknown:
            break
        known = [j for j in range(N) if j in label]
        if len(known) >= a:
            # shorten where the labels are already known, read off the rest
            I = sorted(int(v) for v in rng.choice(known, size=a, replace=False))
        else:
            I = sorted(int(v) for v in rng.choice(N, size=a, replace=False))
            unknown = [j for j in unknown if j not in set(I)]
        got = _shortened_round(pub, I, k, r, n, unknown)
        if got is None:
            stats.bump("resamples")
            continue
        a0, a1, out = got
        # cross-check against labels already known
        if all(j in label for j in I) and sum(label[j] for j in I) != a0:
            stats.bump("resamples")
            continue
        if any(j in label and label[j] != v for j, v in out.items()):
            stats.bump("resamples")
            continue
        label.update(out)
        if sum(label.values()) > r:
            raise AttackFailure(f"more than r={r} positions classified as random", stats)
    else:
        raise AttackFailure(f"shortening scan did not finish in {max_rounds} rounds", stats)
    found = sorted(j for j, v in label.items() if v)
    if len(found) != r:
        raise AttackFailure(f"found {len(found)} random positions, expected {r}", stats)
    return found


def attack_wieschebrink(
    pub: LinearCode,
    n: int,
    k: int,
    r: int,
    rng: np.random.Generator,
    max_rounds: int = 100,
    stats: AttackStats | None = None,
) -> WieschebrinkCrack:
    """Find the r random positions, then recover the GRS structure of the rest."""
    stats = stats if stats is not None else AttackStats()
    if pub.n != n + r or pub.k != k:
        raise UnsupportedParameters(f"public code is [{pub.n}, {pub.k}], expected [{n + r}, {k}]", stats)
    with stats.phase("locate"):
        if r == 0:
            found: list[int] = []
        else:
            found = None
            if 2 * k - 1 + r <= n:
                found = _direct_scan(pub, k, r, stats)
            if found is None:
                found = _shortening_scan(pub, n, k, r, rng, max_rounds, stats)
    with stats.phase("recover"):
        spec = recover_grs(puncture(pub, found) if found else pub, stats)
    return WieschebrinkCrack(found, spec)


def wieschebrink_crack_decrypt(crack: WieschebrinkCrack, G_pub, c) -> np.ndarray:
    """Decrypt with the crack: drop random positions, decode, solve for m."""
    spec = crack.recovered_spec
    F = spec.field
    G_pub = np.asarray(G_pub, dtype=np.int64)
    c = np.asarray(c, dtype=np.int64).reshape(-1)
    keep = crack.grs_positions(G_pub.shape[1])
    res = spec.decode(c[keep])
    if res is None:
        raise DecryptionFailure("GRS decoding failed on the recovered code")
    m = solve_message(G_pub[:, keep], res.codeword, F)
    if m is None:
        raise DecryptionFailure("decoded word is not in the punctured public code")
    return m
