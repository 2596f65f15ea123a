"""Key recovery for BBCRS (Q = Pi + rank one) public keys.

The public code is C_pub = {p + <p, lam> a : p in C} with C a hidden GRS
code, so it shares the codimension-one subcode C_lam = C n lam^perp with C.
Three words z1, z2, z3 drawn from C_lam make span{z_i * g_j} (g_j a basis
of C_pub) collapse to dimension <= 2k + 2, which a random triple does not
do when 2k + 2 < n.  Such triples are found by sampling; C_lam then yields
the support via its square and the multipliers via a linear system, and any
pair (a0, lam0) that maps C onto C_pub decrypts like the secret key.
High-rate keys are attacked through the dual, which has the same shape.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import matgf
from ..codes import LinearCode, contains, dual, square, square_dim, square_dim_report
from ..field import Field
from ..grs import GrsSpec, grs_dual_spec, vandermonde
from ..schemes import DecryptionFailure, pick_candidate, solve_message
from .common import AttackFailure, AttackStats, NotGRSError, UnsupportedParameters
from .filtration import recover_grs

__all__ = [
    "BbcrsCrack",
    "attack_bbcrs",
    "bbcrs_crack_decrypt",
    "find_lambda_perp",
    "recover_hidden_code",
    "valid_pair",
    "apply_pair",
    "relation_rank_check",
    "bbcrs_supported",
]

BATCH = 256


@dataclass
class BbcrsCrack:
    """A GRS code C and a valid pair: p -> p + <lam0, p> a0 maps C onto C_pub."""

    C_spec: GrsSpec
    a0: np.ndarray
    lam0: np.ndarray
    dual_path: bool = False

    def to_json(self) -> dict:
        return {
            "scheme": "bbcrs",
            "C_spec": self.C_spec.to_json(),
            "a0": [int(v) for v in self.a0],
            "lam0": [int(v) for v in self.lam0],
            "dual_path": bool(self.dual_path),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BbcrsCrack":
        spec = GrsSpec.from_json(obj["C_spec"])
        F = spec.field
        a0 = F.check(np.asarray(obj["a0"], dtype=np.int64))
        lam0 = F.check(np.asarray(obj["lam0"], dtype=np.int64))
        return cls(spec, a0, lam0, bool(obj.get("dual_path", False)))


def apply_pair(P, a0, lam0, field: Field) -> np.ndarray:
    """Rows p -> p + <lam0, p> a0."""
    P = np.atleast_2d(np.asarray(P, dtype=np.int64))
    s = matgf.matmul(P, np.asarray(lam0, dtype=np.int64)[:, None], field)
    return field.add(P, field.mul(s, np.asarray(a0, dtype=np.int64)[None, :]))


def bbcrs_supported(n: int, k: int) -> str | None:
    """'primary', 'dual' or None when k sits in the window around n/2 (or is too small)."""
    if 2 * k + 2 < n and k >= 6:
        return "primary"
    if 2 * (n - k) + 2 < n and n - k >= 6:
        return "dual"
    return None


def relation_rank_check(z1, z2, z3, pub: LinearCode) -> int:
    """Rank of the 3 x 3k matrix of the relations z_i * z_j - z_j * z_i = 0.

    With z_i = sum_j a_ij g_j, the relations read, in the basis z_i * g_j,
    (a_2, -a_1, 0), (a_3, 0, -a_1) and (0, a_3, -a_2).
    """
    F = pub.field
    A = []
    for z in (z1, z2, z3):
        a = solve_message(pub.gen, z, F)
        if a is None:
            raise ValueError("z is not a codeword of the public code")
        A.append(a)
    a1, a2, a3 = A
    zero = np.zeros_like(a1)
    M = np.vstack(
        [
            np.concatenate([a2, F.neg(a1), zero]),
            np.concatenate([a3, zero, F.neg(a1)]),
            np.concatenate([zero, a3, F.neg(a2)]),
        ]
    )
    return matgf.rank(M, F)


def _batch_rng(*key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(list(key)))


def _products(Z: np.ndarray, G: np.ndarray, F: Field) -> np.ndarray:
    """Stack of z * g_j for each word z of Z (shape (..., n)) -> (..., k, n)."""
    return F.mul(Z[..., None, :], G)


def _triple_batch(G: np.ndarray, F: Field, key: tuple, size: int) -> tuple[np.ndarray, np.ndarray]:
    """(words of shape (size, 3, n), indices of triples passing the test)."""
    k, n = G.shape
    rng = _batch_rng(*key)
    msgs = F.random(rng, (size, 3, k))
    Z = matgf.matmul(msgs.reshape(-1, k), G, F).reshape(size, 3, n)
    prod = _products(Z, G, F).reshape(size, 3 * k, n)
    hit = np.flatnonzero(matgf.batch_rank(prod, F) <= 2 * k + 2)
    if hit.size:
        hit = hit[matgf.batch_rank(msgs[hit], F) == 3]
    return Z, hit


def _reduced(rows: np.ndarray, F: Field) -> np.ndarray:
    R, r, _ = matgf.rref(rows, F)
    return R[:r]


def _pair_test(fixed: np.ndarray, prod: np.ndarray, k: int, F: Field) -> np.ndarray:
    """dim(span(fixed rows) + span(prod[t])) <= 2k + 2 for each t."""
    T = prod.shape[0]
    stack = np.concatenate([np.broadcast_to(fixed, (T,) + fixed.shape), prod], axis=1)
    return matgf.batch_rank(stack, F) <= 2 * k + 2


def _grow(triple, G, F, key, cap_left, patience):
    """Extend a triple to k - 1 independent words passing the test.

    A candidate z must pass with every pair of the triple, not only (z1, z2):
    words of C_lam pass all three, while at small n - (2k + 2) a random word
    slips through one test far more often than through three.  Returns
    (basis or None, candidates used).
    """
    k, n = G.shape
    basis = [triple[0], triple[1], triple[2]]
    fixed = [_reduced(_products(triple[list(pr)], G, F).reshape(-1, n), F) for pr in ((0, 1), (0, 2), (1, 2))]
    size = int(min(256, max(32, 4 * F.q)))
    used = 0
    idle = 0
    gi = 0
    while len(basis) < k - 1:
        if used >= cap_left or idle >= patience:
            return None, used
        rng = _batch_rng(*key, gi)
        gi += 1
        Z = matgf.matmul(F.random(rng, (size, k)), G, F)
        prod = _products(Z, G, F)
        ok = _pair_test(fixed[0], prod, k, F)
        for R in fixed[1:]:
            idx = np.flatnonzero(ok)
            if idx.size:
                ok[idx] = _pair_test(R, prod[idx], k, F)
        for t in range(size):
            used += 1
            idle += 1
            if ok[t] and matgf.rank(np.vstack(basis + [Z[t]]), F) == len(basis) + 1:
                basis.append(Z[t])
                idle = 0
                if len(basis) == k - 1:
                    break
    return np.vstack(basis), used


def _run_batches(fn, keys, jobs: int):
    """Evaluate fn over keys lazily and in order, ``jobs`` at a time."""
    if jobs <= 1:
        for key in keys:
            yield fn(key)
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        while True:
            chunk = [key for _, key in zip(range(jobs), keys)]
            if not chunk:
                return
            yield from pool.map(fn, chunk)


def find_lambda_perp(
    pub: LinearCode,
    rng: np.random.Generator,
    trial_cap: int | None = None,
    jobs: int = 1,
    stats: AttackStats | None = None,
) -> LinearCode:
    """A basis of the codimension-one subcode C_lam (triple search, growth and checks).

    Triples are drawn in batches, each from its own seed derived from one
    draw of ``rng``, and scanned in order, so the result does not depend on
    ``jobs``.  Every passing triple is grown to k - 1 words; the candidate
    subcode is kept only if its square has dimension 2k - 1, otherwise the
    scan resumes after that triple.  ``trial_cap`` (default 50 q^3) bounds
    triples plus growth candidates.
    """
    stats = stats if stats is not None else AttackStats()
    F = pub.field
    G = pub.gen
    k, n = G.shape
    if k < 4:
        raise UnsupportedParameters(f"need k >= 4 to sample triples from a subcode of dimension k - 1, got k={k}", stats)
    cap = trial_cap if trial_cap is not None else 50 * F.q**3
    base = int(rng.integers(0, 2**63))
    patience = 8 * F.q
    used = 0
    pos = 0  # triples drawn so far
    keys = ((base, 0, b) for b in range(1 << 62))
    for b, (Z, hits) in enumerate(_run_batches(lambda key: _triple_batch(G, F, key, BATCH), keys, jobs)):
        for h in hits:
            h = int(h)
            if used + (b * BATCH + h + 1 - pos) > cap:
                break
            used += b * BATCH + h + 1 - pos
            pos = b * BATCH + h + 1
            stats.bump("triples_passed")
            basis, g_used = _grow(Z[h], G, F, (base, 1, b, h), cap - used, patience)
            used += g_used
            stats.bump("grow_trials", g_used)
            if basis is None:
                continue
            Lcode = LinearCode(F, basis, n)
            if Lcode.k == k - 1 and square_dim(Lcode, limit=2 * k) == 2 * k - 1:
                stats.counters["triple_trials"] = pos
                return Lcode
            stats.bump("rejected_subcodes")
        used += (b + 1) * BATCH - pos
        pos = (b + 1) * BATCH
        if used >= cap:
            stats.counters["triple_trials"] = pos
            raise AttackFailure(f"trial cap {cap} exhausted", stats)
    raise AssertionError("unreachable")


def recover_hidden_code(Lcode: LinearCode, k: int, rng: np.random.Generator, stats: AttackStats | None = None) -> GrsSpec:
    """A GRS_k code containing the (k-1)-dimensional subcode Lcode.

    The support comes from the square of Lcode; the multipliers y follow
    from c * y^{-1} lying in the Reed-Solomon code RS_k(x) for every c in
    Lcode, a linear system in w = y^{-1}.
    """
    F = Lcode.field
    n = Lcode.n
    sq = recover_grs(square(Lcode), stats)
    x = sq.x
    H = LinearCode(F, vandermonde(x, k, F).T, n).parity_check()
    M = F.mul(H[:, None, :], Lcode.gen[None, :, :]).reshape(-1, n)
    W = matgf.nullspace(M, F)
    if W.shape[0] == 0:
        raise NotGRSError("no multipliers make the subcode polynomial")
    cands = list(W)
    for _ in range(50):
        cands.append(matgf.matmul(F.random(rng, W.shape[0]), W, F))
    for w in cands:
        if np.all(w != 0):
            spec = GrsSpec(F, k, x, F.inv(w))
            C = spec.code()
            if all(contains(C, g) for g in Lcode.gen):
                return spec
    raise NotGRSError("no multiplier vector with all entries nonzero")


def valid_pair(C: LinearCode, Lcode: LinearCode, pub: LinearCode, rng: np.random.Generator, tries: int = 100):
    """(a0, lam0) with p -> p + <lam0, p> a0 mapping C onto pub; both contain Lcode."""
    F = C.field
    u = next((g for g in C.gen if not contains(Lcode, g)), None)
    v = next((g for g in pub.gen if not contains(Lcode, g)), None)
    if u is None or v is None:
        raise AttackFailure("subcode is not of codimension one")
    D = Lcode.parity_check()
    for _ in range(tries):
        lam0 = matgf.matmul(F.random(rng, D.shape[0]), D, F)
        lu, lv = F.dot(lam0, u), F.dot(lam0, v)
        if lu and lv:
            a0 = F.mul(F.sub(v, u), F.inv(lu))
            return a0, lam0
    raise AttackFailure(f"no admissible lam0 in {tries} draws")


def _pair_maps(spec: GrsSpec, a0, lam0, pub: LinearCode) -> bool:
    img = apply_pair(spec.generator(), a0, lam0, spec.field)
    return LinearCode(spec.field, img, pub.n) == pub


def _attack_core(pub, rng, trial_cap, jobs, stats):
    k = pub.k
    with stats.phase("lambda_perp"):
        Lcode = find_lambda_perp(pub, rng, trial_cap, jobs, stats)
    with stats.phase("structure"):
        spec = recover_hidden_code(Lcode, k, rng, stats)
    with stats.phase("valid_pair"):
        a0, lam0 = valid_pair(spec.code(), Lcode, pub, rng)
    return spec, a0, lam0


def attack_bbcrs(
    pub: LinearCode,
    rng: np.random.Generator,
    trial_cap: int | None = None,
    jobs: int = 1,
    stats: AttackStats | None = None,
) -> BbcrsCrack:
    stats = stats if stats is not None else AttackStats()
    F = pub.field
    n, k = pub.n, pub.k
    zero = np.zeros(n, dtype=np.int64)
    with stats.phase("distinguish"):
        report = square_dim_report(pub)
    if report.grs_like:
        # the rank-one part left the code GRS: plain structure recovery
        stats.notes.append("public code is GRS")
        with stats.phase("structure"):
            spec = recover_grs(pub, stats)
        return BbcrsCrack(spec, zero, zero.copy(), False)
    mode = bbcrs_supported(n, k)
    if mode is None:
        raise UnsupportedParameters(
            f"unsupported rate: k={k}, n={n} needs 2k+2 < n or 2k > n+2 (and a subcode of dimension >= 5)", stats
        )
    try:
        if mode == "primary":
            spec, a0, lam0 = _attack_core(pub, rng, trial_cap, jobs, stats)
        else:
            spec_d, a0d, lam0d = _attack_core(dual(pub), rng, trial_cap, jobs, stats)
            # dual words are h + <h, a> b'; map the pair back to the primal side
            spec = grs_dual_spec(spec_d)
            lam0 = a0d
            s = F.add(F.dot(a0d, lam0d), 1)
            a0 = F.neg(F.mul(lam0d, F.inv(s)))
    except AttackFailure as exc:
        exc.stats = stats
        raise
    if not _pair_maps(spec, a0, lam0, pub):
        raise AttackFailure("recovered pair does not map the GRS code onto the public code", stats)
    return BbcrsCrack(spec, a0, lam0, mode == "dual")


def bbcrs_crack_decrypt(crack: BbcrsCrack, G_pub, c) -> np.ndarray:
    """Decode z + alpha a0 in C for every alpha; keep messages within distance t.

    Ties between several messages are broken exactly as the secret-key
    decryptor does (lightest residual, then smallest message).
    """
    spec = crack.C_spec
    F = spec.field
    G_pub = np.asarray(G_pub, dtype=np.int64)
    z = F.check(np.asarray(c, dtype=np.int64).reshape(-1))
    t = spec.t
    alphas = range(F.q) if crack.a0.any() else [0]
    seen = set()
    cands = []
    for al in alphas:
        res = spec.decode(F.add(z, F.mul(crack.a0, al)))
        if res is None:
            continue
        p = res.codeword
        cw = F.add(p, F.mul(crack.a0, F.dot(crack.lam0, p)))
        w = int(np.count_nonzero(F.sub(z, cw)))
        if w > t:
            continue
        m = solve_message(G_pub, cw, F)
        if m is None or m.tobytes() in seen:
            continue
        seen.add(m.tobytes())
        cands.append((w, m))
    if not cands:
        raise DecryptionFailure("no shift of the ciphertext decodes within distance t")
    return pick_candidate(cands)[1]
