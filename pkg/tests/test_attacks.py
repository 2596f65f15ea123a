from __future__ import annotations

import json

import numpy as np
import pytest

from grsattack import matgf
from grsattack.attacks import (
    AttackStats,
    BbcrsCrack,
    BlCrack,
    NotGRSError,
    RateTooHighError,
    UnsupportedParameters,
    WieschebrinkCrack,
    apply_pair,
    attack_bbcrs,
    attack_bl,
    attack_filtration,
    attack_wieschebrink,
    bbcrs_crack_decrypt,
    bbcrs_supported,
    bl_crack_decrypt,
    build_chain,
    recover_grs,
    relation_rank_check,
    support_from_end_words,
    wieschebrink_crack_decrypt,
)
from grsattack.codes import LinearCode, contains, dual, intersect, random_code, restrict, square, square_dim, star_product
from grsattack.field import gf
from grsattack.grs import GrsSpec, random_grs_spec
from grsattack.schemes import (
    bbcrs_decrypt,
    bbcrs_encrypt,
    bbcrs_keygen,
    bl_decrypt,
    bl_encrypt,
    bl_keygen,
    wieschebrink_encrypt,
    wieschebrink_keygen,
)


def _products(words, G, F):
    return np.vstack([F.mul(z[None, :], G) for z in words])


def _chain_code(spec: GrsSpec, i: int, j: int) -> LinearCode:
    # words y x^(i+t) (x - 1)^j for t < k - i - j
    F, x = spec.field, spec.x
    base = F.mul(spec.y, F.mul(F.pow(x, i), F.pow(F.sub(x, 1), j)))
    rows = [F.mul(base, F.pow(x, t)) for t in range(spec.k - i - j)]
    return LinearCode(F, np.vstack(rows))


def _normalized_spec(F, n, k, rng) -> GrsSpec:
    others = rng.choice(np.arange(2, F.q), size=n - 2, replace=False)
    x = np.concatenate([[0, 1], others])
    return GrsSpec(F, k, x, F.random_nonzero(rng, n))


# -- filtration -----------------------------------------------------------------


def test_support_from_end_words_example():
    F = gf(7)
    a = support_from_end_words([0, 1, 3, 5], [6, 0, 2, 4], F)
    assert a.tolist() == [0, 1, 3, 5]


def test_filtration_small_example():
    F = gf(7)
    spec = GrsSpec(F, 2, [0, 1, 3, 5], [1, 1, 1, 1])
    got = attack_filtration(spec.code())
    assert got.code() == spec.code()


def test_filtration_recovers_grs():
    F = gf(64)
    for seed in range(20):
        rng = np.random.default_rng(seed)
        spec = random_grs_spec(F, 40, 12, rng)
        assert attack_filtration(spec.code()).code() == spec.code()


def test_filtration_rejects_random_codes():
    F = gf(64)
    for seed in range(20):
        with pytest.raises(NotGRSError):
            attack_filtration(random_code(F, 40, 12, np.random.default_rng(seed)))


def test_filtration_rate_and_dual():
    F = gf(64)
    spec = random_grs_spec(F, 30, 20, np.random.default_rng(1))
    with pytest.raises(RateTooHighError):
        attack_filtration(spec.code())
    assert recover_grs(spec.code()).code() == spec.code()
    one = random_grs_spec(F, 10, 1, np.random.default_rng(2))
    assert attack_filtration(one.code()).code() == one.code()


def test_filtration_chain_matches_construction():
    F = gf(31)
    for seed in range(10):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(3, 8))
        spec = _normalized_spec(F, 20, k, rng)
        chain = build_chain(spec.code())
        for (i, j), C in chain.codes.items():
            assert C == _chain_code(spec, i, j)
            assert C.k == k - i - j


def test_filtration_theorem_both_moves():
    F = gf(31)
    for seed in range(10):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(4, 8))
        spec = _normalized_spec(F, 24, k, rng)
        for i in range(1, k - 1):
            for j in range(0, k - 1 - i):
                lhs = star_product(_chain_code(spec, i + 1, j), _chain_code(spec, i - 1, j))
                assert lhs == square(_chain_code(spec, i, j))
        for j in range(1, k - 1):
            for i in range(0, k - 1 - j):
                lhs = star_product(_chain_code(spec, i, j + 1), _chain_code(spec, i, j - 1))
                assert lhs == square(_chain_code(spec, i, j))


# -- relation matrix and the BBCRS dimension bounds ---------------------------------


def test_relation_rank_check():
    F = gf(31)
    rng = np.random.default_rng(0)
    pub = random_code(F, 20, 5, rng)
    z = pub.random_word(rng)
    assert relation_rank_check(z, F.mul(z, 2), F.mul(z, 3), pub) < 3
    for _ in range(30):
        z1, z2, z3 = (pub.random_word(rng) for _ in range(3))
        if matgf.rank(np.vstack([z1, z2, z3]), F) >= 2:
            assert relation_rank_check(z1, z2, z3, pub) == 3


def test_bbcrs_square_and_triple_bounds():
    F = gf(31)
    n, k = 30, 6
    for seed in range(10):
        rng = np.random.default_rng(seed)
        keys = bbcrs_keygen(F, n, k, rng)
        pub = keys.public.code()
        sk = keys.secret
        assert square_dim(pub) <= 3 * k - 1
        # independent public triples
        Z = np.vstack([pub.random_word(rng) for _ in range(3)])
        if matgf.rank(Z, F) == 3:
            assert LinearCode(F, _products(Z, pub.gen, F)).k <= 3 * k - 3
        # triples from the codimension-one subcode
        Lsub = intersect(sk.hidden_code(), dual(LinearCode(F, sk.lam.reshape(1, -1))))
        assert Lsub.k == k - 1
        assert all(contains(pub, g) for g in Lsub.gen)
        Z = np.vstack([Lsub.random_word(rng) for _ in range(3)])
        assert LinearCode(F, _products(Z, pub.gen, F)).k <= 2 * k + 2


def test_bl_restricted_square_formula():
    F = gf(257)
    n, k, ell = 80, 6, 4
    for seed in range(10):
        rng = np.random.default_rng(seed)
        keys = bl_keygen(F, n, k, ell, rng)
        pub = keys.public.code()
        L = set(keys.secret.L)
        off = [v for v in range(n) if v not in L]
        for _ in range(10):
            j = int(rng.integers(0, ell))
            J = [int(v) for v in rng.choice(sorted(L), size=j, replace=False)]
            rest = [int(v) for v in rng.choice(off, size=2 * k + int(rng.integers(0, 4)), replace=False)]
            assert square_dim(restrict(pub, sorted(J + rest))) == 2 * k - 1 + j


# -- Wieschebrink -----------------------------------------------------------------


def _check_wieschebrink(F, n, k, r, seed):
    rng = np.random.default_rng(seed)
    keys = wieschebrink_keygen(F, n, k, r, rng)
    crack = attack_wieschebrink(keys.public.code(), n, k, r, rng)
    assert crack.random_positions == keys.secret.random_positions
    for _ in range(5):
        m = F.random(rng, k)
        c = wieschebrink_encrypt(keys.public, m, rng)
        assert np.array_equal(wieschebrink_crack_decrypt(crack, keys.public.G_pub, c), m)
    return crack


def test_wieschebrink_direct_branch():
    for seed in range(3):
        _check_wieschebrink(gf(64), 56, 20, 6, seed)


def test_wieschebrink_shortening_branch():
    for seed in range(3):
        _check_wieschebrink(gf(64), 40, 15, 12, seed)


def test_wieschebrink_no_random_columns():
    crack = _check_wieschebrink(gf(64), 30, 8, 0, 0)
    assert crack.random_positions == []


def test_wieschebrink_square_window():
    F = gf(64)
    n, k, r = 40, 10, 5
    full = 0
    for seed in range(40):
        keys = wieschebrink_keygen(F, n, k, r, np.random.default_rng(seed))
        d = square_dim(keys.public.code())
        assert 2 * k - 1 <= d <= 2 * k - 1 + r
        full += d == 2 * k - 1 + r
    assert full >= 38


def test_wieschebrink_wrong_shape():
    F = gf(64)
    keys = wieschebrink_keygen(F, 40, 10, 5, np.random.default_rng(0))
    with pytest.raises(UnsupportedParameters):
        attack_wieschebrink(keys.public.code(), 40, 10, 4, np.random.default_rng(0))


# -- Bogdanov-Lee -------------------------------------------------------------------


def test_bl_attack_small():
    F = gf(257)
    for seed in range(3):
        rng = np.random.default_rng(seed)
        keys = bl_keygen(F, 80, 6, 4, rng)
        crack = attack_bl(keys.public.code(), 4, rng)
        assert crack.L == keys.secret.L
        for _ in range(10):
            m = int(F.random(rng))
            c = bl_encrypt(keys.public, m, 0.0, rng)
            assert bl_crack_decrypt(crack, keys.public.P, c, F) == bl_decrypt(keys.secret, c) == m


def test_bl_attack_rejects_ell_one():
    F = gf(257)
    keys = bl_keygen(F, 40, 5, 1, np.random.default_rng(0))
    with pytest.raises(UnsupportedParameters):
        attack_bl(keys.public.code(), 1, np.random.default_rng(0))


# -- BBCRS --------------------------------------------------------------------------


def test_bbcrs_supported_windows():
    assert bbcrs_supported(15, 6) == "primary"
    assert bbcrs_supported(15, 9) == "dual"
    assert bbcrs_supported(16, 8) is None
    assert bbcrs_supported(16, 7) is None
    assert bbcrs_supported(11, 4) is None


def test_bbcrs_dead_zone_message():
    F = gf(16)
    keys = bbcrs_keygen(F, 16, 8, np.random.default_rng(0))
    with pytest.raises(UnsupportedParameters, match="unsupported rate"):
        attack_bbcrs(keys.public.code(), np.random.default_rng(0))


def test_bbcrs_degenerate_keys_fall_back_to_filtration():
    F = gf(16)
    rng = np.random.default_rng(2)
    keys = bbcrs_keygen(F, 16, 8, rng, mode="degenerate")
    crack = attack_bbcrs(keys.public.code(), rng)
    assert not crack.a0.any()
    for _ in range(5):
        c = bbcrs_encrypt(keys.public, F.random(rng, 8), rng)
        assert np.array_equal(bbcrs_crack_decrypt(crack, keys.public.G_pub, c), bbcrs_decrypt(keys.secret, c))


def test_bbcrs_attack_and_jobs_determinism():
    F = gf(16)
    keys = bbcrs_keygen(F, 15, 6, np.random.default_rng(7))
    pub = keys.public.code()
    s1, s2 = AttackStats(), AttackStats()
    c1 = attack_bbcrs(pub, np.random.default_rng(99), stats=s1)
    c2 = attack_bbcrs(pub, np.random.default_rng(99), jobs=3, stats=s2)
    assert json.dumps(c1.to_json()) == json.dumps(c2.to_json())
    assert s1.counters["triple_trials"] == s2.counters["triple_trials"]
    # the crack is a valid pair for the public code
    img = apply_pair(c1.C_spec.generator(), c1.a0, c1.lam0, F)
    assert LinearCode(F, img) == pub
    rng = np.random.default_rng(3)
    for _ in range(10):
        c = bbcrs_encrypt(keys.public, F.random(rng, 6), rng, weight=4)
        assert np.array_equal(bbcrs_crack_decrypt(c1, keys.public.G_pub, c), bbcrs_decrypt(keys.secret, c))


def test_crack_json_round_trips():
    spec = random_grs_spec(gf(16), 10, 3, np.random.default_rng(0))
    w = WieschebrinkCrack([1, 4], spec)
    assert WieschebrinkCrack.from_json(json.loads(json.dumps(w.to_json()))) == w
    b = BlCrack([2, 3, 9])
    assert BlCrack.from_json(b.to_json()) == b
    a0 = np.arange(10) % 16
    bb = BbcrsCrack(spec, a0, a0[::-1].copy(), True)
    back = BbcrsCrack.from_json(json.loads(json.dumps(bb.to_json())))
    assert back.C_spec == spec and np.array_equal(back.a0, a0) and back.dual_path


def test_attack_stats_json():
    st = AttackStats()
    with st.phase("x"):
        st.bump("n", 3)
    st.notes.append("hi")
    obj = st.to_json()
    assert obj["counters"] == {"n": 3} and obj["notes"] == ["hi"] and obj["phases"]["x"] >= 0
