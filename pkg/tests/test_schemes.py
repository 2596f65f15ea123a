from __future__ import annotations

import numpy as np
import pytest

from grsattack import matgf
from grsattack.attacks.bbcrs import apply_pair
from grsattack.codes import LinearCode, square_dim
from grsattack.field import gf
from grsattack.schemes import (
    BbcrsKeys,
    BlKeys,
    DecryptionFailure,
    ParameterError,
    WieschebrinkKeys,
    bbcrs_decrypt,
    bbcrs_decrypt_report,
    bbcrs_encrypt,
    bbcrs_keygen,
    bl_decrypt,
    bl_encrypt,
    bl_keygen,
    bl_noise,
    random_error,
    wieschebrink_decrypt,
    wieschebrink_encrypt,
    wieschebrink_keygen,
)

# -- Wieschebrink -------------------------------------------------------------


def test_wieschebrink_keys_shape_and_determinism():
    F = gf(31)
    keys = wieschebrink_keygen(F, 20, 5, 3, np.random.default_rng(0))
    assert keys.public.G_pub.shape == (5, 23)
    again = wieschebrink_keygen(F, 20, 5, 3, np.random.default_rng(0))
    assert keys.to_json() == again.to_json()
    assert WieschebrinkKeys.from_json(keys.to_json()).to_json() == keys.to_json()


def test_wieschebrink_public_code_is_permuted_secret_code():
    F = gf(31)
    for seed in range(10):
        keys = wieschebrink_keygen(F, 20, 5, 3, np.random.default_rng(seed))
        sk = keys.secret
        GQ = matgf.matmul(keys.public.G_pub, sk.Q, F)
        assert LinearCode(F, GQ) == LinearCode(F, np.hstack([sk.spec.generator(), sk.random_cols]))
        assert matgf.rank(keys.public.G_pub, F) == 5


def test_wieschebrink_round_trips():
    F = gf(64)
    keys = wieschebrink_keygen(F, 56, 20, 6, np.random.default_rng(0))
    m = F.random(np.random.default_rng(1), 20)
    c = wieschebrink_encrypt(keys.public, m, np.random.default_rng(2), e=np.zeros(62, dtype=np.int64))
    assert np.array_equal(wieschebrink_decrypt(keys.secret, c), m)
    for seed in range(200):
        rng = np.random.default_rng(seed)
        if seed % 20 == 0:
            keys = wieschebrink_keygen(F, 56, 20, 6, rng)
        m = F.random(rng, 20)
        assert np.array_equal(wieschebrink_decrypt(keys.secret, wieschebrink_encrypt(keys.public, m, rng)), m)


def test_wieschebrink_too_many_errors_detected():
    F = gf(31)
    rng = np.random.default_rng(5)
    keys = wieschebrink_keygen(F, 20, 6, 3, rng)
    t = keys.public.t
    grs_cols = keys.secret.perm[:20]
    for _ in range(50):
        m = F.random(rng, 6)
        e = np.zeros(23, dtype=np.int64)
        pos = rng.choice(grs_cols, size=t + 3, replace=False)
        e[pos] = F.random_nonzero(rng, t + 3)
        c = wieschebrink_encrypt(keys.public, m, rng, e=e)
        try:
            got = wieschebrink_decrypt(keys.secret, c)
        except DecryptionFailure:
            continue
        assert not np.array_equal(got, m)


def test_wieschebrink_parameter_errors():
    F = gf(31)
    with pytest.raises(ParameterError):
        wieschebrink_keygen(F, 40, 5, 3, np.random.default_rng(0))
    with pytest.raises(ParameterError):
        wieschebrink_keygen(F, 10, 10, 3, np.random.default_rng(0))


# -- Bogdanov-Lee -------------------------------------------------------------


def test_bl_key_structure():
    F = gf(257)
    for seed in range(50):
        keys = bl_keygen(F, 200, 20, 8, np.random.default_rng(seed))
        sk = keys.secret
        assert len(sk.L) == 24
        assert matgf.rank(sk.G, F) == 20
        assert not sk.G[8:, sk.L].any()
        assert np.all(sk.x != 0) and np.unique(sk.x).size == 200
        assert LinearCode(F, keys.public.P) == LinearCode(F, sk.G)
    assert BlKeys.from_json(keys.to_json()).to_json() == keys.to_json()


def test_bl_square_is_not_full():
    F = gf(257)
    keys = bl_keygen(F, 200, 20, 8, np.random.default_rng(0))
    assert square_dim(keys.public.code()) < 200


def test_bl_round_trips():
    F = gf(257)
    rng = np.random.default_rng(1)
    keys = bl_keygen(F, 200, 20, 8, rng)
    c = bl_encrypt(keys.public, 42, 0.0, rng)
    assert bl_decrypt(keys.secret, c) == 42
    eta = 1 - 0.999 ** (1 / 24)
    ok = 0
    for _ in range(1000):
        m = int(F.random(rng))
        ok += bl_decrypt(keys.secret, bl_encrypt(keys.public, m, eta, rng)) == m
    assert ok >= 997


def test_bl_homomorphic_addition():
    F = gf(257)
    rng = np.random.default_rng(2)
    keys = bl_keygen(F, 200, 20, 8, rng)
    off_L = np.ones(200, dtype=bool)
    off_L[keys.secret.L] = False
    for _ in range(50):
        m1, m2 = int(F.random(rng)), int(F.random(rng))
        e1, e2 = bl_noise(F, 200, 0.3, rng) * off_L, bl_noise(F, 200, 0.3, rng) * off_L
        c1 = bl_encrypt(keys.public, m1, 0.0, rng, e=e1)
        c2 = bl_encrypt(keys.public, m2, 0.0, rng, e=e2)
        assert bl_decrypt(keys.secret, F.add(c1, c2)) == F.add(m1, m2)


def test_bl_parameter_errors():
    F = gf(257)
    for n, k, ell in [(200, 20, 0), (200, 8, 8), (30, 20, 8), (300, 20, 8)]:
        with pytest.raises(ParameterError):
            bl_keygen(F, n, k, ell, np.random.default_rng(0))


# -- BBCRS ----------------------------------------------------------------------


def test_bbcrs_key_structure():
    F = gf(16)
    for seed in range(30):
        keys = bbcrs_keygen(F, 15, 6, np.random.default_rng(seed))
        sk = keys.secret
        Q = sk.Q
        assert np.array_equal(matgf.matmul(Q, matgf.inverse(Q, F), F), np.eye(15))
        R = matgf.outer(sk.alpha, sk.beta, F)
        assert matgf.rank(R, F) == 1
        assert F.add(F.dot(sk.a, sk.b), 1) != 0
        # the public code is the image of the hidden GRS code under p -> p + <p, lam> a
        img = apply_pair(sk.hidden_code().gen, sk.a, sk.lam, F)
        assert LinearCode(F, img) == keys.public.code()
        # and C_pub = C P^{-1} with P = I + b^T a
        P = F.add(np.eye(15, dtype=np.int64), matgf.outer(sk.b, sk.a, F))
        P_inv = matgf.rank_one_update_inverse(sk.a, sk.b, F)
        assert np.array_equal(P_inv, matgf.inverse(P, F))
        assert LinearCode(F, matgf.matmul(sk.hidden_code().gen, P_inv, F)) == keys.public.code()
    assert BbcrsKeys.from_json(keys.to_json()).to_json() == keys.to_json()


def test_bbcrs_zero_error_round_trip():
    F = gf(16)
    rng = np.random.default_rng(3)
    keys = bbcrs_keygen(F, 15, 6, rng)
    m = F.random(rng, 6)
    rep = bbcrs_decrypt_report(keys.secret, bbcrs_encrypt(keys.public, m, rng, weight=0))
    assert np.array_equal(rep.msg, m) and rep.gamma == 0 and rep.weight == 0


def test_bbcrs_round_trips():
    F = gf(16)
    rng = np.random.default_rng(4)
    for i in range(200):
        if i % 20 == 0:
            keys = bbcrs_keygen(F, 15, 6, rng)
        m = F.random(rng, 6)
        assert np.array_equal(bbcrs_decrypt(keys.secret, bbcrs_encrypt(keys.public, m, rng, weight=4)), m)


def test_bbcrs_wrong_gamma_rarely_decodes():
    F = gf(16)
    rng = np.random.default_rng(6)
    keys = bbcrs_keygen(F, 15, 6, rng)
    sk = keys.secret
    Q = sk.Q
    wrong, decoded = 0, 0
    for _ in range(40):
        e = random_error(F, 15, 4, rng)
        c = F.add(matgf.matmul(F.random(rng, 6), keys.public.G_pub, F), e)
        cq = matgf.matmul(c, Q, F)
        g0 = F.dot(e, sk.alpha)
        for g in range(16):
            if g == g0:
                continue
            wrong += 1
            decoded += sk.spec.decode(F.sub(cq, F.mul(sk.beta, g))) is not None
    assert decoded / wrong < 0.1


def test_bbcrs_degenerate_mode():
    F = gf(16)
    keys = bbcrs_keygen(F, 15, 6, np.random.default_rng(0), mode="degenerate")
    assert keys.public.code() == keys.secret.hidden_code()
    rng = np.random.default_rng(1)
    m = F.random(rng, 6)
    assert np.array_equal(bbcrs_decrypt(keys.secret, bbcrs_encrypt(keys.public, m, rng)), m)


def test_bbcrs_garbage_fails():
    F = gf(16)
    rng = np.random.default_rng(8)
    keys = bbcrs_keygen(F, 15, 6, rng)
    failures = 0
    for _ in range(20):
        try:
            bbcrs_decrypt(keys.secret, F.random(rng, 15))
        except DecryptionFailure:
            failures += 1
    assert failures > 0
