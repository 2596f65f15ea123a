from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grsattack import matgf
from grsattack.codes import CodeError, LinearCode, contains, dual, shorten, square
from grsattack.field import gf
from grsattack.grs import (
    GrsSpec,
    grs_decode,
    grs_dual_spec,
    grs_encode,
    grs_generator,
    grs_shorten_spec,
    grs_square_spec,
    random_grs_spec,
)
from grsattack.schemes import random_error


def test_generator_examples():
    F = gf(7)
    spec = GrsSpec(F, 1, [0, 1, 3], [1, 1, 1])
    assert grs_generator(spec).tolist() == [[1, 1, 1]]
    spec = GrsSpec(F, 2, [0, 1, 3, 5], [1, 1, 1, 1])
    assert grs_generator(spec).tolist() == [[1, 1, 1, 1], [0, 1, 3, 5]]


def test_generator_full_rank():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        q = [16, 31, 64][seed % 3]
        n = int(rng.integers(3, 16))
        spec = random_grs_spec(gf(q), n, int(rng.integers(1, n)), rng)
        assert matgf.rank(grs_generator(spec), spec.field) == spec.k


def test_spec_validation():
    F = gf(7)
    with pytest.raises(CodeError):
        GrsSpec(F, 2, [0, 0, 1], [1, 1, 1])
    with pytest.raises(CodeError):
        GrsSpec(F, 2, [0, 1, 2], [1, 0, 1])
    with pytest.raises(CodeError):
        GrsSpec(F, 4, [0, 1, 2], [1, 1, 1])


def test_encode_examples():
    F = gf(31)
    spec = random_grs_spec(F, 10, 4, np.random.default_rng(0))
    assert np.array_equal(grs_encode(spec, [1, 0, 0, 0]), spec.y)
    assert not grs_encode(spec, [0, 0, 0, 0]).any()
    C = spec.code()
    rng = np.random.default_rng(1)
    for _ in range(20):
        assert contains(C, grs_encode(spec, F.random(rng, 4)))


def test_decode_zero_errors():
    F = gf(31)
    spec = random_grs_spec(F, 12, 5, np.random.default_rng(2))
    c = grs_encode(spec, [3, 1, 4, 1, 5])
    res = grs_decode(spec, c)
    assert np.array_equal(res.codeword, c) and res.msg.tolist() == [3, 1, 4, 1, 5] and res.errors == 0


def test_decode_round_trip_at_capacity():
    F = gf(31)
    for seed in range(500):
        rng = np.random.default_rng(seed)
        spec = random_grs_spec(F, 20, 8, rng)
        m = F.random(rng, 8)
        c = grs_encode(spec, m)
        res = grs_decode(spec, F.add(c, random_error(F, 20, 6, rng)))
        assert res is not None and np.array_equal(res.msg, m)


def test_decode_beyond_capacity_never_returns_original():
    F = gf(11)
    rng = np.random.default_rng(3)
    spec = random_grs_spec(F, 8, 2, rng)
    m = F.random(rng, 2)
    c = grs_encode(spec, m)
    for pos in combinations(range(8), 4):
        e = np.zeros(8, dtype=np.int64)
        e[list(pos)] = F.random_nonzero(rng, 4)
        r = F.add(c, e)
        res = grs_decode(spec, r)
        if res is not None:
            assert not np.array_equal(res.codeword, c)
            assert np.count_nonzero(res.codeword != r) <= 3


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([16, 27, 64, 257]), st.integers(0, 2**32 - 1))
def test_decode_property(q, seed):
    F = gf(q)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 16))
    k = int(rng.integers(1, n))
    spec = random_grs_spec(F, n, k, rng)
    m = F.random(rng, k)
    w = int(rng.integers(0, spec.t + 1))
    res = grs_decode(spec, F.add(grs_encode(spec, m), random_error(F, n, w, rng)))
    assert res is not None and np.array_equal(res.msg, m) and res.errors == w


def test_dual_spec_examples():
    F = gf(7)
    spec = GrsSpec(F, 2, [0, 1, 3, 5], [1, 1, 1, 1])
    D = grs_dual_spec(spec)
    assert D.code() == LinearCode(F, matgf.nullspace(spec.generator(), F))
    for seed in range(30):
        rng = np.random.default_rng(seed)
        spec = random_grs_spec(gf(64), 15, int(rng.integers(1, 15)), rng)
        D = grs_dual_spec(spec)
        assert not matgf.matmul(spec.generator(), D.generator().T, spec.field).any()
        assert D.code() == dual(spec.code())
        assert grs_dual_spec(D).code() == spec.code()


def test_shorten_spec_matches_shortening():
    F = gf(13)
    for seed in range(20):
        rng = np.random.default_rng(seed)
        spec = random_grs_spec(F, 8, 3, rng)
        I = [int(rng.integers(8))]
        assert grs_shorten_spec(spec, I).code() == shorten(spec.code(), I)
    spec = random_grs_spec(gf(31), 20, 6, np.random.default_rng(7))
    assert grs_shorten_spec(spec, [1, 5, 9]).code() == shorten(spec.code(), [1, 5, 9])


def test_square_spec():
    spec = random_grs_spec(gf(64), 30, 7, np.random.default_rng(0))
    assert square(spec.code()) == grs_square_spec(spec).code()


def test_json_round_trip():
    spec = random_grs_spec(gf(16), 10, 4, np.random.default_rng(0))
    assert GrsSpec.from_json(spec.to_json()) == spec
