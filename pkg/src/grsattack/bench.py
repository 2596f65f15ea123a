"""Timing harness: repeated keygen + attack runs over fixed parameter presets.

Only the attack call is timed (keygen, encryption and checks are excluded).
A trial succeeds when the crack decrypts fresh ciphertexts correctly.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .attacks import (
    AttackFailure,
    attack_bbcrs,
    attack_bl,
    attack_wieschebrink,
    bbcrs_crack_decrypt,
    bl_crack_decrypt,
    wieschebrink_crack_decrypt,
)
from .field import gf
from .schemes import (
    DecryptionFailure,
    bbcrs_decrypt,
    bbcrs_encrypt,
    bbcrs_keygen,
    bl_encrypt,
    bl_keygen,
    wieschebrink_encrypt,
    wieschebrink_keygen,
)

__all__ = ["PRESETS", "BenchPreset", "BenchRow", "run_trial", "run_bench", "rows_to_csv", "rows_from_csv", "format_table"]

CHECK_CIPHERTEXTS = 5


@dataclass(frozen=True)
class BenchPreset:
    scheme: str
    rows: tuple[tuple[int, int, int, int], ...]  # (q, n, k, r); r holds ell for bl
    trials: int


PRESETS = {
    "table1-small": BenchPreset("wieschebrink", ((128, 128, 79, 20),), 10),
    "table1-full": BenchPreset(
        "wieschebrink",
        ((128, 128, 79, 20), (256, 256, 169, 39), (512, 384, 245, 64), (512, 512, 335, 83)),
        100,
    ),
    "bbcrs-desk": BenchPreset("bbcrs", ((16, 15, 6, 0),), 20),
    "bl-desk": BenchPreset("bl", ((257, 200, 20, 8),), 20),
}


@dataclass
class BenchRow:
    q: int
    n: int
    k: int
    r: int
    trials: int
    mean_seconds: float
    success_rate: float


def run_trial(scheme: str, q: int, n: int, k: int, r: int, rng: np.random.Generator, jobs: int = 1, trial_cap=None):
    """One keygen + timed attack + decryption check; returns (seconds, success)."""
    F = gf(q)
    if scheme == "wieschebrink":
        keys = wieschebrink_keygen(F, n, k, r, rng)
        t0 = time.perf_counter()
        try:
            crack = attack_wieschebrink(keys.public.code(), n, k, r, rng)
        except AttackFailure:
            return time.perf_counter() - t0, False
        dt = time.perf_counter() - t0
        ok = crack.random_positions == keys.secret.random_positions
        for _ in range(CHECK_CIPHERTEXTS):
            m = F.random(rng, k)
            c = wieschebrink_encrypt(keys.public, m, rng)
            try:
                ok = ok and bool(np.array_equal(wieschebrink_crack_decrypt(crack, keys.public.G_pub, c), m))
            except DecryptionFailure:
                ok = False
        return dt, ok
    if scheme == "bl":
        keys = bl_keygen(F, n, k, r, rng)
        t0 = time.perf_counter()
        try:
            crack = attack_bl(keys.public.code(), r, rng)
        except AttackFailure:
            return time.perf_counter() - t0, False
        dt = time.perf_counter() - t0
        ok = crack.L == keys.secret.L
        for _ in range(CHECK_CIPHERTEXTS):
            m = int(F.random(rng))
            c = bl_encrypt(keys.public, m, 0.0, rng)
            ok = ok and bl_crack_decrypt(crack, keys.public.P, c, F) == m
        return dt, ok
    if scheme == "bbcrs":
        keys = bbcrs_keygen(F, n, k, rng)
        t0 = time.perf_counter()
        try:
            crack = attack_bbcrs(keys.public.code(), rng, trial_cap=trial_cap, jobs=jobs)
        except AttackFailure:
            return time.perf_counter() - t0, False
        dt = time.perf_counter() - t0
        ok = True
        for _ in range(CHECK_CIPHERTEXTS):
            c = bbcrs_encrypt(keys.public, F.random(rng, k), rng)
            try:
                ok = ok and bool(np.array_equal(bbcrs_crack_decrypt(crack, keys.public.G_pub, c), bbcrs_decrypt(keys.secret, c)))
            except DecryptionFailure:
                ok = False
        return dt, ok
    raise ValueError(f"unknown scheme {scheme!r}")


def run_bench(
    preset: str, seed: int, trials: int | None = None, jobs: int = 1, trial_cap=None, progress=None
) -> list[BenchRow]:
    """Every row of the preset; trial i of row j uses the seed sequence (seed, j, i)."""
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    spec = PRESETS[preset]
    N = spec.trials if trials is None else int(trials)
    out = []
    for j, (q, n, k, r) in enumerate(spec.rows):
        times, wins = [], 0
        for i in range(N):
            rng = np.random.default_rng(np.random.SeedSequence([seed, j, i]))
            dt, ok = run_trial(spec.scheme, q, n, k, r, rng, jobs, trial_cap)
            times.append(dt)
            wins += bool(ok)
            if progress is not None:
                progress(f"{preset} q={q} n={n} k={k} r={r} trial {i + 1}/{N}: {dt:.2f}s {'ok' if ok else 'FAIL'}")
        out.append(BenchRow(q, n, k, r, N, float(np.mean(times)) if times else 0.0, wins / N if N else 0.0))
    return out


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=[f.name for f in fields(BenchRow)], lineterminator="\n")
    w.writeheader()
    for row in rows:
        d = asdict(row)
        d["mean_seconds"] = repr(row.mean_seconds)
        d["success_rate"] = repr(row.success_rate)
        w.writerow(d)
    return buf.getvalue()


def rows_from_csv(text: str) -> list[BenchRow]:
    rows = []
    for d in csv.DictReader(io.StringIO(text)):
        rows.append(
            BenchRow(
                int(d["q"]), int(d["n"]), int(d["k"]), int(d["r"]), int(d["trials"]),
                float(d["mean_seconds"]), float(d["success_rate"]),
            )
        )
    return rows


def format_table(rows: list[BenchRow]) -> str:
    head = f"{'q':>5} {'n':>5} {'k':>5} {'r':>4} {'trials':>7} {'mean s':>10} {'success':>8}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.q:>5} {r.n:>5} {r.k:>5} {r.r:>4} {r.trials:>7} {r.mean_seconds:>10.3f} {r.success_rate:>8.2f}")
    return "\n".join(lines)
