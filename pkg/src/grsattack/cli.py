"""Command-line front end.

Exit codes: 0 ok, 2 bad parameters or unreadable input, 3 decryption
failure, 4 attack failure.  Every randomized command takes ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from math import comb

import numpy as np

from .attacks import (
    AttackFailure,
    AttackStats,
    BbcrsCrack,
    BlCrack,
    WieschebrinkCrack,
    attack_bbcrs,
    attack_bl,
    attack_wieschebrink,
    bbcrs_crack_decrypt,
    bl_crack_decrypt,
    recover_grs,
    wieschebrink_crack_decrypt,
)
from .bench import PRESETS, format_table, rows_to_csv, run_bench
from .codes import LinearCode, square_dim_report
from .field import Field, FieldError, gf, gf_from
from .schemes import (
    BBCRS_MODES,
    BbcrsKeys,
    BbcrsPublic,
    BlKeys,
    BlPublic,
    DecryptionFailure,
    WieschebrinkKeys,
    WieschebrinkPublic,
    bbcrs_decrypt,
    bbcrs_encrypt,
    bbcrs_keygen,
    bl_decrypt,
    bl_encrypt,
    bl_keygen,
    wieschebrink_decrypt,
    wieschebrink_encrypt,
    wieschebrink_keygen,
)

SCHEMES = ("wieschebrink", "bl", "bbcrs")
EXIT_OK, EXIT_PARAM, EXIT_DECRYPT, EXIT_ATTACK = 0, 2, 3, 4

_KEYS = {"wieschebrink": WieschebrinkKeys, "bl": BlKeys, "bbcrs": BbcrsKeys}
_PUBLIC = {"wieschebrink": WieschebrinkPublic, "bl": BlPublic, "bbcrs": BbcrsPublic}
_CRACK = {"wieschebrink": WieschebrinkCrack, "bl": BlCrack, "bbcrs": BbcrsCrack}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PARAM):
        super().__init__(message)
        self.code = code


# -- IO helpers ----------------------------------------------------------------


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(obj, dict):
        raise CliError(f"{path}: expected a JSON object")
    return obj


def _write_json(path: str | None, obj: dict) -> None:
    """Write atomically; ``None`` or '-' prints to stdout."""
    text = json.dumps(obj, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _field(args) -> Field:
    if args.q is not None:
        return gf(args.q)
    if args.p is not None:
        return gf_from(args.p, args.m or 1)
    raise CliError("give the field with --q or --p/--m")


def _need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise CliError("missing " + ", ".join("--" + n for n in missing))


def _scheme_of(obj: dict, args) -> str:
    scheme = getattr(args, "scheme", None) or obj.get("scheme")
    if scheme not in SCHEMES:
        raise CliError(f"unknown or missing scheme {scheme!r}; choose from {SCHEMES}")
    return scheme


def _load_keys(path: str, args):
    obj = _read_json(path)
    scheme = _scheme_of(obj, args)
    try:
        return scheme, _KEYS[scheme].from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: bad {scheme} key file: {exc}") from None


def _load_public(path: str, args):
    """Public key from a public-key file or the public half of a key file."""
    obj = _read_json(path)
    scheme = _scheme_of(obj, args)
    body = obj.get("public", obj)
    try:
        return scheme, _PUBLIC[scheme].from_json(body)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: bad {scheme} public key: {exc}") from None


def _load_code(path: str) -> LinearCode:
    """A code file, or the public code of any key file."""
    obj = _read_json(path)
    if "gen" in obj:
        try:
            return LinearCode.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{path}: bad code file: {exc}") from None
    if obj.get("scheme") in SCHEMES:
        body = obj.get("public", obj)
        try:
            return _PUBLIC[obj["scheme"]].from_json(body).code()
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{path}: bad public key: {exc}") from None
    raise CliError(f"{path}: neither a code file nor a key file")


def _load_ct(path: str, F: Field, length: int) -> np.ndarray:
    obj = _read_json(path)
    if "c" not in obj:
        raise CliError(f"{path}: ciphertext file is missing field 'c'")
    try:
        c = F.check(np.asarray(obj["c"], dtype=np.int64).reshape(-1))
    except (TypeError, ValueError) as exc:
        raise CliError(f"{path}: bad ciphertext: {exc}") from None
    if c.size != length:
        raise CliError(f"{path}: ciphertext of length {c.size}, expected {length}")
    return c


def _parse_msg(text: str | None, F: Field, k: int, rng) -> np.ndarray:
    if text is None:
        return F.random(rng, k)
    try:
        m = np.asarray([int(v) for v in text.split(",")], dtype=np.int64)
    except ValueError:
        raise CliError(f"--msg must be comma-separated integers, got {text!r}") from None
    if m.size != k:
        raise CliError(f"--msg has {m.size} entries, expected {k}")
    return F.check(m)


def _ints(v) -> list[int]:
    return [int(x) for x in np.atleast_1d(v)]


def _report_stats(stats: AttackStats, out=None) -> None:
    out = out or sys.stderr
    for name, sec in stats.phases.items():
        print(f"  phase {name}: {sec:.3f} s", file=out)
    for name, val in sorted(stats.counters.items()):
        print(f"  {name}: {val}", file=out)
    for note in stats.notes:
        print(f"  note: {note}", file=out)


# -- commands ------------------------------------------------------------------


def cmd_keygen(args) -> int:
    F = _field(args)
    rng = np.random.default_rng(args.seed)
    if args.scheme == "wieschebrink":
        _need(args, "n", "k", "r")
        keys = wieschebrink_keygen(F, args.n, args.k, args.r, rng)
    elif args.scheme == "bl":
        _need(args, "n", "k", "ell")
        keys = bl_keygen(F, args.n, args.k, args.ell, rng)
    else:
        _need(args, "n", "k")
        keys = bbcrs_keygen(F, args.n, args.k, rng, mode=args.mode)
    _write_json(args.out, keys.to_json())
    if args.public_out:
        _write_json(args.public_out, keys.public.to_json())
    return EXIT_OK


def cmd_encrypt(args) -> int:
    scheme, pk = _load_public(args.inp, args)
    F = pk.field
    rng = np.random.default_rng(args.seed)
    if scheme == "bl":
        m = int(F.check(int(args.msg))) if args.msg is not None else int(F.random(rng))
        c = bl_encrypt(pk, m, args.eta, rng)
        shown: object = m
    else:
        m = _parse_msg(args.msg, F, pk.k, rng)
        if scheme == "wieschebrink":
            c = wieschebrink_encrypt(pk, m, rng)
        else:
            c = bbcrs_encrypt(pk, m, rng, weight=args.weight)
        shown = _ints(m)
    _write_json(args.out, {"c": _ints(c)})
    print(json.dumps({"m": shown}), file=sys.stderr)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    scheme, keys = _load_keys(args.inp, args)
    pk, sk = keys.public, keys.secret
    if scheme == "wieschebrink":
        c = _load_ct(args.ct, pk.field, pk.n + pk.r)
        m: object = _ints(wieschebrink_decrypt(sk, c))
    elif scheme == "bl":
        c = _load_ct(args.ct, pk.field, pk.n)
        m = int(bl_decrypt(sk, c))
    else:
        c = _load_ct(args.ct, pk.field, pk.n)
        m = _ints(bbcrs_decrypt(sk, c))
    _write_json(args.out, {"m": m})
    return EXIT_OK


def cmd_attack(args) -> int:
    scheme, pk = _load_public(args.inp, args)
    rng = np.random.default_rng(args.seed)
    stats = AttackStats()
    pub = pk.code()
    try:
        if scheme == "wieschebrink":
            crack = attack_wieschebrink(pub, pk.n, pk.k, pk.r, rng, max_rounds=args.max_rounds, stats=stats)
            summary = f"{len(crack.random_positions)} random positions located"
        elif scheme == "bl":
            crack = attack_bl(pub, pk.ell, rng, max_samples=args.max_rounds, stats=stats)
            summary = f"|L| = {len(crack.L)} recovered"
        else:
            crack = attack_bbcrs(pub, rng, trial_cap=args.trial_cap, jobs=args.jobs, stats=stats)
            summary = "valid pair recovered" + (" (dual path)" if crack.dual_path else "")
    except AttackFailure as exc:
        print(f"attack failed: {exc}", file=sys.stderr)
        _report_stats(exc.stats or stats)
        return EXIT_ATTACK
    _write_json(args.out, crack.to_json())
    print(f"{scheme} attack: {summary}; {stats.total_seconds:.3f} s", file=sys.stderr)
    _report_stats(stats)
    return EXIT_OK


def cmd_crack_decrypt(args) -> int:
    scheme, pk = _load_public(args.inp, args)
    obj = _read_json(args.crack)
    try:
        crack = _CRACK[scheme].from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{args.crack}: bad crack file: {exc}") from None
    F = pk.field
    if scheme == "wieschebrink":
        c = _load_ct(args.ct, F, pk.n + pk.r)
        m: object = _ints(wieschebrink_crack_decrypt(crack, pk.G_pub, c))
    elif scheme == "bl":
        c = _load_ct(args.ct, F, pk.n)
        m = int(bl_crack_decrypt(crack, pk.P, c, F))
    else:
        c = _load_ct(args.ct, F, pk.n)
        m = _ints(bbcrs_crack_decrypt(crack, pk.G_pub, c))
    _write_json(args.out, {"m": m})
    return EXIT_OK


def cmd_distinguish(args) -> int:
    C = _load_code(args.inp)
    rep = square_dim_report(C)
    out = rep.to_json()
    out["grs_square_dim"] = min(2 * C.k - 1, C.n)
    out["random_square_dim"] = min(C.n, comb(C.k + 1, 2))
    if C.k < C.n:
        kd = C.n - C.k
        out["grs_dual_square_dim"] = min(2 * kd - 1, C.n)
        out["random_dual_square_dim"] = min(C.n, comb(kd + 1, 2))
    _write_json(args.out, out)
    return EXIT_OK


def cmd_grs_recover(args) -> int:
    C = _load_code(args.inp)
    stats = AttackStats()
    try:
        spec = recover_grs(C, stats)
    except AttackFailure as exc:
        print(f"not GRS: {exc}", file=sys.stderr)
        return EXIT_ATTACK
    _write_json(args.out, spec.to_json())
    return EXIT_OK


def cmd_bench(args) -> int:
    progress = (lambda s: print(s, file=sys.stderr)) if args.verbose else None
    rows = run_bench(args.preset, args.seed, trials=args.trials, jobs=args.jobs, trial_cap=args.trial_cap, progress=progress)
    print(format_table(rows))
    text = rows_to_csv(rows)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    else:
        print()
        sys.stdout.write(text)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grsattack", description="GRS-based schemes and their key-recovery attacks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def field_args(p):
        p.add_argument("--q", type=int, help="field order (prime power)")
        p.add_argument("--p", type=int, help="field characteristic")
        p.add_argument("--m", type=int, help="extension degree (with --p)")

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    field_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int, help="random columns (wieschebrink)")
    p.add_argument("--ell", type=int, help="|L| = 3 ell (bl)")
    p.add_argument("--mode", choices=BBCRS_MODES, default="generic", help="rank-one part (bbcrs)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="key file (public and secret)")
    p.add_argument("--public-out", help="also write the public key alone")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt under a public key")
    p.add_argument("--in", dest="inp", required=True, help="public key or key file")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--msg", help="message: comma-separated codes (one code for bl); random if omitted")
    p.add_argument("--eta", type=float, default=0.0, help="noise rate (bl)")
    p.add_argument("--weight", type=int, help="error weight (bbcrs; default t)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt with the secret key")
    p.add_argument("--in", dest="inp", required=True, help="key file")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--ct", required=True, help="ciphertext file")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("attack", help="recover a key-equivalent crack from a public key")
    p.add_argument("--in", dest="inp", required=True, help="public key or key file")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trial-cap", type=int, help="bbcrs triple budget (default 50 q^3)")
    p.add_argument("--max-rounds", type=int, default=100, help="resampling cap (wieschebrink, bl)")
    p.add_argument("--out", required=True, help="crack file")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("crack-decrypt", help="decrypt with a crack instead of the secret key")
    p.add_argument("--in", dest="inp", required=True, help="public key or key file")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--crack", required=True)
    p.add_argument("--ct", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_crack_decrypt)

    p = sub.add_parser("distinguish", help="square-code dimension report")
    p.add_argument("--in", dest="inp", required=True, help="code file or key file")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("grs-recover", help="recover (x, y) of a GRS code")
    p.add_argument("--in", dest="inp", required=True, help="code file or key file")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_grs_recover)

    p = sub.add_parser("bench", help="time attacks over a parameter preset")
    p.add_argument("--preset", choices=sorted(PRESETS), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, help="override the preset's trial count")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trial-cap", type=int)
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DecryptionFailure as exc:
        print(f"decryption failed: {exc}", file=sys.stderr)
        return EXIT_DECRYPT
    except AttackFailure as exc:
        print(f"attack failed: {exc}", file=sys.stderr)
        return EXIT_ATTACK
    except (FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
