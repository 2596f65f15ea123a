"""Finite fields F_q, q = p^m, with elements encoded as integers.

An element is the integer ``sum(c_i * p**i)`` where ``c_0 + c_1 X + ... +
c_{m-1} X^{m-1}`` is its representative modulo the defining polynomial.
Every arithmetic method of :class:`Field` accepts plain ints as well as
integer numpy arrays and broadcasts elementwise.
"""

from __future__ import annotations

import functools
from typing import Sequence

import numpy as np

__all__ = [
    "Field",
    "FieldError",
    "gf",
    "is_prime",
    "is_irreducible",
    "poly_mul_code",
]

# x^m + ... over F_2, bit i is the coefficient of X^i.  Conway polynomials.
CONWAY_BINARY = {
    1: 0b10,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1011011,
    7: 0b10000011,
    8: 0x11D,
    9: 0x211,
    10: 0x46F,
    11: 0x805,
    12: 0x10EB,
    13: 0x201B,
    14: 0x40A9,
    15: 0x8035,
    16: 0x1002D,
}

TABLE_LIMIT = 1 << 16
MAX_ORDER = 1 << 20


class FieldError(ValueError):
    """Invalid field parameters or an element outside [0, q)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as coefficient lists, lowest degree first ---------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p) if p > 2 else 1
    while len(a) - 1 >= df:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _ppowmod(base: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    f = [c % p for c in modulus]
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    x = [0, 1]

    def frob(times: int) -> list[int]:
        r = x
        for _ in range(times):
            r = _ppowmod(r, p, f, p)
        return r

    xm = frob(m)
    if _trim([(u - v) % p for u, v in _zip_pad(xm, x)]):
        return False
    for r in _prime_factors(m):
        h = _trim([(u - v) % p for u, v in _zip_pad(frob(m // r), x)])
        if len(_pgcd(list(f), h, p)) != 1:
            return False
    return True


def _zip_pad(a: Sequence[int], b: Sequence[int]):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _first_irreducible(p: int, m: int) -> tuple[int, ...]:
    # lexicographically smallest monic irreducible of degree m
    for low in range(p**m):
        coeffs = []
        v = low
        for _ in range(m):
            coeffs.append(v % p)
            v //= p
        cand = coeffs + [1]
        if cand[0] != 0 and is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(a % p)
        a //= p
    return out


def _undigits(c: Sequence[int], p: int) -> int:
    v = 0
    for ci in reversed(c):
        v = v * p + ci
    return v


def poly_mul_code(a: int, b: int, field: "Field") -> int:
    """Multiply two element codes by carry-free polynomial arithmetic.

    This is the table-free path; it is also the reference the table and
    prime-field paths are checked against.
    """
    p, m = field.p, field.m
    prod = _pmul(_digits(a, p, m), _digits(b, p, m), p)
    r = _pmod(prod, field.modulus, p)
    return _undigits(r + [0] * (m - len(r)), p)


class Field:
    """The finite field with ``p**m`` elements.

    ``modulus`` lists the m+1 coefficients (lowest first) of the monic
    irreducible polynomial defining the extension; it defaults to the
    Conway polynomial for p = 2 and to the smallest irreducible otherwise.
    For m = 1 the modulus is X and arithmetic is plain integer arithmetic
    mod p.
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError(f"extension degree must be >= 1, got {m}")
        q = p**m
        if q > MAX_ORDER:
            raise FieldError(f"field order {q} exceeds supported maximum {MAX_ORDER}")
        if modulus is None:
            if m == 1:
                modulus = (0, 1)
            elif p == 2 and m in CONWAY_BINARY:
                bits = CONWAY_BINARY[m]
                modulus = tuple((bits >> i) & 1 for i in range(m + 1))
            else:
                modulus = _first_irreducible(p, m)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
            raise FieldError(f"modulus {list(modulus)} is not a monic degree-{m} polynomial over F_{p}")
        if m > 1 and not is_irreducible(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self.generator = self._find_generator()
        if q <= TABLE_LIMIT:
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _slow_pow(self, a: int, e: int) -> int:
        if self.m == 1:
            return pow(a, e, self.p)
        r = 1
        while e:
            if e & 1:
                r = poly_mul_code(r, a, self)
            a = poly_mul_code(a, a, self)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise FieldError("no multiplicative generator found")  # pragma: no cover

    def _build_tables(self) -> None:
        q = self.q
        exp = np.zeros(4 * q + 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = (x * self.generator) % self.p if self.m == 1 else poly_mul_code(x, self.generator, self)
        exp[q - 1 : 2 * q - 2] = exp[: q - 1]
        # log(0) points into the all-zero tail so products with 0 need no mask
        log[0] = 2 * q
        self._exp, self._log = exp, log

    # -- identity ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "Field":
        try:
            p, m, modulus = int(obj["p"]), int(obj["m"]), [int(c) for c in obj["modulus"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise FieldError(f"malformed field description: {exc}") from None
        return gf_from(p, m, tuple(modulus))

    # -- validation ----------------------------------------------------------

    def check(self, a):
        """Return ``a`` as a valid element (or array of elements), else raise."""
        if isinstance(a, (int, np.integer)):
            if not 0 <= a < self.q:
                raise FieldError(f"{a} is not an element of {self!r}")
            return int(a)
        arr = np.asarray(a, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise FieldError(f"array has entries outside [0, {self.q})")
        return arr

    # -- arithmetic ----------------------------------------------------------

    def _digitwise(self, a, b, sign: int):
        p = self.p
        out = 0
        place = 1
        for _ in range(self.m):
            out = out + ((a % p + sign * (b % p)) % p) * place
            a = a // p
            b = b // p
            place *= p
        return out

    def add(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            self.check(a), self.check(b)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        return self._digitwise(a, b, 1)

    def sub(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            self.check(a), self.check(b)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a - b) % self.p
        return self._digitwise(a, b, -1)

    def neg(self, a):
        if isinstance(a, int):
            self.check(a)
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        return self._digitwise(0 * a, a, -1)

    def mul(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            self.check(a), self.check(b)
            if self.m == 1:
                return (a * b) % self.p
            if self._exp is None:
                return poly_mul_code(a, b, self)
            return int(self._exp[self._log[a] + self._log[b]])
        if self.m == 1:
            return (a * b) % self.p
        if self._exp is None:
            return _generic_mul_ufunc(self)(a, b).astype(np.int64)
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if isinstance(a, (int, np.integer)):
            a = self.check(a)
            if a == 0:
                raise ZeroDivisionError(f"0 has no inverse in {self!r}")
            if self._exp is None:
                return self._slow_pow(a, self.q - 2)
            return int(self._exp[self.q - 1 - self._log[a]])
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        if self._exp is None:
            return np.vectorize(lambda v: self._slow_pow(int(v), self.q - 2), otypes=[np.int64])(a)
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        """Square-and-multiply; ``0**0 == 1``."""
        if e < 0:
            raise FieldError("negative exponents are not supported; use inv")
        if isinstance(a, int):
            self.check(a)
        result = a * 0 + 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- enumeration and sampling ------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def random(self, rng: np.random.Generator, size=None):
        v = rng.integers(0, self.q, size=size, dtype=np.int64)
        return int(v) if size is None else v

    def random_nonzero(self, rng: np.random.Generator, size=None):
        v = rng.integers(1, self.q, size=size, dtype=np.int64)
        return int(v) if size is None else v

    # -- vector helpers used everywhere -------------------------------------

    def dot(self, a, b) -> int:
        """Inner product of two 1-d arrays."""
        prod = self.mul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return int(self.sum(prod))

    def sum(self, a, axis=None):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        # odd characteristic extension: digitwise reduction
        p = self.p
        out = 0
        place = 1
        rest = a
        for _ in range(self.m):
            out = out + (((rest % p).sum(axis=axis)) % p) * place
            rest = rest // p
            place *= p
        return out


@functools.lru_cache(maxsize=None)
def _generic_mul_ufunc(field: Field):
    return np.frompyfunc(lambda x, y: poly_mul_code(int(x), int(y), field), 2, 1)


@functools.lru_cache(maxsize=None)
def gf_from(p: int, m: int, modulus: tuple[int, ...] | None = None) -> Field:
    return Field(p, m, modulus)


def gf(q: int, modulus: Sequence[int] | None = None) -> Field:
    """Field of order ``q`` (cached); ``q`` must be a prime power."""
    if q < 2:
        raise FieldError(f"field order must be >= 2, got {q}")
    factors = _prime_factors(q)
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = factors[0]
    m = 0
    v = q
    while v > 1:
        v //= p
        m += 1
    return gf_from(p, m, tuple(modulus) if modulus is not None else None)
