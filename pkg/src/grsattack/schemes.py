"""The three GRS-based encryption schemes under attack.

* Wieschebrink: McEliece with r random columns inserted into a GRS generator.
* Bogdanov-Lee: homomorphic scheme whose code is GRS except on a secret set L.
* BBCRS: McEliece where the permutation is replaced by Q = Pi + (rank one).

All randomness comes from an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matgf
from .codes import CodeError, LinearCode, contains, dual
from .field import Field, FieldError
from .grs import GrsSpec, random_grs_spec

__all__ = [
    "ParameterError",
    "DecryptionFailure",
    "WieschebrinkPublic",
    "WieschebrinkSecret",
    "WieschebrinkKeys",
    "wieschebrink_keygen",
    "wieschebrink_encrypt",
    "wieschebrink_decrypt",
    "BlPublic",
    "BlSecret",
    "BlKeys",
    "bl_keygen",
    "bl_noise",
    "bl_encrypt",
    "bl_decrypt",
    "bl_decryption_vector",
    "BbcrsPublic",
    "BbcrsSecret",
    "BbcrsKeys",
    "BbcrsDecryption",
    "bbcrs_keygen",
    "bbcrs_encrypt",
    "bbcrs_decrypt",
    "bbcrs_decrypt_report",
    "pick_candidate",
    "random_error",
    "solve_message",
]


class ParameterError(FieldError):
    """Parameters outside the scheme's admissible range."""


class DecryptionFailure(Exception):
    """The ciphertext could not be decoded."""


def random_error(field: Field, n: int, weight: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform error vector of exactly the given Hamming weight."""
    if not 0 <= weight <= n:
        raise ParameterError(f"error weight {weight} out of range for length {n}")
    e = np.zeros(n, dtype=np.int64)
    pos = rng.choice(n, size=weight, replace=False)
    e[pos] = field.random_nonzero(rng, weight)
    return e


def solve_message(G, c, field: Field) -> np.ndarray | None:
    """Some m with m G = c, or None if c is not in the row space."""
    return matgf.solve(np.asarray(G).T, c, field)


def _field_obj(field: Field) -> dict:
    return field.to_json()


def _mat(obj, field):
    return matgf.matrix_from_json(obj, field)


def _vec(values, field: Field) -> np.ndarray:
    return field.check(np.asarray(values, dtype=np.int64).reshape(-1))


def _check_keys(obj: dict, *names: str) -> None:
    for name in names:
        if name not in obj:
            raise CodeError(f"key file is missing field {name!r}")


# -- Wieschebrink --------------------------------------------------------------


@dataclass
class WieschebrinkPublic:
    field: Field
    G_pub: np.ndarray
    n: int
    k: int
    r: int

    @property
    def t(self) -> int:
        return (self.n - self.k) // 2

    def code(self) -> LinearCode:
        return LinearCode(self.field, self.G_pub)

    def to_json(self) -> dict:
        return {
            "scheme": "wieschebrink",
            "field": _field_obj(self.field),
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "G_pub": matgf.matrix_to_json(self.G_pub),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WieschebrinkPublic":
        _check_keys(obj, "field", "n", "k", "r", "G_pub")
        F = Field.from_json(obj["field"])
        pk = cls(F, _mat(obj["G_pub"], F), int(obj["n"]), int(obj["k"]), int(obj["r"]))
        if pk.G_pub.shape != (pk.k, pk.n + pk.r):
            raise CodeError(f"G_pub has shape {pk.G_pub.shape}, expected {(pk.k, pk.n + pk.r)}")
        return pk


@dataclass
class WieschebrinkSecret:
    spec: GrsSpec
    random_cols: np.ndarray  # k x r
    S: np.ndarray
    perm: np.ndarray  # Q^{-1} = permutation_matrix(perm)

    @property
    def Q(self) -> np.ndarray:
        return matgf.permutation_matrix(self.perm).T

    @property
    def random_positions(self) -> list[int]:
        """Public coordinates holding the inserted random columns."""
        n = self.spec.n
        return sorted(int(self.perm[j]) for j in range(n, self.perm.size))

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "random_cols": matgf.matrix_to_json(self.random_cols),
            "S": matgf.matrix_to_json(self.S),
            "perm": [int(v) for v in self.perm],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WieschebrinkSecret":
        _check_keys(obj, "spec", "random_cols", "S", "perm")
        spec = GrsSpec.from_json(obj["spec"])
        F = spec.field
        perm = np.asarray(obj["perm"], dtype=np.int64)
        if sorted(perm.tolist()) != list(range(perm.size)):
            raise CodeError("perm is not a permutation")
        return cls(spec, _mat(obj["random_cols"], F), _mat(obj["S"], F), perm)


@dataclass
class WieschebrinkKeys:
    public: WieschebrinkPublic
    secret: WieschebrinkSecret

    def to_json(self) -> dict:
        return {"scheme": "wieschebrink", "public": self.public.to_json(), "secret": self.secret.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "WieschebrinkKeys":
        _check_keys(obj, "public", "secret")
        return cls(WieschebrinkPublic.from_json(obj["public"]), WieschebrinkSecret.from_json(obj["secret"]))


def wieschebrink_keygen(field: Field, n: int, k: int, r: int, rng: np.random.Generator) -> WieschebrinkKeys:
    if not 1 <= k < n <= field.q:
        raise ParameterError(f"need 1 <= k < n <= q, got k={k}, n={n}, q={field.q}")
    if r < 0:
        raise ParameterError(f"need r >= 0, got r={r}")
    spec = random_grs_spec(field, n, k, rng)
    Gp = np.hstack([spec.generator(), field.random(rng, (k, r))])
    S = matgf.random_invertible(k, field, rng)
    perm = rng.permutation(n + r)
    S_inv = matgf.inverse(S, field)
    # G' Q^{-1}: column j of G' lands at public position perm[j]
    GQ = np.empty_like(Gp)
    GQ[:, perm] = Gp
    G_pub = matgf.matmul(S_inv, GQ, field)
    secret = WieschebrinkSecret(spec, Gp[:, n:], S, perm)
    return WieschebrinkKeys(WieschebrinkPublic(field, G_pub, n, k, r), secret)


def wieschebrink_encrypt(pk: WieschebrinkPublic, m, rng: np.random.Generator, e=None) -> np.ndarray:
    F = pk.field
    m = _vec(m, F)
    if m.size != pk.k:
        raise CodeError(f"message of length {m.size}, expected {pk.k}")
    if e is None:
        e = random_error(F, pk.n + pk.r, pk.t, rng)
    return F.add(matgf.matmul(m, pk.G_pub, F), np.asarray(e, dtype=np.int64))


def wieschebrink_decrypt(sk: WieschebrinkSecret, c) -> np.ndarray:
    spec = sk.spec
    F = spec.field
    c = _vec(c, F)
    if c.size != sk.perm.size:
        raise CodeError(f"ciphertext of length {c.size}, expected {sk.perm.size}")
    cq = c[sk.perm]  # c Q: undo the column shuffle
    res = spec.decode(cq[: spec.n])
    if res is None:
        raise DecryptionFailure("GRS decoding failed")
    return matgf.matmul(res.msg, sk.S, F)


# -- Bogdanov-Lee --------------------------------------------------------------


@dataclass
class BlPublic:
    field: Field
    P: np.ndarray
    ell: int

    @property
    def n(self) -> int:
        return self.P.shape[1]

    @property
    def k(self) -> int:
        return self.P.shape[0]

    def code(self) -> LinearCode:
        return LinearCode(self.field, self.P)

    def to_json(self) -> dict:
        return {"scheme": "bl", "field": _field_obj(self.field), "ell": self.ell, "P": matgf.matrix_to_json(self.P)}

    @classmethod
    def from_json(cls, obj: dict) -> "BlPublic":
        _check_keys(obj, "field", "ell", "P")
        F = Field.from_json(obj["field"])
        return cls(F, _mat(obj["P"], F), int(obj["ell"]))


@dataclass
class BlSecret:
    field: Field
    L: list[int]
    x: np.ndarray
    G: np.ndarray
    S: np.ndarray
    ell: int

    def to_json(self) -> dict:
        return {
            "field": _field_obj(self.field),
            "ell": self.ell,
            "L": [int(v) for v in self.L],
            "x": [int(v) for v in self.x],
            "G": matgf.matrix_to_json(self.G),
            "S": matgf.matrix_to_json(self.S),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BlSecret":
        _check_keys(obj, "field", "ell", "L", "x", "G", "S")
        F = Field.from_json(obj["field"])
        return cls(F, sorted(int(v) for v in obj["L"]), _vec(obj["x"], F), _mat(obj["G"], F), _mat(obj["S"], F), int(obj["ell"]))


@dataclass
class BlKeys:
    public: BlPublic
    secret: BlSecret

    def to_json(self) -> dict:
        return {"scheme": "bl", "public": self.public.to_json(), "secret": self.secret.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "BlKeys":
        _check_keys(obj, "public", "secret")
        return cls(BlPublic.from_json(obj["public"]), BlSecret.from_json(obj["secret"]))


def _bl_generator(field: Field, x: np.ndarray, L, k: int, ell: int) -> np.ndarray:
    # row j holds x^(j+1); columns in L are cut after the first ell rows
    G = np.empty((k, x.size), dtype=np.int64)
    G[0] = x
    for j in range(1, k):
        G[j] = field.mul(G[j - 1], x)
    G[ell:, list(L)] = 0
    return G


def bl_keygen(field: Field, n: int, k: int, ell: int, rng: np.random.Generator) -> BlKeys:
    if ell < 1:
        raise ParameterError("ell must be >= 1 (L cannot be empty)")
    if not (3 * ell < n and ell < k and n - 3 * ell >= k and n < field.q):
        raise ParameterError(
            f"need 3*ell < n, ell < k, n - 3*ell >= k and n < q; got n={n}, k={k}, ell={ell}, q={field.q}"
        )
    while True:
        L = sorted(int(v) for v in rng.choice(n, size=3 * ell, replace=False))
        x = rng.choice(np.arange(1, field.q, dtype=np.int64), size=n, replace=False)
        G = _bl_generator(field, x, L, k, ell)
        if matgf.rank(G, field) == k:
            break
    S = matgf.random_invertible(k, field, rng)
    P = matgf.matmul(S, G, field)
    return BlKeys(BlPublic(field, P, ell), BlSecret(field, L, x, G, S, ell))


def bl_noise(field: Field, n: int, eta: float, rng: np.random.Generator) -> np.ndarray:
    """q-ary symmetric channel: each entry is 0 w.p. 1 - eta, else uniform nonzero."""
    hit = rng.random(n) < eta
    e = np.zeros(n, dtype=np.int64)
    e[hit] = field.random_nonzero(rng, int(hit.sum()))
    return e


def bl_encrypt(pk: BlPublic, m: int, eta: float, rng: np.random.Generator, e=None) -> np.ndarray:
    F = pk.field
    m = F.check(int(m))
    x = F.random(rng, pk.k)
    if e is None:
        e = bl_noise(F, pk.n, eta, rng)
    return F.add(F.add(matgf.matmul(x, pk.P, F), m), np.asarray(e, dtype=np.int64))


def bl_decryption_vector(G, L, field: Field) -> np.ndarray:
    """A solution y of G y^T = 0, sum_{i in L} y_i = 1, y_i = 0 off L."""
    G = np.asarray(G, dtype=np.int64)
    L = sorted(int(v) for v in L)
    A = np.vstack([G[:, L], np.ones((1, len(L)), dtype=np.int64)])
    rhs = np.zeros(A.shape[0], dtype=np.int64)
    rhs[-1] = 1
    sol = matgf.solve(A, rhs, field)
    if sol is None:
        raise DecryptionFailure("decryption system is inconsistent")
    # spread y over all of L: the zero-free-variable solution only touches
    # ell + 1 positions; a deterministic generic one uses every position
    N = matgf.nullspace(A, field)
    best = sol
    for t in range(1, min(field.q, 16)):
        if not N.shape[0] or np.all(best != 0):
            break
        coeffs = np.array([field.pow(t, i + 1) for i in range(N.shape[0])], dtype=np.int64)
        cand = field.add(sol, matgf.matmul(coeffs, N, field))
        if np.count_nonzero(cand) > np.count_nonzero(best):
            best = cand
    y = np.zeros(G.shape[1], dtype=np.int64)
    y[L] = best
    return y


def bl_decrypt(sk: BlSecret, c) -> int:
    F = sk.field
    c = _vec(c, F)
    y = bl_decryption_vector(sk.G, sk.L, F)
    return F.dot(y, c)


# -- BBCRS ---------------------------------------------------------------------


@dataclass
class BbcrsPublic:
    field: Field
    G_pub: np.ndarray

    @property
    def k(self) -> int:
        return self.G_pub.shape[0]

    @property
    def n(self) -> int:
        return self.G_pub.shape[1]

    @property
    def t(self) -> int:
        return (self.n - self.k) // 2

    def code(self) -> LinearCode:
        return LinearCode(self.field, self.G_pub)

    def to_json(self) -> dict:
        return {"scheme": "bbcrs", "field": _field_obj(self.field), "G_pub": matgf.matrix_to_json(self.G_pub)}

    @classmethod
    def from_json(cls, obj: dict) -> "BbcrsPublic":
        _check_keys(obj, "field", "G_pub")
        F = Field.from_json(obj["field"])
        return cls(F, _mat(obj["G_pub"], F))


@dataclass
class BbcrsSecret:
    spec: GrsSpec
    S: np.ndarray
    perm: np.ndarray  # Pi = permutation_matrix(perm)
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def field(self) -> Field:
        return self.spec.field

    @property
    def Pi(self) -> np.ndarray:
        return matgf.permutation_matrix(self.perm)

    @property
    def Q(self) -> np.ndarray:
        F = self.field
        return F.add(self.Pi, matgf.outer(self.alpha, self.beta, F))

    @property
    def a(self) -> np.ndarray:
        """a = beta Pi^{-1}, so that R Pi^{-1} = b^T a with b = alpha."""
        return self.beta[self.perm]

    @property
    def b(self) -> np.ndarray:
        return self.alpha

    @property
    def lam(self) -> np.ndarray:
        """lambda = -b / (1 + <a, b>): public words are p + <p, lambda> a, p in C."""
        F = self.field
        s = F.add(F.dot(self.a, self.b), 1)
        return F.neg(F.mul(self.b, F.inv(s)))

    def hidden_code(self) -> LinearCode:
        """C = C_sec Pi^{-1}, the GRS code hiding behind the public one."""
        return self.hidden_spec().code()

    def hidden_spec(self) -> GrsSpec:
        # (v Pi^{-1})_j = v_{perm[j]}
        return GrsSpec(self.field, self.spec.k, self.spec.x[self.perm], self.spec.y[self.perm])

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "S": matgf.matrix_to_json(self.S),
            "perm": [int(v) for v in self.perm],
            "alpha": [int(v) for v in self.alpha],
            "beta": [int(v) for v in self.beta],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BbcrsSecret":
        _check_keys(obj, "spec", "S", "perm", "alpha", "beta")
        spec = GrsSpec.from_json(obj["spec"])
        F = spec.field
        perm = np.asarray(obj["perm"], dtype=np.int64)
        if sorted(perm.tolist()) != list(range(perm.size)):
            raise CodeError("perm is not a permutation")
        return cls(spec, _mat(obj["S"], F), perm, _vec(obj["alpha"], F), _vec(obj["beta"], F))


@dataclass
class BbcrsKeys:
    public: BbcrsPublic
    secret: BbcrsSecret

    def to_json(self) -> dict:
        return {"scheme": "bbcrs", "public": self.public.to_json(), "secret": self.secret.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "BbcrsKeys":
        _check_keys(obj, "public", "secret")
        return cls(BbcrsPublic.from_json(obj["public"]), BbcrsSecret.from_json(obj["secret"]))


BBCRS_MODES = ("generic", "any", "degenerate")


def bbcrs_keygen(field: Field, n: int, k: int, rng: np.random.Generator, mode: str = "generic") -> BbcrsKeys:
    """Keys with Q = Pi + alpha^T beta.

    ``mode`` selects the rank-one part: ``"generic"`` rejects the degenerate
    draws (a in C or lambda in C^perp, where the public code is plain GRS),
    ``"any"`` keeps every invertible Q, ``"degenerate"`` uses Q = Pi.
    """
    if not 1 <= k < n <= field.q:
        raise ParameterError(f"need 1 <= k < n <= q, got k={k}, n={n}, q={field.q}")
    if mode not in BBCRS_MODES:
        raise ParameterError(f"unknown mode {mode!r}; choose from {BBCRS_MODES}")
    spec = random_grs_spec(field, n, k, rng)
    S = matgf.random_invertible(k, field, rng)
    perm = rng.permutation(n)
    zero = np.zeros(n, dtype=np.int64)
    while True:
        if mode == "degenerate":
            alpha, beta = zero, zero
        else:
            alpha = field.random(rng, n)
            beta = field.random(rng, n)
            if not alpha.any() or not beta.any():
                continue
        sk = BbcrsSecret(spec, S, perm, alpha, beta)
        if mode != "degenerate":
            if field.add(field.dot(sk.a, sk.b), 1) == 0:
                continue  # Q singular
            if mode == "generic":
                C = sk.hidden_code()
                if contains(C, sk.a) or contains(dual(C), sk.lam):
                    continue
        break
    Q_inv = matgf.inverse(sk.Q, field)
    S_inv = matgf.inverse(S, field)
    G_pub = matgf.matmul(matgf.matmul(S_inv, spec.generator(), field), Q_inv, field)
    return BbcrsKeys(BbcrsPublic(field, G_pub), sk)


def bbcrs_encrypt(pk: BbcrsPublic, m, rng: np.random.Generator, weight: int | None = None, e=None) -> np.ndarray:
    F = pk.field
    m = _vec(m, F)
    if m.size != pk.k:
        raise CodeError(f"message of length {m.size}, expected {pk.k}")
    if e is None:
        w = pk.t if weight is None else int(weight)
        if w > pk.t:
            raise ParameterError(f"error weight {w} exceeds the correction capacity {pk.t}")
        e = random_error(F, pk.n, w, rng)
    return F.add(matgf.matmul(m, pk.G_pub, F), np.asarray(e, dtype=np.int64))


@dataclass(frozen=True)
class BbcrsDecryption:
    msg: np.ndarray
    gamma: int
    weight: int  # Hamming weight of c - msg G_pub
    tie: bool  # another message was also within decoding distance


def pick_candidate(cands: list[tuple[int, np.ndarray]]):
    """Canonical choice among messages within distance t: lightest residual, then smallest message."""
    return min(cands, key=lambda wm: (wm[0], tuple(int(v) for v in wm[1])))


def _bbcrs_candidates(sk: BbcrsSecret, c) -> list[tuple[int, np.ndarray, int]]:
    F = sk.field
    c = _vec(c, F)
    if c.size != sk.spec.n:
        raise CodeError(f"ciphertext of length {c.size}, expected {sk.spec.n}")
    Q = sk.Q
    Q_inv = matgf.inverse(Q, F)
    cq = matgf.matmul(c, Q, F)
    t = (sk.spec.n - sk.spec.k) // 2
    out = []
    seen = set()
    for g in [0] if not sk.beta.any() else range(F.q):
        res = sk.spec.decode(F.sub(cq, F.mul(sk.beta, g)))
        if res is None:
            continue
        # the residual e = c - m G_pub must be light and satisfy <e, alpha> = gamma
        e = matgf.matmul(F.sub(cq, res.codeword), Q_inv, F)
        w = int(np.count_nonzero(e))
        if w > t or F.dot(e, sk.alpha) != g:
            continue
        m = matgf.matmul(res.msg, sk.S, F)
        key = m.tobytes()
        if key not in seen:
            seen.add(key)
            out.append((w, m, g))
    return out


def bbcrs_decrypt_report(sk: BbcrsSecret, c) -> BbcrsDecryption:
    """Scan every guess gamma = <e, alpha> and report the canonical decryption.

    Every message whose public codeword lies within distance t of c shows up
    for exactly one gamma.  Usually there is one; if several exist the
    lightest residual wins (then the smallest message) and ``tie`` is set.
    """
    cands = _bbcrs_candidates(sk, c)
    if not cands:
        raise DecryptionFailure("no guess of <e, alpha> leads to a consistent decoding")
    w, m = pick_candidate([(w, m) for w, m, _ in cands])
    g = next(g for w2, m2, g in cands if m2 is m)
    return BbcrsDecryption(m, g, w, len(cands) > 1)


def bbcrs_decrypt(sk: BbcrsSecret, c) -> np.ndarray:
    return bbcrs_decrypt_report(sk, c).msg
