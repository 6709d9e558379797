"""Exact arithmetic in finite fields GF(p^r).

Scalars of GF(p) are python ints in [0, p).  Scalars of GF(p^r), r > 1, are
numpy int64 arrays of shape (r,) holding low-to-high coefficients of a
residue class of GF(p)[X] modulo a stored monic irreducible of degree r.
Arrays of scalars carry the coefficient axis last, so a matrix over GF(p^r)
has shape (n, m, r) and one over GF(p) has shape (n, m).

All intermediate products stay below 2**63: entries are reduced to [0, p)
after every multiply, and the largest accumulated dot here is
n * (p-1)**2 * r with n <= a few hundred and p <= 40000.
"""

from __future__ import annotations

import math
import random

import numpy as np

_PRIME_CACHE: set[int] = set()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n in _PRIME_CACHE:
        return True
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, valid far beyond 2**63
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    _PRIME_CACHE.add(n)
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization, adequate for the group orders used here."""
    assert n >= 1
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class NotInSubgroup(Exception):
    """discrete_log target outside the subgroup generated by the base."""


class FieldTooSmall(Exception):
    """Interpolation grid does not fit into the field."""


class Fq:
    """A finite field GF(p^r) with a stored primitive element.

    For r > 1 the modulus is a monic irreducible over GF(p), stored as an
    int64 array of r+1 low-to-high coefficients.  The primitive element is
    found by seeded random search and certified by an order computation
    against the factorization of q - 1, so its value depends on the seed and
    is an artifact of the run, not a portable constant.
    """

    __slots__ = ("p", "r", "q", "modulus", "primitive_elem", "_red", "_fact")

    def __init__(self, p: int, r: int = 1, modulus=None, seed: int = 0):
        assert is_prime(p), p
        assert r >= 1
        self.p = p
        self.r = r
        self.q = p**r
        rng = random.Random((p, r, seed).__hash__())
        if r == 1:
            self.modulus = None
            self._red = None
        else:
            if modulus is None:
                modulus = _find_irreducible(p, r, rng)
            modulus = np.asarray(modulus, dtype=np.int64) % p
            assert modulus.shape == (r + 1,) and modulus[r] == 1
            assert _is_irreducible(p, modulus), "modulus must be irreducible"
            self.modulus = modulus
            self._red = _reduction_matrix(p, modulus)
        self._fact = factorize(self.q - 1)
        self.primitive_elem = self._find_primitive(rng)

    # -- scalar representation ------------------------------------------------

    def zero(self):
        return 0 if self.r == 1 else np.zeros(self.r, dtype=np.int64)

    def one(self):
        return self.from_int(1)

    def from_int(self, i: int):
        """Embed an integer via the prime subfield."""
        if self.r == 1:
            return i % self.p
        a = np.zeros(self.r, dtype=np.int64)
        a[0] = i % self.p
        return a

    def gen(self):
        """The class of X itself (r > 1 only)."""
        assert self.r > 1
        a = np.zeros(self.r, dtype=np.int64)
        a[1] = 1
        return a

    def elem(self, v):
        """Coerce an int or coefficient sequence to canonical scalar form."""
        if self.r == 1:
            if isinstance(v, (int, np.integer)):
                return int(v) % self.p
            v = np.asarray(v)
            assert v.shape in ((), (1,))
            return int(v.reshape(())) % self.p
        if isinstance(v, (int, np.integer)):
            return self.from_int(int(v))
        a = np.asarray(v, dtype=np.int64) % self.p
        assert a.shape == (self.r,), a.shape
        return a

    def index_of(self, a) -> int:
        """Bijection onto range(q): sum of coefficients in base p."""
        if self.r == 1:
            return int(a)
        return int(sum(int(c) * self.p**k for k, c in enumerate(a)))

    def elem_at(self, i: int):
        if self.r == 1:
            assert 0 <= i < self.p
            return i
        a = np.zeros(self.r, dtype=np.int64)
        for k in range(self.r):
            i, c = divmod(i, self.p)
            a[k] = c
        assert i == 0
        return a

    def is_zero(self, a) -> bool:
        return a == 0 if self.r == 1 else not a.any()

    def eq(self, a, b) -> bool:
        if self.r == 1:
            return a == b
        return bool(np.array_equal(a, b))

    # -- scalar arithmetic ----------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        if self.r == 1:
            return a * b % self.p
        conv = np.convolve(a, b) % self.p
        return conv @ self._red[: conv.shape[0]] % self.p

    def inv(self, a):
        assert not self.is_zero(a)
        if self.r == 1:
            return pow(int(a), self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        e = int(e)
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc, base = self.one(), a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def order(self, a) -> int:
        assert not self.is_zero(a)
        n = self.q - 1
        for l, k in self._fact.items():
            for _ in range(k):
                if self.eq(self.pow(a, n // l), self.one()):
                    n //= l
                else:
                    break
        return n

    def rand(self, rng):
        """rng is either random.Random or numpy Generator."""
        draw = (
            (lambda: rng.randrange(self.p))
            if hasattr(rng, "randrange")
            else (lambda: int(rng.integers(0, self.p)))
        )
        if self.r == 1:
            return draw()
        return np.array([draw() for _ in range(self.r)], dtype=np.int64)

    def rand_nonzero(self, rng: random.Random):
        while True:
            a = self.rand(rng)
            if not self.is_zero(a):
                return a

    def elements(self):
        for i in range(self.q):
            yield self.elem_at(i)

    def _find_primitive(self, rng: random.Random):
        for _ in range(10_000):
            a = self.rand_nonzero(rng)
            if self.order(a) == self.q - 1:
                return a
        raise AssertionError("no primitive element found")

    # -- batched arithmetic on arrays with trailing coefficient axis ----------

    def varr(self, nested) -> np.ndarray:
        """Build an array of scalars from nested sequences of ints/scalars."""
        a = np.asarray(nested, dtype=np.int64) % self.p
        if self.r > 1:
            assert a.shape[-1] == self.r, a.shape
        return a

    def vadd(self, A, B):
        return (A + B) % self.p

    def vsub(self, A, B):
        return (A - B) % self.p

    def vneg(self, A):
        return (-A) % self.p

    def vmul(self, A, B):
        """Elementwise product; A, B broadcast over leading axes."""
        if self.r == 1:
            return A * B % self.p
        A, B = np.broadcast_arrays(A, B)
        out = np.zeros(A.shape[:-1] + (2 * self.r - 1,), dtype=np.int64)
        for i in range(self.r):
            for j in range(self.r):
                out[..., i + j] += A[..., i] * B[..., j]
        out %= self.p
        return out @ self._red % self.p

    def vscale(self, A, s):
        """Scalar times array of scalars; s may be an int (prime subfield)."""
        if self.r == 1:
            return A * int(s) % self.p
        s = self.elem(s)
        return self.vmul(A, np.broadcast_to(s, A.shape))

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Exact product of scalar matrices (n,k[,r]) x (k,m[,r])."""
        if self.r == 1:
            return A @ B % self.p
        n, k = A.shape[0], A.shape[1]
        m = B.shape[1]
        full = np.zeros((n, m, 2 * self.r - 1), dtype=np.int64)
        for i in range(self.r):
            for j in range(self.r):
                full[:, :, i + j] += A[:, :, i] @ B[:, :, j] % self.p
        full %= self.p
        return full @ self._red % self.p

    def vsum(self, A, axis):
        return A.sum(axis=axis) % self.p

    def __repr__(self):
        if self.r == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.r}; mod {list(map(int, self.modulus))})"


# -- polynomial helpers on raw int64 coefficient vectors over GF(p) -----------


def _poly_mul_p(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b) % p


def _poly_mod_p(p: int, a: np.ndarray, f: np.ndarray) -> np.ndarray:
    a = a % p
    df = len(f) - 1
    assert f[df] == 1
    a = a.copy()
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k]
        if c:
            a[k - df : k + 1] = (a[k - df : k + 1] - c * f) % p
    out = np.zeros(df, dtype=np.int64)
    m = min(df, len(a))
    out[:m] = a[:m]
    return out


def _poly_powmod_p(p: int, a: np.ndarray, e: int, f: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(f) - 1, dtype=np.int64)
    acc[0] = 1
    base = _poly_mod_p(p, a, f)
    while e:
        if e & 1:
            acc = _poly_mod_p(p, _poly_mul_p(p, acc, base), f)
        base = _poly_mod_p(p, _poly_mul_p(p, base, base), f)
        e >>= 1
    return acc


def _poly_gcd_p(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    def deg(x):
        nz = np.nonzero(x)[0]
        return nz[-1] if len(nz) else -1

    a, b = a % p, b % p
    while deg(b) >= 0:
        da, db = deg(a), deg(b)
        if da < db:
            a, b = b, a
            continue
        lead = int(b[deg(b)])
        binv = pow(lead, p - 2, p)
        while deg(a) >= deg(b) >= 0:
            sh = deg(a) - deg(b)
            c = int(a[deg(a)]) * binv % p
            a[sh : sh + deg(b) + 1] = (a[sh : sh + deg(b) + 1] - c * b[: deg(b) + 1]) % p
        a, b = b, a
    d = deg(a)
    assert d >= 0
    lead_inv = pow(int(a[d]), p - 2, p)
    return a[: d + 1] * lead_inv % p


def _is_irreducible(p: int, f: np.ndarray) -> bool:
    r = len(f) - 1
    if r <= 0:
        return False
    x = np.array([0, 1], dtype=np.int64)
    # X^(p^r) == X mod f
    t = _poly_mod_p(p, x, f)
    for _ in range(r):
        t = _poly_powmod_p(p, t, p, f)
    xr = _poly_mod_p(p, x, f)
    if not np.array_equal(t, xr):
        return False
    for l in factorize(r):
        t = _poly_mod_p(p, x, f)
        for _ in range(r // l):
            t = _poly_powmod_p(p, t, p, f)
        diff = (t - xr) % p
        if not diff.any():
            return False
        g = _poly_gcd_p(p, np.append(diff, 0), f)
        if len(g) - 1 > 0:
            return False
    return True


def _find_irreducible(p: int, r: int, rng: random.Random) -> np.ndarray:
    # prefer binomials X^r - c, fall back to random monics
    for c in range(1, min(p, 200)):
        f = np.zeros(r + 1, dtype=np.int64)
        f[r] = 1
        f[0] = (-c) % p
        if _is_irreducible(p, f):
            return f
    while True:
        f = np.array([rng.randrange(p) for _ in range(r)] + [1], dtype=np.int64)
        if _is_irreducible(p, f):
            return f


def _reduction_matrix(p: int, f: np.ndarray) -> np.ndarray:
    """Rows k = 0..2r-2: coefficients of X^k mod f."""
    r = len(f) - 1
    R = np.zeros((2 * r - 1, r), dtype=np.int64)
    cur = np.zeros(r, dtype=np.int64)
    cur[0] = 1
    for k in range(2 * r - 1):
        R[k] = cur
        nxt = np.zeros(2 * r, dtype=np.int64)
        nxt[1 : r + 1] = cur
        cur = _poly_mod_p(p, nxt, f)
    return R


# -- discrete logarithms ------------------------------------------------------


def discrete_log(F: Fq, base, target) -> int:
    """Smallest e >= 0 with base^e == target, by baby-step giant-step.

    Raises NotInSubgroup when target is outside <base>.  Subgroup orders in
    use stay below 2**32, so the sqrt tables stay tiny.
    """
    assert not F.is_zero(base) and not F.is_zero(target)
    n = F.order(base)
    assert n < 2**32
    m = math.isqrt(n) + 1
    baby: dict[bytes, int] = {}
    e = F.one()
    for j in range(m):
        baby.setdefault(_key(F, e), j)
        e = F.mul(e, base)
    # e == base^m now; giant steps multiply by base^-m
    ginv = F.inv(e)
    g = target
    for i in range(m + 1):
        j = baby.get(_key(F, g))
        if j is not None:
            out = (i * m + j) % n
            assert F.eq(F.pow(base, out), target)
            return out
        g = F.mul(g, ginv)
    raise NotInSubgroup(f"no discrete log of {target} to base {base}")


def _key(F: Fq, a) -> bytes:
    if F.r == 1:
        return int(a).to_bytes(8, "little")
    return a.tobytes()


def embed_hom(F_small: Fq, F_big: Fq):
    """A field embedding GF(p^r) -> GF(p^m), r | m, as a callable on scalars.

    Sends the small generator to a root of the small modulus in the big
    field.  For r == 1 this is the constant embedding.
    """
    assert F_small.p == F_big.p
    assert F_big.r % max(F_small.r, 1) == 0
    if F_small.r == 1:
        def emb(a, _F=F_big):
            return _F.from_int(int(a))
        return emb
    from .poly import Poly  # local import, poly depends on field

    f = Poly(F_big, [F_big.from_int(int(c)) for c in F_small.modulus])
    roots = f.roots()
    assert roots, "modulus must split in the bigger field"
    root = min(roots, key=F_big.index_of)
    pows = [F_big.one()]
    for _ in range(F_small.r - 1):
        pows.append(F_big.mul(pows[-1], root))

    def emb(a, _F=F_big, _pows=pows):
        acc = _F.zero()
        for c, pw in zip(a, _pows):
            acc = _F.add(acc, _F.vscale(pw, int(c)))
        return acc

    return emb
