"""Univariate polynomials over GF(p^r), low-to-high coefficients.

Coefficient storage is an int64 array of shape (n,) over a prime field and
(n, r) otherwise.  The zero polynomial has an empty coefficient array and
degree -1.
"""

from __future__ import annotations

import random

import numpy as np

from .field import Fq, factorize


class Poly:
    __slots__ = ("F", "c")

    def __init__(self, F: Fq, coeffs):
        self.F = F
        if isinstance(coeffs, Poly):
            coeffs = coeffs.c
        if isinstance(coeffs, (list, tuple)) and coeffs and not isinstance(
            coeffs[0], (int, np.integer)
        ):
            a = np.stack([F.elem(x) for x in coeffs]) if coeffs else np.zeros(0)
        else:
            a = np.asarray(coeffs, dtype=np.int64)
            if F.r > 1 and (a.ndim == 1):
                # ints embed through the prime subfield
                b = np.zeros((len(a), F.r), dtype=np.int64)
                b[:, 0] = a
                a = b
        a = np.asarray(a, dtype=np.int64) % F.p
        self.c = _trim(F, a)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, F: Fq) -> "Poly":
        return cls(F, np.zeros((0,) if F.r == 1 else (0, F.r), dtype=np.int64))

    @classmethod
    def one(cls, F: Fq) -> "Poly":
        return cls.constant(F, F.one())

    @classmethod
    def constant(cls, F: Fq, a) -> "Poly":
        if F.is_zero(F.elem(a)):
            return cls.zero(F)
        return cls(F, np.asarray(F.elem(a), dtype=np.int64).reshape(1, -1) if F.r > 1
                   else np.array([a], dtype=np.int64))

    @classmethod
    def x(cls, F: Fq) -> "Poly":
        return cls.from_scalars(F, [F.zero(), F.one()])

    @classmethod
    def from_scalars(cls, F: Fq, scalars) -> "Poly":
        scalars = [F.elem(s) for s in scalars]
        if F.r == 1:
            return cls(F, np.array(scalars, dtype=np.int64))
        if not scalars:
            return cls.zero(F)
        return cls(F, np.stack(scalars))

    def coeff(self, k: int):
        if k >= len(self.c):
            return self.F.zero()
        return self.c[k] if self.F.r == 1 else self.c[k].copy()

    def scalars(self) -> list:
        return [self.coeff(k) for k in range(len(self.c))]

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def is_monic(self) -> bool:
        return self.degree >= 0 and self.F.eq(self.coeff(self.degree), self.F.one())

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and np.array_equal(self.c, other.c)

    def __hash__(self):
        return hash(self.c.tobytes())

    def __repr__(self):
        return f"Poly({self.c.tolist()})"

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = _pad(self.F, self.c, other.c)
        return Poly(self.F, (a + b) % self.F.p)

    def __sub__(self, other: "Poly") -> "Poly":
        a, b = _pad(self.F, self.c, other.c)
        return Poly(self.F, (a - b) % self.F.p)

    def __neg__(self) -> "Poly":
        return Poly(self.F, (-self.c) % self.F.p)

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.F
        if self.is_zero() or other.is_zero():
            return Poly.zero(F)
        n, m = len(self.c), len(other.c)
        if F.r == 1:
            return Poly(F, np.convolve(self.c, other.c) % F.p)
        out = np.zeros((n + m - 1, F.r), dtype=np.int64)
        for k in range(m):
            if other.c[k].any():
                out[k : k + n] = (out[k : k + n] + F.vmul(self.c, other.c[k])) % F.p
        return Poly(F, out)

    def scale(self, s) -> "Poly":
        F = self.F
        return Poly(F, F.vscale(self.c, F.elem(s)))

    def monic(self) -> "Poly":
        assert not self.is_zero()
        return self.scale(self.F.inv(self.coeff(self.degree)))

    def shift(self, k: int) -> "Poly":
        """Multiply by X^k."""
        if self.is_zero():
            return self
        pad = np.zeros((k,) if self.F.r == 1 else (k, self.F.r), dtype=np.int64)
        return Poly(self.F, np.concatenate([pad, self.c]))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        F = self.F
        assert not other.is_zero()
        rem = self.c.copy()
        db = other.degree
        q_len = max(len(self.c) - db, 0)
        qc = np.zeros((q_len,) if F.r == 1 else (q_len, F.r), dtype=np.int64)
        lead_inv = F.inv(other.coeff(db))
        for k in range(len(rem) - 1, db - 1, -1):
            ck = rem[k] if F.r == 1 else rem[k]
            if F.is_zero(ck if F.r == 1 else ck):
                continue
            f = F.mul(F.elem(ck), lead_inv)
            qc[k - db] = f
            rem[k - db : k + 1] = (rem[k - db : k + 1] - F.vscale(other.c, f)) % F.p
        return Poly(F, qc), Poly(F, rem[:db] if db > 0 else rem[:0])

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def pow_mod(self, e: int, mod: "Poly") -> "Poly":
        acc = Poly.one(self.F) % mod
        base = self % mod
        while e:
            if e & 1:
                acc = (acc * base) % mod
            base = (base * base) % mod
            e >>= 1
        return acc

    def derivative(self) -> "Poly":
        if self.degree < 1:
            return Poly.zero(self.F)
        ks = np.arange(1, len(self.c), dtype=np.int64) % self.F.p
        if self.F.r == 1:
            return Poly(self.F, self.c[1:] * ks % self.F.p)
        return Poly(self.F, self.c[1:] * ks[:, None] % self.F.p)

    def eval(self, x):
        """Horner evaluation at a scalar."""
        F = self.F
        acc = F.zero()
        for k in range(len(self.c) - 1, -1, -1):
            acc = F.add(F.mul(acc, x), self.coeff(k))
        return acc

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized Horner over an array of scalars (trailing coeff axis)."""
        F = self.F
        shape = xs.shape[:-1] if F.r > 1 else xs.shape
        acc = np.zeros(shape + ((F.r,) if F.r > 1 else ()), dtype=np.int64)
        for k in range(len(self.c) - 1, -1, -1):
            acc = F.vadd(F.vmul(acc, xs), np.broadcast_to(self.c[k], acc.shape))
        return acc

    # -- roots, factorization, minimal polynomials ----------------------------

    def roots(self) -> list:
        """Distinct roots in the coefficient field.

        Equal-degree splitting is applied only to the product of the linear
        factors, so irreducible factors of higher degree are never split.
        Small fields take the direct scan.
        """
        F = self.F
        assert not self.is_zero()
        if self.degree == 0:
            return []
        if F.q <= 4096:
            out = []
            if F.r == 1:
                vals = self.eval_many(np.arange(F.q, dtype=np.int64))
                out = [int(x) for x in np.nonzero(vals == 0)[0]]
            else:
                for a in F.elements():
                    if F.is_zero(self.eval(a)):
                        out.append(a)
            return out
        f = self.monic()
        # gcd with X^q - X isolates the product of distinct linear factors
        xq = Poly.x(F).pow_mod(F.q, f)
        lin = f.gcd(xq - Poly.x(F))
        return _split_linear(lin, random.Random(0xC0FFEE ^ F.q))

    def factor(self) -> list[tuple["Poly", int]]:
        """Full factorization into monic irreducibles with multiplicities.

        Cantor-Zassenhaus; odd field order only (the even case is never
        needed by callers).
        """
        F = self.F
        assert F.q % 2 == 1, "factorization implemented for odd order fields"
        assert not self.is_zero()
        work = self.monic()
        out: dict[Poly, int] = {}
        rng = random.Random(0x5EED ^ F.q)
        for g in _squarefree_parts(work):
            for h in _ddf(g):
                for irr in _edf_all(h[0], h[1], rng):
                    mult = 0
                    while (work % irr).is_zero():
                        work = work // irr
                        mult += 1
                    if mult:
                        out[irr] = out.get(irr, 0) + mult
        assert work.degree == 0
        return sorted(out.items(), key=lambda kv: (kv[0].degree, kv[0].c.tobytes()))


def min_poly_over_prime(F: Fq, a) -> np.ndarray:
    """Minimal polynomial over GF(p) of a scalar of GF(p^r).

    Returns low-to-high int coefficients (a plain int64 array).  The product
    over the Frobenius orbit of (X - a^(p^i)) has prime-field coefficients;
    this is asserted, not assumed.
    """
    a = F.elem(a)
    if F.r == 1:
        return np.array([(-a) % F.p, 1], dtype=np.int64)
    orbit = [a]
    cur = F.pow(a, F.p)
    while not F.eq(cur, a):
        orbit.append(cur)
        cur = F.pow(cur, F.p)
    prod = Poly.one(F)
    for b in orbit:
        prod = prod * Poly.from_scalars(F, [F.neg(b), F.one()])
    coeffs = []
    for k in range(len(prod.c)):
        s = prod.coeff(k)
        assert not s[1:].any(), "minimal polynomial must have prime-field coefficients"
        coeffs.append(int(s[0]))
    return np.array(coeffs, dtype=np.int64)


def roots_in_field(F: Fq, coeffs) -> list:
    """Spec-level wrapper: distinct roots of the given polynomial in F."""
    return Poly(F, coeffs).roots()


def lagrange_interpolate(F: Fq, xs: list, ys: list) -> Poly:
    """The unique polynomial of degree < len(xs) through the given points."""
    assert len(xs) == len(ys)
    n = len(xs)
    acc = Poly.zero(F)
    for i in range(n):
        num = Poly.one(F)
        denom = F.one()
        for j in range(n):
            if j == i:
                continue
            num = num * Poly.from_scalars(F, [F.neg(xs[j]), F.one()])
            denom = F.mul(denom, F.sub(xs[i], xs[j]))
        acc = acc + num.scale(F.mul(ys[i], F.inv(denom)))
    return acc


def _trim(F: Fq, a: np.ndarray) -> np.ndarray:
    if F.r == 1:
        nz = np.nonzero(a)[0]
    else:
        nz = np.nonzero(a.any(axis=1))[0] if len(a) else np.array([], dtype=int)
    n = (nz[-1] + 1) if len(nz) else 0
    return np.ascontiguousarray(a[:n])


def _pad(F: Fq, a: np.ndarray, b: np.ndarray):
    n = max(len(a), len(b))
    shape = (n,) if F.r == 1 else (n, F.r)
    aa, bb = np.zeros(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64)
    aa[: len(a)] = a
    bb[: len(b)] = b
    return aa, bb


def _split_linear(lin: Poly, rng: random.Random) -> list:
    """Roots of a product of distinct linear factors, by random splitting."""
    F = lin.F
    if lin.degree <= 0:
        return []
    if lin.degree == 1:
        lin = lin.monic()
        return [F.neg(lin.coeff(0))]
    # gcd with (X + c)^((q-1)/2) - 1 splits the roots into two batches
    while True:
        c = F.rand(rng)
        probe = Poly.from_scalars(F, [c, F.one()]).pow_mod((F.q - 1) // 2, lin) - Poly.one(F)
        g = lin.gcd(probe)
        if 0 < g.degree < lin.degree:
            return _split_linear(g, rng) + _split_linear(lin // g, rng)


def _squarefree_parts(f: Poly) -> list[Poly]:
    """Coarse squarefree decomposition, enough to feed distinct-degree steps."""
    out = []
    work = f.monic()
    while work.degree > 0:
        d = work.derivative()
        if d.is_zero():
            # perfect p-th power: strip one X^p layer, taking p-th roots of
            # the surviving coefficients (identity on the prime field)
            F = work.F
            assert all(k % F.p == 0 for k in range(len(work.c)) if _nonzero_at(work, k))
            scal = [F.pow(F.elem(c), F.q // F.p) for c in work.c[:: F.p]]
            work = Poly.from_scalars(F, scal)
            continue
        g = work.gcd(d)
        sq = work // g
        if sq.degree > 0:
            out.append(sq.monic())
        work = g
    return out


def _nonzero_at(f: Poly, k: int) -> bool:
    return not f.F.is_zero(f.coeff(k))


def _ddf(f: Poly) -> list[tuple[Poly, int]]:
    """Distinct-degree factorization of a squarefree monic polynomial."""
    F = f.F
    out = []
    work = f
    x = Poly.x(F)
    h = x
    d = 0
    while work.degree > 0:
        d += 1
        if 2 * d > work.degree:
            out.append((work, work.degree))
            break
        h = h.pow_mod(F.q, work)
        g = work.gcd(h - x)
        if g.degree > 0:
            out.append((g, d))
            work = work // g
            h = h % work
    return out


def _edf_all(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Equal-degree splitting: f a product of irreducibles, all of degree d."""
    F = f.F
    if f.degree == d:
        return [f.monic()]
    while True:
        a = Poly.from_scalars(F, [F.rand(rng) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        probe = a.pow_mod((F.q**d - 1) // 2, f) - Poly.one(F)
        g = f.gcd(probe)
        if 0 < g.degree < f.degree:
            return _edf_all(g, d, rng) + _edf_all(f // g, d, rng)
