"""Dense exact matrices over GF(p^r) with the solvers the rest needs.

Row reduction uses the first nonzero entry of the remaining rows as pivot.
Everything is exact int64; products are reduced modulo p eagerly so no
accumulated dot exceeds n * p^2 < 2**63 for the sizes in play.

kernel and solve_affine keep column semantics (A x = 0, A x = b); callers
that think in row vectors transpose at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldTooSmall, Fq
from .poly import Poly


class NoLDU(Exception):
    """A leading principal minor vanishes, so M has no LDU factorization."""


class Mat:
    __slots__ = ("F", "a")

    def __init__(self, F: Fq, a):
        self.F = F
        a = np.asarray(a, dtype=np.int64) % F.p
        if F.r == 1:
            assert a.ndim == 2, a.shape
        else:
            if a.ndim == 2:
                b = np.zeros(a.shape + (F.r,), dtype=np.int64)
                b[:, :, 0] = a
                a = b
            assert a.ndim == 3 and a.shape[2] == F.r, a.shape
        self.a = a

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, F: Fq, n: int, m: int) -> "Mat":
        shape = (n, m) if F.r == 1 else (n, m, F.r)
        return cls(F, np.zeros(shape, dtype=np.int64))

    @classmethod
    def eye(cls, F: Fq, n: int) -> "Mat":
        M = cls.zeros(F, n, n)
        if F.r == 1:
            np.fill_diagonal(M.a, 1)
        else:
            M.a[np.arange(n), np.arange(n), 0] = 1
        return M

    @classmethod
    def from_scalar_rows(cls, F: Fq, rows) -> "Mat":
        data = [[F.elem(x) for x in row] for row in rows]
        if F.r == 1:
            return cls(F, np.array(data, dtype=np.int64))
        return cls(F, np.stack([np.stack(row) for row in data]))

    @classmethod
    def diagonal(cls, F: Fq, scalars) -> "Mat":
        n = len(scalars)
        M = cls.zeros(F, n, n)
        for i, s in enumerate(scalars):
            M.a[i, i] = F.elem(s)
        return M

    def copy(self) -> "Mat":
        return Mat(self.F, self.a.copy())

    # -- shape and access -----------------------------------------------------

    @property
    def nrows(self) -> int:
        return self.a.shape[0]

    @property
    def ncols(self) -> int:
        return self.a.shape[1]

    def entry(self, i: int, j: int):
        return self.a[i, j] if self.F.r == 1 else self.a[i, j].copy()

    def row(self, i: int) -> np.ndarray:
        return self.a[i].copy()

    def col(self, j: int) -> np.ndarray:
        return self.a[:, j].copy()

    def set_entry(self, i: int, j: int, v):
        self.a[i, j] = self.F.elem(v)

    def transpose(self) -> "Mat":
        return Mat(self.F, np.swapaxes(self.a, 0, 1))

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def submatrix(self, rows, cols) -> "Mat":
        return Mat(self.F, self.a[np.ix_(rows, cols)])

    @staticmethod
    def vstack(mats: list["Mat"]) -> "Mat":
        F = mats[0].F
        return Mat(F, np.concatenate([m.a for m in mats], axis=0))

    @staticmethod
    def hstack(mats: list["Mat"]) -> "Mat":
        F = mats[0].F
        return Mat(F, np.concatenate([m.a for m in mats], axis=1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat)
            and self.F.p == other.F.p
            and self.F.r == other.F.r
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        return hash(self.a.tobytes())

    def key(self) -> bytes:
        return self.a.tobytes()

    def __repr__(self):
        return f"Mat({self.F}, {self.nrows}x{self.ncols})"

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == Mat.eye(self.F, self.nrows)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        return Mat(self.F, (self.a + other.a) % self.F.p)

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat(self.F, (self.a - other.a) % self.F.p)

    def __neg__(self) -> "Mat":
        return Mat(self.F, (-self.a) % self.F.p)

    def __matmul__(self, other: "Mat") -> "Mat":
        return Mat(self.F, self.F.matmul(self.a, other.a))

    def scale(self, s) -> "Mat":
        return Mat(self.F, self.F.vscale(self.a, self.F.elem(s)))

    def mul_vec(self, v: np.ndarray) -> np.ndarray:
        """Row vector times matrix: v -> v @ M."""
        return _row_times(self, v)

    def pow(self, e: int) -> "Mat":
        assert self.nrows == self.ncols
        if e < 0:
            return self.inv().pow(-e)
        acc = Mat.eye(self.F, self.nrows)
        base = self
        while e:
            if e & 1:
                acc = acc @ base
            base = base @ base
            e >>= 1
        return acc

    def trace(self):
        F = self.F
        acc = F.zero()
        for i in range(min(self.nrows, self.ncols)):
            acc = F.add(acc, self.entry(i, i))
        return acc

    # -- elimination-backed operations ---------------------------------------

    def rref(self) -> tuple["Mat", list[int]]:
        a = self.a.copy()
        piv = _rref_inplace(self.F, a)
        return Mat(self.F, a), piv

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self):
        assert self.nrows == self.ncols
        F = self.F
        a = self.a.copy()
        n = self.nrows
        detv = F.one()
        for k in range(n):
            sub = a[k:, k]
            nz = _first_nonzero(F, sub)
            if nz is None:
                return F.zero()
            if nz:
                a[[k, k + nz]] = a[[k + nz, k]]
                detv = F.neg(detv)
            pivot = F.elem(a[k, k])
            detv = F.mul(detv, pivot)
            pinv = F.inv(pivot)
            rows = a[k + 1 :]
            if len(rows):
                factors = F.vscale(rows[:, k], pinv)
                if F.r == 1:
                    rows[:, k:] = (rows[:, k:] - factors[:, None] * a[k, None, k:]) % F.p
                else:
                    rows[:, k:] = F.vsub(
                        rows[:, k:], F.vmul(factors[:, None, :], a[k, None, k:])
                    )
        return detv

    def inv(self) -> "Mat":
        assert self.nrows == self.ncols
        n = self.nrows
        aug = Mat.hstack([self, Mat.eye(self.F, n)])
        red, piv = aug.rref()
        assert piv == list(range(n)), "matrix is singular"
        return Mat(self.F, red.a[:, n:])

    def kernel(self) -> "Mat":
        """Rows form a basis of {x : self @ x = 0} (column vectors laid flat)."""
        F = self.F
        red, piv = self.rref()
        m = self.ncols
        free = [j for j in range(m) if j not in piv]
        out = Mat.zeros(F, len(free), m)
        for k, j in enumerate(free):
            out.a[k, j] = F.one() if F.r > 1 else 1
            for row_idx, pj in enumerate(piv):
                out.a[k, pj] = F.neg(F.elem(red.a[row_idx, j]))
        return out

    def left_kernel(self) -> "Mat":
        """Rows v with v @ self = 0."""
        return self.T.kernel()

    def solve_affine(self, b: np.ndarray):
        """Solve self @ x = b; returns (particular or None, kernel rows)."""
        F = self.F
        bcol = np.asarray(b, dtype=np.int64) % F.p
        if F.r == 1:
            bcol = bcol.reshape(self.nrows, 1)
        else:
            bcol = bcol.reshape(self.nrows, 1, F.r)
        aug = Mat(F, np.concatenate([self.a, bcol], axis=1))
        red, piv = aug.rref()
        ker = self.kernel()
        if self.ncols in piv:
            return None, ker
        x = Mat.zeros(F, 1, self.ncols)
        for row_idx, pj in enumerate(piv):
            x.a[0, pj] = red.a[row_idx, self.ncols]
        return x.a[0], ker

    def fixed_rows(self) -> "Mat":
        """Basis (as rows) of {v : v @ self = v}."""
        return (self - Mat.eye(self.F, self.nrows)).left_kernel()


def _first_nonzero(F: Fq, colslice: np.ndarray):
    nz = np.nonzero(colslice if F.r == 1 else colslice.any(axis=1))[0]
    return int(nz[0]) if len(nz) else None


def _rref_inplace(F: Fq, a: np.ndarray) -> list[int]:
    n, m = a.shape[0], a.shape[1]
    piv: list[int] = []
    row = 0
    for col in range(m):
        if row >= n:
            break
        nz = _first_nonzero(F, a[row:, col])
        if nz is None:
            continue
        if nz:
            a[[row, row + nz]] = a[[row + nz, row]]
        pinv = F.inv(F.elem(a[row, col]))
        a[row] = F.vscale(a[row], pinv)
        others = np.concatenate([np.arange(row), np.arange(row + 1, n)])
        if len(others):
            factors = a[others, col]
            if F.r == 1:
                mask = factors != 0
                sel = others[mask]
                if len(sel):
                    a[sel] = (a[sel] - factors[mask][:, None] * a[row][None, :]) % F.p
            else:
                mask = factors.any(axis=1)
                sel = others[mask]
                if len(sel):
                    a[sel] = F.vsub(a[sel], F.vmul(factors[mask][:, None, :], a[row][None, :]))
        piv.append(col)
        row += 1
    return piv


# -- LDU ----------------------------------------------------------------------


def ldu(M: Mat) -> tuple[Mat, Mat, Mat]:
    """M = L @ D @ U, L unit lower, D diagonal, U unit upper.

    Computed entry by entry: d_r = m_rr - sum_{k<r} d_k l_rk u_kr and
    m_ij = sum_{k <= min(i,j)} d_k l_ik u_kj.  Raises NoLDU exactly when a
    d_r with r < n vanishes prematurely, i.e. a leading principal minor is
    zero; a zero in the last diagonal slot is still a valid factorization
    of a singular matrix only if every d is nonzero, so that also raises.
    """
    F = M.F
    assert M.nrows == M.ncols
    n = M.nrows
    L = Mat.eye(F, n)
    U = Mat.eye(F, n)
    d = []
    for r in range(n):
        acc = M.entry(r, r)
        for k in range(r):
            acc = F.sub(acc, F.mul(d[k], F.mul(L.entry(r, k), U.entry(k, r))))
        if F.is_zero(acc):
            raise NoLDU(f"principal minor {r + 1} vanishes")
        d.append(acc)
        dinv = F.inv(acc)
        for j in range(r + 1, n):
            s = M.entry(r, j)
            for k in range(r):
                s = F.sub(s, F.mul(d[k], F.mul(L.entry(r, k), U.entry(k, j))))
            U.set_entry(r, j, F.mul(s, dinv))
            s = M.entry(j, r)
            for k in range(r):
                s = F.sub(s, F.mul(d[k], F.mul(L.entry(j, k), U.entry(k, r))))
            L.set_entry(j, r, F.mul(s, dinv))
    D = Mat.diagonal(F, d)
    assert L @ D @ U == M
    return L, D, U


# -- minimal polynomials and the primary rational form ------------------------


def poly_of_matrix(f: Poly, M: Mat) -> Mat:
    F = M.F
    n = M.nrows
    acc = Mat.zeros(F, n, n)
    for k in range(f.degree, -1, -1):
        acc = acc @ M
        c = f.coeff(k)
        if not F.is_zero(c):
            acc = acc + Mat.eye(F, n).scale(c)
    return acc


def mat_minpoly(M: Mat) -> Poly:
    """Minimal polynomial, as the lcm of row-vector order polynomials."""
    F = M.F
    n = M.nrows
    acc = Poly.one(F)
    for i in range(n):
        v = Mat.zeros(F, 1, n).a[0]
        v[i] = F.one() if F.r > 1 else 1
        g = _vector_order_poly(M, v)
        acc = _poly_lcm(acc, g)
        if acc.degree == n:
            break
    return acc


def _vector_order_poly(M: Mat, v: np.ndarray) -> Poly:
    """Monic generator of {f : v f(M) = 0}, by Krylov reduction."""
    F = M.F
    n = M.nrows
    ech: list[tuple[np.ndarray, int, list]] = []  # (reduced row, pivot col, rep)
    cur = v.copy()
    rep = [F.one()]
    while True:
        w = cur.copy()
        wrep = list(rep)
        for erow, epiv, erep in ech:
            c = F.elem(w[epiv])
            if F.is_zero(c):
                continue
            w = F.vsub(w, F.vscale(erow, c))
            for k, ec in enumerate(erep):
                while k >= len(wrep):
                    wrep.append(F.zero())
                wrep[k] = F.sub(wrep[k], F.mul(c, ec))
        nzp = _first_nonzero(F, w)
        if nzp is None:
            while len(wrep) < len(rep):
                wrep.append(F.zero())
            return Poly.from_scalars(F, wrep).monic()
        pinv = F.inv(F.elem(w[nzp]))
        w = F.vscale(w, pinv)
        wrep = [F.mul(c, pinv) for c in wrep]
        ech.append((w, nzp, wrep))
        cur = _row_times(M, cur)
        rep = [F.zero()] + rep
        assert len(ech) <= n


def _poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.F)
    g = a.gcd(b)
    return ((a * b) // g).monic()


def companion_matrix(f: Poly) -> Mat:
    """Row-convention companion: ones on the superdiagonal, -f in the last row."""
    F = f.F
    d = f.degree
    assert d >= 1 and f.is_monic()
    C = Mat.zeros(F, d, d)
    for i in range(d - 1):
        C.a[i, i + 1] = F.one() if F.r > 1 else 1
    for k in range(d):
        C.a[d - 1, k] = F.neg(f.coeff(k))
    return C


@dataclass
class RcfBlock:
    g: Poly          # irreducible
    power: int       # block is companion(g**power)
    start: int       # first row index in F
    size: int

    def min_poly(self) -> Poly:
        out = Poly.one(self.g.F)
        for _ in range(self.power):
            out = out * self.g
        return out


@dataclass
class RcfResult:
    form: Mat
    P: Mat
    blocks: list[RcfBlock]


def rational_canonical_form(M: Mat) -> RcfResult:
    """Primary rational canonical form: P @ M @ P^-1 = block diagonal with
    one companion block per generalized-eigen chain, block minimal
    polynomials g^h for irreducible g.  The conjugation identity is
    asserted before returning.
    """
    F = M.F
    n = M.nrows
    assert n == M.ncols
    mp = mat_minpoly(M)
    chains: list[tuple[np.ndarray, Poly, int]] = []
    for g, e in mp.factor():
        B = poly_of_matrix(g, M)
        kern: list[Mat] = []
        Bi = Mat.eye(F, n)
        for _ in range(e):
            Bi = Bi @ B
            kern.append(Bi.left_kernel())
        d = g.degree
        tops: list[tuple[np.ndarray, int]] = []
        for j in range(e, 0, -1):
            # Chains live over k[x]/(g): a top spans d translates at its
            # level, so the obstruction span absorbs v, vM, ..., vM^(d-1)
            # for every vector it sees.
            span = _SpanTracker(F, n)
            if j >= 2:
                for rr in kern[j - 2].a:
                    span.add(rr)
            for v, h in tops:
                w = v
                for _ in range(h - j):
                    w = _row_times(B, w)
                for _ in range(d):
                    span.add(w)
                    w = _row_times(M, w)
            for rr in kern[j - 1].a:
                if span.add(rr):
                    tops.append((rr.copy(), j))
                    w = _row_times(M, rr)
                    for _ in range(d - 1):
                        span.add(w)
                        w = _row_times(M, w)
        chains.extend((v, g, h) for v, h in tops)
    # order chains deterministically: by irreducible, then descending height
    chains.sort(key=lambda c: (c[1].degree, c[1].c.tobytes(), -c[2]))
    rows = []
    blocks = []
    pos = 0
    for v, g, h in chains:
        size = g.degree * h
        blocks.append(RcfBlock(g=g, power=h, start=pos, size=size))
        cur = v
        for _ in range(size):
            rows.append(cur)
            cur = _row_times(M, cur)
        pos += size
    assert pos == n, "chain vectors must fill the space"
    P = Mat(F, np.stack(rows))
    form = Mat.zeros(F, n, n)
    for b in blocks:
        form.a[b.start : b.start + b.size, b.start : b.start + b.size] = companion_matrix(
            b.min_poly()
        ).a
    assert P @ M == form @ P, "rcf conjugation identity failed"
    return RcfResult(form=form, P=P, blocks=blocks)


def _row_times(M: Mat, v: np.ndarray) -> np.ndarray:
    F = M.F
    if F.r == 1:
        return v @ M.a % F.p
    return F.matmul(v[None, :, :], M.a)[0]


class _SpanTracker:
    """Incremental row-echelon span membership."""

    def __init__(self, F: Fq, width: int):
        self.F = F
        self.width = width
        self.rows: list[tuple[np.ndarray, int]] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        F = self.F
        w = v.copy()
        for erow, epiv in self.rows:
            c = F.elem(w[epiv])
            if not F.is_zero(c):
                w = F.vsub(w, F.vscale(erow, c))
        return w

    def add(self, v: np.ndarray) -> bool:
        """Returns True when v extends the span."""
        F = self.F
        w = self.reduce(v)
        piv = _first_nonzero(F, w)
        if piv is None:
            return False
        w = F.vscale(w, F.inv(F.elem(w[piv])))
        self.rows.append((w, piv))
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: np.ndarray) -> bool:
        return _first_nonzero(self.F, self.reduce(v)) is None

    def basis(self) -> np.ndarray:
        if not self.rows:
            shape = (0, self.width) if self.F.r == 1 else (0, self.width, self.F.r)
            return np.zeros(shape, dtype=np.int64)
        return np.stack([r for r, _ in self.rows])


# -- batched determinants and bivariate interpolation -------------------------


def dets_batched(F: Fq, mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack of matrices over a prime field.

    Vectorized elimination across the batch; matrices that hit a zero pivot
    fall back to the scalar routine.
    """
    assert F.r == 1
    a = mats.copy() % F.p
    B, n, _ = a.shape
    dets = np.ones(B, dtype=np.int64)
    alive = np.ones(B, dtype=bool)
    for k in range(n):
        pivots = a[:, k, k]
        bad = alive & (pivots == 0)
        if bad.any():
            for idx in np.nonzero(bad)[0]:
                dets[idx] = Mat(F, mats[idx]).det()
            alive &= ~bad
        if not alive.any():
            break
        live = np.nonzero(alive)[0]
        piv = pivots[live]
        dets[live] = dets[live] * piv % F.p
        pinv = _pow_mod_batch(piv, F.p - 2, F.p)
        if k + 1 < n:
            factors = a[live, k + 1 :, k] * pinv[:, None] % F.p
            a[live, k + 1 :, k:] = (
                a[live, k + 1 :, k:] - factors[:, :, None] * a[live, None, k, k:]
            ) % F.p
    return dets % F.p


def _pow_mod_batch(base: np.ndarray, e: int, p: int) -> np.ndarray:
    acc = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            acc = acc * b % p
        b = b * b % p
        e >>= 1
    return acc


def vandermonde_inv(F: Fq, xs: list) -> Mat:
    n = len(xs)
    V = Mat.zeros(F, n, n)
    for i, x in enumerate(xs):
        acc = F.one()
        for j in range(n):
            V.a[i, j] = acc
            acc = F.mul(acc, x)
    return V.inv()


def bivariate_det_interpolate(Z0: Mat, Z1: Mat, Z2: Mat) -> Mat:
    """Coefficients C with sum C[i,j] X^i Y^j = det(Z0 + X Z1 + Y Z2) - 1.

    Exact Lagrange-style interpolation on an (n+1) x (n+1) grid of field
    points; raises FieldTooSmall when the field cannot host the grid.
    """
    F = Z0.F
    n = Z0.nrows
    if F.q <= n:
        raise FieldTooSmall(f"need {n + 1} distinct points, field has {F.q}")
    xs = [F.elem_at(i) for i in range(n + 1)]
    vals = Mat.zeros(F, n + 1, n + 1)
    if F.r == 1:
        ys = np.array(xs, dtype=np.int64)
        for i, x in enumerate(xs):
            Zx = (Z0.a + x * Z1.a) % F.p
            batch = (Zx[None, :, :] + ys[:, None, None] * Z2.a[None, :, :]) % F.p
            vals.a[i, :] = dets_batched(F, batch)
    else:
        for i, x in enumerate(xs):
            Zx = Z0 + Z1.scale(x)
            for j, y in enumerate(xs):
                vals.a[i, j] = (Zx + Z2.scale(y)).det()
    Vinv = vandermonde_inv(F, xs)
    C = Vinv @ vals @ Vinv.T
    C.a[0, 0] = F.sub(F.elem(C.a[0, 0]), F.one())
    return C


def bivariate_eval(C: Mat, x, y):
    """Evaluate a bivariate coefficient matrix at a point."""
    F = C.F
    acc = F.zero()
    for i in range(C.nrows - 1, -1, -1):
        inner = F.zero()
        for j in range(C.ncols - 1, -1, -1):
            inner = F.add(F.mul(inner, y), C.entry(i, j))
        acc = F.add(F.mul(acc, x), inner)
    return acc
