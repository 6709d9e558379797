"""Chevalley-basis Lie algebras over GF(q).

Structure constants are derived once over the rationals per Dynkin type
(anchored at +(p+1) on every extraspecial pair, then propagated through
antisymmetry, negation, the zero-sum cyclic identity, and the four-root
Jacobi identity) and reduced modulo the working characteristic, so no
division happens in characteristic p.

Basis order: negative root vectors by descending positive index, then the
Cartan generators h'_1..h'_l with [h'_i, e_s] = s_i e_s, then positive
root vectors ascending.  Adjoint matrices follow the row convention
ad(x)[i, :] = coordinates of [x, b_i], so row vectors transform by right
multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exactla import Fq, Mat
from ..rootdata import RootDatum, _order_key, extraspecial_pairs

_CONSTANTS_CACHE: dict[str, dict[tuple[int, int], int]] = {}


def structure_constants_over_z(rd: RootDatum) -> dict[tuple[int, int], int]:
    """All N_{a,b} (root indices, root sums only) as integers."""
    if rd.type_label in _CONSTANTS_CACHE:
        return _CONSTANTS_CACHE[rd.type_label]
    N = rd.n_positive
    es = extraspecial_pairs(rd)
    len2 = [rd.pairing(rd.root(i), rd.root(i)) for i in range(2 * N)]

    pos: dict[tuple[int, int], Fraction] = {}

    def pos_lookup(a: int, b: int) -> Fraction:
        if (a, b) in pos:
            return pos[(a, b)]
        return -pos[(b, a)]

    def nval(a: int, b: int) -> Fraction:
        """N_{a,b} for arbitrary sign pattern; depends only on positive
        pairs of strictly smaller sum height, so the bottom-up loop below
        terminates."""
        va, vb = rd.root(a), rd.root(b)
        if not rd.is_root(va + vb):
            return Fraction(0)
        ap, bp = a < N, b < N
        if ap and bp:
            return pos_lookup(a, b)
        if not ap and not bp:
            return -nval(rd.neg_index(a), rd.neg_index(b))
        if not ap:
            return -nval(b, a)
        # a positive, b negative; zero-sum triple (a, b, c), c = -a-b
        c = rd.root_index(-(va + vb))
        if c >= N:
            # a+b positive: N_{a,b}/(c,c) = N_{b,c}/(a,a), b and c negative
            return Fraction(len2[c], len2[a]) * nval(b, c)
        # a+b negative: N_{a,b}/(c,c) = N_{c,a}/(b,b), c and a positive
        return Fraction(len2[c], len2[b]) * nval(c, a)

    for gi in range(N):
        gamma = rd.positive_roots[gi]
        if gamma.sum() == 1:
            continue
        r1, s1 = es[gi]
        anchor = Fraction(rd.chain_down(r1, s1) + 1)
        pos[(r1, s1)] = anchor
        for ri in range(N):
            r = rd.positive_roots[ri]
            s = gamma - r
            t = tuple(int(c) for c in s)
            if t not in rd.index or rd.index[t] >= N:
                continue
            si = rd.index[t]
            if _order_key(r) >= _order_key(s) or (ri, si) == (r1, s1):
                continue
            # four roots r1 + s1 + (-r) + (-s) = 0:
            # N_{r1,s1}N_{-r,-s}/(g,g) + N_{s1,-r}N_{r1,-s}/(s1-r,s1-r)
            #   + N_{-r,r1}N_{s1,-s}/(r1-r,r1-r) = 0
            acc = Fraction(0)
            d1 = rd.positive_roots[s1] - r
            if rd.is_root(d1):
                acc += (
                    nval(s1, rd.neg_index(ri))
                    * nval(r1, rd.neg_index(si))
                    / len2[rd.root_index(d1)]
                )
            d2 = rd.positive_roots[r1] - r
            if rd.is_root(d2):
                acc += (
                    nval(rd.neg_index(ri), r1)
                    * nval(s1, rd.neg_index(si))
                    / len2[rd.root_index(d2)]
                )
            neg_pair = -Fraction(len2[gi]) * acc / anchor  # N_{-r,-s}
            assert neg_pair != 0, (ri, si)
            pos[(ri, si)] = -neg_pair

    # full table over all root-index pairs with root sum
    table: dict[tuple[int, int], int] = {}
    for a in range(2 * N):
        va = rd.root(a)
        for b in range(2 * N):
            if b == a or b == rd.neg_index(a):
                continue
            if rd.is_root(va + rd.root(b)):
                v = nval(a, b)
                assert v.denominator == 1, (a, b, v)
                p_chain = rd.chain_down(a, b)
                assert abs(int(v)) == p_chain + 1, (a, b, v, p_chain)
                table[(a, b)] = int(v)
    for (a, b), v in table.items():
        assert table[(b, a)] == -v
        na, nb = rd.neg_index(a), rd.neg_index(b)
        assert table[(na, nb)] == -v
        assert v * table[(na, nb)] == -v * v
    _CONSTANTS_CACHE[rd.type_label] = table
    return table


def verify_jacobi_over_z(rd: RootDatum, n_random: int | None = None, seed: int = 0) -> int:
    """Jacobi identity on root-vector triples over Z; exhaustive when
    n_random is None.  Returns the number of triples checked."""
    table = structure_constants_over_z(rd)
    n = rd.n_roots
    simple = np.eye(rd.rank, dtype=np.int64)

    def brk(x: dict, y: dict) -> dict:
        """Keys: root index for e_a, ('h', m) for the coroot-basis h'_m."""
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                c = ca * cb
                if isinstance(a, int) and isinstance(b, int):
                    if b == rd.neg_index(a):
                        r = a if a < rd.n_positive else b
                        sign = 1 if a < rd.n_positive else -1
                        for m in range(rd.rank):
                            d = rd.n_value(simple[m], rd.root(r))
                            if d:
                                out[("h", m)] = out.get(("h", m), 0) + sign * d * c
                    elif (a, b) in table:
                        s = rd.root_index(rd.root(a) + rd.root(b))
                        out[s] = out.get(s, 0) + table[(a, b)] * c
                elif isinstance(a, tuple) and isinstance(b, int):
                    out[b] = out.get(b, 0) + int(rd.root(b)[a[1]]) * c
                elif isinstance(a, int) and isinstance(b, tuple):
                    out[a] = out.get(a, 0) - int(rd.root(a)[b[1]]) * c
        return {k: v for k, v in out.items() if v}

    if n_random is None:
        triples = [
            (a, b, c) for a in range(n) for b in range(a, n) for c in range(b, n)
        ]
    else:
        rng = np.random.default_rng(seed)
        triples = [tuple(rng.integers(0, n, size=3)) for _ in range(n_random)]
    for a, b, c in triples:
        ea, eb, ec = {int(a): 1}, {int(b): 1}, {int(c): 1}
        acc: dict = {}
        for t in (brk(brk(ea, eb), ec), brk(brk(eb, ec), ea), brk(brk(ec, ea), eb)):
            for k, v in t.items():
                acc[k] = acc.get(k, 0) + v
        assert all(v == 0 for v in acc.values()), (a, b, c, acc)
    return len(triples)


class LieAlgebraFq:
    """The adjoint Chevalley-basis algebra over a finite field."""

    def __init__(self, rd: RootDatum, F: Fq):
        self.rd = rd
        self.F = F
        self.l = rd.rank
        self.n_pos = rd.n_positive
        self.dim = 2 * self.n_pos + self.l
        self.constants = structure_constants_over_z(rd)
        self._build_tensor()
        self._killing = None
        self._ad_mats: dict[int, Mat] = {}

    # basis layout -------------------------------------------------------------

    def basis_pos_of_root(self, k: int) -> int:
        N = self.n_pos
        return N + self.l + k if k < N else N - 1 - (k - N)

    def root_of_basis_pos(self, p: int) -> int | None:
        N = self.n_pos
        if p < N:
            return 2 * N - 1 - p
        if p < N + self.l:
            return None
        return p - N - self.l

    def cartan_pos(self, i: int) -> int:
        return self.n_pos + i

    def e_vec(self, root_idx: int) -> np.ndarray:
        v = self._zero_vec()
        self._set_one(v, self.basis_pos_of_root(root_idx))
        return v

    def h_prime_vec(self, i: int) -> np.ndarray:
        v = self._zero_vec()
        self._set_one(v, self.cartan_pos(i))
        return v

    def h_root_vec(self, root_idx: int) -> np.ndarray:
        """h_r = sum_m n(alpha_m, r) h'_m as a row vector."""
        v = self._zero_vec()
        r = self.rd.root(root_idx)
        for m in range(self.l):
            c = self.rd.n_value(np.eye(self.l, dtype=np.int64)[m], r) % self.F.p
            if self.F.r == 1:
                v[self.cartan_pos(m)] = c
            else:
                v[self.cartan_pos(m), 0] = c
        return v

    def _zero_vec(self) -> np.ndarray:
        shape = (self.dim,) if self.F.r == 1 else (self.dim, self.F.r)
        return np.zeros(shape, dtype=np.int64)

    def _set_one(self, v: np.ndarray, p: int):
        if self.F.r == 1:
            v[p] = 1
        else:
            v[p, 0] = 1

    # structure tensor ---------------------------------------------------------

    def _build_tensor(self):
        d, N, l, p = self.dim, self.n_pos, self.l, self.F.p
        T = np.zeros((d, d, d), dtype=np.int64)
        rd = self.rd
        simple = np.eye(l, dtype=np.int64)
        for a in range(2 * N):
            pa = self.basis_pos_of_root(a)
            va = rd.root(a)
            for b in range(2 * N):
                if b == a:
                    continue
                pb = self.basis_pos_of_root(b)
                if b == rd.neg_index(a):
                    r = a if a < N else b
                    sign = 1 if a < N else -1
                    for m in range(l):
                        T[pa, pb, self.cartan_pos(m)] = (
                            sign * rd.n_value(simple[m], rd.root(r))
                        ) % p
                    continue
                key = (a, b)
                if key in self.constants:
                    s = rd.root_index(va + rd.root(b))
                    T[pa, pb, self.basis_pos_of_root(s)] = self.constants[key] % p
            # Cartan action: [h'_i, e_a] = a_i e_a
            for i in range(l):
                c = int(va[i]) % p
                T[self.cartan_pos(i), pa, pa] = c
                T[pa, self.cartan_pos(i), pa] = (-c) % p
        self.tensor = T

    # bracket and ad -----------------------------------------------------------

    def ad_of_vec(self, x: np.ndarray) -> Mat:
        """Matrix of y -> [x, y] in row convention.  Tensor entries are
        prime-field scalars, so each coefficient slot contracts separately."""
        F = self.F
        if F.r == 1:
            return Mat(F, np.tensordot(x, self.tensor, axes=([0], [0])) % F.p)
        slices = [
            np.tensordot(x[:, c], self.tensor, axes=([0], [0])) % F.p
            for c in range(F.r)
        ]
        return Mat(F, np.stack(slices, axis=-1))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return _row_times_mat(self.F, y, self.ad_of_vec(x))

    def ad_basis_mat(self, basis_pos: int) -> Mat:
        if basis_pos not in self._ad_mats:
            self._ad_mats[basis_pos] = Mat(self.F, self._embed_prime(self.tensor[basis_pos]))
        return self._ad_mats[basis_pos]

    def _embed_prime(self, arr: np.ndarray) -> np.ndarray:
        if self.F.r == 1:
            return arr
        out = np.zeros(arr.shape + (self.F.r,), dtype=np.int64)
        out[..., 0] = arr
        return out

    def killing_form(self) -> Mat:
        if self._killing is None:
            K = np.einsum("iab,jba->ij", self.tensor, self.tensor) % self.F.p
            self._killing = Mat(self.F, self._embed_prime(K))
        return self._killing

    def chevalley_involution(self) -> Mat:
        """e_r -> -e_{-r}, h' -> -h'."""
        M = Mat.zeros(self.F, self.dim, self.dim)
        p = self.F.p
        for k in range(2 * self.n_pos):
            a, b = self.basis_pos_of_root(k), self.basis_pos_of_root(self.rd.neg_index(k))
            if self.F.r == 1:
                M.a[a, b] = p - 1
            else:
                M.a[a, b, 0] = p - 1
        for i in range(self.l):
            c = self.cartan_pos(i)
            if self.F.r == 1:
                M.a[c, c] = p - 1
            else:
                M.a[c, c, 0] = p - 1
        return M

    def cartan_int(self, s_idx: int, r_idx: int) -> int:
        """A_{r,s} = n(s, r) for root indices."""
        return self.rd.n_value(self.rd.root(s_idx), self.rd.root(r_idx))


def _row_times_mat(F: Fq, v: np.ndarray, M: Mat) -> np.ndarray:
    if F.r == 1:
        return v @ M.a % F.p
    return F.matmul(v[None, :, :], M.a)[0]


def build_lie_algebra(rd: RootDatum, F: Fq) -> LieAlgebraFq:
    return LieAlgebraFq(rd, F)


def fixed_space(g: Mat) -> Mat:
    """Rows spanning {v : v g = v}."""
    return g.fixed_rows()
