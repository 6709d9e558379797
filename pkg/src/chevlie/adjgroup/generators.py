"""Adjoint Chevalley group elements as explicit matrices.

Root elements x_r(t) are exponentials of the nilpotent ad matrices,
truncated at degree 3 (characteristic at least 5 everywhere).  Torus
elements h_r(λ) are diagonal in the reference basis with root-character
exponents.  Monomial elements n_r follow the x(1)x(-1)x(1) recipe.
Membership in the adjoint group is the automorphism test on fundamental
root vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exactla import Fq, Mat, factorize
from ..chevalley import LieAlgebraFq


@dataclass
class GroupElem:
    mat: Mat
    provenance: list = field(default_factory=list)

    def __matmul__(self, other: "GroupElem") -> "GroupElem":
        return GroupElem(self.mat @ other.mat, self.provenance + other.provenance)

    def inv(self) -> "GroupElem":
        prov = [("inv", tuple(self.provenance))] if self.provenance else []
        return GroupElem(self.mat.inv(), prov)

    def pow(self, e: int) -> "GroupElem":
        if e < 0:
            return self.inv().pow(-e)
        prov = [("pow", tuple(self.provenance), e)] if self.provenance else []
        return GroupElem(self.mat.pow(e), prov)

    def conj_by(self, g: "GroupElem") -> "GroupElem":
        """g^-1 self g."""
        return GroupElem(g.mat.inv() @ self.mat @ g.mat)

    def __eq__(self, other) -> bool:
        return self.mat == other.mat

    def is_identity(self) -> bool:
        return self.mat == Mat.eye(self.mat.F, self.mat.nrows)


def x_of_root(L: LieAlgebraFq, root_idx: int, t) -> GroupElem:
    """x_r(t) = exp(ad(t e_r)); the series stops at degree 3."""
    F = L.F
    te = L._zero_vec()
    tv = F.elem(t)
    if F.r == 1:
        te[L.basis_pos_of_root(root_idx)] = int(tv)
    else:
        te[L.basis_pos_of_root(root_idx)] = tv
    A = L.ad_of_vec(te)
    A2 = A @ A
    A3 = A2 @ A
    assert not (A3 @ A).a.any(), "ad of a root vector must be nilpotent of degree <= 3"
    inv2 = pow(2, -1, F.p)
    inv6 = pow(6, -1, F.p)
    M = Mat.eye(F, L.dim) + A + _scale(F, A2, inv2) + _scale(F, A3, inv6)
    return GroupElem(M, [("x", root_idx, t)])


def _scale(F: Fq, M: Mat, c: int) -> Mat:
    if F.r == 1:
        return Mat(F, M.a * c % F.p)
    return Mat(F, F.vscale(M.a, F.from_int(c)))


def h_of_root(L: LieAlgebraFq, root_idx: int, lam) -> GroupElem:
    """h_r(λ): diagonal, λ^{n(s, r)} on e_s, identity on the Cartan."""
    F = L.F
    lam = F.elem(lam)
    shape = (L.dim, L.dim) if F.r == 1 else (L.dim, L.dim, F.r)
    M = np.zeros(shape, dtype=np.int64)
    for i in range(L.l):
        c = L.cartan_pos(i)
        if F.r == 1:
            M[c, c] = 1
        else:
            M[c, c, 0] = 1
    for s in range(L.rd.n_roots):
        p = L.basis_pos_of_root(s)
        e = L.cartan_int(s, root_idx)
        M[p, p] = F.pow(lam, e)
    return GroupElem(Mat(F, M), [("h", root_idx, lam)])


def torus_from_exponents(L: LieAlgebraFq, lam, exps) -> GroupElem:
    """∏_i h_i(λ^{e_i}) over the fundamental roots."""
    F = L.F
    out = None
    for i, e in enumerate(exps):
        g = h_of_root(L, L.rd.simple_indices()[i], F.pow(F.elem(lam), int(e)))
        out = g if out is None else out @ g
    return out


def n_of_root(L: LieAlgebraFq, root_idx: int) -> GroupElem:
    one = L.F.one()
    neg = L.F.neg(one)
    g = (
        x_of_root(L, root_idx, one)
        @ x_of_root(L, L.rd.neg_index(root_idx), neg)
        @ x_of_root(L, root_idx, one)
    )
    return GroupElem(g.mat, [("n", root_idx)])


def ghn(L: LieAlgebraFq):
    """x_{+i}(1), x_{-i}(1), h_i(λ), n_i for the fundamental roots."""
    lam = L.F.primitive_elem
    xs_pos, xs_neg, hs, ns = [], [], [], []
    for i in L.rd.simple_indices():
        xs_pos.append(x_of_root(L, i, L.F.one()))
        xs_neg.append(x_of_root(L, L.rd.neg_index(i), L.F.one()))
        hs.append(h_of_root(L, i, lam))
        ns.append(n_of_root(L, i))
    return xs_pos, xs_neg, hs, ns


def membership(L: LieAlgebraFq, g: Mat) -> bool:
    """g lies in the adjoint group iff conjugation by g intertwines ad:
    g^-1 ad(a) g = ad(a g) for the fundamental ±root vectors a."""
    if isinstance(g, GroupElem):
        g = g.mat
    try:
        ginv = g.inv()
    except AssertionError:
        return False
    for i in L.rd.simple_indices():
        for k in (i, L.rd.neg_index(i)):
            a = L.e_vec(k)
            lhs = ginv @ L.ad_basis_mat(L.basis_pos_of_root(k)) @ g
            rhs = L.ad_of_vec(g.mul_vec(a))
            if lhs != rhs:
                return False
    return True


def element_order(g: Mat, bound: int) -> int:
    """Exact order given a multiple of it; factored descent, no long
    multiplication chains."""
    if isinstance(g, GroupElem):
        g = g.mat
    I = Mat.eye(g.F, g.nrows)
    assert g.pow(bound) == I, "bound must be a multiple of the order"
    o = bound
    for ell in factorize(bound):
        while o % ell == 0 and g.pow(o // ell) == I:
            o //= ell
    return o


def coroot_table(L: LieAlgebraFq) -> np.ndarray:
    """D[k, m]: expansion of the coroot of root k over the simple coroots.

    For root coordinates a the coefficient is a_m (alpha_m, alpha_m)
    divided by the length square of root k; integral because the coroots
    form a root system with the simple coroots as base."""
    rd = L.rd
    G = rd.gram
    D = np.zeros((rd.n_roots, rd.rank), dtype=np.int64)
    for k in range(rd.n_roots):
        a = rd.root(k)
        ss = int(a @ G @ a)
        for m in range(rd.rank):
            num = int(a[m]) * int(G[m, m])
            assert num % ss == 0
            D[k, m] = num // ss
    return D


def root_character_table(L: LieAlgebraFq) -> np.ndarray:
    """N[k, i] = n(root_k, alpha_i): the diagonal of ∏ h_i(λ^{x_i}) at the
    slot of root k is λ^{(N x)_k}."""
    rd = L.rd
    N = np.zeros((rd.n_roots, rd.rank), dtype=np.int64)
    for k in range(rd.n_roots):
        for i, si in enumerate(rd.simple_indices()):
            N[k, i] = L.cartan_int(k, si)
    return N


def diag_of(g: Mat) -> np.ndarray | None:
    """Diagonal entries if g is diagonal, else None."""
    a = g.mat.a if isinstance(g, GroupElem) else g.a
    n = a.shape[0]
    if a.ndim == 2:
        off = a - np.diag(np.diagonal(a))
        return np.diagonal(a).copy() if not off.any() else None
    off = a.copy()
    for i in range(n):
        off[i, i] = 0
    return np.diagonal(a, axis1=0, axis2=1).T.copy() if not off.any() else None
