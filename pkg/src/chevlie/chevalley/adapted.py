"""Chevalley bases adapted to a semisimple group element.

Given s acting on the algebra, find a Cartan subalgebra inside its fixed
space, split the algebra into simultaneous ad-eigenspaces, match the
one-dimensional pieces to reference root indices through the
nonzero-commutator graph, and rescale so every structure constant equals
the reference table.  The change of basis then conjugates s to a diagonal
matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..exactla import Mat, mat_minpoly
from .algebra import LieAlgebraFq, _row_times_mat


class NotSemisimple(Exception):
    """Eigenspace dimensions do not sum to dim, or the fixed space has no
    reachable Cartan subalgebra."""


class GraphMismatch(Exception):
    """No commutator-graph isomorphism onto the reference basis works."""


class _RescaleFailed(Exception):
    pass


@dataclass
class ChevBasisChange:
    matrix: Mat                 # rows: new basis vectors in reference coordinates
    inverse: Mat
    target_order: list[int]     # generator slot -> reference root index
    s_diagonal: np.ndarray      # conjugated s diagonal entries

    def conj(self, g: Mat) -> Mat:
        """Rewrite an operator in the new basis: P g P^-1."""
        return self.matrix @ g @ self.inverse

    def unconj(self, g: Mat) -> Mat:
        return self.inverse @ g @ self.matrix


def adapted_chevalley_basis(L: LieAlgebraFq, s: Mat, seed: int = 0) -> ChevBasisChange:
    F = L.F
    V = s.fixed_rows()
    H = _cartan_in_fixed_space(L, V, seed)
    gens = _root_spaces(L, H)
    if len(gens) != 2 * L.n_pos:
        raise NotSemisimple(f"found {len(gens)} one-dimensional weight spaces")

    newC = _commutator_colors(L, gens, H)
    refC = _reference_colors(L)
    attempts = 0
    for perm in _graph_isomorphisms(newC, refC):
        attempts += 1
        try:
            P = _rescale(L, gens, perm)
        except _RescaleFailed:
            if attempts >= 64:
                break
            continue
        Pinv = P.inv()
        _verify_constants(L, P, Pinv)
        sc = (P @ s @ Pinv).a
        if F.r == 1:
            diag = np.diagonal(sc).copy()
            off = sc - np.diag(diag)
        else:
            diag = np.diagonal(sc, axis1=0, axis2=1).T.copy()
            off = sc.copy()
            for i in range(L.dim):
                off[i, i] = 0
        assert not off.any(), "conjugated s must be diagonal"
        return ChevBasisChange(P, Pinv, list(perm), diag)
    raise GraphMismatch("no usable commutator-graph isomorphism")


# Cartan location ---------------------------------------------------------------


def _cartan_in_fixed_space(L: LieAlgebraFq, V: Mat, seed: int) -> Mat:
    F, l = L.F, L.l
    dV = V.nrows
    if dV == l:
        _assert_abelian(L, V)
        return V.rref()[0]
    if dV != l + 2:
        return _cartan_generic(L, V, seed)

    rows = [V.row(i) for i in range(dV)]
    # derived space of the fixed-space subalgebra
    der: list[np.ndarray] = []
    for i in range(dV):
        for j in range(i + 1, dV):
            der.append(L.bracket(rows[i], rows[j]))
    Dr, Dpiv = Mat(F, np.stack(der)).rref()
    if len(Dpiv) != 3:
        raise NotSemisimple(f"derived part of fixed space has dimension {len(Dpiv)}")
    D = Mat(F, Dr.a[:3])

    # center of the fixed-space subalgebra: the l-1 dimensional abelian part
    blocks = [np.stack([L.bracket(v, u) for v in rows]) for u in rows]
    Z = Mat(F, np.concatenate(blocks, axis=1)).left_kernel()
    if Z.nrows != l - 1:
        raise NotSemisimple(f"abelian part has dimension {Z.nrows}")
    Zmat = Mat(F, np.stack([_lift_comb(F, Z.row(i), rows) for i in range(Z.nrows)]))

    # a split Cartan line inside the 3-dimensional derived ideal: ad(d)
    # restricted there must have three distinct eigenvalues in F
    rng = random.Random(seed)
    for _ in range(60):
        coeffs = [F.rand(rng) for _ in range(3)]
        d = _comb(F, coeffs, [D.row(i) for i in range(3)])
        if not d.any():
            continue
        M = _restrict(L, D, Dpiv, L.ad_of_vec(d))
        if M is None:
            continue
        mp = mat_minpoly(M)
        if mp.degree == 3 and len(mp.roots()) == 3:
            Hrows = Mat(F, np.concatenate([Zmat.a, d[None]], axis=0))
            if Hrows.rank() != l:
                continue
            H = Mat(F, Hrows.rref()[0].a[:l])
            _assert_abelian(L, H)
            return H
    raise NotSemisimple("no split Cartan line found in the A1 ideal")


def _cartan_generic(L: LieAlgebraFq, V: Mat, seed: int, tries: int = 400) -> Mat:
    """Cartan subalgebra of an arbitrary reductive fixed space: the nilspace
    of ad(v) restricted to V for a random v is a Cartan subalgebra whenever
    v is regular, and it must additionally be split over F for the
    eigenspace machinery downstream.  Non-split picks are common (one per
    Weyl class of tori), hence the generous retry budget."""
    F, l = L.F, L.l
    dV = V.nrows
    Vr, Vpiv = V.rref()
    Vr = Mat(F, Vr.a[:dV])
    rows = [Vr.row(i) for i in range(dV)]
    ref = _reference_cartan_if_inside(L, Vr)
    if ref is not None:
        return ref
    rng = random.Random(seed)
    for _ in range(tries):
        v = _comb(F, [F.rand(rng) for _ in range(dV)], rows)
        if not v.any():
            continue
        M = _restrict(L, Vr, Vpiv, L.ad_of_vec(v))
        if M is None:
            raise NotSemisimple("fixed space is not closed under its own bracket")
        ker = M.pow(dV).left_kernel()
        if ker.nrows != l:
            continue
        lifted = F.matmul(ker.a, Vr.a) if F.r > 1 else ker.a @ Vr.a % F.p
        H = Mat(F, lifted).rref()[0]
        H = Mat(F, H.a[:l])
        try:
            _assert_abelian(L, H)
        except NotSemisimple:
            continue
        if all(_splits_into_linears(mat_minpoly(L.ad_of_vec(H.row(i))))
               for i in range(l)):
            return H
    raise NotSemisimple("no split Cartan subalgebra found in the fixed space")


def _splits_into_linears(mp) -> bool:
    # distinct linear factors: the element acts semisimply with all
    # eigenvalues in F
    return all(g.degree == 1 and e == 1 for g, e in mp.factor())


def _reference_cartan_if_inside(L: LieAlgebraFq, Vr: Mat) -> Mat | None:
    """The reference Cartan, when it sits inside the fixed space; keeps the
    change of basis monomial for elements that are already diagonal."""
    F = L.F
    shape = (L.l, L.dim) if F.r == 1 else (L.l, L.dim, F.r)
    H = np.zeros(shape, dtype=np.int64)
    for i in range(L.l):
        if F.r == 1:
            H[i, L.cartan_pos(i)] = 1
        else:
            H[i, L.cartan_pos(i), 0] = 1
    if Mat.vstack([Vr, Mat(F, H)]).rank() != Vr.nrows:
        return None
    return Mat(F, H)


def _lift_comb(F, coeffs_vec: np.ndarray, rows: list[np.ndarray]) -> np.ndarray:
    out = None
    for k, row in enumerate(rows):
        c = coeffs_vec[k]
        term = F.vscale(row[None], c)[0] if F.r > 1 else (row * int(c)) % F.p
        out = term if out is None else F.vadd(out, term)
    return out


def _comb(F, coeffs: list, rows: list[np.ndarray]) -> np.ndarray:
    out = None
    for c, row in zip(coeffs, rows):
        term = F.vscale(row[None], c)[0] if F.r > 1 else (row * int(c)) % F.p
        out = term if out is None else F.vadd(out, term)
    return out


def _assert_abelian(L: LieAlgebraFq, S: Mat):
    rows = [S.row(i) for i in range(S.nrows)]
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if L.bracket(rows[i], rows[j]).any():
                raise NotSemisimple("candidate Cartan subalgebra is not abelian")


# eigen-splitting ---------------------------------------------------------------


def _restrict(L: LieAlgebraFq, S_rref: Mat, pivots: list[int], A: Mat) -> Mat | None:
    """Matrix of A on the row space of S_rref, or None if not invariant."""
    F = L.F
    SA = S_rref @ A
    coords = SA.a[:, pivots].copy()
    recon = F.matmul(coords, S_rref.a) if F.r > 1 else coords @ S_rref.a % F.p
    if not np.array_equal(recon, SA.a):
        return None
    return Mat(F, coords)

def _root_spaces(L: LieAlgebraFq, H: Mat) -> list[np.ndarray]:
    """Split the algebra by the commuting ad(h); return the one-dimensional
    weight-space generators.  The zero-weight space must equal H."""
    F = L.F
    spaces = [Mat.eye(F, L.dim)]
    for i in range(H.nrows):
        adh = L.ad_of_vec(H.row(i))
        new_spaces = []
        for S in spaces:
            if S.nrows == 1:
                new_spaces.append(S)
                continue
            Sr, piv = S.rref()
            Sr = Mat(F, Sr.a[: len(piv)])
            M = _restrict(L, Sr, piv, adh)
            if M is None:
                raise NotSemisimple("weight space not ad-invariant")
            mp = mat_minpoly(M)
            rts = mp.roots()
            total = 0
            for lam in rts:
                ker = _shift_diag(F, M, lam).left_kernel()
                if ker.nrows == 0:
                    continue
                total += ker.nrows
                lifted = F.matmul(ker.a, Sr.a) if F.r > 1 else ker.a @ Sr.a % F.p
                new_spaces.append(Mat(F, lifted))
            if total != S.nrows:
                raise NotSemisimple("eigenspace dimensions do not sum to dim")
        spaces = new_spaces
    ones = [S for S in spaces if S.nrows == 1]
    zero = [S for S in spaces if S.nrows != 1]
    if len(zero) != 1 or zero[0].nrows != L.l:
        raise NotSemisimple("zero-weight space is not the Cartan subalgebra")
    zr = zero[0].rref()[0].a[: L.l]
    hr = H.rref()[0].a[: L.l]
    if not np.array_equal(zr, hr):
        raise NotSemisimple("zero-weight space differs from the Cartan subalgebra")
    return [S.row(0) for S in ones]


def _shift_diag(F, M: Mat, lam) -> Mat:
    A = M.a.copy()
    n = M.nrows
    if F.r == 1:
        idx = np.arange(n)
        A[idx, idx] = (A[idx, idx] - int(lam)) % F.p
    else:
        for i in range(n):
            A[i, i] = F.sub(A[i, i], lam)
    return Mat(F, A)


# commutator graphs -------------------------------------------------------------


def _commutator_colors(L: LieAlgebraFq, gens: list[np.ndarray], H: Mat) -> np.ndarray:
    """0 no edge, 1 nonzero commutator in a weight space, 2 commutator in H."""
    F = L.F
    n = len(gens)
    G = np.stack(gens)
    Hr, piv = H.rref()
    Hr = Hr.a[: len(piv)]
    C = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        adg = L.ad_of_vec(gens[i])
        br = F.matmul(G, adg.a) if F.r > 1 else G @ adg.a % F.p
        nz = br.reshape(n, -1).any(axis=1)
        coords = br[:, piv] if F.r == 1 else br[:, piv, :]
        recon = F.matmul(coords, Hr) if F.r > 1 else coords @ Hr % F.p
        in_h = ~((br - recon).reshape(n, -1) % F.p).any(axis=1)
        C[:, i] = np.where(nz & in_h, 2, np.where(nz, 1, 0))
    np.fill_diagonal(C, 0)
    assert np.array_equal(C, C.T)
    assert (np.sum(C == 2, axis=1) == 1).all(), "each generator needs one opposite"
    return C


def _reference_colors(L: LieAlgebraFq) -> np.ndarray:
    rd = L.rd
    n = rd.n_roots
    C = np.zeros((n, n), dtype=np.uint8)
    for a in range(n):
        va = rd.root(a)
        for b in range(n):
            if b == a:
                continue
            if b == rd.neg_index(a):
                C[a, b] = 2
            elif rd.is_root(va + rd.root(b)):
                C[a, b] = 1
    return C


def _graph_isomorphisms(newC: np.ndarray, refC: np.ndarray):
    """Yield vertex maps new -> ref preserving edge colors, deterministic
    order, naive backtracking with forward checking."""
    n = newC.shape[0]
    sig_new = [tuple(np.sum(newC[i] == c) for c in (1, 2)) for i in range(n)]
    sig_ref = [tuple(np.sum(refC[i] == c) for c in (1, 2)) for i in range(n)]
    base_cand = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for r in range(n):
            base_cand[i, r] = sig_new[i] == sig_ref[r]
    if not base_cand.any(axis=1).all():
        return

    # assignment order: always a vertex with the most already-ordered neighbors
    order = [0]
    placed = {0}
    while len(order) < n:
        best, best_k = None, -1
        for v in range(n):
            if v in placed:
                continue
            k = sum(1 for u in order if newC[v, u] != 0)
            if k > best_k:
                best, best_k = v, k
        order.append(best)
        placed.add(best)

    assign = np.full(n, -1, dtype=np.int64)
    used = np.zeros(n, dtype=bool)

    def backtrack(pos: int):
        if pos == n:
            yield assign.copy()
            return
        v = order[pos]
        mask = base_cand[v] & ~used
        for u in order[:pos]:
            mask &= refC[:, assign[u]] == newC[v, u]
            if not mask.any():
                return
        for r in np.flatnonzero(mask):
            assign[v] = r
            used[r] = True
            yield from backtrack(pos + 1)
            used[r] = False
            assign[v] = -1

    yield from backtrack(0)


# rescaling ---------------------------------------------------------------------


def _rescale(L: LieAlgebraFq, gens: list[np.ndarray], perm: np.ndarray) -> Mat:
    """Scale the matched generators so all structure constants equal the
    reference table, rebuild the Cartan rows, and assemble the basis-change
    matrix in the stored basis order."""
    F, rd = L.F, L.rd
    vert_of_root = {int(perm[k]): gens[k] for k in range(len(gens))}
    eps: dict[int, np.ndarray] = {}
    two = F.from_int(2)
    for i in range(L.l):
        a = rd.root_index(np.eye(L.l, dtype=np.int64)[i])
        g, gn = vert_of_root[a], vert_of_root[rd.neg_index(a)]
        h = L.bracket(g, gn)
        w = L.bracket(h, g)
        lam = _scalar_ratio(F, w, g)
        if lam is None or F.is_zero(lam):
            raise _RescaleFailed
        eps[a] = g
        eps[rd.neg_index(a)] = _scale_row(F, gn, F.div(two, lam))
    from ..rootdata import extraspecial_pairs

    es = extraspecial_pairs(rd)
    for gi in range(rd.n_positive):
        if rd.height(gi) == 1:
            continue
        r1, s1 = es[gi]
        cpos = F.from_int(L.constants[(r1, s1)])
        cneg = F.from_int(L.constants[(rd.neg_index(r1), rd.neg_index(s1))])
        vpos = L.bracket(eps[r1], eps[s1])
        vneg = L.bracket(eps[rd.neg_index(r1)], eps[rd.neg_index(s1)])
        if not vpos.any() or not vneg.any():
            raise _RescaleFailed
        eps[gi] = _scale_row(F, vpos, F.inv(cpos))
        eps[rd.neg_index(gi)] = _scale_row(F, vneg, F.inv(cneg))

    hmat = np.stack(
        [L.bracket(eps[rd.root_index(np.eye(L.l, dtype=np.int64)[j])],
                   eps[rd.neg_index(rd.root_index(np.eye(L.l, dtype=np.int64)[j]))])
         for j in range(L.l)]
    )
    Cinv = Mat(F, L._embed_prime(rd.cartan % F.p)).inv()
    hprime = F.matmul(Cinv.a, hmat) if F.r > 1 else Cinv.a @ hmat % F.p

    shape = (L.dim, L.dim) if F.r == 1 else (L.dim, L.dim, F.r)
    P = np.zeros(shape, dtype=np.int64)
    for k in range(rd.n_roots):
        P[L.basis_pos_of_root(k)] = eps[k]
    for i in range(L.l):
        P[L.cartan_pos(i)] = hprime[i]
    Pm = Mat(F, P)
    if Pm.rank() != L.dim:
        raise _RescaleFailed
    return Pm


def _scalar_ratio(F, w: np.ndarray, g: np.ndarray):
    """lam with w = lam*g for a nonzero row g, None if not proportional."""
    if F.r == 1:
        nz = np.flatnonzero(g)
        if nz.size == 0:
            return None
        lam = w[nz[0]] * pow(int(g[nz[0]]), -1, F.p) % F.p
        if not np.array_equal(w, g * int(lam) % F.p):
            return None
        return F.from_int(int(lam))
    idx = None
    for j in range(g.shape[0]):
        if g[j].any():
            idx = j
            break
    if idx is None:
        return None
    lam = F.div(w[idx], g[idx])
    if not np.array_equal(w, F.vscale(g, lam)):
        return None
    return lam


def _scale_row(F, v: np.ndarray, c) -> np.ndarray:
    return F.vscale(v[None], c)[0] if F.r > 1 else v * int(c) % F.p


def _verify_constants(L: LieAlgebraFq, P: Mat, Pinv: Mat):
    for k in range(L.dim):
        Ak = L.ad_of_vec(P.row(k))
        Mk = P @ Ak @ Pinv
        assert Mk == L.ad_basis_mat(k), f"structure constants broken at slot {k}"
