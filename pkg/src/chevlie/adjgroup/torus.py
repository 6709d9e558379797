"""Torus Sylow layers, normalizer actions, and layered centralizers.

A layer T_{ℓ,j} is generated by ĥ_i = h_i(λ^{(q-1)/ℓ^j}).  Conjugation by
an element normalizing the torus permutes root characters, so its action
on a layer is a rank×rank matrix over Z/ℓ^j recovered entrywise by
discrete logarithms.  Centralizer orders ascend the layers until they
stabilize, extending the ground field when the layer outgrows it.
Normalizers inside ⟨T, n_i⟩ are computed coset-by-coset over the Weyl
group; no enumeration of the torus ever happens.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..exactla import (
    Fq,
    Mat,
    Poly,
    NotInSubgroup,
    discrete_log,
    embed_hom,
    kernel_count_mod,
    rational_canonical_form,
    snf_diagonal,
    solve_mod,
)
from ..chevalley import LieAlgebraFq, build_lie_algebra
from ..rootdata import WeylGroup, reflection_rep_fixed_space
from .generators import (
    GroupElem,
    coroot_table,
    diag_of,
    h_of_root,
    n_of_root,
    root_character_table,
)


class NotNormalizing(Exception):
    """Conjugation does not preserve the torus layer."""


class BlockNotFound(Exception):
    """No rational-form block has the requested minimal polynomial."""


class NotFinite(Exception):
    """The torus centralizer is infinite over the algebraic closure."""


@dataclass
class TorusLayer:
    prime: int
    level: int
    generators: list          # one GroupElem per fundamental root
    lam_power: object         # the λ^{(q-1)/ℓ^level} used
    L: LieAlgebraFq

    @property
    def modulus(self) -> int:
        return self.prime ** self.level


def build_torus_layer(L: LieAlgebraFq, ell: int, level: int = 1) -> TorusLayer:
    F = L.F
    q1 = F.q - 1
    m = ell ** level
    assert q1 % m == 0, f"layer ℓ^j = {m} must divide q - 1 = {q1}"
    a = F.pow(F.primitive_elem, q1 // m)
    gens = [h_of_root(L, i, a) for i in L.rd.simple_indices()]
    return TorusLayer(ell, level, gens, a, L)


def _dlog_small(F: Fq, base, target, modulus: int) -> int | None:
    """Discrete log in the cyclic group ⟨base⟩ of order dividing modulus."""
    acc = F.one()
    for k in range(modulus):
        if F.eq(acc, target):
            return k
        acc = F.mul(acc, base)
    return None


def _canonical_rep(res, mod: int, cap: int = 256) -> np.ndarray:
    """Deterministic representative of a solve_mod solution coset: smallest
    by (entry sum, lexicographic) among the enumerable coset."""
    x0 = np.asarray(res.particular, dtype=np.int64) % mod
    if not res.kernel_gens or res.count > cap:
        return x0
    best = x0
    seen = {x0.tobytes()}
    frontier = [x0]
    gens = [np.asarray(g, dtype=np.int64) for g in res.kernel_gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = (a + g) % mod
                kb = c.tobytes()
                if kb not in seen:
                    seen.add(kb)
                    nxt.append(c)
                    if (c.sum(), tuple(c)) < (best.sum(), tuple(best)):
                        best = c
        frontier = nxt
    return best


def action_on_torus_layer(s: GroupElem, layer: TorusLayer) -> Mat:
    """s̄ over GF(ℓ) (level 1) or Z/ℓ^j with ĥ_i^s = ∏_j ĥ_j^{s̄_ij},
    solved entrywise by discrete logs against the root characters."""
    L, F = layer.L, layer.L.F
    ell, mod = layer.prime, layer.modulus
    N = root_character_table(L)            # diag exponents: (N x) at root slots
    smat_inv = s.mat.inv()
    rows = []
    for i in range(L.l):
        conj = smat_inv @ layer.generators[i].mat @ s.mat
        d = diag_of(conj)
        if d is None:
            raise NotNormalizing("conjugate of a layer generator is not diagonal")
        y = np.zeros(L.rd.n_roots, dtype=np.int64)
        for k in range(L.rd.n_roots):
            dk = d[L.basis_pos_of_root(k)]
            e = _dlog_small(F, layer.lam_power, dk if F.r > 1 else int(dk), mod)
            if e is None:
                raise NotNormalizing("conjugate entry is not a layer character value")
            y[k] = e
        res = solve_mod(N, y, mod)
        if res is None:
            raise NotNormalizing("no exponent vector reproduces the conjugate")
        rows.append(_canonical_rep(res, mod))
    A = np.stack(rows)
    if layer.level == 1:
        return Mat(Fq(ell), A % ell)
    return A % mod  # level > 1 callers want the integer matrix mod ℓ^j


def find_u(sbar: Mat, layer: TorusLayer, target_poly: Poly) -> GroupElem:
    """Product of layer generators along a vector of the rational-form
    block whose minimal polynomial is the target."""
    rcf = rational_canonical_form(sbar)
    block = None
    for b in rcf.blocks:
        if b.min_poly() == target_poly:
            block = b
            break
    if block is None:
        raise BlockNotFound(f"no block with minimal polynomial {target_poly}")
    z = rcf.P.row(block.start)
    L = layer.L
    out = None
    for i in range(L.l):
        e = int(z[i]) if sbar.F.r == 1 else int(z[i][0])
        g = layer.generators[i].pow(e)
        out = g if out is None else out @ g
    out.provenance = [("find_u", tuple(int(x) for x in np.atleast_1d(z).reshape(-1)))]
    assert not out.is_identity()
    assert out.pow(layer.modulus).is_identity()
    return out


def _layer_fixed_count(L: LieAlgebraFq, sbar: np.ndarray, ell: int, level: int) -> int:
    """Elements of T_{ℓ,level} fixed by the action x -> x @ sbar.

    Exponent vectors over-parametrize the layer when the root-character
    matrix has a kernel mod ℓ^level, so fixed elements are x with
    x(sbar - 1) in that kernel subgroup, counted per fiber."""
    m = ell ** level
    l = L.l
    M = (sbar - np.eye(l, dtype=np.int64)).T % m
    ker = kernel_count_mod(M, m)
    N = root_character_table(L)
    res = solve_mod(N, np.zeros(N.shape[0], dtype=np.int64), m)
    kappa = res.count
    if kappa == 1:
        return ker
    # enumerate the parametrization kernel (order divides det of the
    # Cartan matrix, so tiny) and count the part reachable by sbar - 1
    K = {bytes(l * 8)}
    elems = [np.zeros(l, dtype=np.int64)]
    frontier = list(elems)
    gens = [np.asarray(g, dtype=np.int64) for g in res.kernel_gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = (a + g) % m
                kb = c.tobytes()
                if kb not in K:
                    K.add(kb)
                    elems.append(c)
                    nxt.append(c)
        frontier = nxt
    assert len(elems) == kappa
    reach = sum(1 for z in elems if solve_mod(M, z, m) is not None)
    total = ker * reach
    assert total % kappa == 0
    return total // kappa


def centralizer_in_torus_layers(
    L: LieAlgebraFq,
    s: GroupElem,
    weyl_word: list[int],
    W: WeylGroup,
    primes: list[int],
    max_doublings: int = 2,
) -> dict:
    """Order of the stable torus centralizer of s, layer by layer.

    The Weyl part must have no fixed vectors in the reflection
    representation, else the centralizer in the algebraic torus is
    infinite.  Its exponent action then bounds each ℓ-part by the ℓ-part
    of |det(A - 1)|; layers ascend (extending the field when ℓ^level
    outgrows q - 1) until the count meets the bound or stabilizes."""
    if reflection_rep_fixed_space(W, weyl_word) != 0:
        raise NotFinite("Weyl part fixes a line in the reflection representation")
    perm = W.perm_of_word(weyl_word)
    A_int = exponent_action_of_perm(L, perm)
    bound = 1
    for d in snf_diagonal(A_int - np.eye(L.l, dtype=np.int64)):
        bound *= abs(int(d))
    assert bound != 0
    out = {}
    for ell in primes:
        bnd_l = 1
        b = bound
        while b % ell == 0:
            bnd_l *= ell
            b //= ell
        if bnd_l == 1:
            out[ell] = 1
            continue
        counts = []
        level = 1
        cur_L, cur_s = L, s
        while True:
            q1 = cur_L.F.q - 1
            doublings = 0
            while q1 % (ell ** level) != 0:
                cur_L, cur_s = _extend_field(cur_L, cur_s)
                q1 = cur_L.F.q - 1
                doublings += 1
                if doublings > max_doublings:
                    raise NotFinite(
                        f"layer ℓ^j = {ell ** level} needs more field doublings than allowed"
                    )
            layer = build_torus_layer(cur_L, ell, level)
            A = action_on_torus_layer(cur_s, layer)
            Ai = A.a.astype(np.int64) if level == 1 else A
            cnt = _layer_fixed_count(cur_L, Ai, ell, level)
            counts.append(cnt)
            if cnt == bnd_l or (len(counts) >= 2 and counts[-1] == counts[-2]):
                break
            level += 1
        out[ell] = counts[-1]
    out["order"] = int(np.prod([v for k, v in out.items() if isinstance(k, int)]))
    return out


def _extend_field(L: LieAlgebraFq, s: GroupElem) -> tuple[LieAlgebraFq, GroupElem]:
    """Rebuild over GF(p^{2r}) and transport s entrywise."""
    F = L.F
    F2 = Fq(F.p, 2 * F.r)
    L2 = build_lie_algebra(L.rd, F2)
    emb = embed_hom(F, F2)
    a = s.mat.a
    if F.r == 1:
        out = np.zeros((L.dim, L.dim, F2.r), dtype=np.int64)
        for i in range(L.dim):
            for j in range(L.dim):
                if a[i, j]:
                    out[i, j] = emb(int(a[i, j]))
    else:
        out = np.zeros((L.dim, L.dim, F2.r), dtype=np.int64)
        for i in range(L.dim):
            for j in range(L.dim):
                if a[i, j].any():
                    out[i, j] = emb(a[i, j])
    return L2, GroupElem(Mat(F2, out), s.provenance)



# normalizer machinery ----------------------------------------------------------
#
# Elements of <T, n_i> preserve the block split (root slots | Cartan slots)
# and act on root slots by a scaled permutation, so they compose in O(dim)
# instead of O(dim^3).  Normalizer computations stay in this structured
# form; dense matrices are materialized only for returned witnesses.


@dataclass
class BlockMonomial:
    """e_k -> scal[k] * e_{perm[k]}; h'-block transforms by cart."""

    F: Fq
    perm: np.ndarray          # length n_roots, int16
    scal: np.ndarray          # (n_roots,) or (n_roots, r) field entries
    cart: np.ndarray          # (l, l) or (l, l, r)

    def compose(self, other: "BlockMonomial") -> "BlockMonomial":
        """Apply self, then other (matches self.mat @ other.mat)."""
        F = self.F
        perm = other.perm[self.perm]
        if F.r == 1:
            scal = self.scal * other.scal[self.perm] % F.p
            cart = self.cart @ other.cart % F.p
        else:
            scal = F.vmul(self.scal, other.scal[self.perm])
            cart = F.matmul(self.cart, other.cart)
        return BlockMonomial(F, perm, scal, cart)

    def inv(self) -> "BlockMonomial":
        F = self.F
        ip = np.empty_like(self.perm)
        ip[self.perm] = np.arange(len(self.perm), dtype=self.perm.dtype)
        if F.r == 1:
            sc = np.array([pow(int(x), -1, F.p) for x in self.scal], dtype=np.int64)[ip]
            cart = Mat(F, self.cart).inv().a
        else:
            sc = np.stack([F.inv(x) for x in self.scal])[ip]
            cart = Mat(F, self.cart).inv().a
        return BlockMonomial(F, ip, sc, cart)

    def key(self) -> bytes:
        return self.perm.tobytes() + self.scal.tobytes() + self.cart.tobytes()

    def is_identity(self) -> bool:
        n = len(self.perm)
        if not np.array_equal(self.perm, np.arange(n, dtype=self.perm.dtype)):
            return False
        F = self.F
        one = np.zeros_like(self.scal)
        if F.r == 1:
            one[:] = 1
            eye = np.eye(self.cart.shape[0], dtype=np.int64)
        else:
            one[:, 0] = 1
            eye = np.zeros_like(self.cart)
            for i in range(self.cart.shape[0]):
                eye[i, i, 0] = 1
        return np.array_equal(self.scal, one) and np.array_equal(self.cart, eye)


def block_monomial_from_mat(L: LieAlgebraFq, g: Mat) -> BlockMonomial | None:
    """Extract the structured form, or None if g mixes the blocks or is
    not monomial on the root slots."""
    if isinstance(g, GroupElem):
        g = g.mat
    F = L.F
    n, l = L.rd.n_roots, L.l
    root_pos = np.array([L.basis_pos_of_root(k) for k in range(n)])
    cart_pos = np.array([L.cartan_pos(i) for i in range(l)])
    a = g.a
    perm = np.empty(n, dtype=np.int16)
    scal_shape = (n,) if F.r == 1 else (n, F.r)
    scal = np.zeros(scal_shape, dtype=np.int64)
    pos_to_root = {int(root_pos[k]): k for k in range(n)}
    for k in range(n):
        row = a[root_pos[k]]
        nz = np.flatnonzero(row) if F.r == 1 else np.flatnonzero(row.any(axis=1))
        if len(nz) != 1 or int(nz[0]) not in pos_to_root:
            return None
        perm[k] = pos_to_root[int(nz[0])]
        scal[k] = row[nz[0]]
    cart = a[np.ix_(cart_pos, cart_pos)].copy()
    for i in range(l):
        row = a[cart_pos[i]]
        mask = np.ones(L.dim, dtype=bool)
        mask[cart_pos] = False
        stray = row[mask]
        if stray.any():
            return None
    return BlockMonomial(F, perm, scal, cart)


def block_monomial_to_mat(L: LieAlgebraFq, b: BlockMonomial) -> Mat:
    F = L.F
    shape = (L.dim, L.dim) if F.r == 1 else (L.dim, L.dim, F.r)
    a = np.zeros(shape, dtype=np.int64)
    for k in range(L.rd.n_roots):
        a[L.basis_pos_of_root(k), L.basis_pos_of_root(int(b.perm[k]))] = b.scal[k]
    cart_pos = [L.cartan_pos(i) for i in range(L.l)]
    a[np.ix_(cart_pos, cart_pos)] = b.cart
    return Mat(F, a)


def torus_block(L: LieAlgebraFq, exps: np.ndarray, lam=None) -> BlockMonomial:
    """h(x) = ∏ h_i(λ^{x_i}) in structured form."""
    F = L.F
    lam = F.primitive_elem if lam is None else F.elem(lam)
    N = root_character_table(L)
    y = (N @ np.asarray(exps, dtype=np.int64)) % (F.q - 1)
    n = L.rd.n_roots
    if F.r == 1:
        scal = np.array([F.pow(lam, int(e)) for e in y], dtype=np.int64)
        cart = np.eye(L.l, dtype=np.int64)
    else:
        scal = np.stack([F.pow(lam, int(e)) for e in y])
        cart = np.zeros((L.l, L.l, F.r), dtype=np.int64)
        for i in range(L.l):
            cart[i, i, 0] = 1
    return BlockMonomial(F, np.arange(n, dtype=np.int16), scal, cart)


def exponent_action_of_perm(L: LieAlgebraFq, perm: np.ndarray) -> np.ndarray:
    """A with n h(x) n^-1 = h(x @ A) for a monomial n over the root
    permutation perm.

    The conjugate diagonal at slot k is the original at slot perm[k], so
    row i of A is the coroot expansion of w^-1(alpha_i)."""
    ip = _inv_perm(np.asarray(perm))
    simples = np.array(L.rd.simple_indices())
    return coroot_table(L)[ip[simples]]


def close_subgroup(gens: list[BlockMonomial], cap: int = 100000) -> dict[bytes, BlockMonomial]:
    """BFS closure of the generating set."""
    ident = None
    elems: dict[bytes, BlockMonomial] = {}
    frontier = list(gens)
    for g in gens:
        elems[g.key()] = g
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = a.compose(g)
                k = c.key()
                if k not in elems:
                    elems[k] = c
                    nxt.append(c)
                    assert len(elems) <= cap, "subgroup closure exceeded cap"
        frontier = nxt
    return elems


@dataclass
class MonomialSubgroup:
    """A small subgroup of <T, n-representatives>, fully enumerated in
    structured form, with the exponent rows of its ℓ-layer torus part for
    the Weyl-coset filter."""

    L: LieAlgebraFq
    ell: int
    gens: list[BlockMonomial]
    elements: dict[bytes, BlockMonomial]
    E_exponents: np.ndarray      # (k, l) rows mod ell; k may be 0

    @classmethod
    def from_gens(cls, L: LieAlgebraFq, ell: int, gens: list[BlockMonomial],
                  E_exponents: np.ndarray, cap: int = 100000) -> "MonomialSubgroup":
        return cls(L, ell, gens, close_subgroup(gens, cap), E_exponents)

    @property
    def order(self) -> int:
        return len(self.elements)

    def by_perm(self, perm: np.ndarray) -> list[BlockMonomial]:
        key = perm.tobytes()
        if not hasattr(self, "_perm_index"):
            self._perm_index = {}
            for e in self.elements.values():
                self._perm_index.setdefault(e.perm.tobytes(), []).append(e)
        return self._perm_index.get(key, [])


@dataclass
class NormalizerReport:
    order: int
    index: int                  # order // |B| when B given, else 0
    witnesses: list             # one GroupElem per contributing non-B coset
    surviving_cosets: int


def _weyl_line_filter_large(L: LieAlgebraFq, W: WeylGroup, z: np.ndarray, ell: int):
    """Weyl permutations sending the exponent line <z> mod ℓ to itself;
    vectorized over the stored batches."""
    D = coroot_table(L) % ell
    simples = np.array(L.rd.simple_indices(), dtype=np.int64)
    z = np.asarray(z, dtype=np.int64) % ell
    i0 = int(np.flatnonzero(z)[0])
    z_inv0 = pow(int(z[i0]), -1, ell)
    keep = []
    for P in W.iter_perm_batches():
        R = D[P[:, simples].astype(np.int64)]          # (B, l, l)
        x = (z[None, :, None] * R).sum(axis=1) % ell   # (B, l)
        c = x[:, i0] * z_inv0 % ell
        ok = (x == c[:, None] * z[None, :] % ell).all(axis=1) & (c != 0)
        for t in np.flatnonzero(ok):
            keep.append(P[t].copy())
    return keep


def _weyl_space_filter_small(L: LieAlgebraFq, W: WeylGroup, E: np.ndarray, ell: int):
    """Permutations preserving the row space of E mod ℓ; full enumeration."""
    Fell = Fq(ell)
    if E.shape[0] == 0:
        return [p.copy() for P in W.iter_perm_batches() for p in P]
    red0, piv0 = Mat(Fell, E % ell).rref()
    k = len(piv0)
    target = red0.a[:k]
    D = coroot_table(L) % ell
    simples = np.array(L.rd.simple_indices(), dtype=np.int64)
    keep = []
    for P in W.iter_perm_batches():
        for p in P:
            R = D[p[simples].astype(np.int64)]
            X = E @ R % ell
            red, piv = Mat(Fell, X).rref()
            if len(piv) == k and np.array_equal(red.a[:k], target):
                keep.append(p.copy())
    return keep


def weyl_cosets_preserving_layer(L: LieAlgebraFq, W: WeylGroup, E: np.ndarray, ell: int):
    if W.order() > 200000:
        assert E.shape[0] == 1, "large Weyl groups support only line filters"
        return _weyl_line_filter_large(L, W, E[0], ell)
    return _weyl_space_filter_small(L, W, E, ell)


def _n_rep_blocks(L: LieAlgebraFq) -> list[BlockMonomial]:
    reps = []
    for i in L.rd.simple_indices():
        b = block_monomial_from_mat(L, n_of_root(L, i).mat)
        assert b is not None, "n_i must preserve the block split"
        reps.append(b)
    return reps


def _dlog_cache_factory(F: Fq):
    cache: dict[bytes, int] = {}
    lam = F.primitive_elem

    def dlog(v) -> int:
        k = np.asarray(v).tobytes()
        if k not in cache:
            cache[k] = discrete_log(F, lam, v if F.r > 1 else int(v))
        return cache[k]

    return dlog


def _torus_param_kernel(L: LieAlgebraFq) -> int:
    """Size of {x mod q-1 : h(x) = 1}; divides counts when torus solutions
    are enumerated by exponent vectors."""
    N = root_character_table(L)
    return kernel_count_mod(N, L.F.q - 1)


def normalizer_in_torus_normalizer(
    L: LieAlgebraFq,
    W: WeylGroup,
    B: MonomialSubgroup,
    max_witnesses: int = 4,
) -> NormalizerReport:
    """N_{N_G(T)}(B) coset-by-coset over the Weyl group.

    Every element of ⟨T, n_i⟩ is uniquely h(x)·n_w, so per surviving Weyl
    coset w the condition h(x) c h(x)^-1 ∈ B for c = n_w b n_w^-1 pins,
    for each candidate target β with the same root permutation and Cartan
    block, a linear system over x modulo q-1: conjugating by h(x) scales
    the slot-k coefficient by λ^{(Nx)_k - (Nx)_{c.perm[k]}}.  Different
    targets give disjoint solution sets, so counts add; dividing by the
    parametrization kernel of x ↦ h(x) turns x-counts into element counts.
    The torus never gets enumerated."""
    F = L.F
    q1 = F.q - 1
    N = root_character_table(L)
    perms = weyl_cosets_preserving_layer(L, W, B.E_exponents, B.ell)
    nreps = _n_rep_blocks(L)
    dlog = _dlog_cache_factory(F)
    ker = _torus_param_kernel(L)
    n_roots = L.rd.n_roots

    total = 0
    witnesses = []
    for perm in perms:
        word = W.word_of_perm(perm)
        nw = torus_block(L, np.zeros(L.l, dtype=np.int64))
        for i in word:
            nw = nw.compose(nreps[i])
        nw_inv = nw.inv()

        # per generator: shared coefficient rows, one target vector per β
        gen_rows = []
        gen_alts = []
        dead = False
        for b in B.gens:
            c = nw.compose(b).compose(nw_inv)
            cp = c.perm.astype(np.int64)
            gen_rows.append(N - N[cp])
            alts = []
            for beta in B.by_perm(c.perm):
                if not np.array_equal(beta.cart, c.cart):
                    continue
                y = np.zeros(n_roots, dtype=np.int64)
                try:
                    for k in range(n_roots):
                        ratio = (
                            beta.scal[k] * pow(int(c.scal[k]), -1, F.p) % F.p
                            if F.r == 1
                            else F.div(beta.scal[k], c.scal[k])
                        )
                        y[k] = dlog(ratio)
                except NotInSubgroup:
                    continue
                alts.append(y)
            if not alts:
                dead = True
                break
            gen_alts.append(alts)
        if dead:
            continue

        Mstack = np.concatenate(gen_rows, axis=0)
        coset_count = 0
        coset_xs = []
        for choice in itertools.product(*(range(len(a)) for a in gen_alts)):
            ystack = np.concatenate(
                [alts[ci] for alts, ci in zip(gen_alts, choice)], axis=0
            )
            res = solve_mod(Mstack, ystack, q1)
            if res is None:
                continue
            coset_count += res.count
            x0 = np.asarray(res.particular, dtype=np.int64) % q1
            coset_xs.append(x0)
            for kg in res.kernel_gens[:4]:
                coset_xs.append((x0 + np.asarray(kg, dtype=np.int64)) % q1)
        if coset_count == 0:
            continue
        assert coset_count % ker == 0
        total += coset_count // ker
        if len(witnesses) < max_witnesses:
            for x in coset_xs:
                g = torus_block(L, x).compose(nw)
                if g.key() not in B.elements:
                    witnesses.append(
                        GroupElem(block_monomial_to_mat(L, g), [("coset", word)])
                    )
                    break
    index = total // B.order if total % B.order == 0 else 0
    return NormalizerReport(
        order=total, index=index, witnesses=witnesses, surviving_cosets=len(perms)
    )


def _inv_perm(p: np.ndarray) -> np.ndarray:
    ip = np.empty_like(p)
    ip[p] = np.arange(len(p), dtype=p.dtype)
    return ip
