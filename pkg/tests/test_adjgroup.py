"""Group generators, torus layers, and the coset-by-coset normalizer."""

import numpy as np
import pytest

from chevlie.exactla import Fq, Mat, Poly
from chevlie.rootdata import WeylGroup, roots_from_dynkin
from chevlie.chevalley import build_lie_algebra
from chevlie.adjgroup import (
    GroupElem,
    MonomialSubgroup,
    NotFinite,
    action_on_torus_layer,
    block_monomial_from_mat,
    block_monomial_to_mat,
    build_torus_layer,
    centralizer_in_torus_layers,
    element_order,
    exponent_action_of_perm,
    find_u,
    ghn,
    h_of_root,
    membership,
    n_of_root,
    normalizer_in_torus_normalizer,
    torus_block,
    torus_from_exponents,
    x_of_root,
)
from chevlie.adjgroup.torus import _n_rep_blocks, _torus_param_kernel


@pytest.fixture(scope="module")
def f4_61():
    rd = roots_from_dynkin("F4")
    return rd, build_lie_algebra(rd, Fq(61))


@pytest.fixture(scope="module")
def a2_5():
    rd = roots_from_dynkin("A2")
    return rd, build_lie_algebra(rd, Fq(5)), WeylGroup(rd)


class TestGenerators:
    def test_h_commute(self, f4_61):
        rd, L = f4_61
        _, _, hs, _ = ghn(L)
        for i in range(4):
            for j in range(i + 1, 4):
                assert hs[i] @ hs[j] == hs[j] @ hs[i]

    def test_n_normalizes_torus(self, f4_61):
        rd, L = f4_61
        from chevlie.adjgroup import diag_of

        _, _, hs, ns = ghn(L)
        for i in range(4):
            for j in range(4):
                conj = (ns[i].inv() @ hs[j]) @ ns[i]
                assert diag_of(conj.mat) is not None

    def test_x_fixes_own_root_vector(self, f4_61):
        rd, L = f4_61
        xs_pos, _, _, _ = ghn(L)
        for i, si in enumerate(rd.simple_indices()):
            er = L.e_vec(si)
            assert np.array_equal(xs_pos[i].mat.mul_vec(er), er)

    def test_membership_accepts_generators(self, f4_61):
        rd, L = f4_61
        xs_pos, xs_neg, hs, ns = ghn(L)
        assert membership(L, xs_pos[0])
        assert membership(L, xs_neg[2])
        assert membership(L, hs[1])
        assert membership(L, ns[3])

    def test_membership_accepts_identity(self, f4_61):
        rd, L = f4_61
        ident = GroupElem(Mat(Fq(61), np.eye(L.dim, dtype=np.int64)), [])
        assert membership(L, ident)

    def test_membership_rejects_scalar(self, f4_61):
        rd, L = f4_61
        two = GroupElem(Mat(Fq(61), 2 * np.eye(L.dim, dtype=np.int64)), [])
        assert not membership(L, two)

    def test_membership_closed_under_products(self, f4_61):
        rd, L = f4_61
        xs_pos, xs_neg, _, _ = ghn(L)
        g = xs_pos[0] @ xs_neg[1]
        assert membership(L, g)
        assert membership(L, g.inv())

    def test_h_order_matches_field(self, f4_61):
        rd, L = f4_61
        _, _, hs, _ = ghn(L)
        assert element_order(hs[0], 60) == 60

    def test_unipotent_order(self, f4_61):
        rd, L = f4_61
        x = x_of_root(L, rd.simple_indices()[0], Fq(61).one())
        assert element_order(x, 61) == 61


class TestBlockMonomial:
    def test_n_perm_matches_weyl_generator(self, f4_61):
        rd, L = f4_61
        W = WeylGroup(rd)
        for i, si in enumerate(rd.simple_indices()):
            b = block_monomial_from_mat(L, n_of_root(L, si).mat)
            assert b is not None
            assert np.array_equal(b.perm, W.generators[i])

    def test_roundtrip_and_compose(self, f4_61):
        rd, L = f4_61
        si = rd.simple_indices()
        n1, n2 = n_of_root(L, si[0]), n_of_root(L, si[1])
        b1 = block_monomial_from_mat(L, n1.mat)
        b2 = block_monomial_from_mat(L, n2.mat)
        dense = (n1 @ n2).mat
        assert block_monomial_to_mat(L, b1.compose(b2)) == dense
        assert block_monomial_to_mat(L, b1.inv()) == n1.inv().mat

    def test_torus_block_matches_dense(self, f4_61):
        rd, L = f4_61
        F = L.F
        rng = np.random.default_rng(5)
        for _ in range(3):
            x = rng.integers(0, F.q - 1, size=L.l)
            tb = torus_block(L, x)
            dense = torus_from_exponents(L, F.primitive_elem, x)
            assert block_monomial_to_mat(L, tb) == dense.mat

    def test_rejects_non_monomial(self, f4_61):
        rd, L = f4_61
        x = x_of_root(L, rd.simple_indices()[0], Fq(61).one())
        assert block_monomial_from_mat(L, x.mat) is None

    def test_exponent_action_direction(self, f4_61):
        # n h(x) n^-1 = h(x @ A); a length-2 word pins the direction
        rd, L = f4_61
        F = L.F
        W = WeylGroup(rd)
        si = rd.simple_indices()
        n12 = n_of_root(L, si[0]) @ n_of_root(L, si[1])
        b = block_monomial_from_mat(L, n12.mat)
        assert np.array_equal(b.perm, W.perm_of_word([0, 1]))
        A = exponent_action_of_perm(L, b.perm)
        rng = np.random.default_rng(3)
        for _ in range(3):
            x = rng.integers(0, F.q - 1, size=L.l)
            hx = torus_from_exponents(L, F.primitive_elem, x)
            conj = (n12 @ hx) @ n12.inv()
            cand = torus_from_exponents(L, F.primitive_elem, (x @ A) % (F.q - 1))
            assert conj.mat == cand.mat


class TestTorusLayers:
    def test_layer_generators_commute_and_have_layer_order(self, f4_61):
        rd, L = f4_61
        layer = build_torus_layer(L, 5, 1)
        for i in range(4):
            for j in range(i + 1, 4):
                gi, gj = layer.generators[i], layer.generators[j]
                assert gi @ gj == gj @ gi
        for g in layer.generators:
            assert g.pow(5).is_identity()

    def test_identity_action_is_identity(self, f4_61):
        rd, L = f4_61
        layer = build_torus_layer(L, 5, 1)
        ident = GroupElem(Mat(Fq(61), np.eye(L.dim, dtype=np.int64)), [])
        A = action_on_torus_layer(ident, layer)
        assert np.array_equal(A.a, np.eye(4, dtype=np.int64))

    def test_action_functoriality(self, f4_61):
        rd, L = f4_61
        layer = build_torus_layer(L, 5, 1)
        si = rd.simple_indices()
        s = n_of_root(L, si[0]) @ n_of_root(L, si[2])
        A1 = action_on_torus_layer(s, layer)
        A2 = action_on_torus_layer(s @ s, layer)
        assert A1 @ A1 == A2

    def test_find_u_scalar_case(self):
        # rank-1: the reflection inverts the layer, so sbar = (-1) = (4) mod 5
        rd = roots_from_dynkin("A1")
        L = build_lie_algebra(rd, Fq(11))
        layer = build_torus_layer(L, 5, 1)
        s = n_of_root(L, rd.simple_indices()[0])
        sbar = action_on_torus_layer(s, layer)
        assert np.array_equal(sbar.a, np.array([[4]]))
        u = find_u(sbar, layer, Poly(Fq(5), [1, 1]))  # X - 4 = X + 1 over GF(5)
        assert u == layer.generators[0]

    def test_find_u_missing_block(self):
        from chevlie.adjgroup import BlockNotFound

        rd = roots_from_dynkin("A1")
        L = build_lie_algebra(rd, Fq(11))
        layer = build_torus_layer(L, 5, 1)
        s = n_of_root(L, rd.simple_indices()[0])
        sbar = action_on_torus_layer(s, layer)
        with pytest.raises(BlockNotFound):
            find_u(sbar, layer, Poly(Fq(5), [3, 1]))  # X + 3 has no block


class TestCentralizer:
    def test_coxeter_centralizer_matches_brute_force(self):
        rd = roots_from_dynkin("A2")
        F = Fq(7)
        L = build_lie_algebra(rd, F)
        W = WeylGroup(rd)
        si = rd.simple_indices()
        s = n_of_root(L, si[0]) @ n_of_root(L, si[1])
        out = centralizer_in_torus_layers(L, s, [0, 1], W, [2, 3])
        seen = {}
        for x0 in range(6):
            for x1 in range(6):
                h = torus_from_exponents(L, F.primitive_elem, [x0, x1])
                seen[h.mat.a.tobytes()] = h
        brute = sum(1 for h in seen.values() if (s @ h) == (h @ s))
        assert out["order"] == brute == 3

    def test_fixed_line_raises(self):
        rd = roots_from_dynkin("A2")
        L = build_lie_algebra(rd, Fq(7))
        W = WeylGroup(rd)
        s = n_of_root(L, rd.simple_indices()[0])
        with pytest.raises(NotFinite):
            centralizer_in_torus_layers(L, s, [0], W, [2])


class TestNormalizer:
    def _brute_force(self, L, W, B):
        q1 = L.F.q - 1
        nreps = _n_rep_blocks(L)
        cosets = []
        for P in W.iter_perm_batches():
            for p in P:
                nw = torus_block(L, np.zeros(L.l, dtype=np.int64))
                for i in W.word_of_perm(p):
                    nw = nw.compose(nreps[i])
                cosets.append(nw)
        Bkeys = set(B.elements.keys())
        seen = set()
        count = 0
        for xs in np.ndindex(*(q1,) * L.l):
            hx = torus_block(L, np.array(xs, dtype=np.int64))
            for nw in cosets:
                g = hx.compose(nw)
                k = g.key()
                if k in seen:
                    continue
                seen.add(k)
                gi = g.inv()
                if all(g.compose(b).compose(gi).key() in Bkeys for b in B.gens):
                    count += 1
        return count

    @pytest.mark.parametrize("p", [5, 7])
    def test_matches_brute_force(self, p):
        # p = 7 exercises a nontrivial exponent-parametrization kernel
        rd = roots_from_dynkin("A2")
        L = build_lie_algebra(rd, Fq(p))
        W = WeylGroup(rd)
        n1 = block_monomial_from_mat(L, n_of_root(L, rd.simple_indices()[0]).mat)
        B = MonomialSubgroup.from_gens(
            L, 2, [n1], np.array([[1, 0]], dtype=np.int64)
        )
        rep = normalizer_in_torus_normalizer(L, W, B)
        assert rep.order == self._brute_force(L, W, B)
        assert rep.order == rep.index * B.order
        Bkeys = set(B.elements.keys())
        for w in rep.witnesses:
            bm = block_monomial_from_mat(L, w.mat)
            assert bm.key() not in Bkeys
            bi = bm.inv()
            for b in B.gens:
                assert bm.compose(b).compose(bi).key() in Bkeys

    def test_full_layer_normalized_by_everything(self, a2_5):
        rd, L, W = a2_5
        q1 = L.F.q - 1
        gens, rows = [], []
        for i in range(L.l):
            e = np.zeros(L.l, dtype=np.int64)
            e[i] = q1 // 2
            gens.append(torus_block(L, e))
            r = np.zeros(L.l, dtype=np.int64)
            r[i] = 1
            rows.append(r)
        B = MonomialSubgroup.from_gens(L, 2, gens, np.array(rows))
        rep = normalizer_in_torus_normalizer(L, W, B)
        expected = (q1**2 // _torus_param_kernel(L)) * W.order()
        assert rep.order == expected
        assert rep.surviving_cosets == W.order()
