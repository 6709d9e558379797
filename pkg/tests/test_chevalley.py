"""Structure constants, the field algebra, and basis adaptation."""

import random

import numpy as np
import pytest

from chevlie.exactla import Fq, Mat
from chevlie.chevalley import (
    GraphMismatch,
    NotSemisimple,
    adapted_chevalley_basis,
    build_lie_algebra,
    fixed_space,
    structure_constants_over_z,
    verify_jacobi_over_z,
)
from chevlie.chevalley.adapted import _graph_isomorphisms
from chevlie.rootdata import extraspecial_pairs, roots_from_dynkin

F61 = Fq(61)


@pytest.fixture(scope="module")
def f4_61():
    return build_lie_algebra(roots_from_dynkin("F4"), F61)


def _regular_torus(L, lam=2, weights=None):
    """Diagonal automorphism e_a -> lam^{w . a} e_a."""
    rd, F = L.rd, L.F
    q1 = F.p - 1
    s = np.zeros((L.dim, L.dim), dtype=np.int64)
    for k in range(rd.n_roots):
        e = int(rd.height(k) if weights is None else weights @ rd.root(k)) % q1
        p = L.basis_pos_of_root(k)
        s[p, p] = pow(lam, e, F.p)
    for i in range(L.l):
        s[L.cartan_pos(i), L.cartan_pos(i)] = 1
    return Mat(F, s)


class TestStructureConstants:
    @pytest.mark.parametrize(
        "label,n_pairs,values",
        [("A2", 12, {-1, 1}), ("A3", 48, {-1, 1}), ("F4", 816, {-2, -1, 1, 2})],
    )
    def test_tables(self, label, n_pairs, values):
        rd = roots_from_dynkin(label)
        tab = structure_constants_over_z(rd)
        assert len(tab) == n_pairs
        assert set(tab.values()) == values

    def test_e7_table(self):
        tab = structure_constants_over_z(roots_from_dynkin("E7"))
        assert len(tab) == 4032
        assert set(tab.values()) == {-1, 1}

    def test_extraspecial_anchors_positive(self):
        rd = roots_from_dynkin("F4")
        tab = structure_constants_over_z(rd)
        for gi, (r, s) in extraspecial_pairs(rd).items():
            if rd.height(gi) > 1:
                assert tab[(r, s)] == rd.chain_down(r, s) + 1 > 0

    def test_a2_values(self):
        rd = roots_from_dynkin("A2")
        tab = structure_constants_over_z(rd)
        a1, a2 = 0, 1
        assert tab[(a1, a2)] == 1
        assert tab[(a2, a1)] == -1
        assert tab[(rd.neg_index(a1), rd.neg_index(a2))] == -1

    @pytest.mark.parametrize("label", ["A2", "A3"])
    def test_jacobi_exhaustive(self, label):
        assert verify_jacobi_over_z(roots_from_dynkin(label)) > 0

    @pytest.mark.parametrize("label", ["F4", "E7"])
    def test_jacobi_randomized(self, label):
        assert verify_jacobi_over_z(roots_from_dynkin(label), n_random=10000, seed=1) == 10000


class TestFieldAlgebra:
    def test_dimensions(self, f4_61):
        assert f4_61.dim == 52
        assert f4_61.l == 4
        assert f4_61.n_pos == 24

    def test_basis_layout_roundtrip(self, f4_61):
        L = f4_61
        for k in range(L.rd.n_roots):
            assert L.root_of_basis_pos(L.basis_pos_of_root(k)) == k
        for i in range(L.l):
            assert L.root_of_basis_pos(L.cartan_pos(i)) is None

    def test_cartan_bracket_eigenvalues(self, f4_61):
        L = f4_61
        for i in range(L.l):
            h = L.h_prime_vec(i)
            for k in (0, 5, 30, 40):
                e = L.e_vec(k)
                w = L.bracket(h, e)
                coeff = int(L.rd.root(k)[i]) % 61
                assert np.array_equal(w, e * coeff % 61)

    def test_opposite_bracket_is_coroot(self, f4_61):
        L = f4_61
        for k in range(L.n_pos):
            h = L.bracket(L.e_vec(k), L.e_vec(L.rd.neg_index(k)))
            assert np.array_equal(h, L.h_root_vec(k))

    def test_ad_derivation_random(self, f4_61):
        L = f4_61
        rng = random.Random(7)
        for _ in range(30):
            x, y, z = (
                np.array([rng.randrange(61) for _ in range(L.dim)], dtype=np.int64)
                for _ in range(3)
            )
            lhs = L.bracket(x, L.bracket(y, z))
            rhs = (L.bracket(L.bracket(x, y), z) + L.bracket(y, L.bracket(x, z))) % 61
            assert np.array_equal(lhs, rhs)

    def test_cartan_action_antisymmetry(self, f4_61):
        # A_{r,-s} = -A_{r,s}
        L = f4_61
        rd = L.rd
        for r in range(rd.n_roots):
            for s in range(0, rd.n_roots, 5):
                assert L.cartan_int(rd.neg_index(s), r) == -L.cartan_int(s, r)


class TestInvolutionAndKilling:
    def test_involution_squares_to_identity(self, f4_61):
        iota = f4_61.chevalley_involution()
        assert iota @ iota == Mat.eye(F61, f4_61.dim)

    def test_involution_preserves_bracket(self, f4_61):
        L = f4_61
        iota = L.chevalley_involution().a
        for i in range(0, L.dim, 3):
            for j in range(0, L.dim, 7):
                x = np.zeros(L.dim, dtype=np.int64)
                y = np.zeros(L.dim, dtype=np.int64)
                x[i] = 1
                y[j] = 1
                assert np.array_equal(
                    L.bracket(x @ iota % 61, y @ iota % 61),
                    L.bracket(x, y) @ iota % 61,
                )

    def test_killing_symmetric_and_graded(self, f4_61):
        L = f4_61
        K = L.killing_form()
        assert K == K.T
        rd = L.rd
        for k in range(rd.n_roots):
            pa = L.basis_pos_of_root(k)
            for m in range(rd.n_roots):
                pb = L.basis_pos_of_root(m)
                if m == rd.neg_index(k):
                    assert int(K.a[pa, pb]) != 0
                else:
                    assert int(K.a[pa, pb]) == 0

    def test_killing_involution_invariance(self, f4_61):
        K = f4_61.killing_form()
        iota = f4_61.chevalley_involution()
        assert iota @ K @ iota.T == K


class TestFixedSpace:
    def test_identity_fixes_everything(self, f4_61):
        assert fixed_space(Mat.eye(F61, f4_61.dim)).nrows == f4_61.dim

    def test_regular_torus_fixes_cartan(self, f4_61):
        assert fixed_space(_regular_torus(f4_61)).nrows == 4


class TestAdaptedBasis:
    def test_full_torus_case(self, f4_61):
        L = f4_61
        s = _regular_torus(L)
        ch = adapted_chevalley_basis(L, s, seed=0)
        assert int(np.sum(ch.s_diagonal == 1)) == 4
        root_rows = [L.basis_pos_of_root(k) for k in range(L.rd.n_roots)]
        assert ((ch.matrix.a[root_rows] != 0).sum(axis=1) == 1).all()
        assert ch.matrix @ ch.inverse == Mat.eye(F61, L.dim)

    def test_a1_t3_case(self, f4_61):
        L = f4_61
        s = _regular_torus(L, weights=np.array([7, 11, 10, 1], dtype=np.int64))
        assert fixed_space(s).nrows == 6
        ch = adapted_chevalley_basis(L, s, seed=0)
        assert int(np.sum(ch.s_diagonal == 1)) == 6

    def test_identity_keeps_reference_cartan(self, f4_61):
        # degenerate fixed space = whole algebra: the reference Cartan is
        # inside, so the change matrix stays monomial and s stays diagonal
        ch = adapted_chevalley_basis(f4_61, Mat.eye(F61, f4_61.dim))
        assert (ch.s_diagonal == 1).all()
        L = f4_61
        root_rows = [L.basis_pos_of_root(k) for k in range(L.rd.n_roots)]
        assert ((ch.matrix.a[root_rows] != 0).sum(axis=1) == 1).all()

    def test_unipotent_rejected(self):
        L = build_lie_algebra(roots_from_dynkin("A2"), Fq(7))
        x = Mat.eye(Fq(7), L.dim)
        # exp of a nilpotent ad: fixed space carries no split Cartan
        from chevlie.adjgroup import x_of_root

        u = x_of_root(L, 0, 1)
        with pytest.raises(NotSemisimple):
            adapted_chevalley_basis(L, u.mat)

    def test_graph_iso_unit(self):
        # path vs triangle on colors: no isomorphism
        path = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.uint8)
        tri = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=np.uint8)
        assert list(_graph_isomorphisms(path, tri)) == []
        isos = list(_graph_isomorphisms(path, path))
        assert len(isos) == 2  # identity and the end swap
