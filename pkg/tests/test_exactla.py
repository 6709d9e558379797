import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chevlie.exactla import (
    FieldTooSmall,
    Fq,
    Mat,
    NoLDU,
    NotInSubgroup,
    Poly,
    bivariate_det_interpolate,
    bivariate_eval,
    companion_matrix,
    dets_batched,
    discrete_log,
    embed_hom,
    kernel_count_mod,
    lagrange_interpolate,
    ldu,
    mat_minpoly,
    matrix_to_text,
    min_poly_over_prime,
    quotient_order,
    rational_canonical_form,
    read_matrix_stream,
    smith_normal_form,
    solve_mod,
)

F5 = Fq(5)
F7 = Fq(7)
F19 = Fq(19)
F61 = Fq(61)
F25 = Fq(5, 2, modulus=np.array([2, 4, 1], dtype=np.int64))
F27 = Fq(3, 3, modulus=np.array([1, 2, 0, 1], dtype=np.int64))


class TestField:
    def test_basic_arithmetic(self):
        assert F19.add(15, 7) == 3
        assert F19.mul(7, 8) == 18
        assert F19.inv(2) == 10
        assert F19.pow(2, 18) == 1

    def test_extension_arithmetic(self):
        w = F25.gen()
        w2 = F25.mul(w, w)
        # w^2 = -4w - 2 = w + 3 under modulus x^2 + 4x + 2
        assert list(w2) == [3, 1]
        assert F25.is_zero(F25.sub(F25.mul(w, F25.inv(w)), F25.one()))

    def test_generator_orders(self):
        assert F25.order(F25.gen()) == 24
        assert F27.order(F27.gen()) == 26
        assert F61.order(F61.elem(2)) == 60

    def test_discrete_log_frozen(self):
        # 2^20 = (2^10)^2 = 48^2 = 2304 = 37*61 + 47
        assert discrete_log(F61, F61.elem(2), F61.elem(47)) == 20

    def test_discrete_log_outside_subgroup(self):
        # 2 generates all of GF(61)*; 3^k ranges over the order-10 subgroup? no:
        # pick base of small order: 60th roots: base = 2^6 has order 10;
        # 2 itself is not a power of it.
        base = F61.pow(F61.elem(2), 6)
        with pytest.raises(NotInSubgroup):
            discrete_log(F61, base, F61.elem(2))

    def test_embed_hom(self):
        big = Fq(5, 4)
        phi = embed_hom(F25, big)
        a, b = F25.rand(np.random.default_rng(3)), F25.gen()
        assert np.array_equal(phi(F25.mul(a, b)), big.mul(phi(a), phi(b)))
        assert np.array_equal(phi(F25.add(a, b)), big.add(phi(a), phi(b)))

    def test_matmul_overflow_margin(self):
        # worst case in the package: 133 x 133 over p = 36541
        assert 133 * 36541**2 < 2**63


class TestPoly:
    def test_roots_frozen(self):
        assert sorted(Poly(Fq(11), [10, 10, 1]).roots()) == [4, 8]
        assert Poly(F7, [6, 6, 1]).roots() == []

    def test_roots_large_field(self):
        # x^2 - x - 1 over GF(36541): 5 is a QR, two roots
        F = Fq(36541)
        rts = Poly(F, [F.p - 1, F.p - 1, 1]).roots()
        assert len(rts) == 2
        for t in rts:
            assert (t * t - t - 1) % F.p == 0

    def test_min_poly_frozen(self):
        w = F25.gen()
        assert list(min_poly_over_prime(F25, w)) == [2, 4, 1]
        assert list(min_poly_over_prime(F25, F25.pow(w, 4))) == [1, 4, 1]
        assert list(min_poly_over_prime(F25, F25.pow(w, 2))) == [4, 3, 1]

    def test_factor(self):
        # (x^2+3x+4)(x-1)^2 over GF(5)
        f = Poly(F5, [4, 3, 1]) * Poly(F5, [4, 1]) * Poly(F5, [4, 1])
        fac = f.factor()
        assert sorted((tuple(int(c) for c in g.c), m) for g, m in fac) == [
            ((4, 1), 2),
            ((4, 3, 1), 1),
        ]

    def test_lagrange(self):
        xs = [F19.elem(i) for i in range(4)]
        f = Poly(F19, [3, 1, 0, 2])
        ys = [f.eval(x) for x in xs]
        assert lagrange_interpolate(F19, xs, ys) == f

    @given(st.integers(0, 10**6), st.integers(0, 10**6))
    @settings(max_examples=50, deadline=None)
    def test_field_ring_axioms(self, x, y):
        a, b = F19.elem(x), F19.elem(y)
        assert F19.mul(a, b) == F19.mul(b, a)
        assert F19.add(a, b) == F19.add(b, a)
        w = F25.from_int(x)
        v = F25.from_int(y)
        assert np.array_equal(F25.mul(w, v), F25.mul(v, w))
        assert np.array_equal(
            F25.mul(w, F25.add(v, F25.one())), F25.add(F25.mul(w, v), w)
        )


class TestMat:
    def test_ldu_frozen(self):
        M = Mat.from_scalar_rows(F19, [[1, 2], [3, 4]])
        L, D, U = ldu(M)
        assert np.array_equal(L.a, [[1, 0], [3, 1]])
        assert np.array_equal(U.a, [[1, 2], [0, 1]])
        assert np.array_equal(np.diag(D.a), [1, 17])

    def test_ldu_rejects(self):
        with pytest.raises(NoLDU):
            ldu(Mat.from_scalar_rows(F19, [[0, 1], [1, 0]]))

    def test_inverse_and_det(self):
        A = Mat.from_scalar_rows(F19, [[1, 2, 3], [4, 5, 6], [7, 8, 10]])
        assert (A @ A.inv()).is_identity()
        assert A.det() == 16  # -3 mod 19

    def test_kernel_columns(self):
        B = Mat.from_scalar_rows(F19, [[1, 2, 3], [2, 4, 6], [1, 1, 1]])
        K = B.kernel()
        assert K.nrows == 1
        for row in K.a:
            assert not ((B.a @ row) % 19).any()

    def test_solve_affine(self):
        A = Mat.from_scalar_rows(F19, [[1, 2, 3], [2, 4, 6], [1, 1, 1]])
        x, ker = A.solve_affine(np.array([6, 12, 3], dtype=np.int64))
        assert x is not None
        assert not ((A.a @ x - np.array([6, 12, 3])) % 19).any()
        assert ker.nrows == 1
        none, _ = A.solve_affine(np.array([1, 0, 0], dtype=np.int64))
        assert none is None

    def test_rcf_companion_fixed_point(self):
        C = companion_matrix(Poly(F5, [4, 3, 1]))
        r = rational_canonical_form(C)
        assert r.form == C
        assert len(r.blocks) == 1 and r.blocks[0].power == 1

    def test_rcf_identity_splits(self):
        r = rational_canonical_form(Mat.eye(F5, 2))
        assert len(r.blocks) == 2
        assert all(b.g.degree == 1 for b in r.blocks)

    def test_rcf_nilpotent_chain(self):
        J = Mat.from_scalar_rows(F7, [[1, 1], [0, 1]])
        r = rational_canonical_form(J)
        assert len(r.blocks) == 1 and r.blocks[0].power == 2

    @given(st.integers(0, 2**32))
    @settings(max_examples=40, deadline=None)
    def test_rcf_random_conjugation_identity(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        X = Mat(F19, rng.integers(0, 19, size=(n, n)))
        res = rational_canonical_form(X)
        assert res.P @ X == res.form @ res.P
        assert res.P.rank() == n
        assert mat_minpoly(res.form) == mat_minpoly(X)

    def test_bivariate_frozen(self):
        Z0 = Mat.zeros(F7, 2, 2)
        Z1 = Mat.zeros(F7, 2, 2)
        Z2 = Mat.zeros(F7, 2, 2)
        Z1.a[0, 0] = 1
        Z2.a[1, 1] = 1
        C = bivariate_det_interpolate(Z0, Z1, Z2)
        expect = np.zeros((3, 3), dtype=np.int64)
        expect[1, 1] = 1
        expect[0, 0] = 6  # the constant -1
        assert np.array_equal(C.a, expect)

    def test_bivariate_small_field(self):
        with pytest.raises(FieldTooSmall):
            bivariate_det_interpolate(
                Mat.zeros(F5, 5, 5), Mat.eye(F5, 5), Mat.eye(F5, 5)
            )

    @given(st.integers(0, 2**32))
    @settings(max_examples=20, deadline=None)
    def test_bivariate_matches_direct_eval(self, seed):
        rng = np.random.default_rng(seed)
        Z = [Mat(F19, rng.integers(0, 19, size=(3, 3))) for _ in range(3)]
        C = bivariate_det_interpolate(*Z)
        x, y = F19.elem(int(rng.integers(0, 19))), F19.elem(int(rng.integers(0, 19)))
        direct = (Z[0] + Z[1].scale(x) + Z[2].scale(y)).det()
        assert bivariate_eval(C, x, y) == F19.sub(direct, F19.one())

    def test_dets_batched_agree(self):
        rng = np.random.default_rng(0)
        F31 = Fq(31)
        mats = rng.integers(0, 31, size=(60, 5, 5)).astype(np.int64)
        # force some singular and zero-pivot cases
        mats[0, 0, :] = 0
        mats[1, 0, 0] = 0
        dd = dets_batched(F31, mats)
        for i in range(60):
            assert dd[i] == Mat(F31, mats[i]).det()

    def test_extension_field_matrices(self):
        w = F25.gen()
        Y = Mat.zeros(F25, 2, 2)
        Y.a[0, 0] = w
        Y.a[1, 1] = F25.pow(w, 5)
        r = rational_canonical_form(Y)
        assert r.P @ Y == r.form @ r.P
        assert (Y @ Y.inv()).is_identity()


class TestIntLat:
    def test_snf_minor_gcds(self):
        D, U, V = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        assert [int(D[i, i]) for i in range(3)] == [2, 2, 156]

    @given(st.integers(0, 2**32))
    @settings(max_examples=30, deadline=None)
    def test_snf_random(self, seed):
        rng = np.random.default_rng(seed)
        m, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        A = rng.integers(-30, 30, size=(m, k))
        D, U, V = smith_normal_form(A)
        assert np.array_equal(U @ np.array(A, dtype=object) @ V, D)
        diag = [int(D[i, i]) for i in range(min(m, k))]
        for a, b in zip(diag, diag[1:]):
            if a:
                assert b % a == 0
            else:
                assert b == 0

    def test_solve_mod(self):
        assert solve_mod([[3]], [4], 12) is None
        r = solve_mod([[3]], [6], 12)
        assert r is not None and (3 * r.particular[0]) % 12 == 6 and r.count == 3
        assert kernel_count_mod([[2, 0], [0, 3]], 6) == 6
        assert quotient_order([[2, 0], [0, 3]], 2) == 6


class TestMatIO:
    def test_roundtrip_prime(self):
        M = Mat.from_scalar_rows(F19, [[1, 2], [3, 4]])
        assert read_matrix_stream(io.StringIO(matrix_to_text(M))) == M

    def test_roundtrip_extension(self):
        M = Mat.zeros(F25, 2, 3)
        M.a[0, 0] = F25.gen()
        M.a[1, 2, 0] = 3
        assert read_matrix_stream(io.StringIO(matrix_to_text(M)), F25) == M

    def test_multiple_matrices(self):
        a = Mat.eye(F7, 2)
        b = Mat.from_scalar_rows(F7, [[1, 2], [3, 4]])
        s = io.StringIO(matrix_to_text(a) + "\n" + matrix_to_text(b))
        assert read_matrix_stream(s) == a
        assert read_matrix_stream(s, F7) == b
        assert read_matrix_stream(s) is None
