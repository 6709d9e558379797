"""Root systems, Weyl groups, and conjugacy-class fingerprints."""

import numpy as np
import pytest

from chevlie.rootdata import (
    WrongType,
    extraspecial_pairs,
    reflection_rep_fixed_space,
    roots_from_dynkin,
    subsystem_a2a2_f4,
    weyl_group,
)


class TestRootGeneration:
    @pytest.mark.parametrize(
        "label,n_pos,highest",
        [
            ("A2", 3, [1, 1]),
            ("A3", 6, [1, 1, 1]),
            ("F4", 24, [2, 3, 4, 2]),
            ("E6", 36, [1, 2, 2, 3, 2, 1]),
            ("E7", 63, [2, 2, 3, 4, 3, 2, 1]),
        ],
    )
    def test_counts_and_highest(self, label, n_pos, highest):
        rd = roots_from_dynkin(label)
        assert rd.n_positive == n_pos
        assert list(rd.highest_root()) == highest

    def test_simples_come_first(self):
        rd = roots_from_dynkin("F4")
        for i in range(4):
            assert list(rd.positive_roots[i]) == list(np.eye(4, dtype=int)[i])

    def test_root_negation_layout(self):
        rd = roots_from_dynkin("F4")
        for i in range(rd.n_positive):
            assert np.array_equal(rd.root(rd.neg_index(i)), -rd.root(i))

    def test_string_property(self):
        # r + s is a root iff the chain continues: spot check closure under
        # negation and the p - n > 0 criterion on F4
        rd = roots_from_dynkin("F4")
        for k in range(rd.n_roots):
            assert rd.is_root(rd.root(k))
            assert not rd.is_root(rd.root(k) * 0)

    def test_extraspecial_pair_a3(self):
        # height-3 root alpha1+alpha2+alpha3 decomposes with minimal first
        # part alpha1 under the reversed-tuple order
        rd = roots_from_dynkin("A3")
        es = extraspecial_pairs(rd)
        gi = rd.root_index(np.array([1, 1, 1]))
        r, s = es[gi]
        assert list(rd.positive_roots[r]) == [1, 0, 0]
        assert list(rd.positive_roots[s]) == [0, 1, 1]

    def test_chain_down_f4(self):
        rd = roots_from_dynkin("F4")
        a3 = rd.root_index(np.eye(4, dtype=np.int64)[2])
        a2 = rd.root_index(np.eye(4, dtype=np.int64)[1])
        # alpha2 - alpha3 is not a root; the (alpha3, alpha2)-chain has p = 0
        assert rd.chain_down(a3, a2) == 0
        # alpha2 + alpha3 down through alpha3: subtracting alpha3 once stays
        # in the system, twice leaves it
        g = rd.root_index(np.array([0, 1, 1, 0]))
        assert rd.chain_down(a3, g) == 1


class TestWeylGroups:
    @pytest.mark.parametrize("label,order", [("A2", 6), ("A3", 24), ("F4", 1152)])
    def test_small_orders(self, label, order):
        assert weyl_group(roots_from_dynkin(label)).order() == order

    def test_e7_order(self):
        assert weyl_group(roots_from_dynkin("E7")).order() == 2903040

    def test_reflection_involutions(self):
        rd = roots_from_dynkin("F4")
        W = weyl_group(rd)
        for i in range(4):
            m = W.matrix_of_word([i, i])
            assert np.array_equal(m, np.eye(4, dtype=m.dtype))

    def test_perm_matches_matrix_action(self):
        rd = roots_from_dynkin("F4")
        W = weyl_group(rd)
        word = [0, 2, 1, 3, 2]
        p = W.perm_of_word(word)
        m = W.matrix_of_word(word)
        for k in range(rd.n_roots):
            assert np.array_equal(rd.root(k) @ m, rd.root(int(p[k])))

    def test_a2_coxeter_class(self):
        W = weyl_group(roots_from_dynkin("A2"))
        fp = W.unique_class_of_order(3)
        assert fp.count == 2
        assert fp.cycle_type == (3, 3)
        assert fp.trace == -1

    def test_f4_order12_class(self):
        rd = roots_from_dynkin("F4")
        W = weyl_group(rd)
        fp = W.unique_class_of_order(12)
        assert fp.count == 96
        assert fp.cycle_type == (12, 12, 12, 12)
        assert fp.trace == 0
        w = W.random_word_of_order(12, np.random.default_rng(0))
        assert reflection_rep_fixed_space(W, w) == 0


class TestSubsystem:
    def test_a2a2_inside_f4(self):
        rd = roots_from_dynkin("F4")
        long_triple, short_triple = subsystem_a2a2_f4(rd)
        for triple, length in ((long_triple, 4), (short_triple, 2)):
            vecs = [rd.root(i) for i in triple]
            for v in vecs:
                assert rd.pairing(v, v) == length
            # closed A2: pairwise sums of the positive system lie inside
            assert rd.is_root(vecs[0] + vecs[1]) or rd.is_root(vecs[0] - vecs[1])

    def test_wrong_type_rejected(self):
        with pytest.raises(WrongType):
            subsystem_a2a2_f4(roots_from_dynkin("A2"))
