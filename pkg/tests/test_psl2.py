"""Presentation words for PSL2(q) against the 2x2 reference images."""

import numpy as np
import pytest

from chevlie.exactla import Fq, Mat, Poly
from chevlie.psl2 import (
    UnsupportedQ,
    borel_relations,
    bracket_eval,
    eval_word,
    general_recipe,
    presentation,
    reference_triple,
    verify_presentation,
)

QS = [25, 27, 29, 37]


def _is_scalar(m):
    F = m.F
    s = Mat.zeros(F, m.nrows, m.ncols)
    for i in range(m.nrows):
        s.a[i] = 0
        s.a[i, i] = m.a[0, 0]
    return np.array_equal(m.a, s.a)


@pytest.mark.parametrize("q", QS)
def test_reference_images_satisfy_all_relations(q):
    u, s, t, _ = reference_triple(q)
    reports = verify_presentation(q, u, s, t, modulo_scalars=True)
    assert all(r.passed for r in reports), [r.name for r in reports if not r.passed]


@pytest.mark.parametrize("q", QS)
def test_some_relations_need_the_scalar_quotient(q):
    # t^2 = -I in SL2, so the strict check must fail somewhere
    u, s, t, _ = reference_triple(q)
    reports = verify_presentation(q, u, s, t, modulo_scalars=False)
    assert not all(r.passed for r in reports)


def test_relation_counts_and_names():
    p25 = presentation(25)
    assert p25.delta == 2
    assert p25.names()[-1] == "extra"
    for q in (27, 29, 37):
        pres = presentation(q)
        assert pres.delta == 1
        assert "extra" not in pres.names()
    with pytest.raises(UnsupportedQ):
        presentation(49)


def test_bracket_eval_degenerate_cases():
    u, s, _, _ = reference_triple(27)
    F3 = Fq(3)
    one = Poly(F3, [1])
    x = Poly(F3, [0, 1])
    assert bracket_eval(u, s, one) == u
    assert bracket_eval(u, s, x) == s.inv() @ u @ s


def test_bracket_of_minimal_polynomial_is_scalar():
    # m(X) = X^3 + X^2 + X + 2 for w^2 in GF(27)
    u, s, _, _ = reference_triple(27)
    m = Poly(Fq(3), [2, 1, 1, 1])
    assert _is_scalar(bracket_eval(u, s, m))


def test_identity_t_breaks_the_st_relation():
    u, s, _, _ = reference_triple(37)
    t_id = Mat.eye(u.F, 2)
    reports = {r.name: r.passed for r in
               verify_presentation(37, u, s, t_id, modulo_scalars=True)}
    assert reports["t^2"]
    assert reports["u^p"] and reports["m(X)"]
    assert not reports["st"]


@pytest.mark.parametrize("q", QS)
def test_borel_relations_hold_and_use_only_u_and_s(q):
    u, s, t, _ = reference_triple(q)
    rels = borel_relations(q)
    for name, word in rels:
        assert all(sym in ("u", "s") for sym, _ in word), name
        val = eval_word(word, {"u": u, "s": s})
        assert _is_scalar(val), name
    byname = dict(rels)
    assert byname["u^p"] == [("u", {25: 5, 27: 3, 29: 29, 37: 37}[q])]
    assert byname["s order"] == [("s", (q - 1) // 2)]


def test_recipe_reproduces_stored_data_27():
    pres, k, l, m, g_w, g_w_inv = general_recipe(27)
    assert (k, l) == (1, 6)
    assert m == [2, 1, 1, 1]
    assert g_w == [0, 1, 2]     # 2X^2 + X
    assert g_w_inv == [1, 2, 0]  # 2X + 1
    u, s, t, _ = reference_triple(27)
    images = {"u": u, "s": s, "t": t}
    for name, word in pres.relations:
        assert _is_scalar(eval_word(word, images)), name
    assert pres.names() == presentation(27).names()


def test_recipe_reproduces_stored_data_37():
    pres, k, l, m, g_w, g_w_inv = general_recipe(37)
    assert (k, l) == (1, 13)
    assert m == [33, 1]  # X - 4
    assert g_w == [2]
    assert g_w_inv == [19]
    u, s, t, _ = reference_triple(37)
    images = {"u": u, "s": s, "t": t}
    for name, word in pres.relations:
        assert _is_scalar(eval_word(word, images)), name


def test_relations_invariant_under_simultaneous_conjugation():
    u, s, t, _ = reference_triple(29)
    F = u.F
    rng = np.random.default_rng(4)
    g = None
    while g is None or g.det() == 0:
        g = Mat(F, rng.integers(0, 29, size=(2, 2)))
    gi = g.inv()
    reports = verify_presentation(29, gi @ u @ g, gi @ s @ g, gi @ t @ g,
                                  modulo_scalars=True)
    assert all(r.passed for r in reports)


def test_extra_relation_is_independent_of_the_tail():
    # the extra word for q = 25 uses the minimal polynomial of w^2 with
    # bracket step s, not s^2; check it differs from the stored m(X) word
    p25 = {name: word for name, word in presentation(25).relations}
    assert p25["extra"] != p25["m(X)"]
    u, s, _, _ = reference_triple(25)
    assert _is_scalar(eval_word(p25["extra"], {"u": u, "s": s}))
