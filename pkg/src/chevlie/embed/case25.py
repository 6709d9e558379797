"""PSL2(25) inside adjoint F4 over GF(61).

The pair (u, s) is toral: s lifts a Coxeter element of the Weyl group
(order 12, no reflection fixed space, trivial torus centralizer) and u
of order 5 comes from the eigen-block of the s-action on the 5-torsion
of the split torus whose minimal polynomial matches the Borel module
relation.  The involution t is the unique group element of the form
r * m * e with m spanning the one-dimensional solution space of the
tu-cube system over the 49-dimensional centralizer span.
"""

from __future__ import annotations

import numpy as np

from ..adjgroup import (
    BlockNotFound,
    action_on_torus_layer,
    build_torus_layer,
    centralizer_in_torus_layers,
    find_u,
    ghn,
    membership,
)
from ..chevalley import adapted_chevalley_basis, build_lie_algebra
from ..exactla import Fq, Mat, Poly
from ..psl2 import borel_relations, eval_word, verify_presentation
from ..rootdata import WeylGroup, roots_from_dynkin
from .tcore import (
    CaseReport,
    NoScalarFound,
    adapted_cartan_rows,
    adapted_torus_generators,
    assemble_tu_system,
    build_inverting_involution,
    centralizer_span,
    find_word_of_psl2_order,
    homogeneous_solution_space,
    monomial_weyl_element,
    sample_generated_words,
    span_dimension_bound,
    trace_value,
    verify_tu_solution,
)

MODULE_POLY = [4, 3, 1]      # X^2 + 3X + 4, the u-block target over GF(5)
S_ORDER = 12
U_ORDER = 5


def _toral_pair(L, W, ns, rng):
    """s of order 12 with trivial torus centralizer, then u of order 5
    from the matching eigen-block on the 5-torsion layer."""
    layer = build_torus_layer(L, U_ORDER)
    target = Poly(Fq(U_ORDER), MODULE_POLY)
    for _ in range(40):
        s, word = monomial_weyl_element(L, W, ns, S_ORDER, rng)
        cent = centralizer_in_torus_layers(L, s, word, W, [2, 3, 5])
        if cent["order"] != 1:
            continue
        sbar = action_on_torus_layer(s, layer)
        try:
            u = find_u(sbar, layer, target)
        except BlockNotFound:
            continue
        return s, word, u, cent
    raise AssertionError("no order-12 class with the required 5-torsion block")


def solve_case_25(seed: int = 0, threads: int = 1) -> CaseReport:
    rd = roots_from_dynkin("F4")
    F = Fq(61)
    L = build_lie_algebra(rd, F)
    W = WeylGroup(rd)
    _, _, _, ns = ghn(L)

    rng = np.random.default_rng([seed, 25])
    s, word, u, cent = _toral_pair(L, W, ns, rng)

    borel = {}
    for name, rel in borel_relations(25):
        borel[name] = eval_word(rel, {"u": u, "s": s}).mat.is_identity()
    assert all(borel.values())

    change = adapted_chevalley_basis(L, s.mat, seed=seed)
    e = build_inverting_involution(L, s, change)
    assert membership(L, e)

    gens = adapted_torus_generators(L, change) + [s]
    span = centralizer_span(L, s, gens, "torus-and-s", seed=seed)
    bound = span_dimension_bound(4, [1] * 48, L.dim)
    assert span.dim == bound == 49

    fixed = adapted_cartan_rows(L, change)
    system, _ = assemble_tu_system(u, e, span, fixed)
    sol = homogeneous_solution_space(system, span)
    assert sol.dim == 1
    m0 = sol.homogeneous_basis[0]
    assert verify_tu_solution(u, e, fixed, m0)

    # the kernel line meets the group in one point: r^dim * det(m0 e) = 1
    # pins at most gcd(dim, q-1) scalars, membership leaves one
    M = m0 @ e.mat
    d = M.det()
    if int(d) == 0:
        raise NoScalarFound("solution line is singular")
    dinv = F.inv(d)
    survivors = []
    for k in range(F.q - 1):
        r = F.elem_at(k + 1)
        if int(F.pow(r, L.dim)) != int(dinv):
            continue
        cand = Mat(F, F.vscale(M.a, r))
        if (cand @ cand).is_identity() and membership(L, cand):
            survivors.append((int(r), cand))
    if len(survivors) != 1:
        raise NoScalarFound(f"{len(survivors)} scalars give a group involution")
    r_val, tmat = survivors[0]
    t = type(s)(tmat, [("t-solution", r_val)])

    relations = verify_presentation(25, u, s, t)
    assert all(rep.passed for rep in relations)

    wrng = np.random.default_rng([seed, 2525])
    memb = sample_generated_words(L, [u, s, t], wrng)
    assert all(memb)
    g13 = find_word_of_psl2_order(L, [u, s, t], 13, 25, wrng)

    traces = {
        "u": trace_value(u.mat),
        "s": trace_value(s.mat),
        "s^2": trace_value(s.mat.pow(2)),
        "s^3": trace_value(s.mat.pow(3)),
        "s^6": trace_value(s.mat.pow(6)),
        "t": trace_value(t.mat),
        "tu": trace_value(t.mat @ u.mat),
        "order-13 word": trace_value(g13.mat),
    }
    expected = {
        "u": 2, "s": 0, "s^2": 2, "s^3": 0, "s^6": -4,
        "t": -4, "tu": -2, "order-13 word": 0,
    }
    for key, val in expected.items():
        assert traces[key] == val % F.p, f"trace {key}: {traces[key]} != {val % F.p}"

    return CaseReport(
        q=25,
        group="F4",
        field={"p": 61, "r": 1, "q": 61},
        seeds={"master": seed},
        dims={
            "fixed": fixed.nrows,
            "span": span.dim,
            "equations": system.nrows,
            "nullspace": sol.dim,
        },
        solutions=[{"t": t.mat, "membership": True}],
        relations=[{rep.name: rep.passed for rep in relations}],
        traces=traces,
        centralizer={str(k): v for k, v in cent.items()},
        details={
            "s_word": list(word),
            "borel": borel,
            "span_draws": span.draws,
            "scalar": r_val,
            "word_membership": len(memb),
        },
    )
