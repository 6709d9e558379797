"""Presentations of PSL2(q) for q in {25, 27, 29, 37}.

Each presentation has generators u, s, t modeled on the 2x2 matrices
u = [[1,1],[0,1]], s = diag(w^-1, w), t = [[0,1],[-1,0]] for a primitive
w, taken modulo scalars.  Relations are stored as explicit words; the
general three-generator recipe is also implemented for the fields where
the twist parameter delta is 1, as a cross-check of the stored words.

A word is a list of (symbol, exponent) pairs over the symbols u, s, t,
multiplied left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactla import Fq, Mat, Poly, min_poly_over_prime

Word = list[tuple[str, int]]


class UnsupportedQ(Exception):
    """No stored presentation for this field size."""


def _w(*pairs) -> Word:
    return [(sym, e) for sym, e in pairs if e != 0]


def _inv_word(w: Word) -> Word:
    return [(sym, -e) for sym, e in reversed(w)]


def _conj_word(w: Word, sym: str, k: int) -> Word:
    return _normalize(_w((sym, -k)) + w + _w((sym, k)))


def _normalize(w: Word) -> Word:
    out: Word = []
    for sym, e in w:
        if e == 0:
            continue
        if out and out[-1][0] == sym:
            s, acc = out.pop()
            if acc + e != 0:
                out.append((s, acc + e))
        else:
            out.append((sym, e))
    return out


def _commutator(a: Word, b: Word) -> Word:
    return _normalize(_inv_word(a) + _inv_word(b) + a + b)


def _equal_rel(lhs: Word, rhs: Word) -> Word:
    return _normalize(lhs + _inv_word(rhs))


def eval_word(w: Word, images: dict) -> object:
    assert w, "empty word"
    acc = None
    for sym, e in w:
        g = images[sym].pow(e)
        acc = g if acc is None else acc @ g
    return acc


@dataclass
class Presentation:
    q: int
    delta: int
    relations: list[tuple[str, Word]]

    def names(self) -> list[str]:
        return [n for n, _ in self.relations]


def _int_coeff(g: Poly, i: int) -> int:
    c = g.coeff(i)
    if np.ndim(c) == 0:
        return int(c)
    c = np.asarray(c)
    assert not c[1:].any(), "bracket exponents must be prime-field integers"
    return int(c[0])


def bracket_eval(a, b, g: Poly):
    """[[a^{g(X)}]]_b = (a^{g_0})(a^{g_1})^b ... (a^{g_e})^{b^e} with the
    coefficients of g reduced into [0, p)."""
    out = None
    for i in range(g.degree + 1):
        term = b.pow(-i) @ a.pow(_int_coeff(g, i)) @ b.pow(i)
        out = term if out is None else out @ term
    return out


def _bracket_word(coeffs: list[int], delta: int) -> Word:
    w: Word = []
    for i, c in enumerate(coeffs):
        w += _conj_word(_w(("u", c)), "s", i * delta)
    return _normalize(w)


_U, _S, _T = _w(("u", 1)), _w(("s", 1)), _w(("t", 1))


def _common_tail(delta: int, g_w_inv: list[int], g_w: list[int]) -> list[tuple[str, Word]]:
    """Relations (t^2), ((ts)^2), ((tu)^3), and the st-product relation
    shared by every stored presentation."""
    a = _bracket_word(g_w_inv, delta)
    bt = _conj_word(_bracket_word(g_w, delta), "t", 1)
    return [
        ("t^2", _w(("t", 2))),
        ("(ts)^2", _normalize(_w(("t", 1), ("s", 1), ("t", 1), ("s", 1)))),
        ("(tu)^3", _normalize(_w(("t", 1), ("u", 1)) * 3)),
        ("st", _equal_rel(_w(("s", 1), ("t", 1)), _normalize(a + bt + a))),
    ]


def _presentation_25() -> Presentation:
    # w primitive with minimal polynomial X^2+4X+2; k=2, l=4, delta=2;
    # m(X) = X^2+4X+1, g_w = 3X+4, g_{w^-1} = X+1, g_{w^2} = 3X+2
    rels = [
        ("u^p", _w(("u", 5))),
        ("u^{s^k}", _equal_rel(_conj_word(_U, "s", 2),
                               _normalize(_U + _conj_word(_U, "s", 4)))),
        ("u^{s^l} central", _commutator(_U, _conj_word(_U, "s", 4))),
        ("m(X)", _bracket_word([1, 4, 1], 2)),
        ("u^s", _equal_rel(_conj_word(_U, "s", 1), _bracket_word([2, 3], 2))),
    ]
    rels += _common_tail(2, [1, 1], [4, 3])
    # holds on the reference images but is not a formal consequence of the
    # recipe; the word is [[u^{mu(X)}]]_s for mu the minimal polynomial of w^2
    rels.append(("extra", _bracket_word([4, 3, 1], 1)))
    return Presentation(25, 2, rels)


def _presentation_27() -> Presentation:
    # w primitive with minimal polynomial X^3+2X+1; k=1, l=6, delta=1;
    # m(X) = X^3+X^2+X+2, g_w = 2X^2+X, g_{w^-1} = 2X+1
    rels = [
        ("u^p", _w(("u", 3))),
        ("u^{s^k}", _equal_rel(_conj_word(_U, "s", 1),
                               _normalize(_U + _conj_word(_U, "s", 6)))),
        ("u^{s^l} central", _commutator(_U, _conj_word(_U, "s", 6))),
        ("m(X)", _bracket_word([2, 1, 1, 1], 1)),
    ]
    return Presentation(27, 1, rels + _common_tail(1, [1, 2], [0, 1, 2]))


def _presentation_37() -> Presentation:
    # w = 2; k=1, l=13, delta=1; m(X) = X-4, g_2 = 2, g_{2^-1} = 19
    rels = [
        ("u^p", _w(("u", 37))),
        ("u^{s^k}", _equal_rel(_conj_word(_U, "s", 1),
                               _normalize(_U + _conj_word(_U, "s", 13)))),
        ("u^{s^l} central", _commutator(_U, _conj_word(_U, "s", 13))),
        ("m(X)", _equal_rel(_conj_word(_U, "s", 1), _w(("u", 4)))),
    ]
    return Presentation(37, 1, rels + _common_tail(1, [19], [2]))


def _presentation_29() -> Presentation:
    # w = 2; k=11, l=1, delta=1; m(X) = X-4, g_2 = 2, g_{2^-1} = 15
    rels = [
        ("u^p", _w(("u", 29))),
        ("u^{s^k}", _equal_rel(_conj_word(_U, "s", 11),
                               _normalize(_U + _conj_word(_U, "s", 1)))),
        ("u^{s^l} central", _commutator(_U, _conj_word(_U, "s", 1))),
        ("m(X)", _equal_rel(_conj_word(_U, "s", 1), _w(("u", 4)))),
    ]
    return Presentation(29, 1, rels + _common_tail(1, [15], [2]))


_BUILDERS = {25: _presentation_25, 27: _presentation_27,
             29: _presentation_29, 37: _presentation_37}


def presentation(q: int) -> Presentation:
    if q not in _BUILDERS:
        raise UnsupportedQ(f"no stored presentation for q = {q}")
    return _BUILDERS[q]()


def _is_scalar(m: Mat) -> bool:
    F = m.F
    d = m.a[0, 0] if F.r == 1 else m.a[0, 0].copy()
    shape = (m.nrows, m.ncols) if F.r == 1 else (m.nrows, m.ncols, F.r)
    want = np.zeros(shape, dtype=np.int64)
    for i in range(m.nrows):
        want[i, i] = d
    return np.array_equal(m.a, want)


@dataclass
class RelationReport:
    name: str
    passed: bool
    value: Mat


def verify_presentation(q: int, u, s, t, modulo_scalars: bool = False) -> list[RelationReport]:
    """Evaluate every stored relation on the triple.  Pass means the
    identity matrix, or any scalar matrix when modulo_scalars is set (for
    the 2x2 reference images, which live in SL2)."""
    pres = presentation(q)
    images = {"u": u, "s": s, "t": t}
    out = []
    for name, word in pres.relations:
        m = eval_word(word, images)
        mat = m if isinstance(m, Mat) else m.mat
        ok = _is_scalar(mat) if modulo_scalars else mat == Mat.eye(mat.F, mat.nrows)
        out.append(RelationReport(name, ok, mat))
    return out


def borel_relations(q: int) -> list[tuple[str, Word]]:
    """The u,s-only relation set that pins the Borel subgroup q : (q-1)/2."""
    if q not in _BUILDERS:
        raise UnsupportedQ(f"no stored presentation for q = {q}")
    half = (q - 1) // 2
    out = [("u^p", _w(("u", {25: 5, 27: 3, 29: 29, 37: 37}[q]))),
           ("s order", _w(("s", half)))]
    if q == 25:
        out.append(("radical abelian", _commutator(_U, _conj_word(_U, "s", 1))))
        out.append(("module", _bracket_word([4, 3, 1], 1)))
    elif q == 27:
        out.append(("radical abelian", _commutator(_U, _conj_word(_U, "s", 1))))
        out.append(("module", _bracket_word([2, 1, 1, 1], 1)))
    else:
        out.append(("module", _equal_rel(_conj_word(_U, "s", 1), _w(("u", 4)))))
    return out


def reference_triple(q: int):
    """The 2x2 images over GF(q) with the presentation's primitive element."""
    if q == 25:
        F = Fq(5, 2, modulus=[2, 4, 1])
        w = F.gen()
    elif q == 27:
        F = Fq(3, 3, modulus=[1, 2, 0, 1])
        w = F.gen()
    elif q in (29, 37):
        F = Fq(q)
        w = F.from_int(2)
    else:
        raise UnsupportedQ(f"no stored presentation for q = {q}")
    assert F.order(w) == F.q - 1
    one, zero = F.one(), F.zero()
    u = Mat(F, F.varr([[one, one], [zero, one]]))
    s = Mat(F, F.varr([[F.inv(w), zero], [zero, w]]))
    t = Mat(F, F.varr([[zero, one], [F.neg(one), zero]]))
    return u, s, t, w


def general_recipe(q: int):
    """Relations regenerated from the three-generator recipe for the
    delta = 1 fields, as a cross-check of the stored words: find the
    lexicographically first (k, l) with w^{2k} = w^{2l} + 1 and w^{2k}
    generating the field, take m(X) the minimal polynomial of w^2, and
    solve for the exponent polynomials of w and w^-1 in powers of w^2.

    Returns (Presentation, k, l, m_coeffs, g_w, g_w_inv)."""
    if q not in (27, 37):
        raise UnsupportedQ(f"recipe cross-check covers q = 27 and 37, not {q}")
    _, _, _, w = reference_triple(q)
    F = Fq(q) if q == 37 else Fq(3, 3, modulus=[1, 2, 0, 1])
    w2 = F.mul(w, w)
    half = (F.q - 1) // 2
    pair = None
    for k in range(1, half + 1):
        if len(min_poly_over_prime(F, F.pow(w, 2 * k))) - 1 != F.r:
            continue
        for l in range(1, half + 1):
            if F.eq(F.pow(w, 2 * k), F.add(F.pow(w, 2 * l), F.one())):
                pair = (k, l)
                break
        if pair:
            break
    assert pair is not None
    k, l = pair
    m = [int(c) for c in min_poly_over_prime(F, w2)]
    g_w = _exponent_poly(F, w2, w, len(m) - 1)
    g_w_inv = _exponent_poly(F, w2, F.inv(w), len(m) - 1)
    rels = [
        ("u^p", _w(("u", F.p))),
        ("u^{s^k}", _equal_rel(_conj_word(_U, "s", k),
                               _normalize(_U + _conj_word(_U, "s", l)))),
        ("u^{s^l} central", _commutator(_U, _conj_word(_U, "s", l))),
        ("m(X)", _bracket_word(m, 1)),
    ]
    pres = Presentation(q, 1, rels + _common_tail(1, g_w_inv, g_w))
    return pres, k, l, m, g_w, g_w_inv


def _exponent_poly(F: Fq, base, target, deg: int) -> list[int]:
    """Coefficients c with sum c_i base^i = target, c_i in [0, p)."""
    if deg == 1:
        assert F.r == 1
        return [int(target) % F.p]
    # base powers are a prime-field basis of GF(p^deg)
    cols = []
    acc = F.one()
    for _ in range(deg):
        cols.append(np.asarray(acc, dtype=np.int64).copy())
        acc = F.mul(acc, base)
    A = np.stack(cols, axis=1) % F.p
    sol, _ = Mat(Fq(F.p), A).solve_affine(np.asarray(target, dtype=np.int64) % F.p)
    assert sol is not None
    return [int(c) for c in sol]
