"""Inverting involutions, centralizer spans, and the tu-cube linear system.

A semisimple s diagonalized by an adapted Chevalley basis is inverted by
the Chevalley involution rewritten in that basis.  The linear span of the
centralizer C(s) is closed under products, so random products of
centralizer generators sweep it out, with the isotypic decomposition of
the natural module capping the dimension.  Candidates t = c·e with
(tu)^3 = 1 are then cut out by a linear system with one equation per
fixed vector and coordinate; the case drivers refine the solution space
with determinant and trace conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..adjgroup import GroupElem, element_order, h_of_root, membership
from ..chevalley import ChevBasisChange, LieAlgebraFq
from ..chevalley.adapted import _scalar_ratio
from ..exactla import Mat, matrix_to_text
from ..exactla.mat import _SpanTracker
from ..rootdata import WeylGroup, reflection_rep_fixed_space


class OrderingViolated(Exception):
    """The supplied basis change does not diagonalize s."""


class InconsistentDecomposition(Exception):
    """Isotypic dimensions do not sum to the module dimension."""


class NoScalarFound(Exception):
    """No scalar multiple of the solution line lands in the group."""


class TraceMatrixSingular(Exception):
    """The trace matrix of the refinement system is not invertible."""


@dataclass
class CentralizerSpan:
    basis: list          # Mat, linearly independent, all commuting with s
    source: str
    draws: int = 0

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class SolutionSpace:
    particular: Mat | None
    homogeneous_basis: list
    dim: int


@dataclass
class CaseReport:
    q: int
    group: str
    field: dict
    seeds: dict
    dims: dict
    solutions: list      # per solution: {"t": Mat, "membership": bool}
    relations: list      # per solution: {relation name: bool}
    traces: dict
    centralizer: dict = field(default_factory=dict)
    normalizer: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)


def build_inverting_involution(
    L: LieAlgebraFq, s: GroupElem, change: ChevBasisChange
) -> GroupElem:
    """The involution e with e^2 = 1 and e s e = s^-1: the Chevalley
    involution of the adapted frame, rewritten in reference coordinates."""
    F = L.F
    sc = change.conj(s.mat)
    off = sc.a.copy()
    if F.r == 1:
        idx = np.arange(L.dim)
        off[idx, idx] = 0
    else:
        for i in range(L.dim):
            off[i, i] = 0
    if off.any():
        raise OrderingViolated("basis change does not diagonalize s")
    e = GroupElem(change.unconj(L.chevalley_involution()), [("inverting-involution",)])
    assert (e.mat @ e.mat).is_identity()
    assert e.mat @ s.mat @ e.mat == s.mat.inv()
    return e


def centralizer_span(
    L: LieAlgebraFq,
    s: GroupElem,
    generators: list,
    source: str,
    seed: int = 0,
    stall: int = 20,
    cap: int = 30000,
) -> CentralizerSpan:
    """Linear span of the group generated by centralizer generators, from
    random products; stops after `stall` consecutive dependent draws."""
    F = L.F
    d = L.dim
    for g in generators:
        assert g.mat @ s.mat == s.mat @ g.mat, "generator must centralize s"

    def flat(m: Mat) -> np.ndarray:
        return m.a.reshape(d * d) if F.r == 1 else m.a.reshape(d * d, F.r)

    tracker = _SpanTracker(F, d * d)
    gpool = [g.mat for g in generators] + [g.mat.inv() for g in generators]
    pool: list[Mat] = []
    basis: list[Mat] = []
    for m in [Mat.eye(F, d)] + gpool:
        if tracker.add(flat(m)):
            basis.append(m)
        pool.append(m)

    rng = np.random.default_rng(seed)
    stalled = 0
    draws = 0
    while stalled < stall:
        draws += 1
        assert draws <= cap, "span closure exceeded draw cap"
        m = pool[int(rng.integers(len(pool)))] @ gpool[int(rng.integers(len(gpool)))]
        if tracker.add(flat(m)):
            basis.append(m)
            pool.append(m)
            stalled = 0
        else:
            stalled += 1
    return CentralizerSpan(basis=basis, source=source, draws=draws)


def span_dimension_bound(trivial: int, nontrivial_dims, total_dim: int) -> int:
    """1 + sum of squares of the nontrivial isotypic dimensions."""
    dims = list(nontrivial_dims)
    if trivial < 0 or any(j < 1 for j in dims):
        raise InconsistentDecomposition("negative or zero summand dimension")
    if trivial + sum(dims) != total_dim:
        raise InconsistentDecomposition(
            f"decomposition sums to {trivial + sum(dims)}, module has {total_dim}"
        )
    return 1 + sum(j * j for j in dims)


def assemble_tu_system(
    u: GroupElem, e: GroupElem, span: CentralizerSpan, fixed_rows: Mat
):
    """Linear system over the span coefficients: column i stacks the rows
    v @ (e u c_i e u - u^-1 c_i e) over the fixed vectors v."""
    F = fixed_rows.F
    eu = e.mat @ u.mat
    uinv = u.mat.inv()
    em = e.mat
    cols = []
    for c in span.basis:
        D = eu @ c @ eu - uinv @ (c @ em)
        R = fixed_rows @ D
        cols.append(R.a.reshape(-1) if F.r == 1 else R.a.reshape(-1, F.r))
    A = np.stack(cols, axis=1)
    neq = A.shape[0]
    rhs = np.zeros(neq, dtype=np.int64) if F.r == 1 else np.zeros((neq, F.r), dtype=np.int64)
    return Mat(F, A), rhs


def verify_tu_solution(u: GroupElem, e: GroupElem, fixed_rows: Mat, c: Mat) -> bool:
    """Re-check v (e u c e u - u^-1 c e) = 0 directly, independent of how
    the coefficient system was solved."""
    D = e.mat @ u.mat @ c @ e.mat @ u.mat - u.mat.inv() @ c @ e.mat
    return (fixed_rows @ D).is_zero()


def combine_span(span: CentralizerSpan, coeffs) -> Mat:
    """Sum of coeff_i * basis_i."""
    F = span.basis[0].F
    if F.r == 1:
        stack = np.stack([m.a for m in span.basis])
        x = np.asarray(coeffs, dtype=np.int64) % F.p
        return Mat(F, np.tensordot(x, stack, axes=(0, 0)) % F.p)
    acc = np.zeros_like(span.basis[0].a)
    for ci, m in zip(coeffs, span.basis):
        acc = F.vadd(acc, F.vscale(m.a, F.elem(ci)))
    return Mat(F, acc)


def homogeneous_solution_space(system: Mat, span: CentralizerSpan) -> SolutionSpace:
    ker = system.kernel()
    basis = [combine_span(span, ker.row(i)) for i in range(ker.nrows)]
    return SolutionSpace(particular=None, homogeneous_basis=basis, dim=ker.nrows)


def affine_solution_space(system: Mat, rhs, span: CentralizerSpan) -> SolutionSpace:
    part, ker = system.solve_affine(rhs)
    assert part is not None, "refined system has no solution"
    basis = [combine_span(span, ker.row(i)) for i in range(ker.nrows)]
    return SolutionSpace(
        particular=combine_span(span, part), homogeneous_basis=basis, dim=ker.nrows
    )


# frame and fixed-vector helpers ------------------------------------------------


def adapted_group_element(
    L: LieAlgebraFq, change: ChevBasisChange, ref: GroupElem
) -> GroupElem:
    """The group element whose adapted-frame matrix is the given reference
    construction; reference-frame coordinates."""
    return GroupElem(change.unconj(ref.mat), ref.provenance + [("adapted-frame",)])


def adapted_torus_generators(L: LieAlgebraFq, change: ChevBasisChange) -> list:
    lam = L.F.primitive_elem
    return [
        adapted_group_element(L, change, h_of_root(L, i, lam))
        for i in L.rd.simple_indices()
    ]


def adapted_cartan_rows(L: LieAlgebraFq, change: ChevBasisChange) -> Mat:
    """The adapted Cartan basis vectors, as rows in reference coordinates."""
    rows = np.stack([change.matrix.a[L.cartan_pos(i)] for i in range(L.l)])
    return Mat(L.F, rows)


def _diag_entry_is_one(F, v) -> bool:
    if F.r == 1:
        return int(v) == 1
    return F.eq(F.elem(v), F.one())


def a1_fixed_root_slots(L: LieAlgebraFq, change: ChevBasisChange):
    """Root slots where the conjugated s has eigenvalue one; returns the
    positive root index and the two basis positions."""
    hits = []
    for k in range(L.rd.n_roots):
        p = L.basis_pos_of_root(k)
        if _diag_entry_is_one(L.F, change.s_diagonal[p]):
            hits.append(k)
    assert len(hits) == 2, f"expected one fixed root pair, found {len(hits)}"
    pos = [k for k in hits if k < L.rd.n_positive]
    assert len(pos) == 1 and L.rd.neg_index(pos[0]) in hits
    k0 = pos[0]
    return k0, L.basis_pos_of_root(k0), L.basis_pos_of_root(L.rd.neg_index(k0))


def trivial_isotypic_rows(L: LieAlgebraFq, change: ChevBasisChange) -> Mat:
    """Cartan combinations killed by the fixed root pair: the part of the
    adapted Cartan on which the full centralizer acts trivially."""
    F = L.F
    H = adapted_cartan_rows(L, change)
    _, slot_pos, _ = a1_fixed_root_slots(L, change)
    x = change.matrix.row(slot_pos)
    coeffs = []
    for j in range(L.l):
        b = L.bracket(x, H.row(j))
        if not b.any():
            lam = F.zero() if F.r > 1 else 0
        else:
            lam = _scalar_ratio(F, b, x)
            assert lam is not None, "bracket with a root vector left the root line"
        coeffs.append(lam)
    shape = (L.l, 1) if F.r == 1 else (L.l, 1, F.r)
    col = np.zeros(shape, dtype=np.int64)
    for j, lam in enumerate(coeffs):
        col[j, 0] = lam if F.r == 1 else F.elem(lam)
    Y = Mat(F, col).left_kernel()
    assert Y.nrows == L.l - 1
    return Y @ H


# monomial element search and group sampling ------------------------------------


def monomial_weyl_element(
    L: LieAlgebraFq,
    W: WeylGroup,
    ns: list,
    order: int,
    rng,
    require_no_fixed: bool = True,
    max_tries: int = 300,
):
    """Random word in the simple reflections whose permutation has the
    requested order, lifted to a monomial matrix of the same exact order."""
    for _ in range(max_tries):
        word = W.random_word_of_order(order, rng)
        if require_no_fixed and reflection_rep_fixed_space(W, word) != 0:
            continue
        g = ns[word[0]]
        for i in word[1:]:
            g = g @ ns[i]
        # the lift's order is a multiple of the permutation's order, so
        # identity at `order` pins it exactly
        if g.pow(order).is_identity():
            g.provenance = [("n-word", tuple(word))]
            return g, word
    raise AssertionError(f"no monomial element of exact order {order} found")


def psl2_group_order(q: int) -> int:
    return q * (q - 1) * (q + 1) // 2


def sample_generated_words(
    L: LieAlgebraFq, gens: list, rng, n_words: int = 20, max_len: int = 10
):
    """Random words in the generators and their inverses; returns the list
    of membership results (all True for honest subgroup data)."""
    mats = [g.mat for g in gens] + [g.mat.inv() for g in gens]
    out = []
    for _ in range(n_words):
        length = int(rng.integers(2, max_len + 1))
        g = mats[int(rng.integers(len(mats)))]
        for _ in range(length - 1):
            g = g @ mats[int(rng.integers(len(mats)))]
        out.append(membership(L, g))
    return out


def find_word_of_psl2_order(
    L: LieAlgebraFq, gens: list, target: int, q: int, rng, max_tries: int = 400
):
    """A random word in <u, s, t> with the requested element order;
    returns (element, order) for trace reporting."""
    bound = psl2_group_order(q)
    mats = [g.mat for g in gens]
    for _ in range(max_tries):
        length = int(rng.integers(2, 9))
        g = mats[int(rng.integers(len(mats)))]
        for _ in range(length - 1):
            g = g @ mats[int(rng.integers(len(mats)))]
        if element_order(g, bound) == target:
            return GroupElem(g, [("word-of-order", target)])
    raise AssertionError(f"no element of order {target} found in the sample budget")


def trace_value(m: Mat):
    t = m.trace()
    if m.F.r == 1:
        return int(t)
    return [int(c) for c in np.asarray(t).reshape(-1)]


# report serialization ----------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Mat):
        return matrix_to_text(x)
    if isinstance(x, GroupElem):
        return matrix_to_text(x.mat)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def case_report_json(rep: CaseReport) -> dict:
    return {
        "version": 1,
        "q": rep.q,
        "group": rep.group,
        "field": _jsonable(rep.field),
        "seeds": _jsonable(rep.seeds),
        "dims": _jsonable(rep.dims),
        "solutions": _jsonable(rep.solutions),
        "relations": _jsonable(rep.relations),
        "traces": _jsonable(rep.traces),
        "centralizer": _jsonable(rep.centralizer),
        "normalizer": _jsonable(rep.normalizer),
        "details": _jsonable(rep.details),
    }
