"""Root systems from Dynkin types, with the Weyl group as a permutation
group on the roots.

Coefficient vectors are with respect to the simple roots.  The stored total
order on the root lattice compares coefficient tuples last coordinate
first; the extraspecial-pair examples force that reading.  Positive roots
are listed by height, ties broken by the same order, then negatives repeat
the layout, so index N + i carries -root_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np


class UnsupportedType(Exception):
    pass


class WrongType(Exception):
    pass


_SL_EDGES = {
    "E6": [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
    "E7": [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
    "E8": [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)],
}


def _gram_matrix(label: str) -> np.ndarray:
    if label.startswith("A") and label[1:].isdigit() and int(label[1:]) >= 1:
        n = int(label[1:])
        G = 2 * np.eye(n, dtype=np.int64)
        for i in range(n - 1):
            G[i, i + 1] = G[i + 1, i] = -1
        return G
    if label == "F4":
        return np.array(
            [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]],
            dtype=np.int64,
        )
    if label in _SL_EDGES:
        n = int(label[1])
        G = 2 * np.eye(n, dtype=np.int64)
        for a, b in _SL_EDGES[label]:
            G[a - 1, b - 1] = G[b - 1, a - 1] = -1
        return G
    raise UnsupportedType(label)


def _order_key(coeffs) -> tuple:
    return tuple(int(c) for c in reversed(coeffs))


@dataclass
class RootDatum:
    type_label: str
    rank: int
    gram: np.ndarray                    # (alpha_i, alpha_j)
    cartan: np.ndarray                  # [i, j] = n(alpha_j, alpha_i)
    positive_roots: list[np.ndarray]    # coefficient vectors
    index: dict = field(repr=False)     # coeff tuple -> all_roots position
    heights: list[int] = field(repr=False, default=None)

    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)

    @property
    def n_roots(self) -> int:
        return 2 * len(self.positive_roots)

    def root(self, i: int) -> np.ndarray:
        N = self.n_positive
        return self.positive_roots[i] if i < N else -self.positive_roots[i - N]

    def all_roots(self) -> list[np.ndarray]:
        return [self.root(i) for i in range(self.n_roots)]

    def is_root(self, v) -> bool:
        return tuple(int(c) for c in v) in self.index

    def root_index(self, v) -> int:
        return self.index[tuple(int(c) for c in v)]

    def neg_index(self, i: int) -> int:
        N = self.n_positive
        return i + N if i < N else i - N

    def height(self, i: int) -> int:
        return int(self.root(i).sum())

    def highest_root(self) -> np.ndarray:
        return self.positive_roots[-1]

    def pairing(self, v, w) -> int:
        return int(np.asarray(v) @ self.gram @ np.asarray(w))

    def n_value(self, v, w) -> int:
        """Cartan integer n(v, w) = 2 (v, w) / (w, w)."""
        num = 2 * self.pairing(v, w)
        den = self.pairing(w, w)
        assert num % den == 0
        return num // den

    def chain_down(self, r: int, s: int) -> int:
        """Largest p with root_s - p * root_r a root."""
        vr, vs = self.root(r), self.root(s)
        p = 0
        w = vs - vr
        while self.is_root(w):
            p += 1
            w = w - vr
        return p

    def simple_indices(self) -> list[int]:
        return [self.root_index(np.eye(self.rank, dtype=np.int64)[i]) for i in range(self.rank)]

    def reflect(self, v, alpha) -> np.ndarray:
        return np.asarray(v) - self.n_value(v, alpha) * np.asarray(alpha)


def roots_from_dynkin(type_label: str) -> RootDatum:
    G = _gram_matrix(type_label)
    l = len(G)
    cartan = np.zeros((l, l), dtype=np.int64)
    for i in range(l):
        for j in range(l):
            assert (2 * G[i, j]) % G[i, i] == 0
            cartan[i, j] = 2 * G[i, j] // G[i, i]
    assert all(cartan[i, i] == 2 for i in range(l))
    for i in range(l):
        for j in range(l):
            if i != j:
                assert cartan[i, j] * cartan[j, i] in (0, 1, 2, 3)

    # close the positive system upward; the alpha_i-string through v is
    # unbroken, so v + alpha_i is a root iff p - n(v, alpha_i) > 0 with p
    # the known downward length
    simples = [tuple(int(x) for x in row) for row in np.eye(l, dtype=np.int64)]
    rootset = set(simples)
    layer = list(simples)
    while layer:
        nxt = []
        for v in layer:
            va = np.array(v, dtype=np.int64)
            for i in range(l):
                if sum(v) == 1 and v[i] == 1:
                    continue
                n_val = int(cartan[i] @ va)
                p = 0
                w = va.copy()
                w[i] -= 1
                while tuple(w) in rootset:
                    p += 1
                    w[i] -= 1
                if p - n_val > 0:
                    up = va.copy()
                    up[i] += 1
                    t = tuple(int(x) for x in up)
                    if t not in rootset:
                        rootset.add(t)
                        nxt.append(t)
        layer = nxt

    pos = sorted(rootset, key=lambda v: (sum(v), _order_key(v)))
    positive_roots = [np.array(v, dtype=np.int64) for v in pos]
    heights = [sum(v) for v in pos]
    assert heights[-1] > heights[-2] if len(pos) > 1 else True, "highest root not unique"
    index = {}
    for i, v in enumerate(pos):
        index[v] = i
        index[tuple(-c for c in v)] = i + len(pos)
    return RootDatum(
        type_label=type_label,
        rank=l,
        gram=G,
        cartan=cartan,
        positive_roots=positive_roots,
        index=index,
        heights=heights,
    )


def extraspecial_pairs(rd: RootDatum) -> dict[int, tuple[int, int]]:
    """For each non-simple positive root index, the special pair (r, s) with
    r + s = gamma, r < s, and r minimal in the total order."""
    out = {}
    for gi, gamma in enumerate(rd.positive_roots):
        if gamma.sum() == 1:
            continue
        best = None
        for ri, r in enumerate(rd.positive_roots):
            s = gamma - r
            t = tuple(int(c) for c in s)
            if t not in rd.index or rd.index[t] >= rd.n_positive:
                continue
            if _order_key(r) >= _order_key(s):
                continue
            if best is None or _order_key(r) < _order_key(rd.positive_roots[best[0]]):
                best = (ri, rd.index[t])
        assert best is not None, f"no special pair for {gamma}"
        out[gi] = best
    return out


# -- Weyl group ---------------------------------------------------------------


def _perm_order(p: np.ndarray) -> int:
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    out = 1
    for i in range(n):
        if seen[i]:
            continue
        ln = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(p[j])
            ln += 1
        out = lcm(out, ln)
    return out


def _cycle_type(p: np.ndarray) -> tuple:
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    lens = []
    for i in range(n):
        if seen[i]:
            continue
        ln = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(p[j])
            ln += 1
        lens.append(ln)
    return tuple(sorted(lens))


@dataclass
class ClassFingerprint:
    order: int
    count: int
    cycle_type: tuple
    trace: int


class WeylGroup:
    """Permutations of the root list generated by the simple reflections."""

    def __init__(self, rd: RootDatum):
        self.rd = rd
        n = rd.n_roots
        self.generators = []
        self.reflection_mats = []
        for i in range(rd.rank):
            alpha = np.eye(rd.rank, dtype=np.int64)[i]
            perm = np.empty(n, dtype=np.int16)
            for k in range(n):
                perm[k] = rd.root_index(rd.reflect(rd.root(k), alpha))
            self.generators.append(perm)
            # row convention: row j = image of alpha_j in coefficients
            R = np.eye(rd.rank, dtype=np.int64)
            for j in range(rd.rank):
                R[j, i] -= rd.cartan[i, j]
            self.reflection_mats.append(R)
            assert _perm_order(perm) == 2
        self._order = None
        self._root_matrix = np.array(
            [rd.root(i) for i in range(n)], dtype=np.int64
        )

    def perm_of_word(self, word) -> np.ndarray:
        p = np.arange(self.rd.n_roots, dtype=np.int16)
        for i in word:
            p = self.generators[i][p]
        return p

    def matrix_of_word(self, word) -> np.ndarray:
        M = np.eye(self.rd.rank, dtype=np.int64)
        for i in word:
            M = M @ self.reflection_mats[i]
        return M

    def order(self) -> int:
        if self._order is None:
            from sympy.combinatorics import Permutation, PermutationGroup

            G = PermutationGroup([Permutation(list(map(int, g))) for g in self.generators])
            self._order = int(G.order())
        return self._order

    def random_word_of_order(self, k: int, rng, max_tries: int = 20000) -> list[int]:
        l = self.rd.rank
        for _ in range(max_tries):
            length = int(rng.integers(l, 6 * l))
            word = [int(x) for x in rng.integers(0, l, size=length)]
            if _perm_order(self.perm_of_word(word)) == k:
                return word
        raise AssertionError(f"no element of order {k} found")

    def reflection_trace_of_perm(self, p: np.ndarray) -> int:
        # trace = sum over simple i of the alpha_i-coefficient of w(alpha_i)
        out = 0
        for i, si in enumerate(self.rd.simple_indices()):
            out += int(self._root_matrix[p[si], i])
        return out

    def word_of_perm(self, p: np.ndarray) -> list[int]:
        """A reduced word for the permutation: peel simple reflections
        sending a simple root negative."""
        N = self.rd.n_positive
        simples = self.rd.simple_indices()
        w = p.astype(np.int16).copy()
        ident = np.arange(self.rd.n_roots, dtype=np.int16)
        word = []
        while not np.array_equal(w, ident):
            for i in range(self.rd.rank):
                if w[simples[i]] >= N:
                    w = w[self.generators[i]]
                    word.append(i)
                    break
            else:
                raise AssertionError("not a Weyl permutation")
            assert len(word) <= N
        assert np.array_equal(self.perm_of_word(word), p)
        return word

    def iter_perm_batches(self, batch: int = 20000):
        """Every group element exactly once, as stacked permutation rows."""
        if self.order() <= 200000:
            rows = self._enumerate_all()
            for k in range(0, rows.shape[0], batch):
                yield rows[k : k + batch]
            return
        trans, hrows = self._transversal_and_stabilizer()
        for t in trans:
            yield t[hrows]

    # -- element enumeration --------------------------------------------------

    def _enumerate_all(self) -> np.ndarray:
        """All elements as permutation rows; only for small groups."""
        n = self.rd.n_roots
        ident = np.arange(n, dtype=np.int16)
        seen = {ident.tobytes()}
        frontier = [ident]
        rows = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    q = g[p]
                    key = q.tobytes()
                    if key not in seen:
                        seen.add(key)
                        rows.append(q)
                        nxt.append(q)
            frontier = nxt
        return np.stack(rows)

    def _transversal_and_stabilizer(self) -> tuple[list[np.ndarray], np.ndarray]:
        """Coset transversal for the orbit of root 0 and the full element
        array of its stabilizer (unique t . h factorization)."""
        if getattr(self, "_ts_cache", None) is not None:
            return self._ts_cache
        from sympy.combinatorics import Permutation, PermutationGroup

        n = self.rd.n_roots
        ident = np.arange(n, dtype=np.int16)
        trans = {0: ident}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = int(g[x])
                    if y not in trans:
                        trans[y] = g[trans[x]]
                        nxt.append(y)
            frontier = nxt
        assert len(trans) == n, "root orbit must be the whole root set"
        G = PermutationGroup([Permutation(list(map(int, g))) for g in self.generators])
        H = G.stabilizer(0)
        h_order = int(H.order())
        assert h_order * n == self.order()
        hgens = [np.array(hg.array_form + list(range(len(hg.array_form), n)), dtype=np.int16) for hg in H.generators]
        seen = {ident.tobytes()}
        rows = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in hgens:
                    q = g[p]
                    key = q.tobytes()
                    if key not in seen:
                        seen.add(key)
                        rows.append(q)
                        nxt.append(q)
            frontier = nxt
        assert len(rows) == h_order
        self._ts_cache = (list(trans.values()), np.stack(rows))
        return self._ts_cache

    def unique_class_of_order(self, k: int) -> ClassFingerprint:
        return self.unique_classes_of_orders([k])[k]

    def unique_classes_of_orders(self, ks: list[int]) -> dict[int, ClassFingerprint]:
        """Count elements of each order in ks and certify each order carries
        a single fingerprint (cycle type on roots plus reflection trace).
        One sweep over the group for all requested orders."""
        if self.order() <= 200000:
            rows = self._enumerate_all()
            counts = {k: 0 for k in ks}
            fps = {k: set() for k in ks}
            for p in rows:
                o = _perm_order(p)
                if o in counts:
                    counts[o] += 1
                    fps[o].add((_cycle_type(p), self.reflection_trace_of_perm(p)))
            out = {}
            for k in ks:
                assert counts[k] > 0, f"no elements of order {k}"
                assert len(fps[k]) == 1, f"order {k} splits into {len(fps[k])} fingerprints"
                ct, tr = next(iter(fps[k]))
                out[k] = ClassFingerprint(order=k, count=counts[k], cycle_type=ct, trace=tr)
            return out
        return self._unique_classes_large(ks)

    def _unique_classes_large(self, ks: list[int]) -> dict[int, ClassFingerprint]:
        trans, H = self._transversal_and_stabilizer()
        n = self.rd.n_roots
        probes, chain = _probe_chain(ks)
        # ord(g) = k iff g^k = 1 and g^(k/l) != 1 for every prime l | k
        deciders = {
            k: [k // l for l in {p for p in range(2, k + 1) if k % p == 0 and _is_pr(p)}]
            for k in ks
        }
        divisors = {k: [d for d in probes if k % d == 0] for k in ks}
        simples = self.rd.simple_indices()
        ar = np.arange(n, dtype=np.int16)
        counts = {k: 0 for k in ks}
        fps = {k: set() for k in ks}
        for t in trans:
            P = t[H]
            pows = {1: P}
            fixed = {}
            for m in probes:
                if m > 1:
                    a, b = chain[m]
                    pows[m] = np.take_along_axis(pows[a], pows[b], axis=1)
                fixed[m] = (pows[m] == ar).sum(axis=1)
            for k in ks:
                mask = fixed[k] == n
                for d in deciders[k]:
                    mask &= fixed[d] != n
                c = int(mask.sum())
                if c == 0:
                    continue
                counts[k] += c
                Pk = P[mask]
                fvec = np.stack([fixed[d][mask] for d in divisors[k]], axis=1)
                tr = np.zeros(len(Pk), dtype=np.int64)
                for i, si in enumerate(simples):
                    tr += self._root_matrix[Pk[:, si], i]
                for row, t_ in zip(fvec, tr):
                    fps[k].add((tuple(int(x) for x in row), int(t_)))
        out = {}
        for k in ks:
            assert counts[k] > 0, f"no elements of order {k}"
            assert len(fps[k]) == 1, f"order {k} splits into {len(fps[k])} fingerprints"
            fvals, tr = next(iter(fps[k]))
            ct = _cycle_type_from_fixed(dict(zip(divisors[k], fvals)), k, n)
            out[k] = ClassFingerprint(order=k, count=counts[k], cycle_type=ct, trace=tr)
        return out


def _is_pr(m: int) -> bool:
    return m >= 2 and all(m % d for d in range(2, int(m**0.5) + 1))


def _probe_chain(ks: list[int]) -> tuple[list[int], dict[int, tuple[int, int]]]:
    """Divisor closure of ks with an addition chain; each probe is the sum
    of two earlier ones so permutation powers compose pairwise."""
    need = set()
    for k in ks:
        need.update(d for d in range(1, k + 1) if k % d == 0)
    probes = sorted(need)
    chain = {}
    done = [1]
    for m in probes:
        if m == 1:
            continue
        pick = next(
            ((a, m - a) for a in reversed(done) if (m - a) in done), None
        )
        assert pick is not None, f"no addition chain step for {m}"
        chain[m] = pick
        done.append(m)
    return probes, chain


def _cycle_type_from_fixed(fixed: dict[int, int], k: int, n: int) -> tuple:
    """Cycle counts from fixed-point counts of powers, for cycle lengths
    dividing k (all lengths divide the order)."""
    divs = sorted(fixed)
    counts = {}
    for d in divs:
        moved = fixed[d] - sum(e * counts[e] for e in divs if e < d and d % e == 0)
        assert moved % d == 0 and moved >= 0
        counts[d] = moved // d
    assert sum(d * c for d, c in counts.items()) == n
    out = []
    for d in divs:
        out.extend([d] * counts[d])
    return tuple(sorted(out))


def weyl_group(rd: RootDatum) -> WeylGroup:
    return WeylGroup(rd)


def reflection_rep_fixed_space(W: WeylGroup, w) -> int:
    """Dimension of the eigenvalue-1 eigenspace in the reflection
    representation; w is a word in the simple reflections or a matrix."""
    M = W.matrix_of_word(w) if not isinstance(w, np.ndarray) else w
    l = W.rd.rank
    A = [[Fraction(int(M[i, j]) - (i == j)) for j in range(l)] for i in range(l)]
    return l - _rank_frac(A)


def _rank_frac(A: list[list[Fraction]]) -> int:
    A = [row[:] for row in A]
    m = len(A)
    nc = len(A[0]) if m else 0
    rank = 0
    row = 0
    for col in range(nc):
        piv = next((i for i in range(row, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        pv = A[row][col]
        A[row] = [x / pv for x in A[row]]
        for i in range(m):
            if i != row and A[i][col] != 0:
                c = A[i][col]
                A[i] = [a - c * b for a, b in zip(A[i], A[row])]
        rank += 1
        row += 1
    return rank


def subsystem_a2a2_f4(rd: RootDatum) -> tuple[list[int], list[int]]:
    """The two commuting A2 subsystems of F4 built from the highest root:
    designated positive triples (-a0, a1, a1-a0) and (a3, a4, a3+a4),
    as indices into the root list."""
    if rd.type_label != "F4":
        raise WrongType(rd.type_label)
    a0 = rd.highest_root()
    e = np.eye(4, dtype=np.int64)
    phi1 = [rd.root_index(-a0), rd.root_index(e[0]), rd.root_index(e[0] - a0)]
    phi2 = [rd.root_index(e[2]), rd.root_index(e[3]), rd.root_index(e[2] + e[3])]
    for tri in (phi1, phi2):
        closed = set(tri) | {rd.neg_index(i) for i in tri}
        for a in closed:
            for b in closed:
                v = rd.root(a) + rd.root(b)
                if rd.is_root(v):
                    assert rd.root_index(v) in closed, "subsystem not closed"
    return phi1, phi2
