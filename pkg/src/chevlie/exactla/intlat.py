"""Integer lattice utilities: Smith normal form with transforms, linear
systems modulo n, and finite quotient orders.

Matrices are tiny (rank <= 14 here) so everything runs on Python ints in
object arrays; no overflow discipline needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np


def _as_obj(A) -> np.ndarray:
    M = np.array([[int(x) for x in row] for row in A], dtype=object)
    assert M.ndim == 2
    return M


def _obj_eye(n: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=object)
    for i in range(n):
        E[i, i] = 1
    return E


def smith_normal_form(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (D, U, V) with U @ A @ V = D diagonal, d_i | d_{i+1}, d_i >= 0,
    U and V unimodular."""
    A0 = _as_obj(A)
    D = A0.copy()
    m, k = D.shape
    U = _obj_eye(m)
    V = _obj_eye(k)

    def clear_at(t: int) -> bool:
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, k):
                    v = D[i, j]
                    if v != 0 and (best is None or abs(v) < abs(D[best[0], best[1]])):
                        best = (i, j)
            if best is None:
                return False
            bi, bj = best
            if bi != t:
                D[[t, bi]] = D[[bi, t]]
                U[[t, bi]] = U[[bi, t]]
            if bj != t:
                D[:, [t, bj]] = D[:, [bj, t]]
                V[:, [t, bj]] = V[:, [bj, t]]
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    q = D[i, t] // D[t, t]
                    D[i] -= q * D[t]
                    U[i] -= q * U[t]
            for j in range(t + 1, k):
                if D[t, j] != 0:
                    q = D[t, j] // D[t, t]
                    D[:, j] -= q * D[:, t]
                    V[:, j] -= q * V[:, t]
            if not any(D[i, t] for i in range(t + 1, m)) and not any(
                D[t, j] for j in range(t + 1, k)
            ):
                return True

    guard = 0
    while True:
        guard += 1
        assert guard < 1000
        t = 0
        while t < min(m, k) and clear_at(t):
            t += 1
        for i in range(min(m, k)):
            if D[i, i] < 0:
                D[i] = -D[i]
                U[i] = -U[i]
        fixed = True
        for i in range(t - 1):
            if D[i + 1, i + 1] % D[i, i] != 0:
                D[:, i] += D[:, i + 1]
                V[:, i] += V[:, i + 1]
                fixed = False
                break
        if fixed:
            break
    assert np.array_equal(U @ A0 @ V, D)
    return D, U, V


def snf_diagonal(A) -> list[int]:
    D, _, _ = smith_normal_form(A)
    return [int(D[i, i]) for i in range(min(D.shape))]


@dataclass
class SolveModResult:
    particular: list[int]
    kernel_gens: list[list[int]]  # solutions of the homogeneous system mod n
    count: int                    # number of solutions mod n


def solve_mod(A, b, n: int) -> SolveModResult | None:
    """All x (mod n) with A @ x = b (mod n); None when inconsistent."""
    assert n >= 1
    A0 = _as_obj(A)
    m, k = A0.shape
    D, U, V = smith_normal_form(A0)
    c = U @ np.array([int(x) for x in b], dtype=object)
    s = sum(1 for i in range(min(m, k)) if D[i, i] != 0)
    for i in range(s, m):
        if c[i] % n != 0:
            return None
    y = np.zeros(k, dtype=object)
    gens: list[list[int]] = []
    count = 1
    for i in range(s):
        d = int(D[i, i])
        g = gcd(d, n)
        if c[i] % g != 0:
            return None
        count *= g
        nn = n // g
        if nn > 1:
            y[i] = (c[i] // g) * pow((d // g) % nn, -1, nn) % nn
        if g > 1:
            e = np.zeros(k, dtype=object)
            e[i] = nn
            gens.append(list((V @ e) % n))
    for i in range(s, k):
        count *= n
        e = np.zeros(k, dtype=object)
        e[i] = 1
        gens.append(list((V @ e) % n))
    x = (V @ y) % n
    return SolveModResult(
        particular=[int(v) for v in x],
        kernel_gens=[[int(v) for v in g] for g in gens],
        count=count,
    )


def kernel_count_mod(A, n: int) -> int:
    """Number of x mod n with A @ x = 0 (mod n)."""
    A0 = _as_obj(A)
    k = A0.shape[1]
    diag = snf_diagonal(A0)
    s = sum(1 for d in diag if d != 0)
    count = 1
    for d in diag[:s]:
        count *= gcd(d, n)
    return count * n ** (k - s)


def quotient_invariants(gens, dim: int) -> list[int]:
    """Invariant factors of Z^dim / <rows of gens>; 0 marks a free factor."""
    if len(gens) == 0:
        return [0] * dim
    diag = snf_diagonal(gens)
    out = [d for d in diag if d != 0]
    return out + [0] * (dim - len(out))

def quotient_order(gens, dim: int) -> int:
    inv = quotient_invariants(gens, dim)
    assert all(d != 0 for d in inv), "quotient is infinite"
    out = 1
    for d in inv:
        out *= d
    return out
