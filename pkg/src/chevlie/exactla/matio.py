"""Plain-text matrix serialization.

Header line: "p r n_rows n_cols modulus_coeffs..." (modulus low to high,
r+1 integers, omitted when r = 1).  Then one row per line; each entry is an
integer for r = 1 and r comma-separated coefficients otherwise.  Several
matrices may be concatenated in one file; blank lines between them are
ignored.
"""

from __future__ import annotations

import io

import numpy as np

from .field import Fq
from .mat import Mat


def matrix_to_text(M: Mat) -> str:
    F = M.F
    head = [str(F.p), str(F.r), str(M.nrows), str(M.ncols)]
    if F.r > 1:
        head.extend(str(int(c)) for c in F.modulus)
    lines = [" ".join(head)]
    for i in range(M.nrows):
        if F.r == 1:
            lines.append(" ".join(str(int(x)) for x in M.a[i]))
        else:
            lines.append(" ".join(",".join(str(int(c)) for c in e) for e in M.a[i]))
    return "\n".join(lines) + "\n"


def write_matrix(path: str, M: Mat) -> None:
    with open(path, "w") as f:
        f.write(matrix_to_text(M))


def read_matrix_stream(f: io.TextIOBase, F: Fq | None = None) -> Mat | None:
    """Read one matrix; None at end of stream.  With F given, the header
    must agree with F and the matrix is built over it."""
    line = _next_line(f)
    if line is None:
        return None
    head = [int(x) for x in line.split()]
    p, r, nrows, ncols = head[:4]
    if r > 1:
        modulus = np.array(head[4 : 4 + r + 1], dtype=np.int64)
        assert len(modulus) == r + 1, "truncated modulus in header"
    else:
        modulus = None
    if F is None:
        F = Fq(p, r, modulus=modulus)
    else:
        assert F.p == p and F.r == r, "field mismatch"
        if r > 1:
            assert np.array_equal(F.modulus, modulus), "modulus mismatch"
    rows = []
    for _ in range(nrows):
        line = _next_line(f)
        assert line is not None, "truncated matrix body"
        parts = line.split()
        assert len(parts) == ncols, f"expected {ncols} entries, got {len(parts)}"
        if r == 1:
            rows.append([int(x) for x in parts])
        else:
            rows.append([[int(c) for c in e.split(",")] for e in parts])
    return Mat(F, np.array(rows, dtype=np.int64))


def read_matrix(path: str, F: Fq | None = None) -> Mat:
    with open(path) as f:
        M = read_matrix_stream(f, F)
    assert M is not None, f"no matrix in {path}"
    return M


def read_all_matrices(path: str, F: Fq | None = None) -> list[Mat]:
    out = []
    with open(path) as f:
        while True:
            M = read_matrix_stream(f, F)
            if M is None:
                break
            out.append(M)
            F = M.F
    return out


def _next_line(f) -> str | None:
    for line in f:
        s = line.strip()
        if s and not s.startswith("#"):
            return s
    return None
