"""Exact dense linear algebra over QQ or GF(p).

Thin helpers around sympy's DomainMatrix.  Everything here is exact; no
floating point ever enters.  Matrices are always kept in dense form so that
equality and printing behave predictably.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

Mat = DomainMatrix


def field_from_spec(spec) -> object:
    """Turn ``"QQ"`` / ``None`` / ``{"prime": p}`` / an int into a domain."""
    if spec is None or spec == "QQ" or spec == "rational":
        return QQ
    if isinstance(spec, dict):
        spec = spec.get("prime")
    if isinstance(spec, int):
        if spec < 2 or any(spec % k == 0 for k in range(2, int(spec ** 0.5) + 1)):
            raise ValueError(f"modulus {spec} is not prime")
        return GF(spec)
    raise ValueError(f"unrecognised field spec {spec!r}")


def field_spec(K) -> object:
    if K == QQ:
        return "QQ"
    return {"prime": int(K.mod)}


def is_prime_field(K) -> bool:
    return K != QQ


def scalar(K, x):
    """Coerce an int, Fraction, or "a/b" string into the field K."""
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if K == QQ:
            return QQ(x.numerator, x.denominator)
        return K(x.numerator) / K(x.denominator)
    if isinstance(x, int):
        return K(x)
    return K.convert(x)


def scalar_to_json(K, x):
    if K == QQ:
        q = Fraction(int(x.numerator), int(x.denominator))
        return str(q)
    return int(x) % int(K.mod)


def zeros(r: int, c: int, K) -> Mat:
    return DomainMatrix.zeros((r, c), K).to_dense()


def eye(n: int, K) -> Mat:
    return DomainMatrix.eye(n, K).to_dense()


def from_rows(rows: Sequence[Sequence], K, shape=None) -> Mat:
    rows = [[scalar(K, x) for x in row] for row in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    if shape[0] == 0 or shape[1] == 0:
        return zeros(shape[0], shape[1], K)
    return DomainMatrix(rows, shape, K)


def to_rows(A: Mat) -> list[list]:
    return A.to_dense().to_list()


def is_zero(A: Mat) -> bool:
    if A.shape[0] == 0 or A.shape[1] == 0:
        return True
    return A.is_zero_matrix


def nnz(A: Mat) -> int:
    return sum(1 for row in to_rows(A) for x in row if x)


def equal(A: Mat, B: Mat) -> bool:
    if A.shape != B.shape:
        return False
    return A.to_dense() == B.to_dense()


def rank(A: Mat) -> int:
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return A.rank()


def kernel(A: Mat) -> Mat:
    """Columns spanning ker A (shape n x k)."""
    n = A.shape[1]
    K = A.domain
    if n == 0:
        return zeros(0, 0, K)
    if A.shape[0] == 0:
        return eye(n, K)
    N = A.nullspace()
    if N.shape[0] == 0:
        return zeros(n, 0, K)
    return N.transpose().to_dense()


def column_space(A: Mat) -> Mat:
    """A basis of the column space, as the pivot columns of A."""
    if A.shape[0] == 0 or A.shape[1] == 0:
        return zeros(A.shape[0], 0, A.domain)
    _, pivots = A.rref()
    return A.extract(list(range(A.shape[0])), list(pivots)).to_dense()


def extend_basis(V: Mat, W: Mat) -> Mat:
    """Columns of W (in order) that extend the independent columns of V.

    Returns the chosen columns of W as a matrix; together with V they span
    span(V) + span(W).
    """
    k = V.shape[1]
    if W.shape[1] == 0:
        return W
    M = hstack([V, W])
    if M.shape[0] == 0:
        return zeros(0, 0, W.domain)
    _, pivots = M.rref()
    chosen = [j - k for j in pivots if j >= k]
    return W.extract(list(range(W.shape[0])), chosen).to_dense()


def complement(V: Mat, n: int | None = None) -> Mat:
    """Standard basis vectors completing the columns of V to a basis."""
    K = V.domain
    n = V.shape[0] if n is None else n
    return extend_basis(V, eye(n, K))


def hstack(blocks: Sequence[Mat]) -> Mat:
    blocks = [b for b in blocks]
    r = blocks[0].shape[0]
    K = blocks[0].domain
    cols = sum(b.shape[1] for b in blocks)
    if r == 0 or cols == 0:
        return zeros(r, cols, K)
    nz = [b.to_dense() for b in blocks if b.shape[1] > 0]
    return DomainMatrix.hstack(*nz).to_dense() if len(nz) > 1 else nz[0]


def vstack(blocks: Sequence[Mat]) -> Mat:
    blocks = [b for b in blocks]
    c = blocks[0].shape[1]
    K = blocks[0].domain
    rows = sum(b.shape[0] for b in blocks)
    if c == 0 or rows == 0:
        return zeros(rows, c, K)
    nz = [b.to_dense() for b in blocks if b.shape[0] > 0]
    return DomainMatrix.vstack(*nz).to_dense() if len(nz) > 1 else nz[0]


def block(rows: Sequence[Sequence[Mat]]) -> Mat:
    return vstack([hstack(r) for r in rows])


def block_diag(blocks: Sequence[Mat], K) -> Mat:
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    out = [[K.zero] * c for _ in range(r)]
    i0 = j0 = 0
    for b in blocks:
        for i, row in enumerate(to_rows(b)):
            for j, x in enumerate(row):
                out[i0 + i][j0 + j] = x
        i0 += b.shape[0]
        j0 += b.shape[1]
    if r == 0 or c == 0:
        return zeros(r, c, K)
    return DomainMatrix(out, (r, c), K)


def sub(A: Mat, rows: Iterable[int], cols: Iterable[int]) -> Mat:
    rows, cols = list(rows), list(cols)
    if not rows or not cols:
        return zeros(len(rows), len(cols), A.domain)
    return A.extract(rows, cols).to_dense()


def inverse(A: Mat) -> Mat | None:
    """Inverse of a square matrix, or None when singular."""
    n, m = A.shape
    if n != m:
        return None
    if n == 0:
        return A
    if A.rank() < n:
        return None
    return A.inv().to_dense()


def solve(A: Mat, B: Mat) -> Mat | None:
    """Some X with A X = B, or None if the system is inconsistent."""
    K = A.domain
    m, n = A.shape
    k = B.shape[1]
    if k == 0:
        return zeros(n, 0, K)
    if n == 0:
        return zeros(0, k, K) if is_zero(B) else None
    if m == 0:
        return zeros(n, k, K)
    aug = hstack([A, B])
    R, pivots = aug.rref()
    R = R.to_dense().to_list()
    if any(p >= n for p in pivots):
        return None
    X = [[K.zero] * k for _ in range(n)]
    for r, p in enumerate(pivots):
        for j in range(k):
            X[p][j] = R[r][n + j]
    return DomainMatrix(X, (n, k), K)


def random_matrix(rng, r: int, c: int, K, lo: int = -2, hi: int = 2) -> Mat:
    rows = [[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)]
    return from_rows(rows, K, (r, c))


def random_invertible(rng, n: int, K) -> Mat:
    """Random invertible matrix: product of a unit lower and unit upper factor."""
    if n == 0:
        return zeros(0, 0, K)
    while True:
        L = [[(1 if i == j else (rng.randint(-1, 1) if j < i else 0)) for j in range(n)] for i in range(n)]
        U = [[(rng.choice([1, -1, 2]) if i == j else (rng.randint(-1, 1) if j > i else 0)) for j in range(n)] for i in range(n)]
        M = from_rows(L, K) * from_rows(U, K)
        if rank(M) == n:
            # scramble by a permutation so the pattern is less regular
            perm = list(range(n))
            rng.shuffle(perm)
            P = from_rows([[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)], K)
            return (P * M).to_dense()


def is_partial_permutation(A: Mat) -> bool:
    """Every entry 0 or 1 with at most one 1 per row and per column."""
    rows = to_rows(A)
    col_hits = [0] * A.shape[1]
    for row in rows:
        ones = 0
        for j, x in enumerate(row):
            if x == 0:
                continue
            if x != 1:
                return False
            ones += 1
            col_hits[j] += 1
        if ones > 1:
            return False
    return all(h <= 1 for h in col_hits)
