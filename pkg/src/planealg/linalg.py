"""Exact dense linear algebra over Fraction, for small matrices and spans.

Everything here works on plain lists of lists of Fraction (matrices) or on
sparse coordinate dicts (spans).  Dimensions in this package stay tiny
(at most a few hundred coordinates, at most a handful of basis vectors),
so simple Gauss-Jordan elimination is entirely adequate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

Row = List[Fraction]
Matrix = List[Row]


def identity_matrix(n: int) -> Matrix:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def zero_matrix(n: int, m: int) -> Matrix:
    return [[Fraction(0)] * m for _ in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = zero_matrix(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> Row:
    return [sum((row[j] * v[j] for j in range(len(v)) if v[j]), Fraction(0)) for row in a]


def mat_trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def rref(mat: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form (copy) and the list of pivot columns."""
    m = [list(row) for row in mat]
    if not m:
        return [], []
    rows, cols = len(m), len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat: Matrix) -> int:
    return len(rref(mat)[1])


def nullspace(mat: Matrix, ncols: Optional[int] = None) -> List[Row]:
    """Basis of the right nullspace, one vector per free column."""
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    if not mat:
        return [
            [Fraction(1) if i == j else Fraction(0) for i in range(ncols)]
            for j in range(ncols)
        ]
    red, pivots = rref(mat)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis: List[Row] = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence[Fraction]) -> Optional[Row]:
    """One solution of a x = b (free variables set to zero), or None."""
    if not a:
        return [] if all(v == 0 for v in b) else None
    ncols = len(a[0])
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    red, pivots = rref(aug)
    for r, row in enumerate(red):
        if all(v == 0 for v in row[:ncols]) and row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None  # pivot in the augmented column: inconsistent
        x[pc] = red[r][ncols]
    return x


def mat_inverse(a: Matrix) -> Optional[Matrix]:
    n = len(a)
    aug = [list(row) + ident for row, ident in zip(a, identity_matrix(n))]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


class EchelonSpan:
    """A subspace of a sparse coordinate space kept in reduced echelon form.

    Vectors are dicts mapping hashable coordinate keys to nonzero Fractions.
    ``key_order`` gives each key a sortable value; the pivot of a row is its
    largest key under that order.  Rows are pivot-normalized to 1, mutually
    reduced, and stored with pivots increasing, so two spans are equal as
    subspaces exactly when their ``rows`` lists are equal.
    """

    def __init__(self, key_order: Callable[[Hashable], object]):
        self.key_order = key_order
        self.rows: List[Dict[Hashable, Fraction]] = []
        self.pivots: List[Hashable] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Dict[Hashable, Fraction]) -> Tuple[Dict[Hashable, Fraction], List[Fraction]]:
        """Residual of vec modulo the span, plus its coefficients on the rows."""
        v = dict(vec)
        coeffs = [Fraction(0)] * len(self.rows)
        for idx, (row, pivot) in enumerate(zip(self.rows, self.pivots)):
            c = v.get(pivot)
            if not c:
                continue
            coeffs[idx] = c
            for k, rv in row.items():
                nv = v.get(k, Fraction(0)) - c * rv
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v, coeffs

    def contains(self, vec: Dict[Hashable, Fraction]) -> bool:
        residual, _ = self.reduce(vec)
        return not residual

    def coords(self, vec: Dict[Hashable, Fraction]) -> Optional[List[Fraction]]:
        residual, coeffs = self.reduce(vec)
        return None if residual else coeffs

    def add(self, vec: Dict[Hashable, Fraction]) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        residual, _ = self.reduce(vec)
        if not residual:
            return False
        pivot = max(residual, key=self.key_order)
        inv = Fraction(1) / residual[pivot]
        new_row = {k: v * inv for k, v in residual.items()}
        for row in self.rows:
            c = row.get(pivot)
            if not c:
                continue
            for k, nv in new_row.items():
                value = row.get(k, Fraction(0)) - c * nv
                if value:
                    row[k] = value
                else:
                    row.pop(k, None)
        at = next(
            (i for i, p in enumerate(self.pivots) if self.key_order(p) > self.key_order(pivot)),
            len(self.pivots),
        )
        self.rows.insert(at, new_row)
        self.pivots.insert(at, pivot)
        return True

    def extend(self, vecs: Sequence[Dict[Hashable, Fraction]]) -> None:
        for v in vecs:
            self.add(v)

    def equals(self, other: "EchelonSpan") -> bool:
        return self.rows == other.rows
