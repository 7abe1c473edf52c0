"""Exact integer linear algebra: Smith and Hermite normal forms, sublattices of Z^n.

Matrices are plain lists of rows of Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        if len(row) != inner:
            raise InputError("matrix shapes do not match")
        acc = [0] * cols
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(cols):
                    acc[j] += a * bk[j]
        out.append(acc)
    return out


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.V)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivoting always brings the smallest nonzero entry of the active block to
    the corner, which keeps intermediate entries small in practice.
    ``ncols`` is only needed when ``A`` has no rows.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    D = [list(map(int, row)) for row in A]
    for row in D:
        if len(row) != n:
            raise InputError("ragged matrix")
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        ud, us = U[dst], U[src]
        for j in range(m):
            if us[j]:
                ud[j] += q * us[j]

    def add_col(dst, src, q):
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])

        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    add_row(i, t, -q)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    add_col(j, t, -q)
                    if D[t][j]:
                        dirty = True
            if dirty:
                _move_min_to_corner(D, t, m, n, swap_rows, swap_cols)
                continue
            # Row and column are clean; enforce divisibility of the remainder.
            bad = next(
                (i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(D, U, V)


def _move_min_to_corner(D, t, m, n, swap_rows, swap_cols):
    best = None
    for i in range(t, m):
        v = D[i][t]
        if v and (best is None or abs(v) < best[0]):
            best = (abs(v), i, t)
    for j in range(t, n):
        v = D[t][j]
        if v and (best is None or abs(v) < best[0]):
            best = (abs(v), t, j)
    swap_rows(t, best[1])
    swap_cols(t, best[2])


def elementary_divisors(A: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    """The ``min(rows, cols)`` diagonal entries of the Smith form, zeros trailing."""
    return smith_normal_form(A, ncols).diagonal


# ---------------------------------------------------------------------------
# Hermite normal form and lattices


def hermite_rows(rows: Iterable[Sequence[int]], ncols: int) -> IntMatrix:
    """Row-style Hermite normal form with zero rows dropped.

    Pivots are positive, and entries above each pivot lie in ``[0, pivot)``.
    """
    work = []
    seen = set()
    for r in rows:
        r = tuple(int(x) for x in r)
        if len(r) != ncols:
            raise InputError(f"row of length {len(r)}; expected {ncols}")
        if any(r) and r not in seen:
            seen.add(r)
            work.append(list(r))
    basis: IntMatrix = []
    col = 0
    while work and col < ncols:
        active = [r for r in work if r[col]]
        rest = [r for r in work if not r[col]]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                for j in range(col, ncols):
                    r[j] -= q * piv[j]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        piv = active[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        work = rest
        col += 1
    # reduce entries above pivots
    pivots = [_pivot(r) for r in basis]
    for k, row in enumerate(basis):
        pc = pivots[k]
        for i in range(k):
            q = basis[i][pc] // row[pc]
            if q:
                basis[i] = [a - q * b for a, b in zip(basis[i], row)]
    return basis


def _pivot(row: Sequence[int]) -> int:
    for j, v in enumerate(row):
        if v:
            return j
    return -1


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^n stored by its row Hermite basis.

    Equality of two values is equality of the subgroups.
    """

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __add__(self, other: Lattice) -> Lattice:
        return lattice_sum(self, other)

    def scaled(self, k: int) -> Lattice:
        return lattice_from_rows([[k * x for x in r] for r in self.basis], self.ambient_rank)

    def rows(self) -> IntMatrix:
        return [list(r) for r in self.basis]


def lattice_from_rows(rows: Iterable[Sequence[int]], ambient_rank: int) -> Lattice:
    return Lattice(ambient_rank, tuple(tuple(r) for r in hermite_rows(rows, ambient_rank)))


def zero_lattice(n: int) -> Lattice:
    return Lattice(n, ())


def full_lattice(n: int) -> Lattice:
    return Lattice(n, tuple(tuple(r) for r in identity(n)))


def _solve(L: Lattice, v: Sequence[int]) -> list[int] | None:
    """Integer coordinates of ``v`` in ``L``'s basis, or None if ``v`` is not in ``L``."""
    if len(v) != L.ambient_rank:
        raise InputError(f"vector of length {len(v)}; lattice lives in Z^{L.ambient_rank}")
    rest = [int(x) for x in v]
    coords = []
    for row in L.basis:
        p = _pivot(row)
        if any(rest[:p]):
            return None
        q, r = divmod(rest[p], row[p])
        if r:
            return None
        coords.append(q)
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    if any(rest):
        return None
    return coords


def contains(L: Lattice, v: Sequence[int]) -> bool:
    return _solve(L, v) is not None


def coordinates(L: Lattice, v: Sequence[int]) -> list[int]:
    c = _solve(L, v)
    if c is None:
        raise PreconditionError(f"{list(v)} is not in the lattice")
    return c


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    if L1.ambient_rank != L2.ambient_rank:
        raise InputError("lattices live in different ambient ranks")
    return lattice_from_rows(list(L1.basis) + list(L2.basis), L1.ambient_rank)


def is_sublattice(sub: Lattice, sup: Lattice) -> bool:
    if sub.ambient_rank != sup.ambient_rank:
        raise InputError("lattices live in different ambient ranks")
    return all(contains(sup, r) for r in sub.basis)


@dataclass(frozen=True)
class Quotient:
    """The group ``sup / sub`` with a canonical coordinate map.

    Elements are tuples: torsion coordinates (reduced mod each invariant
    factor) followed by free coordinates.
    """

    sub: Lattice
    sup: Lattice
    invariant_factors: tuple[int, ...]
    free_rank: int
    _V: tuple[tuple[int, ...], ...]
    _torsion_slots: tuple[int, ...]
    _free_slots: tuple[int, ...]

    @property
    def order(self) -> int | float:
        return float("inf") if self.free_rank else prod(self.invariant_factors)

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        x = coordinates(self.sup, v)
        y = [sum(x[k] * self._V[k][j] for k in range(len(x))) for j in range(len(x))]
        tors = tuple(y[s] % d for s, d in zip(self._torsion_slots, self.invariant_factors))
        return tors + tuple(y[s] for s in self._free_slots)


def quotient(sub: Lattice, sup: Lattice) -> Quotient:
    if not is_sublattice(sub, sup):
        raise PreconditionError("sub is not contained in sup")
    r = sup.rank
    C = [coordinates(sup, row) for row in sub.basis]
    snf = smith_normal_form(C, ncols=r)
    diag = snf.diagonal
    rank = snf.rank
    tors_slots = tuple(i for i in range(rank) if diag[i] > 1)
    return Quotient(
        sub=sub,
        sup=sup,
        invariant_factors=tuple(diag[i] for i in tors_slots),
        free_rank=r - rank,
        _V=tuple(tuple(row) for row in snf.V),
        _torsion_slots=tors_slots,
        _free_slots=tuple(range(rank, r)),
    )


def quotient_invariants(sub: Lattice, sup: Lattice) -> tuple[list[int], int]:
    """``(invariant factors > 1, free rank)`` of ``sup / sub``."""
    q = quotient(sub, sup)
    return list(q.invariant_factors), q.free_rank


def index(sub: Lattice, sup: Lattice) -> int | float:
    """``[sup : sub]``; ``math.inf`` when ``sub`` has smaller rank."""
    if not is_sublattice(sub, sup):
        raise PreconditionError("sub is not contained in sup")
    if sub.rank < sup.rank:
        return float("inf")
    C = [coordinates(sup, row) for row in sub.basis]
    return abs(determinant(C))


# ---------------------------------------------------------------------------
# Matrix file format


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``rows cols`` followed by ``rows`` lines of integers; ``#`` starts a comment line."""
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), 1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise InputError("empty matrix file")
    no, head = lines[0]
    try:
        rows, cols = (int(t) for t in head.split())
    except ValueError:
        raise InputError(f"line {no}: expected 'rows cols'") from None
    if rows < 0 or cols < 0:
        raise InputError(f"line {no}: negative shape")
    body = lines[1:]
    if len(body) != rows:
        raise InputError(f"expected {rows} matrix rows, found {len(body)}")
    out = []
    for no, ln in body:
        try:
            row = [int(t) for t in ln.split()]
        except ValueError:
            raise InputError(f"line {no}: non-integer entry") from None
        if len(row) != cols:
            raise InputError(f"line {no}: expected {cols} entries, found {len(row)}")
        out.append(row)
    return out


def write_matrix(A: Sequence[Sequence[int]], ncols: int | None = None) -> str:
    cols = len(A[0]) if A else (ncols or 0)
    lines = [f"{len(A)} {cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in A)
    return "\n".join(lines) + "\n"
