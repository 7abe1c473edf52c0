"""The split orthogonal Lie algebra so(2n) as sparse exact matrices.

The ambient space has basis u_1..u_n, v_1..v_n with b(u_i, v_j) = delta_ij,
so X lies in so(2n) iff X^t S + S X = 0 for S = [[0, I], [I, 0]].  In blocks
X = [[A, B], [C, -A^t]] with B and C skew-symmetric.  Matrix indices are
0-based: u_i is row/column i-1 and v_i is row/column n+i-1.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence, Union

from .errors import InputError
from .roots import Root, build_root_system

Scalar = Union[int, Fraction]


def _norm(x: Rational) -> Scalar:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


class OrthoElement:
    """A sparse 2n x 2n matrix with exact rational entries."""

    __slots__ = ("n", "entries", "_hash")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], Rational] | None = None):
        self.n = n
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < 2 * n and 0 <= c < 2 * n):
                raise InputError(f"index ({r}, {c}) outside a {2 * n}x{2 * n} matrix")
            if v:
                clean[(r, c)] = _norm(v)
        self.entries: dict[tuple[int, int], Scalar] = clean
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> OrthoElement:
        return cls(n)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrthoElement):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.entries.items())))
        return self._hash

    def __repr__(self) -> str:
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.entries.items()))
        return f"OrthoElement(n={self.n}, {{{items}}})"

    def _check(self, other: OrthoElement) -> None:
        if self.n != other.n:
            raise InputError(f"rank mismatch: so({2 * self.n}) vs so({2 * other.n})")

    def __add__(self, other: OrthoElement) -> OrthoElement:
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return OrthoElement(self.n, out)

    def __neg__(self) -> OrthoElement:
        return OrthoElement(self.n, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: OrthoElement) -> OrthoElement:
        return self + (-other)

    def __mul__(self, c: Rational) -> OrthoElement:
        return OrthoElement(self.n, {k: v * c for k, v in self.entries.items()})

    __rmul__ = __mul__

    def transpose(self) -> OrthoElement:
        return OrthoElement(self.n, {(c, r): v for (r, c), v in self.entries.items()})

    def __getitem__(self, rc: tuple[int, int]) -> Scalar:
        return self.entries.get(rc, 0)

    def matmul(self, other: OrthoElement) -> dict[tuple[int, int], Scalar]:
        by_row: dict[int, list[tuple[int, Scalar]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], Scalar] = {}
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + a * b
        return out

    def is_orthogonal(self) -> bool:
        """Check X^t S + S X = 0."""
        n = self.n
        e = self.entries
        for (r, c), v in e.items():
            # (S X)[r, c] = X[r^, c] and (X^t S)[r, c] = X[c^, r] with i^ = i +- n
            partner = ((c + n) % (2 * n), (r + n) % (2 * n))
            if e.get(partner, 0) != -v:
                return False
        return True

    def dense(self) -> list[list[Scalar]]:
        m = 2 * self.n
        out = [[0] * m for _ in range(m)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out


def unit(n: int, *terms: tuple[int, int, int]) -> OrthoElement:
    """Build sum(coef * E_{r,c}) from ``(r, c, coef)`` triples."""
    out: dict[tuple[int, int], Scalar] = {}
    for r, c, v in terms:
        out[(r, c)] = out.get((r, c), 0) + v
    return OrthoElement(n, out)


def bracket(x: OrthoElement, y: OrthoElement) -> OrthoElement:
    x._check(y)
    xy = x.matmul(y)
    for k, v in y.matmul(x).items():
        xy[k] = xy.get(k, 0) - v
    return OrthoElement(x.n, xy)


def sigma(x: OrthoElement) -> OrthoElement:
    """The involution x -> -x^t; it acts as -id on the diagonal Cartan subalgebra."""
    return OrthoElement(x.n, {(c, r): -v for (r, c), v in x.entries.items()})


def tau(x: OrthoElement) -> OrthoElement:
    """Fix the diagonal blocks, negate the off-diagonal blocks."""
    n = x.n
    return OrthoElement(
        n, {(r, c): (v if (r < n) == (c < n) else -v) for (r, c), v in x.entries.items()}
    )


# ---------------------------------------------------------------------------
# Chevalley-style basis


def root_vector(n: int, alpha: Sequence[int]) -> OrthoElement:
    """The fixed root vector x_alpha for a root alpha (positive or negative)."""
    nz = [(k, s) for k, s in enumerate(alpha) if s]
    if len(nz) != 2 or any(abs(s) != 1 for _, s in nz):
        raise InputError(f"{tuple(alpha)} is not a root")
    (i, a), (j, b) = nz
    if a != b:
        if a < 0:  # alpha = eps_j - eps_i
            i, j = j, i
        return unit(n, (i, j, 1), (n + j, n + i, -1))
    if a > 0:
        return unit(n, (i, n + j, 1), (j, n + i, -1))
    return unit(n, (n + i, j, 1), (n + j, i, -1))


def _leading_entry(n: int, alpha: Sequence[int]) -> tuple[int, int]:
    nz = [(k, s) for k, s in enumerate(alpha) if s]
    (i, a), (j, b) = nz
    if a != b:
        return (i, j) if a > 0 else (j, i)
    return (i, n + j) if a > 0 else (n + i, j)


def cartan_element(n: int, i: int) -> OrthoElement:
    """h_i = E_ii - E_{n+i,n+i} (0-based ``i``)."""
    return unit(n, (i, i, 1), (n + i, n + i, -1))


@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    """h_1..h_n, then x_alpha for positive roots, then x_{-alpha} in the same order."""

    n: int
    cartan: tuple[OrthoElement, ...]
    root_vectors: dict[Root, OrthoElement]
    elements: tuple[OrthoElement, ...]
    labels: tuple[object, ...]
    _lead: tuple[tuple[int, int], ...] = field(repr=False)

    @property
    def _lead_index(self) -> dict[tuple[int, int], int]:
        idx = self.__dict__.get("_lead_cache")
        if idx is None:
            idx = {rc: k for k, rc in enumerate(self._lead)}
            object.__setattr__(self, "_lead_cache", idx)
        return idx

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def coordinates(self, x: OrthoElement) -> dict[int, Scalar]:
        """Sparse coordinates of ``x`` in this basis (``x`` must lie in so(2n))."""
        lead = self._lead_index
        return dict(sorted((lead[rc], v) for rc, v in x.entries.items() if rc in lead))

    def combine(self, coords: Mapping[int, Rational]) -> OrthoElement:
        acc: dict[tuple[int, int], Scalar] = {}
        for k, c in coords.items():
            for rc, v in self.elements[k].entries.items():
                acc[rc] = acc.get(rc, 0) + c * v
        return OrthoElement(self.n, acc)


@lru_cache(maxsize=None)
def build_algebra(n: int) -> AlgebraBasis:
    rs = build_root_system(n)
    cartan = tuple(cartan_element(n, i) for i in range(n))
    roots = list(rs.positive_roots) + [tuple(-x for x in a) for a in rs.positive_roots]
    rv = {a: root_vector(n, a) for a in roots}
    elements = cartan + tuple(rv[a] for a in roots)
    labels = tuple(("h", i + 1) for i in range(n)) + tuple(roots)
    lead = tuple((i, i) for i in range(n)) + tuple(_leading_entry(n, a) for a in roots)
    return AlgebraBasis(n, cartan, rv, elements, labels, lead)


# ---------------------------------------------------------------------------
# Characters of Q/2Q and the automorphisms tau_chi


@dataclass(frozen=True)
class Character:
    """A homomorphism Q/2Q -> {+1, -1}, stored by its values on the simple roots."""

    n: int
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != self.n or any(s not in (1, -1) for s in self.signs):
            raise InputError("a character needs n values in {+1, -1}")

    def __call__(self, v: Sequence[int]) -> int:
        c = build_root_system(self.n).simple_coordinates(v)
        out = 1
        for s, k in zip(self.signs, c):
            if s < 0 and k % 2:
                out = -out
        return out

    @classmethod
    def trivial(cls, n: int) -> Character:
        return cls(n, (1,) * n)

    @classmethod
    def from_function(cls, n: int, f: Callable[[Sequence[int]], int]) -> Character:
        """Wrap ``f`` after checking it is a homomorphism on Q/2Q."""
        rs = build_root_system(n)
        signs = tuple(f(a) for a in rs.simple_roots)
        if any(s not in (1, -1) for s in signs):
            raise InputError("character values must be +1 or -1")
        chi = cls(n, signs)
        for a in rs.simple_roots:
            if f(tuple(2 * x for x in a)) != 1:
                raise InputError(f"chi(2 * {a}) != 1; not a character of Q/2Q")
        for a in rs.positive_roots:
            if f(a) != chi(a):
                raise InputError(f"chi is not multiplicative at the root {a}")
        return chi

    @classmethod
    def all(cls, n: int):
        for mask in range(2**n):
            yield cls(n, tuple(-1 if mask >> i & 1 else 1 for i in range(n)))


def tau_chi(chi: Character | Callable, x: OrthoElement) -> OrthoElement:
    """The torus element acting on x_alpha by chi(alpha + 2Q) and trivially on the Cartan."""
    n = x.n
    if not isinstance(chi, Character):
        chi = Character.from_function(n, chi)
    elif chi.n != n:
        raise InputError("character rank does not match the element")
    basis = build_algebra(n)
    coords = basis.coordinates(x)
    scaled = {k: (c if k < n else c * chi(basis.labels[k])) for k, c in coords.items()}
    return basis.combine(scaled)


def rational_rank(rows) -> int:
    """Rank over Q of dense rows or sparse ``{column: value}`` rows."""
    pivots: dict[int, dict[int, Fraction]] = {}
    rank = 0
    for row in rows:
        items = row.items() if isinstance(row, Mapping) else enumerate(row)
        r = {j: Fraction(v) for j, v in items if v}
        while r:
            j = min(r)
            p = pivots.get(j)
            if p is None:
                pivots[j] = r
                rank += 1
                break
            f = r[j] / p[j]
            for k, v in p.items():
                w = r.get(k, 0) - f * v
                if w:
                    r[k] = w
                else:
                    r.pop(k, None)
    return rank


def check_automorphism(
    phi: Callable[[OrthoElement], OrthoElement] | Mapping[int, OrthoElement], n: int
) -> bool:
    """Whether ``phi``, given on the basis of so(2n), extends to a Lie automorphism."""
    basis = build_algebra(n)
    if isinstance(phi, Mapping):
        images = [phi[k] for k in range(basis.dimension)]
    else:
        images = [phi(b) for b in basis.elements]
    if any(im.n != n or not im.is_orthogonal() for im in images):
        return False
    img_coords = [basis.coordinates(im) for im in images]
    if rational_rank([dict(c) for c in img_coords]) != basis.dimension:
        return False
    els = basis.elements
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            lhs_coords = basis.coordinates(bracket(els[i], els[j]))
            acc: dict[tuple[int, int], Scalar] = {}
            for k, c in lhs_coords.items():
                for rc, v in images[k].entries.items():
                    acc[rc] = acc.get(rc, 0) + c * v
            lhs = OrthoElement(n, acc)
            if lhs != bracket(images[i], images[j]):
                return False
    return True
