"""Set gradings and pure group gradings of so(2n) on coordinate subspaces.

Every grading here partitions a fixed basis of so(2n), so a component is a
set of basis indices.  The adapted basis is

    h_1, ..., h_n, then y+_a = x_a + sigma(x_a), y-_a = x_a - sigma(x_a)

for each positive root a in root-system order; ``y+`` of the k-th positive
root has index n + 2k and ``y-`` has index n + 2k + 1.  Components that are
coordinate subspaces make "the bracket of two components lies in a third"
a statement about supports of structure-constant expansions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .designs import Design, validate
from .errors import InputError, PreconditionError
from .lattice import Lattice, elementary_divisors, is_sublattice, lattice_from_rows, quotient
from .liealg import (
    AlgebraBasis,
    OrthoElement,
    Scalar,
    bracket,
    build_algebra,
    sigma,
)
from .roots import Root, build_root_system, eps, root_lattice

# ---------------------------------------------------------------------------
# Bases


def _half(x: int) -> Scalar:
    return x // 2 if x % 2 == 0 else Fraction(x, 2)


@dataclass(frozen=True, eq=False)
class GradingBasis:
    """A basis of so(2n) together with a coordinate map."""

    n: int
    kind: str
    vectors: tuple[OrthoElement, ...]
    labels: tuple[object, ...]

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def coordinates(self, x: OrthoElement) -> dict[int, Scalar]:
        raise NotImplementedError

    def combine(self, coords: dict[int, Scalar]) -> OrthoElement:
        acc: dict[tuple[int, int], Scalar] = {}
        for k, c in coords.items():
            for rc, v in self.vectors[k].entries.items():
                acc[rc] = acc.get(rc, 0) + c * v
        return OrthoElement(self.n, acc)


class RootBasis(GradingBasis):
    """The Chevalley-style basis h_i, x_a of :func:`liealg.build_algebra`."""

    def __init__(self, algebra: AlgebraBasis):
        super().__init__(algebra.n, "root", algebra.elements, algebra.labels)
        object.__setattr__(self, "algebra", algebra)

    def coordinates(self, x):
        return self.algebra.coordinates(x)


class AdaptedBasis(GradingBasis):
    """h_i, then y+_a, y-_a for every positive root a."""

    def __init__(self, n: int):
        alg = build_algebra(n)
        rs = build_root_system(n)
        vecs = list(alg.cartan)
        labels: list[object] = [("h", i + 1) for i in range(n)]
        signs = []
        for a in rs.positive_roots:
            x = alg.root_vectors[a]
            sx = sigma(x)
            vecs += [x + sx, x - sx]
            labels += [(a, "+"), (a, "-")]
            neg = tuple(-t for t in a)
            # sigma(x_a) = c * x_{-a} with c = +-1
            xneg = alg.root_vectors[neg]
            e = next(iter(xneg.entries))
            c = sx[e] // xneg[e]
            assert sx == c * xneg
            signs.append(c)
        super().__init__(n, "adapted", tuple(vecs), tuple(labels))
        object.__setattr__(self, "algebra", alg)
        object.__setattr__(self, "sigma_signs", tuple(signs))

    def from_algebra_coords(self, coords: dict[int, Scalar]) -> dict[int, Scalar]:
        """Algebra-basis coordinates -> adapted coordinates."""
        n = self.n
        npos = n * (n - 1)
        out: dict[int, Scalar] = {}
        pos: dict[int, list] = {}
        for k, v in coords.items():
            if k < n:
                out[k] = v
            elif k < n + npos:
                pos.setdefault(k - n, [0, 0])[0] = v
            else:
                pos.setdefault(k - n - npos, [0, 0])[1] = v
        for r, (a, b) in sorted(pos.items()):
            bc = b * self.sigma_signs[r]
            plus, minus = a + bc, a - bc
            if plus:
                out[n + 2 * r] = _half(plus) if isinstance(plus, int) else plus / 2
            if minus:
                out[n + 2 * r + 1] = _half(minus) if isinstance(minus, int) else minus / 2
        return dict(sorted(out.items()))

    def to_algebra_coords(self, coords: dict[int, Scalar]) -> dict[int, Scalar]:
        """Adapted coordinates -> algebra-basis coordinates."""
        n = self.n
        npos = n * (n - 1)
        out: dict[int, Scalar] = {}
        for k, v in coords.items():
            if k < n:
                out[k] = out.get(k, 0) + v
                continue
            r, minus = divmod(k - n, 2)
            c = self.sigma_signs[r]
            out[n + r] = out.get(n + r, 0) + v
            neg = n + npos + r
            out[neg] = out.get(neg, 0) + (-v if minus else v) * c
        return {k: v for k, v in sorted(out.items()) if v}

    def coordinates(self, x):
        return self.from_algebra_coords(self.algebra.coordinates(x))

    def index_of(self, alpha: Sequence[int], sign: str) -> int:
        k = build_root_system(self.n).position(alpha)
        return self.n + 2 * k + (sign == "-")


@lru_cache(maxsize=None)
def adapted_basis(n: int) -> AdaptedBasis:
    if n < 2:
        raise InputError("type D_n needs n >= 2")
    return AdaptedBasis(n)


@lru_cache(maxsize=None)
def root_basis(n: int) -> RootBasis:
    return RootBasis(build_algebra(n))


# ---------------------------------------------------------------------------
# Structure constants


def structure_constants(basis: GradingBasis) -> dict[tuple[int, int], dict[int, Scalar]]:
    """Nonzero brackets ``[v_i, v_j]`` for ``i < j`` as sparse coordinate vectors."""
    return _structure_constants(basis.kind, basis.n)


def structure_constants_adapted(n: int) -> dict[tuple[int, int], dict[int, Scalar]]:
    return _structure_constants("adapted", n)


@lru_cache(maxsize=4)
def _structure_constants(kind: str, n: int):
    basis = adapted_basis(n) if kind == "adapted" else root_basis(n)
    vecs = basis.vectors
    by_row: dict[int, set[int]] = {}
    by_col: dict[int, set[int]] = {}
    for k, v in enumerate(vecs):
        for r, c in v.entries:
            by_row.setdefault(r, set()).add(k)
            by_col.setdefault(c, set()).add(k)
    table = {}
    for i, v in enumerate(vecs):
        cand = set()
        for r, c in v.entries:
            cand |= by_row.get(c, set())
            cand |= by_col.get(r, set())
        for j in sorted(cand):
            if j <= i:
                continue
            b = bracket(v, vecs[j])
            if b:
                table[(i, j)] = basis.coordinates(b)
    return table


def bracket_coords(basis: GradingBasis, i: int, j: int) -> dict[int, Scalar]:
    """Coordinates of ``[v_i, v_j]`` (empty when the bracket vanishes)."""
    if i == j:
        return {}
    table = structure_constants(basis)
    if i < j:
        return table.get((i, j), {})
    return {k: -v for k, v in table.get((j, i), {}).items()}


# ---------------------------------------------------------------------------
# Gradings


@dataclass(frozen=True, eq=False)
class SetGrading:
    """A partition of ``basis`` indices into components."""

    basis: GradingBasis
    components: tuple[tuple[int, ...], ...]
    labels: tuple[object, ...] = ()

    def __post_init__(self):
        comps = tuple(tuple(sorted(c)) for c in self.components)
        object.__setattr__(self, "components", comps)
        seen: set[int] = set()
        for c in comps:
            if not c:
                raise InputError("empty component")
            for k in c:
                if k in seen or not 0 <= k < self.basis.dimension:
                    raise InputError(f"basis index {k} repeated or out of range")
                seen.add(k)
        if len(seen) != self.basis.dimension:
            raise InputError("components do not cover the whole basis")
        if self.labels and len(self.labels) != len(comps):
            raise InputError("one label per component expected")

    @property
    def n(self) -> int:
        return self.basis.n

    def component_of(self) -> list[int]:
        owner = [0] * self.basis.dimension
        for c, comp in enumerate(self.components):
            for k in comp:
                owner[k] = c
        return owner

    def dimension_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for c in self.components:
            hist[len(c)] = hist.get(len(c), 0) + 1
        return dict(sorted(hist.items(), reverse=True))

    def cartan_component(self) -> int | None:
        """Index of the component holding every h_i, if there is one (adapted/root bases)."""
        owner = self.component_of()
        c = owner[0]
        return c if all(owner[i] == c for i in range(self.n)) else None

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.components))


@dataclass(frozen=True)
class Counterexample:
    """Two components whose bracket is not inside a single allowed component."""

    first: int
    second: int
    hits: tuple[int, ...]
    expected_label: object = None

    def describe(self) -> str:
        msg = f"[C{self.first}, C{self.second}] meets components {list(self.hits)}"
        if self.expected_label is not None:
            msg += f"; expected label {self.expected_label}"
        return msg


def component_products(g: SetGrading) -> dict[tuple[int, int], frozenset[int]]:
    """For every unordered pair of components with nonzero bracket, the components hit."""
    owner = g.component_of()
    hits: dict[tuple[int, int], set[int]] = {}
    for (i, j), coords in structure_constants(g.basis).items():
        a, b = owner[i], owner[j]
        key = (a, b) if a <= b else (b, a)
        s = hits.setdefault(key, set())
        for k in coords:
            s.add(owner[k])
    return {k: frozenset(v) for k, v in sorted(hits.items())}


def verify_set_grading(g: SetGrading) -> Counterexample | None:
    for (a, b), hit in component_products(g).items():
        if len(hit) > 1:
            return Counterexample(a, b, tuple(sorted(hit)))
    return None


def pairs_from_block(block: Sequence[int], n: int | None = None) -> list[tuple[Root, Root]]:
    """The six pairs of orthogonal positive roots attached to a block i < j < k < l."""
    i, j, k, l = block
    if not i < j < k < l:
        raise InputError(f"block {tuple(block)} is not strictly increasing")
    n = l if n is None else n
    if i < 1 or l > n:
        raise InputError(f"block {tuple(block)} outside 1..{n}")
    out = []
    for s in (1, -1):
        out += [
            (eps(n, i, s * j), eps(n, k, s * l)),
            (eps(n, i, s * k), eps(n, j, s * l)),
            (eps(n, i, s * l), eps(n, j, s * k)),
        ]
    return out


def grading_from_design(d: Design) -> SetGrading:
    """The set grading: Cartan, then per block and per pair a y+ and a y- component."""
    bad = validate(d)
    if bad is not None:
        raise PreconditionError(f"not a Steiner system: {bad.describe()}")
    n = d.n
    if n < 2:
        raise PreconditionError("type D_n needs n >= 2")
    basis = adapted_basis(n)
    comps = [tuple(range(n))]
    labels: list[object] = ["cartan"]
    for b in d.blocks:
        for p, (a1, a2) in enumerate(pairs_from_block(b, n)):
            for sign in "+-":
                comps.append((basis.index_of(a1, sign), basis.index_of(a2, sign)))
                labels.append((b, p, sign))
    return SetGrading(basis, tuple(comps), tuple(labels))


def root_space_grading(n: int) -> SetGrading:
    """Cartan as one component, each root vector x_a alone (in the root basis)."""
    basis = root_basis(n)
    comps = [tuple(range(n))] + [(k,) for k in range(n, basis.dimension)]
    return SetGrading(basis, tuple(comps), tuple(["cartan"] + list(basis.labels[n:])))


# ---------------------------------------------------------------------------
# Group gradings


@dataclass(frozen=True)
class AbelianGroup:
    """Z/d_1 x ... x Z/d_k x Z^free_rank; elements are tuples in that order."""

    torsion: tuple[int, ...]
    free_rank: int = 0

    @property
    def order(self) -> int | float:
        if self.free_rank:
            return float("inf")
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def zero(self) -> tuple[int, ...]:
        return (0,) * (len(self.torsion) + self.free_rank)

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        t = len(self.torsion)
        tors = tuple((x + y) % d for x, y, d in zip(a[:t], b[:t], self.torsion))
        return tors + tuple(x + y for x, y in zip(a[t:], b[t:]))

    def is_element(self, a: Sequence[int]) -> bool:
        t = len(self.torsion)
        return len(a) == t + self.free_rank and all(
            0 <= x < d for x, d in zip(a[:t], self.torsion)
        )

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " x ".join(parts) or "trivial"


@dataclass(frozen=True, eq=False)
class GroupGrading:
    group: AbelianGroup
    assignment: tuple[tuple[int, ...], ...]
    underlying: SetGrading

    def __post_init__(self):
        comps = len(self.underlying.components)
        if len(self.assignment) != comps:
            raise InputError("one group element per component expected")
        if comps > self.group.order:
            raise InputError(
                f"{comps} components cannot be labeled injectively by a group of order "
                f"{self.group.order}"
            )
        for a in self.assignment:
            if not self.group.is_element(a):
                raise InputError(f"{a} is not an element of {self.group.describe()}")
        if len(set(self.assignment)) != comps:
            raise InputError("labeling is not injective")


def verify_group_grading(gg: GroupGrading) -> Counterexample | None:
    """Check [L_g, L_h] in L_{g+h}, and zero when g+h labels no component."""
    where = {lab: c for c, lab in enumerate(gg.assignment)}
    for (a, b), hit in component_products(gg.underlying).items():
        target = gg.group.add(gg.assignment[a], gg.assignment[b])
        c = where.get(target)
        if c is None or hit != {c}:
            return Counterexample(a, b, tuple(sorted(hit)), expected_label=target)
    return None


def two_q(n: int) -> Lattice:
    return root_lattice(n).scaled(2)


def _check_between(n: int, E: Lattice) -> None:
    if E.ambient_rank != n:
        raise InputError(f"subgroup lives in Z^{E.ambient_rank}, expected Z^{n}")
    if not (is_sublattice(two_q(n), E) and is_sublattice(E, root_lattice(n))):
        raise PreconditionError("the subgroup must satisfy 2Q <= E <= Q")


def grading_from_subgroup(n: int, E: Lattice) -> GroupGrading:
    """The pure grading by (Q/E) x Z/2 attached to 2Q <= E <= Q."""
    _check_between(n, E)
    basis = adapted_basis(n)
    quo = quotient(E, root_lattice(n))
    group = AbelianGroup(tuple(quo.invariant_factors) + (2,))
    zero = quo.coords((0,) * n)
    members: dict[tuple[int, ...], list[int]] = {(*zero, 1): list(range(n))}
    for a in build_root_system(n).positive_roots:
        q = quo.coords(a)
        members.setdefault((*q, 0), []).append(basis.index_of(a, "+"))
        members.setdefault((*q, 1), []).append(basis.index_of(a, "-"))
    ordered = sorted(members.items(), key=lambda kv: min(kv[1]))
    comps = tuple(tuple(v) for _, v in ordered)
    labels = tuple(k for k, _ in ordered)
    g = SetGrading(basis, comps, labels)
    return GroupGrading(group, labels, g)


def ecirc(n: int, E: Lattice) -> Lattice:
    """2Q + Z(positive roots in E) + Z(differences of positive roots lying in E)."""
    _check_between(n, E)
    quo = quotient(E, root_lattice(n))
    zero = quo.coords((0,) * n)
    rows = [list(r) for r in two_q(n).basis]
    first: dict[tuple[int, ...], Root] = {}
    for a in build_root_system(n).positive_roots:
        q = quo.coords(a)
        if q == zero:
            rows.append(list(a))
        if q in first:
            rows.append([x - y for x, y in zip(a, first[q])])
        else:
            first[q] = a
    return lattice_from_rows(rows, n)


def e_from_grading(g: SetGrading) -> Lattice:
    """2Q + Z{a : y-_a shares the Cartan's component} + Z{a - b : y^s_a, y^s_b share a component}."""
    basis = g.basis
    if not isinstance(basis, AdaptedBasis):
        raise PreconditionError("E is read off gradings on the adapted basis")
    cart = g.cartan_component()
    if cart is None:
        raise PreconditionError("the Cartan subalgebra is not inside one component")
    n = g.n
    rows = [list(r) for r in two_q(n).basis]
    for c, comp in enumerate(g.components):
        firsts: dict[str, Root] = {}
        for k in comp:
            if k < n:
                continue
            alpha, sign = basis.labels[k]
            if c == cart and sign == "-":
                rows.append(list(alpha))
            if sign in firsts:
                rows.append([x - y for x, y in zip(alpha, firsts[sign])])
            else:
                firsts[sign] = alpha
    return lattice_from_rows(rows, n)


def diag_invariants(g: SetGrading) -> list[int]:
    """Invariant factors of Q/E (+) Z/2, E = :func:`e_from_grading`; the diagonal group."""
    E = e_from_grading(g)
    factors = list(quotient(E, root_lattice(g.n)).invariant_factors) + [2]
    diag = [[d if i == j else 0 for j in range(len(factors))] for i, d in enumerate(factors)]
    divs = elementary_divisors(diag)
    return [d for d in divs if d > 1]


# ---------------------------------------------------------------------------
# Diagonal action


def component_scalars(
    g: SetGrading, phi: Callable[[OrthoElement], OrthoElement]
) -> list[Scalar] | None:
    """The scalar by which ``phi`` acts on each component, or None if it does not."""
    out = []
    for comp in g.components:
        lam = None
        for k in comp:
            v = g.basis.vectors[k]
            im = g.basis.coordinates(phi(v))
            if set(im) != {k}:
                return None
            if lam is None:
                lam = im[k]
            elif im[k] != lam:
                return None
        out.append(lam)
    return out


def line_sum_matrix(d: Design) -> list[list[int]]:
    """Rows 2 * simple roots, then the indicator vector of every block."""
    n = d.n
    rows = [[2 * x for x in a] for a in build_root_system(n).simple_roots]
    for b in d.blocks:
        rows.append([int(i + 1 in b) for i in range(n)])
    return rows


def parse_subgroup(text: str) -> tuple[int, Lattice]:
    """Read ``n`` and integer rows; the subgroup is 2Q plus the span of the rows."""
    n = None
    rows: list[list[int]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise InputError(f"line {no}: non-integer token") from None
        if n is None:
            if len(nums) != 1 or nums[0] < 2:
                raise InputError(f"line {no}: expected the rank n >= 2")
            n = nums[0]
            continue
        if len(nums) != n:
            raise InputError(f"line {no}: expected {n} coordinates, found {len(nums)}")
        rows.append(nums)
    if n is None:
        raise InputError("empty subgroup file")
    return n, lattice_from_rows([list(r) for r in two_q(n).basis] + rows, n)


def write_subgroup(n: int, rows) -> str:
    return "".join([f"{n}\n"] + [" ".join(map(str, r)) + "\n" for r in rows])
