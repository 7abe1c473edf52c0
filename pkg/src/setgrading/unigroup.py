"""The abelianized universal group of a set grading and the realizability verdict.

Generators are the components; each nonzero bracket [L_a, L_b] <= L_c gives
the relation a + b - c = 0.  Simple Lie algebras have abelian universal
groups, so the abelianization is the whole story.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError
from .gradings import (
    AbelianGroup,
    GroupGrading,
    SetGrading,
    component_products,
    verify_group_grading,
)
from .lattice import hermite_rows, smith_normal_form

Relation = tuple[tuple[int, int], ...]  # sorted (generator, coefficient) pairs


@dataclass(frozen=True)
class AbelianPresentation:
    generator_count: int
    relations: tuple[Relation, ...]

    def matrix(self) -> list[list[int]]:
        out = []
        for rel in self.relations:
            row = [0] * self.generator_count
            for g, c in rel:
                row[g] = c
            out.append(row)
        return out

    @classmethod
    def from_rows(cls, generator_count: int, rows: Sequence[Sequence[int]]) -> AbelianPresentation:
        rels = {tuple((g, c) for g, c in enumerate(r) if c) for r in rows}
        rels.discard(())
        return cls(generator_count, tuple(sorted(rels)))


@dataclass(frozen=True)
class UniversalGroupResult:
    free_rank: int
    invariant_factors: tuple[int, ...]
    images: tuple[tuple[int, ...], ...]

    @property
    def group(self) -> AbelianGroup:
        return AbelianGroup(self.invariant_factors, self.free_rank)


def relations_from_grading(g: SetGrading) -> AbelianPresentation:
    """One relation a + b - c per unordered component pair with nonzero bracket."""
    rels = set()
    for (a, b), hit in component_products(g).items():
        if len(hit) != 1:
            raise PreconditionError(f"not a set grading: [C{a}, C{b}] meets {sorted(hit)}")
        (c,) = hit
        row: dict[int, int] = {}
        for k, v in ((a, 1), (b, 1), (c, -1)):
            row[k] = row.get(k, 0) + v
        rel = tuple(sorted((k, v) for k, v in row.items() if v))
        if rel:
            rels.add(rel)
    return AbelianPresentation(len(g.components), tuple(sorted(rels)))


def _eliminate(p: AbelianPresentation):
    """Drop generators through relations with a +-1 coefficient.

    Returns the surviving generators, the remaining relations over them, and
    for each eliminated generator its expression in generators eliminated
    later or surviving, in elimination order.
    """
    rels: dict[int, dict[int, int]] = {i: dict(r) for i, r in enumerate(p.relations)}
    occ: dict[int, set[int]] = {g: set() for g in range(p.generator_count)}
    for i, r in rels.items():
        for g in r:
            occ[g].add(i)
    eliminated: list[tuple[int, dict[int, int]]] = []
    progress = True
    while progress:
        progress = False
        for rid in sorted(rels, key=lambda i: len(rels[i])):
            rel = rels.get(rid)
            if rel is None:
                continue
            units = [g for g, c in rel.items() if abs(c) == 1]
            if not units:
                continue
            g = min(units, key=lambda u: (len(occ[u]), u))
            c = rel[g]
            expr = {h: -c * v for h, v in rel.items() if h != g}
            del rels[rid]
            for h in rel:
                occ[h].discard(rid)
            for other in sorted(occ[g]):
                r2 = rels[other]
                k = r2.pop(g)
                for h, v in expr.items():
                    w = r2.get(h, 0) + k * v
                    if w:
                        if h not in r2:
                            occ[h].add(other)
                        r2[h] = w
                    elif h in r2:
                        del r2[h]
                        occ[h].discard(other)
                if not r2:
                    del rels[other]
            del occ[g]
            eliminated.append((g, expr))
            progress = True
    survivors = sorted(occ)
    return survivors, list(rels.values()), eliminated


def _solve(p: AbelianPresentation) -> UniversalGroupResult:
    survivors, rels, eliminated = _eliminate(p)
    pos = {g: k for k, g in enumerate(survivors)}
    m = len(survivors)
    dense = []
    for r in rels:
        row = [0] * m
        for g, c in r.items():
            row[pos[g]] = c
        dense.append(row)
    # Only the row span matters; the Hermite basis has at most m rows.
    snf = smith_normal_form(hermite_rows(dense, m), ncols=m)
    diag = snf.diagonal
    rank = snf.rank
    tors_slots = [i for i in range(rank) if diag[i] > 1]
    factors = tuple(diag[i] for i in tors_slots)

    vec: dict[int, dict[int, int]] = {g: {pos[g]: 1} for g in survivors}
    for g, expr in reversed(eliminated):
        acc: dict[int, int] = {}
        for h, c in expr.items():
            for k, v in vec[h].items():
                acc[k] = acc.get(k, 0) + c * v
        vec[g] = {k: v for k, v in acc.items() if v}

    V = snf.V
    images = []
    for g in range(p.generator_count):
        x = vec[g]
        y = [sum(v * V[k][j] for k, v in x.items()) for j in range(m)]
        tors = tuple(y[s] % d for s, d in zip(tors_slots, factors))
        images.append(tors + tuple(y[rank:]))
    return UniversalGroupResult(m - rank, factors, tuple(images))


def abelian_invariants(p: AbelianPresentation) -> tuple[int, list[int]]:
    """``(free_rank, invariant_factors)`` of Z^generators / span(relations)."""
    res = _solve(p)
    return res.free_rank, list(res.invariant_factors)


def generator_images(p: AbelianPresentation) -> list[tuple[int, ...]]:
    """Image of each generator: torsion coordinates mod d_i, then free coordinates."""
    return list(_solve(p).images)


def universal_group(p: AbelianPresentation) -> UniversalGroupResult:
    return _solve(p)


@dataclass(frozen=True)
class Realizable:
    grading: GroupGrading
    universal: UniversalGroupResult
    realizable: bool = True


@dataclass(frozen=True)
class NotRealizable:
    """``certificate`` holds two distinct components with the same image."""

    certificate: tuple[int, int]
    image: tuple[int, ...]
    universal: UniversalGroupResult
    realizable: bool = False


def first_collision(images: Sequence[tuple[int, ...]]) -> tuple[int, int] | None:
    first: dict[tuple[int, ...], int] = {}
    best = None
    for j, im in enumerate(images):
        i = first.setdefault(im, j)
        if i != j and (best is None or (i, j) < best):
            best = (i, j)
    return best


def realizability_verdict(g: SetGrading) -> Realizable | NotRealizable:
    if g.n < 3:
        raise PreconditionError("so(4) is not simple; the abelian reduction does not apply")
    res = _solve(relations_from_grading(g))
    hit = first_collision(res.images)
    if hit is not None:
        return NotRealizable(hit, res.images[hit[0]], res)
    gg = GroupGrading(res.group, res.images, g)
    bad = verify_group_grading(gg)
    if bad is not None:  # relations encode every nonzero bracket, so this cannot happen
        raise RuntimeError(f"induced labeling is not a grading: {bad.describe()}")
    return Realizable(gg, res)
