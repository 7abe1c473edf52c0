"""Steiner systems S(2,4,n): validation, difference families, search and file I/O.

Points are 1-based.  Difference families live in a finite abelian group
Z_{m1} x ... x Z_{mk}, given by its moduli; the cyclic group ``(n,)`` is the
default.  Group elements are numbered in lexicographic order of their
coordinate tuples, so in the cyclic case residue r becomes point r + 1.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError

Block = tuple[int, int, int, int]

PG23_LINES: tuple[Block, ...] = (
    (1, 2, 3, 4), (1, 5, 6, 7), (1, 8, 9, 10), (1, 11, 12, 13),
    (2, 5, 8, 11), (2, 6, 9, 12), (2, 7, 10, 13),
    (3, 5, 9, 13), (3, 6, 10, 11), (3, 7, 8, 12),
    (4, 5, 10, 12), (4, 6, 8, 13), (4, 7, 9, 11),
)  # fmt: skip


@dataclass(frozen=True)
class Design:
    n: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(p) for p in b) for b in self.blocks)
        for b in blocks:
            if len(b) != 4 or any(b[i] >= b[i + 1] for i in range(3)):
                raise InputError(f"block {b} is not four strictly increasing points")
        object.__setattr__(self, "blocks", blocks)


@dataclass(frozen=True)
class Violation:
    """Why a design fails to be an S(2,4,n).

    ``kind`` is ``"uncovered_pair"``, ``"repeated_pair"`` or ``"block_count"``.
    """

    kind: str
    pair: tuple[int, int] | None = None
    blocks: tuple[Block, ...] = ()
    expected: float | None = None
    actual: int | None = None

    def describe(self) -> str:
        if self.kind == "uncovered_pair":
            return f"pair {set(self.pair)} lies in no block"
        if self.kind == "repeated_pair":
            listed = ", ".join(str(set(b)) for b in self.blocks)
            return f"pair {set(self.pair)} lies in several blocks: {listed}"
        return f"block count {self.actual}, expected n(n-1)/12 = {self.expected:g}"


def pg2_f3() -> Design:
    """The 13 lines of the projective plane over GF(3)."""
    return Design(13, PG23_LINES)


def validate(d: Design) -> Violation | None:
    """Return None for a Steiner system S(2,4,n), else the first violation found."""
    for b in d.blocks:
        for p in b:
            if not 1 <= p <= d.n:
                raise InputError(f"point {p} of block {b} outside 1..{d.n}")
    cover: dict[tuple[int, int], list[Block]] = {}
    for b in d.blocks:
        for pair in itertools.combinations(b, 2):
            cover.setdefault(pair, []).append(b)
    for pair in itertools.combinations(range(1, d.n + 1), 2):
        hits = cover.get(pair, [])
        if not hits:
            return Violation("uncovered_pair", pair=pair)
        if len(hits) > 1:
            return Violation("repeated_pair", pair=pair, blocks=tuple(hits))
    if 12 * len(d.blocks) != d.n * (d.n - 1):
        return Violation("block_count", expected=d.n * (d.n - 1) / 12, actual=len(d.blocks))
    return None


def admissible(n: int) -> bool:
    if n < 4:
        raise PreconditionError("admissibility is defined for n >= 4")
    return n % 12 in (1, 4)


def points_per_point(d: Design) -> dict[int, int]:
    """How many blocks contain each point."""
    c = Counter(p for b in d.blocks for p in b)
    return {p: c[p] for p in range(1, d.n + 1)}


# ---------------------------------------------------------------------------
# Difference families


def _group(n: int, moduli: Sequence[int] | None) -> tuple[int, ...]:
    moduli = (n,) if moduli is None else tuple(int(m) for m in moduli)
    if any(m < 1 for m in moduli) or prod(moduli) != n:
        raise InputError(f"moduli {moduli} do not describe a group of order {n}")
    return moduli


def _as_elem(x, moduli) -> tuple[int, ...]:
    t = (x,) if isinstance(x, int) else tuple(x)
    if len(t) != len(moduli):
        raise InputError(f"element {x} does not match moduli {moduli}")
    return tuple(a % m for a, m in zip(t, moduli))


def _present(e: tuple[int, ...], moduli) -> int | tuple[int, ...]:
    return e[0] if len(moduli) == 1 else e


def _sub(a, b, moduli):
    return tuple((x - y) % m for x, y, m in zip(a, b, moduli))


def _add(a, b, moduli):
    return tuple((x + y) % m for x, y, m in zip(a, b, moduli))


def _elements(moduli) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(m) for m in moduli)))


def _point(e, moduli) -> int:
    k = 0
    for x, m in zip(e, moduli):
        k = k * m + x
    return k + 1


def differences(block: Iterable, moduli: Sequence[int]) -> list[tuple[int, ...]]:
    b = [_as_elem(x, moduli) for x in block]
    return [_sub(x, y, moduli) for x in b for y in b if x != y]


def develop_difference_family(
    n: int, base_blocks: Sequence[Sequence], moduli: Sequence[int] | None = None
) -> Design:
    """Develop base blocks by all translations of the group into an S(2,4,n)."""
    moduli = _group(n, moduli)
    bases = [[_as_elem(x, moduli) for x in b] for b in base_blocks]
    for b in bases:
        if len(b) != 4 or len(set(b)) != 4:
            raise InputError(f"base block {b} does not have four distinct elements")
    counts = Counter(d for b in bases for d in differences(b, moduli))
    for e in _elements(moduli)[1:]:
        if counts[e] != 1:
            raise InputError(
                f"residue {_present(e, moduli)} is covered {counts[e]} times; "
                "every nonzero residue must be covered exactly once"
            )
    blocks = []
    for b in bases:
        for t in _elements(moduli):
            blocks.append(tuple(sorted(_point(_add(x, t, moduli), moduli) for x in b)))
    d = Design(n, tuple(blocks))
    bad = validate(d)
    if bad is not None:  # unreachable when the difference condition holds
        raise RuntimeError(f"developed design is not a Steiner system: {bad.describe()}")
    return d


@dataclass(frozen=True)
class DifferenceFamily:
    n: int
    moduli: tuple[int, ...]
    base_blocks: tuple[tuple, ...]

    def develop(self) -> Design:
        return develop_difference_family(self.n, self.base_blocks, self.moduli)


def abelian_groups(n: int) -> list[tuple[int, ...]]:
    """Invariant-factor tuples of all abelian groups of order n, cyclic first."""
    if n < 1:
        raise InputError("group order must be positive")
    fac = Counter()
    m, p = n, 2
    while p * p <= m:
        while m % p == 0:
            fac[p] += 1
            m //= p
        p += 1
    if m > 1:
        fac[m] += 1
    per_prime = [[(p, part) for part in _partitions(k)] for p, k in sorted(fac.items())]
    out = []
    for combo in itertools.product(*per_prime):
        length = max((len(part) for _, part in combo), default=1)
        factors = []
        for j in range(length):
            factors.append(prod(p ** part[j] for p, part in combo if j < len(part)))
        out.append(tuple(factors))
    out.sort(key=lambda g: (len(g), [-x for x in g]))
    return out or [(1,)]


def _partitions(k: int, largest: int | None = None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def _candidates(moduli, seed):
    """Blocks {0, r, a, b} with 12 distinct differences, indexed by each r they contain."""
    elems = _elements(moduli)
    zero = elems[0]
    by_elem: dict[tuple, list] = {}
    for trio in itertools.combinations(elems[1:], 3):
        blk = (zero,) + trio
        ds = differences(blk, moduli)
        if len(set(ds)) == 12:
            fs = frozenset(ds)
            for x in trio:
                by_elem.setdefault(x, []).append((blk, fs))
    if seed:
        rng = random.Random(seed)
        for lst in by_elem.values():
            rng.shuffle(lst)
    return elems, by_elem


def _backtrack(elems, by_elem, need, covered, chosen):
    if len(chosen) == need:
        return chosen
    r = next(e for e in elems[1:] if e not in covered)
    # Translate the next block so that it contains 0 and r.
    for blk, ds in by_elem.get(r, ()):
        if ds.isdisjoint(covered):
            found = _backtrack(elems, by_elem, need, covered | ds, chosen + [blk])
            if found:
                return found
    return None


def _search_branch(args):
    moduli, seed, first = args
    elems, by_elem = _candidates(moduli, seed)
    blk, ds = first
    n = prod(moduli)
    return _backtrack(elems, by_elem, (n - 1) // 12, ds, [blk])


def _search_group(n, moduli, seed, executor):
    elems, by_elem = _candidates(moduli, seed)
    need = (n - 1) // 12
    if executor is None:
        found = _backtrack(elems, by_elem, need, frozenset(), [])
    else:
        # Top-level branches are independent; any executor with a map() will do.
        r = elems[1]
        branches = [(moduli, seed, c) for c in by_elem.get(r, ())]
        found = next((f for f in executor.map(_search_branch, branches) if f), None)
    if not found:
        return None
    bases = tuple(sorted(tuple(_present(e, moduli) for e in sorted(b)) for b in found))
    return DifferenceFamily(n, moduli, bases)


def search_base_blocks(
    n: int, moduli: Sequence[int] | None = None, seed: int = 0, executor=None
) -> DifferenceFamily | None:
    """Backtracking search for an (n, 4, 1) difference family.

    With ``moduli=None`` every abelian group of order n is tried, cyclic
    first.  Returns None when no family exists in the groups searched.
    ``seed=0`` keeps the lexicographic order; other seeds shuffle candidates.
    """
    if n % 12 != 1:
        raise PreconditionError(f"difference families with 4-element blocks need n = 1 mod 12, got {n}")
    groups = abelian_groups(n) if moduli is None else [_group(n, moduli)]
    for g in groups:
        found = _search_group(n, g, seed, executor)
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# File format


def parse_design(text: str) -> Design:
    n = None
    blocks: list[Block] = []
    seen: dict[Block, int] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(t) for t in parts]
        except ValueError:
            raise InputError(f"line {no}: non-integer token") from None
        if n is None:
            if len(nums) != 1 or nums[0] < 1:
                raise InputError(f"line {no}: expected the point count n")
            n = nums[0]
            continue
        if len(nums) != 4 or any(nums[i] >= nums[i + 1] for i in range(3)):
            raise InputError(f"line {no}: expected four strictly increasing points")
        if nums[0] < 1 or nums[3] > n:
            raise InputError(f"line {no}: point out of range 1..{n}")
        b = tuple(nums)
        if b in seen:
            raise InputError(f"line {no}: duplicate block (first seen on line {seen[b]})")
        seen[b] = no
        blocks.append(b)
    if n is None:
        raise InputError("empty design file")
    return Design(n, tuple(blocks))


def write_design(d: Design) -> str:
    return "".join([f"{d.n}\n"] + [" ".join(map(str, b)) + "\n" for b in d.blocks])
