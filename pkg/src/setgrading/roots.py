"""The root system of type D_n in epsilon coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import InputError, PreconditionError
from .lattice import Lattice, full_lattice, lattice_from_rows

Root = tuple[int, ...]


def eps(n: int, *terms: int) -> Root:
    """Vector with the given signed 1-based epsilon indices, e.g. ``eps(4, 1, -2)``."""
    v = [0] * n
    for t in terms:
        v[abs(t) - 1] += 1 if t > 0 else -1
    return tuple(v)


def is_root(v: Sequence[int]) -> bool:
    nz = [x for x in v if x]
    return len(nz) == 2 and all(abs(x) == 1 for x in nz)


def inner(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise InputError("vectors of different length")
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class RootSystemD:
    n: int
    positive_roots: tuple[Root, ...]
    simple_roots: tuple[Root, ...]

    @property
    def roots(self) -> tuple[Root, ...]:
        return self.positive_roots + tuple(tuple(-x for x in a) for a in self.positive_roots)

    def position(self, alpha: Sequence[int]) -> int:
        """Index of a positive root in :attr:`positive_roots`."""
        return _positions(self.n)[tuple(alpha)]

    def simple_coordinates(self, v: Sequence[int]) -> list[int]:
        """Coefficients of ``v`` in the simple roots; ``v`` must lie in Q."""
        n = self.n
        if len(v) != n:
            raise InputError(f"vector of length {len(v)}; expected {n}")
        if sum(v) % 2:
            raise PreconditionError(f"{list(v)} is not in the root lattice")
        c, s = [], 0
        for k in range(n - 2):
            s += v[k]
            c.append(s)
        c.append((s + v[n - 2] - v[n - 1]) // 2)
        c.append((s + v[n - 2] + v[n - 1]) // 2)
        return c


@lru_cache(maxsize=None)
def build_root_system(n: int) -> RootSystemD:
    if n < 2:
        raise InputError("type D_n needs n >= 2")
    pos = [eps(n, i, -j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    pos += [eps(n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    simple = [eps(n, i, -(i + 1)) for i in range(1, n)] + [eps(n, n - 1, n)]
    return RootSystemD(n, tuple(pos), tuple(simple))


@lru_cache(maxsize=None)
def _positions(n: int) -> dict[Root, int]:
    return {a: k for k, a in enumerate(build_root_system(n).positive_roots)}


@lru_cache(maxsize=None)
def root_lattice(n: int) -> Lattice:
    return lattice_from_rows(build_root_system(n).simple_roots, n)


def weight_lattice(n: int) -> Lattice:
    """The lattice spanned by the weights of the natural module, all of Z^n."""
    if n < 2:
        raise InputError("type D_n needs n >= 2")
    return full_lattice(n)
