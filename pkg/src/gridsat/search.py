"""Exhaustive enumeration of induced P-saturated families.

Families are grown by depth-first search over grid indices in increasing
order, so families of a fixed size come out in lexicographic order of their
sorted point lists. P-freeness is hereditary, so a branch dies as soon as
the newest point closes a copy.

Symmetry breaking (optional) uses coordinate permutations only. Every orbit
contains a family whose least point ``v`` is sorted non-decreasingly and
whose other points all have a sorted form that is lexicographically at
least ``v``; the lexicographically least family of any size already has
this form, so the first hit is still the global least.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import ResourceCap
from .family import Family, first_unblocked
from .grid import Grid, GridShape, get_grid, leq
from .poset import AnchoredSearch, Poset


class BudgetExceeded(ResourceCap):
    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search budget of {nodes} nodes exhausted")


@dataclass
class Counter:
    nodes: int = 0
    budget: int | None = None

    def tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(self.budget)


def _symmetry_tables(grid: Grid) -> tuple[list[bool], list[tuple[int, ...]]]:
    keys = [tuple(sorted(f)) for f in grid.points]
    canonical = [tuple(f) == k for f, k in zip(grid.points, keys)]
    return canonical, keys


def iter_free_families(
    p: Poset,
    shape: GridShape,
    size: int,
    *,
    symmetric: bool = False,
    counter: Counter | None = None,
) -> Iterator[int]:
    """Masks of induced P-free families of exactly ``size`` points, lex order."""
    grid = get_grid(shape)
    search = AnchoredSearch(p)
    host = grid.host
    total = len(grid.points)
    counter = counter or Counter()
    if size == 0:
        yield 0
        return
    if symmetric:
        canonical, keys = _symmetry_tables(grid)

    def rec(mask: int, start: int, left: int, floor_key):
        for x in range(start, total - left + 1):
            if symmetric and keys[x] < floor_key:
                continue
            counter.tick()
            if search.exists(host, mask, x):
                continue
            m = mask | (1 << x)
            if left == 1:
                yield m
            else:
                yield from rec(m, x + 1, left - 1, floor_key)

    if symmetric:
        for x in range(0, total - size + 1):
            if not canonical[x]:
                continue
            counter.tick()
            if search.exists(host, 0, x):
                continue
            if size == 1:
                yield 1 << x
            else:
                yield from rec(1 << x, x + 1, size - 1, keys[x])
    else:
        yield from rec(0, 0, size, None)


def iter_saturated(
    p: Poset,
    shape: GridShape,
    size: int,
    *,
    symmetric: bool = False,
    counter: Counter | None = None,
) -> Iterator[int]:
    """Masks of induced P-saturated families of exactly ``size`` points.

    Besides hereditary freeness, a branch is cut when some skipped point
    cannot be blocked even if every remaining candidate were added: blocking
    is monotone under adding points, and the candidate pool only shrinks.
    """
    grid = get_grid(shape)
    search = AnchoredSearch(p)
    host = grid.host
    total = len(grid.points)
    counter = counter or Counter()
    full = grid.full
    if size == 0:
        if first_unblocked(grid, search, 0) is None:
            yield 0
        return
    if symmetric:
        canonical, keys = _symmetry_tables(grid)

    def blocked(mask: int, y: int) -> bool:
        return search.exists(host, mask, y)

    killer = [-1]  # last point found unblocked at a leaf; tried first next time

    def saturated(mask: int) -> bool:
        k = killer[0]
        if k >= 0 and not mask >> k & 1 and not blocked(mask, k):
            return False
        x = first_unblocked(grid, search, mask)
        if x is None:
            return True
        killer[0] = x
        return False

    def rec(mask: int, start: int, left: int, floor_key):
        # the pool available to a skipped point is mask | rest; children keep
        # their parent's pool, so only newly skipped points need a test
        rest = full >> start << start
        for x in range(start, total - left + 1):
            if x > start:
                y = x - 1
                rest ^= 1 << y
                if not blocked(mask, y) and not blocked(mask | rest, y):
                    return
            if symmetric and floor_key is not None and keys[x] < floor_key:
                continue
            if symmetric and floor_key is None and not canonical[x]:
                continue
            counter.tick()
            if search.exists(host, mask, x):
                continue
            m = mask | (1 << x)
            if left == 1:
                if saturated(m):
                    yield m
            else:
                key = keys[x] if symmetric and floor_key is None else floor_key
                yield from rec(m, x + 1, left - 1, key)

    yield from rec(0, 0, size, None)


def enumerate_saturated(
    p: Poset,
    shape: GridShape,
    max_size: int,
    *,
    min_size: int = 0,
    symmetric: bool = False,
    counter: Counter | None = None,
) -> Iterator[Family]:
    """Every saturated family with ``min_size <= |F| <= max_size``, smallest first."""
    grid = get_grid(shape)
    for m in range(min_size, max_size + 1):
        for mask in iter_saturated(p, shape, m, symmetric=symmetric, counter=counter):
            yield Family.from_mask(grid, mask)


# ---------------------------------------------------------------------------
# independent oracle


def _copy_sets(p: Poset, points: list) -> list[int]:
    """Masks of all |P|-subsets that induce a copy of ``p`` (brute force)."""
    out = []
    k = p.size
    for combo in itertools.combinations(range(len(points)), k):
        for perm in itertools.permutations(combo):
            if all(
                p.less[a][b] == leq(points[perm[a]], points[perm[b]])
                for a in range(k)
                for b in range(k)
                if a != b
            ):
                out.append(sum(1 << c for c in combo))
                break
    return out


def naive_saturated_families(p: Poset, shape: GridShape, cap: int = 16) -> list[tuple]:
    """All induced P-saturated families, by scanning every subset of the grid.

    Returns sorted point tuples. Only for grids of at most ``cap`` points.
    """
    points = list(itertools.product(range(1, shape.t + 1), repeat=shape.n))
    N = len(points)
    if N > cap:
        raise ResourceCap(f"naive oracle limited to {cap} points, {shape} has {N}")
    by_top: list[list[int]] = [[] for _ in range(N)]
    for c in _copy_sets(p, points):
        by_top[c.bit_length() - 1].append(c)
    free = bytearray(1 << N)
    free[0] = 1
    for mask in range(1, 1 << N):
        top = mask.bit_length() - 1
        rest = mask ^ (1 << top)
        if free[rest] and not any(c & mask == c for c in by_top[top]):
            free[mask] = 1
    out = []
    for mask in range(1 << N):
        if not free[mask]:
            continue
        if all(free[mask | (1 << x)] == 0 for x in range(N) if not mask >> x & 1):
            out.append(tuple(sorted(points[x] for x in range(N) if mask >> x & 1)))
    out.sort(key=lambda fam: (len(fam), fam))
    return out


def naive_sat_min(p: Poset, shape: GridShape, cap: int = 16) -> tuple[int, list[tuple]]:
    """Minimum size and all minimum saturated families, by the subset scan."""
    fams = naive_saturated_families(p, shape, cap)
    if not fams:
        raise ValueError("no saturated family found")
    m = len(fams[0])
    return m, [f for f in fams if len(f) == m]
