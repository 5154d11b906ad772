"""The hypergrid ``[t]^n`` and its coordinate operators.

Points are plain tuples of ints in ``1..t``. Coordinates are 1-based in every
public function, matching the usual mathematical notation; storage is 0-based.

``Grid`` is the exhaustive view of one shape: all points in lexicographic
order, their dense mixed-radix rank, and bitmasks of the points strictly
above and below each point.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, ResourceCap, ShapeMismatch
from .poset import Host

Point = tuple[int, ...]

#: exhaustive routines refuse grids with more points than this
EXHAUSTIVE_CAP = 1 << 26


@dataclass(frozen=True, order=True)
class GridShape:
    t: int
    n: int

    def __post_init__(self):
        if self.t < 2:
            raise ValueError(f"alphabet size t must be >= 2, got {self.t}")
        if self.n < 1:
            raise ValueError(f"dimension n must be >= 1, got {self.n}")

    @property
    def size(self) -> int:
        return self.t**self.n

    def check_point(self, f: Sequence[int]) -> Point:
        f = tuple(f)
        if len(f) != self.n:
            raise ShapeMismatch(f"point {f} has length {len(f)}, expected {self.n}")
        for v in f:
            if not 1 <= v <= self.t:
                raise ValueError(f"point {f} has entry {v} outside 1..{self.t}")
        return f

    def rank(self, f: Sequence[int]) -> int:
        r = 0
        for v in f:
            r = r * self.t + (v - 1)
        return r

    def unrank(self, r: int) -> Point:
        out = []
        for _ in range(self.n):
            r, v = divmod(r, self.t)
            out.append(v + 1)
        return tuple(reversed(out))

    def points(self) -> Iterator[Point]:
        return itertools.product(range(1, self.t + 1), repeat=self.n)

    def bottom(self) -> Point:
        return (1,) * self.n

    def top(self) -> Point:
        return (self.t,) * self.n

    def __str__(self) -> str:
        return f"[{self.t}]^{self.n}"


def _same_length(f: Sequence[int], g: Sequence[int]) -> None:
    if len(f) != len(g):
        raise ShapeMismatch(f"points of different dimension: {tuple(f)} vs {tuple(g)}")


def _coord(i: int, n: int) -> int:
    if not 1 <= i <= n:
        raise IndexError(f"coordinate {i} outside 1..{n}")
    return i - 1


def leq(f: Sequence[int], g: Sequence[int]) -> bool:
    _same_length(f, g)
    return all(a <= b for a, b in zip(f, g))


def less(f: Sequence[int], g: Sequence[int]) -> bool:
    return leq(f, g) and tuple(f) != tuple(g)


def comparable(f: Sequence[int], g: Sequence[int]) -> bool:
    return leq(f, g) or leq(g, f)


def leq_restricted(f: Sequence[int], g: Sequence[int], coords: Iterable[int]) -> bool:
    """Pointwise ``<=`` on the given (1-based) coordinates only."""
    _same_length(f, g)
    n = len(f)
    return all(f[_coord(i, n)] <= g[_coord(i, n)] for i in coords)


def lift(f: Sequence[int], i: int) -> Point:
    """Append a copy of coordinate ``i`` as a new last coordinate."""
    f = tuple(f)
    return f + (f[_coord(i, len(f))],)


def drop(f: Sequence[int], i: int) -> Point:
    """Remove coordinate ``i``."""
    f = tuple(f)
    if len(f) == 1:
        raise DimensionError("cannot drop the only coordinate")
    k = _coord(i, len(f))
    return f[:k] + f[k + 1 :]


def deflate(f: Sequence[int], i: int, j: int, t: int) -> Point:
    """Lower coordinate ``i`` from ``j`` to ``j-1`` when it equals ``j``."""
    if not 2 <= j <= t - 1:
        raise ValueError(f"deflate value j={j} outside 2..{t - 1}")
    f = tuple(f)
    k = _coord(i, len(f))
    if f[k] != j:
        return f
    return f[:k] + (j - 1,) + f[k + 1 :]


def bump(f: Sequence[int], i: int, t: int) -> Point:
    """Raise coordinate ``i`` by one, saturating at ``t``."""
    f = tuple(f)
    k = _coord(i, len(f))
    if f[k] >= t:
        return f
    return f[:k] + (f[k] + 1,) + f[k + 1 :]


def cube_embed(f: Sequence[int], t: int) -> Point:
    """Order embedding of ``[t]^n`` into ``[2]^{(t-1)n}``.

    Block ``i`` has ``t-1`` entries; entry ``j`` is 1 when ``f(i) <= j`` and 2
    otherwise.
    """
    return tuple(1 if v <= j else 2 for v in f for j in range(1, t))


def layer(shape: GridShape, r: int) -> Iterator[Point]:
    """Points with coordinate sum ``r``, in lexicographic order."""
    t, n = shape.t, shape.n
    if r < n or r > t * n:
        return

    def rec(prefix: tuple[int, ...], remaining: int, left: int):
        if left == 0:
            if remaining == 0:
                yield prefix
            return
        lo = max(1, remaining - t * (left - 1))
        hi = min(t, remaining - (left - 1))
        for v in range(lo, hi + 1):
            yield from rec(prefix + (v,), remaining - v, left - 1)

    yield from rec((), r, n)


def top_layers(shape: GridShape, h: int) -> Iterator[Point]:
    """Union of the ``h`` highest layers, in lexicographic order."""
    lo = shape.t * shape.n - h + 1
    return (f for f in shape.points() if sum(f) >= lo) if h > 0 else iter(())


def bottom_layers(shape: GridShape, h: int) -> Iterator[Point]:
    """Union of the ``h`` lowest layers, in lexicographic order."""
    hi = shape.n + h - 1
    return (f for f in shape.points() if sum(f) <= hi) if h > 0 else iter(())


class Grid:
    """Exhaustive indexed view of ``[t]^n``; use :func:`get_grid` for caching."""

    def __init__(self, shape: GridShape, cap: int = EXHAUSTIVE_CAP):
        if shape.size > cap:
            raise ResourceCap(f"{shape} has {shape.size} points, above the cap {cap}")
        self.shape = shape
        self.points: list[Point] = list(shape.points())
        self.index = {f: r for r, f in enumerate(self.points)}
        self.full = (1 << len(self.points)) - 1
        above = [0] * len(self.points)
        below = [0] * len(self.points)
        # strictly-above masks via the successor structure: walk in reverse rank
        t = shape.t
        steps = [t ** (shape.n - 1 - k) for k in range(shape.n)]
        for r in range(len(self.points) - 1, -1, -1):
            f = self.points[r]
            m = 0
            for k in range(shape.n):
                if f[k] < t:
                    s = r + steps[k]
                    m |= (1 << s) | above[s]
            above[r] = m
        for r in range(len(self.points)):
            m = above[r]
            bit = 1 << r
            while m:
                low = m & -m
                below[low.bit_length() - 1] |= bit
                m ^= low
        self.host = Host(above, below)

    def __len__(self) -> int:
        return len(self.points)

    def mask_of(self, pts: Iterable[Sequence[int]]) -> int:
        m = 0
        for f in pts:
            m |= 1 << self.index[tuple(f)]
        return m

    def points_of(self, mask: int) -> list[Point]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.points[low.bit_length() - 1])
            mask ^= low
        return out


@functools.lru_cache(maxsize=64)
def get_grid(shape: GridShape) -> Grid:
    return Grid(shape)


def parse_points(text: str) -> tuple[GridShape, list[Point]]:
    """Parse the family format: ``grid t n`` header, then one point per line."""
    from .errors import DuplicatePoint, FormatError

    shape = None
    pts: list[Point] = []
    seen: dict[Point, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if shape is None:
            if parts[0] != "grid" or len(parts) != 3:
                raise FormatError("expected header 'grid <t> <n>'", lineno)
            try:
                shape = GridShape(int(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise FormatError(str(exc), lineno) from None
            continue
        try:
            vals = tuple(int(v) for v in parts)
        except ValueError:
            raise FormatError(f"non-integer entry in {line!r}", lineno) from None
        try:
            shape.check_point(vals)
        except (ShapeMismatch, ValueError) as exc:
            raise FormatError(str(exc), lineno) from None
        if vals in seen:
            raise FormatError(
                f"duplicate point {vals} (first on line {seen[vals]})", lineno
            ) from DuplicatePoint(str(vals))
        seen[vals] = lineno
        pts.append(vals)
    if shape is None:
        raise FormatError("missing 'grid <t> <n>' header")
    return shape, pts


def format_points(shape: GridShape, pts: Iterable[Sequence[int]], comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"grid {shape.t} {shape.n}")
    lines.extend(" ".join(map(str, f)) for f in pts)
    return "\n".join(lines) + "\n"
