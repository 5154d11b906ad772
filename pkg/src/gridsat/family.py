"""Predicates on families of hypergrid points.

A :class:`Family` is a sorted, duplicate-free set of points of one shape.
Every yes/no predicate returns a result object carrying a
:class:`Certificate` that can be re-checked independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import DuplicatePoint, NotPFree, ShapeMismatch
from .grid import Grid, GridShape, Point, format_points, get_grid, leq, parse_points
from .poset import AnchoredSearch, Host, Poset, find_embedding_in_host

BELOW, ABOVE, INCOMPARABLE, SAME = -1, 1, 0, 2


class Family:
    """Immutable snapshot of a point set in ``[t]^n``."""

    def __init__(self, shape: GridShape, points: Iterable[Sequence[int]] = ()):
        self.shape = shape
        pts = [shape.check_point(f) for f in points]
        if len(set(pts)) != len(pts):
            seen = set()
            for f in pts:
                if f in seen:
                    raise DuplicatePoint(f"duplicate point {f}")
                seen.add(f)
        self.points: tuple[Point, ...] = tuple(sorted(pts))
        self._set = frozenset(self.points)
        self._host: Host | None = None
        self._cmp: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def from_mask(cls, grid: Grid, mask: int) -> "Family":
        fam = cls.__new__(cls)
        fam.shape = grid.shape
        fam.points = tuple(grid.points_of(mask))
        fam._set = frozenset(fam.points)
        fam._host = None
        fam._cmp = None
        return fam

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, f) -> bool:
        return tuple(f) in self._set

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Family)
            and self.shape == other.shape
            and self.points == other.points
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.points))

    def __repr__(self) -> str:
        return f"Family({self.shape}, {list(self.points)})"

    @property
    def grid(self) -> Grid:
        return get_grid(self.shape)

    @property
    def mask(self) -> int:
        return self.grid.mask_of(self.points)

    @property
    def host(self) -> Host:
        """Bitmask order on the family's own points (indices follow ``points``)."""
        if self._host is None:
            self._host = Host.from_oracle(
                len(self.points),
                lambda a, b: leq(self.points[a], self.points[b]),
            )
        return self._host

    @property
    def comparability(self) -> tuple[tuple[int, ...], ...]:
        """``cmp[a][b]`` is BELOW if point a < point b, ABOVE if a > b, else INCOMPARABLE."""
        if self._cmp is None:
            h = self.host
            rows = []
            for a in range(len(self.points)):
                row = []
                for b in range(len(self.points)):
                    if a == b:
                        row.append(SAME)
                    elif h.above[a] >> b & 1:
                        row.append(BELOW)
                    elif h.below[a] >> b & 1:
                        row.append(ABOVE)
                    else:
                        row.append(INCOMPARABLE)
                rows.append(tuple(row))
            self._cmp = tuple(rows)
        return self._cmp

    def with_point(self, g: Sequence[int]) -> "Family":
        return Family(self.shape, self.points + (tuple(g),))

    def to_text(self, comment: str | None = None) -> str:
        return format_points(self.shape, self.points, comment)

    @classmethod
    def from_text(cls, text: str) -> "Family":
        shape, pts = parse_points(text)
        return cls(shape, pts)


def load_family(path: str) -> Family:
    with open(path, encoding="utf-8") as fh:
        return Family.from_text(fh.read())


@dataclass(frozen=True)
class Certificate:
    """Witness attached to a predicate answer.

    kind is one of ``embedding`` (payload: tuple of points indexed by poset
    element), ``violating-point`` (payload: a point), ``separating-pair``
    (payload: ``(f, f_prime, coordinate)``) or ``none``.
    """

    kind: str
    payload: Any = None

    def to_text(self) -> str:
        if self.kind == "embedding":
            return "\n".join(
                f"witness embedding: {e} -> {' '.join(map(str, f))}"
                for e, f in enumerate(self.payload)
            )
        if self.kind == "violating-point":
            return "witness point: " + " ".join(map(str, self.payload))
        if self.kind == "separating-pair":
            f, g, i = self.payload
            return f"witness pair: {' '.join(map(str, f))} | {' '.join(map(str, g))} coord {i}"
        return "witness: none"

    def to_json(self) -> dict:
        if self.kind == "separating-pair":
            f, g, i = self.payload
            payload: Any = {"f": list(f), "f_prime": list(g), "coord": i}
        elif self.kind == "embedding":
            payload = [list(f) for f in self.payload]
        elif self.kind == "violating-point":
            payload = list(self.payload)
        else:
            payload = None
        return {"kind": self.kind, "payload": payload}


NO_CERT = Certificate("none")


@dataclass(frozen=True)
class Verdict:
    holds: bool
    certificate: Certificate = field(default=NO_CERT)

    def __bool__(self) -> bool:
        return self.holds


def verify_embedding(p: Poset, image: Sequence[Sequence[int]]) -> bool:
    """Pair-by-pair recheck that ``image`` is an induced copy of ``p``."""
    if len(image) != p.size or len(set(map(tuple, image))) != p.size:
        return False
    for a in range(p.size):
        for b in range(p.size):
            if a != b and p.less[a][b] != leq(image[a], image[b]):
                return False
    return True


def is_induced_p_free(fam: Family, p: Poset) -> Verdict:
    phi = find_embedding_in_host(p, fam.host)
    if phi is None:
        return Verdict(True)
    return Verdict(False, Certificate("embedding", tuple(fam.points[a] for a in phi)))


def creates_copy_through(fam: Family, g: Sequence[int], p: Poset) -> tuple[Point, ...] | None:
    """An induced copy of ``p`` in ``fam + {g}`` whose image contains ``g``."""
    g = fam.shape.check_point(g)
    if g in fam:
        raise DuplicatePoint(f"{g} already belongs to the family")
    grid = fam.grid
    phi = AnchoredSearch(p).find(grid.host, fam.mask, grid.index[g])
    if phi is None:
        return None
    return tuple(grid.points[a] for a in phi)


def first_unblocked(grid: Grid, search: AnchoredSearch, mask: int, start: int = 0) -> int | None:
    """Least grid index >= start outside ``mask`` whose addition creates no copy."""
    host = grid.host
    for x in range(start, len(grid.points)):
        if mask >> x & 1:
            continue
        if not search.exists(host, mask, x):
            return x
    return None


def is_saturated(fam: Family, p: Poset) -> Verdict:
    """Induced P-saturation; the certificate names the least violating point."""
    free = is_induced_p_free(fam, p)
    if not free:
        raise NotPFree("family contains an induced copy of the poset", free.certificate)
    grid = fam.grid
    x = first_unblocked(grid, AnchoredSearch(p), fam.mask)
    if x is None:
        return Verdict(True)
    return Verdict(False, Certificate("violating-point", grid.points[x]))


def is_saturated_free(fam: Family, p: Poset) -> bool:
    """P-free and saturated, without raising."""
    return bool(is_induced_p_free(fam, p)) and bool(is_saturated(fam, p))


def separating_witness(points: Sequence[Point], i: int) -> tuple[Point, Point] | None:
    """Lexicographically least ``(f, f')`` with ``f <= f'`` off ``i`` and ``f(i) > f'(i)``."""
    k = i - 1
    for f in points:
        for g in points:
            if f[k] > g[k] and all(
                a <= b for c, (a, b) in enumerate(zip(f, g)) if c != k
            ):
                return f, g
    return None


def separating_coordinates(fam: Family) -> dict[int, Certificate]:
    """Separating coordinates mapped to their least witness pair.

    With ``n = 1`` the dropped point is the empty point, so coordinate 1 is
    separating as soon as two distinct points are present.
    """
    pts = sorted(fam.points)
    out = {}
    for i in range(1, fam.shape.n + 1):
        w = separating_witness(pts, i)
        if w is not None:
            out[i] = Certificate("separating-pair", (w[0], w[1], i))
    return out


def non_separating_coordinates(fam: Family) -> list[int]:
    seps = separating_coordinates(fam)
    return [i for i in range(1, fam.shape.n + 1) if i not in seps]


def is_separating(fam: Family, i: int) -> bool:
    if not 1 <= i <= fam.shape.n:
        raise IndexError(f"coordinate {i} outside 1..{fam.shape.n}")
    return separating_witness(fam.points, i) is not None


def greedy_saturate(fam: Family, p: Poset) -> Family:
    """Extend ``fam`` to a saturated P-free family by a lexicographic scan."""
    free = is_induced_p_free(fam, p)
    if not free:
        raise NotPFree("seed family is not induced P-free", free.certificate)
    grid = fam.grid
    search = AnchoredSearch(p)
    mask = fam.mask
    changed = True
    while changed:
        changed = False
        for x in range(len(grid.points)):
            if mask >> x & 1:
                continue
            if not search.exists(grid.host, mask, x):
                mask |= 1 << x
                changed = True
    return Family.from_mask(grid, mask)


def check_same_shape(*fams: Family) -> None:
    shapes = {f.shape for f in fams}
    if len(shapes) > 1:
        raise ShapeMismatch(f"families of different shapes: {sorted(map(str, shapes))}")
