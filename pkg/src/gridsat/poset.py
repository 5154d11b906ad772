"""Finite strict partial orders and induced-embedding search.

Elements are dense labels ``0..k-1``. A :class:`Poset` stores the strict
order as a boolean matrix and derives the cover relation from it.

The embedding engine works on bitmask hosts: every host item ``a`` has a
mask of items strictly above it and a mask of items strictly below it.
Families in the hypergrid and abstract posets are searched the same way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import CycleError, FormatError


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable strict partial order on ``range(size)``."""

    __slots__ = ("size", "less", "up", "down", "_covers")

    def __init__(self, size: int, less: Sequence[Sequence[bool]]):
        self.size = size
        self.less = tuple(tuple(bool(v) for v in row) for row in less)
        self.up = tuple(
            sum(1 << j for j in range(size) if self.less[i][j]) for i in range(size)
        )
        self.down = tuple(
            sum(1 << j for j in range(size) if self.less[j][i]) for i in range(size)
        )
        self._covers = None

    @property
    def covers(self) -> tuple[tuple[bool, ...], ...]:
        """``covers[i][j]`` is true iff ``j`` covers ``i``."""
        if self._covers is None:
            k = self.size
            self._covers = tuple(
                tuple(
                    self.less[i][j] and not (self.up[i] & self.down[j])
                    for j in range(k)
                )
                for i in range(k)
            )
        return self._covers

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.size)
            for j in range(self.size)
            if self.covers[i][j]
        ]

    def less_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j) for i in range(self.size) for j in range(self.size) if self.less[i][j]
        ]

    def comparable(self, i: int, j: int) -> bool:
        return self.less[i][j] or self.less[j][i]

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.less == other.less

    def __hash__(self) -> int:
        return hash(self.less)

    def __repr__(self) -> str:
        return f"Poset(size={self.size}, covers={self.cover_pairs()})"


def _closure(size: int, pairs: Iterable[tuple[int, int]]) -> list[list[bool]]:
    rel = [[False] * size for _ in range(size)]
    for i, j in pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise IndexError(f"element label out of range 0..{size - 1}: ({i}, {j})")
        rel[i][j] = True
    # Warshall
    for m in range(size):
        row_m = rel[m]
        for i in range(size):
            if rel[i][m]:
                row_i = rel[i]
                for j in range(size):
                    if row_m[j]:
                        row_i[j] = True
    for i in range(size):
        if rel[i][i]:
            raise CycleError(f"relations form a cycle through element {i}")
    return rel


def poset_from_hasse(size: int, hasse_edges: Iterable[tuple[int, int]]) -> Poset:
    """Poset whose order is the transitive closure of ``hasse_edges`` (i below j)."""
    if size < 0:
        raise ValueError("size must be non-negative")
    return Poset(size, _closure(size, hasse_edges))


def chain(k: int) -> Poset:
    if k < 1:
        raise ValueError("chain length must be positive")
    return Poset(k, [[i < j for j in range(k)] for i in range(k)])


def antichain(k: int) -> Poset:
    if k < 1:
        raise ValueError("antichain size must be positive")
    return Poset(k, [[False] * k for _ in range(k)])


def empty_poset() -> Poset:
    return Poset(0, [])


def poset_sum(p: Poset, q: Poset) -> Poset:
    """Disjoint union with every element of ``p`` below every element of ``q``."""
    a, b = p.size, q.size
    less = [[False] * (a + b) for _ in range(a + b)]
    for i, j in p.less_pairs():
        less[i][j] = True
    for i, j in q.less_pairs():
        less[a + i][a + j] = True
    for i in range(a):
        for j in range(a, a + b):
            less[i][j] = True
    return Poset(a + b, less)


def dual(p: Poset) -> Poset:
    k = p.size
    return Poset(k, [[p.less[j][i] for j in range(k)] for i in range(k)])


def diamond() -> Poset:
    """D_2 = C_1 * A_2 * C_1, the order of [2]^2."""
    return poset_sum(chain(1), poset_sum(antichain(2), chain(1)))


def lambda_poset() -> Poset:
    """One top covering two incomparable bottoms."""
    return poset_sum(antichain(2), chain(1))


def vee_poset() -> Poset:
    """One bottom covered by two incomparable tops."""
    return poset_sum(chain(1), antichain(2))


NAMED_POSETS: dict[str, Callable[[], Poset]] = {
    "empty": empty_poset,
    "C1": lambda: chain(1),
    "C2": lambda: chain(2),
    "C3": lambda: chain(3),
    "C4": lambda: chain(4),
    "A1": lambda: antichain(1),
    "A2": lambda: antichain(2),
    "A3": lambda: antichain(3),
    "A4": lambda: antichain(4),
    "D2": diamond,
    "Lambda": lambda_poset,
    "V": vee_poset,
}


def named_poset(name: str) -> Poset:
    try:
        return NAMED_POSETS[name]()
    except KeyError:
        raise KeyError(f"unknown poset name {name!r}; known: {sorted(NAMED_POSETS)}")


@dataclass(frozen=True)
class UctpResult:
    holds: bool
    violating_cover: tuple[int, int] | None = None  # (lower, upper)

    def __bool__(self) -> bool:
        return self.holds


def is_uctp(p: Poset) -> UctpResult:
    """Unique cover twin property.

    Cover is read with the standard definition: ``x`` covers ``y`` when
    ``y < x`` and nothing lies strictly between them. Every covered ``y``
    needs a twin ``y' != y`` covered by the same ``x``.
    """
    for y, x in p.cover_pairs():
        if not any(p.covers[z][x] for z in range(p.size) if z != y and z != x):
            return UctpResult(False, (y, x))
    return UctpResult(True)


# ---------------------------------------------------------------------------
# embedding engine


class Host:
    """Bitmask view of a finite strict order on ``range(m)``."""

    __slots__ = ("size", "above", "below", "incomp")

    def __init__(self, above: Sequence[int], below: Sequence[int]):
        self.size = len(above)
        self.above = list(above)
        self.below = list(below)
        full = (1 << self.size) - 1
        self.incomp = [
            full & ~(self.above[a] | self.below[a] | (1 << a)) for a in range(self.size)
        ]

    @classmethod
    def from_oracle(cls, m: int, host_less: Callable[[int, int], bool]) -> "Host":
        above = [0] * m
        below = [0] * m
        for a in range(m):
            for b in range(m):
                if a != b and host_less(a, b):
                    above[a] |= 1 << b
                    below[b] |= 1 << a
        return cls(above, below)

    @classmethod
    def from_poset(cls, p: Poset) -> "Host":
        return cls(p.up, p.down)


class SearchPlan:
    """Element order plus per-position constraints for backtracking.

    ``steps[k]`` lists ``(j, kind)`` for earlier positions ``j``: kind 0 means
    the element at ``j`` is below the element at ``k``, 1 above, 2 incomparable.
    """

    __slots__ = ("poset", "order", "steps", "need_up", "need_down")

    def __init__(self, p: Poset, order: Sequence[int]):
        self.poset = p
        self.order = tuple(order)
        steps = []
        for k, e in enumerate(self.order):
            cons = []
            for j in range(k):
                a = self.order[j]
                if p.less[a][e]:
                    cons.append((j, 0))
                elif p.less[e][a]:
                    cons.append((j, 1))
                else:
                    cons.append((j, 2))
            steps.append(tuple(cons))
        self.steps = tuple(steps)
        self.need_up = tuple(p.up[e].bit_count() for e in self.order)
        self.need_down = tuple(p.down[e].bit_count() for e in self.order)


def _degree_order(p: Poset, first: int | None = None) -> list[int]:
    rest = [e for e in range(p.size) if e != first]
    rest.sort(key=lambda e: (-(p.up[e] | p.down[e]).bit_count(), e))
    return ([first] if first is not None else []) + rest


def _search(plan: SearchPlan, host: Host, pool: int, fixed: dict[int, int] | None = None):
    """Yield assignments (tuple indexed by plan position) in DFS order.

    ``fixed`` maps plan positions to forced host items.
    """
    k = len(plan.order)
    if k == 0:
        yield ()
        return
    above, below, incomp = host.above, host.below, host.incomp
    steps = plan.steps
    need_up, need_down = plan.need_up, plan.need_down
    assign = [0] * k
    fixed = fixed or {}

    def rec(pos: int, used: int):
        cand = pool & ~used
        for j, kind in steps[pos]:
            img = assign[j]
            if kind == 0:
                cand &= above[img]
            elif kind == 1:
                cand &= below[img]
            else:
                cand &= incomp[img]
            if not cand:
                return
        if pos in fixed:
            f = 1 << fixed[pos]
            cand &= f
        nu, nd = need_up[pos], need_down[pos]
        while cand:
            low = cand & -cand
            cand ^= low
            c = low.bit_length() - 1
            if nu and (above[c] & pool).bit_count() < nu:
                continue
            if nd and (below[c] & pool).bit_count() < nd:
                continue
            assign[pos] = c
            if pos + 1 == k:
                yield tuple(assign)
            else:
                yield from rec(pos + 1, used | low)

    yield from rec(0, 0)


def _to_map(plan: SearchPlan, assignment: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(plan.order)
    for pos, e in enumerate(plan.order):
        out[e] = assignment[pos]
    return tuple(out)


def find_embedding_in_host(p: Poset, host: Host, pool: int | None = None) -> tuple[int, ...] | None:
    """Lexicographically least induced embedding of ``p`` into ``host``.

    The result is a tuple ``phi`` with ``phi[e]`` the host item of element ``e``.
    """
    if pool is None:
        pool = (1 << host.size) - 1
    if p.size > pool.bit_count():
        return None
    plan = SearchPlan(p, range(p.size))
    for a in _search(plan, host, pool):
        return _to_map(plan, a)
    return None


def find_induced_embedding(
    p: Poset, m: int, host_less: Callable[[int, int], bool]
) -> tuple[int, ...] | None:
    """Induced embedding of ``p`` into ``m`` items ordered by ``host_less``.

    Returns the lexicographically least injection ``phi`` (``phi[e]`` is an
    item index) with ``e <_p f`` iff ``host_less(phi[e], phi[f])``, or ``None``.
    """
    return find_embedding_in_host(p, Host.from_oracle(m, host_less))


def _first(plan: SearchPlan, host: Host, pool: int, anchor: int) -> list[int] | None:
    """First assignment with plan position 0 forced to ``anchor`` (plain recursion)."""
    k = len(plan.order)
    above, below, incomp = host.above, host.below, host.incomp
    steps = plan.steps
    need_up, need_down = plan.need_up, plan.need_down
    assign = [anchor] + [0] * (k - 1)

    def rec(pos: int, used: int) -> bool:
        cand = pool & ~used
        for j, kind in steps[pos]:
            img = assign[j]
            if kind == 0:
                cand &= above[img]
            elif kind == 1:
                cand &= below[img]
            else:
                cand &= incomp[img]
            if not cand:
                return False
        nu, nd = need_up[pos], need_down[pos]
        last = pos + 1 == k
        while cand:
            low = cand & -cand
            cand ^= low
            c = low.bit_length() - 1
            if nu and (above[c] & pool).bit_count() < nu:
                continue
            if nd and (below[c] & pool).bit_count() < nd:
                continue
            assign[pos] = c
            if last or rec(pos + 1, used | low):
                return True
        return False

    if k == 1 or rec(1, 1 << anchor):
        return assign
    return None


class AnchoredSearch:
    """Existence checks for copies of ``p`` through one designated host item.

    One plan per anchor element, each starting at the anchor and continuing
    in decreasing comparability degree.
    """

    def __init__(self, p: Poset):
        self.poset = p
        self.plans = [SearchPlan(p, _degree_order(p, e)) for e in range(p.size)]

    def find(self, host: Host, pool: int, item: int) -> tuple[int, ...] | None:
        """First copy (as element->item map) inside ``pool`` that uses ``item``."""
        pool |= 1 << item
        n_up = (host.above[item] & pool).bit_count()
        n_down = (host.below[item] & pool).bit_count()
        for plan in self.plans:
            if plan.need_up[0] > n_up or plan.need_down[0] > n_down:
                continue
            a = _first(plan, host, pool, item)
            if a is not None:
                return _to_map(plan, a)
        return None

    def exists(self, host: Host, pool: int, item: int) -> bool:
        pool |= 1 << item
        n_up = (host.above[item] & pool).bit_count()
        n_down = (host.below[item] & pool).bit_count()
        for plan in self.plans:
            if plan.need_up[0] > n_up or plan.need_down[0] > n_down:
                continue
            if _first(plan, host, pool, item) is not None:
                return True
        return False


def is_isomorphic(p: Poset, q: Poset) -> bool:
    """Brute-force isomorphism test; meant for posets of at most 8 elements."""
    if p.size != q.size or len(p.less_pairs()) != len(q.less_pairs()):
        return False
    return find_embedding_in_host(p, Host.from_poset(q)) is not None


def brute_force_embedding(
    p: Poset, m: int, host_less: Callable[[int, int], bool]
) -> tuple[int, ...] | None:
    """Scan every injection in lexicographic order. Reference oracle only."""
    for phi in itertools.permutations(range(m), p.size):
        if all(
            p.less[a][b] == host_less(phi[a], phi[b])
            for a in range(p.size)
            for b in range(p.size)
            if a != b
        ):
            return phi
    return None


# ---------------------------------------------------------------------------
# text format


def parse_poset(text: str) -> Poset:
    """Parse the line-based poset format (``poset k`` / ``cover i j`` / ``rel i j``)."""
    size = None
    pairs: list[tuple[int, int]] = []
    origin: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if size is None:
            if parts[0] != "poset" or len(parts) != 2:
                raise FormatError("expected header 'poset <size>'", lineno)
            try:
                size = int(parts[1])
            except ValueError:
                raise FormatError(f"bad size {parts[1]!r}", lineno) from None
            if size < 0:
                raise FormatError("size must be non-negative", lineno)
            continue
        if parts[0] not in ("cover", "rel") or len(parts) != 3:
            raise FormatError(f"expected 'cover i j' or 'rel i j', got {line!r}", lineno)
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError(f"non-integer label in {line!r}", lineno) from None
        if not (0 <= i < size and 0 <= j < size):
            raise FormatError(f"label out of range 0..{size - 1}", lineno)
        pairs.append((i, j))
        origin.append(lineno)
    if size is None:
        raise FormatError("missing 'poset <size>' header")
    try:
        return poset_from_hasse(size, pairs)
    except CycleError as exc:
        # report the first edge whose addition closes a cycle
        for n in range(1, len(pairs) + 1):
            try:
                _closure(size, pairs[:n])
            except CycleError:
                raise FormatError(str(exc), origin[n - 1]) from None
        raise FormatError(str(exc)) from None


def format_poset(p: Poset, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"poset {p.size}")
    lines.extend(f"cover {i} {j}" for i, j in p.cover_pairs())
    return "\n".join(lines) + "\n"


def load_poset(path: str) -> Poset:
    with open(path, encoding="utf-8") as fh:
        return parse_poset(fh.read())
