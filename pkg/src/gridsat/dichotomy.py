"""Separation structure and the transformation lemmas behind the dichotomy.

Every transformation re-verifies its postcondition by a full saturation
recheck unless ``trust=True``; a failed recheck raises
:class:`~gridsat.errors.LemmaViolation`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .bounds import embeds_in_grid
from .errors import LemmaViolation, NotFullySeparating, PreconditionError, ResourceCap
from .family import (
    Family,
    is_induced_p_free,
    is_saturated,
    is_separating,
    non_separating_coordinates,
    separating_coordinates,
    separating_witness,
)
from .grid import GridShape, Point, deflate, drop, leq, lift
from .poset import Poset
from .search import BudgetExceeded, Counter, enumerate_saturated


# ---------------------------------------------------------------------------
# separation digraph


@dataclass(frozen=True)
class SepDigraph:
    vertices: tuple[Point, ...]
    edges: tuple[tuple[Point, Point, int], ...]  # (source, target, coordinate)

    def successors(self) -> dict[Point, list[Point]]:
        out: dict[Point, list[Point]] = {v: [] for v in self.vertices}
        for s, d, _ in self.edges:
            out[s].append(d)
        return out

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "edges": [[list(s), list(d), i] for s, d, i in self.edges],
        }


def build_sep_digraph(fam: Family) -> SepDigraph:
    """One edge ``f' -> f`` per coordinate, from its least separating pair."""
    edges = []
    for i in range(1, fam.shape.n + 1):
        w = separating_witness(fam.points, i)
        if w is None:
            raise NotFullySeparating(i)
        f, f_prime = w
        edges.append((f_prime, f, i))
    return SepDigraph(fam.points, tuple(edges))


def is_tck_free(d: SepDigraph) -> tuple[bool, tuple[Point, ...] | None]:
    """No transitively oriented cycle TC_k (k >= 3).

    Equivalent check: for no edge ``u -> w`` is there a simple path from
    ``u`` to ``w`` with at least one intermediate vertex. The certificate is
    the vertex sequence ``u, ..., w`` of such a path.
    """
    succ = d.successors()
    for u, w, _ in d.edges:
        for x in succ[u]:
            if x == w or x == u:
                continue
            # BFS from x to w avoiding u
            prev = {x: None}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                if y == w:
                    path = [w]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return False, (u,) + tuple(reversed(path))
                for z in succ[y]:
                    if z != u and z not in prev:
                        prev[z] = y
                        queue.append(z)
    return True, None


def edge_bound(m: int) -> int:
    return max(2 * (m - 1), m * m // 4)


def edge_bound_holds(d: SepDigraph) -> bool:
    return len(d.edges) <= edge_bound(len(d.vertices))


# ---------------------------------------------------------------------------
# constant coordinates


@dataclass
class ConstantCore:
    classes: list[list[int]]  # 1-based coordinates
    trace: list[list[int]]  # I_1, I_2, ... (1-based)

    def to_json(self) -> dict:
        return {"classes": self.classes, "trace": self.trace}


def constant_core(fam: Family) -> ConstantCore:
    """Coordinate classes on which every member agrees, plus the pigeonhole trace.

    The trace starts from all coordinates; step k keeps the largest set of
    coordinates on which member k is constant (lexicographically least set on
    ties), so each step keeps at least a 1/t fraction.
    """
    n = fam.shape.n
    sig: dict[tuple[int, ...], list[int]] = {}
    for c in range(n):
        sig.setdefault(tuple(f[c] for f in fam.points), []).append(c + 1)
    classes = sorted(sig.values())
    trace = []
    current = list(range(1, n + 1))
    for f in fam.points:
        groups: dict[int, list[int]] = {}
        for c in current:
            groups.setdefault(f[c - 1], []).append(c)
        current = min(groups.values(), key=lambda g: (-len(g), g))
        trace.append(current)
    return ConstantCore(classes, trace)


def repeated_pairs(fam: Family) -> list[tuple[int, int]]:
    """Coordinate pairs ``i < i'`` on which every member agrees."""
    out = []
    for cls in constant_core(fam).classes:
        for a in range(len(cls)):
            for b in range(a + 1, len(cls)):
                out.append((cls[a], cls[b]))
    return sorted(out)


# ---------------------------------------------------------------------------
# transformations


def _require_saturated(fam: Family, p: Poset) -> None:
    if not is_induced_p_free(fam, p).holds:
        raise PreconditionError("family is not induced P-free")
    if not is_saturated(fam, p).holds:
        raise PreconditionError("family is not P-saturated")


def _recheck(fam: Family, p: Poset, what: str) -> None:
    free = is_induced_p_free(fam, p)
    if not free.holds:
        raise LemmaViolation(f"{what}: output contains a copy: {free.certificate.payload}")
    sat = is_saturated(fam, p)
    if not sat.holds:
        raise LemmaViolation(f"{what}: output not saturated at {sat.certificate.payload}")


def lift_family(fam: Family, i: int) -> Family:
    return Family(GridShape(fam.shape.t, fam.shape.n + 1), [lift(f, i) for f in fam.points])


def drop_family(fam: Family, i: int) -> Family:
    return Family(GridShape(fam.shape.t, fam.shape.n - 1), {drop(f, i) for f in fam.points})


def lift_repeated(fam: Family, i: int, i_prime: int, p: Poset, trust: bool = False) -> Family:
    """Copy coordinate ``i`` when it always agrees with ``i_prime``."""
    if not 1 <= i < i_prime <= fam.shape.n:
        raise PreconditionError(f"need 1 <= i < i' <= n, got {i}, {i_prime}")
    if any(f[i - 1] != f[i_prime - 1] for f in fam.points):
        raise PreconditionError(f"coordinates {i} and {i_prime} are not repeated")
    _require_saturated(fam, p)
    out = lift_family(fam, i)
    if not trust:
        _recheck(out, p, "lift of repeated coordinate")
    return out


@dataclass
class DeflateStep:
    value: int  # j: the operator lowers j to j-1
    family: Family

    def to_json(self) -> dict:
        return {"j": self.value, "family": [list(f) for f in self.family.points]}


def _check_deflate_step(before: Family, after: Family, i: int, j: int, p: Poset) -> None:
    t = before.shape.t
    imgs = [deflate(f, i, j, t) for f in before.points]
    if len(set(imgs)) != len(imgs):
        raise LemmaViolation(f"d^({j}) is not injective on the family")
    pts = before.points
    for a in range(len(pts)):
        for b in range(len(pts)):
            if a != b and leq(pts[a], pts[b]) != leq(imgs[a], imgs[b]):
                raise LemmaViolation(f"d^({j}) changes the relation of {pts[a]} and {pts[b]}")
    if is_separating(after, i):
        raise LemmaViolation(f"coordinate {i} became separating under d^({j})")
    fset = set(pts)
    grid = after.grid
    from .poset import AnchoredSearch  # local: only needed on the audit path

    search = AnchoredSearch(p)
    mask = after.mask
    if not is_induced_p_free(after, p).holds:
        raise LemmaViolation(f"d^({j}) image contains a copy")
    for x, g in enumerate(grid.points):
        if mask >> x & 1:
            continue
        if not search.exists(grid.host, mask, x):
            part = "F minus d(F)" if g in fset else "outside F and d(F)"
            raise LemmaViolation(f"d^({j}) image not saturated at {g} ({part})")


def deflate_cascade(fam: Family, i: int, p: Poset, trust: bool = False) -> list[DeflateStep]:
    """All non-trivial steps pushing coordinate ``i`` onto the values {1, t}.

    Order: for v from the least middle value up to t-1, apply d^(v),
    d^(v-1), ..., d^(2), so the moving value is always the least middle value.
    """
    t = fam.shape.t
    if not 1 <= i <= fam.shape.n:
        raise IndexError(f"coordinate {i} outside 1..{fam.shape.n}")
    if is_separating(fam, i):
        raise PreconditionError(f"coordinate {i} is separating")
    _require_saturated(fam, p)
    middle = sorted({f[i - 1] for f in fam.points} - {1, t})
    steps: list[DeflateStep] = []
    if not middle:
        return steps
    cur = fam
    for v in range(middle[0], t):
        for j in range(v, 1, -1):
            if all(f[i - 1] != j for f in cur.points):
                continue
            nxt = Family(fam.shape, [deflate(f, i, j, t) for f in cur.points])
            if not trust:
                _check_deflate_step(cur, nxt, i, j, p)
            steps.append(DeflateStep(j, nxt))
            cur = nxt
    return steps


def deflate_family(fam: Family, i: int, p: Poset, trust: bool = False) -> Family:
    steps = deflate_cascade(fam, i, p, trust)
    out = steps[-1].family if steps else fam
    if len(out) != len(fam):
        raise LemmaViolation("deflation changed the family size")
    if any(f[i - 1] not in (1, fam.shape.t) for f in out.points):
        raise LemmaViolation("deflation left middle values")
    return out


def lift_extreme(fam: Family, i: int, p: Poset, trust: bool = False) -> Family:
    """Copy a non-separating coordinate whose values are all extreme."""
    t = fam.shape.t
    if not 1 <= i <= fam.shape.n:
        raise IndexError(f"coordinate {i} outside 1..{fam.shape.n}")
    if is_separating(fam, i):
        raise PreconditionError(f"coordinate {i} is separating")
    if any(f[i - 1] not in (1, t) for f in fam.points):
        raise PreconditionError(f"coordinate {i} takes values outside {{1, {t}}}")
    _require_saturated(fam, p)
    out = lift_family(fam, i)
    if not trust:
        _recheck(out, p, "extreme-value lift")
    return out


def drop_nonseparating(fam: Family, i: int, p: Poset, trust: bool = False) -> Family:
    """Remove a non-separating coordinate."""
    if fam.shape.n < 2:
        raise PreconditionError("need n >= 2 to drop a coordinate")
    if not 1 <= i <= fam.shape.n:
        raise IndexError(f"coordinate {i} outside 1..{fam.shape.n}")
    if is_separating(fam, i):
        raise PreconditionError(f"coordinate {i} is separating")
    _require_saturated(fam, p)
    out = drop_family(fam, i)
    if len(out) != len(fam):
        raise LemmaViolation("dropping a non-separating coordinate was not injective")
    if not trust:
        _recheck(out, p, "coordinate drop")
    return out


# ---------------------------------------------------------------------------
# classifier


@dataclass
class DimensionRow:
    n: int
    embeds: bool
    sat: int | None = None  # least size found within the cap
    families_scanned: int = 0
    min_family: Family | None = None
    separating: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "embeds": self.embeds,
            "sat": self.sat,
            "families_scanned": self.families_scanned,
            "min_family": None
            if self.min_family is None
            else [list(f) for f in self.min_family.points],
            "separating": {str(i): c.to_json()["payload"] for i, c in self.separating.items()},
        }


@dataclass
class BoundedWitness:
    family: Family
    coordinate: int
    deflate_steps: list[DeflateStep]
    extreme: Family
    lifted: Family
    dropped: Family | None

    def to_json(self) -> dict:
        return {
            "n": self.family.shape.n,
            "coordinate": self.coordinate,
            "family": [list(f) for f in self.family.points],
            "deflate_steps": [s.to_json() for s in self.deflate_steps],
            "extreme": [list(f) for f in self.extreme.points],
            "lifted": [list(f) for f in self.lifted.points],
            "dropped": None if self.dropped is None else [list(f) for f in self.dropped.points],
        }


@dataclass
class DichotomyReport:
    poset_id: str
    t: int
    n_max: int
    size_cap: int
    verdict: str  # bounded-witness-found | all-separating-up-to-range | not-embeddable
    rows: list[DimensionRow]
    witness: BoundedWitness | None = None

    @property
    def table(self) -> dict[int, int | None]:
        return {r.n: r.sat for r in self.rows if r.embeds}

    def verify(self, p: Poset) -> bool:
        """Re-check the bounded witness from its recorded families alone."""
        if self.witness is None:
            return self.verdict != "bounded-witness-found"
        w = self.witness
        chain = [w.family] + [s.family for s in w.deflate_steps] + [w.extreme, w.lifted]
        if w.dropped is not None:
            chain.append(w.dropped)
        for fam in chain:
            if not (is_induced_p_free(fam, p).holds and is_saturated(fam, p).holds):
                return False
        sizes = {len(f) for f in chain}
        return (
            len(sizes) == 1
            and not is_separating(w.family, w.coordinate)
            and not is_separating(w.extreme, w.coordinate)
        )

    def to_json(self) -> dict:
        return {
            "kind": "classify",
            "poset": self.poset_id,
            "t": self.t,
            "n_max": self.n_max,
            "size_cap": self.size_cap,
            "verdict": self.verdict,
            "rows": [r.to_json() for r in self.rows],
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def bounded_witness(fam: Family, i: int, p: Poset, trust: bool = False) -> BoundedWitness:
    steps = deflate_cascade(fam, i, p, trust)
    extreme = steps[-1].family if steps else fam
    lifted = lift_extreme(extreme, i, p, trust)
    dropped = drop_nonseparating(fam, i, p, trust) if fam.shape.n >= 2 else None
    return BoundedWitness(fam, i, steps, extreme, lifted, dropped)


def classify_dichotomy(
    p: Poset,
    t: int,
    n_max: int,
    size_cap: int,
    *,
    poset_id: str = "",
    budget: int | None = None,
    point_cap: int = 1 << 12,
    trust: bool = False,
) -> DichotomyReport:
    """Search minimum-first for a saturated family with a non-separating coordinate."""
    rows: list[DimensionRow] = []
    any_embeds = False
    counter = Counter(budget=budget)
    for n in range(1, n_max + 1):
        shape = GridShape(t, n)
        if shape.size > point_cap:
            raise ResourceCap(f"{shape} has {shape.size} points, above the cap {point_cap}")
        row = DimensionRow(n, embeds_in_grid(p, shape))
        rows.append(row)
        if not row.embeds:
            continue
        any_embeds = True
        try:
            for fam in enumerate_saturated(p, shape, size_cap, symmetric=True, counter=counter):
                row.families_scanned += 1
                if row.sat is None:
                    row.sat = len(fam)
                    row.min_family = fam
                    row.separating = separating_coordinates(fam)
                free = non_separating_coordinates(fam)
                if free:
                    w = bounded_witness(fam, free[0], p, trust)
                    return DichotomyReport(
                        poset_id, t, n_max, size_cap, "bounded-witness-found", rows, w
                    )
        except BudgetExceeded as exc:
            raise ResourceCap(f"classification budget exhausted at n={n}") from exc
    verdict = "all-separating-up-to-range" if any_embeds else "not-embeddable"
    return DichotomyReport(poset_id, t, n_max, size_cap, verdict, rows)
