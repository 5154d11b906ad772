"""Exact saturation numbers, explicit constructions and dimension bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .errors import CapTooSmall, NotEmbeddable, ParameterError
from .family import Family, greedy_saturate, is_induced_p_free, is_saturated
from .grid import (
    GridShape,
    Point,
    bottom_layers,
    get_grid,
    leq,
    top_layers,
)
from .poset import Poset, antichain, dual, find_embedding_in_host, is_uctp, poset_sum
from .search import BudgetExceeded, Counter, iter_saturated


# ---------------------------------------------------------------------------
# exact sat*


@dataclass
class SatResult:
    shape: GridShape
    poset_id: str
    lower: int
    upper: int
    witness: Family
    nodes_explored: int

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    def to_json(self) -> dict:
        return {
            "kind": "sat-min",
            "poset": self.poset_id,
            "t": self.shape.t,
            "n": self.shape.n,
            "exact": self.exact,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "witness": [list(f) for f in self.witness.points],
            "nodes": self.nodes_explored,
        }


def embeds_in_grid(p: Poset, shape: GridShape) -> bool:
    grid = get_grid(shape)
    return find_embedding_in_host(p, grid.host) is not None


def separation_lower_bound(n: int) -> int:
    """Least m with n <= max(2(m-1), floor(m^2/4)): the size any fully separating family needs."""
    m = 1
    while n > max(2 * (m - 1), m * m // 4):
        m += 1
    return m


def sat_lower_bound(p: Poset, shape: GridShape) -> int:
    lb = max(p.size - 1, 0)
    # UCTP posets on >= 3 elements force every coordinate to separate
    if p.size >= 3 and is_uctp(p):
        lb = max(lb, separation_lower_bound(shape.n))
    return lb


def sat_min(p: Poset, shape: GridShape, budget: int | None = None, poset_id: str = "") -> SatResult:
    """Minimum size of an induced P-saturated family, by iterative deepening.

    On budget exhaustion the result is an interval ``[lower, upper]`` whose
    witness is the greedy family of the upper size.
    """
    if not embeds_in_grid(p, shape):
        raise NotEmbeddable(f"poset does not embed in {shape}")
    grid = get_grid(shape)
    greedy = greedy_saturate(Family(shape), p)
    upper = len(greedy)
    counter = Counter(budget=budget)
    m = min(sat_lower_bound(p, shape), upper)
    try:
        while m <= upper:
            for mask in iter_saturated(p, shape, m, symmetric=True, counter=counter):
                return SatResult(shape, poset_id, m, m, Family.from_mask(grid, mask), counter.nodes)
            m += 1
    except BudgetExceeded:
        return SatResult(shape, poset_id, m, upper, greedy, counter.nodes)
    raise AssertionError("greedy family of size %d was not found by the search" % upper)


# ---------------------------------------------------------------------------
# chains and antichains


def chain_construction(k: int, shape: GridShape) -> Family:
    """Saturated C_k-free family of size 2^(k-2).

    Lower block: values in {1,2} on the first k-3 coordinates, 1 elsewhere.
    Upper block: values in {1,t} on the first k-3 coordinates, t elsewhere.
    For k = 2 the single bottom point is returned. When n = k-3 the two blocks
    overlap and the union is smaller.
    """
    t, n = shape.t, shape.n
    if k == 2:
        return Family(shape, [shape.bottom()])
    if k < 2:
        raise ParameterError(f"chain length must be >= 2, got {k}")
    head = k - 3
    if n < head:
        raise ParameterError(f"need n >= k-3 = {head}, got n = {n}")
    pts = set()
    for lo in itertools.product((1, 2), repeat=head):
        pts.add(lo + (1,) * (n - head))
    for hi in itertools.product((1, t), repeat=head):
        pts.add(hi + (t,) * (n - head))
    return Family(shape, pts)


def antichain_bounds(k: int, shape: GridShape) -> tuple[int, int]:
    """Closed-form bracket ((t-1)n+1, (k-1)(t-1)n-k+3) for sat*([t]^n, A_k)."""
    if not embeds_in_grid(antichain(k), shape):
        raise NotEmbeddable(f"A_{k} does not embed in {shape}")
    t, n = shape.t, shape.n
    return (t - 1) * n + 1, (k - 1) * (t - 1) * n - k + 3


def min_chain_cover(points: Sequence[Point]) -> list[list[Point]]:
    """Dilworth decomposition via maximum matching on the strict comparability DAG."""
    pts = sorted(points)
    g = nx.Graph()
    left = [("L", a) for a in range(len(pts))]
    g.add_nodes_from(left)
    g.add_nodes_from(("R", b) for b in range(len(pts)))
    for a in range(len(pts)):
        for b in range(len(pts)):
            if a != b and leq(pts[a], pts[b]):
                g.add_edge(("L", a), ("R", b))
    match = nx.bipartite.hopcroft_karp_matching(g, top_nodes=left)
    succ = {a: match[("L", a)][1] for a in range(len(pts)) if ("L", a) in match}
    has_pred = set(succ.values())
    chains = []
    for a in range(len(pts)):
        if a in has_pred:
            continue
        c = [pts[a]]
        while a in succ:
            a = succ[a]
            c.append(pts[a])
        chains.append(c)
    return sorted(chains)


def extend_to_maximal_chain(chain_pts: Sequence[Point], shape: GridShape) -> list[Point]:
    """Fill gaps with unit steps (lowest coordinate first) from bottom to top."""
    stops = [shape.bottom()] + sorted(chain_pts) + [shape.top()]
    out = [stops[0]]
    for target in stops[1:]:
        cur = list(out[-1])
        while tuple(cur) != target:
            for c in range(shape.n):
                if cur[c] < target[c]:
                    cur[c] += 1
                    break
            out.append(tuple(cur))
    return out


@dataclass
class DilworthAudit:
    k: int
    chains: list[list[Point]]
    maximal_chains: list[list[Point]]
    saturated: bool
    union_matches: bool

    @property
    def ok(self) -> bool:
        return self.saturated and len(self.chains) == self.k - 1 and self.union_matches

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "chains": [[list(f) for f in c] for c in self.chains],
            "saturated": self.saturated,
            "chain_count": len(self.chains),
            "union_matches": self.union_matches,
            "ok": self.ok,
        }


def dilworth_audit(fam: Family, k: int) -> DilworthAudit:
    """Check an A_k-saturated family is the union of k-1 maximal chains."""
    p = antichain(k)
    sat = is_induced_p_free(fam, p).holds and is_saturated(fam, p).holds
    chains = min_chain_cover(fam.points)
    maximal = [extend_to_maximal_chain(c, fam.shape) for c in chains]
    union = set(itertools.chain.from_iterable(maximal))
    return DilworthAudit(k, chains, maximal, sat, union == set(fam.points))


# ---------------------------------------------------------------------------
# heights and widths in the hypercube


@dataclass(frozen=True)
class HeightWidthProfile:
    h_plus: int
    w_plus: int
    h_minus: int
    w_minus: int
    top_embedding: tuple[Point, ...] = field(default=(), compare=False)
    bottom_embedding: tuple[Point, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "h_plus": self.h_plus,
            "w_plus": self.w_plus,
            "h_minus": self.h_minus,
            "w_minus": self.w_minus,
            "top_embedding": [list(f) for f in self.top_embedding],
            "bottom_embedding": [list(f) for f in self.bottom_embedding],
        }


def layer_embedding(p: Poset, n: int, h: int, top: bool) -> tuple[Point, ...] | None:
    """Least induced copy of ``p`` inside the top (or bottom) ``h`` layers of [2]^n."""
    grid = get_grid(GridShape(2, n))
    layers = top_layers if top else bottom_layers
    pool = grid.mask_of(layers(grid.shape, h))
    phi = find_embedding_in_host(p, grid.host, pool)
    if phi is None:
        return None
    return tuple(grid.points[a] for a in phi)


def _height(p: Poset, n_cap: int, top: bool) -> tuple[int, int, tuple[Point, ...]]:
    for h in range(1, p.size + 2):
        for n in range(1, n_cap + 1):
            emb = layer_embedding(p, n, h, top)
            if emb is not None:
                return h, n, emb
    raise CapTooSmall(f"no embedding within h <= {p.size + 1}, n <= {n_cap}")


def height_width(p: Poset, n_cap: int | None = None) -> HeightWidthProfile:
    """h^+/w^+ and h^-/w^- of ``p``; the empty poset gets all zeros."""
    if p.size == 0:
        return HeightWidthProfile(0, 0, 0, 0)
    n_cap = max(p.size, 1) if n_cap is None else n_cap
    hp, wp, top_emb = _height(p, n_cap, top=True)
    hm, wm, bot_emb = _height(p, n_cap, top=False)
    return HeightWidthProfile(hp, wp, hm, wm, top_emb, bot_emb)


# ---------------------------------------------------------------------------
# Natarajan dimension


@dataclass(frozen=True)
class NatarajanWitness:
    coords: tuple[int, ...]  # 1-based
    lower: Point
    upper: Point

    def to_json(self) -> dict:
        return {"X": list(self.coords), "F_minus": list(self.lower), "F_plus": list(self.upper)}


def _shatters(points: Sequence[Point], coords: Sequence[int], pairs: Sequence[tuple[int, int]]) -> bool:
    seen = set()
    for f in points:
        pat = 0
        for b, (c, (lo, hi)) in enumerate(zip(coords, pairs)):
            v = f[c]
            if v == hi:
                pat |= 1 << b
            elif v != lo:
                break
        else:
            seen.add(pat)
    return len(seen) == 1 << len(coords)


def _witness(shape: GridShape, coords, pairs) -> NatarajanWitness:
    lo = [1] * shape.n
    hi = [shape.t] * shape.n
    for c, (a, b) in zip(coords, pairs):
        lo[c], hi[c] = a, b
    return NatarajanWitness(tuple(c + 1 for c in coords), tuple(lo), tuple(hi))


def natarajan_dimension(fam: Family) -> tuple[int, NatarajanWitness]:
    """Largest shattered coordinate set, grown level by level.

    A shattered ``(X, pairs)`` stays shattered on every subset of ``X``, so
    each level only extends survivors of the previous one by a larger
    coordinate. The empty family is given dimension 0.
    """
    shape = fam.shape
    pts = fam.points
    values = [sorted({f[c] for f in pts}) for c in range(shape.n)]
    level = [((), ())]
    best = (0, _witness(shape, (), ()))
    m = 0
    while level:
        nxt = []
        for coords, pairs in level:
            start = coords[-1] + 1 if coords else 0
            for c in range(start, shape.n):
                for pr in itertools.combinations(values[c], 2):
                    cand = (coords + (c,), pairs + (pr,))
                    if _shatters(pts, *cand):
                        nxt.append(cand)
        if not nxt:
            break
        m += 1
        best = (m, _witness(shape, *nxt[0]))
        level = nxt
    return best


def natarajan_bruteforce(fam: Family, max_size: int | None = None) -> int:
    """Reference value: try every X and every value-pair assignment directly."""
    shape = fam.shape
    pts = set(fam.points)
    top = shape.n if max_size is None else min(shape.n, max_size)
    all_pairs = list(itertools.combinations(range(1, shape.t + 1), 2))
    best = 0
    for size in range(1, top + 1):
        for X in itertools.combinations(range(shape.n), size):
            for assign in itertools.product(all_pairs, repeat=size):
                ok = True
                for S in itertools.product((0, 1), repeat=size):
                    want = {c: assign[b][S[b]] for b, c in enumerate(X)}
                    if not any(all(f[c] == v for c, v in want.items()) for f in pts):
                        ok = False
                        break
                if ok:
                    best = max(best, size)
                    break
    return best


def haussler_long_bound(d: int, shape: GridShape) -> int:
    """sum_{i=0}^{d} C(n, i) * C(t, 2)^i."""
    if d < 0:
        raise ValueError("dimension must be non-negative")
    pairs = math.comb(shape.t, 2)
    return sum(math.comb(shape.n, i) * pairs**i for i in range(d + 1))


# ---------------------------------------------------------------------------
# sum posets in the hypercube


def stacked(p1: Poset, k: int, p2: Poset) -> Poset:
    """``p1`` on top of an antichain of size ``k`` on top of ``p2``.

    In poset-sum notation (left summand below) this is p2 * A_k * p1.
    Labels: p2's elements, then the antichain, then p1's.
    """
    return poset_sum(p2, poset_sum(antichain(k), p1))


@dataclass
class CubeSumEmbedding:
    poset: Poset
    N: int
    middle_width: int
    profile1: HeightWidthProfile
    profile2: HeightWidthProfile
    images: tuple[Point, ...]  # indexed by labels of ``poset``
    blocks: dict[str, range]  # label ranges: "p2", "antichain", "p1"

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "middle_width": self.middle_width,
            "images": [list(f) for f in self.images],
            "blocks": {k: [r.start, r.stop] for k, r in self.blocks.items()},
        }


def embed_sum_in_cube(p1: Poset, k: int, p2: Poset) -> CubeSumEmbedding:
    """Three-block embedding of ``stacked(p1, k, p2)`` into [2]^N.

    Coordinates: a block of width w^+(p1) carrying p1's top-layer copy, a block
    of width w^-(p2) carrying p2's bottom-layer copy, then a middle block of
    width 2*ceil(log2 k) whose middle layer supplies the antichain.
    p1 points read 2 outside their block, p2 points read 1 outside theirs,
    antichain points read 1 on p1's block and 2 on p2's block.

    For k = 1 the middle block is empty, which collides when p1's copy uses
    the bottom of its block or p2's copy the top of its block; the middle
    block is then widened to 2. With both posets empty and k = 1 the single
    antichain point gets a one-coordinate middle block.
    """
    if k < 1:
        raise ParameterError(f"antichain size must be >= 1, got {k}")
    prof1 = height_width(p1)
    prof2 = height_width(p2)
    w1, w2 = prof1.w_plus, prof2.w_minus
    top1 = [f for f in prof1.top_embedding]
    bot2 = [g for g in prof2.bottom_embedding]
    c = math.ceil(math.log2(k)) if k > 1 else 0
    mid = 2 * c
    if k == 1 and (any(f == (1,) * w1 for f in top1) or any(g == (2,) * w2 for g in bot2)):
        mid, c = 2, 1
    subsets = list(itertools.combinations(range(mid), c))[:k]
    if len(subsets) < k:
        raise ParameterError("middle layer too small")  # cannot happen: C(2c, c) >= 2^c >= k
    if w1 + w2 + mid == 0:
        mid = 1
    N = w1 + w2 + mid
    imgs: list[Point] = []
    for g in bot2:
        imgs.append((1,) * w1 + tuple(g) + (1,) * mid)
    for a in subsets:
        imgs.append((1,) * w1 + (2,) * w2 + tuple(2 if x in a else 1 for x in range(mid)))
    for f in top1:
        imgs.append(tuple(f) + (2,) * w2 + (2,) * mid)
    poset = stacked(p1, k, p2)
    blocks = {
        "p2": range(0, p2.size),
        "antichain": range(p2.size, p2.size + k),
        "p1": range(p2.size + k, p2.size + k + p1.size),
    }
    return CubeSumEmbedding(poset, N, mid, prof1, prof2, tuple(imgs), blocks)


@dataclass
class PolyAudit:
    family: Family
    seed_size: int
    seed_free: bool
    seed_free_k1: bool
    saturated: bool
    natarajan: int
    natarajan_witness: NatarajanWitness
    N: int
    bound: int

    @property
    def ok(self) -> bool:
        return (
            self.seed_free
            and self.seed_free_k1
            and self.saturated
            and self.natarajan < self.N
            and len(self.family) <= self.bound
        )

    def to_json(self) -> dict:
        return {
            "size": len(self.family),
            "seed_size": self.seed_size,
            "seed_free": self.seed_free,
            "seed_free_k1": self.seed_free_k1,
            "saturated": self.saturated,
            "natarajan": self.natarajan,
            "N": self.N,
            "bound": self.bound,
            "ok": self.ok,
            "family": [list(f) for f in self.family.points],
        }


def poly_construction(p1: Poset, k: int, p2: Poset, shape: GridShape) -> PolyAudit:
    """Greedy saturation seeded by the top h^+(p1) and bottom h^-(p2) layers."""
    p = stacked(p1, k, p2)
    if not embeds_in_grid(p, shape):
        raise NotEmbeddable(f"stacked poset does not embed in {shape}")
    emb = embed_sum_in_cube(p1, k, p2)
    h1 = height_width(p1).h_plus
    h2 = height_width(p2).h_minus
    seed_pts = set(top_layers(shape, h1)) | set(bottom_layers(shape, h2))
    seed = Family(shape, seed_pts)
    free = is_induced_p_free(seed, p).holds
    free1 = is_induced_p_free(seed, stacked(p1, 1, p2)).holds
    if not free:
        raise AssertionError("layer seed contains the target poset")
    fam = greedy_saturate(seed, p)
    sat = is_saturated(fam, p).holds
    dim, wit = natarajan_dimension(fam)
    N = emb.N
    return PolyAudit(fam, len(seed), free, free1, sat, dim, wit, N, haussler_long_bound(N - 1, shape))


def verify_cube_sum(e: CubeSumEmbedding) -> dict[str, bool]:
    """Independent re-check of every property the construction promises."""
    imgs = e.images
    p = e.poset
    induced = len(set(imgs)) == len(imgs) and all(
        p.less[a][b] == leq(imgs[a], imgs[b])
        for a in range(p.size)
        for b in range(p.size)
        if a != b
    )
    N = e.N
    h1, h2 = e.profile1.h_plus, e.profile2.h_minus
    top_ok = all(sum(imgs[a]) >= 2 * N - h1 + 1 for a in e.blocks["p1"])
    bot_ok = all(sum(imgs[a]) <= N + h2 - 1 for a in e.blocks["p2"])
    anti = list(e.blocks["antichain"])
    anti_ok = all(
        not leq(imgs[a], imgs[b]) for a in anti for b in anti if a != b
    )
    cross = all(
        leq(imgs[lo], imgs[hi]) and imgs[lo] != imgs[hi]
        for lo_block, hi_block in (("p2", "antichain"), ("antichain", "p1"), ("p2", "p1"))
        for lo in e.blocks[lo_block]
        for hi in e.blocks[hi_block]
    )
    return {
        "induced": induced,
        "p1_in_top_layers": top_ok,
        "p2_in_bottom_layers": bot_ok,
        "antichain": anti_ok,
        "cross_blocks": cross,
        "dimension": all(len(f) == N for f in imgs),
    }
