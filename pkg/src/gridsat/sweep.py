"""Exhaustive plus randomized property sweep over a (poset, t, n) grid.

Each job is a pure function of ``(poset name, t, n, seed, caps)``; its
random generator is seeded from that tuple alone, and results are gathered
in job order. The report is therefore the same for any worker count.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bounds import embeds_in_grid, haussler_long_bound, natarajan_dimension, sat_min
from .dichotomy import (
    bounded_witness,
    build_sep_digraph,
    edge_bound_holds,
    is_tck_free,
    lift_repeated,
    repeated_pairs,
)
from .errors import GridsatError
from .family import (
    Family,
    greedy_saturate,
    is_induced_p_free,
    is_saturated,
    non_separating_coordinates,
)
from .grid import GridShape
from .poset import is_uctp, named_poset
from .search import enumerate_saturated

DEFAULT_POSETS = ("C2", "C3", "C4", "A2", "A3", "D2", "Lambda", "V")
DEFAULT_TS = (2, 3)
DEFAULT_NS = (1, 2, 3)


@dataclass
class JobResult:
    poset: str
    t: int
    n: int
    embeds: bool
    sat: int | None = None
    min_has_nonseparating: bool = False
    families: int = 0
    random_families: int = 0
    pipelines: int = 0
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": "sweep-job",
            "poset": self.poset,
            "t": self.t,
            "n": self.n,
            "embeds": self.embeds,
            "sat": self.sat,
            "min_has_nonseparating": self.min_has_nonseparating,
            "families": self.families,
            "random_families": self.random_families,
            "pipelines": self.pipelines,
            "violations": self.violations,
        }


def _audit_family(fam: Family, name: str, res: JobResult, uctp: bool) -> None:
    p = named_poset(name)
    tag = f"{[list(f) for f in fam.points]}"
    if not (is_induced_p_free(fam, p).holds and is_saturated(fam, p).holds):
        res.violations.append(f"not saturated: {tag}")
        return
    dim, _ = natarajan_dimension(fam)
    if len(fam) > haussler_long_bound(dim, fam.shape):
        res.violations.append(f"Haussler-Long bound fails (dim {dim}): {tag}")
    free = non_separating_coordinates(fam)
    if uctp and p.size >= 2:
        if free:
            res.violations.append(f"UCTP family with non-separating {free}: {tag}")
        else:
            d = build_sep_digraph(fam)
            if not is_tck_free(d)[0]:
                res.violations.append(f"separation digraph has a TC_k: {tag}")
            if not edge_bound_holds(d):
                res.violations.append(f"edge bound fails: {tag}")
    try:
        for i in free:
            bounded_witness(fam, i, p)
            res.pipelines += 1
        for i, j in repeated_pairs(fam):
            lift_repeated(fam, i, j, p)
            res.pipelines += 1
    except GridsatError as exc:
        res.violations.append(f"{type(exc).__name__}: {exc}: {tag}")


def _permute(fam: Family, perm: list[int]) -> Family:
    return Family(fam.shape, [tuple(f[c] for c in perm) for f in fam.points])


def run_job(args: tuple) -> JobResult:
    name, t, n, seed, size_cap, samples = args
    p = named_poset(name)
    shape = GridShape(t, n)
    res = JobResult(name, t, n, embeds_in_grid(p, shape))
    if not res.embeds:
        return res
    uctp = bool(is_uctp(p))
    sat = sat_min(p, shape, poset_id=name)
    res.sat = sat.value
    for fam in enumerate_saturated(p, shape, size_cap, symmetric=True):
        res.families += 1
        if len(fam) == res.sat and non_separating_coordinates(fam):
            res.min_has_nonseparating = True
        _audit_family(fam, name, res, uctp)
    rng = random.Random(f"{seed}:{name}:{t}:{n}")
    pts = list(shape.points())
    for _ in range(samples):
        seed_pts = rng.sample(pts, rng.randint(0, min(3, len(pts))))
        base = Family(shape, seed_pts)
        if not is_induced_p_free(base, p).holds:
            continue
        fam = greedy_saturate(base, p)
        res.random_families += 1
        _audit_family(fam, name, res, uctp)
        perm = list(range(n))
        rng.shuffle(perm)
        moved = _permute(fam, perm)
        if not is_saturated(moved, p).holds:
            res.violations.append(f"coordinate permutation {perm} breaks saturation")
    return res


def sandwich_violations(results: list[JobResult]) -> list[str]:
    """Where a minimum family has a non-separating coordinate, sat* cannot grow
    when a coordinate is dropped or added."""
    table = {(r.poset, r.t, r.n): r for r in results if r.embeds and r.sat is not None}
    out = []
    for (name, t, n), r in table.items():
        if not r.min_has_nonseparating:
            continue
        for m in (n - 1, n + 1):
            other = table.get((name, t, m))
            if other is not None and other.sat > r.sat:
                out.append(f"{name} t={t}: sat*(n={m}) = {other.sat} > sat*(n={n}) = {r.sat}")
    return out


def default_workers() -> int:
    return os.cpu_count() or 1


def run_sweep(
    posets=DEFAULT_POSETS,
    ts=DEFAULT_TS,
    ns=DEFAULT_NS,
    *,
    seed: int = 0,
    size_cap: int = 6,
    samples: int = 8,
    workers: int | None = None,
) -> tuple[list[JobResult], list[str]]:
    jobs = [(name, t, n, seed, size_cap, samples) for name in posets for t in ts for n in ns]
    workers = workers or default_workers()
    if workers <= 1:
        results = [run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_job, jobs))
    return results, sandwich_violations(results)
