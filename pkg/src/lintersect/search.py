"""Certified maximum-family search and the extremal construction.

The candidate universe is every subset of [n] (or those with sizes in K),
in increasing bitmask order.  For h = 2 the search is a branch-and-bound
maximum clique with greedy-colouring bounds on the compatibility graph;
for h >= 3 the same search runs with a compatibility graph that is
narrowed as members are added (see ``_pykernel``).
"""

from __future__ import annotations

import itertools
import time
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import _backend
from .arith import binom
from .family import (
    FamilyError,
    KSet,
    LSet,
    SetFamily,
    is_hwise_l_intersecting,
    is_l_intersecting,
    sizes_in,
)
from .theorems import KwiseParams, TheoremId, TheoremReport, apply_theorem, thm17_bound

__all__ = [
    "MAX_UNIVERSE",
    "DEFAULT_BUDGET",
    "SearchError",
    "FalsificationError",
    "SearchSpec",
    "SearchResult",
    "ScanEntry",
    "candidate_universe",
    "max_clique",
    "max_family",
    "construct_extremal",
    "theorems_for",
    "tightness_scan",
]

MAX_UNIVERSE = 1 << 24
MAX_FAST_N = 64
DEFAULT_BUDGET = 60.0


class SearchError(FamilyError):
    pass


class FalsificationError(AssertionError):
    """A certified family meets every hypothesis yet exceeds the bound."""

    def __init__(self, report: TheoremReport, cell=None):
        self.report = report
        self.cell = cell
        super().__init__(
            f"{report.theorem.value}: family of size {report.family_size} exceeds "
            f"bound {report.effective_bound} with all hypotheses satisfied (cell {cell})"
        )


@dataclass(frozen=True)
class SearchSpec:
    n: int
    L: LSet
    K: KSet | None = None
    h: int = 2
    time_budget: float = DEFAULT_BUDGET
    thread_count: int = 1

    def __post_init__(self):
        if not isinstance(self.L, LSet):
            object.__setattr__(self, "L", LSet(self.L))
        if self.K is not None and not isinstance(self.K, KSet):
            object.__setattr__(self, "K", KSet(self.K))
        if self.h < 2:
            raise SearchError(f"h must be >= 2, got {self.h}")
        if not 1 <= self.n <= MAX_FAST_N:
            raise SearchError(f"search needs 1 <= n <= {MAX_FAST_N}, got {self.n}")
        if self.thread_count < 1:
            raise SearchError("thread_count must be positive")
        if self.time_budget <= 0:
            raise SearchError("time_budget must be positive")


@dataclass
class SearchResult:
    max_size: int
    witness: SetFamily | None
    certified: bool
    nodes_explored: int
    backend: str = ""
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return {
            "max_size": self.max_size,
            "certified": self.certified,
            "nodes_explored": self.nodes_explored,
            "witness": None if self.witness is None else [sorted(s) for s in self.witness.sets()],
        }


def universe_size(n: int, K: KSet | None) -> int:
    if K is None:
        return 1 << n
    return sum(binom(n, k) for k in K)


def candidate_universe(n: int, K: KSet | None = None) -> list[int]:
    """All admissible members in increasing bitmask order."""
    size = universe_size(n, K)
    if size > MAX_UNIVERSE:
        raise SearchError(f"candidate universe has {size} members (limit {MAX_UNIVERSE})")
    if K is None:
        return list(range(1 << n))
    masks = []
    for k in K:
        for combo in itertools.combinations(range(n), k):
            masks.append(sum(1 << i for i in combo))
    return sorted(masks)


def _root_coloring(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    order, colors = [], []
    Q, k = P, 0
    while Q:
        k += 1
        R = Q
        while R:
            low = R & -R
            v = low.bit_length() - 1
            R &= ~(adj[v] | low)
            Q ^= low
            order.append(v)
            colors.append(k)
    return order, colors


def max_clique(
    sets: list[int],
    allowed: int,
    h: int = 2,
    adj: list[int] | None = None,
    time_budget: float = DEFAULT_BUDGET,
    threads: int = 1,
    backend: str | None = None,
) -> tuple[int, tuple[int, ...], bool, int]:
    """Largest vertex set all of whose h-subsets meet in an allowed size.

    ``sets`` are ground-set bitmasks (one per vertex) and ``allowed`` has
    bit j set when size j is permitted.  For h = 2 an explicit adjacency
    ``adj`` may replace the size test.  Returns
    ``(size, vertices, certified, nodes)``.
    """
    kern = _backend.get_kernel(backend)
    deadline = time.monotonic() + time_budget
    nv = len(sets)
    if h == 2 and adj is None:
        adj = kern.build_pair_adjacency(sets, allowed)
    if threads == 1 or nv < 2:
        best, clique, nodes, status = kern.clique_search(adj, sets, allowed, h, deadline=deadline)
        return best, tuple(clique), status == 0, nodes

    root_adj = adj if h == 2 else [((1 << nv) - 1) & ~(1 << v) for v in range(nv)]
    order, colors = _root_coloring((1 << nv) - 1, root_adj)
    shared = array("q", [0])

    def task(i: int):
        if colors[i] <= shared[0]:
            return 0, (), 0, 0
        v = order[i]
        before = 0
        for u in order[:i]:
            before |= 1 << u
        cand = before & root_adj[v]
        return kern.clique_search(
            adj, sets, allowed, h, start=(v,), cand=cand, shared=shared, deadline=deadline
        )

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(task, range(len(order) - 1, -1, -1)))
    nodes = 1 + sum(r[2] for r in results)
    timed_out = any(r[3] == 1 for r in results)
    best = max([r[0] for r in results] + [0])
    if timed_out:
        clique = next((r[1] for r in results if r[0] == best and r[1]), ())
        return best, tuple(clique), False, nodes
    if best == 0:
        return 0, (), True, nodes
    # canonical witness: rerun single-threaded, seeded just below the
    # optimum, stopping at the first optimum it reaches; this is the same
    # family a full single-threaded search reports
    _, clique, extra, status = kern.clique_search(
        adj, sets, allowed, h, best0=best - 1, stop_at=best,
        deadline=time.monotonic() + max(time_budget, 1.0),
    )
    if status != 2:
        raise SearchError("canonical re-verification pass did not reproduce the optimum")
    return best, tuple(clique), True, nodes


def max_family(spec: SearchSpec, backend: str | None = None) -> SearchResult:
    """Certified maximum h-wise L-intersecting family (sizes in K if given)."""
    t0 = time.monotonic()
    universe = candidate_universe(spec.n, spec.K)
    allowed = spec.L.mask()
    best, clique, certified, nodes = max_clique(
        universe, allowed, spec.h, time_budget=spec.time_budget,
        threads=spec.thread_count, backend=backend,
    )
    witness = SetFamily(spec.n, tuple(universe[v] for v in sorted(clique)))
    if witness.m != best:
        raise SearchError("internal error: witness size differs from reported maximum")
    _verify_witness(witness, spec)
    name = backend or _backend.BACKEND
    return SearchResult(best, witness, certified, nodes, name, time.monotonic() - t0)


def _verify_witness(fam: SetFamily, spec: SearchSpec) -> None:
    ok = True
    if fam.m >= spec.h:
        ok = is_hwise_l_intersecting(fam, spec.L, spec.h)
    if spec.K is not None:
        ok = ok and sizes_in(fam, spec.K)
    if not ok:
        raise SearchError("internal error: search returned an invalid witness")


def construct_extremal(n: int, l1: int, s: int, r: int) -> SetFamily:
    """All subsets of [n] containing {1..l1} with sizes in
    [s - r + 1 + l1, s + l1], in increasing bitmask order."""
    if not 0 <= l1 <= n:
        raise FamilyError(f"need 0 <= l1 <= n, got l1={l1}, n={n}")
    if s < 1 or r < 1:
        raise FamilyError(f"need s >= 1 and r >= 1, got s={s}, r={r}")
    core = (1 << l1) - 1
    lo = max(s - r + 1, 0)
    members = []
    rest = range(l1, n)
    for j in range(lo, s + 1):
        for combo in itertools.combinations(rest, j):
            members.append(core | sum(1 << i for i in combo))
    fam = SetFamily(n, tuple(sorted(members)))
    expected = thm17_bound(n, l1, s, r)
    if fam.m != expected:
        raise AssertionError(f"construction has {fam.m} members, expected {expected}")
    if fam.m >= 2 and not is_l_intersecting(fam, LSet(range(l1, s + l1))):
        raise AssertionError("construction is not L-intersecting")
    return fam


# --- scans -----------------------------------------------------------------

@dataclass
class ScanEntry:
    cell: tuple
    result: SearchResult | None
    reports: list[TheoremReport]
    error: str | None = None


def theorems_for(h: int) -> list[TheoremId]:
    if h == 2:
        return [
            TheoremId.FW_1_3, TheoremId.SNEVILY_1_5, TheoremId.ABS_1_4,
            TheoremId.CONJ_1_6, TheoremId.THM_1_7, TheoremId.COR_1_8,
            TheoremId.EKR_1_1, TheoremId.TINT_1_2, TheoremId.LEMMA_3_2,
            TheoremId.GS_3_4, TheoremId.THM_3_5,
        ]
    return [
        TheoremId.GS_3_4, TheoremId.THM_3_5, TheoremId.LEMMA_3_6,
        TheoremId.FS_1_9, TheoremId.FS_1_10,
    ]


_NEEDS_K = {TheoremId.ABS_1_4, TheoremId.CONJ_1_6, TheoremId.THM_1_7}


def reports_for_family(fam: SetFamily, L: LSet, K: KSet | None, h: int,
                       theorems=None, assert_n0: bool = False) -> list[TheoremReport]:
    """Apply each relevant theorem to ``fam``; K falls back to the sizes
    present in the family (skipped when the empty set is a member)."""
    if K is None:
        sizes = sorted(set(fam.sizes()))
        K = KSet(sizes) if sizes and sizes[0] >= 1 else None
    kw = KwiseParams(h, assert_n0)
    out = []
    for t in theorems or theorems_for(h):
        if t in _NEEDS_K and K is None:
            continue
        if t in (TheoremId.EKR_1_1, TheoremId.TINT_1_2) and len(set(fam.sizes())) != 1:
            continue
        if t is TheoremId.TINT_1_2 and L.l1 < 1:
            continue
        out.append(apply_theorem(t, fam, L, K, kw))
    return out


def tightness_scan(grid, time_budget: float = DEFAULT_BUDGET, threads: int = 1,
                   backend: str | None = None) -> list[ScanEntry]:
    """Search every cell, then test the certified witness against each theorem.

    Search errors are recorded per cell.  A certified witness that meets
    every hypothesis of a theorem yet exceeds its bound raises
    :class:`FalsificationError` immediately.
    """
    entries = []
    for cell in grid:
        n, L, K, h = cell
        L = L if isinstance(L, LSet) else LSet(L)
        K = K if K is None or isinstance(K, KSet) else KSet(K)
        key = (n, tuple(L), None if K is None else tuple(K), h)
        try:
            res = max_family(SearchSpec(n, L, K, h, time_budget, threads), backend=backend)
        except (FamilyError, MemoryError) as exc:
            entries.append(ScanEntry(key, None, [], str(exc)))
            continue
        reports = []
        if res.certified:
            reports = reports_for_family(res.witness, L, K, h)
            for rep in reports:
                if rep.falsified:
                    raise FalsificationError(rep, key)
        entries.append(ScanEntry(key, res, reports))
    return entries
