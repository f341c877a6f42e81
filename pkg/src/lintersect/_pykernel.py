"""Pure-Python search kernel (fallback for the compiled ``_ckernel``).

Both kernels implement the same branch-and-bound and must agree node for
node.  A vertex is an index into ``sets`` (ground-set bitmasks); vertex
sets are int bitmasks over vertex indices.

For h = 2 the compatibility graph is static.  For h >= 3 the graph that
constrains the remaining candidates depends on the current clique C: two
candidates u, w are compatible iff |u & w & X| is allowed for every meet X
of h-2 members of C.  Adding v to C filters candidates through v's row,
which covers exactly the (h-1)-subsets of C + {v} that contain v.
"""

from __future__ import annotations

import math
import time

STATUS_COMPLETE = 0
STATUS_TIMEOUT = 1
STATUS_TARGET = 2

CHECK_EVERY = 1024


class _Stop(Exception):
    pass


def build_pair_adjacency(sets, allowed: int) -> list[int]:
    """Row v = bitmask of vertices w != v with |sets[v] & sets[w]| allowed."""
    nv = len(sets)
    adj = [0] * nv
    for v in range(nv):
        sv = sets[v]
        row = 0
        for w in range(v + 1, nv):
            if (allowed >> (sv & sets[w]).bit_count()) & 1:
                row |= 1 << w
                adj[w] |= 1 << v
        adj[v] |= row
    return adj


def _levels_add(levels: list[list[int]], x: int, top: int) -> tuple[list[list[int]], list[int]]:
    """Meets of j-subsets of C, for j = 0..top, after adding set x to C.

    Returns the new levels and the masks that are new at level ``top``.
    """
    new = [list(lv) for lv in levels]
    added_top: list[int] = []
    for j in range(top, 0, -1):
        have = set(new[j])
        for y in levels[j - 1]:
            z = x & y
            if z not in have:
                have.add(z)
                new[j].append(z)
                if j == top:
                    added_top.append(z)
    return new, added_top


def _restrict(adj, sets, allowed, P, xs):
    """Copy of adj with rows of P narrowed by the meets in xs."""
    out = list(adj)
    p = P
    while p:
        low = p & -p
        u = low.bit_length() - 1
        p ^= low
        su = sets[u]
        row = out[u] & P
        r = row
        while r:
            lw = r & -r
            w = lw.bit_length() - 1
            r ^= lw
            suw = su & sets[w]
            for x in xs:
                if not (allowed >> (suw & x).bit_count()) & 1:
                    row &= ~lw
                    break
        out[u] = row
    return out


def clique_search(
    adj,
    sets,
    allowed: int,
    h: int,
    start=(),
    cand: int | None = None,
    best0: int = 0,
    shared=None,
    deadline: float = math.inf,
    stop_at: int = 0,
):
    """Largest extension of ``start`` by vertices of ``cand``.

    Returns ``(best_size, best_clique, nodes, status)``.  ``best_clique``
    is empty when nothing beat ``best0``.  ``shared`` is an optional
    one-slot mutable int array holding an incumbent size shared between
    workers.
    """
    nv = len(sets)
    if cand is None:
        cand = (1 << nv) - 1
    full = -1
    top = h - 2
    levels: list[list[int]] = [[full]] + [[] for _ in range(top)]
    if h >= 3:
        for v in start:
            levels, _ = _levels_add(levels, sets[v], top)
        adj = [((1 << nv) - 1) & ~(1 << v) for v in range(nv)]
        if levels[top]:
            adj = _restrict(adj, sets, allowed, cand, levels[top])
    elif adj is None:
        adj = build_pair_adjacency(sets, allowed)

    state = {
        "best": best0,
        "clique": (),
        "nodes": 0,
    }
    clique = list(start)

    def record():
        if len(clique) > state["best"]:
            state["best"] = len(clique)
            state["clique"] = tuple(clique)
            if shared is not None and shared[0] < len(clique):
                shared[0] = len(clique)
            if stop_at and len(clique) >= stop_at:
                raise _Stop(STATUS_TARGET)

    def expand(P, adj, levels):
        state["nodes"] += 1
        if state["nodes"] % CHECK_EVERY == 0 and time.monotonic() > deadline:
            raise _Stop(STATUS_TIMEOUT)
        if not P:
            record()
            return
        # greedy sequential colouring in vertex-index order
        order: list[int] = []
        colors: list[int] = []
        Q = P
        k = 0
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
        depth = len(clique)
        for i in range(len(order) - 1, -1, -1):
            bound = state["best"]
            if shared is not None and shared[0] > bound:
                bound = shared[0]
            if depth + colors[i] <= bound:
                return
            v = order[i]
            newP = P & adj[v]
            clique.append(v)
            if h == 2:
                expand(newP, adj, levels)
            else:
                new_levels, xs = _levels_add(levels, sets[v], top)
                new_adj = _restrict(adj, sets, allowed, newP, xs) if xs and newP else adj
                expand(newP, new_adj, new_levels)
            clique.pop()
            P &= ~(1 << v)

    status = STATUS_COMPLETE
    try:
        expand(cand, adj, levels)
    except _Stop as stop:
        status = stop.args[0]
    return state["best"], state["clique"], state["nodes"], status
