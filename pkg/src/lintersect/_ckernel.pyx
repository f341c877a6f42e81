# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernel.

Same algorithm, vertex order and tie-breaking as ``_pykernel``; node
counts agree exactly in single-threaded runs.  Vertex sets are arrays of
``nw`` 64-bit words; ground-set members must fit in one word (n <= 64).
The search itself runs without the GIL so worker threads overlap.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

import math

cdef extern from *:
    """
    static inline int lint_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int lint_ctz(unsigned long long x) { return __builtin_ctzll(x); }
    static inline long long lint_load(long long *p) { return __atomic_load_n(p, __ATOMIC_RELAXED); }
    static inline void lint_raise(long long *p, long long v) {
        long long cur = __atomic_load_n(p, __ATOMIC_RELAXED);
        while (cur < v && !__atomic_compare_exchange_n(p, &cur, v, 1, __ATOMIC_RELAXED, __ATOMIC_RELAXED)) {}
    }
    """
    int lint_popcount(unsigned long long x) nogil
    int lint_ctz(unsigned long long x) nogil
    long long lint_load(long long *p) nogil
    void lint_raise(long long *p, long long v) nogil

cdef enum:
    CHECK_EVERY = 1024

STATUS_COMPLETE = 0
STATUS_TIMEOUT = 1
STATUS_TARGET = 2

ctypedef struct Levels:
    int count
    int *lvl
    uint64_t *mask

ctypedef struct Ctx:
    int nv
    int nw
    int h
    int top
    const uint64_t *sets
    unsigned char allowed[65]
    long long *shared
    double deadline
    int stop_at
    int best
    int found
    int *clique
    int depth
    int *best_clique
    long long nodes
    int status


cdef inline double _now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef inline bint _empty(const uint64_t *a, int nw) noexcept nogil:
    cdef int i
    for i in range(nw):
        if a[i]:
            return False
    return True


cdef int _levels_add(const Levels *old, uint64_t x, int top, Levels *out,
                     uint64_t *added, int *nadded) noexcept nogil:
    """Mirror of _pykernel._levels_add; returns -1 on allocation failure."""
    cdef int cap = 2 * old.count + 1
    cdef int i, j, e
    cdef uint64_t z
    cdef bint dup
    out.lvl = <int *> malloc(cap * sizeof(int))
    out.mask = <uint64_t *> malloc(cap * sizeof(uint64_t))
    if out.lvl == NULL or out.mask == NULL:
        free(out.lvl)
        free(out.mask)
        return -1
    memcpy(out.lvl, old.lvl, old.count * sizeof(int))
    memcpy(out.mask, old.mask, old.count * sizeof(uint64_t))
    out.count = old.count
    nadded[0] = 0
    j = top
    while j >= 1:
        for i in range(old.count):
            if old.lvl[i] != j - 1:
                continue
            z = x & old.mask[i]
            dup = False
            for e in range(out.count):
                if out.lvl[e] == j and out.mask[e] == z:
                    dup = True
                    break
            if not dup:
                out.lvl[out.count] = j
                out.mask[out.count] = z
                out.count += 1
                if j == top:
                    added[nadded[0]] = z
                    nadded[0] += 1
        j -= 1
    return 0


cdef void _restrict(Ctx *ctx, const uint64_t *adj, const uint64_t *P,
                    const uint64_t *xs, int nx, uint64_t *out) noexcept nogil:
    """Rows u in P of ``out`` = adj[u] & P narrowed by every meet in xs."""
    cdef int nw = ctx.nw
    cdef int a, b, u, w, t
    cdef uint64_t pw, rw, su, suw
    cdef uint64_t *row
    for a in range(nw):
        pw = P[a]
        while pw:
            u = a * 64 + lint_ctz(pw)
            pw &= pw - 1
            su = ctx.sets[u]
            row = out + <size_t> u * nw
            for b in range(nw):
                row[b] = adj[<size_t> u * nw + b] & P[b]
            for b in range(nw):
                rw = row[b]
                while rw:
                    w = b * 64 + lint_ctz(rw)
                    rw &= rw - 1
                    suw = su & ctx.sets[w]
                    for t in range(nx):
                        if not ctx.allowed[lint_popcount(suw & xs[t])]:
                            row[b] &= ~((<uint64_t> 1) << (w & 63))
                            break


cdef void _record(Ctx *ctx) noexcept nogil:
    if ctx.depth > ctx.best:
        ctx.best = ctx.depth
        ctx.found = 1
        memcpy(ctx.best_clique, ctx.clique, ctx.depth * sizeof(int))
        if ctx.shared != NULL:
            lint_raise(ctx.shared, ctx.depth)
        if ctx.stop_at and ctx.depth >= ctx.stop_at:
            ctx.status = 2


cdef int _expand(Ctx *ctx, const uint64_t *P, const uint64_t *adj, const Levels *levels) noexcept nogil:
    """Returns -1 on allocation failure, else 0.  Stops early via ctx.status."""
    cdef int nw = ctx.nw
    cdef int nv = ctx.nv
    cdef int i, a, v, k, npos, depth, bound, nadded, rc
    cdef long long shared_best
    cdef uint64_t low, w
    cdef int *order
    cdef int *colors
    cdef uint64_t *buf
    cdef uint64_t *Q
    cdef uint64_t *R
    cdef uint64_t *Pcur
    cdef uint64_t *newP
    cdef uint64_t *added
    cdef uint64_t *new_adj
    cdef const uint64_t *adj_v
    cdef Levels new_levels
    cdef bint emptyQ, emptyR

    ctx.nodes += 1
    if ctx.nodes % CHECK_EVERY == 0 and _now() > ctx.deadline:
        ctx.status = 1
        return 0
    if _empty(P, nw):
        _record(ctx)
        return 0

    npos = 0
    for a in range(nw):
        npos += lint_popcount(P[a])
    order = <int *> malloc(2 * npos * sizeof(int))
    buf = <uint64_t *> malloc(4 * nw * sizeof(uint64_t))
    if order == NULL or buf == NULL:
        free(order)
        free(buf)
        return -1
    colors = order + npos
    Q = buf
    R = buf + nw
    Pcur = buf + 2 * nw
    newP = buf + 3 * nw

    # greedy sequential colouring in vertex-index order
    memcpy(Q, P, nw * sizeof(uint64_t))
    npos = 0
    k = 0
    while not _empty(Q, nw):
        k += 1
        memcpy(R, Q, nw * sizeof(uint64_t))
        a = 0
        while a < nw:
            w = R[a]
            if not w:
                a += 1
                continue
            v = a * 64 + lint_ctz(w)
            low = w & (~w + 1)
            adj_v = adj + <size_t> v * nw
            for i in range(nw):
                R[i] &= ~adj_v[i]
            R[a] &= ~low
            Q[a] &= ~low
            order[npos] = v
            colors[npos] = k
            npos += 1

    memcpy(Pcur, P, nw * sizeof(uint64_t))
    depth = ctx.depth
    rc = 0
    i = npos - 1
    while i >= 0:
        bound = ctx.best
        if ctx.shared != NULL:
            shared_best = lint_load(ctx.shared)
            if shared_best > bound:
                bound = <int> shared_best
        if depth + colors[i] <= bound:
            break
        v = order[i]
        adj_v = adj + <size_t> v * nw
        for a in range(nw):
            newP[a] = Pcur[a] & adj_v[a]
        ctx.clique[depth] = v
        ctx.depth = depth + 1
        if ctx.h == 2:
            rc = _expand(ctx, newP, adj, levels)
        else:
            added = <uint64_t *> malloc((levels.count + 1) * sizeof(uint64_t))
            if added == NULL or _levels_add(levels, ctx.sets[v], ctx.top, &new_levels, added, &nadded) < 0:
                free(added)
                rc = -1
            else:
                if nadded and not _empty(newP, nw):
                    new_adj = <uint64_t *> malloc(<size_t> nv * nw * sizeof(uint64_t))
                    if new_adj == NULL:
                        rc = -1
                    else:
                        _restrict(ctx, adj, newP, added, nadded, new_adj)
                        rc = _expand(ctx, newP, new_adj, &new_levels)
                        free(new_adj)
                else:
                    rc = _expand(ctx, newP, adj, &new_levels)
                free(new_levels.lvl)
                free(new_levels.mask)
                free(added)
        ctx.depth = depth
        if rc < 0 or ctx.status:
            break
        Pcur[v >> 6] &= ~((<uint64_t> 1) << (v & 63))
        i -= 1

    free(order)
    free(buf)
    return rc


cdef void _int_to_words(object x, uint64_t *out, int nw) except *:
    cdef int i
    mask = 0xFFFFFFFFFFFFFFFF
    for i in range(nw):
        out[i] = <uint64_t> ((x >> (64 * <object> i)) & mask)


cdef object _words_to_int(const uint64_t *w, int nw):
    x = 0
    cdef int i
    for i in range(nw - 1, -1, -1):
        x = (x << 64) | w[i]
    return x


cdef void _pair_adjacency(const uint64_t *sets, int nv, int nw,
                          const unsigned char *allowed, uint64_t *adj) noexcept nogil:
    cdef int v, w
    memset(adj, 0, <size_t> nv * nw * sizeof(uint64_t))
    for v in range(nv):
        for w in range(v + 1, nv):
            if allowed[lint_popcount(sets[v] & sets[w])]:
                adj[<size_t> v * nw + (w >> 6)] |= (<uint64_t> 1) << (w & 63)
                adj[<size_t> w * nw + (v >> 6)] |= (<uint64_t> 1) << (v & 63)


cdef void _fill_allowed(unsigned char *dst, object allowed):
    cdef int j
    for j in range(65):
        dst[j] = (allowed >> j) & 1


def build_pair_adjacency(sets, allowed):
    """Row v = bitmask of vertices w != v with |sets[v] & sets[w]| allowed."""
    cdef int nv = len(sets)
    cdef int nw = max(1, (nv + 63) // 64)
    cdef unsigned char al[65]
    cdef uint64_t *s = <uint64_t *> malloc(max(nv, 1) * sizeof(uint64_t))
    cdef uint64_t *adj = <uint64_t *> malloc(<size_t> max(nv, 1) * nw * sizeof(uint64_t))
    cdef int v
    if s == NULL or adj == NULL:
        free(s)
        free(adj)
        raise MemoryError()
    try:
        for v in range(nv):
            s[v] = <uint64_t> sets[v]
        _fill_allowed(al, allowed)
        with nogil:
            _pair_adjacency(s, nv, nw, al, adj)
        return [_words_to_int(adj + <size_t> v * nw, nw) for v in range(nv)]
    finally:
        free(s)
        free(adj)


def clique_search(adj, sets, allowed, int h, start=(), cand=None, int best0=0,
                  shared=None, double deadline=math.inf, int stop_at=0):
    """See ``_pykernel.clique_search``; same contract and results."""
    cdef int nv = len(sets)
    cdef int nw = max(1, (nv + 63) // 64)
    cdef Ctx ctx
    cdef Levels levels
    cdef Levels tmp
    cdef uint64_t *s = NULL
    cdef uint64_t *A = NULL
    cdef uint64_t *A2 = NULL
    cdef uint64_t *P = NULL
    cdef uint64_t *added = NULL
    cdef int *clq = NULL
    cdef int *bclq = NULL
    cdef long long[::1] shared_view
    cdef int v, i, nadded, rc, top
    if h < 2:
        raise ValueError("h must be >= 2")
    # Python-int masks: a C-level shift would overflow past 32 vertices
    full = (<object> 1 << len(sets)) - 1
    if cand is None:
        cand = full
    start = list(start)
    top = h - 2
    levels.count = 0
    levels.lvl = NULL
    levels.mask = NULL
    try:
        s = <uint64_t *> malloc(max(nv, 1) * sizeof(uint64_t))
        A = <uint64_t *> malloc(<size_t> max(nv, 1) * nw * sizeof(uint64_t))
        P = <uint64_t *> malloc(nw * sizeof(uint64_t))
        clq = <int *> malloc((nv + 1) * sizeof(int))
        bclq = <int *> malloc((nv + 1) * sizeof(int))
        if s == NULL or A == NULL or P == NULL or clq == NULL or bclq == NULL:
            raise MemoryError()
        for v in range(nv):
            if sets[v] < 0 or sets[v] >> 64:
                raise ValueError("compiled kernel needs members within 64 elements")
            s[v] = <uint64_t> sets[v]
        _fill_allowed(ctx.allowed, allowed)
        _int_to_words(cand, P, nw)

        if h == 2:
            if adj is None:
                _pair_adjacency(s, nv, nw, ctx.allowed, A)
            else:
                for v in range(nv):
                    _int_to_words(adj[v], A + <size_t> v * nw, nw)
        else:
            levels.lvl = <int *> malloc(sizeof(int))
            levels.mask = <uint64_t *> malloc(sizeof(uint64_t))
            if levels.lvl == NULL or levels.mask == NULL:
                raise MemoryError()
            levels.count = 1
            levels.lvl[0] = 0
            levels.mask[0] = ~(<uint64_t> 0)
            for v in start:
                added = <uint64_t *> malloc((levels.count + 1) * sizeof(uint64_t))
                if added == NULL or _levels_add(&levels, s[v], top, &tmp, added, &nadded) < 0:
                    raise MemoryError()
                free(added)
                added = NULL
                free(levels.lvl)
                free(levels.mask)
                levels = tmp
            for v in range(nv):
                _int_to_words(full ^ (1 << <object> v), A + <size_t> v * nw, nw)
            nadded = 0
            added = <uint64_t *> malloc((levels.count + 1) * sizeof(uint64_t))
            if added == NULL:
                raise MemoryError()
            for i in range(levels.count):
                if levels.lvl[i] == top:
                    added[nadded] = levels.mask[i]
                    nadded += 1
            if nadded:
                A2 = <uint64_t *> malloc(<size_t> max(nv, 1) * nw * sizeof(uint64_t))
                if A2 == NULL:
                    raise MemoryError()
                memcpy(A2, A, <size_t> nv * nw * sizeof(uint64_t))
                ctx.nv = nv
                ctx.nw = nw
                ctx.sets = s
                _restrict(&ctx, A, P, added, nadded, A2)
                free(A)
                A = A2
                A2 = NULL

        ctx.nv = nv
        ctx.nw = nw
        ctx.h = h
        ctx.top = top
        ctx.sets = s
        ctx.shared = NULL
        if shared is not None:
            shared_view = shared
            ctx.shared = &shared_view[0]
        ctx.deadline = deadline
        ctx.stop_at = stop_at
        ctx.best = best0
        ctx.found = 0
        ctx.clique = clq
        ctx.best_clique = bclq
        ctx.depth = len(start)
        for i in range(ctx.depth):
            clq[i] = start[i]
        ctx.nodes = 0
        ctx.status = 0
        with nogil:
            rc = _expand(&ctx, P, A, &levels)
        if rc < 0:
            raise MemoryError("search kernel ran out of memory")
        clique = tuple(bclq[i] for i in range(ctx.best)) if ctx.found else ()
        return ctx.best, clique, ctx.nodes, ctx.status
    finally:
        free(s)
        free(A)
        free(A2)
        free(P)
        free(clq)
        free(bclq)
        free(added)
        free(levels.lvl)
        free(levels.mask)
