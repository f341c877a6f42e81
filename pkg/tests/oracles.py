"""Brute-force reference implementations.

Deliberately naive: frozensets instead of bitmasks, plain recursion
instead of branch and bound, vector sets instead of RREF.  Nothing here
imports the package's search or linear-algebra code.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import reduce


def binom(n, k):
    if k < 0 or k > n or n < 0:
        return 0
    return sum(1 for _ in itertools.combinations(range(n), k))


def qbinom_formula(n, k, q):
    if k < 0 or k > n:
        return 0
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(q ** n - q ** i, q ** k - q ** i)
    assert num.denominator == 1
    return int(num)


# --- set families --------------------------------------------------------

def all_subsets(n, sizes=None):
    out = []
    for r in range(n + 1):
        if sizes is None or r in sizes:
            out.extend(frozenset(c) for c in itertools.combinations(range(1, n + 1), r))
    return out


def meet(sets):
    return reduce(frozenset.__and__, sets)


def hwise_ok(fam, L, h):
    return all(len(meet(t)) in L for t in itertools.combinations(fam, h))


def max_family_naive(n, L, h=2, sizes=None):
    """Largest h-wise L-intersecting family by plain exhaustive extension."""
    universe = all_subsets(n, sizes)
    L = set(L)
    best = [0]

    def ext(chosen, start):
        best[0] = max(best[0], len(chosen))
        for i in range(start, len(universe)):
            x = universe[i]
            ok = all(
                len(meet(t + (x,))) in L
                for t in itertools.combinations(chosen, h - 1)
            )
            if ok:
                ext(chosen + (x,), i + 1)

    ext((), 0)
    return best[0]


def max_clique_naive(adj):
    """Exhaustive maximum clique of a graph given as bitmask rows."""
    nv = len(adj)
    best = 0
    for mask in range(1 << nv):
        c = mask.bit_count()
        if c <= best:
            continue
        vs = [v for v in range(nv) if mask >> v & 1]
        if all(adj[a] >> b & 1 for a, b in itertools.combinations(vs, 2)):
            best = c
    return best


def random_family(rng: random.Random, n, m, max_size):
    pool = set()
    tries = 0
    while len(pool) < m and tries < 50 * m:
        tries += 1
        r = rng.randint(0, min(max_size, n))
        pool.add(frozenset(rng.sample(range(1, n + 1), r)))
    return list(pool)


# --- subspaces -------------------------------------------------------------

def prime_span(vectors, q, n):
    """All vectors spanned by ``vectors`` over the prime field Z_q."""
    span = {tuple([0] * n)}
    for v in vectors:
        span = {
            tuple((a + c * b) % q for a, b in zip(w, v))
            for w in span for c in range(q)
        }
    return frozenset(span)


def log_q(size, q):
    d = 0
    while q ** d < size:
        d += 1
    assert q ** d == size
    return d


def count_subspaces_naive(n, k, q):
    """Distinct spans of k vectors having exactly q^k elements (q prime)."""
    vecs = list(itertools.product(range(q), repeat=n))
    seen = set()
    for combo in itertools.combinations(vecs[1:], k):
        sp = prime_span(combo, q, n)
        if len(sp) == q ** k:
            seen.add(sp)
    return len(seen)
