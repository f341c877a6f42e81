"""Constructive steps behind the bounds, as checkable procedures.

Helly-type witness extraction, the union-size and Q-intersection lemma
checks, verification of the cross-intersecting pair conditions, the
h-wise partition used to peel a family into (B, C) and F, and the
common-core search.

``check_*`` functions separate two kinds of failure: violated
preconditions raise :class:`PreconditionError`; a conclusion that fails
on valid input is returned as ``ok=False`` and means a bug somewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

from .family import (
    FamilyError,
    LSet,
    SetFamily,
    common_intersection_mask,
    is_hwise_l_intersecting,
    to_mask,
    to_set,
)
from .theorems import (
    TheoremId,
    TheoremReport,
    Verdict,
    cor18_bound,
    lemma32_bound,
    prop33_threshold,
)

__all__ = [
    "PreconditionError",
    "TupleLimitError",
    "HellyWitness",
    "PartitionResult",
    "PairFamilyInstance",
    "CoreResult",
    "greedy_shrink_witness",
    "helly_witness",
    "check_lemma22",
    "check_union_bound",
    "check_lemma32_instance",
    "check_prop33_instance",
    "kwise_partition",
    "find_common_core",
    "DEFAULT_TUPLE_CAP",
]

DEFAULT_TUPLE_CAP = 10_000_000


class PreconditionError(FamilyError):
    """Input violates a stated precondition; ``violations`` lists each one."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class TupleLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class HellyWitness:
    indices: tuple[int, ...]
    achieved_intersection: frozenset


@dataclass(frozen=True)
class PairFamilyInstance:
    A: SetFamily
    B: SetFamily
    L: LSet

    def __post_init__(self):
        if self.A.m != self.B.m:
            raise FamilyError(f"|A|={self.A.m} differs from |B|={self.B.m}")
        if self.A.n != self.B.n:
            raise FamilyError("A and B live on different ground sets")
        if not isinstance(self.L, LSet):
            object.__setattr__(self, "L", LSet(self.L))


@dataclass(frozen=True)
class PartitionResult:
    B: SetFamily
    C: SetFamily
    F: SetFamily
    reorder: tuple[int, ...]
    k: int
    tuples_scanned: int = 0


@dataclass(frozen=True)
class CoreResult:
    core: frozenset | None
    tuple_indices: tuple[int, ...] | None = None
    anomaly: str | None = None


def greedy_shrink_witness(items, meet, size, target_size, full):
    """Pick indices whose running meet reaches ``target_size``.

    ``meet(x, y)`` intersects two objects and ``size`` measures one; the
    first pick is a smallest item and every later pick is the item that
    leaves the running meet smallest (lowest index on ties).  Each pick
    strictly shrinks the meet, so at most size(first) - target + 1 picks.
    """
    chosen: list[int] = []
    running = full
    running_size = size(full)
    while running_size > target_size or not chosen:
        best_i, best_val, best_size = -1, None, running_size
        for i, item in enumerate(items):
            if i in chosen:
                continue
            cand = meet(running, item)
            cs = size(cand)
            if cs < best_size:
                best_i, best_val, best_size = i, cand, cs
        if best_i < 0:
            if chosen or not items:
                raise FamilyError("witness search stalled: target not reachable")
            # only item(s) equal to the whole space: the first one is the witness
            best_i = 0
            best_val = meet(running, items[0])
            best_size = size(best_val)
        chosen.append(best_i)
        running, running_size = best_val, best_size
    return chosen, running


def helly_witness(fam: SetFamily, target=None) -> HellyWitness:
    """At most k+1 members whose intersection already equals ``target``.

    ``target`` defaults to the whole family's intersection, and must equal
    it when given.
    """
    if fam.m == 0:
        raise PreconditionError(["family is empty"])
    total = common_intersection_mask(fam)
    if target is not None:
        tmask = target if isinstance(target, int) else to_mask(target)
        if tmask != total:
            raise PreconditionError([
                f"family intersection {sorted(to_set(total))} differs from target {sorted(to_set(tmask))}"
            ])
    chosen, running = greedy_shrink_witness(
        fam.members, int.__and__, int.bit_count, total.bit_count(), fam.full_mask
    )
    assert running == total
    return HellyWitness(tuple(chosen), to_set(running))


def _as_mask(x) -> int:
    return x if isinstance(x, int) else to_mask(x)


def check_lemma22(H: SetFamily, F, l1: int) -> tuple[frozenset, bool]:
    """Union Q of H meets F in at least l1 + 1 elements.

    Preconditions: H nonempty with empty total intersection, F not a
    member of H, l1 >= 1, and |F & H_i| >= l1 for every member.
    """
    F = _as_mask(F)
    problems = []
    if l1 < 1:
        problems.append(f"l1 must be positive, got {l1}")
    if H.m == 0:
        problems.append("H is empty")
    else:
        if common_intersection_mask(H):
            problems.append("H has a nonempty common intersection")
        if F in H.members:
            problems.append("F is a member of H")
        for i, h in enumerate(H.members):
            if (F & h).bit_count() < l1:
                problems.append(f"|F & H_{i}| = {(F & h).bit_count()} < l1 = {l1}")
    if problems:
        raise PreconditionError(problems)
    Q = reduce(int.__or__, H.members, 0)
    return to_set(Q), (Q & F).bit_count() >= l1 + 1


def check_union_bound(H: SetFamily, k: int) -> tuple[int, int, bool]:
    """Union of a t-member intersecting family with sizes <= k has at most
    k + (t-1)(k-1) elements."""
    t = H.m
    problems = []
    if t < 2:
        problems.append(f"need t >= 2 members, got {t}")
    if k < 1:
        problems.append(f"k must be positive, got {k}")
    big = [i for i, h in enumerate(H.members) if h.bit_count() > k]
    if big:
        problems.append(f"members {big} exceed size k={k}")
    for (i, a), (j, b) in itertools.combinations(enumerate(H.members), 2):
        if not a & b:
            problems.append(f"members {i} and {j} are disjoint (not intersecting)")
            break
    if problems:
        raise PreconditionError(problems)
    union = reduce(int.__or__, H.members, 0).bit_count()
    bound = k + (t - 1) * (k - 1)
    return union, bound, union <= bound


def check_lemma32_instance(inst: PairFamilyInstance) -> TheoremReport:
    A, B, L = inst.A.members, inst.B.members, inst.L
    m = len(A)
    cond_i = all(
        (A[i] & B[j]).bit_count() in L for i in range(m) for j in range(i + 1, m)
    )
    cond_ii = all((A[i] & B[i]).bit_count() not in L for i in range(m))
    hyps = [
        ("(i) |A_i & B_j| in L for all i < j", Verdict.of(cond_i)),
        ("(ii) |A_i & B_i| not in L for all i", Verdict.of(cond_ii)),
    ]
    return TheoremReport(TheoremId.LEMMA_3_2, hyps, lemma32_bound(inst.A.n, L.s), m)


def check_prop33_instance(inst: PairFamilyInstance, k: int | None = None) -> TheoremReport:
    """Verify conditions (i)-(iii) and the n-threshold for a pair (A, B).

    ``k`` defaults to the maximum member size of B, as in the statement.
    Condition (i) is also reported split at index k+1, since the
    partition procedure only controls pairs whose later index is past the
    initial block.
    """
    L = inst.L
    if L.l1 < 1:
        raise PreconditionError([f"L must consist of positive integers, got min L = {L.l1}"])
    A, B = inst.A.members, inst.B.members
    n, m, s, l1 = inst.A.n, len(A), L.s, L.l1
    if k is None:
        k = max((b.bit_count() for b in B), default=0)
    head = min(k + 1, m)

    bad_pairs = [
        (i, j) for i in range(m) for j in range(i + 1, m)
        if (A[i] & B[j]).bit_count() not in L
    ]
    bad_tail = [(i, j) for i, j in bad_pairs if j >= head]
    cond_i = not bad_pairs
    subset_ok = all(B[i] & ~A[i] == 0 for i in range(m))
    diag_ok = all((A[i] & B[i]).bit_count() not in L for i in range(head, m))
    full_mask = (1 << n) - 1
    meet_all = reduce(int.__and__, B, full_mask) if m else 0
    meet_head = reduce(int.__and__, B[:head], full_mask) if m else 0
    cond_iii = (
        m > 0
        and meet_head.bit_count() == meet_all.bit_count()
        and meet_all.bit_count() < l1
        and all(A[i] == B[i] for i in range(head))
    )
    thr = prop33_threshold(k, l1, s)
    hyps = [
        ("min L >= 1", Verdict.PASS),
        ("(i) |A_i & B_j| in L for all i < j", Verdict.of(cond_i)),
        ("(ii) B_i subset of A_i for all i and |A_i & B_i| not in L for i >= k+2",
         Verdict.of(subset_ok and diag_ok)),
        ("(iii) |meet of first k+1 B_j| = |meet of all B_j| < l1 and A_i = B_i for i <= k+1",
         Verdict.of(cond_iii)),
        (f"n >= [C(k^2+k, l1+1)+1] s + l1 with k={k} ({n} >= {thr})", Verdict.of(n >= thr)),
    ]
    bound = cor18_bound(n, l1, s) if l1 <= n else 0
    report = TheoremReport(TheoremId.PROP_3_3, hyps, bound, m)
    report.extra.update({
        "k": k,
        "threshold": thr,
        "size_A": m,
        "size_B": m,
        "cond_i_tail": not bad_tail,
        "cond_i_head": len(bad_pairs) == len(bad_tail),
    })
    if bad_pairs and not bad_tail:
        report.notes.append(
            f"(i) fails only inside the first k+1={head} indices: {bad_pairs[:5]}"
        )
    return report


def _first_violating_tuple(members, allowed, size, cap, counter):
    """Lexicographically first index tuple (into ``members``) of the given
    size whose intersection size is not allowed, or None."""
    count = len(members)

    def rec(start, depth, meet, chosen):
        if depth == size:
            counter[0] += 1
            if counter[0] > cap:
                raise TupleLimitError(f"tuple scan exceeded cap of {cap}")
            return None if (allowed >> meet.bit_count()) & 1 else tuple(chosen)
        for j in range(start, count - (size - depth) + 1):
            chosen.append(j)
            hit = rec(j + 1, depth + 1, meet & members[j], chosen)
            chosen.pop()
            if hit is not None:
                return hit
        return None

    return rec(0, 0, -1, [])


BLOCK_SEARCH_CAP = 20_000


def _compatible_block(members, allowed, size, k, target, cap=BLOCK_SEARCH_CAP):
    """Lexicographically first ``size`` indices that meet in ``target``,
    include a member of size ``k`` and are pairwise L-intersecting.

    None when no such block exists or the search exceeds ``cap`` nodes.
    """
    m = len(members)
    compat = [0] * m
    for i, j in itertools.combinations(range(m), 2):
        if allowed >> (members[i] & members[j]).bit_count() & 1:
            compat[i] |= 1 << j
            compat[j] |= 1 << i
    nodes = 0
    chosen: list[int] = []

    def rec(cand: int, meet: int, has_k: bool):
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise TupleLimitError
        if len(chosen) == size:
            return meet == target and has_k
        while cand:
            if (cand.bit_count() + len(chosen)) < size:
                return False
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            chosen.append(i)
            x = members[i]
            if rec(cand & compat[i], meet & x, has_k or x.bit_count() == k):
                return True
            chosen.pop()
        return False

    full = (1 << m) - 1
    try:
        found = rec(full, ~0, False)
    except TupleLimitError:
        return None
    return list(chosen) if found else None


def _helly_block(fam: SetFamily, size: int, k: int) -> list[int]:
    members = fam.members
    block = list(helly_witness(fam).indices)
    sizes = [x.bit_count() for x in members]
    if max(sizes[i] for i in block) < k:
        block.append(sizes.index(k))
    for i in range(fam.m):
        if len(block) >= size:
            break
        if i not in block:
            block.append(i)
    assert len(block) == size
    return block


def kwise_partition(fam: SetFamily, L, h: int, tuple_cap: int = DEFAULT_TUPLE_CAP) -> PartitionResult:
    """Split an h-wise L-intersecting family into B (with companions C) and F.

    The family is first reordered so that an initial block of k+1 members
    (k = largest member size) already meets in the whole family's
    intersection and holds a largest member.  Among such blocks the first
    pairwise L-intersecting one is preferred, since pairs inside the block
    are otherwise unconstrained; failing that, a greedy Helly witness is
    padded out.  Then, while some (h-1) unprocessed members meet in a size
    outside L, the lowest-index one moves to B with that meet as its
    companion.  Whatever is left is F, which is (h-1)-wise L-intersecting.
    """
    L = L if isinstance(L, LSet) else LSet(L)
    if h < 3:
        raise PreconditionError([f"h must be >= 3, got {h}"])
    problems = []
    if fam.m == 0:
        problems.append("family is empty")
    elif fam.m >= h and not is_hwise_l_intersecting(fam, L, h):
        problems.append(f"family is not {h}-wise L-intersecting")
    # with 0 in L the size condition cannot hold; the l1 = 0 case runs unchecked
    if fam.m and L.l1 >= 1 and common_intersection_mask(fam).bit_count() >= L.l1:
        problems.append(f"|common intersection| >= min L = {L.l1}")
    if problems:
        raise PreconditionError(problems)

    members = fam.members
    m = fam.m
    k = fam.max_size()
    block_size = min(k + 1, m)
    allowed = L.mask()
    block = _compatible_block(members, allowed, block_size, k, common_intersection_mask(fam))
    if block is None:
        block = _helly_block(fam, block_size, k)
    order = block + [i for i in range(m) if i not in block]

    B = [members[i] for i in order[:block_size]]
    C = list(B)
    done = order[:block_size]
    rest = order[block_size:]
    counter = [0]
    while len(rest) >= h - 1:
        hit = _first_violating_tuple([members[i] for i in rest], allowed, h - 1, tuple_cap, counter)
        if hit is None:
            break
        meet = reduce(int.__and__, (members[rest[j]] for j in hit))
        first = rest.pop(hit[0])
        done.append(first)
        B.append(members[first])
        C.append(meet)
    order = done + rest
    return PartitionResult(
        B=SetFamily(fam.n, tuple(B)),
        C=SetFamily(fam.n, tuple(C), allow_repeats=True),
        F=SetFamily(fam.n, tuple(members[i] for i in rest)),
        reorder=tuple(order),
        k=k,
        tuples_scanned=counter[0],
    )


def find_common_core(fam: SetFamily, L, h: int, tuple_cap: int = DEFAULT_TUPLE_CAP) -> CoreResult:
    """Look for h-1 members meeting in exactly min(L) elements.

    If found, that meet must sit inside every member; a violation is
    returned as an anomaly rather than raised.
    """
    L = L if isinstance(L, LSet) else LSet(L)
    problems = []
    if h < 3:
        problems.append(f"h must be >= 3, got {h}")
    if L.l1 < 1:
        problems.append("min L must be positive")
    if fam.m >= h and not is_hwise_l_intersecting(fam, L, h):
        problems.append(f"family is not {h}-wise L-intersecting")
    if problems:
        raise PreconditionError(problems)
    if fam.m < h - 1:
        return CoreResult(None)
    allowed_only_l1 = ~(1 << L.l1)  # every size except l1 counts as "allowed"
    hit = _first_violating_tuple(fam.members, allowed_only_l1, h - 1, tuple_cap, [0])
    if hit is None:
        return CoreResult(None)
    X = reduce(int.__and__, (fam.members[j] for j in hit))
    outside = [i for i, a in enumerate(fam.members) if X & ~a]
    anomaly = None
    if outside:
        anomaly = f"core {sorted(to_set(X))} is not contained in members {outside}"
    return CoreResult(to_set(X), hit, anomaly)
