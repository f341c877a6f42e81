import itertools
import random
from functools import reduce

import pytest
from hypothesis import given, settings, strategies as st

from lintersect.arith import qbinom
from lintersect.family import FamilyError, ParseError
from lintersect.gf import GF
from lintersect.qspace import (
    Subspace,
    SubspaceFamily,
    check_lemma42,
    check_span_bound,
    enumerate_subspaces,
    helly_witness_q,
    intersect,
    intersection_dim,
    max_subspace_family,
    parse_subspace_family,
    q_bound,
    q_reports,
    q_threshold_holds,
    quotient_family,
    rref,
    serialize_subspace_family,
    span_of,
)
from lintersect.search import SearchError
from lintersect.structural import PreconditionError

import oracles

F2 = GF(2)


def e(i, n):
    return tuple(int(j == i) for j in range(n))


def S(n, *vectors, q=2):
    return Subspace.span(q, n, vectors)


def fam(*members):
    return SubspaceFamily(members[0].field, members[0].n, members)


def vecset(U, q):
    return oracles.prime_span(U.basis, q, U.n)


def random_subspace(rng, q, n, maxdim=None):
    k = rng.randint(0, n if maxdim is None else maxdim)
    vecs = [tuple(rng.randrange(q) for _ in range(n)) for _ in range(k)]
    return Subspace.span(q, n, vecs)


# --- enumeration ----------------------------------------------------------

def test_lines_of_plane():
    lines = enumerate_subspaces(2, 2, 1)
    assert sorted(V.basis for V in lines) == [((0, 1),), ((1, 0),), ((1, 1),)]
    assert len(enumerate_subspaces(3, 2, 1)) == 4


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_enumeration_matches_naive(q, n):
    for k in range(n + 1):
        subs = enumerate_subspaces(q, n, k)
        assert len({V.basis for V in subs}) == len(subs) == qbinom(n, k, q)
        if k and q ** n <= 27:
            assert len(subs) == oracles.count_subspaces_naive(n, k, q)


def test_enumeration_prime_power_field():
    assert len(enumerate_subspaces(4, 3, 1)) == qbinom(3, 1, 4) == 21
    assert len(enumerate_subspaces(2, 3, 5)) == 0


def test_enumeration_limit():
    with pytest.raises(SearchError):
        enumerate_subspaces(2, 6, 3, limit=100)


def test_rref_canonical():
    with pytest.raises(FamilyError):
        Subspace(F2, 2, ((1, 1), (0, 1)))
    assert S(3, (1, 1, 0), (0, 1, 1)) == S(3, (1, 0, 1), (0, 1, 1))
    assert rref(GF(3), [(2, 1)], 2) == ((1, 2),)


# --- linear algebra ---------------------------------------------------------

def test_intersection_examples():
    assert intersection_dim(S(4, e(0, 4), e(1, 4)), S(4, e(1, 4), e(2, 4))) == 1
    U = S(4, (1, 1, 0, 1), (0, 0, 1, 1))
    assert intersection_dim(U, U) == 2
    assert intersection_dim(S(2, e(0, 2)), S(2, e(1, 2))) == 0
    with pytest.raises(FamilyError):
        intersection_dim(S(2, e(0, 2)), S(3, e(0, 3)))
    with pytest.raises(FamilyError):
        intersection_dim(S(2, e(0, 2)), S(2, e(0, 2), q=3))


def test_span_examples():
    assert span_of([S(3, e(0, 3)), S(3, e(1, 3))]) == S(3, e(0, 3), e(1, 3))
    U = S(3, (1, 1, 1))
    assert span_of([U]) == U
    assert span_of([S(2, (1, 0)), S(2, (1, 1))]).dim == 2
    with pytest.raises(FamilyError):
        span_of([])


@settings(max_examples=200)
@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5]), st.integers(1, 4))
def test_dimension_formula_and_meet(seed, q, n):
    rng = random.Random(seed)
    U, V = random_subspace(rng, q, n), random_subspace(rng, q, n)
    d = intersection_dim(U, V)
    assert d + span_of([U, V]).dim == U.dim + V.dim
    W = intersect(U, V)
    assert W.dim == d
    # independent check on explicit vector sets
    assert vecset(W, q) == vecset(U, q) & vecset(V, q)
    assert oracles.log_q(len(vecset(U, q) & vecset(V, q)), q) == d


@settings(max_examples=100)
@given(st.integers(0, 2**32), st.integers(2, 4))
def test_quotient_drops_dims_by_dim_t(seed, n):
    rng = random.Random(seed)
    T = random_subspace(rng, 2, n, maxdim=2)
    members = []
    for _ in range(6):
        extra = [tuple(rng.randrange(2) for _ in range(n)) for _ in range(rng.randint(0, 2))]
        V = Subspace.span(2, n, list(T.basis) + extra)
        if V not in members:
            members.append(V)
    fq = quotient_family(fam(*members), T)
    assert fq.n == n - T.dim
    for V, W in zip(members, fq.members):
        assert W.dim == V.dim - T.dim
    for (a, b), (x, y) in zip(
        itertools.combinations(members, 2), itertools.combinations(fq.members, 2)
    ):
        assert intersection_dim(x, y) == intersection_dim(a, b) - T.dim


def test_quotient_examples():
    n = 3
    T = S(n, e(0, n))
    planes = [V for V in enumerate_subspaces(2, 3, 2) if V.contains(T)]
    fq = quotient_family(fam(*planes), T)
    assert fq.n == 2 and fq.dims() == [1, 1, 1]
    assert quotient_family(fam(T), T).members[0].dim == 0
    with pytest.raises(PreconditionError):
        quotient_family(fam(S(3, e(1, 3))), T)


# --- structural lemmas ------------------------------------------------------

def test_helly_q_examples():
    lines = fam(S(2, (1, 0)), S(2, (0, 1)), S(2, (1, 1)))
    assert len(helly_witness_q(lines).indices) == 2
    planes = fam(S(3, e(0, 3), e(1, 3)), S(3, e(1, 3), e(2, 3)), S(3, e(0, 3), e(2, 3)))
    assert all(intersection_dim(a, b) == 1 for a, b in itertools.combinations(planes.members, 2))
    w = helly_witness_q(planes)
    assert len(w.indices) == 3 and w.achieved_intersection.dim == 0
    with pytest.raises(PreconditionError):
        helly_witness_q(fam(S(3, e(0, 3), e(1, 3)), S(3, e(0, 3), e(2, 3))))


@settings(max_examples=100)
@given(st.integers(0, 2**32))
def test_helly_q_bound(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    members = list({random_subspace(rng, 2, n) for _ in range(rng.randint(1, 8))})
    F = fam(*members)
    if reduce(intersect, members).dim:
        return
    w = helly_witness_q(F)
    assert len(w.indices) <= max(F.dims()) + 1
    assert reduce(intersect, [members[i] for i in w.indices]).dim == 0


def test_lemma42_instance():
    n = 3
    G = fam(S(n, e(0, n)), S(n, e(1, n)))
    V = S(n, e(0, n), e(1, n))
    P, ok = check_lemma42(G, V, 1)
    assert ok and P.dim == 2 and intersection_dim(P, V) == 2
    with pytest.raises(PreconditionError):
        check_lemma42(fam(S(n, e(0, n)), S(n, e(0, n), e(1, n))), V, 1)
    with pytest.raises(PreconditionError):
        check_lemma42(fam(S(n, e(0, n)), V), V, 1)


def test_span_bound_examples():
    a, b = S(3, e(0, 3), e(1, 3)), S(3, e(0, 3), e(2, 3))
    assert check_span_bound(fam(a, b), 2) == (3, 3, True)
    line = (1, 0, 0, 0)
    H = fam(*[S(4, line, v) for v in [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]])
    d, bound, ok = check_span_bound(H, 2)
    # k + (t - 1)(k - 1) = 2 + 2 * 1
    assert d == 4 and bound == 4 and ok
    with pytest.raises(PreconditionError):
        check_span_bound(fam(S(2, (1, 0)), S(2, (0, 1))), 1)


# --- bounds -----------------------------------------------------------------

def test_q_bound_examples():
    assert q_bound("T1_11", q=2, n=4, k=2).bound == 7
    b = q_bound("T1_15", q=2, n=7, l1=1, s=1, k=2)
    assert b.bound == 64 and b.threshold is True and b.applicable
    assert q_bound("T1_13", q=2, n=4, s=2).bound == 51
    assert q_bound("1.12", q=3, n=3, s=1).bound == 13
    assert q_bound("T1_14", q=2, n=4, s=2, t=1).bound == 35
    assert q_bound("T1_16", q=2, n=7, s=2, l1=1, r=1, k=2).bound == qbinom(6, 2, 2)


def test_q_bound_parameter_errors():
    with pytest.raises(FamilyError):
        q_bound("T1_11", q=2, n=4)
    with pytest.raises(FamilyError):
        q_bound("T1_12", q=2, n=4, s=1, k=2)
    with pytest.raises(FamilyError):
        q_bound("T1_99", q=2, n=4)
    with pytest.raises(FamilyError):
        q_bound("T1_12", q=6, n=4, s=1)


@given(st.sampled_from([2, 3, 4, 5]), st.integers(0, 40), st.integers(0, 3), st.integers(1, 3), st.integers(1, 3))
def test_threshold_matches_integer_inequality(q, n, l1, s, k):
    if l1 > n:
        return
    direct = q ** (n - l1) >= (q ** s - 1) * qbinom(k * k, l1 + 1, q) + 1
    assert q_threshold_holds(q, n, l1, s, k) is direct


def test_q_reports_on_star():
    line = S(4, e(0, 4))
    star = [V for V in enumerate_subspaces(2, 4, 2) if V.contains(line)]
    reps = {r.theorem: r for r in q_reports(fam(*star), [1])}
    assert reps["T1_11"].applicable and reps["T1_11"].family_size == reps["T1_11"].bound == 7
    assert not any(r.falsified for r in reps.values())


# --- search -----------------------------------------------------------------

@pytest.mark.parametrize("n,dims,L,want", [(4, [2], [1], 7), (3, [1], [0], 7), (2, [1], [1], 1)])
def test_max_subspace_family_examples(backend, n, dims, L, want):
    res = max_subspace_family(2, n, dims, L, backend=backend)
    assert res.certified and res.max_size == want == res.witness.m
    ws = res.witness.members
    assert all(intersection_dim(a, b) in L for a, b in itertools.combinations(ws, 2))


def test_max_subspace_family_agrees_with_naive_clique():
    universe = enumerate_subspaces(2, 3, 1) + enumerate_subspaces(2, 3, 2)
    nv = len(universe)
    adj = [0] * nv
    for i, j in itertools.combinations(range(nv), 2):
        # independent intersection test on explicit vector sets
        if oracles.log_q(len(vecset(universe[i], 2) & vecset(universe[j], 2)), 2) == 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    assert max_subspace_family(2, 3, [1, 2], [1]).max_size == oracles.max_clique_naive(adj)


# --- file format --------------------------------------------------------------

def test_round_trip():
    rng = random.Random(8)
    for q in (2, 3, 4):
        members = list({random_subspace(rng, q, 3) for _ in range(6)})
        F = SubspaceFamily(GF(q), 3, tuple(members))
        assert parse_subspace_family(serialize_subspace_family(F)) == F


def test_parse_example():
    text = "q=2 n=3\n\nk=1\n100\n\nk=2\n010\n001\n"
    F = parse_subspace_family(text)
    assert F.dims() == [1, 2] and F.members[1] == S(3, e(1, 3), e(2, 3))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "q=6 n=2\n",
        "q=2\n",
        "q=2 n=2\nk=1\n12\n",
        "q=2 n=2\nk=2\n11\n11\n",
        "q=2 n=2\nk=1\n1\n",
        "q=2 n=2\nk=2\n10\n",
        "q=2 n=2\nk=1\n10\n\nk=1\n10\n",
        "q=2 n=2\n10\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_subspace_family(text)
