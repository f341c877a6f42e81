import itertools

import pytest

from lintersect.family import LSet, SetFamily, is_l_intersecting
from lintersect.search import (
    FalsificationError,
    SearchError,
    SearchSpec,
    candidate_universe,
    construct_extremal,
    max_family,
    reports_for_family,
    theorems_for,
    tightness_scan,
)
from lintersect.theorems import TheoremId, thm17_bound

import oracles


@pytest.mark.parametrize(
    "n,L,K,h,want",
    [
        (4, [0], None, 2, 5),
        (7, [1], [2], 2, 6),
        (2, [0], None, 3, 4),
        (4, [1], None, 2, 4),
        (5, [1], [2], 2, 4),
    ],
)
def test_max_family_examples(backend, n, L, K, h, want):
    res = max_family(SearchSpec(n, L, K, h), backend=backend)
    assert res.certified and res.max_size == want == res.witness.m
    assert oracles.max_family_naive(n, set(L), h, None if K is None else set(K)) == want


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("L", [[0], [1], [0, 1], [0, 2], [1, 2]])
def test_max_family_agrees_with_naive(backend, n, L):
    for h in (2, 3):
        res = max_family(SearchSpec(n, L, None, h), backend=backend)
        assert res.max_size == oracles.max_family_naive(n, set(L), h), (n, L, h)


def test_universe():
    assert candidate_universe(3) == list(range(8))
    assert candidate_universe(4, None)[0] == 0
    u = candidate_universe(4, [1, 3])
    assert len(u) == 8 and u == sorted(u) and 0 not in u
    with pytest.raises(SearchError):
        candidate_universe(30)


def test_spec_validation():
    for bad in (dict(n=0), dict(n=65), dict(h=1), dict(thread_count=0), dict(time_budget=0)):
        kw = dict(n=4, L=[0]) | bad
        with pytest.raises(SearchError):
            SearchSpec(**kw)


def test_single_thread_reproducible():
    a = max_family(SearchSpec(6, [1], [2, 3]))
    b = max_family(SearchSpec(6, [1], [2, 3]))
    assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("threads", [2, 8])
def test_thread_count_does_not_change_result(threads):
    for n, L, K, h in [(4, [0], None, 2), (4, [1], None, 2), (7, [1], [2], 2), (4, [0, 1], None, 3)]:
        single = max_family(SearchSpec(n, L, K, h))
        multi = max_family(SearchSpec(n, L, K, h, thread_count=threads))
        assert multi.certified and multi.max_size == single.max_size
        assert multi.witness == single.witness


def test_uncertified_on_tiny_budget():
    res = max_family(SearchSpec(8, [1, 3], None, 2, time_budget=1e-4))
    assert not res.certified
    assert res.witness.m == res.max_size
    assert is_l_intersecting(res.witness, [1, 3]) or res.witness.m < 2


@pytest.mark.parametrize(
    "args,size,sizes",
    [((6, 1, 2, 1), 10, {3}), ((4, 0, 1, 1), 4, {1}), ((5, 2, 2, 2), 6, {3, 4})],
)
def test_construct_examples(args, size, sizes):
    fam = construct_extremal(*args)
    n, l1, s, r = args
    assert fam.m == size == thm17_bound(*args)
    assert set(fam.sizes()) == sizes
    assert all(set(range(1, l1 + 1)) <= x for x in fam.sets())
    # independent pairwise check
    L = set(range(l1, s + l1))
    assert all(len(a & b) in L for a, b in itertools.combinations(fam.sets(), 2))


def test_construct_errors():
    with pytest.raises(Exception):
        construct_extremal(3, 4, 1, 1)
    with pytest.raises(Exception):
        construct_extremal(3, 0, 0, 1)


def test_scan_examples():
    entries = tightness_scan([(4, [0], None, 2), (4, [1], None, 2), (5, [1], [2], 2)])
    by_thm = [{r.theorem: r for r in e.reports} for e in entries]
    fw = by_thm[0][TheoremId.FW_1_3]
    assert fw.bound == 5 and fw.family_size == 5 and fw.tight
    sn = by_thm[1][TheoremId.SNEVILY_1_5]
    assert sn.bound == 4 and sn.tight
    assert entries[2].result.max_size == 4
    assert all(r.within_bound for r in by_thm[2].values() if r.applicable)


def test_scan_records_errors_per_cell():
    entries = tightness_scan([(30, [0], None, 2), (3, [0], None, 2)])
    assert entries[0].error and entries[0].result is None
    assert entries[1].result.max_size == 4


def test_falsification_is_loud(monkeypatch):
    import lintersect.search as search

    real = search.reports_for_family

    def lying(fam, L, K, h, **kw):
        reps = real(fam, L, K, h, **kw)
        for r in reps:
            r.bound = 0
        return reps

    monkeypatch.setattr(search, "reports_for_family", lying)
    with pytest.raises(FalsificationError):
        search.tightness_scan([(4, [0], None, 2)])


def test_reports_for_family_skips_k_theorems_with_empty_set():
    fam = SetFamily.from_sets(3, [set(), {1}, {2}])
    reps = reports_for_family(fam, LSet([0]), None, 2)
    names = {r.theorem for r in reps}
    assert TheoremId.THM_1_7 not in names and TheoremId.FW_1_3 in names
    assert TheoremId.LEMMA_3_6 in theorems_for(3)
