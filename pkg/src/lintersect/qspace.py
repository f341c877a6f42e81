"""Subspaces of F_q^n in canonical reduced row echelon form.

A :class:`Subspace` is identified by its RREF basis, so equality of
subspaces is equality of tuples.  Also here: the q-analogue bounds, the
vector-space versions of the witness / span / intersection lemmas, and
the certified maximum search over enumerated subspaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

from .arith import is_prime_power, qbinom, qbinom_sum
from .family import FamilyError, LSet, ParseError
from .gf import GF, FieldSpec
from .search import DEFAULT_BUDGET, SearchError, max_clique
from .structural import HellyWitness, PreconditionError, greedy_shrink_witness
from .theorems import Verdict

__all__ = [
    "Subspace",
    "SubspaceFamily",
    "QBound",
    "QSearchResult",
    "rref",
    "rank",
    "nullspace",
    "enumerate_subspaces",
    "intersection_dim",
    "intersect",
    "span_of",
    "quotient_family",
    "helly_witness_q",
    "check_lemma42",
    "check_span_bound",
    "q_bound",
    "q_threshold_holds",
    "q_reports",
    "max_subspace_family",
    "parse_subspace_family",
    "serialize_subspace_family",
]

Row = tuple[int, ...]
ENUM_LIMIT = 2_000_000


def rref(F: FieldSpec, rows, n: int) -> tuple[Row, ...]:
    """Reduced row echelon form, zero rows dropped."""
    M = [list(r) for r in rows]
    for r in M:
        if len(r) != n:
            raise FamilyError(f"row {r} does not have length {n}")
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    out_rows = 0
    for col in range(n):
        piv = next((i for i in range(out_rows, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[out_rows], M[piv] = M[piv], M[out_rows]
        prow = M[out_rows]
        c = inv[prow[col]]
        if c != 1:
            prow[:] = [mul[c][x] for x in prow]
        for i in range(len(M)):
            if i != out_rows and M[i][col]:
                f = neg[M[i][col]]
                row = M[i]
                M[i] = [add[a][mul[f][b]] for a, b in zip(row, prow)]
        out_rows += 1
        if out_rows == len(M):
            break
    return tuple(tuple(r) for r in M[:out_rows])


def rank(F: FieldSpec, rows, n: int) -> int:
    return len(rref(F, rows, n))


def nullspace(F: FieldSpec, rows, n: int) -> tuple[Row, ...]:
    """Basis of {x : r . x = 0 for every row r}."""
    R = rref(F, rows, n)
    pivots = [next(j for j, x in enumerate(r) if x) for r in R]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for r, p in zip(R, pivots):
            x[p] = F.neg[r[f]]
        basis.append(tuple(x))
    return tuple(basis)


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    n: int
    basis: tuple[Row, ...]

    def __post_init__(self):
        canon = rref(self.field, self.basis, self.n)
        if canon != tuple(tuple(r) for r in self.basis):
            raise FamilyError("Subspace basis must be given in canonical RREF (use Subspace.span)")

    @classmethod
    def span(cls, field: FieldSpec | int, n: int, vectors) -> "Subspace":
        F = GF(field) if isinstance(field, int) else field
        return cls(F, n, rref(F, vectors, n))

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, ())

    @classmethod
    def whole(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, other: "Subspace") -> bool:
        _same_ambient(self, other)
        return rank(self.field, self.basis + other.basis, self.n) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def rows_text(self) -> list[str]:
        return ["".join(format(x, "x") for x in r) for r in self.basis]


def _same_ambient(U: Subspace, V: Subspace) -> None:
    if U.field != V.field or U.n != V.n:
        raise FamilyError(
            f"ambient mismatch: F_{U.field.q}^{U.n} vs F_{V.field.q}^{V.n}"
        )


@dataclass(frozen=True)
class SubspaceFamily:
    field: FieldSpec
    n: int
    members: tuple[Subspace, ...]

    def __post_init__(self):
        seen = set()
        for i, V in enumerate(self.members):
            if V.field != self.field or V.n != self.n:
                raise FamilyError(f"member {i} lives in a different ambient space")
            if V.basis in seen:
                raise FamilyError(f"member {i} duplicates an earlier member")
            seen.add(V.basis)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def m(self) -> int:
        return len(self.members)

    def dims(self) -> list[int]:
        return [V.dim for V in self.members]


def enumerate_subspaces(field: FieldSpec | int, n: int, k: int, limit: int = ENUM_LIMIT) -> list[Subspace]:
    """Every k-dimensional subspace of F_q^n, built directly in RREF.

    Pivot columns are chosen first; each row then takes arbitrary values in
    the non-pivot columns to the right of its pivot.
    """
    F = GF(field) if isinstance(field, int) else field
    if not 0 <= k <= n:
        return []
    count = qbinom(n, k, F.q)
    if count > limit:
        raise SearchError(f"{count} subspaces exceeds the enumeration limit {limit}")
    out = []
    for pivots in itertools.combinations(range(n), k):
        pset = set(pivots)
        slots = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pset]
        for values in itertools.product(range(F.q), repeat=len(slots)):
            M = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                M[i][p] = 1
            for (i, j), x in zip(slots, values):
                M[i][j] = x
            out.append(Subspace(F, n, tuple(tuple(r) for r in M)))
    return out


def intersection_dim(U: Subspace, V: Subspace) -> int:
    _same_ambient(U, V)
    return U.dim + V.dim - rank(U.field, U.basis + V.basis, U.n)


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """U & V as the annihilator of ann(U) + ann(V)."""
    _same_ambient(U, V)
    F, n = U.field, U.n
    ann = nullspace(F, U.basis, n) + nullspace(F, V.basis, n)
    return Subspace(F, n, rref(F, nullspace(F, ann, n), n))


def span_of(family) -> Subspace:
    members = list(family)
    if not members:
        raise FamilyError("span of an empty family is undefined here")
    F, n = members[0].field, members[0].n
    for V in members:
        _same_ambient(members[0], V)
    return Subspace(F, n, rref(F, [r for V in members for r in V.basis], n))


def quotient_family(family: SubspaceFamily, T: Subspace) -> SubspaceFamily:
    """Images V/T inside F_q^(n - dim T).

    T's RREF basis plus the unit vectors of its non-pivot columns is a
    basis of the whole space; in those coordinates V/T keeps only the
    coordinates on the unit vectors.
    """
    F, n = family.field, family.n
    _same_ambient(T, Subspace.zero(F, n))
    bad = [i for i, V in enumerate(family.members) if not V.contains(T)]
    if bad:
        raise PreconditionError([f"T is not contained in members {bad}"])
    pivots = [next(j for j, x in enumerate(r) if x) for r in T.basis]
    free = [j for j in range(n) if j not in pivots]

    def project(x: Row) -> Row:
        # x = sum a_i t_i + sum b_j e_j with a_i = x[pivot_i]
        out = []
        for j in free:
            acc = x[j]
            for t, p in zip(T.basis, pivots):
                acc = F.sub(acc, F.mul[x[p]][t[j]])
            out.append(acc)
        return tuple(out)

    m = len(free)
    images = [Subspace(F, m, rref(F, [project(r) for r in V.basis], m)) for V in family.members]
    # distinct V containing T have distinct images, so the family stays valid
    return SubspaceFamily(F, m, tuple(images))


def helly_witness_q(family: SubspaceFamily) -> HellyWitness:
    """At most (max dim)+1 members whose intersection is already zero."""
    if family.m == 0:
        raise PreconditionError(["family is empty"])
    total = reduce(intersect, family.members)
    if total.dim:
        raise PreconditionError([f"total intersection has dimension {total.dim}, not 0"])
    whole = Subspace.whole(family.field, family.n)
    chosen, running = greedy_shrink_witness(
        list(family.members), intersect, lambda V: V.dim, 0, whole
    )
    return HellyWitness(tuple(chosen), running)


def check_lemma42(G: SubspaceFamily, V: Subspace, l1: int) -> tuple[Subspace, bool]:
    problems = []
    if l1 < 1:
        problems.append(f"l1 must be positive, got {l1}")
    if G.m == 0:
        problems.append("G is empty")
    else:
        if reduce(intersect, G.members).dim:
            problems.append("G has a nonzero common intersection")
        if V in G.members:
            problems.append("V is a member of G")
        for i, Gi in enumerate(G.members):
            d = intersection_dim(V, Gi)
            if d < l1:
                problems.append(f"dim(V & G_{i}) = {d} < l1 = {l1}")
    if problems:
        raise PreconditionError(problems)
    P = span_of(G.members)
    return P, intersection_dim(P, V) >= l1 + 1


def check_span_bound(H: SubspaceFamily, k: int) -> tuple[int, int, bool]:
    t = H.m
    problems = []
    if t < 2:
        problems.append(f"need t >= 2 members, got {t}")
    if k < 1:
        problems.append(f"k must be positive, got {k}")
    big = [i for i, V in enumerate(H.members) if V.dim > k]
    if big:
        problems.append(f"members {big} exceed dimension k={k}")
    for (i, U), (j, V) in itertools.combinations(enumerate(H.members), 2):
        if intersection_dim(U, V) == 0:
            problems.append(f"members {i} and {j} meet trivially (not intersecting)")
            break
    if problems:
        raise PreconditionError(problems)
    d = span_of(H.members).dim
    bound = k + (t - 1) * (k - 1)
    return d, bound, d <= bound


# --- bounds ----------------------------------------------------------------

@dataclass
class QBound:
    """A Gaussian-binomial bound; ``family_size`` is set when the bound
    was evaluated against a concrete family."""

    theorem: str
    bound: int
    hypotheses: list[tuple[str, Verdict]] = field(default_factory=list)
    threshold: bool | None = None
    family_size: int | None = None

    @property
    def applicable(self) -> bool:
        return all(v is Verdict.PASS for _, v in self.hypotheses)

    @property
    def falsified(self) -> bool:
        return self.family_size is not None and self.applicable and self.family_size > self.bound

    def to_dict(self) -> dict:
        out = {
            "theorem": self.theorem,
            "bound": self.bound,
            "hypotheses": [{"description": d, "verdict": v.value} for d, v in self.hypotheses],
            "threshold": self.threshold,
        }
        if self.family_size is not None:
            out.update(
                applicable=self.applicable,
                family_size=self.family_size,
                within_bound=self.family_size <= self.bound,
                tight=self.family_size == self.bound,
            )
        return out


def _ceil_log(q: int, x: int) -> int:
    """Smallest e >= 0 with q**e >= x."""
    e, p = 0, 1
    while p < x:
        p *= q
        e += 1
    return e


def q_threshold_holds(q: int, n: int, l1: int, s: int, k: int) -> bool:
    """n >= log_q((q^s - 1) [k^2 choose l1+1]_q + 1) + l1, decided exactly."""
    target = (q ** s - 1) * qbinom(k * k, l1 + 1, q) + 1
    return n - l1 >= _ceil_log(q, target)


_Q_PARAMS = {
    "T1_11": ("q", "n", "k"),
    "T1_12": ("q", "n", "s"),
    "T1_13": ("q", "n", "s"),
    "T1_14": ("q", "n", "s", "t"),
    "T1_15": ("q", "n", "s", "l1", "k"),
    "T1_16": ("q", "n", "s", "l1", "r", "k"),
}


def q_bound(theorem: str, **params) -> QBound:
    """Gaussian-binomial bound of one of T1_11 ... T1_16.

    ``k`` is the largest member dimension for T1_15/T1_16, used only by
    the threshold test.
    """
    key = theorem.upper().replace(".", "_")
    if not key.startswith("T"):
        key = "T" + key
    if key not in _Q_PARAMS:
        raise FamilyError(f"unknown q-analogue theorem {theorem!r}")
    need = _Q_PARAMS[key]
    missing = [p for p in need if params.get(p) is None]
    extra = [p for p, v in params.items() if v is not None and p not in need]
    if missing or extra:
        raise FamilyError(f"{key} takes parameters {need}; missing {missing}, unexpected {extra}")
    q, n = params["q"], params["n"]
    if q < 2 or not is_prime_power(q):
        raise FamilyError(f"q must be a prime power, got {q}")
    hyps: list[tuple[str, Verdict]] = []
    threshold = None
    if key == "T1_11":
        k = params["k"]
        hyps.append((f"n >= 2k ({n} >= {2 * k})", Verdict.of(n >= 2 * k)))
        bound = qbinom(n - 1, k - 1, q) if n >= 1 else 0
    elif key == "T1_12":
        bound = qbinom(n, params["s"], q)
    elif key == "T1_13":
        bound = qbinom_sum(n, 0, params["s"], q)
    elif key == "T1_14":
        s, t = params["s"], params["t"]
        bound = qbinom_sum(n, s - t + 1, s, q)
    else:
        s, l1, k = params["s"], params["l1"], params["k"]
        if not 0 <= l1 <= n:
            raise FamilyError(f"need 0 <= l1 <= n, got l1={l1}")
        lo = 0 if key == "T1_15" else s - params["r"] + 1
        bound = qbinom_sum(n - l1, lo, s, q)
        threshold = q_threshold_holds(q, n, l1, s, k)
        hyps.append(("n >= log_q((q^s - 1)[k^2, l1+1]_q + 1) + l1", Verdict.of(threshold)))
    return QBound(key, bound, hyps, threshold)


def q_reports(fam: SubspaceFamily, L, dims=None) -> list[QBound]:
    """Evaluate T1_11 ... T1_16 against ``fam``.

    ``dims`` is the admissible dimension set {k_1..k_r}; by default the
    dimensions present in the family.  A family with fewer than two
    members is vacuously L-intersecting.
    """
    L = L if isinstance(L, LSet) else LSet(L)
    q, n, m = fam.field.q, fam.n, fam.m
    s, l1 = L.s, L.l1
    ds = fam.dims()
    k = max(ds, default=0)
    K = sorted(set(ds) if dims is None else set(dims))
    r = len(K)
    pair_dims = [intersection_dim(U, V) for U, V in itertools.combinations(fam.members, 2)]
    V = Verdict.of
    l_ok = ("family is L-intersecting", V(all(d in L for d in pair_dims)))
    uniform = (f"family is {k}-uniform", V(len(set(ds)) <= 1))
    in_K = (f"member dimensions lie in {{{','.join(map(str, K))}}}", V(all(d in K for d in ds)))
    out = []

    def add(name, bound, hyps, threshold=None):
        out.append(QBound(name, bound, hyps, threshold, m))

    if k >= 1:
        add("T1_11", qbinom(n - 1, k - 1, q), [
            uniform,
            ("pairwise intersections are nonzero", V(all(d > 0 for d in pair_dims))),
            (f"n >= 2k ({n} >= {2 * k})", V(n >= 2 * k)),
        ])
    add("T1_12", qbinom(n, s, q), [uniform, l_ok])
    add("T1_13", qbinom_sum(n, 0, s, q), [l_ok])
    if r:
        add("T1_14", qbinom_sum(n, max(s - r + 1, 0), s, q), [
            l_ok, in_K, (f"k_i > s - t = {s - r}", V(all(x > s - r for x in K))),
        ])
    if l1 <= n:
        thr = q_threshold_holds(q, n, l1, s, k)
        thr_h = (f"threshold with k={k}", V(thr))
        add("T1_15", qbinom_sum(n - l1, 0, s, q), [l_ok, thr_h], thr)
        if r:
            add("T1_16", qbinom_sum(n - l1, max(s - r + 1, 0), s, q), [
                l_ok, in_K, (f"k_i > s - r + l1 = {s - r + l1}", V(all(x > s - r + l1 for x in K))), thr_h,
            ], thr)
    return out


# --- search ----------------------------------------------------------------

@dataclass
class QSearchResult:
    max_size: int
    witness: SubspaceFamily | None
    certified: bool
    nodes_explored: int

    def to_dict(self) -> dict:
        return {
            "max_size": self.max_size,
            "certified": self.certified,
            "nodes_explored": self.nodes_explored,
            "witness": None if self.witness is None else [
                {"dim": V.dim, "rows": V.rows_text()} for V in self.witness.members
            ],
        }


def max_subspace_family(
    field: FieldSpec | int,
    n: int,
    dims,
    L,
    budget: float = DEFAULT_BUDGET,
    threads: int = 1,
    backend: str | None = None,
) -> QSearchResult:
    """Largest family whose pairwise intersection dimensions lie in L.

    ``dims`` restricts member dimensions (None means every dimension).
    """
    F = GF(field) if isinstance(field, int) else field
    L = L if isinstance(L, LSet) else LSet(L)
    dims = range(n + 1) if dims is None else sorted(set(dims))
    universe = [V for k in dims for V in enumerate_subspaces(F, n, k)]
    nv = len(universe)
    adj = [0] * nv
    for i in range(nv):
        for j in range(i + 1, nv):
            if intersection_dim(universe[i], universe[j]) in L:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    # the kernels read only adjacency when h = 2; sets are placeholders
    best, clique, certified, nodes = max_clique(
        [0] * nv, 0, 2, adj=adj, time_budget=budget, threads=threads, backend=backend
    )
    witness = SubspaceFamily(F, n, tuple(universe[v] for v in sorted(clique)))
    return QSearchResult(best, witness, certified, nodes)


# --- file format -----------------------------------------------------------

def parse_subspace_family(text: str) -> SubspaceFamily:
    """Header ``q=<int> n=<int>``; then blank-line separated blocks, each a
    line ``k=<int>`` followed by k rows of n field digits (hex, 0..q-1)."""
    lines = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines(), 1)]
    header = next(((i, ln) for i, ln in lines if ln), None)
    if header is None:
        raise ParseError("missing header 'q=<int> n=<int>'")
    hline, htext = header
    try:
        kv = dict(tok.split("=", 1) for tok in htext.split())
        q, n = int(kv["q"]), int(kv["n"])
    except (ValueError, KeyError):
        raise ParseError(f"malformed header {htext!r}", hline) from None
    if set(kv) != {"q", "n"} or n < 1:
        raise ParseError(f"malformed header {htext!r}", hline)
    try:
        F = GF(q)
    except ValueError as exc:
        raise ParseError(str(exc), hline) from None
    body = [(i, ln) for i, ln in lines if i > hline]
    members = []
    pos = 0
    while pos < len(body):
        i, ln = body[pos]
        if not ln:
            pos += 1
            continue
        if not ln.startswith("k="):
            raise ParseError(f"expected 'k=<int>', got {ln!r}", i)
        try:
            k = int(ln[2:])
        except ValueError:
            raise ParseError(f"malformed dimension line {ln!r}", i) from None
        rows = []
        for _ in range(k):
            pos += 1
            if pos >= len(body) or not body[pos][1]:
                raise ParseError(f"block at line {i} needs {k} rows", i)
            ri, rt = body[pos]
            digits = rt.replace(" ", "")
            if len(digits) != n:
                raise ParseError(f"row {rt!r} must have {n} digits", ri)
            try:
                row = tuple(int(c, 16) for c in digits)
            except ValueError:
                raise ParseError(f"row {rt!r} has a non-digit", ri) from None
            if any(x >= q for x in row):
                raise ParseError(f"row {rt!r} has an entry >= q={q}", ri)
            rows.append(row)
        pos += 1
        basis = rref(F, rows, n)
        if len(basis) != k:
            raise ParseError(f"rows of block at line {i} are linearly dependent", i)
        members.append(Subspace(F, n, basis))
    try:
        return SubspaceFamily(F, n, tuple(members))
    except FamilyError as exc:
        raise ParseError(str(exc)) from None


def serialize_subspace_family(fam: SubspaceFamily) -> str:
    blocks = [f"q={fam.field.q} n={fam.n}"]
    for V in fam.members:
        blocks.append("\n".join([f"k={V.dim}"] + V.rows_text()))
    return "\n\n".join(blocks) + "\n"
