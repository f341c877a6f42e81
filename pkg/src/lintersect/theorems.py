"""Bounds for L-intersecting set systems and hypothesis checking.

Each ``*_bound`` function evaluates one closed-form bound exactly.
:func:`apply_theorem` checks a concrete family against a theorem's
hypotheses and reports how its size compares to the bound.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .arith import binom, binom_sum, floor_rational
from .family import (
    FamilyError,
    KSet,
    LSet,
    SetFamily,
    common_intersection_mask,
    is_hwise_l_intersecting,
    is_l_intersecting,
    sizes_in,
)

__all__ = [
    "TheoremId",
    "Verdict",
    "TheoremReport",
    "KwiseParams",
    "ekr_bound",
    "t_intersecting_bound",
    "frankl_wilson_bound",
    "abs_bound",
    "snevily_bound",
    "thm17_bound",
    "thm17_threshold",
    "cor18_bound",
    "fs_kwise_bound",
    "gs_kwise_bound",
    "gs_threshold",
    "lemma36_bound",
    "lemma36_threshold",
    "lemma32_bound",
    "prop33_threshold",
    "apply_theorem",
    "parse_theorem_id",
]


class TheoremId(enum.Enum):
    EKR_1_1 = "EKR_1_1"
    TINT_1_2 = "TINT_1_2"
    FW_1_3 = "FW_1_3"
    ABS_1_4 = "ABS_1_4"
    SNEVILY_1_5 = "SNEVILY_1_5"
    CONJ_1_6 = "CONJ_1_6"
    THM_1_7 = "THM_1_7"
    COR_1_8 = "COR_1_8"
    FS_1_9 = "FS_1_9"
    FS_1_10 = "FS_1_10"
    LEMMA_3_2 = "LEMMA_3_2"
    PROP_3_3 = "PROP_3_3"
    GS_3_4 = "GS_3_4"
    THM_3_5 = "THM_3_5"
    LEMMA_3_6 = "LEMMA_3_6"


_ALIASES = {
    "ekr": TheoremId.EKR_1_1,
    "tint": TheoremId.TINT_1_2,
    "t-intersecting": TheoremId.TINT_1_2,
    "fw": TheoremId.FW_1_3,
    "frankl-wilson": TheoremId.FW_1_3,
    "abs": TheoremId.ABS_1_4,
    "snevily": TheoremId.SNEVILY_1_5,
    "conj16": TheoremId.CONJ_1_6,
    "conj": TheoremId.CONJ_1_6,
    "thm17": TheoremId.THM_1_7,
    "cor18": TheoremId.COR_1_8,
    "fs19": TheoremId.FS_1_9,
    "fs110": TheoremId.FS_1_10,
    "fs": TheoremId.FS_1_10,
    "lemma32": TheoremId.LEMMA_3_2,
    "prop33": TheoremId.PROP_3_3,
    "gs34": TheoremId.GS_3_4,
    "gs": TheoremId.GS_3_4,
    "thm35": TheoremId.THM_3_5,
    "lemma36": TheoremId.LEMMA_3_6,
}


def parse_theorem_id(name: str | TheoremId) -> TheoremId:
    if isinstance(name, TheoremId):
        return name
    key = name.strip()
    if key.upper() in TheoremId.__members__:
        return TheoremId[key.upper()]
    try:
        return _ALIASES[key.lower()]
    except KeyError:
        raise FamilyError(f"unknown theorem {name!r}") from None


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, ok: bool) -> "Verdict":
        return cls.PASS if ok else cls.FAIL


@dataclass
class TheoremReport:
    """Hypothesis verdicts, exact bound, and where the family sits.

    ``within_bound`` and ``tight`` are always filled in; they only carry
    meaning when ``applicable`` is true (every hypothesis passed).
    """

    theorem: TheoremId
    hypothesis_verdicts: list[tuple[str, Verdict]]
    bound: int | Fraction
    family_size: int
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def effective_bound(self) -> int:
        return floor_rational(self.bound)

    @property
    def within_bound(self) -> bool:
        return self.family_size <= self.effective_bound

    @property
    def tight(self) -> bool:
        return self.family_size == self.effective_bound

    @property
    def applicable(self) -> bool:
        return all(v is Verdict.PASS for _, v in self.hypothesis_verdicts)

    @property
    def falsified(self) -> bool:
        """All hypotheses hold yet the size exceeds the bound."""
        return self.applicable and not self.within_bound

    def verdict(self, description_prefix: str) -> Verdict:
        for desc, v in self.hypothesis_verdicts:
            if desc.startswith(description_prefix):
                return v
        raise KeyError(description_prefix)

    def to_dict(self) -> dict:
        bound = self.bound
        if isinstance(bound, Fraction) and bound.denominator != 1:
            bound_repr = f"{bound.numerator}/{bound.denominator}"
        else:
            bound_repr = int(bound)
        return {
            "theorem": self.theorem.value,
            "hypotheses": [{"description": d, "verdict": v.value} for d, v in self.hypothesis_verdicts],
            "applicable": self.applicable,
            "bound": bound_repr,
            "effective_bound": self.effective_bound,
            "family_size": self.family_size,
            "within_bound": self.within_bound,
            "tight": self.tight,
            "notes": list(self.notes),
            **({"extra": dict(self.extra)} if self.extra else {}),
        }


@dataclass(frozen=True)
class KwiseParams:
    """Intersection arity ``h`` and, for FS_1_9/FS_1_10, whether the
    caller vouches for n >= n0(h, s)."""

    h: int
    assert_n0: bool = False

    def __post_init__(self):
        if self.h < 2:
            raise FamilyError(f"h must be >= 2, got {self.h}")


# --- closed-form bounds ----------------------------------------------------

def ekr_bound(n: int, k: int) -> int:
    return binom(n - 1, k - 1)


def t_intersecting_bound(n: int, k: int, t: int) -> int:
    if t > k:
        raise ValueError(f"t={t} exceeds k={k}")
    return binom(n - t, k - t)


def frankl_wilson_bound(n: int, s: int) -> int:
    return binom_sum(n, 0, s)


def abs_bound(n: int, s: int, r: int) -> int:
    return binom_sum(n, s - r + 1, s)


def snevily_bound(n: int, s: int) -> int:
    if n < 1:
        raise ValueError("snevily_bound needs n >= 1")
    return binom_sum(n - 1, 0, s)


def _check_l1(n: int, l1: int) -> None:
    if l1 < 0 or l1 > n:
        raise ValueError(f"l1={l1} must lie in 0..n={n}")


def thm17_bound(n: int, l1: int, s: int, r: int) -> int:
    _check_l1(n, l1)
    return binom_sum(n - l1, s - r + 1, s)


def cor18_bound(n: int, l1: int, s: int) -> int:
    """The thm17_bound sum taken over every index 0..s (r = n + 1)."""
    _check_l1(n, l1)
    return binom_sum(n - l1, 0, s)


def thm17_threshold(k: int, l1: int, s: int) -> int:
    """Smallest n for which the THM_1_7 conclusion is asserted."""
    return binom(k * k, l1 + 1) * s + l1


def prop33_threshold(k: int, l1: int, s: int) -> int:
    return (binom(k * k + k, l1 + 1) + 1) * s + l1


gs_threshold = prop33_threshold


def lemma36_threshold(k: int, l1: int, s: int) -> int:
    return binom(k * k + k, l1 + 1) * s + l1


def fs_kwise_bound(h: int, n: int, s: int, l1: int = 0) -> Fraction:
    if h < 3:
        raise ValueError(f"fs_kwise_bound needs h >= 3, got {h}")
    _check_l1(n, l1)
    m = n - l1
    return Fraction(h + s - 1, s + 1) * binom(m, s) + binom_sum(m, 0, s - 1)


def gs_kwise_bound(h: int, n: int, s: int, l1: int = 0) -> int:
    if h < 2:
        raise ValueError(f"gs_kwise_bound needs h >= 2, got {h}")
    _check_l1(n, l1)
    return (h - 1) * binom_sum(n - l1, 0, s)


def lemma36_bound(h: int, n: int, s: int, l1: int) -> int:
    if h < 3:
        raise ValueError(f"lemma36_bound needs h >= 3, got {h}")
    if l1 < 1:
        raise ValueError("lemma36_bound needs l1 >= 1")
    _check_l1(n, l1)
    return binom(n - l1, s) + (h - 1) * binom_sum(n - l1, 0, s - 1)


def lemma32_bound(n: int, s: int) -> int:
    return binom_sum(n, 0, s)


# --- hypothesis checking ---------------------------------------------------

def _pairwise_ok(fam: SetFamily, L: LSet) -> bool:
    # a family of fewer than two members is vacuously L-intersecting here;
    # the raw predicate refuses it on purpose, the theorem statements do not
    return fam.m < 2 or is_l_intersecting(fam, L)


def _hwise_ok(fam: SetFamily, L: LSet, h: int) -> bool:
    return fam.m < h or is_hwise_l_intersecting(fam, L, h)


def _uniform_size(fam: SetFamily) -> int | None:
    sizes = set(fam.sizes())
    return sizes.pop() if len(sizes) == 1 else None


def _hminus1_sizes(fam: SetFamily, h: int) -> set[int]:
    if fam.m < h - 1:
        return set()
    return {
        reduce(int.__and__, combo, fam.full_mask).bit_count()
        for combo in itertools.combinations(fam.members, h - 1)
    }


def _require(value, what: str, theorem: TheoremId):
    if value is None:
        raise FamilyError(f"{theorem.value} requires {what}")
    return value


def _equality_clause(report: TheoremReport, fam: SetFamily, n: int, threshold: int, l1: int) -> None:
    if report.applicable and report.tight and n > threshold:
        core = common_intersection_mask(fam).bit_count() if fam.m else 0
        has_core = core >= l1
        report.extra["common_l1_subset"] = has_core
        report.notes.append(
            "equality case: common l1-subset "
            + ("present" if has_core else "ABSENT (contradicts rigidity clause)")
        )


def apply_theorem(
    theorem,
    fam: SetFamily,
    L,
    K=None,
    kwise: KwiseParams | None = None,
) -> TheoremReport:
    """Check every hypothesis of ``theorem`` on ``fam`` and compare sizes.

    ``K`` is required for ABS_1_4, CONJ_1_6 and THM_1_7; ``kwise`` for the
    h-wise results (GS_3_4, THM_3_5, FS_1_9, FS_1_10, LEMMA_3_6).  The
    bound is computed even when hypotheses fail.
    """
    t = parse_theorem_id(theorem)
    L = L if isinstance(L, LSet) else LSet(L)
    if K is not None and not isinstance(K, KSet):
        K = KSet(K)
    n, m, s, l1 = fam.n, fam.m, L.s, L.l1
    kmax = fam.max_size()
    V = Verdict.of
    hyps: list[tuple[str, Verdict]] = []
    notes: list[str] = []

    if t in (TheoremId.EKR_1_1, TheoremId.TINT_1_2):
        uniform = _uniform_size(fam)
        if K is not None:
            hyps.append((f"K is a single size (K={K})", V(K.r == 1)))
            k = K.values[0]
        else:
            k = uniform if uniform is not None else kmax
        hyps.append((f"family is {k}-uniform", V(all(x == k for x in fam.sizes()))))
        if t is TheoremId.EKR_1_1:
            inter = all(a & b for a, b in itertools.combinations(fam.members, 2))
            hyps.append(("family is intersecting", V(inter)))
            hyps.append((f"n >= 2k ({n} >= {2 * k})", V(n >= 2 * k)))
            return TheoremReport(t, hyps, binom(n - 1, k - 1), m, notes)
        tt = l1
        hyps.append((f"t = min L >= 1 (t={tt})", V(tt >= 1)))
        hyps.append((f"t <= k ({tt} <= {k})", V(tt <= k)))
        tint = all((a & b).bit_count() >= tt for a, b in itertools.combinations(fam.members, 2))
        hyps.append((f"family is {tt}-intersecting", V(tint)))
        need = (tt + 1) * (k - tt + 1)
        hyps.append((f"n >= (t+1)(k-t+1) ({n} >= {need})", V(n >= need)))
        return TheoremReport(t, hyps, binom(n - tt, k - tt) if tt <= k else 0, m, notes)

    if t in (TheoremId.FW_1_3, TheoremId.SNEVILY_1_5, TheoremId.LEMMA_3_2, TheoremId.PROP_3_3):
        if t is TheoremId.FW_1_3:
            hyps.append(("family is L-intersecting", V(_pairwise_ok(fam, L))))
            return TheoremReport(t, hyps, frankl_wilson_bound(n, s), m, notes)
        if t is TheoremId.SNEVILY_1_5:
            hyps.append(("L consists of positive integers", V(l1 >= 1)))
            hyps.append(("family is L-intersecting", V(_pairwise_ok(fam, L))))
            return TheoremReport(t, hyps, snevily_bound(n, s), m, notes)
        # the single-family reading of the cross-intersecting statements: A = B = fam
        from .structural import PairFamilyInstance, check_lemma32_instance, check_prop33_instance

        inst = PairFamilyInstance(fam, fam, L)
        if t is TheoremId.LEMMA_3_2:
            return check_lemma32_instance(inst)
        return check_prop33_instance(inst)

    if t in (TheoremId.ABS_1_4, TheoremId.CONJ_1_6, TheoremId.THM_1_7):
        K = _require(K, "K", t)
        r = K.r
        hyps.append(("family is L-intersecting", V(_pairwise_ok(fam, L))))
        hyps.append((f"member sizes lie in K={K}", V(sizes_in(fam, K))))
        if t is TheoremId.ABS_1_4:
            hyps.append((f"k_i > s - r = {s - r} for all k_i", V(all(k > s - r for k in K))))
            return TheoremReport(t, hyps, abs_bound(n, s, r), m, notes)
        hyps.append((f"k_i > s - r = {s - r} for all k_i", V(all(k > s - r for k in K))))
        if l1 > n:
            hyps.append((f"l1 <= n ({l1} <= {n})", Verdict.FAIL))
            return TheoremReport(t, hyps, 0, m, notes)
        bound = thm17_bound(n, l1, s, r)
        if t is TheoremId.CONJ_1_6:
            if r == 1:
                hyps.append(("statement proven for these parameters (uniform case)", Verdict.PASS))
            else:
                thr = thm17_threshold(kmax, l1, s)
                proven = all(k > s - r + l1 for k in K) and n >= thr
                hyps.append((
                    "statement proven for these parameters (THM_1_7 range)",
                    Verdict.PASS if proven else Verdict.UNKNOWN,
                ))
            return TheoremReport(t, hyps, bound, m, notes)
        hyps.append((f"k_i > s - r + l1 = {s - r + l1} for all k_i", V(all(k > s - r + l1 for k in K))))
        thr = thm17_threshold(kmax, l1, s)
        hyps.append((f"n >= C(k^2, l1+1) s + l1 with k={kmax} ({n} >= {thr})", V(n >= thr)))
        report = TheoremReport(t, hyps, bound, m, notes)
        report.extra["threshold"] = thr
        _equality_clause(report, fam, n, thr, l1)
        return report

    if t is TheoremId.COR_1_8:
        hyps.append(("family is L-intersecting", V(_pairwise_ok(fam, L))))
        if l1 > n:
            hyps.append((f"l1 <= n ({l1} <= {n})", Verdict.FAIL))
            return TheoremReport(t, hyps, 0, m, notes)
        thr = thm17_threshold(kmax, l1, s)
        hyps.append((f"n >= C(k^2, l1+1) s + l1 with k={kmax} ({n} >= {thr})", V(n >= thr)))
        report = TheoremReport(t, hyps, cor18_bound(n, l1, s), m, notes)
        report.extra["threshold"] = thr
        _equality_clause(report, fam, n, thr, l1)
        return report

    # h-wise statements
    kw = _require(kwise, "kwise parameters (h)", t)
    h = kw.h
    if t in (TheoremId.FS_1_9, TheoremId.FS_1_10):
        hyps.append((f"h >= 3 (h={h})", V(h >= 3)))
        hyps.append((f"family is {h}-wise L-intersecting", V(_hwise_ok(fam, L, h))))
        hyps.append((
            "n >= n0(h, s)",
            Verdict.PASS if kw.assert_n0 else Verdict.UNKNOWN,
        ))
        use_l1 = l1 if t is TheoremId.FS_1_10 else 0
        if use_l1 > n:
            hyps.append((f"l1 <= n ({use_l1} <= {n})", Verdict.FAIL))
            return TheoremReport(t, hyps, 0, m, notes)
        bound = fs_kwise_bound(max(h, 3), n, s, use_l1)
        if h < 3:
            notes.append("bound evaluated with h=3; h < 3 is outside the statement")
        return TheoremReport(t, hyps, bound, m, notes)

    if t is TheoremId.GS_3_4:
        hyps.append((f"family is {h}-wise L-intersecting", V(_hwise_ok(fam, L, h))))
        return TheoremReport(t, hyps, gs_kwise_bound(h, n, s, 0), m, notes)

    if l1 > n:
        hyps.append((f"l1 <= n ({l1} <= {n})", Verdict.FAIL))
        return TheoremReport(t, hyps, 0, m, notes)

    if t is TheoremId.THM_3_5:
        hyps.append((f"family is {h}-wise L-intersecting", V(_hwise_ok(fam, L, h))))
        thr = gs_threshold(kmax, l1, s)
        hyps.append((f"n >= [C(k^2+k, l1+1)+1] s + l1 with k={kmax} ({n} >= {thr})", V(n >= thr)))
        report = TheoremReport(t, hyps, gs_kwise_bound(h, n, s, l1), m, notes)
        report.extra["threshold"] = thr
        return report

    if t is TheoremId.LEMMA_3_6:
        hyps.append((f"h >= 3 (h={h})", V(h >= 3)))
        hyps.append(("L consists of positive integers", V(l1 >= 1)))
        hyps.append((f"family is {h}-wise L-intersecting", V(_hwise_ok(fam, L, h))))
        thr = lemma36_threshold(kmax, l1, s)
        hyps.append((f"n >= C(k^2+k, l1+1) s + l1 with k={kmax} ({n} >= {thr})", V(n >= thr)))
        realised = _hminus1_sizes(fam, h)
        missing = [l for l in L if l not in realised]
        hyps.append((
            f"some l_r is never a ({h}-1)-wise intersection size" + (f" (missing {missing})" if missing else ""),
            V(bool(missing)),
        ))
        if h < 3 or l1 < 1:
            bound = binom(n - l1, s) + (h - 1) * binom_sum(n - l1, 0, s - 1)
        else:
            bound = lemma36_bound(h, n, s, l1)
        report = TheoremReport(t, hyps, bound, m, notes)
        report.extra["threshold"] = thr
        return report

    raise FamilyError(f"unhandled theorem {t}")  # pragma: no cover
