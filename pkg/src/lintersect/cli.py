"""``lintersect`` command line.

Exit status: 0 success, 1 usage error, 2 data error (malformed input,
infeasible request, or an exhausted search budget), 3 anomaly (a
certified instance contradicting a proven statement).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import qspace, structural
from .arith import floor_rational, qbinom
from .family import (
    FamilyError,
    KSet,
    LSet,
    SetFamily,
    is_hwise_l_intersecting,
    parse_family,
    parse_int_list,
    serialize_family,
    to_set,
)
from .search import (
    DEFAULT_BUDGET,
    SearchSpec,
    construct_extremal,
    max_family,
    reports_for_family,
    tightness_scan,
    FalsificationError,
)
from .theorems import (
    KwiseParams,
    TheoremId,
    apply_theorem,
    abs_bound,
    cor18_bound,
    ekr_bound,
    frankl_wilson_bound,
    fs_kwise_bound,
    gs_kwise_bound,
    gs_threshold,
    lemma32_bound,
    lemma36_bound,
    lemma36_threshold,
    parse_theorem_id,
    prop33_threshold,
    snevily_bound,
    t_intersecting_bound,
    thm17_bound,
    thm17_threshold,
)

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ANOMALY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class Report:
    command: str
    invocation: dict
    results: list = field(default_factory=list)
    anomalies: list = field(default_factory=list)
    lines: list[str] = field(default_factory=list)
    data_error: str | None = None

    def document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "invocation": self.invocation,
            "results": self.results,
            "anomalies": self.anomalies,
        }

    def anomaly(self, kind: str, detail: str, **extra) -> None:
        self.anomalies.append({"kind": kind, "detail": detail, **extra})
        self.lines.append(f"ANOMALY [{kind}]: {detail}")


# --- argument types ----------------------------------------------------------

def _list_type(what):
    def conv(text):
        try:
            return parse_int_list(text, what)
        except FamilyError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return conv


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _seconds(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected seconds, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return v


_FLAGS = {
    "family": dict(metavar="PATH", help="family file"),
    "L": dict(type=_list_type("L"), metavar="LIST", help="allowed intersection sizes, e.g. 0,2"),
    "K": dict(type=_list_type("K"), metavar="LIST", help="allowed member sizes"),
    "wise": dict(type=_positive, metavar="H", help="intersection arity h"),
    "theorem": dict(metavar="ID", help="theorem id or alias (thm17, fw, T1_11, ...)"),
    "n": dict(type=_positive, metavar="INT"),
    "l1": dict(type=_nonneg, metavar="INT"),
    "s": dict(type=_positive, metavar="INT"),
    "r": dict(type=_positive, metavar="INT"),
    "k": dict(type=_nonneg, metavar="INT", help="member size / dimension"),
    "t": dict(type=_positive, metavar="INT"),
    "q": dict(type=_positive, metavar="INT"),
    "dims": dict(type=_list_type("dims"), metavar="LIST"),
    "budget": dict(type=_seconds, default=DEFAULT_BUDGET, metavar="SECONDS"),
    "threads": dict(type=_positive, default=1, metavar="INT"),
    "out": dict(metavar="PATH", help="write a JSON report here instead of a table"),
    "assert-n0": dict(action="store_true", help="vouch that n >= n0 for the h-wise asymptotic results"),
    "grid": dict(metavar="PATH", help="scan grid file"),
}

_COMMANDS = {
    "bound": ("exact bound and threshold of one theorem",
              ["theorem", "n", "l1", "s", "r", "k", "t", "q", "wise", "out"], ["theorem"]),
    "check": ("check a family against theorem hypotheses and bounds",
              ["family", "L", "K", "wise", "theorem", "assert-n0", "out"], ["family", "L"]),
    "witness": ("Helly witness of a family with empty (zero) total intersection",
                ["family", "out"], ["family"]),
    "partition": ("split an h-wise L-intersecting family",
                  ["family", "L", "wise", "out"], ["family", "L"]),
    "search": ("certified maximum family",
               ["n", "L", "K", "wise", "budget", "threads", "assert-n0", "out"], ["n", "L"]),
    "construct": ("extremal family meeting the bound with equality",
                  ["n", "l1", "s", "r", "out"], ["n", "l1", "s", "r"]),
    "qenum": ("count subspaces of F_q^n by dimension", ["q", "n", "dims", "out"], ["q", "n"]),
    "qsearch": ("certified maximum subspace family",
                ["q", "n", "dims", "L", "budget", "threads", "out"], ["q", "n", "L"]),
    "scan": ("search every grid cell and test the theorems",
             ["grid", "budget", "threads", "out"], ["grid"]),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lintersect", description="L-intersecting families: bounds, checks, searches.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name, (help_text, flags, required) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        for flag in flags:
            p.add_argument(f"--{flag}", dest=flag.replace("-", "_"),
                           required=flag in required, **_FLAGS[flag])
    return parser


def _invocation(args) -> dict:
    opts = {k: (list(v) if isinstance(v, tuple) else v)
            for k, v in sorted(vars(args).items()) if k != "command" and v is not None}
    return {"command": args.command, "options": opts}


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command}: missing {', '.join(missing)}")
    return [getattr(args, n) for n in names]


def _read_text(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _is_subspace_file(text: str) -> bool:
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            return ln.startswith("q=")
    return False


def _fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, sorted(to_set(mask)))) + "}"


def _report_lines(rep) -> list[str]:
    d = rep.to_dict()
    bound = d["bound"]
    eff = d.get("effective_bound", bound)
    shown = f"{bound}" if eff == bound else f"{bound} (effective {eff})"
    flags = "applicable" if d.get("applicable") else "not applicable"
    out = [f"{d['theorem']}: bound = {shown}, size = {d.get('family_size')}, {flags}, "
           f"tight = {str(d.get('tight')).lower()}"]
    for h in d["hypotheses"]:
        out.append(f"    [{h['verdict'].upper():7}] {h['description']}")
    for note in d.get("notes", []):
        out.append(f"    note: {note}")
    return out


def _check_report(report: Report, rep) -> None:
    report.results.append(rep.to_dict())
    report.lines.extend(_report_lines(rep))
    if rep.falsified:
        report.anomaly("falsification", f"{rep.to_dict()['theorem']}: size {rep.family_size} exceeds bound")
    if rep.to_dict().get("extra", {}).get("common_l1_subset") is False:
        report.anomaly("equality-clause", f"{rep.theorem.value}: tight family without a common l1-subset")


# --- commands ------------------------------------------------------------

def _cmd_bound(args, report: Report) -> None:
    name = args.theorem
    if name.upper().replace(".", "_") in qspace._Q_PARAMS or name.upper().startswith("T1_1"):
        params = {p: getattr(args, p) for p in ("q", "n", "k", "s", "t", "l1", "r")}
        try:
            qb = qspace.q_bound(name, **params)
        except FamilyError as exc:
            raise UsageError(str(exc)) from None
        report.results.append(qb.to_dict())
        line = f"bound = {qb.bound}"
        if qb.threshold is not None:
            line += f", threshold: {'PASS' if qb.threshold else 'FAIL'}"
        elif qb.hypotheses:
            line += ", " + "; ".join(f"{d}: {v.value.upper()}" for d, v in qb.hypotheses)
        report.lines.append(line)
        return
    try:
        t = parse_theorem_id(name)
    except FamilyError as exc:
        raise UsageError(str(exc)) from None
    T = TheoremId
    n = _need(args, "n")[0]
    threshold = None  # (description, value, holds)
    hyp = None
    params: dict = {"n": n}
    if t is T.EKR_1_1:
        (k,) = _need(args, "k")
        bound, params["k"] = ekr_bound(n, k), k
        hyp = (f"n >= 2k ({n} >= {2 * k})", n >= 2 * k)
    elif t is T.TINT_1_2:
        k, tt = _need(args, "k", "t")
        if tt > k:
            raise UsageError(f"t={tt} exceeds k={k}")
        bound = t_intersecting_bound(n, k, tt)
        params.update(k=k, t=tt)
        need = (tt + 1) * (k - tt + 1)
        threshold = (f"n ≥ {need}", need, n >= need)
    elif t in (T.FW_1_3, T.SNEVILY_1_5, T.LEMMA_3_2):
        (s,) = _need(args, "s")
        params["s"] = s
        bound = {T.FW_1_3: frankl_wilson_bound, T.SNEVILY_1_5: snevily_bound,
                 T.LEMMA_3_2: lemma32_bound}[t](n, s)
    elif t is T.ABS_1_4:
        s, r = _need(args, "s", "r")
        params.update(s=s, r=r)
        bound = abs_bound(n, s, r)
    elif t in (T.CONJ_1_6, T.THM_1_7, T.COR_1_8, T.PROP_3_3):
        l1, s = _need(args, "l1", "s")
        if l1 > n:
            raise UsageError(f"l1={l1} exceeds n={n}")
        # k defaults to the largest member size of the matching extremal family
        k = args.k if args.k is not None else s + l1
        params.update(l1=l1, s=s)
        if t in (T.CONJ_1_6, T.THM_1_7):
            (r,) = _need(args, "r")
            params["r"] = r
            bound = thm17_bound(n, l1, s, r)
        else:
            bound = cor18_bound(n, l1, s)
        if t is not T.CONJ_1_6:
            params["k"] = k
            thr = prop33_threshold(k, l1, s) if t is T.PROP_3_3 else thm17_threshold(k, l1, s)
            threshold = (f"n ≥ {thr}", thr, n >= thr)
    else:
        h = args.wise if args.wise is not None else 3
        (s,) = _need(args, "s")
        params.update(h=h, s=s)
        if t in (T.FS_1_9, T.FS_1_10):
            if h < 3:
                raise UsageError("the h-wise asymptotic bounds need --wise >= 3")
            l1 = 0
            if t is T.FS_1_10:
                (l1,) = _need(args, "l1")
                params["l1"] = l1
            bound = fs_kwise_bound(h, n, s, l1)
        elif t is T.GS_3_4:
            bound = gs_kwise_bound(h, n, s, 0)
        else:
            (l1,) = _need(args, "l1")
            if l1 > n:
                raise UsageError(f"l1={l1} exceeds n={n}")
            k = args.k if args.k is not None else s + l1
            params.update(l1=l1, k=k)
            if t is T.THM_3_5:
                bound = gs_kwise_bound(h, n, s, l1)
                thr = gs_threshold(k, l1, s)
            else:
                if h < 3 or l1 < 1:
                    raise UsageError("LEMMA_3_6 needs --wise >= 3 and --l1 >= 1")
                bound = lemma36_bound(h, n, s, l1)
                thr = lemma36_threshold(k, l1, s)
            threshold = (f"n ≥ {thr}", thr, n >= thr)
    eff = floor_rational(bound)
    shown = str(bound) if eff == bound else f"{bound} (effective {eff})"
    line = f"bound = {shown}"
    doc = {"theorem": t.value, "parameters": params,
           "bound": shown if eff != bound else int(bound), "effective_bound": eff}
    if threshold is not None:
        desc, value, holds = threshold
        line += f", threshold {desc}: {'PASS' if holds else 'FAIL'}"
        doc["threshold"] = {"value": value, "holds": holds}
    if hyp is not None:
        line += f", {hyp[0]}: {'PASS' if hyp[1] else 'FAIL'}"
        doc["hypothesis"] = {"description": hyp[0], "holds": hyp[1]}
    report.results.append(doc)
    report.lines.append(line)


def _load_family(path):
    text = _read_text(path)
    try:
        if _is_subspace_file(text):
            return qspace.parse_subspace_family(text)
        return parse_family(text)
    except FamilyError as exc:
        raise DataError(f"{path}: {exc}") from None


def _cmd_check(args, report: Report) -> None:
    fam = _load_family(args.family)
    L = LSet(args.L)
    h = args.wise or 2
    if isinstance(fam, qspace.SubspaceFamily):
        for qb in qspace.q_reports(fam, L, args.K):
            if args.theorem and qb.theorem != args.theorem.upper():
                continue
            report.results.append(qb.to_dict())
            verdicts = "; ".join(f"{d}: {v.value}" for d, v in qb.hypotheses)
            report.lines.append(f"{qb.theorem}: bound = {qb.bound}, size = {qb.family_size}, "
                                f"{'applicable' if qb.applicable else 'not applicable'} ({verdicts})")
            if qb.falsified:
                report.anomaly("falsification", f"{qb.theorem}: size {qb.family_size} exceeds {qb.bound}")
        return
    K = KSet(args.K) if args.K else None
    try:
        if args.theorem:
            t = parse_theorem_id(args.theorem)
            reps = [apply_theorem(t, fam, L, K, KwiseParams(h, args.assert_n0))]
        else:
            reps = reports_for_family(fam, L, K, h, assert_n0=args.assert_n0)
    except structural.PreconditionError as exc:
        raise DataError(str(exc)) from None
    except FamilyError as exc:
        raise UsageError(str(exc)) from None
    for rep in reps:
        _check_report(report, rep)


def _cmd_witness(args, report: Report) -> None:
    fam = _load_family(args.family)
    try:
        if isinstance(fam, qspace.SubspaceFamily):
            w = qspace.helly_witness_q(fam)
            k = max(fam.dims())
            report.results.append({"indices": list(w.indices), "intersection_dim": w.achieved_intersection.dim,
                                   "max_dim": k})
            report.lines.append(f"witness = {list(w.indices)} ({len(w.indices)} of at most {k + 1}), "
                                f"intersection dimension {w.achieved_intersection.dim}")
            bad = len(w.indices) > k + 1 or w.achieved_intersection.dim != 0
        else:
            w = structural.helly_witness(fam)
            k = fam.max_size()
            report.results.append({"indices": list(w.indices),
                                   "intersection": sorted(w.achieved_intersection), "max_size": k})
            report.lines.append(f"witness = {list(w.indices)} ({len(w.indices)} of at most {k + 1})")
            bad = len(w.indices) > k + 1 or w.achieved_intersection
    except structural.PreconditionError as exc:
        raise DataError(str(exc)) from None
    if bad:
        report.anomaly("helly", "witness exceeds k+1 members or misses the empty intersection")


def _cmd_partition(args, report: Report) -> None:
    fam = _load_family(args.family)
    if not isinstance(fam, SetFamily):
        raise DataError("partition works on set families")
    L = LSet(args.L)
    h = args.wise or 3
    try:
        part = structural.kwise_partition(fam, L, h)
    except structural.PreconditionError as exc:
        raise DataError(str(exc)) from None
    except structural.TupleLimitError as exc:
        raise DataError(str(exc)) from None
    doc = {
        "k": part.k,
        "reorder": list(part.reorder),
        "B": [sorted(to_set(x)) for x in part.B.members],
        "C": [sorted(to_set(x)) for x in part.C.members],
        "F": [sorted(to_set(x)) for x in part.F.members],
    }
    report.lines.append(f"k = {part.k}, |B| = {part.B.m}, |F| = {part.F.m}")
    for b, c in zip(part.B.members, part.C.members):
        report.lines.append(f"    B {_fmt_set(b):<20} C {_fmt_set(c)}")
    for f in part.F.members:
        report.lines.append(f"    F {_fmt_set(f)}")
    f_ok = part.F.m < h - 1 or is_hwise_l_intersecting(part.F, L, h - 1) if h > 2 else True
    doc["F_is_(h-1)-wise"] = f_ok
    report.lines.append(f"F is {h - 1}-wise L-intersecting: {'yes' if f_ok else 'NO'}")
    if not f_ok:
        report.anomaly("partition", f"F is not {h - 1}-wise L-intersecting")
    if L.l1 >= 1:
        rep = structural.check_prop33_instance(structural.PairFamilyInstance(part.B, part.C, L))
        doc["conditions"] = rep.to_dict()
        report.lines.extend(_report_lines(rep))
    report.results.append(doc)


def _search_reports(report: Report, res, L, K, h, assert_n0) -> None:
    for rep in reports_for_family(res.witness, L, K, h, assert_n0=assert_n0):
        _check_report(report, rep)


def _budget_note(report: Report, certified: bool) -> None:
    if not certified:
        report.data_error = "search budget exhausted: the reported size is a lower bound only"


def _cmd_search(args, report: Report) -> None:
    h = args.wise or 2
    try:
        spec = SearchSpec(args.n, LSet(args.L), KSet(args.K) if args.K else None, h, args.budget, args.threads)
        res = max_family(spec)
    except FamilyError as exc:
        raise DataError(str(exc)) from None
    report.results.append(res.to_dict())
    report.lines.append(f"max = {res.max_size} ({'certified' if res.certified else 'NOT certified'})")
    for x in res.witness.members:
        report.lines.append(f"    {_fmt_set(x)}")
    if res.certified:
        _search_reports(report, res, spec.L, spec.K, h, args.assert_n0)
    _budget_note(report, res.certified)


def _cmd_construct(args, report: Report) -> None:
    try:
        fam = construct_extremal(args.n, args.l1, args.s, args.r)
    except FamilyError as exc:
        raise UsageError(str(exc)) from None
    text = serialize_family(fam)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise DataError(f"cannot write {args.out}: {exc.strerror}") from None
        report.lines.append(f"wrote {fam.m} members to {args.out}")
    else:
        report.lines.append(text.rstrip("\n"))
    report.results.append({"size": fam.m, "bound": thm17_bound(args.n, args.l1, args.s, args.r)})


def _cmd_qenum(args, report: Report) -> None:
    q, n = args.q, args.n
    dims = args.dims if args.dims is not None else tuple(range(n + 1))
    try:
        counts = {k: len(qspace.enumerate_subspaces(q, n, k)) for k in dims}
    except (ValueError, FamilyError) as exc:
        raise DataError(str(exc)) from None
    for k, c in counts.items():
        expected = qbinom(n, k, q)
        report.results.append({"k": k, "count": c, "qbinom": expected})
        report.lines.append(f"k = {k}: {c} subspaces (qbinom = {expected})")
        if c != expected:
            report.anomaly("enumeration", f"k={k}: enumerated {c}, expected {expected}")


def _cmd_qsearch(args, report: Report) -> None:
    L = LSet(args.L)
    try:
        res = qspace.max_subspace_family(args.q, args.n, args.dims, L, args.budget, args.threads)
    except (ValueError, FamilyError) as exc:
        raise DataError(str(exc)) from None
    report.results.append(res.to_dict())
    report.lines.append(f"max = {res.max_size} ({'certified' if res.certified else 'NOT certified'})")
    for V in res.witness.members:
        report.lines.append(f"    dim {V.dim}: " + " ".join(V.rows_text()))
    if res.certified:
        for qb in qspace.q_reports(res.witness, L, args.dims):
            report.results.append(qb.to_dict())
            report.lines.append(f"{qb.theorem}: bound = {qb.bound}, "
                                f"{'applicable' if qb.applicable else 'not applicable'}")
            if qb.falsified:
                report.anomaly("falsification", f"{qb.theorem}: size {qb.family_size} exceeds {qb.bound}")
    _budget_note(report, res.certified)


def parse_grid(text: str) -> list[tuple]:
    """Lines ``n=<int> L=<list> h=<int> [K=<list>]``; ``#`` comments."""
    cells = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            kv = dict(tok.split("=", 1) for tok in line.split())
        except ValueError:
            raise DataError(f"grid line {lineno}: expected key=value tokens") from None
        unknown = set(kv) - {"n", "L", "h", "K"}
        if unknown or "n" not in kv or "L" not in kv:
            raise DataError(f"grid line {lineno}: need n= and L= (optional h=, K=)")
        try:
            n, h = int(kv["n"]), int(kv.get("h", "2"))
            L = parse_int_list(kv["L"], "L")
            K = parse_int_list(kv["K"], "K") if "K" in kv else None
        except (ValueError, FamilyError) as exc:
            raise DataError(f"grid line {lineno}: {exc}") from None
        cells.append((n, L, K, h))
    return cells


def _cmd_scan(args, report: Report) -> None:
    grid = parse_grid(_read_text(args.grid))
    try:
        entries = tightness_scan(grid, args.budget, args.threads)
    except FalsificationError as exc:
        report.anomaly("falsification", str(exc), cell=list(map(_jsonable, exc.cell)))
        return
    uncertified = 0
    for e in entries:
        cell = {"n": e.cell[0], "L": list(e.cell[1]), "K": None if e.cell[2] is None else list(e.cell[2]),
                "h": e.cell[3]}
        label = f"n={cell['n']} L={cell['L']} h={cell['h']}" + (f" K={cell['K']}" if cell["K"] else "")
        if e.error:
            report.results.append({"cell": cell, "error": e.error})
            report.lines.append(f"{label}: error: {e.error}")
            continue
        uncertified += not e.result.certified
        tight = [r.theorem.value for r in e.reports if r.applicable and r.tight]
        report.results.append({
            "cell": cell,
            "search": e.result.to_dict(),
            "reports": [r.to_dict() for r in e.reports],
        })
        report.lines.append(
            f"{label}: max = {e.result.max_size}"
            f"{'' if e.result.certified else ' (NOT certified)'}"
            + (f", tight: {', '.join(tight)}" if tight else "")
        )
    if uncertified:
        report.data_error = f"search budget exhausted in {uncertified} cell(s)"


def _jsonable(x):
    if isinstance(x, tuple):
        return list(x)
    return x


_HANDLERS = {
    "bound": _cmd_bound,
    "check": _cmd_check,
    "witness": _cmd_witness,
    "partition": _cmd_partition,
    "search": _cmd_search,
    "construct": _cmd_construct,
    "qenum": _cmd_qenum,
    "qsearch": _cmd_qsearch,
    "scan": _cmd_scan,
}


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    report = Report(args.command, _invocation(args))
    try:
        _HANDLERS[args.command](args, report)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=stderr)
        return EXIT_DATA
    except MemoryError:
        print("data error: out of memory", file=stderr)
        return EXIT_DATA

    if args.out and args.command != "construct":
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(report.document(), fh, indent=2, ensure_ascii=False)
                fh.write("\n")
        except OSError as exc:
            print(f"data error: cannot write {args.out}: {exc.strerror}", file=stderr)
            return EXIT_DATA
    else:
        for line in report.lines:
            print(line, file=stdout)
    if report.anomalies:
        for a in report.anomalies:
            print(f"anomaly: {a['detail']}", file=stderr)
        return EXIT_ANOMALY
    if report.data_error:
        print(f"data error: {report.data_error}", file=stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
