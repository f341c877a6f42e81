"""Compare the compiled and pure-Python clique kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each workload runs on every available backend; the table reports the best
wall time over ``--repeat`` runs, node counts, and the speedup of the
compiled kernel.  Results must agree exactly, or the script exits 1.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
import time

from lintersect._backend import available_backends
from lintersect.family import LSet
from lintersect.qspace import max_subspace_family
from lintersect.search import SearchSpec, max_clique, max_family


def _graph(seed: int, nv: int, p: float) -> list[int]:
    rng = random.Random(seed)
    adj = [0] * nv
    for a, b in itertools.combinations(range(nv), 2):
        if rng.random() < p:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    return adj


def workloads(quick: bool):
    graphs = [(100, 0.7)] if quick else [(100, 0.7), (200, 0.5), (150, 0.8)]
    for nv, p in graphs:
        adj = _graph(nv, nv, p)
        yield f"G({nv}, {p}) clique", lambda b, adj=adj, nv=nv: max_clique([0] * nv, 0, 2, adj=adj, backend=b)[::3]
    cells = [(6, [0, 2], None, 2), (7, [1, 2], [3], 2), (5, [0, 1], None, 3), (6, [1], None, 3)]
    if not quick:
        cells += [(6, [0, 1], None, 3)]
    for n, L, K, h in cells:
        spec = SearchSpec(n, LSet(L), K, h)
        label = f"family n={n} L={L}" + (f" K={K}" if K else "") + f" h={h}"
        yield label, lambda b, spec=spec: (lambda r: (r.max_size, r.nodes_explored))(max_family(spec, backend=b))
    yield "subspaces q=2 n=4 dims={2} L={1}", lambda b: (
        lambda r: (r.max_size, r.nodes_explored))(max_subspace_family(2, 4, [2], [1], backend=b))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; timing the Python kernel only", file=sys.stderr)
    header = f"{'workload':<40}" + "".join(f"{b + ' (s)':>14}" for b in backends) + f"{'nodes':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    mismatch = False
    for label, fn in workloads(args.quick):
        times, outputs = {}, {}
        for b in backends:
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                out = fn(b)
                best = min(best, time.perf_counter() - t0)
            times[b], outputs[b] = best, out
        if len({repr(o) for o in outputs.values()}) > 1:
            mismatch = True
        nodes = outputs[backends[-1]][-1]
        speed = f"{times['python'] / times['cython']:.1f}x" if "cython" in times else "-"
        print(f"{label:<40}" + "".join(f"{times[b]:>14.4f}" for b in backends) + f"{nodes:>12}{speed:>10}")
    if mismatch:
        print("backends disagree on at least one workload", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
