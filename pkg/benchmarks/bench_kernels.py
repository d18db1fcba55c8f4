"""Compare the compiled and pure-Python elimination kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Each case is a boundary matrix of a subdivided complex or a seeded random
integer matrix.  Both backends must agree before a timing is reported.
"""

import argparse
import json
import random
import statistics
import sys
import time

from dualcx import builders, kernels
from dualcx.homology import chain_complex
from dualcx.subdivision import iterated_barycentric


def boundary_cases():
    fixtures = {
        "torus sd1": iterated_barycentric(builders.torus7(), 1),
        "torus sd2": iterated_barycentric(builders.torus7(), 2),
        "S3 sd2": iterated_barycentric(builders.simplex_boundary(5), 2),
        "cross4 sd1": iterated_barycentric(builders.crosspolytope_boundary(4), 1),
    }
    for name, cx in fixtures.items():
        for k, m in enumerate(chain_complex(cx).boundaries, start=1):
            yield f"{name} d{k}", m.rows(), m.shape[1]


def random_cases(seed=0):
    rng = random.Random(seed)
    for n, density, bound in ((60, 0.3, 9), (120, 0.1, 5), (200, 0.05, 3)):
        rows = [{c: rng.randint(-bound, bound) or 1 for c in range(n) if rng.random() < density} for _ in range(n)]
        yield f"random {n}x{n} p={density}", rows, n


def overflows(rows, ncols):
    """True when the compiled int64 path gives up and the big-integer path runs."""
    try:
        kernels._ckernels.smith_diagonal(kernels._dense(rows, ncols))
    except OverflowError:
        return True
    return False


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return out, min(times), statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="emit rows as JSON")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the Python backend only", file=sys.stderr)
    rows_out = []
    for name, rows, ncols in [*boundary_cases(), *random_cases()]:
        row = {"case": name, "shape": [len(rows), ncols]}
        results = {}
        for b in backends:
            out, best, _ = best_time(lambda: kernels.smith_diagonal(rows, ncols, backend=b), args.repeat)
            results[b] = sorted(abs(x) for x in out if x)
            row[b] = best
        if len(set(map(tuple, results.values()))) != 1:
            raise SystemExit(f"backends disagree on {name}")
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"] if row["cython"] else float("inf")
            row["int64_overflow"] = overflows(rows, ncols)
        rows_out.append(row)

    if args.json:
        json.dump(rows_out, sys.stdout, indent=2)
        print()
        return
    print(f"{'case':28} {'shape':>11} {'python s':>10} {'cython s':>10} {'speedup':>8} overflow")
    for r in rows_out:
        shape = "x".join(map(str, r["shape"]))
        cy = f"{r['cython']:10.4f}" if "cython" in r else f"{'-':>10}"
        sp = f"{r['speedup']:8.1f}" if "speedup" in r else f"{'-':>8}"
        ov = "yes" if r.get("int64_overflow") else ""
        print(f"{r['case']:28} {shape:>11} {r['python']:10.4f} {cy} {sp} {ov}")


if __name__ == "__main__":
    main()
