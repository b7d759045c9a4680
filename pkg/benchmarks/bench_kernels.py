"""Compare the compiled and pure-Python truth-table kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs on both backends; results are checked for agreement
before timings are printed.
"""

import argparse
import random
import sys
import timeit
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from cirquents import kernels  # noqa: E402
from cirquents.formula import parse  # noqa: E402

import helpers  # noqa: E402


def rand_prog(rng, n, leaves):
    if leaves == 1:
        return [rng.choice((kernels.VAR, kernels.NVAR)), rng.randrange(n)]
    k = rng.randint(1, leaves - 1)
    return rand_prog(rng, n, k) + rand_prog(rng, n, leaves - k) + [rng.choice((kernels.AND, kernels.OR)), 0]


def workloads():
    rng = random.Random(0)
    blass, n = kernels.compile_situation(parse(helpers.BLASS))
    yield "blass table (8 vars)", lambda k: k.table(blass, n)
    yield "blass coupled check", lambda k: k.all_true(blass, n, [(0, 4), (4, 0), (1, 6), (6, 1),
                                                               (2, 5), (5, 2), (3, 7), (7, 3)])
    small = [(rand_prog(rng, 6, 12), 6) for _ in range(200)]
    yield "200 random 6-var programs", lambda k: [k.all_true(p, m) for p, m in small]
    wide = [(rand_prog(rng, 16, 40), 16) for _ in range(5)]
    yield "5 random 16-var tables", lambda k: [k.table(p, m) for p, m in wide]
    tbl = kernels.backend("python").table(wide[0][0], 16)
    pairs = [(j, j + 1) for j in range(0, 16, 2)]
    yield "16-var table with 8 allocations", lambda k: k.all_true_table(tbl, 16, pairs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args(argv)
    py = kernels.backend("python")
    try:
        cy = kernels.backend("cython")
    except ImportError:
        print("compiled extension not built; only the Python backend is available")
        cy = None
    print(f"{'workload':34} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in workloads():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=a.repeat)) * 1e3
        if cy is None:
            print(f"{name:34} {tp:10.3f} {'-':>10} {'-':>8}")
            continue
        if fn(py) != fn(cy):
            raise SystemExit(f"backends disagree on {name}")
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=a.repeat)) * 1e3
        print(f"{name:34} {tp:10.3f} {tc:10.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
