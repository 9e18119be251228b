"""Time the bitmask kernels on both backends over a dense line family.

The workload is the full line family over a prime field: q^2 members of
size q on a q^2 ground set, the densest family the test suite touches.
Triples and k-fold counts run on prefixes so the quadratic/cubic loops
stay in the seconds range for the pure backend.

Usage: python3 benchmarks/bench_backends.py [--q 31] [--repeat 3]
"""

import argparse
import importlib
import time

from fhplab import _kernels_py
from fhplab.pseudofield import FieldStructure, line_family


def load_compiled():
    try:
        return importlib.import_module("fhplab._kernels")
    except ImportError:
        return None


def bench(fn, *args, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=31)
    ap.add_argument("--repeat", type=int, default=3)
    opt = ap.parse_args()

    compiled = load_compiled()
    fam = line_family(FieldStructure.for_prime(opt.q))
    masks = list(fam.masks)
    g = fam.ground_size
    n = len(masks)

    cases = [
        ("pairs", "count_intersecting_pairs", (masks, g)),
        ("triples[:150]", "count_intersecting_triples", (masks[:150], g)),
        ("k=4[:60]", "count_intersecting_k", (masks[:60], g, 4)),
        ("depth", "depth_counts", (masks, g)),
    ]

    print(f"line family over F_{opt.q}: n={n} members, ground={g}")
    print(f"{'kernel':<16}{'pure (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for label, name, args in cases:
        t_pure, r_pure = bench(getattr(_kernels_py, name), *args,
                               repeat=opt.repeat)
        if compiled is None:
            print(f"{label:<16}{t_pure:>12.4f}{'n/a':>12}{'n/a':>10}")
            continue
        t_c, r_c = bench(getattr(compiled, name), *args, repeat=opt.repeat)
        if name == "depth_counts":
            r_pure, r_c = list(r_pure), list(r_c)
        if r_pure != r_c:
            raise SystemExit(f"backend mismatch on {name}: {r_pure} != {r_c}")
        print(f"{label:<16}{t_pure:>12.4f}{t_c:>12.4f}{t_pure / t_c:>9.1f}x")
    if compiled is None:
        print("compiled extension not available; only the pure backend ran")


if __name__ == "__main__":
    main()
