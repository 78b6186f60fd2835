"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends run on the same inputs; outputs are checked for equality
before timings are reported.
"""

from __future__ import annotations

import argparse
import statistics
import time

from stabwall import _kernels_py, kernels
from stabwall.quiverheart import MonomialRep, _generator_cubics

try:
    from stabwall import _kernels as compiled
except ImportError:
    compiled = None

PARENTS = ([1, 4, 6, 4], [1, 6, 9, 4], [2, 8, 11, 5], [1, 7, 9, 4])


def _time(fn, repeat: int) -> float:
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


def cases():
    succ = MonomialRep.koszul(1).succ
    yield "closed_subsets koszul", lambda m: sorted(m.closed_subsets(list(succ)))
    cubics = _generator_cubics(1)
    for p in PARENTS:
        yield f"box_wall_screen {p}", lambda m, p=p: m.box_wall_screen(p, cubics, 0)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    if compiled is None:
        print("compiled extension not built; timing the Python kernels only")
    print(f"{'case':<34}{'python (ms)':>12}{'cython (ms)':>12}{'speedup':>9}")
    for name, run in cases():
        py = _time(lambda: run(_kernels_py), args.repeat)
        if compiled is None:
            print(f"{name:<34}{py * 1e3:>12.2f}{'-':>12}{'-':>9}")
            continue
        if list(run(_kernels_py)) != list(run(compiled)):
            raise SystemExit(f"backends disagree on {name}")
        cy = _time(lambda: run(compiled), args.repeat)
        print(f"{name:<34}{py * 1e3:>12.2f}{cy * 1e3:>12.2f}{py / cy:>8.1f}x")


if __name__ == "__main__":
    main()
