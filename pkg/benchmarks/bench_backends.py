"""Benchmark the compiled sampling kernels against the pure-Python fallback.

Both backends consume identical random streams and return identical values;
this script quantifies the speed gap that justifies shipping the extension.

    python benchmarks/bench_backends.py [--quick]
"""

import argparse
import time

import numpy as np

from dewijs import backend
from dewijs.rng import worker_bit_generators


def _time(fn, repeats=1):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench(quick=False):
    scale = 0.2 if quick else 1.0
    n_wos = int(20_000 * scale)
    n_euler = int(400 * scale)
    n_occ_walks = int(40 * scale)
    occ_horizon = 100_000

    sx = np.array([0, 1], dtype=np.int64)
    sy = np.array([0, 0], dtype=np.int64)
    sw = np.array([1.0, -1.0])

    cases = [
        ("walk-on-spheres", n_wos,
         lambda impl, bg: impl.wos_angles(bg, 0.5, 0.0, n_wos, 1e-6, 100_000)),
        ("euler step=1e-4", n_euler,
         lambda impl, bg: impl.euler_angles(bg, 0.5, 0.0, n_euler, 1e-4)),
        (f"lattice walk T={occ_horizon}", n_occ_walks,
         lambda impl, bg: impl.occupation_sums(bg, 0, 0, n_occ_walks,
                                               occ_horizon, sx, sy, sw)),
    ]

    impls = {}
    impls["python"] = backend.get_impl("python")
    try:
        impls["compiled"] = backend.get_impl("compiled")
    except ImportError:
        print("compiled backend not built; benchmarking fallback only")

    print(f"{'kernel':<28}{'backend':<10}{'walks':>8}{'seconds':>10}{'per walk':>12}")
    for name, n, runner in cases:
        times = {}
        values = {}
        for label, impl in impls.items():
            (bg,) = worker_bit_generators(42, 1)
            elapsed, result = _time(lambda: runner(impl, bg))
            times[label] = elapsed
            values[label] = result
            print(f"{name:<28}{label:<10}{n:>8}{elapsed:>10.3f}"
                  f"{elapsed / n * 1e6:>10.1f} us")
        if len(impls) == 2:
            a, b = values["compiled"], values["python"]
            same = (np.array_equal(a[0], b[0]) if isinstance(a, tuple)
                    else np.array_equal(a, b))
            print(f"{'':<28}speedup x{times['python'] / times['compiled']:.1f}"
                  f"   identical output: {same}")
    print(f"\nactive backend at import time: {backend.active_backend()}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller workloads for a fast look")
    bench(parser.parse_args().quick)
