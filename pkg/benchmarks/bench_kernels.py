"""Compare the compiled kernels with the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--n 256] [--repeat 20]

Prints one line per kernel with the median time of each backend and the
speed-up, plus a whole-step comparison of the Case2 pair.
"""
import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from b2p1 import kernels


def _median_time(fn, repeat):
    fn()
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def kernel_cases(n, rng):
    ny, nk = n, n // 2 + 1
    uh = rng.standard_normal((ny, nk)) + 1j * rng.standard_normal((ny, nk))
    mx = 1j * rng.standard_normal(nk)
    my = 1j * rng.standard_normal(ny)
    P = 1.0 + rng.random((ny, nk))
    outc = np.empty_like(uh)
    f = [rng.standard_normal((n, n)) * 0.1 for _ in range(5)]
    outr = np.empty((n, n))
    y, k1, k2, k3, k4 = (rng.standard_normal(2 * n * n) for _ in range(5))
    out1 = np.empty_like(y)
    return {
        "spectral_multiply": lambda K: K.spectral_multiply(uh, mx, my, outc),
        "symbol_solve": lambda K: K.symbol_solve(uh, P, 1e-12, outc),
        "st_exact_core": lambda K: K.st_exact_core(*f, 0.01, 0.1, 0.1, 1.0, outr),
        "axpy": lambda K: K.axpy(y, 0.5, k1, out1),
        "rk4_combine": lambda K: K.rk4_combine(y, k1, k2, k3, k4, 0.01, out1),
    }


STEP_SNIPPET = """
import time, numpy as np
from b2p1.grid import Grid2D
from b2p1.params import SmallParams, Regime
from b2p1.bathymetry import Bathymetry
from b2p1.dynamics import PairModel, WaveState, StepperConfig, step_rk4
g = Grid2D({n}, {n}, 40.0, 40.0)
X, Y = g.mesh()
p = SmallParams(alpha=0.1, beta=0.1, gamma=0.1, delta=0.1)
m = PairModel(g, Bathymetry.tent(0.5), p, Regime.CASE2)
s = WaveState(0.3 * np.exp(-((X - 20) ** 2 + (Y - 20) ** 2) / 9), g.zeros(), 0.0, g)
cfg = StepperConfig(dt=0.5 * g.dx)
s = step_rk4(s, cfg, model=m)
t0 = time.perf_counter()
for _ in range(10):
    s = step_rk4(s, cfg, model=m)
print((time.perf_counter() - t0) / 10)
"""


def step_time(n, pure):
    env = dict(os.environ, B2P1_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", STEP_SNIPPET.format(n=n)], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--no-step", action="store_true", help="skip the whole-step comparison")
    args = ap.parse_args(argv)
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not built; only the NumPy fallback is available")
    rng = np.random.default_rng(0)
    cases = kernel_cases(args.n, rng)
    print(f"grid {args.n}x{args.n}, median of {args.repeat}")
    print(f"{'kernel':20s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for name, fn in cases.items():
        tp = _median_time(lambda: fn(impls["python"]), args.repeat)
        if "cython" in impls:
            tc = _median_time(lambda: fn(impls["cython"]), args.repeat)
            print(f"{name:20s} {tp * 1e3:12.3f} {tc * 1e3:12.3f} {tp / tc:9.2f}")
        else:
            print(f"{name:20s} {tp * 1e3:12.3f} {'-':>12s} {'-':>9s}")
    if not args.no_step and "cython" in impls:
        n = min(args.n, 128)
        tp, tc = step_time(n, True), step_time(n, False)
        print(f"{'Case2 RK4 step ' + str(n):20s} {tp * 1e3:12.3f} {tc * 1e3:12.3f} {tp / tc:9.2f}")


if __name__ == "__main__":
    main()
