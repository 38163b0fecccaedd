"""Compare the compiled and pure-numpy kernels.

    python3 benchmarks/bench_kernel.py [--repeat 5] [--trials 20]

Reports per-call time for residual+Jacobian evaluation and per-trial time for
a full LM run, for a few representative specs.
"""

import argparse
import timeit

from mubforge import backend
from mubforge.constellation import parse_spec
from mubforge.objective import residual_system
from mubforge.optimizer import LmConfig, minimize
from mubforge.search import random_point, trial_key

SPECS = ["d=5:4,4,4,2", "d=6:5,4,4,2", "d=6:5,5,5,5", "d=7:6,6,6,6"]


def bench_eval(kernel, spec, repeat):
    k = backend.get_kernel(kernel)
    rs = residual_system(spec)
    x = random_point(spec, 1).angles
    n = 200
    t = min(timeit.repeat(lambda: k.residuals_jacobian(x, spec.d, rs.n_vectors, rs.pu, rs.pw, rs.target, False),
                          number=n, repeat=repeat))
    return t / n


def bench_lm(kernel, spec, trials):
    cfg = LmConfig()
    starts = [random_point(spec, trial_key(0, t)) for t in range(trials)]
    t = timeit.default_timer()
    iters = sum(minimize(s, cfg, kernel=kernel).iterations for s in starts)
    return (timeit.default_timer() - t) / trials, iters / trials


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--trials", type=int, default=20)
    args = ap.parse_args()
    kernels = sorted(backend.KERNELS)
    print(f"kernels available: {', '.join(kernels)} (default {backend.DEFAULT})")
    print(f"{'spec':14} {'kernel':9} {'eval+jac us':>12} {'LM trial ms':>12} {'iters':>7}")
    for text in SPECS:
        spec = parse_spec(text)
        times = {}
        for k in kernels:
            ev = bench_eval(k, spec, args.repeat)
            lm, it = bench_lm(k, spec, args.trials)
            times[k] = lm
            print(f"{text:14} {k:9} {ev * 1e6:12.1f} {lm * 1e3:12.2f} {it:7.0f}")
        if len(times) == 2:
            print(f"{'':14} speedup   {times['python'] / times['compiled']:12.1f}x")


if __name__ == "__main__":
    main()
