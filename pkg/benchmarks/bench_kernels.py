"""Compare the compiled and numpy kernel backends on the simulator hot path.

    python benchmarks/bench_kernels.py [--n 100000] [--repeat 50]

Each backend is fed identical uniforms, so the printed counts must agree.
"""

import argparse
import time

import numpy as np

from pnsfi import _pykernels, kernels
from pnsfi.simulator import ResponseDistribution


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    u_type, u_assign = rng.random(args.n), rng.random(args.n)
    thresholds = ResponseDistribution(0.5, 0.25, 0.1, 0.15).thresholds()
    types = _pykernels.classify(u_type, thresholds)
    treated = (u_assign < 0.5).astype(np.uint8)

    backends = {"numpy": _pykernels}
    if kernels.compiled_backend is not None:
        backends["cython"] = kernels.compiled_backend
    else:
        print("compiled kernels not built; timing numpy fallback only")

    cases = {
        "classify": lambda b: b.classify(u_type, thresholds),
        "tally": lambda b: b.tally(types, treated),
        "simulate_arms (fused)": lambda b: b.simulate_arms(u_type, u_assign, thresholds, 0.5),
    }
    print(f"n = {args.n:,}, best of {args.repeat}")
    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name in backends) + "   speedup")
    for label, case in cases.items():
        timings, results = {}, {}
        for name, backend in backends.items():
            timings[name], results[name] = best_of(lambda: case(backend), args.repeat)
        agree = len({str(np.asarray(r).tolist()) for r in results.values()}) == 1
        speedup = timings["numpy"] / timings["cython"] if "cython" in timings else float("nan")
        row = "".join(f"{timings[name] * 1e3:>10.3f}ms" for name in backends)
        print(f"{label:<24}{row}   {speedup:6.2f}x{'' if agree else '  MISMATCH'}")


if __name__ == "__main__":
    main()
