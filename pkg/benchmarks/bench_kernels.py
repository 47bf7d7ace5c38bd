"""Time the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each case is run once per backend to warm up (numba compiles or loads its
cache), then timed; the outputs of both backends are compared for equality.
"""

import argparse
import random
import time

from locproj import _kernels
from locproj.models import get_spec
from locproj.projection import Cutoffs, rhs_at


def _lambda_case(rng):
    factors = sorted((rng.randint(-6, 12), rng.choice([-2, -1, 1, 2, 3])) for _ in range(25))
    factors = [(g, m) for g, m in factors if g]
    return lambda: _kernels.lambda_rows(factors, 12, -150, 200)


def _divide_case(rng):
    a = [rng.randint(-5, 5) for _ in range(120)]
    factors = [(rng.randint(1, 20), rng.randint(1, 2)) for _ in range(12)]
    return lambda: _kernels.divide_factors(a, factors)


def _conv_case(rng):
    a = [rng.randint(-9, 9) for _ in range(600)]
    b = [rng.randint(-9, 9) for _ in range(600)]
    return lambda: _kernels.conv_trunc(a, b, 600)


def _affine_case(rng):
    spec = get_spec("affine-sl2")
    cut = Cutoffs(18, 18, 18, 18, 40)
    return lambda: rhs_at(spec, cut, n=2).as_dict()


CASES = {
    "lambda_rows": _lambda_case,
    "divide_factors": _divide_case,
    "conv_trunc": _conv_case,
    "rhs_at affine n=2": _affine_case,
}


def bench(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(7)
    print(f"{'case':<20} {'numba (s)':>11} {'numpy (s)':>11} {'speedup':>8}  same")
    for name, make in CASES.items():
        fn = make(rng)
        times, outs = {}, {}
        for backend in ("numba", "numpy"):
            with _kernels.use_backend(backend):
                times[backend], outs[backend] = bench(fn, args.repeat)
        ratio = times["numpy"] / times["numba"]
        same = outs["numba"] == outs["numpy"]
        print(f"{name:<20} {times['numba']:>11.5f} {times['numpy']:>11.5f} {ratio:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
