"""Compare the compiled and pure-Python omega kernels.

    python3 benchmarks/bench_omega.py [--M 563] [--points 20000] [--repeat 3]

Inputs are random reduced fractions p/q in [0, 1) with q <= 2M, the same
shape of input the omega table builder feeds the kernel.
"""

import argparse
import math
import random
import timeit

from zetaforms import _kernels_py
from zetaforms.presets import PRESETS


def sample(points: int, M: int, seed: int) -> tuple[list[int], list[int]]:
    rng = random.Random(seed)
    nums, dens = [], []
    while len(nums) < points:
        q = rng.randint(1, 2 * M)
        p = rng.randrange(q)
        if math.gcd(p, q) == 1:
            nums.append(p)
            dens.append(q)
    return nums, dens


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=563, choices=sorted(PRESETS))
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = PRESETS[args.M]
    nums, dens = sample(args.points, params.M, args.seed)
    kernels = {"python": _kernels_py.omega_batch}
    try:
        from zetaforms import _kernels
    except ImportError:
        print("compiled kernel not built; timing the pure-Python kernel only")
    else:
        kernels["compiled"] = _kernels.omega_batch

    results, times = {}, {}
    for name, fn in kernels.items():
        results[name] = fn(nums, dens, params.M, params.deltas)
        times[name] = min(
            timeit.repeat(lambda: fn(nums, dens, params.M, params.deltas), number=1, repeat=args.repeat)
        )
        print(f"{name:>9}: {times[name]:.4f} s for {args.points} points ({args.points / times[name]:,.0f} points/s)")
    if "compiled" in kernels:
        assert results["compiled"] == results["python"], "backends disagree"
        print(f"outputs agree; speedup {times['python'] / times['compiled']:.1f}x (M={params.M}, J={params.J})")


if __name__ == "__main__":
    main()
