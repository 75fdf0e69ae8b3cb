"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

import argparse
import random
import timeit
from itertools import combinations

from gelltool import _fallback

try:
    from gelltool import _core
except ImportError:
    _core = None


def random_matrix(rng, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


def cases(rng):
    yield "det 8x8 small", "det_int", (random_matrix(rng, 8),)
    yield "det 16x16 small", "det_int", (random_matrix(rng, 16),)
    yield "det 8x8 2^40 entries", "det_int", (random_matrix(rng, 8, -2 ** 40, 2 ** 40),)
    yield "snf 8x8", "snf", (random_matrix(rng, 8),)
    yield "matmul 16x16", "matmul", (random_matrix(rng, 16), random_matrix(rng, 16))
    subsets = list(combinations(range(6), 3))
    yield "minors 6x6 all 3x3", "minors", (random_matrix(rng, 6), subsets, subsets)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _core is None:
        print("compiled extension not built; only the fallback is available")
    rng = random.Random(args.seed)
    print(f"{'kernel':<24}{'fallback us':>14}{'compiled us':>14}{'speedup':>10}")
    for label, name, call_args in cases(rng):
        slow = getattr(_fallback, name)
        t_slow = timeit.timeit(lambda: slow(*call_args), number=args.repeat) / args.repeat * 1e6
        if _core is None:
            print(f"{label:<24}{t_slow:>14.1f}{'-':>14}{'-':>10}")
            continue
        fast = getattr(_core, name)
        assert fast(*call_args) == slow(*call_args), label
        t_fast = timeit.timeit(lambda: fast(*call_args), number=args.repeat) / args.repeat * 1e6
        print(f"{label:<24}{t_slow:>14.1f}{t_fast:>14.1f}{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
