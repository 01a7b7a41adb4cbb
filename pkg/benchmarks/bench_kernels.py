"""Compare the compiled and pure-Python kernels on the Monte Carlo hot paths.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

from randcantor.kernels import _pycore

try:
    from randcantor.kernels import _ccore
except ImportError:
    _ccore = None

TARGET = bytes([0])

CASES = {
    "digits(3, 4096)": lambda k, i: k.digits(0, i, 0, 3, 0, 4096),
    "digits(2, 4096)": lambda k, i: k.digits(0, i, 1, 2, 0, 4096),
    "hit_search(d=60)": lambda k, i: k.hit_search(0, i, 0, TARGET, 60),
    "level_hits(n=4, d=60)": lambda k, i: k.level_hits(0, i, 0, 4, 60),
    "preimage_mass(d=20)": lambda k, i: k.preimage_mass(0, i, 0, TARGET, 20),
}


def bench(kernel, fn, calls):
    ids = iter(range(10**9))
    return timeit.timeit(lambda: fn(kernel, next(ids)), number=calls) / calls


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200, help="calls per case")
    args = ap.parse_args()
    if _ccore is None:
        print("compiled backend not built; only the fallback is timed")
    print(f"{'case':24s} {'python us':>12s} {'compiled us':>12s} {'speedup':>8s}")
    for name, fn in CASES.items():
        py = bench(_pycore, fn, max(1, args.repeat // 10))
        if _ccore is None:
            print(f"{name:24s} {py * 1e6:12.1f}")
            continue
        c = bench(_ccore, fn, args.repeat)
        print(f"{name:24s} {py * 1e6:12.1f} {c * 1e6:12.1f} {py / c:8.1f}x")


if __name__ == "__main__":
    main()
