"""Compare the compiled and pure-Python block and orbit kernels.

    python3 benchmarks/bench_kernels.py [--repeats N]

Inputs are random permutations on growing point sets plus the regular
action of a cyclic group, whose many block systems exercise the search.
"""

import argparse
import timeit

import numpy as np

from csiso import _fallback

try:
    from csiso import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    for m in (64, 256, 1024):
        yield f"random m={m}", rng.permuted(np.tile(np.arange(m), (2, 1)), axis=1).astype(np.intp)
    for m in (60, 360, 1260):
        yield f"cyclic m={m}", np.roll(np.arange(m), -1).reshape(1, m).astype(np.intp)


def calls(mod, images):
    m = images.shape[1]
    partners = np.arange(1, m, dtype=np.intp)
    return {
        "orbit_labels": lambda: mod.orbit_labels(images),
        "minimal_block": lambda: mod.minimal_block(images, 0, m // 2),
        "smallest_block": lambda: mod.smallest_block(images, 0, partners),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return
    rng = np.random.default_rng(0)
    print(f"{'case':<18}{'kernel':<16}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, images in cases(rng):
        slow, fast = calls(_fallback, images), calls(_kernels, images)
        for kernel in slow:
            n = 1 if kernel == "smallest_block" else args.repeats
            t_py = min(timeit.repeat(slow[kernel], number=1, repeat=n)) * 1e3
            t_cy = min(timeit.repeat(fast[kernel], number=1, repeat=n)) * 1e3
            print(f"{name:<18}{kernel:<16}{t_py:>12.3f}{t_cy:>12.3f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
