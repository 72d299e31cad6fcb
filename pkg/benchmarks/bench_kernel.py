"""Compare the compiled and NumPy mode-sum kernels.

    python benchmarks/bench_kernel.py [--repeat N]

Times a single pair tensor at a few axial separations (short separations
keep many evanescent modes alive) and a full 12-atom coupling matrix.
"""
import argparse
import timeit

import numpy as np

from magnetoguide import _kernel_py

try:
    from magnetoguide import _kernel
except ImportError:
    _kernel = None


def bench_pair(fn, dz, repeat):
    args = (4.0, 2.0, 1.3, 0.7, 0.0, 2.9, 1.2, dz, 60, 1e-12)
    return min(timeit.repeat(lambda: fn(*args), number=20, repeat=repeat)) / 20


def bench_matrix(fn, repeat):
    rng = np.random.default_rng(0)
    pts = rng.random((12, 3)) * (4.0, 2.0, 750.0)
    pts = pts[np.argsort(pts[:, 2])]

    def build():
        for i in range(12):
            for j in range(i + 1, 12):
                fn(4.0, 2.0, *pts[i], *pts[j], 60, 1e-12)
    return min(timeit.repeat(build, number=3, repeat=repeat)) / 3


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = [("python", _kernel_py.pair_tensor)]
    if _kernel is not None:
        backends.append(("cython", _kernel.pair_tensor))
    else:
        print("compiled kernel not built; timing the NumPy fallback only")

    print(f"{'case':<22}" + "".join(f"{name:>14}" for name, _ in backends) + "   speedup")
    cases = [(f"pair dz={dz}", lambda fn, dz=dz: bench_pair(fn, dz, args.repeat))
             for dz in (0.05, 0.5, 5.0)]
    cases.append(("12-atom Sigma", lambda fn: bench_matrix(fn, args.repeat)))
    for label, run in cases:
        times = [run(fn) for _, fn in backends]
        line = f"{label:<22}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
        if len(times) == 2:
            line += f"   {times[0] / times[1]:6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
