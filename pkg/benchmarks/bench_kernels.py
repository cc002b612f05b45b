"""Compare the compiled and numpy delocalisation kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from cavitywalk import kernels
from cavitywalk.correlations import _kernel_inputs
from cavitywalk.fock import PsiFamily
from cavitywalk.lattice import ArrayModel
from cavitywalk.sweep import FIG_PHIS, TimeGrid, figure_sites, max_delocalization


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the numpy kernel is available")
    names = sorted(backends)

    print("kernel: S(t) on the default 8001-point grid (best of %d, ms)" % args.repeat)
    print(f"{'N':>4} " + " ".join(f"{n:>10}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for n in (2, 8, 16, 32, 64):
        model = ArrayModel(n)
        r, s = figure_sites(n)
        inputs = _kernel_inputs(model, PsiFamily(r, s, math.pi / 4, math.pi / 4))
        times = TimeGrid.for_model(model).times()
        best = {}
        for name in names:
            fn = backends[name]
            best[name] = min(timeit.repeat(lambda: fn(*inputs, times), number=1, repeat=args.repeat)) * 1e3
        line = f"{n:>4} " + " ".join(f"{best[k]:>10.2f}" for k in names)
        if len(names) > 1:
            line += f"   {best['python'] / best['cython']:>7.2f}x"
        print(line)

    print("\nend to end: max_delocalization over 5 phases, N=16 (best of %d, ms)" % args.repeat)
    model = ArrayModel(16)
    r, s = figure_sites(16)
    fams = [PsiFamily(r, s, math.pi / 4, phi) for phi in FIG_PHIS]
    for name in names:
        t = min(timeit.repeat(lambda: [max_delocalization(model, f, backend=name) for f in fams],
                              number=1, repeat=args.repeat))
        print(f"{name:>8}: {t * 1e3:.1f}")

    inputs = _kernel_inputs(ArrayModel(16), fams[1])
    times = TimeGrid.for_model(model).times()
    if len(names) > 1:
        diff = np.max(np.abs(backends["cython"](*inputs, times) - backends["python"](*inputs, times)))
        print(f"\nmax |cython - python| on N=16 series: {diff:.2e}")


if __name__ == "__main__":
    main()
