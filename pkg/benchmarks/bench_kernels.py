"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one row per kernel with the best-of-N wall time of each backend and
the speedup.  The compiled module must be built (``pip install -e .``).
"""

import argparse
import timeit

import numpy as np

from leeyang import _pykernels
from leeyang.models import ModelSpec, _kernel_tables, bonds

try:
    from leeyang import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def _histogram_case():
    model = ModelSpec("ising", 0.5, 2, 4)
    args = (model.n_states, *_kernel_tables(model), bonds(model.d, model.L), model.V)
    return "sector_histogram (ising 4x4, 2^16 states)", lambda k: k.sector_histogram(*args)


def _horner_case():
    rng = np.random.default_rng(0)
    c = rng.normal(size=257) + 0j
    zs = [complex(z) for z in np.exp(2j * np.pi * rng.random(200))]

    def run(k):
        for z in zs:
            k.comp_horner(c, z)
    return "comp_horner (degree 256, 200 points)", run


def _aberth_case():
    rng = np.random.default_rng(1)
    c = rng.uniform(0.5, 2.0, 65).astype(complex)
    start = 1.1 * np.exp(2j * np.pi * (np.arange(64) + 0.25) / 64)

    def run(k):
        k.aberth(c, start.copy(), 1e-13, 200)
    return "aberth (degree 64)", run


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare")
        return 1
    print(f"{'kernel':45s} {'cython [s]':>12s} {'python [s]':>12s} {'speedup':>9s}")
    for make in (_histogram_case, _horner_case, _aberth_case):
        name, fn = make()
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        print(f"{name:45s} {tc:12.4f} {tp:12.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
