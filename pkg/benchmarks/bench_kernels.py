"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat R]
"""

from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from sggalois import _pykernels
from sggalois.galois import gal_group
from sggalois.psg import catalog

try:
    from sggalois import _ckernels
except ImportError:
    _ckernels = None


def rank_case(nrows: int, ncols: int, seed: int = 0):
    rng = random.Random(seed)
    rows = [rng.getrandbits(ncols) for _ in range(nrows)]
    return lambda mod: mod.rank_rows(rows, ncols)


def rref_case(nrows: int, ncols: int, seed: int = 0):
    rng = random.Random(seed)
    rows = [rng.getrandbits(ncols) for _ in range(nrows)]
    return lambda mod: mod.rref_rows(rows, ncols)


def mul_case(name: str, count: int, seed: int = 0):
    G = gal_group(catalog(name))
    rng = random.Random(seed)
    elems = G.elements()
    gs = np.array([rng.choice(elems) for _ in range(count)], dtype=np.uint64)
    hs = np.array([rng.choice(elems) for _ in range(count)], dtype=np.uint64)
    args = (G.n, list(G.V.basis), list(G.V.pivots))
    return lambda mod: mod.gal_mul_many(gs, hs, *args)


CASES = {
    "rank 500x500": rank_case(500, 500),
    "rank 2000x300": rank_case(2000, 300),
    "rref 400x400": rref_case(400, 400),
    "gal_mul FAN2 x20000": mul_case("FAN2", 20000),
    "gal_mul PRODUCT(FAN2,FAN2) x20000": mul_case("PRODUCT(FAN2,FAN2)", 20000),
}


def best(fn, mod, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(mod), number=1, repeat=repeat))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'case':38} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, fn in CASES.items():
        tp = best(fn, _pykernels, args.repeat)
        if _ckernels is None:
            print(f"{label:38} {tp:10.4f} {'n/a':>10} {'':>8}")
            continue
        tc = best(fn, _ckernels, args.repeat)
        same = np.array_equal(np.asarray(fn(_pykernels)), np.asarray(fn(_ckernels)))
        print(f"{label:38} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
