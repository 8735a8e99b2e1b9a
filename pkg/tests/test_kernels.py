import random

import numpy as np
import pytest

from sggalois import _pykernels, kernels
from sggalois.galois import gal_group
from sggalois.psg import catalog

try:
    from sggalois import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_rows(rng, nrows, ncols):
    return [rng.getrandbits(ncols) for _ in range(nrows)]


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@needs_c
@pytest.mark.parametrize("nrows,ncols", [(1, 1), (10, 70), (300, 64), (300, 200), (600, 130), (50, 500)])
def test_rank_and_rref_agree(nrows, ncols):
    rng = random.Random(nrows * 1000 + ncols)
    rows = random_rows(rng, nrows, ncols)
    # force dependencies
    rows += [rows[0] ^ rows[-1], 0]
    assert _ckernels.rank_rows(rows, ncols) == _pykernels.rank_rows(rows, ncols)
    assert _ckernels.rref_rows(rows, ncols) == _pykernels.rref_rows(rows, ncols)


def test_rref_is_reduced():
    rng = random.Random(0)
    rows = random_rows(rng, 40, 30)
    red = kernels.rref_rows(rows, 30)
    piv = [(r & -r).bit_length() - 1 for r in red]
    assert piv == sorted(piv)
    for r, p in zip(red, piv):
        assert sum((s >> p) & 1 for s in red) == 1


@needs_c
@pytest.mark.parametrize("name", ["FAN2", "FAN(3)", "PRODUCT(FAN2,F3LIKE)", "PRODUCT(FAN2,FAN2)"])
def test_gal_mul_many_agree(name):
    G = gal_group(catalog(name))
    rng = random.Random(1)
    elems = G.elements()
    gs = np.array([rng.choice(elems) for _ in range(500)], dtype=np.uint64)
    hs = np.array([rng.choice(elems) for _ in range(500)], dtype=np.uint64)
    args = (G.n, list(G.V.basis), list(G.V.pivots))
    c = _ckernels.gal_mul_many(gs, hs, *args)
    py = _pykernels.gal_mul_many(gs, hs, *args)
    assert np.array_equal(c, py)
    assert [int(x) for x in py[:50]] == [G.mul(int(a), int(b)) for a, b in zip(gs[:50], hs[:50])]


def test_pure_fallback_is_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SGGALOIS_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "import sggalois; print(sggalois.BACKEND)"], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


def test_benchmark_runs(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    bench.main(["--repeat", "1"])
    out = capsys.readouterr().out
    assert "gal_mul FAN2" in out and "MISMATCH" not in out
