import itertools

import pytest

from sggalois.psg import catalog

BASE = ["TRIVIAL_SG", "Z2_REAL", "F3LIKE", "FAN2"]
PAIRS = [f"PRODUCT({a},{b})" for a, b in itertools.combinations_with_replacement(BASE[1:], 2)]
EXTRA = ["FAN(3)", "FAN(4)", "PRODUCT(FAN2,F3LIKE)", "PRODUCT(FAN2,FAN2)"]


def naive_mul(n, g, h):
    """Group law of W(n) on (alpha, beta, gamma) triples of 0/1 lists, beta keyed by (i, j)."""
    a1, b1, c1 = g
    a2, b2, c2 = h
    alpha = [a1[i] ^ a2[i] ^ (c1[i] & c2[i]) for i in range(n)]
    beta = {p: b1[p] ^ b2[p] ^ (c2[p[0]] & c1[p[1]]) for p in b1}
    gamma = [c1[i] ^ c2[i] for i in range(n)]
    return alpha, beta, gamma


@pytest.fixture(params=BASE)
def base_psg(request):
    return catalog(request.param)
