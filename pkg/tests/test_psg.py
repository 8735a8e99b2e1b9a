import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BASE, PAIRS
from sggalois.errors import DimensionError, GuardrailError, MalformedPsgError
from sggalois.galois import random_basis
from sggalois.gf2 import BitVec, Gf2Matrix, Gf2Subspace
from sggalois.psg import (
    Psg,
    all_subgroups,
    catalog,
    catalog_names,
    coordinate_embedding,
    fan,
    identity_morphism,
    is_formally_real,
    is_pythagorean,
    is_reduced,
    is_saturated,
    is_special,
    isometry2,
    orderings,
    product,
    saturated_subgroups,
    validate,
)


def brute_orderings(p):
    """Characters chi with chi(-1) = 1 whose kernel is closed under representation."""
    out = []
    for c in range(p.size):
        chi = lambda x: bin(c & x).count("1") & 1
        if not chi(p.minus_one):
            continue
        ker = [a for a in p.elements() if not chi(a)]
        if all(not chi(y) for a in ker for y in p.V(a)):
            out.append(c)
    return out


@pytest.mark.parametrize("name", BASE + PAIRS + ["FAN(3)"])
def test_catalog_entries_validate(name):
    p = catalog(name)
    rep = validate(p)
    assert rep.ok, rep.to_json()
    assert "SG5" in rep.checked


@pytest.mark.parametrize("name", BASE + ["FAN(3)", "PRODUCT(Z2_REAL,Z2_REAL)"])
def test_catalog_entries_special(name):
    assert validate(catalog(name), require_special=True).ok
    assert is_special(catalog(name))


def test_value_set_witnesses():
    p = catalog("FAN2")
    vs = list(p.value_sets)
    vs[2] = frozenset(vs[2] - {0})
    bad = Psg(2, p.minus_one, tuple(vs))
    rep = validate(bad)
    assert not rep.ok
    v1 = [v for v in rep.violations if v.axiom == "V-one"]
    assert v1 and v1[0].witness == ("01",)


def test_minus_one_value_set_must_be_everything():
    assert validate(Psg(1, 1, (frozenset({0}), frozenset({0, 1})))).ok
    worse = Psg(1, 1, (frozenset({0}), frozenset({0})))
    assert "V-minus-one" in validate(worse).axioms_failed()


def test_structural_errors():
    with pytest.raises(MalformedPsgError):
        Psg(1, 2, (frozenset({0}), frozenset({0, 1})))
    with pytest.raises(MalformedPsgError):
        Psg(1, 1, (frozenset({0}),))
    with pytest.raises(MalformedPsgError):
        Psg(1, 1, (frozenset({0}), frozenset({0, 5})))
    with pytest.raises(GuardrailError):
        Psg(13, 0, ())


@pytest.mark.parametrize(
    "doc",
    [
        {"minus_one": "1", "value_sets": {}},
        {"basis_size": 1, "minus_one": "1"},
        {"basis_size": 1, "minus_one": "1", "value_sets": {"0": ["0"]}},
        {"basis_size": 1, "minus_one": "1", "value_sets": {"0": ["0"], "1": ["2"]}},
        {"basis_size": 1, "minus_one": "1", "value_sets": {"0": "0", "1": ["0", "1"]}},
        {"basis_size": -1, "minus_one": "", "value_sets": {}},
        [],
    ],
)
def test_from_json_rejects_malformed(doc):
    with pytest.raises(MalformedPsgError):
        Psg.from_json(doc)


@pytest.mark.parametrize("name", BASE + PAIRS)
def test_json_roundtrip(name):
    p = catalog(name)
    doc = json.loads(json.dumps(p.to_json()))
    assert Psg.from_json(doc) == p


@pytest.mark.parametrize("name", BASE + PAIRS)
def test_isometry_axiom_instances(name):
    p = catalog(name)
    m = p.minus_one
    for a, b in itertools.product(p.elements(), repeat=2):
        assert isometry2(p, a, b, b, a)
    for a in p.elements():
        assert isometry2(p, a, a ^ m, 0, m)


def test_fan2_form_examples():
    p = catalog("FAN2")
    assert not any(isometry2(p, a, a, 0, 0) for a in range(1, 4))
    assert is_reduced(p)


def test_base_catalog_shapes():
    assert catalog("Z2_REAL").V(0) == {0}
    assert catalog("F3LIKE").represents(0, 1)
    assert [n for n in catalog_names() if "(" not in n] == BASE
    with pytest.raises(KeyError):
        catalog("FAN(x)")
    with pytest.raises(KeyError):
        catalog("PRODUCT(FAN2)")


@pytest.mark.parametrize("name,count", [("Z2_REAL", 1), ("F3LIKE", 0), ("FAN2", 2), ("TRIVIAL_SG", 0), ("FAN(3)", 4)])
def test_ordering_counts(name, count):
    p = catalog(name)
    assert len(orderings(p)) == count
    assert [c.bits for c in orderings(p)] == sorted(brute_orderings(p), key=lambda c: p.fmt(c))


@pytest.mark.parametrize("a,b", list(itertools.product(BASE, repeat=2)))
def test_product_orderings_add(a, b):
    p, q = catalog(a), catalog(b)
    r = product(p, q)
    assert validate(r).ok
    assert len(orderings(r)) == len(orderings(p)) + len(orderings(q))


@pytest.mark.parametrize("name", BASE)
def test_product_with_trivial_is_identity(name):
    p = catalog(name)
    r = product(catalog("TRIVIAL_SG"), p)
    assert (r.n, r.minus_one, r.value_sets) == (p.n, p.minus_one, p.value_sets)


def test_saturated_subgroups():
    z2 = catalog("Z2_REAL")
    assert [s.basis for s in saturated_subgroups(z2)] == [(), (1,)]
    fan2 = catalog("FAN2")
    sats = {s.basis for s in saturated_subgroups(fan2)}
    assert {(), (0b10,), (0b11,), (0b01, 0b10)} == sats
    for name in BASE:
        p = catalog(name)
        assert is_saturated(p, Gf2Subspace.zero(p.n)) == (p.V(0) == {0})


def test_all_subgroups_counts():
    # Gaussian binomial sums: 1, 2, 5, 16, 67
    assert [len(all_subgroups(n)) for n in range(5)] == [1, 2, 5, 16, 67]


def test_real_and_pythagorean_flags():
    flags = {n: (is_formally_real(catalog(n)), is_pythagorean(catalog(n))) for n in BASE}
    assert flags == {
        "TRIVIAL_SG": (False, True),
        "Z2_REAL": (True, True),
        "F3LIKE": (False, False),
        "FAN2": (True, True),
    }


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["FAN2", "FAN(3)", "PRODUCT(Z2_REAL,F3LIKE)"]), st.integers(0, 2**32))
def test_rebase_preserves_structure(name, seed):
    p = catalog(name)
    B = random_basis(p.n, random.Random(seed))
    q = p.rebase(B)
    assert validate(q).ok
    assert len(orderings(q)) == len(orderings(p))
    inv = B.inverse()
    for x in p.elements():
        for y in p.V(x):
            assert inv.left_apply(y) in q.V(inv.left_apply(x))
    assert q.rebase(inv) == p


def test_rebase_rejects_singular():
    with pytest.raises(DimensionError):
        catalog("FAN2").rebase(Gf2Matrix.from_lists([[1, 1], [1, 1]]))


def test_morphisms():
    z2, fan2 = catalog("Z2_REAL"), catalog("FAN2")
    f = coordinate_embedding(z2, fan2, [0])
    assert f.is_valid() and f.is_injective()
    g = coordinate_embedding(fan2, fan(3), [0, 1])
    assert g.is_valid()
    h = g.compose(f)
    assert h.is_valid() and h(1) == 1
    assert identity_morphism(fan2).is_valid()
    bad = coordinate_embedding(z2, fan2, [1])
    assert "f(-1) != -1" in bad.violations()
    with pytest.raises(DimensionError):
        f.compose(g)
