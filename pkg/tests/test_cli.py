import json

import pytest

from sggalois.cli import EXIT_DOMAIN, EXIT_GUARD, EXIT_OK, EXIT_USAGE, main, render_text
from sggalois.psg import catalog


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


@pytest.mark.parametrize("cmd", ["validate", "info", "galois", "orderings", "standard", "cohomology"])
@pytest.mark.parametrize("name", ["TRIVIAL_SG", "Z2_REAL", "F3LIKE", "FAN2"])
def test_commands_succeed_on_catalog(capsys, cmd, name):
    code, out, _ = run(capsys, cmd, "--catalog", name)
    assert code == EXIT_OK
    assert out.strip()


@pytest.mark.parametrize("cmd", ["info", "galois", "cohomology", "catalog-list", "orderings"])
def test_json_roundtrips_byte_identically(capsys, cmd):
    argv = [cmd, "--json"] + ([] if cmd == "catalog-list" else ["--catalog", "FAN2"])
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert json.dumps(doc, sort_keys=True, indent=2) + "\n" == out
    assert run(capsys, *argv)[1] == out


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog-list", "--json")
    names = [e["name"] for e in json.loads(out)["catalog"]]
    assert {"TRIVIAL_SG", "Z2_REAL", "F3LIKE", "FAN2"} <= set(names)


def test_usage_errors(capsys):
    assert run(capsys, "galois")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate", "--catalog", "FAN2")[0] == EXIT_USAGE
    code, _, err = run(capsys, "info", "--catalog", "NOPE")
    assert code == EXIT_USAGE and "unknown catalog" in err
    assert run(capsys, "info", "--catalog", "FAN2", "--bases", "x")[0] == EXIT_USAGE
    assert run(capsys, "info", "--file", "/nonexistent/p.json")[0] == EXIT_USAGE


def test_malformed_files(capsys, tmp_path):
    assert run(capsys, "validate", "--file", write(tmp_path, "{not json"))[0] == EXIT_USAGE
    doc = catalog("FAN2").to_json()
    del doc["value_sets"]
    assert run(capsys, "validate", "--file", write(tmp_path, doc))[0] == EXIT_USAGE
    doc = catalog("FAN2").to_json()
    doc["value_sets"]["011"] = []
    assert run(capsys, "validate", "--file", write(tmp_path, doc))[0] == EXIT_USAGE


def test_invalid_psg_reports_witness(capsys, tmp_path):
    doc = catalog("FAN2").to_json()
    doc["value_sets"]["01"] = ["01"]
    path = write(tmp_path, doc)
    code, out, _ = run(capsys, "validate", "--file", path, "--json")
    rep = json.loads(out)
    assert code == EXIT_DOMAIN and not rep["valid"]
    assert any(v["axiom"] == "V-one" and v["witness"] for v in rep["violations"])
    code, _, err = run(capsys, "galois", "--file", path)
    assert code == EXIT_DOMAIN and "not a pre-special group" in err


def test_file_wins_over_catalog(capsys, tmp_path):
    path = write(tmp_path, catalog("F3LIKE").to_json())
    code, out, err = run(capsys, "info", "--catalog", "FAN2", "--file", path, "--json")
    assert code == EXIT_OK and "file wins" in err
    assert json.loads(out)["name"] == "F3LIKE"


def test_galois_f3like(capsys):
    code, out, _ = run(capsys, "galois", "--catalog", "F3LIKE", "--json")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["order"] == 4 and rep["fingerprint"] == "Z4" and rep["formally_real"] is False


def test_galois_standard_and_bases(capsys):
    code, out, _ = run(capsys, "galois", "--catalog", "FAN2", "--standard", "--json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["fingerprint"] == "D4" and rep["standard"]["standard"]
    code, out, _ = run(capsys, "galois", "--catalog", "Z2_REAL", "--bases", "3", "--seed", "7", "--json")
    assert code == EXIT_OK and json.loads(out)["base_change"]["all_ok"]


def test_cohomology_output(capsys):
    rep = json.loads(run(capsys, "cohomology", "--catalog", "F3LIKE", "--json")[1])
    assert rep["h0"] == 2 and rep["h1_dim"] == 1
    rep = json.loads(run(capsys, "cohomology", "--catalog", "TRIVIAL_SG", "--json")[1])
    assert rep["h1_dim"] == 0 and rep["relation_pairs"] == [{"a": "", "b": "", "cup_is_coboundary": True}]
    rep = json.loads(run(capsys, "cohomology", "--catalog", "FAN2", "--json")[1])
    table = {(r["a"], r["b"]): r["cup_is_coboundary"] for r in rep["relation_pairs"]}
    assert all(table[(a, b)] for a, b in table if a == "00" or b == "00")
    assert rep["k2_map_well_defined"]


def test_guardrail_exit(capsys):
    code, _, err = run(capsys, "cohomology", "--catalog", "FAN(4)", "--max-order", "5")
    assert code == EXIT_GUARD and "--max-order" in err
    assert run(capsys, "cohomology", "--catalog", "FAN(3)", "--max-order", "5")[0] == EXIT_OK


def test_orderings_agree(capsys):
    rep = json.loads(run(capsys, "orderings", "--catalog", "PRODUCT(FAN2,Z2_REAL)", "--json")[1])
    assert rep["agree"] and len(rep["orderings"]) == 3


def test_render_text():
    txt = render_text({"b": [], "a": True, "c": {"x": ""}, "d": [1, 2]})
    assert txt.splitlines() == ["a: true", "b: none", "c:", '  x: ""', "d:", "  - 1", "  - 2"]


def test_seeded_output_is_reproducible(capsys):
    argv = ["galois", "--catalog", "FAN2", "--bases", "3", "--seed", "5", "--json"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    assert run(capsys, *argv[:-2], "6", "--json")[1] != first
