import json
from pathlib import Path

import pytest

from tiltkit.cli import main

from conftest import loop_pair_presentation
from tiltkit.formats import algebra_input_to_json


def algebra_doc(a, b):
    return algebra_input_to_json(loop_pair_presentation(a, b))


def write_json(path, doc):
    path.write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


@pytest.fixture()
def ws(tmp_path, monkeypatch):
    monkeypatch.setenv("TILTKIT_WORKSPACE", str(tmp_path / "ws"))
    return tmp_path


def alg_file(ws, a, b, name=None):
    p = ws / (name or f"alg{a}{b}.json")
    write_json(p, algebra_doc(a, b))
    return p


def middle_module_doc():
    return {
        "dims": {"x": 3, "y": 2},
        "arrows": {
            "d": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"]],
            "t": [["0", "0"], ["1", "0"]],
            "f": [["0", "0", "0"], ["1", "0", "0"]],
        },
    }


def test_algebra_build_summary(ws, capsys):
    rc = main(["algebra", "build", str(alg_file(ws, 3, 2))])
    out = capsys.readouterr().out
    assert rc == 0
    assert "dimension 7" in out
    assert "det 6" in out
    artifact = [l for l in out.splitlines() if l.startswith("artifact ")][0].split()[1]
    assert Path(artifact).exists()


def test_algebra_build_schema_error(ws, capsys):
    bad = ws / "bad.json"
    write_json(bad, {"quiver": {"vertices": ["x"], "arrows": [
        {"name": "g", "from": "x", "to": "zzz"}]}, "nilpotency_bound": 2})
    rc = main(["algebra", "build", str(bad)])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_algebra_build_malformed_json(ws, capsys):
    bad = ws / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    rc = main(["algebra", "build", str(bad)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "line" in err


def test_module_check_good_and_corrupt(ws, capsys):
    alg = alg_file(ws, 3, 2)
    good = ws / "mod.json"
    write_json(good, middle_module_doc())
    assert main(["module", "check", str(alg), str(good)]) == 0
    bad_doc = middle_module_doc()
    bad_doc["arrows"]["t"] = [["1", "0"], ["0", "1"]]
    bad = ws / "bad_mod.json"
    write_json(bad, bad_doc)
    assert main(["module", "check", str(alg), str(bad)]) == 1
    out = capsys.readouterr().out
    assert "INVALID" in out


def test_apr_command_trichotomy(ws, capsys):
    out_file = ws / "cert22.json"
    rc = main(["apr", str(alg_file(ws, 2, 2)), "--e", "x", "--bound", "8",
               "--out", str(out_file)])
    assert rc == 0
    doc = json.loads(out_file.read_text())
    assert doc["verdict"] == "VALID"
    assert doc["E_triangular"]["corner_b_dim"] == 2
    rc32 = main(["apr", str(alg_file(ws, 3, 2)), "--e", "x", "--bound", "8",
                 "--out", str(ws / "cert32.json")])
    assert rc32 == 0
    doc32 = json.loads((ws / "cert32.json").read_text())
    assert doc32["verdict"] == "VALID"
    assert "E_triangular" not in doc32
    rc12 = main(["apr", str(alg_file(ws, 1, 2)), "--e", "x", "--bound", "6"])
    assert rc12 == 1
    assert "precondition failure" in capsys.readouterr().out


def test_tilting_check_command(ws, capsys):
    alg = alg_file(ws, 3, 2)
    mod = ws / "mod.json"
    write_json(mod, middle_module_doc())
    rc = main(["tilting-check", str(alg), str(mod), "--bound", "6",
               "--out", str(ws / "tilt.json")])
    assert rc == 1   # the middle term alone is not tilting
    doc = json.loads((ws / "tilt.json").read_text())
    assert doc["verdict"] is False


def test_glue_identity_command(ws):
    rc = main(["glue", str(alg_file(ws, 3, 2)), "--e", "x", "--mode", "jshriek",
               "--bound", "8", "--out", str(ws / "glue.json")])
    assert rc == 0
    doc = json.loads((ws / "glue.json").read_text())
    assert doc["verdict"] == "VALID"
    assert doc["E"]["dimension"] == 7
    assert {c["id"] for c in doc["conditions"]} >= {
        "cross_vanishing", "automatic_reverse_vanishing", "endo_zero_corner"}


def test_glue_stalk_command(ws):
    # T = the regular module of the corner C = k[t]/t^2 given by its arrows
    t_doc = {"dims": {"y": 2}, "arrows": {"t": [["0", "0"], ["1", "0"]]}}
    write_json(ws / "t.json", t_doc)
    rc = main(["glue", str(alg_file(ws, 2, 2)), "--e", "x", "--mode", "stalk",
               "-T", str(ws / "t.json"), "--shift", "1", "--bound", "8",
               "--out", str(ws / "stalk.json")])
    assert rc == 0
    doc = json.loads((ws / "stalk.json").read_text())
    assert doc["verdict"] == "VALID"
    assert doc["E_triangular"]["bimodule_dim"] == 2


def test_glue_jstar_refusal(ws, capsys):
    rc = main(["glue", str(alg_file(ws, 1, 2)), "--e", "x", "--mode", "jstar",
               "--bound", "5"])
    assert rc == 1
    assert "refused" in capsys.readouterr().out


def test_recollement_verify_command(ws, capsys):
    corpus = ws / "corpus"
    corpus.mkdir()
    write_json(corpus / "middle.json", middle_module_doc())
    write_json(corpus / "proj_x.json", {
        "dims": {"x": 3, "y": 2},
        "arrows": {
            "d": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"]],
            "t": [["0", "0"], ["1", "0"]],
            "f": [["1", "0", "0"], ["0", "1", "0"]],
        },
    })
    rc = main(["recollement", "verify", str(alg_file(ws, 3, 2)), str(corpus),
               "--e", "x", "--out", str(ws / "rec.json")])
    assert rc == 0
    doc = json.loads((ws / "rec.json").read_text())
    assert doc["axioms_ok"] is True
    assert doc["functor_criteria"]["all_four_iff_corner"] is True
    assert all(row["exact"] and row["hom_vanishes"] for row in doc["torsion"])


def test_recollement_verify_catches_corrupt(ws):
    corpus = ws / "corpus"
    corpus.mkdir()
    bad = middle_module_doc()
    bad["arrows"]["t"] = [["1", "0"], ["0", "1"]]
    write_json(corpus / "bad.json", bad)
    rc = main(["recollement", "verify", str(alg_file(ws, 3, 2)), str(corpus),
               "--e", "x", "--out", str(ws / "rec.json")])
    assert rc == 1
    doc = json.loads((ws / "rec.json").read_text())
    assert doc["corrupted_modules"]


def test_invariants_compare_command(ws, capsys):
    a = alg_file(ws, 2, 2, "a.json")
    b = alg_file(ws, 2, 2, "b.json")
    assert main(["invariants", "compare", str(a), str(b)]) == 0
    point = ws / "point.json"
    write_json(point, {"field": "Q",
                       "quiver": {"vertices": ["v"], "arrows": []},
                       "relations": [], "nilpotency_bound": 1})
    assert main(["invariants", "compare", str(a), str(point)]) == 1


def test_certificates_byte_identical(ws):
    alg = alg_file(ws, 2, 2)
    for name in ("c1.json", "c2.json"):
        rc = main(["apr", str(alg), "--e", "x", "--bound", "8",
                   "--out", str(ws / name)])
        assert rc == 0
    assert (ws / "c1.json").read_bytes() == (ws / "c2.json").read_bytes()


def test_workspace_cache_is_pure(ws, capsys):
    alg = alg_file(ws, 3, 2)
    assert main(["algebra", "build", str(alg)]) == 0
    first = capsys.readouterr().out
    import shutil
    shutil.rmtree(Path(str(ws / "ws")), ignore_errors=True)
    assert main(["algebra", "build", str(alg)]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_algebra_info_prime_field(ws, capsys):
    rc = main(["--field", "F101", "algebra", "info", str(alg_file(ws, 2, 2))])
    assert rc == 0
    out = capsys.readouterr().out
    assert "dimension 6" in out and "det 4" in out


def test_bad_field_flag(ws, capsys):
    rc = main(["--field", "R", "algebra", "info", str(alg_file(ws, 2, 2))])
    assert rc == 2
