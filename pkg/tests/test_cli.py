import json

import pytest

from qcframe.cli import run


def _strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing_ms", None)
    return doc


def test_flat_ok_and_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["verify", "flat", "--n", "1", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "pass"
    assert len(doc["checks"]) == 17
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_bad_n_exit_2(capsys):
    assert run(["verify", "flat", "--n", "0"]) == 2


def test_unknown_flag_exit_2(capsys):
    assert run(["verify", "flat", "--frobnicate"]) == 2


def test_unknown_command_exit_2(capsys):
    assert run(["bogus"]) == 2


def test_negative_control_exit_1(capsys):
    assert run(["verify", "curved", "--n", "1", "--negative-control"]) == 1


def test_published_exit_1(capsys):
    assert run(["verify", "curved", "--n", "1", "--as-published"]) == 1


def test_curved_ok(capsys):
    assert run(["verify", "curved", "--n", "1"]) == 0


def test_bianchi_ok(capsys):
    assert run(["verify", "bianchi", "--n", "1"]) == 0


def test_normality_small(tmp_path, capsys):
    out = tmp_path / "n.json"
    assert run(["verify", "normality", "--n", "1", "--trials", "2",
                "--seed", "7", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["codiff_constants"]["c_gam"] == "-2"


def test_report_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(["verify", "normality", "--n", "1", "--trials", "2",
                    "--seed", "11", "--json", str(path)]) == 0
    da = _strip_timing(json.loads(a.read_text()))
    db = _strip_timing(json.loads(b.read_text()))
    assert json.dumps(da, sort_keys=True) == json.dumps(db, sort_keys=True)


def test_lie_commands(capsys):
    assert run(["lie", "jacobi", "--n", "1", "--trials", "5", "--seed", "3"]) == 0
    assert run(["lie", "killing", "--n", "1"]) == 0
    assert run(["lie", "g1", "--n", "1", "--trials", "5", "--seed", "3"]) == 0


def test_example_and_classify(capsys):
    assert run(["example", "heisenberg"]) == 0
    assert run(["classify", "homogeneity", "--n", "1", "--seed", "5"]) == 0


def test_classify_with_component_file(tmp_path, capsys):
    import random
    from qcframe.cochains import components_to_json, random_components
    from qcframe.tensors import StandardConstants
    consts = StandardConstants(1)
    doc = components_to_json(random_components(random.Random(4), consts), (1, 0))
    path = tmp_path / "compo.json"
    path.write_text(json.dumps(doc))
    assert run(["classify", "homogeneity", "--n", "1",
                "--components", str(path)]) == 0


def test_signature_flag(capsys):
    assert run(["verify", "flat", "--n", "2", "--signature", "1,1"]) == 0
