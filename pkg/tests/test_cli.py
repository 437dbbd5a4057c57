"""End-to-end CLI behavior: JSON output and exit codes."""

import json

import pytest

from clustercc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_classify(capsys):
    code, out = run(capsys, "classify", "--fixture", "b3tilde", "--json")
    assert code == 0
    assert out["kind"] == "Affine"
    assert out["null_root"] == [1, 1, 1, 1]


def test_classify_custom_input(capsys, tmp_path):
    path = tmp_path / "triple.json"
    path.write_text(json.dumps({
        "cartan": [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]],
        "symmetrizer": [1, 1, 1],
        "orientation": [[1, 2], [1, 3], [2, 3]],
    }))
    code, out = run(capsys, "classify", "--input", str(path), "--json")
    assert code == 0
    assert out["kind"] == "Affine"


def test_input_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "cartan": [[2, -1], [-3, 2]],
        "symmetrizer": [1, 1],
        "orientation": [[1, 2]],
    }))
    code, _ = run(capsys, "classify", "--input", str(path), "--json")
    assert code == 2


def test_roots(capsys):
    code, out = run(capsys, "roots", "--fixture", "b3tilde", "--depth", "1",
                    "--json")
    assert code == 0
    assert out["null_root"] == [1, 1, 1, 1]
    assert [tb["period"] for tb in out["tubes"]] == [3]
    ranks = {tuple(r["rank"]) for r in out["roots"]}
    assert (0, 1, 1, 0) in ranks


def test_ccvar_label_and_path_agree(capsys):
    code, by_label = run(capsys, "ccvar", "--fixture", "a2tilde",
                         "--label", "preprojective:1,0", "--json")
    assert code == 0
    code, by_path = run(capsys, "ccvar", "--fixture", "a2tilde",
                        "--path", "1", "--json")
    assert code == 0
    match = [v for v in by_path["variables"]
             if v["laurent"] == by_label["cc_function"]]
    assert len(match) == 1
    assert match[0]["g"] == by_label["g"]


def test_verify_small(capsys):
    code, out = run(capsys, "verify", "--fixture", "a1tilde", "--depth", "2",
                    "--json")
    assert code == 0
    assert out["all_equal"] and out["total"] >= 8


def test_decompose_null_root(capsys):
    code, out = run(capsys, "decompose", "--fixture", "b3tilde",
                    "--rank", "1,1,1,1", "--json")
    assert code == 0
    assert out["m"] == 1 and out["parts"] == []


def test_oracle_rank(capsys):
    code, out = run(capsys, "oracle", "--fixture", "b3tilde",
                    "--rank", "0,1,1,0", "--json")
    assert code == 0
    coeffs = {tuple(t["exp"]): int(t["coef"]) for t in out["f_polynomial"]}
    assert coeffs == {(0, 0, 0, 0): 1, (0, 1, 0, 0): 1, (0, 1, 1, 0): 1}


def test_oracle_module_file(capsys, tmp_path):
    code, out = run(capsys, "oracle", "--fixture", "b3tilde",
                    "--rank", "0,1,0,0", "--json")
    assert code == 0


def test_explore(capsys):
    code, out = run(capsys, "explore", "--fixture", "a2tilde", "--depth", "2",
                    "--json")
    assert code == 0
    assert out["variables"] > 3
