import json
import subprocess
import sys
from pathlib import Path

import pytest

from cayley_contours.cli import main

DATA = Path(__file__).parent / "data"

POTTS2 = {"k": 2, "q": 2, "lambda": [[-1, 0], [0, -1]], "h": [0, 0]}
POTTS3 = {"k": 2, "q": 3, "lambda": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]], "h": [0, 0, 0]}


def _write(tmp_path, cfg, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg, indent=1))
    return path


def _run(tmp_path, cfg, *extra):
    path = _write(tmp_path, cfg)
    out = tmp_path / "report.out"
    code = main(["--config", str(path), "--out", str(out), *extra])
    return code, (out.read_text() if out.exists() else "")


@pytest.mark.parametrize(
    "command, params",
    [
        ("tree-info", {"n": 3}),
        ("lemma4", {"max_edges": 6}),
        ("lemma5", {"r_max": 5}),
        ("eq6", {"n": 1}),
        ("ground-states", {"n": 2, "max_perturbation": 2}),
        ("periodic", {"n": 2}),
        ("hamiltonian-equiv", {"n": 1}),
        ("partition", {"n": 1, "beta": [0, 1, 2]}),
        ("marginal", {"n": 8, "beta": [0.5, 2], "boundaries": [1, 2]}),
        ("chi-check", {"n": 1}),
    ],
)
def test_commands_pass(tmp_path, command, params):
    code, text = _run(tmp_path, {"model": POTTS2, "command": command, "params": params})
    assert code == 0
    report = json.loads(text)
    assert report["status"] == 0 and report["command"] == command
    assert report["checks"] and all(c["passed"] for c in report["checks"])


def test_peierls_command(tmp_path):
    code, text = _run(tmp_path, {"model": POTTS2, "command": "peierls", "params": {"n": 2, "beta": [0.5, 1, 2]}})
    assert code == 0
    report = json.loads(text)
    assert len(report["max_ratio"]) == 3 and max(report["max_ratio"]) <= 1


def test_boundary_command_k3(tmp_path):
    model = {"k": 3, "q": 2, "lambda": [[-1, 0], [0, -1]], "h": [0, 0]}
    code, text = _run(tmp_path, {"model": model, "command": "lemma3", "params": {"max_vertices": 8}})
    report = json.loads(text)
    assert code == 0
    assert report["message"].startswith(f"{report['subgraphs']} of {report['subgraphs']} subgraphs satisfy")


def test_positional_command_overrides_config(tmp_path):
    path = _write(tmp_path, {"model": POTTS2, "command": "peierls", "params": {"n": 1}})
    out = tmp_path / "r.json"
    assert main(["tree-info", "--config", str(path), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["command"] == "tree-info"


def test_failed_check_exits_one(tmp_path, capsys):
    anti = {"k": 2, "q": 2, "lambda": [[0, -1], [-1, 0]], "h": [0, 0]}
    code, text = _run(tmp_path, {"model": anti, "command": "ground-states", "params": {"n": 2, "max_perturbation": 1}})
    assert code == 1
    report = json.loads(text)
    assert report["status"] == 1 and not report["checks"][0]["passed"]
    assert "FAIL constant-ground-states" in capsys.readouterr().err


def test_asymmetric_lambda_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "model": {"k": 2, "q": 2,\n    "lambda": [[-1, 0.5], [0, -1]], "h": [0, 0]},\n  "command": "tree-info"\n}\n')
    assert main(["--config", str(path)]) == 2
    err = capsys.readouterr().err
    assert f"{path}:3:" in err
    assert "lambda[1][2] = 0.5" in err and "lambda[2][1] = 0.0" in err


@pytest.mark.parametrize(
    "text, line",
    [
        ('{"model": {"k": 2, "q": 2,\n "lambda": [[-1, 0], [0, -1]]},\n "command": "nope"}', 3),
        ('{"model": {"k": 2, "q": 2, "lambda": [[-1, 0], [0, -1]]},\n "params": {\n "beta": -1}}', 3),
        ('{"model": {"k": 2,\n "q": 2, "lambda": [[-1, 0]]}}', 2),
        ('{"model": {"k": 2, "q": 2}\n,,}', 2),
    ],
)
def test_config_errors_are_line_anchored(tmp_path, capsys, text, line):
    path = tmp_path / "bad.json"
    path.write_text(text)
    args = ["--config", str(path)] + ([] if '"command"' in text else ["tree-info"])
    assert main(args) == 2
    assert f"{path}:{line}:" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["--config", str(tmp_path / "absent.json")]) == 2


def test_budget_exits_three(tmp_path, capsys):
    code, _ = _run(tmp_path, {"model": POTTS3, "command": "partition", "params": {"n": 4}})
    assert code == 3
    assert "budget" in capsys.readouterr().err


def test_json_output_is_deterministic(tmp_path):
    cfg = {"model": POTTS3, "command": "peierls", "params": {"n": 1, "beta": [1, 2]}}
    _, first = _run(tmp_path, cfg, "--workers", "2")
    _, second = _run(tmp_path, cfg, "--workers", "2")
    assert first == second
    _, serial = _run(tmp_path, cfg)
    assert serial == first


def test_csv_output(tmp_path):
    code, text = _run(
        tmp_path, {"model": POTTS2, "command": "marginal", "params": {"n": 5, "beta": [1, 2], "boundaries": [1, 2]}}, "--format", "csv"
    )
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "beta,log_partition,p1,p2"
    assert len(lines) == 5
    # 17 significant digits round-trip the doubles
    assert all(len(v.replace(".", "").replace("-", "").lstrip("0")) <= 17 for v in lines[1].split(","))


def test_contours_text_dump(tmp_path):
    cfg = {
        "model": POTTS3,
        "command": "contours",
        "params": {"n": 2, "boundary": 1, "configuration": [2, 3, 1, 1, 1, 1, 1, 1, 2, 1]},
    }
    code, text = _run(tmp_path, cfg, "--format", "text")
    assert code == 0
    assert text == (DATA / "contours_k2_n2.txt").read_text()


def test_module_entry_point(tmp_path):
    path = _write(tmp_path, {"model": POTTS2, "command": "tree-info", "params": {"n": 1}})
    proc = subprocess.run(
        [sys.executable, "-m", "cayley_contours", "--config", str(path), "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["PASS sphere-sizes", "PASS ball-size"]
