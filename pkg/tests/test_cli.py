import json
import os
import subprocess
import sys

import pytest

from reinhardt.cli import main
from reinhardt.gallery import EXAMPLE1_EXPR

EX1 = json.dumps({"kind": "custom", "expr": EXAMPLE1_EXPR})
BALL = '{"kind": "theorem_i", "alpha": 0.5}'
HYPERBOLA = '{"kind": "custom", "expr": "m1*m2 - 1", "axis1": true, "axis2": true}'
SCALE = '{"A": [[1, 0], [0, 1]], "logscale": [0.6931471805599453, -0.6931471805599453]}'
IDENT = '{"A": [[1, 0], [0, 1]], "logscale": [0, 0]}'

COMMANDS = {
    "classify_iii": (["classify", "--form", "14", "--beta", "2", "--r", "1", "--R", "5"], 0),
    "classify_rejected": (["classify", "--form", "11", "--alpha", "0.3", "--k", "2"], 2),
    "classify_bidisc": (["classify", "--form", "11", "--alpha", "0"], 1),
    "search_ball": (["search-aut", "--domain", BALL, "--samples", "2000"], 0),
    "search_ex1": (["search-aut", "--domain", EX1, "--bound", "1", "--samples", "3000"], 3),
    "probe_line": (["probe-line", "--domain", HYPERBOLA, "--map", SCALE, "--radius", "1"], 4),
    "probe_bounded": (["probe-line", "--domain", BALL, "--map", IDENT], 0),
    "smoothness": (["smoothness", "--alpha", "0.45", "--witness"], 0),
    "smoothness_inf": (["smoothness", "--alpha", "0.25"], 0),
    "example1": (["example", "1", "--verify", "--samples", "2000"], 0),
    "example2": (["example", "2", "--verify", "--profile", "linear", "--samples", "300"], 0),
}


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_exit_codes_and_reports(name, tmp_path, capsys):
    argv, code = COMMANDS[name]
    out = tmp_path / "r.json"
    assert main(argv + ["--out", str(out)]) == code
    report = json.loads(out.read_text())
    assert report["schema_version"] == "1.0"
    assert report["seed"] == 0


@pytest.mark.parametrize("argv", [
    ["search-aut", "--domain", BALL, "--bound", "0"],
    ["probe-line", "--domain", BALL, "--map", IDENT, "--K", "0"],
    ["probe-line", "--domain", BALL, "--map", IDENT, "--radius", "3"],
    ["shadow", "--domain", EX1, "--bounds", "-2", "2", "-2", "2", "--resolution", "1"],
    ["classify", "--descriptor", "{not json"],
    ["classify", "--descriptor", "@/nonexistent/file.json"],
    ["classify", "--form", "12", "--alpha", "1", "--r", "3", "--R", "2"],
    ["search-aut", "--domain", '{"kind": "custom", "expr": "import os"}'],
    ["search-aut", "--domain", '{"kind": "moon"}'],
    ["smoothness", "--alpha", "0"],
    ["smoothness", "--alpha", "0.3", "--witness", "--h-min", "1e-14"],
    ["example", "2", "--profile", "1 - x1; -1; 0"],
    ["nosuchcommand"],
    ["classify", "--seed", "-1", "--form", "14", "--beta", "1", "--r", "1"],
])
def test_input_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_unconfirmed_witness_exit_5(capsys):
    assert main(["smoothness", "--alpha", "0.3", "--witness", "--json"]) == 5
    report = json.loads(capsys.readouterr().out)
    assert report["class"] == "CExactly(1)" and report["witness"]["confirmed"] is False


def test_shadow_csv(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    argv = ["shadow", "--domain", EX1, "--bounds", "-2", "2", "-2", "2", "--resolution", "200"]
    assert main(argv + ["--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "u1,u2,g" and len(lines) == 40001
    assert main(argv) == 0
    assert capsys.readouterr().out == out.read_text()


def test_unwritable_output_leaves_nothing(tmp_path, capsys):
    target = tmp_path / "missing_dir" / "grid.csv"
    argv = ["shadow", "--domain", BALL, "--bounds", "-1", "0", "-1", "0", "--out", str(target)]
    assert main(argv) == 1
    assert not target.exists() and not target.parent.exists()


def test_failed_run_does_not_clobber(tmp_path, capsys):
    out = tmp_path / "r.json"
    out.write_text("previous")
    assert main(["classify", "--descriptor", "{bad", "--out", str(out)]) == 1
    assert out.read_text() == "previous"
    assert os.listdir(tmp_path) == ["r.json"]


def test_global_flags_after_subcommand(capsys):
    assert main(["--json", "classify", "--form", "14", "--beta", "2", "--r", "1", "--R", "5"]) == 0
    a = json.loads(capsys.readouterr().out)
    assert a["case"]["label"] == "CaseIII(2.0, 5.0)"
    assert main(["classify", "--form", "14", "--beta", "2", "--r", "1", "--R", "5", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == a


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_deterministic_reports(name, tmp_path, capsys):
    argv, _ = COMMANDS[name]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(argv + ["--seed", "7", "--out", str(a)])
    main(argv + ["--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "reinhardt", "smoothness", "--alpha", "0.1",
                          "--json"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["class"] == "CInfinity"
