import json
import math
import subprocess
import sys

import pytest

from sphere_dubins.cli import main
from sphere_dubins.experiments import read_csv
from sphere_dubins.model import PathSpec

REVERSAL = ["1", "0", "0", "0", "-1", "0", "0", "0", "-1"]


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_plan_json(capsys, tmp_path):
    csv_path = tmp_path / "path.csv"
    code, out, _ = run(capsys, "plan", "--r", "0.4", "--goal-axis", "0,0,1", "--goal-angle", "1.0",
                       "--emit-path", str(csv_path))
    assert code == 0
    data = json.loads(out)
    assert data["best"]["family"] == "G"
    assert data["best"]["length"] == pytest.approx(1.0)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "s,x,y,z" and len(lines) == 102


def test_plan_goal_matrix_and_out_file(capsys, tmp_path):
    out_file = tmp_path / "plan.json"
    code, out, _ = run(capsys, "plan", "--r", "0.5", "--goal", *REVERSAL, "--out", str(out_file))
    assert code == 0 and out == ""
    assert len(json.loads(out_file.read_text())["best"]["family"]) <= 3


def test_no_path_exit_code(capsys):
    code, _, err = run(capsys, "classify", "--r", "0.95", "--goal", *REVERSAL)
    assert code == 2
    assert "no path" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--r", "0.4", "--goal-axis", "0", "0", "1", "--goal-angle", "1.0")
    assert code == 0 and out.strip() == "G"


@pytest.mark.parametrize(
    "args",
    [
        ["bogus"],
        ["plan", "--r", "0.4"],
        ["plan", "--r", "0.4", "--goal", "1", "2"],
        ["plan", "--r", "abc", "--goal-axis", "0,0,1", "--goal-angle", "1"],
        ["identities", "--r", "0.5"],
        ["plan", "--r", "0.4", "--goal", "1", "0", "0", "0", "1", "0", "0", "0", "2"],
        ["plan", "--r", "1.4", "--goal-axis", "0,0,1", "--goal-angle", "1"],
    ],
)
def test_argument_errors_exit_1(capsys, args):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(args))
    assert exc.value.code == 1


def test_identities_table(capsys):
    code, out, _ = run(capsys, "identities", "--r", "0.5", "--phi-deg", "90")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "name,closed,numeric,abs_diff"
    row = next(line for line in lines if line.startswith("A000RL,"))
    assert row.split(",")[1] == "-0.75"


def test_identities_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "identities", "--r", "0.3", "--phi", "1.0")
    assert code == 0
    assert max(item["abs_diff"] for item in json.loads(out)) < 1e-11


def test_perturb(capsys):
    code, out, _ = run(capsys, "perturb", "--r", "0.5", "--phi", str(math.pi / 2))
    data = json.loads(out)
    assert code == 0
    assert data["fitted"]["a1"] == pytest.approx(data["closed"]["a1"], abs=1e-6)
    assert data["fitted"]["bsum"] == pytest.approx(-1.5, abs=1e-4)


def test_sweep_csv(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--r-start", "0.3", "--r-end", "0.3", "--phi-start", "30",
                     "--phi-end", "150", "--phi-step", "60", "--out", str(out_file))
    assert code == 0
    rows = read_csv(out_file)
    assert [r.phi_deg for r in rows] == [30.0, 90.0, 150.0]


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--format", "json", "--r-start", "0.3", "--r-end", "0.3",
                       "--phi-start", "30", "--phi-end", "30")
    assert code == 0
    assert json.loads(out)[0]["best_family"] != "LRL"


def test_existence(capsys):
    code, out, _ = run(capsys, "existence", "--r-grid", "0.7", "0.75", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert [(r["class"], r["exists"]) for r in rows] == [("CGC", True), ("CCC", True), ("CGC", False), ("CCC", True)]


def test_certify_and_sample(capsys, tmp_path):
    path_file = tmp_path / "p.json"
    path_file.write_text(PathSpec(0.4, (("G", 0.5), ("L", 1.0), ("G", 0.5))).to_json())
    code, out, _ = run(capsys, "certify", "--path-json", str(path_file))
    assert code == 0
    assert json.loads(out)["pass"] is False
    code, out, _ = run(capsys, "certify", "--r", "0.4", "--word", "LRL", "--angles", "0.7,4,0.7")
    assert json.loads(out)["pass"] is True
    code, out, _ = run(capsys, "sample", "--r", "0.4", "--word", "G", "--angles", "0.05", "--ds", "0.02")
    assert out.splitlines() == ["s,x,y,z", "0,1,0,0", "0.02,0.999800006667,0.0199986666933,0",
                                "0.04,0.999200106661,0.0399893341866,0", "0.05,0.998750260395,0.0499791692707,0"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sphere_dubins", "classify", "--r", "0.4", "--goal-axis",
                           "0,0,1", "--goal-angle", "0.5"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "G"
