import json
import shutil
import subprocess
import sys

import pytest

from ffcircle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count(capsys, tmp_path):
    code, out, _ = run(capsys, "count", "--f", "t", "--outdir", str(tmp_path))
    assert code == 0
    assert "brute_force: 16" in out and "match: true" in out.lower()
    data = json.loads((tmp_path / "ffcircle-count.manifest.json").read_text())
    assert data["config"]["f"] == "t" and data["results"]["ok"] and data["revision"]


def test_kloosterman(capsys, tmp_path):
    code, out, _ = run(capsys, "kloosterman", "finite", "--r", "t", "--outdir", str(tmp_path))
    assert code == 0 and "Kl_r(m,n): -1" in out
    code, out, _ = run(capsys, "kloosterman", "infinite", "--num", "1", "--den", "t^2", "--outdir", str(tmp_path))
    assert code == 0 and "-1/3" in out


def test_graph_build_then_distance(capsys, tmp_path):
    edges = str(tmp_path / "g.edges")
    code, _, _ = run(capsys, "graph", "build", "--q", "3", "--g", "t^2+t+2", "--graph", edges, "--outdir", str(tmp_path))
    assert code == 0
    code, out, _ = run(capsys, "graph", "distance", "--graph", edges, "--from", "I", "--to", "W", "--outdir", str(tmp_path))
    assert code == 0 and "distance: 8" in out
    code, out, _ = run(capsys, "graph", "spectrum", "--graph", edges, "--outdir", str(tmp_path))
    assert code == 0 and "ramanujan: true" in out.lower()


def test_tls_sum(capsys, tmp_path):
    code, out, _ = run(capsys, "tls", "sum", "--g", "t", "--T", "2", "--window", "--outdir", str(tmp_path))
    assert code == 0
    assert "value: 19" in out and "n_terms: 6" in out and "window_identity: true" in out


def test_tls_sweep_csv(capsys, tmp_path):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"q": 3, "g": ["t"], "T_max": 2}))
    csv_path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "tls", "sweep", "--config", str(cfg), "--csv", str(csv_path), "--outdir", str(tmp_path))
    assert code == 0 and "records: 6" in out
    assert csv_path.read_text().splitlines()[0].startswith("q,g,delta")
    assert (tmp_path / "s.manifest.json").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--f", "t^^2"],
        ["count", "--f", "t", "--lambda", "1,2"],
        ["tls", "sum", "--a", "1"],
        ["tls", "sum", "--g", "t", "--delta", "t"],
        ["selftest", "--only", "9"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_2(capsys, tmp_path, argv):
    code, _, err = run(capsys, *argv, *(["--outdir", str(tmp_path)] if argv[0] != "nonsense" else []))
    assert code == 2
    assert err


def test_parse_error_reports_column(capsys, tmp_path):
    code, _, err = run(capsys, "count", "--f", "t+x", "--outdir", str(tmp_path))
    assert code == 2 and "column" in err


def test_budget_exceeded_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, "count", "--f", "t^8+1", "--budget", "10", "--outdir", str(tmp_path))
    assert code == 1 and "budget" in err
    assert json.loads((tmp_path / "ffcircle-count.manifest.json").read_text())["results"]["error"]


@pytest.mark.skipif(shutil.which("ffcircle") is None, reason="console script not installed")
def test_console_script(tmp_path):
    out = subprocess.run(["ffcircle", "selftest", "--only", "5", "--outdir", str(tmp_path)],
                         capture_output=True, text=True, timeout=300)
    assert out.returncode == 0, out.stderr
    assert "[PASS] criterion 5" in out.stdout


def test_module_entry(tmp_path):
    out = subprocess.run([sys.executable, "-m", "ffcircle.cli", "count", "--f", "t^2", "--outdir", str(tmp_path)],
                         capture_output=True, text=True, timeout=300)
    assert out.returncode == 0 and "brute_force: 52" in out.stdout
