import csv
import io
import json
import shutil
import subprocess
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from projanosov.anosov import sample_boundary, write_samples_csv
from projanosov.cli import main
from projanosov.families import schottky_sl2, tau_rep


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def tau3_file(tmp_path, capsys):
    path = tmp_path / "tau3.json"
    assert run(capsys, "families", "--family", "tau", "--d", 3, "--out", path)[0] == 0
    return path


@pytest.fixture
def tau3_mu2_file(tmp_path, capsys):
    # generator a = diag(2, 1/2) upstairs; used for spectra only (mu = 2 at
    # angle pi/4 is not a Schottky configuration)
    path = tmp_path / "tau3_mu2.json"
    assert run(capsys, "families", "--family", "tau", "--mu", 2, "--d", 3, "--out", path)[0] == 0
    return path


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_tau3(capsys, tau3_mu2_file):
    code, out, _ = run(capsys, "spectrum", "--rep", tau3_mu2_file, "--word", "a")
    assert code == 0
    (row,) = rows(out)
    assert [float(row[f"lambda_{i}"]) for i in (1, 2, 3)] == pytest.approx([4, 1, 0.25], rel=1e-12)
    assert row["proximal"] == "true" and row["top_sign"] == "1"


@pytest.mark.parametrize("word", ["", "aA"])
def test_spectrum_identity_words(capsys, tau3_file, word):
    code, out, _ = run(capsys, "spectrum", "--rep", tau3_file, "--word", word)
    assert code == 0
    (row,) = rows(out)
    assert [float(row[f"lambda_{i}"]) for i in (1, 2, 3)] == pytest.approx([1, 1, 1])
    assert row["proximal"] == "false"


def test_spectrum_errors(capsys, tau3_file, tmp_path):
    assert run(capsys, "spectrum", "--rep", tau3_file, "--word", "a1")[0] == 2
    assert run(capsys, "spectrum", "--rep", tau3_file, "--word", "c")[0] == 2
    assert run(capsys, "spectrum", "--rep", tmp_path / "missing.json", "--word", "a")[0] == 2
    assert run(capsys, "spectrum", "--word", "a")[0] == 2


def test_gap_block_double(capsys, tmp_path):
    rep = tmp_path / "ex.json"
    run(capsys, "families", "--family", "block-double", "--out", rep)
    code, out, _ = run(capsys, "gap", "--rep", rep, "--radius", 5, "--workers", 1)
    assert code == 0
    assert json.loads(out)["slope"] == 0.0


def test_gap_writes_points(capsys, tau3_file, tmp_path):
    out = tmp_path / "gap.csv"
    code, text, _ = run(capsys, "gap", "--rep", tau3_file, "--radius", 5, "--workers", 1, "--out", out)
    summary = json.loads(text)
    assert code == 0 and summary["slope"] > 0
    assert len(rows(out.read_text())) == summary["classes"]


def test_gap_budget_exit(capsys, tau3_file):
    assert run(capsys, "gap", "--rep", tau3_file, "--radius", 30)[0] == 4


def test_entropy_check_scaling(capsys):
    code, out, _ = run(capsys, "entropy", "--d", 3, "--check-scaling", "--radius", 8)
    assert code == 0
    assert out.splitlines()[0] == "counts-match: true"


def test_entropy_report(capsys, tau3_file):
    code, out, _ = run(capsys, "entropy", "--rep", tau3_file, "--radius", 6, "--grid", "2:8:7", "--workers", 1)
    assert code == 0
    lines = out.splitlines()
    summary = json.loads(lines[0])
    assert summary["bound"] == 1
    assert len(rows("\n".join(lines[1:]))) == 7


def test_scan_sp_witness(capsys):
    code, out, err = run(capsys, "scan", "--family", "sp", "--sigma", "16,2", "--k", 1)
    assert code == 0
    assert out.splitlines() == ["word,ratio_1,ratio_k", "a,8,4"]
    assert "witnesses: 1" in err


def test_scan_g2_and_fuchsian(capsys, tau3_file):
    code, out, _ = run(capsys, "scan", "--family", "g2", "--t", 2, "--s", 0.5)
    (row,) = rows(out)
    assert float(row["ratio_1"]) == pytest.approx(np.exp(0.5))
    assert float(row["ratio_k"]) == pytest.approx(np.exp(1.5))
    code, out, _ = run(capsys, "scan", "--rep", tau3_file, "--radius", 5, "--workers", 1)
    assert code == 0 and rows(out) == []


def test_scan_proximal(capsys, tau3_file):
    code, out, _ = run(capsys, "scan", "--rep", tau3_file, "--radius", 4, "--proximal")
    assert code == 0 and json.loads(out)["verdict"] == "positively_proximal"


def test_domain_and_render(capsys, tmp_path):
    rep = tmp_path / "tau3.json"
    run(capsys, "families", "--family", "tau", "--d", 3, "--out", rep)
    dom = tmp_path / "dom.json"
    code, out, _ = run(capsys, "domain", "--rep", rep, "--radius", 5, "--workers", 1, "--out", dom)
    assert code == 0
    info = json.loads(out)
    assert info["proper"] and info["samples"] >= 20 and info["drift"] >= 0
    samples = tmp_path / "dom.samples.csv"
    assert samples.exists()
    svg = tmp_path / "pic.svg"
    code, _, _ = run(capsys, "render", "--samples", samples, "--domain", dom, "--out", svg)
    assert code == 0
    root = ET.parse(svg).getroot()
    assert len(list(root.iter("{http://www.w3.org/2000/svg}path"))) == 4
    assert run(capsys, "render", "--samples", samples, "--width", 10)[0] == 2


def test_domain_improper_writes_diagnostic(capsys, tmp_path):
    rep = tmp_path / "red.json"
    run(capsys, "families", "--family", "reducible", "--out", rep)
    out = tmp_path / "red_dom.json"
    code, _, err = run(capsys, "domain", "--rep", rep, "--radius", 5, "--workers", 1, "--out", out)
    assert code == 5
    diag = json.loads((tmp_path / "red_dom.json.diagnostic.json").read_text())
    assert diag["error"] in ("ImproperBody", "LiftInconsistent")
    assert diag["reason"]


def test_even_tau_domain_fails(capsys, tmp_path):
    rep = tmp_path / "tau4.json"
    run(capsys, "families", "--family", "tau", "--d", 4, "--out", rep)
    out = tmp_path / "d4.json"
    assert run(capsys, "domain", "--rep", rep, "--radius", 4, "--workers", 1, "--out", out)[0] == 5


def test_render_needs_slice_in_dimension_four(capsys, tmp_path):
    rep = tau_rep(schottky_sl2(3.0, np.pi / 4), 4)
    samples = tmp_path / "d4.samples.csv"
    write_samples_csv(sample_boundary(rep, 3), samples)
    assert run(capsys, "render", "--samples", samples)[0] == 6
    sl = ",".join(str(x) for x in np.eye(4)[:, [0, 1, 3]].ravel())
    assert run(capsys, "render", "--samples", samples, "--slice", sl, "--out", tmp_path / "s.svg")[0] == 0


def test_verify_g2(capsys):
    assert run(capsys, "verify-g2", "--t", 1, "--s", 0.5)[1].strip() == "true"
    assert run(capsys, "verify-g2", "--t", 1, "--s", 0.5, "--as-printed")[1].strip() == "false"


def test_verify_g2_matrix_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(np.eye(7).tolist()))
    assert run(capsys, "verify-g2", "--matrix", path)[1].strip() == "true"


def test_outputs_are_deterministic(capsys, tau3_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "gap", "--rep", tau3_file, "--radius", 5, "--workers", 1, "--out", a)
    run(capsys, "gap", "--rep", tau3_file, "--radius", 5, "--workers", 2, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_console_script_installed():
    exe = shutil.which("projanosov")
    if exe is None:
        pytest.skip("console script not on PATH")
    res = subprocess.run([exe, "verify-g2"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "true"
