import csv
import json

import pytest

from ncdirac import cli, specfun
from ncdirac.config import parse_config
from ncdirac.errors import ConvergenceFailure

FAST = "[oracle]\nn_points = 1500\n"


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def header(path):
    with open(path) as fh:
        return fh.readline().strip().split(",")


def test_solve_table(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["solve", "--config", write(tmp_path, FAST), "--out", str(out)]) == 0
    assert header(out / "spectrum.csv") == cli.SOLVE_HEADER
    table = rows(out / "spectrum.csv")
    assert [(r["n"], r["l"]) for r in table] == [("0", "0"), ("1", "0"), ("0", "1")]
    for r in table[:2]:
        assert r["status_nu"] == r["status_oracle"] == "ok"
        assert float(r["abs_diff_nu_oracle"]) < 1e-4
        assert abs(float(r["norm_quad"]) - 1) < 1e-8
    # 17 significant digits
    assert len(table[0]["E_nu"].lstrip("-0.").replace(".", "")) >= 15


def test_solve_without_well_reports_status(tmp_path):
    out = tmp_path / "o"
    cfg = write(tmp_path, FAST + "[potential]\nV0 = 0\n")
    assert cli.main(["solve", "--config", cfg, "--out", str(out)]) == 0
    for r in rows(out / "spectrum.csv"):
        assert r["status_nu"] == "NoRoot"
        assert r["status_oracle"] == "NoBoundState"
        assert r["E_nu"] == ""
    assert cli.main(["correct", "--config", cfg, "--out", str(out)]) == 3


def test_sidecar_echoes_config(tmp_path):
    out = tmp_path / "o"
    cli.main(["correct", "--config", write(tmp_path, FAST + "[nc]\ntheta = 2e-3\n"),
              "--out", str(out)])
    meta = json.loads((out / "corrections.meta.json").read_text())
    assert meta["seed"] == 0
    assert meta["outputs"] == ["corrections.csv"]
    cfg = parse_config(meta["config_ini"])
    assert cfg.theta == 2e-3
    assert cfg.oracle.n_points == 1500
    assert "time" not in json.dumps(meta).lower()


def test_correct_zero_couplings(tmp_path):
    out = tmp_path / "o"
    cfg = write(tmp_path, "[nc]\ntheta = 0\n[field]\nq_source = 0\n")
    assert cli.main(["correct", "--config", cfg, "--out", str(out)]) == 0
    for r in rows(out / "corrections.csv"):
        for col in ("dE_theta_quad", "dE_field_quad", "dE_closed_re", "dE_closed_im"):
            assert float(r[col]) == 0.0
        assert float(r["E_split"]) == float(r["E0"])


def test_correct_theta_column_is_antisymmetric(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["correct", "--out", str(out)]) == 0
    assert header(out / "corrections.csv") == cli.CORRECT_HEADER
    by_m = {int(r["m_l"]): r for r in rows(out / "corrections.csv") if r["l"] == "1"}
    assert float(by_m[1]["dE_theta_quad"]) == -float(by_m[-1]["dE_theta_quad"]) != 0
    assert float(by_m[0]["dE_theta_quad"]) == 0
    l0 = [r for r in rows(out / "corrections.csv") if r["l"] == "0"]
    assert all("PoleError" in r["closed_error"] for r in l0)


def test_byte_identical_reruns(tmp_path):
    cfg = write(tmp_path, FAST)
    for cmd, name in (("solve", "spectrum.csv"), ("correct", "corrections.csv")):
        a, b = tmp_path / f"{cmd}_a", tmp_path / f"{cmd}_b"
        cli.main([cmd, "--config", cfg, "--out", str(a)])
        cli.main([cmd, "--config", cfg, "--out", str(b)])
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_scan_theta_is_proportional(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["scan", "--out", str(out), "--axis", "theta",
                     "--values", "0,1e-4,2e-4,4e-4"]) == 0
    assert header(out / "scan.csv") == cli.SCAN_HEADER
    table = [r for r in rows(out / "scan.csv") if (r["l"], r["m_l"]) == ("1", "1")]
    base = float(table[1]["dE_theta"])
    for r, k in zip(table, (0, 1, 2, 4)):
        assert float(r["dE_theta"]) == pytest.approx(k * base, rel=1e-12, abs=0)
    meta = json.loads((out / "scan.meta.json").read_text())
    assert all(c["passed"] for c in meta["checks"])


def test_scan_q_is_affine(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["scan", "--out", str(out), "--axis", "q", "--start", "0",
                     "--stop", "0.03", "--steps", "4"]) == 0


def test_scan_v0_is_monotone(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["scan", "--out", str(out), "--axis", "V0",
                     "--values", "1.0,1.1,1.2,1.3"]) == 0
    ground = [float(r["E0"]) for r in rows(out / "scan.csv") if (r["n"], r["l"]) == ("0", "0")]
    assert all(a > b for a, b in zip(ground, ground[1:]))


@pytest.mark.parametrize("args", [
    ["--axis", "theta", "--values", ""],
    ["--axis", "theta", "--start", "0", "--stop", "1", "--steps", "0"],
    ["--axis", "mass", "--values", "1"],
    ["--axis", "theta"],
    ["--axis", "alpha", "--values", "-1"],
])
def test_scan_bad_input_exits_2(tmp_path, args):
    assert cli.main(["scan", "--out", str(tmp_path)] + args) == 2


def test_config_error_exit_code(tmp_path):
    assert cli.main(["solve", "--config", write(tmp_path, "[potential]\nV00 = 1\n"),
                     "--out", str(tmp_path)]) == 2
    assert cli.main(["solve", "--config", str(tmp_path / "missing.ini"),
                     "--out", str(tmp_path)]) == 2


def test_solver_failure_exit_code(tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise ConvergenceFailure("forced")

    monkeypatch.setattr(cli, "richardson_energy", boom)
    assert cli.main(["solve", "--config", write(tmp_path, FAST), "--out", str(tmp_path)]) == 3


def test_validate_default_config(tmp_path, capsys):
    out = tmp_path / "o"
    assert cli.main(["validate", "--out", str(out)]) == 0
    report = json.loads((out / "validation.json").read_text())
    assert report["passed"] and report["counts"]["fail"] == 0
    for section in ("pekeris_error", "paper_condition_scan", "squared_3f2_discrepancy",
                    "closed_vs_quadrature"):
        assert section in report["diagnostics"]
    assert "fail" not in capsys.readouterr().out


def test_validate_detects_tampered_gamma(tmp_path, monkeypatch):
    bad = list(specfun.LANCZOS_COEFFS)
    bad[2] *= 1.0 + 1e-6
    monkeypatch.setattr(specfun, "LANCZOS_COEFFS", tuple(bad))
    out = tmp_path / "o"
    assert cli.main(["validate", "--config", write(tmp_path, FAST), "--out", str(out)]) == 1
    report = json.loads((out / "validation.json").read_text())
    status = {c["name"]: c["status"] for c in report["checks"]}
    assert status["gamma_recurrence"] == "fail"


def test_no_seedless_records_seed(tmp_path):
    out = tmp_path / "o"
    cli.main(["correct", "--no-seedless", "--out", str(out)])
    meta = json.loads((out / "corrections.meta.json").read_text())
    assert isinstance(meta["seed"], int)
