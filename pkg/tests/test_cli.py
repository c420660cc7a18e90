"""CLI contract: documented invocations, exit codes, report schema."""

import json
import subprocess
import sys
from importlib import resources

import jsonschema
import numpy as np
import pytest


def run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "qgv", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="module")
def schema():
    with resources.files("qgv").joinpath("report_schema.json").open() as fh:
        return json.load(fh)


class TestDocumentedInvocations:
    def test_umbilic_angles_palmer(self, tmp_path, schema):
        """umbilic alpha=pi/4 n=3: all angle/palmer checks pass below 1e-6."""
        res = run_cli(["--example", "umbilic", "--alpha", "0.7853981633974483",
                       "--n", "3", "--suites", "angles,palmer"], tmp_path)
        assert res.returncode == 0, res.stderr
        report = json.loads((tmp_path / "report.json").read_text())
        jsonschema.validate(report, schema)
        assert report["summary"]["failed"] == 0
        assert max(report["summary"]["max_residual"].values()) <= 1e-6

    def test_product_curvature(self, tmp_path, schema):
        """product alpha=pi/3 k=1 n=2: sectional curvature 0 within 1e-5."""
        res = run_cli(["--example", "product", "--alpha", "1.0471975511965976",
                       "--k", "1", "--n", "2", "--suites", "curvature"], tmp_path)
        assert res.returncode == 0, res.stderr
        report = json.loads((tmp_path / "report.json").read_text())
        jsonschema.validate(report, schema)
        sect = [r for r in report["checks"] if r["check"] == "sectional_constant"]
        assert sect and all(r["pass"] and r["residual"] <= 1e-5 for r in sect)

    def test_missing_dimension_is_config_error(self, tmp_path):
        """No n: configuration error, exit 2, and no report file."""
        res = run_cli(["--example", "umbilic", "--alpha", "0.785"], tmp_path)
        assert res.returncode == 2
        assert "missing dimension n" in res.stderr
        assert not (tmp_path / "report.json").exists()


class TestListChecks:
    def test_default_listing_includes_theta_lambda(self, tmp_path):
        res = run_cli(["--list-checks"], tmp_path)
        assert res.returncode == 0
        assert "theta_lambda [angles]: λⱼ = cot θⱼ" in res.stdout

    def test_filtered_by_suite(self, tmp_path):
        res = run_cli(["--list-checks", "--suites", "palmer"], tmp_path)
        assert res.returncode == 0
        lines = [ln for ln in res.stdout.splitlines() if ln.strip()]
        assert lines == [
            "palmer [palmer]: g(JH,·) = (1/n)·d(Σ arctan λⱼ)",
            "palmer_minimal [palmer]: JH = 0 and d(Σ arctan λⱼ) = 0",
        ]

    def test_unknown_suite_rejected(self, tmp_path):
        res = run_cli(["--list-checks", "--suites", "nonsense"], tmp_path)
        assert res.returncode == 2
        assert "unknown suite" in res.stderr


class TestRunnerBehavior:
    def test_unknown_suite_in_run(self, tmp_path):
        res = run_cli(["--example", "umbilic", "--alpha", "0.7", "--n", "2",
                       "--suites", "bogus"], tmp_path)
        assert res.returncode == 2
        assert not (tmp_path / "report.json").exists()

    def test_unknown_example(self, tmp_path):
        res = run_cli(["--example", "torus", "--n", "2"], tmp_path)
        assert res.returncode == 2

    def test_deterministic_reports(self, tmp_path):
        args = ["--example", "rotation_sig_plus_minus", "--n", "2", "--grid", "3",
                "--suites", "basic", "--seed", "5"]
        out = []
        for name in ("a.json", "b.json"):
            res = run_cli([*args, "--report", name], tmp_path)
            assert res.returncode == 0, res.stderr
            data = json.loads((tmp_path / name).read_text())
            data["summary"].pop("wall_time_s")
            out.append(data)
        assert out[0] == out[1]

    def test_jobs_match_serial(self, tmp_path):
        args = ["--example", "product", "--alpha", "1.0", "--k", "1", "--n", "2",
                "--grid", "3", "--suites", "angles"]
        reports = []
        for name, jobs in (("s.json", "1"), ("p.json", "4")):
            res = run_cli([*args, "--jobs", jobs, "--report", name], tmp_path)
            assert res.returncode == 0, res.stderr
            data = json.loads((tmp_path / name).read_text())
            data["summary"].pop("wall_time_s")
            data["config"].pop("jobs", None)
            reports.append(data)
        assert reports[0] == reports[1]

    def test_csv_format(self, tmp_path):
        res = run_cli(["--example", "umbilic", "--alpha", "0.8", "--n", "2",
                       "--grid", "3", "--suites", "basic",
                       "--report", "out.csv", "--format", "csv"], tmp_path)
        assert res.returncode == 0, res.stderr
        lines = (tmp_path / "out.csv").read_text().splitlines()
        assert lines[0].startswith("check,suite,identity,point,residual,tolerance,pass")
        assert len(lines) > 9 * 5

    def test_tolerance_override_can_fail_a_run(self, tmp_path):
        """An absurd tolerance turns a passing suite into a failing one."""
        res = run_cli(["--example", "umbilic", "--alpha", "0.8", "--n", "2",
                       "--grid", "3", "--suites", "basic", "--tol", "basic=1e-18"],
                      tmp_path)
        assert res.returncode == 1
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["summary"]["failed"] > 0

    def test_box_flag(self, tmp_path):
        res = run_cli(["--example", "umbilic", "--alpha", "0.8", "--n", "2",
                       "--grid", "3", "--suites", "basic",
                       "--box", "0.5,0.9", "--box", "0.6,1.0"], tmp_path)
        assert res.returncode == 0, res.stderr
        report = json.loads((tmp_path / "report.json").read_text())
        pts = np.array([r["point"] for r in report["checks"]])
        assert pts[:, 0].min() >= 0.5 and pts[:, 0].max() <= 0.9
        assert pts[:, 1].min() >= 0.6 and pts[:, 1].max() <= 1.0

    def test_dump_fields(self, tmp_path):
        res = run_cli(["--example", "rotation_sig_minus_null", "--n", "2",
                       "--grid", "3", "--suites", "basic",
                       "--dump-fields", "fields.csv"], tmp_path)
        assert res.returncode == 0, res.stderr
        lines = (tmp_path / "fields.csv").read_text().splitlines()
        assert lines[0] == "u0,u1,lambda1,lambda2,theta1,theta2"
        assert len(lines) == 1 + 9


class TestExternalCharts:
    def test_expression_chart_passes(self, tmp_path, schema):
        """The umbilic embedding written as expressions verifies cleanly."""
        c = f"{1 / np.sqrt(2):.17g}"
        cfg = {
            "chart": {
                "params": ["u", "v"],
                "coords": [c, f"{c}*cosh(u)",
                           f"{c}*sinh(u)*cos(v)", f"{c}*sinh(u)*sin(v)"],
                "box": [[0.4, 1.2], [0.4, 1.2]],
            },
            "grid": 3,
            "suites": ["basic", "angles", "palmer"],
        }
        (tmp_path / "run.json").write_text(json.dumps(cfg))
        res = run_cli(["--config", "run.json"], tmp_path)
        assert res.returncode == 0, res.stderr
        report = json.loads((tmp_path / "report.json").read_text())
        jsonschema.validate(report, schema)
        assert report["summary"]["failed"] == 0
        # no closed-form oracles for external charts
        assert all(r["check"] != "golden_lambda" for r in report["checks"])

    def test_timelike_chart_recorded_as_failures(self, tmp_path):
        """Geometric errors become failed check records, not crashes."""
        cfg = {
            "chart": {
                "params": ["u", "v"],
                "coords": ["cos(u)*cosh(v)", "sin(u)*cosh(v)", "sinh(v)", "0"],
                "box": [[0.2, 0.8], [0.2, 0.8]],
            },
            "grid": 3,
            "suites": ["basic"],
        }
        (tmp_path / "run.json").write_text(json.dumps(cfg))
        res = run_cli(["--config", "run.json"], tmp_path)
        assert res.returncode == 1, res.stderr
        report = json.loads((tmp_path / "report.json").read_text())
        noted = [r for r in report["checks"] if "SignatureError" in r.get("note", "")]
        assert noted and all(r["residual"] is None and not r["pass"] for r in noted)

    def test_bad_expression_is_config_error(self, tmp_path):
        cfg = {"chart": {"params": ["u"], "coords": ["frob(u)", "u", "u"],
                         "box": [[0.1, 0.9]]}}
        (tmp_path / "run.json").write_text(json.dumps(cfg))
        res = run_cli(["--config", "run.json"], tmp_path)
        assert res.returncode == 2

    def test_unknown_config_key_rejected(self, tmp_path):
        (tmp_path / "run.json").write_text(json.dumps({"exampel": "umbilic"}))
        res = run_cli(["--config", "run.json"], tmp_path)
        assert res.returncode == 2
