import math

import pandas as pd
import pytest
from numpy.testing import assert_allclose

from conftest import PI2
from unit_field_lab import __version__, cli
from unit_field_lab.models import CheckStatus, VerificationReport
from unit_field_lab.suite import read_json
from unit_field_lab.suite.export import CSV_COLUMNS

FAST = ["--nodes", "8,8,48"]


def _fields(line):
    return line.rstrip("\n").split("\t")


class TestFunctionalCommands:
    def test_volume(self, capsys):
        assert cli.main(["volume", "--domain", "sphere", "--nodes", "8,8,32"]) == 0
        name, field, domain, t, value = _fields(capsys.readouterr().out)
        assert (name, field, domain, t) == ("volume", "hopf(k=1)", "sphere", "")
        assert_allclose(float(value), 4.0 * PI2, rtol=1e-12)

    def test_energy_on_s5_reports_stderr(self, capsys):
        assert cli.main(["energy", "--k", "2", "--domain", "sphere", "--mc-samples", "500", "--seed", "1"]) == 0
        parts = _fields(capsys.readouterr().out)
        assert parts[2] == "sphere"
        assert_allclose(float(parts[4]), 4.5 * math.pi**3, rtol=1e-10)
        assert parts[5].startswith("± ")

    def test_pushforward_one_line_per_t(self, capsys):
        assert cli.main(["pushforward", "--t", "0.1,0.5", *FAST]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [_fields(line)[3] for line in lines] == ["0.1", "0.5"]
        assert_allclose(float(_fields(lines[1])[4]), PI2 * 1.25**1.5, rtol=1e-12)

    def test_pvp(self, capsys):
        assert cli.main(["pvp", "--field", "lambda:2", "--domain", "complement", "--t", "0.1", *FAST]) == 0
        name, field, domain, t, ratio = _fields(capsys.readouterr().out)
        assert (name, field, t) == ("pvp_ratio", "lambda(2)", "0.1")
        assert float(ratio) > 0.0

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        path = tmp_path / "run.cfg"
        path.write_text("field = lambda:2\nnodes = [8, 8, 48]\ndomain = complement\n")
        assert cli.main(["flux", "--config", str(path), "--domain", "solid_torus:0.5"]) == 0
        name, field, domain, _, value = _fields(capsys.readouterr().out)
        assert (name, field, domain) == ("flux", "lambda(2)", "solid_torus(0.5)")
        assert abs(float(value)) <= 1e-10

    def test_functional_csv(self, tmp_path):
        out = tmp_path / "volume.csv"
        assert cli.main(["volume", *FAST, "--out-csv", str(out)]) == 0
        frame = pd.read_csv(out)
        assert list(frame.columns) == cli.FUNCTIONAL_COLUMNS
        assert_allclose(frame.loc[0, "value"], 2.0 * PI2, rtol=1e-12)


class TestVerify:
    ARGS = ["verify", "--suite", "1.4,dichotomy", "--t", "0.1", *FAST]

    def test_reports(self, tmp_path, capsys):
        out_json, out_csv = tmp_path / "run.json", tmp_path / "run.csv"
        assert cli.main([*self.ARGS, "--out-json", str(out_json), "--out-csv", str(out_csv)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [_fields(line)[0] for line in lines] == ["1.4", "divergence", "dichotomy"]
        assert all(_fields(line)[-1] == "passed" for line in lines)

        run = read_json(out_json)
        assert run.schema_version == "1.0"
        assert run.config["command"] == "verify"
        assert run.config["suite"] == ["1.4", "dichotomy"]
        assert [r.check_id for r in run.reports] == ["1.4", "divergence", "dichotomy"]

        frame = pd.read_csv(out_csv, dtype={"t": str})
        assert list(frame.columns) == CSV_COLUMNS
        assert frame["pass"].tolist() == [True, True, True]
        assert frame.loc[0, "t"] == "0.1"

    def test_csv_is_reproducible(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main([*self.ARGS, "--out-csv", str(first)]) == 0
        assert cli.main([*self.ARGS, "--out-csv", str(second), "--n-jobs", "2"]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_red_flag_exit_status(self, monkeypatch, capsys):
        failed = VerificationReport(check_id="1.3", field_label="hopf(k=1)", domain_label="K", status=CheckStatus.FAILED)
        monkeypatch.setattr(cli, "run_suite", lambda *args, **kwargs: [failed])
        assert cli.main(["verify", *FAST]) == 1
        assert capsys.readouterr().out.strip().endswith("failed")

    def test_hypotheses_not_met_exits_zero(self, tmp_path):
        field_file = tmp_path / "tilted.field"
        field_file.write_text("-x2 + 0.5*x1\nx1 + 0.5*x2\n-x4 - 0.5*x3\nx3 - 0.5*x4\n")
        assert cli.main(["verify", "--suite", "1.4", "--t", "0.1", "--field", f"custom:{field_file}", *FAST]) == 0


class TestSweep:
    def test_lambda_grid(self, tmp_path):
        out = tmp_path / "sweep.csv"
        args = ["sweep", "--field", "lambda", "--lambda", "1,2", "--t", "0.1", *FAST, "--out-csv", str(out)]
        assert cli.main(args) == 0
        frame = pd.read_csv(out)
        assert list(frame.columns) == cli.SWEEP_COLUMNS
        assert len(frame) == 4
        assert frame["side"].tolist() == ["K", "K^c", "K", "K^c"]
        hopf_rows = frame[frame["lambda"] == 1.0]
        assert_allclose(hopf_rows["pvp_ratio"], 1.0, rtol=1e-12)
        assert frame["diffeomorphic"].all()

    def test_stdout(self, capsys):
        assert cli.main(["sweep", "--t", "0.1", *FAST]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(cli.SWEEP_COLUMNS)
        assert len(lines) == 3


class TestErrors:
    @pytest.mark.parametrize(
        "args",
        [
            ["volume", "--field", "bogus"],
            ["volume", "--domain", "torus"],
            ["volume", "--k", "2"],
            ["verify", "--suite", "1.4", "--k", "2", "--domain", "sphere"],
            ["volume", "--nodes", "8,8"],
            ["volume", "--t", "-1"],
        ],
    )
    def test_configuration_errors_exit_2(self, args, capsys):
        assert cli.main(args) == 2
        assert "error: " in capsys.readouterr().err

    @pytest.mark.parametrize("suite", ["1.4", "dichotomy"])
    def test_zero_t_is_rejected_by_proportional_volume_checks(self, suite, capsys):
        args = ["verify", "--suite", suite, "--field", "lambda:2", "--domain", "complement", "--t", "0", *FAST]
        assert cli.main(args) == 2
        assert "t > 0" in capsys.readouterr().err
        assert cli.main(["pushforward", "--field", "lambda:2", "--domain", "complement", "--t", "0", *FAST]) == 0

    def test_unknown_config_key(self, tmp_path, capsys):
        path = tmp_path / "run.cfg"
        path.write_text("colour = blue\n")
        assert cli.main(["volume", "--config", str(path)]) == 2
        assert "colour" in capsys.readouterr().err

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as info:
            cli.main(["plot"])
        assert info.value.code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["--version"])
        assert info.value.code == 0
        assert __version__ in capsys.readouterr().out
