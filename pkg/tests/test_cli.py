"""Command-line front end: schemas, round-trips, exit codes, config merging."""

import json
import math

import pytest

from rsa1d import cli
from rsa1d.cli import OutputRecord, main, records_from_json, records_to_csv, records_to_json

SAMPLE = [
    OutputRecord("density", None, 1.0, 0.43233235838169365, None, "exact"),
    OutputRecord("correlation", 1, 1.0, -0.1869112681038772, None, "exact"),
    OutputRecord("gamma", 2, 0.5, 0.09196986029286058, 1.25e-4, "mc"),
]


class TestRecords:
    def test_stderr_only_for_mc(self):
        with pytest.raises(ValueError):
            OutputRecord("density", None, 1.0, 0.5, 0.1, "exact")
        with pytest.raises(ValueError):
            OutputRecord("density", None, 1.0, 0.5, None, "mc")

    def test_rejects_unknown_enum_values(self):
        with pytest.raises(ValueError):
            OutputRecord("entropy", None, 1.0, 0.5, None, "exact")
        with pytest.raises(ValueError):
            OutputRecord("density", None, 1.0, 0.5, None, "guess")

    def test_csv_schema(self):
        text = records_to_csv(SAMPLE)
        lines = text.strip().split("\n")
        assert lines[0] == "quantity,s,t,value,stderr,source"
        assert lines[1] == "density,,1,0.43233235838169365,,exact"
        assert lines[2].startswith("correlation,1,1,-0.186911268103877")
        assert lines[3].endswith(",mc")
        assert len(lines) == 4

    def test_csv_floats_round_trip(self):
        text = records_to_csv(SAMPLE)
        row = text.strip().split("\n")[1].split(",")
        assert float(row[3]) == SAMPLE[0].value  # 17 significant digits suffice

    def test_json_round_trip(self):
        assert records_from_json(records_to_json(SAMPLE)) == SAMPLE


class TestExitCodes:
    def test_density_exact(self, capsys):
        assert main(["density", "--t", "1.0", "--source", "exact"]) == 0
        out = capsys.readouterr().out
        assert "0.43233235838169365" in out

    def test_density_zero(self, capsys):
        assert main(["density", "--t", "0.0"]) == 0
        assert ",0,,exact" in capsys.readouterr().out

    def test_usage_error_bad_time(self, capsys):
        assert main(["density", "--t", "1.5"]) == 2

    def test_usage_error_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            main(["density", "--bogus"])
        assert exc.value.code == 2

    def test_resource_guard_oracle(self, capsys):
        # 12-site window exceeds the enumeration guard
        assert main(["gamma", "--t", "0.5", "--source", "oracle", "--s", "2", "--radius", "4"]) == 3

    def test_resource_guard_mc(self):
        assert main(["density", "--t", "1.0", "--source", "mc", "--sites", "1000000000"]) == 3


class TestCommands:
    def test_correlation_exact_values(self, capsys):
        assert main(["correlation", "--t", "1.0", "--s-max", "2"]) == 0
        rows = capsys.readouterr().out.strip().split("\n")[1:]
        values = {int(r.split(",")[1]): float(r.split(",")[3]) for r in rows}
        assert values[1] == pytest.approx(-0.1869112681038772, abs=1e-12)
        assert values[2] == pytest.approx(0.11008580704120376, abs=1e-12)

    def test_correlation_zero_time(self, capsys):
        assert main(["correlation", "--t", "0.0", "--s-max", "3"]) == 0
        rows = capsys.readouterr().out.strip().split("\n")[1:]
        assert all(float(r.split(",")[3]) == 0.0 for r in rows)

    def test_density_oracle_within_bound(self, capsys):
        assert main(["density", "--t", "0.3", "--source", "oracle", "--radius", "4"]) == 0
        value = float(capsys.readouterr().out.strip().split("\n")[1].split(",")[3])
        assert value == pytest.approx((1 - math.exp(-0.6)) / 2, abs=4.1e-5)

    def test_gamma_mc_emits_pair_records(self, capsys):
        assert (
            main(
                [
                    "gamma", "--t", "0.5", "--source", "mc",
                    "--sites", "20000", "--replicas", "4", "--format", "json",
                ]
            )
            == 0
        )
        records = records_from_json(capsys.readouterr().out)
        kinds = {(r.quantity, r.s) for r in records}
        assert kinds == {("gamma", 2), ("p_pair", 2), ("p_pair", 3), ("density", None)}
        assert all(r.stderr is not None for r in records)

    def test_oracle_subcommand(self, capsys):
        assert main(["oracle", "gamma", "--t", "0.3", "--s", "2"]) == 0
        row = capsys.readouterr().out.strip().split("\n")[1]
        assert row.startswith("gamma,2,")

    def test_sweep_row_count(self, capsys):
        assert main(["sweep", "--t-points", "5", "--s-max", "2"]) == 0
        rows = capsys.readouterr().out.strip().split("\n")[1:]
        # per t: 1 density + 3 correlations + 1 gamma (s=2)
        assert len(rows) == 5 * 5

    def test_out_file(self, tmp_path):
        target = tmp_path / "density.csv"
        assert main(["density", "--t", "1.0", "--out", str(target)]) == 0
        assert target.read_text().startswith("quantity,s,t,value,stderr,source\n")


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"t": "0.25", "s_max": 1, "sites": 12345}))
        assert main(["correlation", "--config", str(cfg)]) == 0
        rows = capsys.readouterr().out.strip().split("\n")[1:]
        assert len(rows) == 2  # s in {0, 1} at t = 0.25
        assert all(row.split(",")[2] == "0.25" for row in rows)

        assert main(["correlation", "--config", str(cfg), "--t", "0.75"]) == 0
        rows = capsys.readouterr().out.strip().split("\n")[1:]
        assert all(row.split(",")[2] == "0.75" for row in rows)

    def test_config_ignores_foreign_keys(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"replicas": 8, "radius": 2}))
        assert main(["oracle", "density", "--config", str(cfg), "--t", "0.2"]) == 0

    def test_missing_config_is_usage_error(self):
        assert main(["density", "--config", "/nonexistent.json"]) == 2


class TestVerifyCommand:
    def test_quick_passes(self, capsys):
        assert main(["verify", "--level", "quick"]) == 0
        out = capsys.readouterr().out
        assert "all 16 checks passed" in out

    def test_corrupting_a_constant_fails_and_names_it(self, capsys):
        assert main(["verify", "--level", "quick", "--corrupt", "density_event_sum"]) == 1
        out = capsys.readouterr().out
        assert "FAIL" in out
        assert "density_event_sum" in out

    def test_unknown_corrupt_name_is_usage_error(self):
        assert main(["verify", "--corrupt", "no_such_check"]) == 2
