"""Tests for the scenario-runner command line interface.

The contract under test: strict config validation with itemized error
messages (exit 2), domain failures mapped to exit 3, internal failures to
exit 1; flags override config-file values; every run writes a result
table (CSV or JSON) plus a JSON manifest; tabular output is byte-stable.
"""

import json
import math

import numpy as np
import pytest

from ncqmlab.cli import (
    build_parser,
    emit_table,
    main,
    merge_cli,
    radial_potential,
    validate_config,
)
from ncqmlab.errors import ConfigError, NCQMError
from ncqmlab.polysymbol import x1, x2


class TestValidateConfig:
    def test_minimal_config_fills_defaults(self):
        config = validate_config({"command": "spectrum"})
        assert config.command == "spectrum"
        assert config.theta == 0.0
        assert config.B == 1.0
        assert config.n_max == 30
        assert config.k == 5
        assert config.gauge == "symmetric"
        assert config.prescription == "antinormal"
        assert config.format == "csv"
        assert config.xi0 == (1.0, 0.0, 0.0, 0.0)
        assert config.potential == (1.0,)

    def test_unknown_keys_rejected_by_name(self):
        with pytest.raises(ConfigError, match="unknown key: 'Theta'"):
            validate_config({"command": "spectrum", "Theta": 0.1})

    def test_missing_command_rejected(self):
        with pytest.raises(ConfigError, match="command must be one of"):
            validate_config({"theta": 0.1})

    def test_unknown_command_rejected(self):
        with pytest.raises(ConfigError, match="command must be one of"):
            validate_config({"command": "spectra"})

    def test_errors_are_itemized(self):
        # one message listing every problem, not just the first
        with pytest.raises(ConfigError) as err:
            validate_config({
                "command": "spectrum", "bogus": 1, "gauge": "radial",
                "h": 0.0,
            })
        message = str(err.value)
        assert "unknown key: 'bogus'" in message
        assert "gauge must be symmetric or landau" in message
        assert "h must be positive" in message

    def test_numeric_strings_are_coerced(self):
        config = validate_config({"command": "star", "theta": "0.25"})
        assert config.theta == 0.25

    def test_non_numeric_field_rejected(self):
        with pytest.raises(ConfigError, match="theta must be a number"):
            validate_config({"command": "star", "theta": "abc"})

    def test_non_finite_field_rejected(self):
        with pytest.raises(ConfigError, match="B must be finite"):
            validate_config({"command": "star", "B": math.inf})

    def test_integer_bounds(self):
        with pytest.raises(ConfigError, match="n_max must be >= 4"):
            validate_config({"command": "spectrum", "n_max": 2})
        with pytest.raises(ConfigError, match="k must be >= 1"):
            validate_config({"command": "spectrum", "k": 0})
        with pytest.raises(ConfigError, match="N must be >= 0"):
            validate_config({"command": "peierls", "N": -1})

    def test_fractional_integer_rejected(self):
        with pytest.raises(ConfigError, match="n_max must be an integer"):
            validate_config({"command": "spectrum", "n_max": 10.5})

    def test_whole_float_accepted_as_integer(self):
        config = validate_config({"command": "spectrum", "n_max": 12.0})
        assert config.n_max == 12

    def test_enums_case_insensitive(self):
        config = validate_config({
            "command": "peierls", "gauge": "Landau", "format": "JSON",
            "prescription": "WEYL",
        })
        assert config.gauge == "landau"
        assert config.format == "json"
        assert config.prescription == "weyl"

    def test_bad_enums_rejected(self):
        for key, value, match in (
            ("gauge", "radial", "gauge must be symmetric or landau"),
            ("format", "xml", "format must be csv or json"),
            ("prescription", "wick", "prescription must be weyl"),
        ):
            with pytest.raises(ConfigError, match=match):
                validate_config({"command": "spectrum", key: value})

    def test_potential_must_be_numeric_list(self):
        with pytest.raises(ConfigError, match="potential must be a list"):
            validate_config({"command": "peierls", "potential": "r^2"})
        with pytest.raises(ConfigError, match="potential coefficients"):
            validate_config({"command": "peierls",
                             "potential": [1.0, math.nan]})

    def test_xi0_shape_and_values(self):
        with pytest.raises(ConfigError, match="exactly four components"):
            validate_config({"command": "trajectory", "xi0": [1, 0, 0]})
        with pytest.raises(ConfigError, match="xi0 must be a list"):
            validate_config({"command": "trajectory", "xi0": "origin"})

    def test_step_size_constraints(self):
        with pytest.raises(ConfigError, match="h must be positive"):
            validate_config({"command": "trajectory", "h": -1e-3})
        with pytest.raises(ConfigError, match="T must be at least one step"):
            validate_config({"command": "trajectory", "T": 1e-4, "h": 1e-3})

    def test_non_dict_rejected(self):
        with pytest.raises(ConfigError, match="must be a JSON object"):
            validate_config(["spectrum"])

    def test_params_roundtrip(self):
        config = validate_config({
            "command": "spectrum", "theta": 0.3, "B": 2.0, "e": 1.5,
            "m": 0.5, "hbar": 2.0, "c": 3.0,
        })
        params = config.params()
        assert (params.theta, params.B, params.e) == (0.3, 2.0, 1.5)
        assert (params.m, params.hbar, params.c) == (0.5, 2.0, 3.0)


class TestRadialPotential:
    def test_single_coefficient_is_r_squared(self):
        V = radial_potential((1.0,))
        assert V.allclose(x1() ** 2 + x2() ** 2)

    def test_two_coefficients(self):
        V = radial_potential((0.5, 2.0))
        r2 = x1() ** 2 + x2() ** 2
        assert V.allclose(0.5 * r2 + 2.0 * r2 ** 2)
        assert V.degree == 4

    def test_zero_coefficients_skipped(self):
        assert radial_potential((0.0,)).is_zero
        V = radial_potential((0.0, 1.0))
        assert V.allclose((x1() ** 2 + x2() ** 2) ** 2)


class TestEmitTable:
    COLUMNS = {"n": [0, 1, 2], "E_n": [0.5, 1.5, 2.4999999999999996]}

    def test_csv_layout_and_precision(self, tmp_path):
        path = str(tmp_path / "t.csv")
        emit_table(self.COLUMNS, "csv", path)
        text = (tmp_path / "t.csv").read_text()
        lines = text.splitlines()
        assert lines[0] == "n,E_n"
        assert text.endswith("\n")
        # floats are written via repr: round-trips exactly
        value = lines[3].split(",")[1]
        assert float(value) == 2.4999999999999996

    def test_csv_byte_stable(self, tmp_path):
        path_a = str(tmp_path / "a.csv")
        path_b = str(tmp_path / "b.csv")
        emit_table(self.COLUMNS, "csv", path_a)
        emit_table(self.COLUMNS, "csv", path_b)
        assert (tmp_path / "a.csv").read_bytes() == \
            (tmp_path / "b.csv").read_bytes()

    def test_json_preserves_column_order(self, tmp_path):
        path = str(tmp_path / "t.json")
        emit_table(self.COLUMNS, "json", path)
        loaded = json.loads((tmp_path / "t.json").read_text())
        assert list(loaded) == ["n", "E_n"]
        assert loaded["E_n"][1] == 1.5

    def test_numpy_arrays_accepted(self, tmp_path):
        path = str(tmp_path / "t.json")
        emit_table({"v": np.arange(3.0)}, "json", path)
        assert json.loads((tmp_path / "t.json").read_text())["v"] == \
            [0.0, 1.0, 2.0]

    def test_ragged_columns_rejected(self, tmp_path):
        with pytest.raises(NCQMError, match="equal length"):
            emit_table({"a": [1], "b": [1, 2]}, "csv",
                       str(tmp_path / "t.csv"))

    def test_no_stale_temp_file_left(self, tmp_path):
        emit_table(self.COLUMNS, "csv", str(tmp_path / "t.csv"))
        assert sorted(p.name for p in tmp_path.iterdir()) == ["t.csv"]


class TestMergeCli:
    def test_flags_override_config_file(self, tmp_path):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({"theta": 0.5, "k": 3}))
        parser_args = [
            "spectrum", "--config", str(config_path), "--theta", "0.2",
        ]
        config = merge_cli(build_parser().parse_args(parser_args))
        assert config.theta == 0.2    # flag wins
        assert config.k == 3          # file survives where no flag given
        assert config.n_max == 30     # defaults fill the rest

    def test_missing_config_file(self):
        args = build_parser().parse_args(
            ["spectrum", "--config", "/nonexistent/run.json"])
        with pytest.raises(ConfigError, match="config file not found"):
            merge_cli(args)

    def test_invalid_json_config_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        args = build_parser().parse_args(
            ["spectrum", "--config", str(bad)])
        with pytest.raises(ConfigError, match="not valid JSON"):
            merge_cli(args)

    def test_list_flags_parsed(self):
        args = build_parser().parse_args([
            "trajectory", "--xi0", "1,0,0.5,0", "--potential", "0.1,0.05",
        ])
        config = merge_cli(args)
        assert config.xi0 == (1.0, 0.0, 0.5, 0.0)
        assert config.potential == (0.1, 0.05)

    def test_bad_list_flag(self):
        args = build_parser().parse_args(["trajectory", "--xi0", "1,a,0,0"])
        with pytest.raises(ConfigError, match="comma-separated number list"):
            merge_cli(args)


class TestMainExitCodes:
    def test_config_error_exits_2(self, tmp_path, capsys):
        code = main(["spectrum", "--n-max", "2", "--out", str(tmp_path)])
        assert code == 2
        assert "config error" in capsys.readouterr().err

    def test_domain_error_exits_3(self, tmp_path, capsys):
        # the constant-field map is undefined past its pole
        code = main(["sw", "--theta", "0.4", "--curlyB", "2.5",
                     "--out", str(tmp_path)])
        assert code == 3
        assert "domain error" in capsys.readouterr().err

    def test_internal_failure_exits_1(self, tmp_path, capsys):
        blocker = tmp_path / "not_a_dir"
        blocker.write_text("")
        code = main(["spectrum", "--theta", "0.3", "--n-max", "8",
                     "--k", "2", "--out", str(blocker)])
        assert code == 1

    def test_trajectory_rejects_direct_field(self, tmp_path, capsys):
        code = main(["trajectory", "--B", "1.0", "--out", str(tmp_path)])
        assert code == 2
        assert "curlyB" in capsys.readouterr().err


class TestMainRuns:
    def test_spectrum_run_writes_table_and_manifest(self, tmp_path, capsys):
        code = main([
            "spectrum", "--theta", "0.3", "--B", "1.0", "--n-max", "10",
            "--k", "2", "--out", str(tmp_path),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "spectrum.csv" in out
        table = (tmp_path / "spectrum.csv").read_text().splitlines()
        assert table[0] == "n,E_n,multiplicity,spread"
        assert len(table) == 3
        manifest = json.loads(
            (tmp_path / "spectrum_manifest.json").read_text())
        assert manifest["config"]["command"] == "spectrum"
        assert manifest["config"]["theta"] == 0.3
        assert manifest["kappa"] == pytest.approx(0.7)
        assert set(manifest["versions"]) == {"ncqmlab", "numpy", "python"}

    def test_star_run_json(self, tmp_path):
        code = main([
            "star", "--theta", "0.2", "--B", "1.0", "--k", "3",
            "--format", "json", "--out", str(tmp_path),
        ])
        assert code == 0
        table = json.loads((tmp_path / "star.json").read_text())
        # the disentangled spectrum reproduces |B|(n + 1/2)
        np.testing.assert_allclose(table["E_n"], [0.5, 1.5, 2.5],
                                   rtol=0, atol=1e-12)
        manifest = json.loads((tmp_path / "star_manifest.json").read_text())
        assert manifest["Lambda_bar_times_Bbar"] == pytest.approx(
            1.0, abs=1e-14)
        assert manifest["jacobi_residual"] <= 1e-12

    def test_sw_run(self, tmp_path):
        code = main([
            "sw", "--theta", "0.4", "--curlyB", "0.5", "--k", "2",
            "--format", "json", "--out", str(tmp_path),
        ])
        assert code == 0
        table = json.loads((tmp_path / "sw.json").read_text())
        np.testing.assert_allclose(table["E_n"], [0.25, 0.75],
                                   rtol=0, atol=1e-12)
        manifest = json.loads((tmp_path / "sw_manifest.json").read_text())
        assert manifest["B_check"] == pytest.approx(0.625)

    def test_trajectory_run(self, tmp_path):
        code = main([
            "trajectory", "--theta", "0.25", "--B", "0", "--curlyB", "2.0",
            "--gauge", "symmetric", "--T", "16", "--h", "0.005",
            "--xi0", "1,0,0,0", "--out", str(tmp_path),
        ])
        assert code == 0
        manifest = json.loads(
            (tmp_path / "trajectory_manifest.json").read_text())
        assert manifest["omega_predicted"] == pytest.approx(2.25)
        assert manifest["omega_fitted"] == pytest.approx(2.25, rel=1e-3)
        header = (tmp_path / "trajectory.csv").read_text().splitlines()[0]
        assert header == "t,x1,x2,p1,p2,v1,v2"

    def test_peierls_run(self, tmp_path):
        code = main([
            "peierls", "--B", "50", "--lam", "0.1", "--k", "2",
            "--n-max", "12", "--format", "json", "--out", str(tmp_path),
        ])
        assert code == 0
        table = json.loads((tmp_path / "peierls.json").read_text())
        np.testing.assert_allclose(table["epsilon_n"], [0.004, 0.008],
                                   rtol=0, atol=1e-12)
        assert max(abs(d) for d in table["deviation"]) < 1e-5
        manifest = json.loads(
            (tmp_path / "peierls_manifest.json").read_text())
        assert manifest["omega_B"] == pytest.approx(50.0)

    def test_check_algebra_regular(self, tmp_path):
        code = main([
            "check-algebra", "--theta", "0.3", "--B", "1.0", "--seed", "7",
            "--format", "json", "--out", str(tmp_path),
        ])
        assert code == 0
        table = json.loads((tmp_path / "check_algebra.json").read_text())
        assert "jacobi_exotic" in table["check"]
        assert "symmetric_rep_residual" in table["check"]
        assert all(s == "ok" for s in table["status"])

    def test_check_algebra_singular_warns_but_succeeds(self, tmp_path,
                                                       capsys):
        code = main([
            "check-algebra", "--theta", "0.5", "--B", "2.0",
            "--format", "json", "--out", str(tmp_path),
        ])
        assert code == 0
        assert "kappa = 0" in capsys.readouterr().err
        table = json.loads((tmp_path / "check_algebra.json").read_text())
        assert "jacobi_exotic" not in table["check"]
        assert table["status"][table["check"].index("kappa")] == "singular"

    def test_byte_stable_across_runs(self, tmp_path):
        args = ["spectrum", "--theta", "0.3", "--n-max", "8", "--k", "2"]
        main(args + ["--out", str(tmp_path / "one")])
        main(args + ["--out", str(tmp_path / "two")])
        assert (tmp_path / "one" / "spectrum.csv").read_bytes() == \
            (tmp_path / "two" / "spectrum.csv").read_bytes()
