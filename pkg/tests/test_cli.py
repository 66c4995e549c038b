import csv
import io
import json
import math
import os

import pytest

from tra import cli
from tra.cli import (EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, RunConfig, Table, emit_config, emit_results, main,
                     parse_config, render, run_spectrum, table2_paths)
from tra.errors import IoError, MissingParameter, ParseError, UnknownEntry
from tra.solver import Spectrum

MINIMAL = """\
command = spectrum
entry = pseudospin_oscillator
param.m = 1.0
param.V0 = 0.5
numeric.n_max = 5
"""


class TestParse:
    def test_minimal(self):
        rc = parse_config(MINIMAL)
        assert rc.command == "spectrum" and rc.entry == "pseudospin_oscillator"
        assert rc.parameters["m"] == 1.0 and rc.parameters["V0"] == 0.5
        assert rc.int("n_max") == 5
        assert rc.numeric["tol"] == cli.NUMERIC_DEFAULTS["tol"]
        assert rc.output_format == "csv" and rc.output_path is None

    def test_comments_and_blank_lines(self):
        rc = parse_config("# header\n\n" + MINIMAL.replace("param.m = 1.0", "param.m = 1.0   # mass"))
        assert rc == parse_config(MINIMAL)

    def test_unknown_entry(self):
        with pytest.raises(UnknownEntry):
            parse_config(MINIMAL.replace("pseudospin_oscillator", "no_such_entry"))

    def test_missing_parameter(self):
        with pytest.raises(MissingParameter):
            parse_config("command = spectrum\n")
        with pytest.raises(MissingParameter):
            parse_config("entry = spin_rosen_morse\n")

    def test_parameters_default_from_entry(self):
        rc = parse_config("command = spectrum\nentry = spin_sinusoidal\nparam.m = 1\n")
        assert set(rc.parameters) == {"m", "V0", "kappa"}

    @pytest.mark.parametrize("doc", [
        MINIMAL + "colour = blue\n",
        MINIMAL + "param.m = 2\n",
        MINIMAL.replace("0.5", "half"),
        MINIMAL + "numeric.n_max2 = 3\n",
        MINIMAL + "numeric.N = 2.5\n",
        MINIMAL + "param.zeta = 1\n",
        MINIMAL + "output.format = xml\n",
        MINIMAL + "just some words\n",
        MINIMAL.replace("spectrum", "eigen", 1),
    ], ids=["unknown-key", "duplicate", "malformed-number", "unknown-numeric", "fractional-integer",
            "unknown-param", "bad-format", "no-equals", "bad-command"])
    def test_rejections(self, doc):
        with pytest.raises(ParseError):
            parse_config(doc)

    def test_round_trip(self):
        rc = parse_config(MINIMAL + "output.format = json\noutput.path = out.json\n")
        assert parse_config(emit_config(rc)) == rc
        assert emit_config(parse_config(emit_config(rc))) == emit_config(rc)

    def test_round_trip_keeps_nan_defaults(self):
        rc = parse_config(MINIMAL)
        assert math.isnan(parse_config(emit_config(rc)).numeric["eps"])

    def test_command_line_overrides_conflict(self):
        with pytest.raises(cli.ConfigError):
            parse_config(MINIMAL, "jmatrix")


class TestOutput:
    def test_empty_spectrum_header_only(self):
        text = render(Spectrum([], []), "csv")
        assert text == "n,branch,epsilon,N_used,delta_converge\n"
        assert render(Spectrum([], []), "json").strip() == "[]"

    def test_json_matches_csv(self):
        sp = run_spectrum(parse_config(MINIMAL))
        rows = list(csv.DictReader(io.StringIO(render(sp, "csv"))))
        objs = json.loads(render(sp, "json"))
        assert len(rows) == len(objs) == len(sp) > 0
        for r, o in zip(rows, objs):
            assert float(r["epsilon"]) == pytest.approx(o["epsilon"], rel=1e-12)
            assert int(r["n"]) == o["n"] and r["branch"] == o["branch"]

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert main(["spectrum", "--set", "entry=spin_rosen_morse", "--out", str(p)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(IoError):
            emit_results(Table(("a",), [(1,)]), "csv", str(tmp_path / "missing" / "x.csv"))

    def test_banded_matrix_rows(self):
        t = cli.to_table([[1.0, 2.0, 0.0], [2.0, 3.0, 4.0], [0.0, 4.0, 5.0]])
        assert [(i, j) for i, j, _ in t.rows] == [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)]


class TestMain:
    def test_spectrum_values(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(MINIMAL)
        out = tmp_path / "levels.json"
        assert main(["spectrum", "--config", str(cfg), "--format", "json", "--out", str(out)]) == EXIT_OK
        data = json.loads(out.read_text())
        assert [d["n"] for d in data if d["branch"] == "positive"] == list(range(6))

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(MINIMAL + "output.format = csv\n")
        out = tmp_path / "levels"
        assert main(["spectrum", "--config", str(cfg), "--format", "json", "--out", str(out)]) == EXIT_OK
        json.loads(out.read_text())

    def test_config_errors(self, tmp_path, capsys):
        assert main(["spectrum", "--config", str(tmp_path / "nope.cfg")]) == EXIT_CONFIG
        assert main(["spectrum", "--set", "entry=no_such_entry"]) == EXIT_CONFIG
        assert main(["spectrum", "--set", "entry=spin_rosen_morse", "--set", "param.q=1"]) == EXIT_CONFIG
        assert main(["spectrum", "--set", "entry=spin_rosen_morse", "--out",
                     str(tmp_path / "missing" / "x.csv")]) == EXIT_CONFIG
        assert "tra: error" in capsys.readouterr().err

    def test_validate_exit_codes(self, capsys):
        assert main(["validate", "--set", "numeric.criterion=8"]) == EXIT_OK
        assert main(["validate", "--set", "numeric.criterion=5"]) == EXIT_VALIDATION

    def test_catalog_lists_entries(self, capsys):
        assert main(["catalog", "--format", "json"]) == EXIT_OK
        ids = [row["id"] for row in json.loads(capsys.readouterr().out)]
        assert "pseudospin_oscillator" in ids and ids == sorted(ids)

    def test_wavefunction(self, tmp_path):
        out = tmp_path / "psi.csv"
        assert main(["wavefunction", "--set", "entry=spin_oscillator", "--set", "numeric.grid_points=64",
                     "--out", str(out)]) == EXIT_OK
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["x", "psi_plus", "psi_minus"] and len(rows) == 65


class TestTable2:
    def test_paths(self):
        assert table2_paths("out/t2.csv", "csv") == {1.5: "out/t2_kappa_1.5.csv", 0.1: "out/t2_kappa_0.1.csv"}
        assert table2_paths(None, "json") == {1.5: "table2_kappa_1.5.json", 0.1: "table2_kappa_0.1.json"}

    def test_writes_one_file_per_kappa(self, tmp_path):
        stem = str(tmp_path / "t2")
        assert main(["table2", "--out", stem]) == EXIT_OK
        for path in table2_paths(stem, "csv").values():
            assert os.path.exists(path)
            header = open(path).readline().strip()
            assert header == "n,branch,epsilon,N_used,delta_converge"
