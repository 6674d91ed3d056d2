import csv
import json

import numpy as np
import pytest

from ptdarboux import cli, spectra


def _rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_parse_complex():
    assert cli.parse_complex("0.75") == 0.75
    assert cli.parse_complex("0.75i") == 0.75j
    assert cli.parse_complex("1-2i") == 1 - 2j
    assert cli.parse_complex(" 0.5 + 0.25j ") == 0.5 + 0.25j
    assert cli.parse_complex("i") == 1j
    with pytest.raises(cli.ConfigError):
        cli.parse_complex("abc")


def test_partner_oscillator(tmp_path):
    assert cli.main(["partner", "--out-dir", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "partner.csv")
    assert rows[0] == ["x", "re_v_minus", "im_v_minus", "re_v_plus", "im_v_plus", "re_W", "im_W"]
    assert len(rows) == 1 + 1601
    mid = [r for r in rows[1:] if float(r[0]) == 0][0]
    assert float(mid[3]) == pytest.approx(-0.7325, abs=1e-12)
    assert float(mid[4]) == pytest.approx(0, abs=1e-12)
    meta = json.loads((tmp_path / "partner.json").read_text())
    assert meta["beta"] == [-4.5, 0.0]
    assert meta["seed_energy"] == [4.5, 0.0]
    assert meta["deviations"]["partner_m1_closed_form"] < 1e-8
    rep = meta["reproducibility"]
    assert {"version", "params", "grid", "tolerances"} <= set(rep)


def test_csv_uses_17_significant_digits(tmp_path):
    cli.main(["partner", "--out-dir", str(tmp_path), "--n-points", "101"])
    rows = _rows(tmp_path / "partner.csv")
    for r in rows[1:]:
        for cell in r:
            assert float(format(float(cell), ".17g")) == float(cell)
    assert any(len(c.lstrip("-").replace(".", "").lstrip("0").split("e")[0]) == 17
               for r in rows[1:] for c in r)


def test_partner_ginocchio(tmp_path):
    code = cli.main(["partner", "--model", "ginocchio", "--m", "1", "--out-dir", str(tmp_path)])
    assert code == 0
    meta = json.loads((tmp_path / "partner.json").read_text())
    assert meta["beta"][0] == pytest.approx(0.0625)
    assert "partner_m1_literal" in meta["deviations"]


@pytest.mark.parametrize("argv", [
    ["partner", "--model", "ginocchio", "--m", "5"],
    ["partner", "--model", "ginocchio", "--gamma", "2", "--epsilon", "1"],
    ["partner", "--alpha", "1", "--q", "1"],
    ["partner", "--n-points", "100"],
    ["partner", "--epsilon", "-1"],
    ["partner", "--alpha", "nonsense"],
    ["partner", "--model", "nope"],
    ["figure", "fig1", "--model", "ginocchio"],
])
def test_precondition_errors_exit_2(tmp_path, argv):
    assert cli.main(argv + ["--out-dir", str(tmp_path)]) == 2


def test_unknown_subcommand_exit_2():
    assert cli.main(["bogus"]) == 2


def test_verify_default_passes(tmp_path):
    assert cli.main(["verify", "--out-dir", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "verify.json").read_text())
    for key in ("params", "spectra", "matches", "residuals", "deviations", "timings",
                "reproducibility"):
        assert key in rep
    assert rep["verdict"] == "pass"
    assert rep["matches"]["isospectral"]["missing_in_B"] == [[pytest.approx(4.5, abs=5e-3),
                                                             pytest.approx(0, abs=1e-6)]]


def test_verify_without_skip_fails(tmp_path):
    assert cli.main(["verify", "--no-skip", "--out-dir", str(tmp_path)]) == 1
    rep = json.loads((tmp_path / "verify.json").read_text())
    assert rep["verdict"] == "fail"
    missing = rep["matches"]["isospectral"]["missing_in_B"]
    assert len(missing) == 1 and missing[0][0] == pytest.approx(4.5, abs=5e-3)


def test_verify_imaginary_alpha_is_report_only(tmp_path):
    assert cli.main(["verify", "--alpha", "0.75i", "--out-dir", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "verify.json").read_text())
    assert rep["verdict"] == "report-only"
    assert rep["spectra"]["v_minus"]["max_imag"] > 1


def test_verify_ginocchio(tmp_path):
    assert cli.main(["verify", "--model", "ginocchio", "--out-dir", str(tmp_path)]) == 0


def test_numerical_failure_exit_3(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise spectra.ConvergenceError("stuck")
    monkeypatch.setattr(spectra, "spectra_concurrently", boom)
    assert cli.main(["verify", "--out-dir", str(tmp_path)]) == 3


def test_figures(tmp_path):
    assert cli.main(["figure", "fig1", "--out-dir", str(tmp_path)]) == 0
    first = (tmp_path / "fig1.csv").read_bytes()
    assert cli.main(["figure", "fig1", "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "fig1.csv").read_bytes() == first
    rows = _rows(tmp_path / "fig1.csv")
    assert rows[0] == ["x", "re", "im"] and len(rows) == 1002
    data = np.array(rows[1:], dtype=float)
    assert data[0, 0] == -5 and data[-1, 0] == 5
    assert data[500, 0] == 0
    assert data[500, 1] == pytest.approx(-0.7325, abs=1e-12)
    assert abs(data[500, 2]) < 1e-12

    assert cli.main(["figure", "fig2", "--out-dir", str(tmp_path)]) == 0
    d2 = np.array(_rows(tmp_path / "fig2.csv")[1:], dtype=float)
    phi = d2[:, 1] + 1j * d2[:, 2]
    # z(-x) = -conj(z(x)) turns z^p into exp(-i pi p) conj(z^p): PT up to a fixed phase
    phase = np.exp(-1j * np.pi * (1.5 - 0.75))
    assert np.max(np.abs(phi[::-1] - phase * np.conj(phi))) < 1e-10


def test_figure_alpha_override(tmp_path):
    assert cli.main(["figure", "fig1", "--alpha", "0.6", "--out-dir", str(tmp_path)]) == 0
    assert np.all(np.isfinite(np.array(_rows(tmp_path / "fig1.csv")[1:], dtype=float)))


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# oscillator run\nalpha = 0.6\nq = -1\nn-points = 801\nm = 0\n")
    assert cli.main(["partner", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    meta = json.loads((tmp_path / "partner.json").read_text())
    assert meta["params"]["alpha"] == [0.6, 0.0] and meta["params"]["q"] == -1
    assert meta["reproducibility"]["grid"]["n_points"] == 801
    assert cli.main(["partner", "--config", str(cfg), "--q", "1", "--out-dir", str(tmp_path)]) == 0
    meta = json.loads((tmp_path / "partner.json").read_text())
    assert meta["params"]["q"] == 1


def test_bad_config_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("alpha 0.6\n")
    assert cli.main(["partner", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 2


def test_spectrum_command(tmp_path):
    assert cli.main(["spectrum", "--which", "plus", "--k", "5", "--out-dir", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "spectrum.json").read_text())
    vals = [e[0] for e in rep["spectra"]["plus"]["eigenvalues"]]
    np.testing.assert_allclose(vals, [0.5, 3.5, 7.5, 8.5, 11.5], atol=2e-3)
