"""End-to-end runs of the qgs command line tool."""

import json

import numpy as np
import pytest

import qgscatter.closed_forms as cf
from qgscatter.cli import main
from qgscatter.plotting import read_table


@pytest.fixture
def triangle(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(json.dumps({
        "vertices": 3,
        "edges": [[1, 2, 1.0], [2, 3, 1.0], [1, 3, 1.0]],
        "leads": [1, 2, 3],
    }), encoding="utf-8")
    return path


def _write(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_sweep_writes_csv_and_png(tmp_path, triangle, capsys):
    config = _write(tmp_path / "sweep.json", {
        "k_min": 0.5, "k_max": 2.5, "samples": 9,
        "measures": ["shannon"],
    })
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--graph", str(triangle), "--config", str(config),
                 "--out", str(out), "--plot"])
    assert code == 0
    assert "wrote" in capsys.readouterr().out
    table = read_table(out)
    assert table.header[:5] == ("k", "p_1", "p_2", "p_3", "shannon")
    assert len(table.rows) == 9
    assert (tmp_path / "sweep.png").exists()


def test_sweep_workers_do_not_change_bytes(tmp_path, triangle):
    config = _write(tmp_path / "sweep.json",
                    {"k_min": 0.3, "k_max": 4.2, "samples": 40})
    a, b = tmp_path / "serial.csv", tmp_path / "threaded.csv"
    assert main(["sweep", "--graph", str(triangle), "--config", str(config),
                 "--out", str(a)]) == 0
    assert main(["sweep", "--graph", str(triangle), "--config", str(config),
                 "--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_average_subcommand(tmp_path, capsys):
    config = _write(tmp_path / "avg.json", {
        "measure": "renyi",
        "parameter_grid": [0.5, 1.0, 2.0],
        "families": [{"family": "complete", "n": 2}],
    })
    out = tmp_path / "avg.csv"
    assert main(["average", "--config", str(config), "--out", str(out),
                 "--tol", "1e-5"]) == 0
    table = read_table(out)
    assert table.header == ("family", "n", "parameter", "value",
                            "quad_error_estimate")
    assert len(table.rows) == 3
    # one transparent edge: full transmission, zero entropy at every order
    assert all(abs(row[3]) < 1e-12 for row in table.rows)


def test_closed_form_subcommand(tmp_path):
    out = tmp_path / "c5.csv"
    assert main(["closed-form", "--family", "cycle", "--n", "5",
                 "--z-samples", "64", "--out", str(out)]) == 0
    table = read_table(out)
    assert table.header[0] == "k"
    assert "refl_prob" in table.header
    assert "trans_3_re" in table.header
    probs = np.array([[row[table.header.index(c)] for c in table.header
                       if c.endswith("_prob")] for row in table.rows])
    assert probs.shape[1] == 5  # reflection plus one column per exit vertex
    assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-9)


def test_closed_form_requires_n_for_sized_families(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["closed-form", "--family", "wheel",
                 "--out", str(out)]) == 2


def test_closed_form_pvv_lengths(tmp_path):
    out = tmp_path / "pvv.csv"
    assert main(["closed-form", "--family", "pvv", "--lengths", "1", "1.5",
                 "--z-samples", "32", "--out", str(out)]) == 0
    table = read_table(out)
    assert len(table.rows) == 32


def test_validate_subcommand_passes(tmp_path, capsys):
    assert main(["validate", "--family", "pvv", "--samples", "64"]) == 0
    out = capsys.readouterr().out
    assert "PASS pvv lengths 1:1" in out
    assert "PASS pvv lengths 2:3" in out
    assert "2/2 cases within 1e-08" in out


def test_validate_subcommand_fails_at_impossible_tolerance(capsys):
    assert main(["validate", "--family", "pvv", "--samples", "16",
                 "--tol", "1e-18"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_validate_subcommand_catches_corrupted_formula(monkeypatch, capsys):
    honest = cf.wheel_amplitudes

    def skewed(n, z):
        tp = honest(n, z)
        return cf.TwoPort(tp.refl, tp.trans * (1.0 + 1e-3))

    monkeypatch.setattr(cf, "wheel_amplitudes", skewed)
    assert main(["validate", "--family", "wheel", "--samples", "16"]) == 1
    assert "FAIL wheel" in capsys.readouterr().out


def test_figures_subcommand(tmp_path, capsys):
    assert main(["figures", "--out-dir", str(tmp_path / "figs"),
                 "--only", "fig6", "--no-plot"]) == 0
    assert (tmp_path / "figs" / "fig6.csv").exists()
    assert not (tmp_path / "figs" / "fig6.png").exists()


def test_figures_renders_png_by_default(tmp_path):
    assert main(["figures", "--out-dir", str(tmp_path / "figs"),
                 "--only", "fig13"]) == 0
    assert (tmp_path / "figs" / "fig13.csv").exists()
    assert (tmp_path / "figs" / "fig13.png").exists()


def test_malformed_config_exits_2(tmp_path, triangle):
    config = _write(tmp_path / "sweep.json",
                    {"k_min": 0.5, "k_max": 2.5, "samples": 9, "oops": 1})
    assert main(["sweep", "--graph", str(triangle), "--config", str(config),
                 "--out", str(tmp_path / "x.csv")]) == 2


def test_malformed_graph_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    config = _write(tmp_path / "sweep.json",
                    {"k_min": 0.5, "k_max": 2.5, "samples": 9})
    assert main(["sweep", "--graph", str(bad), "--config", str(config),
                 "--out", str(tmp_path / "x.csv")]) == 2


def test_missing_files_exit_2(tmp_path, triangle):
    assert main(["sweep", "--graph", str(tmp_path / "absent.json"),
                 "--config", str(tmp_path / "absent2.json"),
                 "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["average", "--config", str(tmp_path / "absent.json"),
                 "--out", str(tmp_path / "x.csv")]) == 2
