"""Deterministic tables, sweeps, averages and formula validation."""

import json
import math

import numpy as np
import pytest

import qgscatter.closed_forms as cf
import qgscatter.sweeps as sweeps
from qgscatter.engine import SingularSystem
from qgscatter.entropy import BadParameter, EntropyMeasure, PeriodSpec
from qgscatter.graphs import cycle_graph
from qgscatter.plotting import read_table
from qgscatter.sweeps import (
    AverageConfig,
    ConfigError,
    SweepConfig,
    Table,
    average_for_case,
    default_kgrid,
    double_edge_case,
    engine_column,
    family_case,
    family_probabilities,
    format_cell,
    run_average,
    run_figures,
    run_sweep,
    validate_case,
    validate_families,
)

TWO_PI = 2.0 * math.pi


def test_format_cell_round_trips():
    assert format_cell(None) == "NA"
    assert format_cell(0.1) == "0.1"
    assert format_cell(1.0) == "1.0"
    assert format_cell(np.float64(0.25)) == "0.25"
    assert format_cell(3) == "3"
    assert format_cell("cycle") == "cycle"
    # shortest repr survives parsing back to the identical float
    x = 2.0 * math.pi / 3.0
    assert float(format_cell(x)) == x


def test_table_bytes_are_stable():
    t = Table(("k", "p_1"), ((0.5, 1.0), (1.5, None)))
    data = t.to_csv_bytes()
    assert data == b"k,p_1\n0.5,1.0\n1.5,NA\n"
    assert t.column("p_1") == [1.0, None]


def test_table_file_round_trip(tmp_path):
    t = Table(("k", "value", "tag"), ((0.25, 1.5, "a"), (0.5, None, "b")))
    path = tmp_path / "t.csv"
    t.write(path)
    back = read_table(path)
    assert back.header == t.header
    assert back.rows == t.rows


def test_default_kgrid_hits_pi_multiples_exactly():
    ks = default_kgrid()
    assert len(ks) == 1024
    assert ks[0] > 0.0
    assert ks[-1] == pytest.approx(4.0 * math.pi, abs=0.0)
    assert ks[255] == math.pi
    assert ks[511] == TWO_PI


def test_family_case_registry():
    for family, n, channels in [
        ("series", 3, ("refl", "trans")),
        ("parallel", 5, ("refl", "trans")),
        ("cycle", 4, ("refl", "trans_2", "trans_3", "trans_4")),
        ("wheel", 5, ("refl", "trans")),
        ("complete", 4, ("refl", "trans")),
    ]:
        case = family_case(family, n)
        assert case.family == family
        assert case.n == n
        assert case.channels == channels
        assert len(case.expand) == len(case.og.leads)
    with pytest.raises(ConfigError):
        family_case("moebius", 3)
    with pytest.raises(ConfigError):
        family_case("cycle", 2)


def test_pvv_case_uses_both_lengths():
    case = double_edge_case(1.0, 1.5)
    assert case.label == "lengths 1:1.5"
    assert [e.length for e in case.og.graph.edges] == [1.0, 1.5]
    with pytest.raises(ConfigError):
        double_edge_case(0.0, 1.0)


def test_validation_case_roster():
    labels = [(c.family, c.label) for c in sweeps.validation_cases("pvv")]
    assert labels == [("pvv", "lengths 1:1"), ("pvv", "lengths 2:3")]
    all_cases = sweeps.validation_cases("all")
    assert len(all_cases) == 33
    with pytest.raises(ConfigError):
        sweeps.validation_cases("hypercube")


def test_engine_column_detunes_off_trapped_modes():
    case = family_case("cycle", 4)
    used, column = engine_column(case, TWO_PI)
    assert used != TWO_PI
    assert used - TWO_PI == pytest.approx(1e-9 * TWO_PI, rel=1e-6)
    assert np.sum(np.abs(column) ** 2) == pytest.approx(1.0, abs=1e-8)


def test_family_probabilities_fall_back_at_degenerate_points():
    case = family_case("cycle", 4)
    ks = np.array([1.0, math.pi, TWO_PI])
    p = family_probabilities(case, ks)
    assert p.shape == (3, 4)
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-12)


def test_closed_form_column_matches_engine_generically():
    case = family_case("complete", 3)
    ks = np.array([0.9, 2.3])
    formula = case.full_column(ks)
    for i, k in enumerate(ks):
        _, engine = engine_column(case, float(k))
        assert np.max(np.abs(formula[i] - engine)) < 1e-10


def test_sweep_config_parsing():
    cfg = SweepConfig.from_dict({
        "k_min": 0.5, "k_max": 2.5, "samples": 5,
        "measures": ["shannon", "renyi_2"],
        "outputs": ["probabilities", "entropy", "amplitudes_re_im"],
    })
    assert cfg.kgrid()[0] == 0.5 and cfg.kgrid()[-1] == 2.5
    assert [m.column_name for m in cfg.measures] == ["shannon", "renyi_2"]

    with pytest.raises(ConfigError):
        SweepConfig.from_dict({"k_min": 1.0, "k_max": 2.0})
    with pytest.raises(ConfigError):
        SweepConfig.from_dict({"k_min": 1.0, "k_max": 2.0, "samples": 4,
                               "mystery": True})
    with pytest.raises(ConfigError):
        SweepConfig.from_dict({"k_min": 2.0, "k_max": 1.0, "samples": 4})
    with pytest.raises(ConfigError):
        SweepConfig.from_dict({"k_min": 1.0, "k_max": 2.0, "samples": 4,
                               "outputs": ["entropy", "spectra"]})
    with pytest.raises(BadParameter):
        SweepConfig.from_dict({"k_min": 1.0, "k_max": 2.0, "samples": 4,
                               "measures": ["renyi_1.0"]})


def test_run_sweep_column_contract():
    og = cycle_graph(3)
    cfg = SweepConfig.from_dict({
        "k_min": 0.5, "k_max": 1.5, "samples": 3,
        "measures": ["shannon", "renyi_2"],
        "outputs": ["probabilities", "entropy", "amplitudes_re_im"],
    })
    table = run_sweep(og, cfg)
    assert table.header == (
        "k", "p_1", "p_2", "p_3", "shannon", "renyi_2",
        "sigma_1_re", "sigma_1_im", "sigma_2_re", "sigma_2_im",
        "sigma_3_re", "sigma_3_im",
    )
    assert len(table.rows) == 3
    row = table.rows[0]
    assert row[0] == 0.5
    p = np.array(row[1:4])
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    amp = complex(row[6], row[7])
    assert abs(amp) ** 2 == pytest.approx(row[1], abs=1e-9)


def test_run_sweep_records_the_detuned_wavenumber():
    og = cycle_graph(4)
    cfg = SweepConfig.from_dict(
        {"k_min": math.pi, "k_max": 3.0 * math.pi, "samples": 3})
    table = run_sweep(og, cfg)
    for row, nominal in zip(table.rows, cfg.kgrid()):
        assert row[0] != nominal
        assert row[0] == pytest.approx(nominal, rel=1e-8)
        assert None not in row


def test_run_sweep_leaves_na_when_retry_fails(monkeypatch):
    def always_singular(og, k):
        raise SingularSystem("forced")

    monkeypatch.setattr(sweeps, "scattering_matrix", always_singular)
    og = cycle_graph(3)
    cfg = SweepConfig.from_dict({"k_min": 1.0, "k_max": 2.0, "samples": 2})
    table = run_sweep(og, cfg)
    for row, nominal in zip(table.rows, cfg.kgrid()):
        assert row[0] == nominal
        assert all(cell is None for cell in row[1:])
    assert b"1.0,NA,NA,NA,NA\n" in table.to_csv_bytes()


def test_run_sweep_entrance_override():
    og = cycle_graph(3)
    cfg = SweepConfig.from_dict({"k_min": 0.7, "k_max": 1.1, "samples": 2,
                                 "entrance": 2, "outputs": ["probabilities"]})
    table = run_sweep(og, cfg)
    assert len(table.rows) == 2
    with pytest.raises(ConfigError):
        run_sweep(og, SweepConfig.from_dict(
            {"k_min": 0.7, "k_max": 1.1, "samples": 2, "entrance": 3}))


def test_run_sweep_parallel_rows_are_byte_identical():
    og = cycle_graph(3)
    cfg = SweepConfig.from_dict({"k_min": 0.3, "k_max": 4.1, "samples": 40})
    serial = run_sweep(og, cfg, workers=1).to_csv_bytes()
    threaded = run_sweep(og, cfg, workers=4).to_csv_bytes()
    assert serial == threaded


def _average_payload(tmp_path):
    graph_path = tmp_path / "triangle.json"
    graph_path.write_text(json.dumps({
        "vertices": 3,
        "edges": [[1, 2, 1.0], [2, 3, 1.0], [1, 3, 1.0]],
        "leads": [1, 2, 3],
    }), encoding="utf-8")
    return {
        "measure": "renyi",
        "parameter_grid": [0.5, 2.0],
        "period": "infer",
        "families": [
            {"family": "cycle", "n": 3},
            {"family": "wheel", "n_min": 4, "n_max": 5},
            {"graph": "triangle.json"},
        ],
    }


def test_average_config_parsing(tmp_path):
    cfg = AverageConfig.from_dict(_average_payload(tmp_path),
                                  base_dir=tmp_path)
    assert cfg.measure_kind == "renyi"
    assert cfg.parameter_grid == (0.5, 2.0)
    assert [(j.label, j.n) for j in cfg.jobs] == [
        ("cycle", 3), ("wheel", 4), ("wheel", 5), ("triangle", 3)]
    assert cfg.jobs[0].case is not None and cfg.jobs[0].og is None
    assert cfg.jobs[3].case is None and cfg.jobs[3].og is not None


@pytest.mark.parametrize("mangle", [
    lambda d: d.update(measure="shannon"),
    lambda d: d.update(parameter_grid=[]),
    lambda d: d.update(families=[]),
    lambda d: d.update(families=[{"family": "cycle"}]),
    lambda d: d.update(families=[{"family": "cycle", "n": 3, "x": 1}]),
    lambda d: d.update(surprise=True),
])
def test_average_config_rejects_malformed_input(tmp_path, mangle):
    data = _average_payload(tmp_path)
    mangle(data)
    with pytest.raises(ConfigError):
        AverageConfig.from_dict(data, base_dir=tmp_path)


def test_parameter_one_selects_the_shannon_limit():
    m = sweeps._measure_for("renyi", 1.0 + 5e-10)
    assert m.kind == "shannon"
    m2 = sweeps._measure_for("tsallis", 2.0)
    assert m2.kind == "tsallis" and m2.param == 2.0


def test_formula_and_engine_averages_agree():
    case = family_case("cycle", 3)
    measure = EntropyMeasure("renyi", 2.0)
    mean_formula, _ = average_for_case(case, measure, PeriodSpec.inferred(),
                                       1e-6)
    from qgscatter.entropy import average_entropy
    mean_engine, _ = average_entropy(cycle_graph(3), measure, tol=1e-6)
    assert mean_formula == pytest.approx(mean_engine, abs=5e-6)


def test_run_average_table_layout(tmp_path):
    data = _average_payload(tmp_path)
    data["families"] = [{"family": "complete", "n": 2}]
    data["parameter_grid"] = [0.5, 1.0, 2.0]
    cfg = AverageConfig.from_dict(data, base_dir=tmp_path)
    table = run_average(cfg)
    assert table.header == ("family", "n", "parameter", "value",
                            "quad_error_estimate")
    assert [row[2] for row in table.rows] == [0.5, 1.0, 2.0]
    # a single transparent edge scatters into one channel only
    assert all(abs(row[3]) < 1e-12 for row in table.rows)


def test_validate_case_passes_for_honest_formulas():
    row = validate_case(family_case("wheel", 5), samples=64)
    assert row.passed
    assert row.max_deviation < 1e-8
    assert row.family == "wheel"


def test_validate_case_flags_a_corrupted_formula(monkeypatch):
    honest = cf.wheel_amplitudes

    def skewed(n, z):
        tp = honest(n, z)
        return cf.TwoPort(tp.refl * (1.0 + 1e-3), tp.trans)

    monkeypatch.setattr(cf, "wheel_amplitudes", skewed)
    row = validate_case(family_case("wheel", 5), samples=32)
    assert not row.passed
    assert row.max_deviation > 1e-4


def test_validate_families_rejects_unknown_family():
    with pytest.raises(ConfigError):
        validate_families("torus")


def test_figure_registry_and_output(tmp_path):
    with pytest.raises(ConfigError):
        run_figures(tmp_path, names=["fig1"], plot=False)
    written = run_figures(tmp_path, names=["fig6"], plot=False)
    assert [p.name for p in written] == ["fig6.csv"]
    table = read_table(tmp_path / "fig6.csv")
    assert table.header[0] == "k"
    assert "series_refl" in table.header
    assert "parallel_trans" in table.header
    assert len(table.rows) == 1024


def test_entropy_figure_columns(tmp_path):
    written = run_figures(tmp_path, names=["fig12"], plot=False)
    table = read_table(written[0])
    assert table.header == ("k", "shannon", "renyi_0.5", "renyi_2", "renyi_4",
                            "tsallis_0.5", "tsallis_2", "tsallis_4")
    values = np.array([row[1:] for row in table.rows], dtype=float)
    assert np.all(values >= -1e-9)
    # at each wavenumber the five channels bound the entropy by log2(5)
    assert np.max(values[:, 0]) <= math.log2(5) + 1e-9
