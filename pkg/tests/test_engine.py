"""Linear-system scattering engine against exact values and the bounce
summation oracle."""

import math

import numpy as np
import pytest

from _support import path_sum_matrix, random_open_graph
from qgscatter.engine import (
    NonPositiveWavenumber,
    NotALeadVertex,
    ScatteringMatrix,
    SingularSystem,
    UnitarityViolation,
    assemble_system,
    greens_function,
    probabilities,
    probabilities_from_amplitudes,
    scattering_amplitude,
    scattering_matrix,
    solve_families,
)
from qgscatter.graphs import (
    DIRICHLET,
    MetricGraph,
    OpenGraph,
    complete_graph,
    cycle_graph,
    double_edge_graph,
    interval_graph,
    wheel_graph,
)

TWO_PI = 2.0 * math.pi


def test_system_has_unit_diagonal_and_edge_dimension():
    og = complete_graph(4)
    system = assemble_system(og, 1, 1.3)
    assert system.dimension == 2 * len(og.graph.edges) == 12
    assert np.allclose(np.diag(system.matrix), 1.0)


def test_wavenumber_must_be_positive():
    og = cycle_graph(3)
    with pytest.raises(NonPositiveWavenumber):
        assemble_system(og, 1, 0.0)
    with pytest.raises(NonPositiveWavenumber):
        scattering_matrix(og, -1.0)


def test_exit_and_entrance_need_leads():
    og = OpenGraph(MetricGraph(2, ((1, 2, 1.0),)), (1,))
    with pytest.raises(NotALeadVertex):
        assemble_system(og, 2, 1.0)
    with pytest.raises(NotALeadVertex):
        scattering_amplitude(og, 1, 2, 1.0)


def test_solution_diagnostics_are_sane():
    system = assemble_system(cycle_graph(3), 1, 1.1)
    sol = solve_families(system)
    assert sol.residual < 1e-12
    assert sol.condition >= 1.0


def test_unitarity_and_reciprocity_on_random_graphs():
    rng = np.random.default_rng(42)
    for _ in range(25):
        og = random_open_graph(rng)
        k = float(rng.uniform(0.4, 9.0))
        sm = scattering_matrix(og, k)
        colsums = np.sum(np.abs(sm.matrix) ** 2, axis=0)
        assert np.max(np.abs(colsums - 1.0)) < 1e-8
        assert sm.asymmetry() < 1e-9


def test_matrix_entry_matches_single_amplitude():
    og = wheel_graph(5)
    k = 1.7
    sm = scattering_matrix(og, k)
    assert sm.amplitude(3, 1) == pytest.approx(
        scattering_amplitude(og, 3, 1, k), abs=1e-13)


def test_wavenumber_periodicity_for_unit_lengths():
    og = complete_graph(3)
    k = 1.1
    a = scattering_matrix(og, k).matrix
    b = scattering_matrix(og, k + TWO_PI).matrix
    assert np.max(np.abs(a - b)) < 1e-10


def test_cyclic_graphs_are_singular_at_trapped_mode_wavenumbers():
    # A sine mode that vanishes on every vertex fits whenever k times
    # the edge length hits pi on an even cycle, or 2 pi on any cycle.
    with pytest.raises(SingularSystem):
        scattering_matrix(cycle_graph(4), math.pi)
    with pytest.raises(SingularSystem):
        scattering_matrix(cycle_graph(3), TWO_PI)
    with pytest.raises(SingularSystem):
        scattering_matrix(double_edge_graph(1.0, 1.0), math.pi)


def test_odd_cycles_are_regular_at_odd_multiples_of_pi():
    for n in (3, 5, 7):
        sm = scattering_matrix(cycle_graph(n), math.pi)
        p = probabilities(sm, 1)
        assert p[0] == pytest.approx(1.0, abs=1e-10)
        assert np.max(p[1:]) < 1e-10


def test_wheel_hub_amplitudes_near_unit_phase():
    # exact values -3/5 and 2/5 hold in the limit k -> 2 pi, which is a
    # trapped-mode point; probe just off it
    og = wheel_graph(5)
    sm = scattering_matrix(og, TWO_PI * (1.0 + 1e-9))
    assert sm.amplitude(1, 1) == pytest.approx(-0.6, abs=1e-5)
    for v in (2, 3, 4, 5):
        assert sm.amplitude(v, 1) == pytest.approx(0.4, abs=1e-5)


def test_complete_graph_amplitudes_near_unit_phase():
    og = complete_graph(4)
    sm = scattering_matrix(og, TWO_PI * (1.0 + 1e-9))
    assert sm.amplitude(1, 1) == pytest.approx(-0.5, abs=1e-5)
    assert sm.amplitude(2, 1) == pytest.approx(0.5, abs=1e-5)


def test_parallel_pair_transmits_fully_near_unit_phase():
    og = double_edge_graph(1.0, 1.0)
    sm = scattering_matrix(og, TWO_PI * (1.0 + 1e-9))
    assert abs(sm.amplitude(1, 1)) < 1e-5
    assert abs(sm.amplitude(2, 1)) == pytest.approx(1.0, abs=1e-5)


def test_dirichlet_wall_blocks_transmission():
    g = MetricGraph(3, ((1, 2, 1.0), (2, 3, 1.0)),
                    boundary_overrides={2: DIRICHLET})
    og = OpenGraph(g, (1, 3))
    sm = scattering_matrix(og, 1.3)
    assert abs(sm.amplitude(3, 1)) < 1e-14
    assert abs(sm.amplitude(1, 1)) == pytest.approx(1.0, abs=1e-12)


def test_bounce_summation_agrees_on_unit_length_triangle():
    og = cycle_graph(3)
    for k in (0.777, 1.618, 2.451):
        sm = scattering_matrix(og, k)
        ps = path_sum_matrix(og, k, 200)
        assert np.max(np.abs(sm.matrix - ps)) < 1e-12


def test_bounce_summation_agrees_with_varied_lengths():
    # a tree has no trapped modes, so any lengths converge fast; the
    # split triangle needs a wavenumber where the near-trapped cycle
    # mode leaks quickly
    star = OpenGraph(MetricGraph(4, ((1, 2, 0.7), (1, 3, 1.3), (1, 4, 1.9))),
                     (2, 3, 4))
    tri = OpenGraph(MetricGraph(3, ((1, 2, 1.0), (2, 3, 1.4), (1, 3, 1.8))),
                    (1, 2, 3))
    for og, k in ((star, 0.777), (star, 2.0), (tri, 2.0)):
        dev = np.max(np.abs(scattering_matrix(og, k).matrix
                            - path_sum_matrix(og, k, 200)))
        assert dev < 1e-10


def test_probabilities_renormalize_small_defects():
    column = np.array([math.sqrt(0.5), math.sqrt(0.5) * (1 + 1e-9)],
                      dtype=complex)
    p = probabilities_from_amplitudes(column)
    assert p.sum() == pytest.approx(1.0, abs=1e-15)


def test_probabilities_reject_large_defects():
    with pytest.raises(UnitarityViolation):
        probabilities_from_amplitudes(np.array([1.0, 0.5], dtype=complex))


def test_probabilities_pick_the_entrance_column():
    og = cycle_graph(4)
    sm = scattering_matrix(og, 1.9)
    p = probabilities(sm, 3)
    expected = probabilities_from_amplitudes(sm.matrix[:, 2])
    assert np.allclose(p, expected)


def test_greens_function_composes_direct_and_scattered_waves():
    og = interval_graph([1.0])
    k = 1.7
    sigma_11 = scattering_amplitude(og, 1, 1, k)
    g = greens_function(og, 1, 1, k, x_i=0.3, x_f=0.7)
    expected = (np.exp(1j * k * 0.4)
                + sigma_11 * np.exp(1j * k * 1.0)) / (1j * k)
    assert g == pytest.approx(expected, abs=1e-13)

    sigma_21 = scattering_amplitude(og, 2, 1, k)
    g_cross = greens_function(og, 2, 1, k, x_i=0.25, x_f=0.5)
    expected_cross = sigma_21 * np.exp(1j * k * 0.75) / (1j * k)
    assert g_cross == pytest.approx(expected_cross, abs=1e-13)


def test_scattering_matrix_records_grid_metadata():
    og = cycle_graph(3)
    sm = scattering_matrix(og, 2.2)
    assert isinstance(sm, ScatteringMatrix)
    assert sm.k == 2.2
    assert sm.leads == (1, 2, 3)
    assert sm.matrix.shape == (3, 3)
