"""Scattering coefficients and entropies of open metric graphs."""

from .graphs import (
    Custom,
    DIRICHLET,
    Edge,
    GraphError,
    GraphFormatError,
    MetricGraph,
    NEUMANN,
    OpenGraph,
    UnitarityWarning,
    double_edge_graph,
    complete_graph,
    cycle_graph,
    graph_from_dict,
    interval_graph,
    load_graph,
    vertex_amplitudes,
    wheel_graph,
)
from .engine import (
    EngineError,
    ScatteringMatrix,
    SingularSystem,
    UnitarityViolation,
    greens_function,
    probabilities,
    scattering_amplitude,
    scattering_matrix,
)
from .closed_forms import (
    ClosedFormError,
    DegenerateBranch,
    DenominatorVanishes,
    TwoPort,
    double_edge_pair,
    double_edge_equal,
    complete_amplitudes,
    cycle_column,
    cycle_reflection,
    cycle_transmission,
    parallel_identical,
    parallel_pair,
    phase,
    series_chain,
    series_identical,
    series_pair,
    wheel_amplitudes,
)
from .entropy import (
    BadParameter,
    EntropyError,
    EntropyMeasure,
    NoPeriod,
    PeriodSpec,
    ProbabilityVector,
    QuadratureStalled,
    average_entropy,
    infer_period,
    periodic_average,
    renyi,
    scattering_entropy,
    shannon,
    tsallis,
)
from .sweeps import (
    AverageConfig,
    ConfigError,
    SweepConfig,
    Table,
    family_case,
    family_probabilities,
    run_average,
    run_figures,
    run_sweep,
    validate_families,
)

__version__ = "0.1.0"

__all__ = [
    "AverageConfig",
    "BadParameter",
    "ClosedFormError",
    "ConfigError",
    "Custom",
    "DIRICHLET",
    "DegenerateBranch",
    "DenominatorVanishes",
    "Edge",
    "EngineError",
    "EntropyError",
    "EntropyMeasure",
    "GraphError",
    "GraphFormatError",
    "MetricGraph",
    "NEUMANN",
    "NoPeriod",
    "OpenGraph",
    "PeriodSpec",
    "ProbabilityVector",
    "QuadratureStalled",
    "ScatteringMatrix",
    "SingularSystem",
    "SweepConfig",
    "Table",
    "TwoPort",
    "UnitarityViolation",
    "UnitarityWarning",
    "average_entropy",
    "double_edge_pair",
    "double_edge_equal",
    "double_edge_graph",
    "complete_amplitudes",
    "complete_graph",
    "cycle_column",
    "cycle_graph",
    "cycle_reflection",
    "cycle_transmission",
    "family_case",
    "family_probabilities",
    "graph_from_dict",
    "greens_function",
    "infer_period",
    "interval_graph",
    "load_graph",
    "parallel_identical",
    "parallel_pair",
    "periodic_average",
    "phase",
    "probabilities",
    "renyi",
    "run_average",
    "run_figures",
    "run_sweep",
    "scattering_amplitude",
    "scattering_entropy",
    "scattering_matrix",
    "series_chain",
    "series_identical",
    "series_pair",
    "shannon",
    "tsallis",
    "validate_families",
    "vertex_amplitudes",
    "wheel_graph",
]
