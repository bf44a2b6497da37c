"""Wavenumber sweeps, period averages, validation and bundled datasets.

This layer turns the engine and the closed forms into delimited tables.
All tables are written deterministically: fixed row and column order,
shortest round-trip float formatting, ``.`` decimal separator, LF line
endings, UTF-8. Parallel evaluation only partitions work across rows and
never changes any computed value, so serial and parallel runs emit
byte-identical files.

Rows of an engine-backed sweep where the linear system is singular are
retried once at ``k + 1e-9 * K`` (K the inferred period, else the top of
the sweep range); a second failure leaves the literal token ``NA`` in
every data cell of that row.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import closed_forms as cf
from .engine import (
    SingularSystem,
    probabilities_from_amplitudes,
    scattering_matrix,
)
from .entropy import (
    EntropyMeasure,
    NoPeriod,
    PeriodSpec,
    infer_period,
    average_entropy,
    periodic_average,
)
from .graphs import (
    MetricGraph,
    OpenGraph,
    double_edge_graph,
    complete_graph,
    cycle_graph,
    load_graph,
    wheel_graph,
)

DEFAULT_SPAN = 4.0 * math.pi
DEFAULT_SAMPLES = 1024


class ConfigError(ValueError):
    """A sweep or average configuration does not follow the schema."""


# ---------------------------------------------------------------------------
# deterministic tables

def format_cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class Table:
    header: tuple[str, ...]
    rows: tuple[tuple, ...]

    def to_csv_bytes(self) -> bytes:
        lines = [",".join(self.header)]
        lines.extend(",".join(format_cell(c) for c in row) for row in self.rows)
        return ("\n".join(lines) + "\n").encode("utf-8")

    def write(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_csv_bytes())

    def column(self, name: str) -> list:
        idx = self.header.index(name)
        return [row[idx] for row in self.rows]


def default_kgrid(samples: int = DEFAULT_SAMPLES,
                  span: float = DEFAULT_SPAN) -> np.ndarray:
    """Uniform grid on (0, span], endpoint included, zero excluded."""
    return np.arange(1, samples + 1) * (span / samples)


# ---------------------------------------------------------------------------
# closed-form family cases

@dataclass(frozen=True)
class FamilyCase:
    """One concrete member of a formula family, with its engine twin.

    ``channels`` names the distinct closed-form channels; ``expand`` maps
    each engine channel (lead order of ``og``) onto a distinct channel,
    which also spells out degeneracies such as the single rim amplitude
    of a wheel.
    """

    family: str
    label: str
    n: int
    og: OpenGraph
    channels: tuple[str, ...]
    expand: tuple[int, ...]
    column: Callable[[np.ndarray], np.ndarray]

    def full_column(self, ks: np.ndarray) -> np.ndarray:
        """Engine-aligned amplitudes, shape (len(ks), len(og.leads))."""
        return self.column(np.asarray(ks))[..., list(self.expand)]


def _two_port_stack(tp: cf.TwoPort, ks: np.ndarray) -> np.ndarray:
    out = np.empty(ks.shape + (2,), dtype=complex)
    out[..., 0] = tp.refl
    out[..., 1] = tp.trans
    return out


def _series_case(n: int) -> FamilyCase:
    edges = []
    for j in range(1, n + 1):
        a, b = 2 * j - 1, 2 * j
        edges += [(a, b, 1.0), (a, b, 1.0)]
        if j < n:
            edges.append((b, b + 1, 1.0))
    og = OpenGraph(MetricGraph(2 * n, tuple(edges)), (1, 2 * n))

    def column(ks: np.ndarray) -> np.ndarray:
        z = cf.phase(ks)
        block = cf.double_edge_equal(z)
        tp = cf.series_chain([block] * n, z)
        return _two_port_stack(tp, ks)

    return FamilyCase("series", f"n={n}", n, og, ("refl", "trans"), (0, 1),
                      column)


def _parallel_case(n: int) -> FamilyCase:
    edges = []
    for j in range(n):
        a, b = 3 + 2 * j, 4 + 2 * j
        edges.append((1, a, 1.0))
        edges += [(a, b, 1.0), (a, b, 1.0)]
        edges.append((b, 2, 1.0))
    og = OpenGraph(MetricGraph(2 + 2 * n, tuple(edges)), (1, 2))

    def column(ks: np.ndarray) -> np.ndarray:
        z = cf.phase(ks)
        block = cf.double_edge_equal(z)
        tp = cf.parallel_identical(block, n, z)
        return _two_port_stack(tp, ks)

    return FamilyCase("parallel", f"n={n}", n, og, ("refl", "trans"), (0, 1),
                      column)


def _double_edge_case(length_a: float, length_b: float, label: str) -> FamilyCase:
    og = double_edge_graph(length_a, length_b)

    def column(ks: np.ndarray) -> np.ndarray:
        z1 = cf.phase(ks, length_a / 2.0)
        z2 = cf.phase(ks, length_b / 2.0)
        return _two_port_stack(cf.double_edge_pair(z1, z2), ks)

    return FamilyCase("pvv", label, 2, og, ("refl", "trans"), (0, 1),
                      column)


def _cycle_case(n: int) -> FamilyCase:
    og = cycle_graph(n)
    channels = ("refl",) + tuple(f"trans_{v}" for v in range(2, n + 1))

    def column(ks: np.ndarray) -> np.ndarray:
        return cf.cycle_column(n, cf.phase(ks))

    return FamilyCase("cycle", f"n={n}", n, og, channels, tuple(range(n)),
                      column)


def _wheel_case(n: int) -> FamilyCase:
    og = wheel_graph(n)

    def column(ks: np.ndarray) -> np.ndarray:
        return _two_port_stack(cf.wheel_amplitudes(n, cf.phase(ks)), ks)

    return FamilyCase("wheel", f"n={n}", n, og, ("refl", "trans"),
                      (0,) + (1,) * (n - 1), column)


def _complete_case(n: int) -> FamilyCase:
    og = complete_graph(n)

    def column(ks: np.ndarray) -> np.ndarray:
        return _two_port_stack(cf.complete_amplitudes(n, cf.phase(ks)), ks)

    return FamilyCase("complete", f"n={n}", n, og, ("refl", "trans"),
                      (0,) + (1,) * (n - 1), column)


_CASE_BUILDERS: dict[str, Callable[[int], FamilyCase]] = {
    "series": _series_case,
    "parallel": _parallel_case,
    "cycle": _cycle_case,
    "wheel": _wheel_case,
    "complete": _complete_case,
}

_FAMILY_SIZES: dict[str, tuple[int, ...]] = {
    "series": tuple(range(1, 9)),
    "parallel": tuple(range(1, 9)),
    "pvv": (),
    "cycle": tuple(range(3, 9)),
    "wheel": tuple(range(4, 8)),
    "complete": tuple(range(2, 7)),
}

FAMILY_NAMES = tuple(_FAMILY_SIZES)


def family_case(family: str, n: int) -> FamilyCase:
    if family == "pvv":
        return _double_edge_case(1.0, 1.0, "lengths 1:1")
    try:
        builder = _CASE_BUILDERS[family]
    except KeyError:
        raise ConfigError(f"unknown family {family!r}") from None
    sizes = _FAMILY_SIZES[family]
    if sizes and not (sizes[0] <= n <= sizes[-1]):
        raise ConfigError(f"{family}: n={n} outside {sizes[0]}..{sizes[-1]}")
    return builder(n)


def double_edge_case(length_a: float = 1.0, length_b: float = 1.0) -> FamilyCase:
    if length_a <= 0 or length_b <= 0:
        raise ConfigError("pvv lengths must be positive")
    ratio = f"{length_a:g}:{length_b:g}"
    return _double_edge_case(float(length_a), float(length_b), f"lengths {ratio}")


def validation_cases(family: str = "all") -> list[FamilyCase]:
    names = FAMILY_NAMES if family == "all" else (family,)
    cases: list[FamilyCase] = []
    for name in names:
        if name not in _FAMILY_SIZES:
            raise ConfigError(f"unknown family {name!r}")
        if name == "pvv":
            cases.append(_double_edge_case(1.0, 1.0, "lengths 1:1"))
            cases.append(_double_edge_case(1.0, 1.5, "lengths 2:3"))
        else:
            cases.extend(_CASE_BUILDERS[name](n) for n in _FAMILY_SIZES[name])
    return cases


def _retry_scale(og: OpenGraph) -> float:
    try:
        return infer_period(e.length for e in og.graph.edges)
    except NoPeriod:
        return DEFAULT_SPAN


def engine_column(case: FamilyCase, k: float) -> tuple[float, np.ndarray]:
    """Engine amplitudes toward the entrance lead, as ``(used_k, column)``.

    A singular system is retried once at a detuned wavenumber. Cycles,
    wheels, complete graphs and parallel pairs all host sine modes that
    vanish on every vertex when ``k * length`` hits a multiple of pi;
    those modes never couple to the leads, so the scattering amplitudes
    are continuous across the point even though the linear system
    degenerates exactly on it.
    """
    used = float(k)
    try:
        sm = scattering_matrix(case.og, used)
    except SingularSystem:
        used = float(k) + 1e-9 * _retry_scale(case.og)
        sm = scattering_matrix(case.og, used)
    return used, sm.matrix[:, case.og.entrance]


def family_probabilities(case: FamilyCase, ks: np.ndarray) -> np.ndarray:
    """Exit probabilities per wavenumber, shape (len(ks), channels).

    Uses the vectorized closed form and falls back to the engine at
    wavenumbers where the formula degenerates (cycle branch points, for
    instance at multiples of pi over the edge length).
    """
    ks = np.asarray(ks, dtype=float)
    try:
        amps = case.full_column(ks)
    except (cf.DegenerateBranch, cf.DenominatorVanishes):
        rows = []
        for k in ks:
            try:
                rows.append(case.full_column(np.array([k]))[0])
            except (cf.DegenerateBranch, cf.DenominatorVanishes):
                rows.append(engine_column(case, k)[1])
        amps = np.stack(rows)
    return np.stack([probabilities_from_amplitudes(row) for row in amps])


def _chunked(fn: Callable[[np.ndarray], np.ndarray], ks: np.ndarray,
             workers: int) -> np.ndarray:
    if workers <= 1 or len(ks) < 8:
        return fn(ks)
    chunks = np.array_split(ks, workers * 4)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(fn, chunks))
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# engine-backed sweeps

_SWEEP_KEYS = {"k_min", "k_max", "samples", "entrance", "measures", "outputs"}
_OUTPUT_TAGS = ("probabilities", "entropy", "amplitudes_re_im")


@dataclass(frozen=True)
class SweepConfig:
    k_min: float
    k_max: float
    samples: int
    entrance: int | None = None
    measures: tuple[EntropyMeasure, ...] = (EntropyMeasure("shannon"),)
    outputs: tuple[str, ...] = ("probabilities", "entropy")

    def __post_init__(self) -> None:
        if not (0 < self.k_min < self.k_max):
            raise ConfigError("need 0 < k_min < k_max")
        if self.samples < 2:
            raise ConfigError("need at least 2 samples")
        for tag in self.outputs:
            if tag not in _OUTPUT_TAGS:
                raise ConfigError(f"unknown output tag {tag!r}")
        if "entropy" in self.outputs and not self.measures:
            raise ConfigError("entropy output needs at least one measure")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict):
            raise ConfigError("sweep config must be an object")
        extra = set(data) - _SWEEP_KEYS
        if extra:
            raise ConfigError(f"unknown fields {sorted(extra)}")
        for key in ("k_min", "k_max", "samples"):
            if key not in data:
                raise ConfigError(f"missing field {key!r}")
        measures = tuple(
            EntropyMeasure.parse(m) for m in data.get("measures", ["shannon"])
        )
        outputs = tuple(data.get("outputs", ["probabilities", "entropy"]))
        entrance = data.get("entrance")
        return cls(float(data["k_min"]), float(data["k_max"]),
                   int(data["samples"]),
                   None if entrance is None else int(entrance),
                   measures, outputs)

    def kgrid(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.samples)


def run_sweep(og: OpenGraph, cfg: SweepConfig, workers: int = 1) -> Table:
    """Engine sweep of one open graph, one row per wavenumber."""
    if cfg.entrance is not None and not (0 <= cfg.entrance < len(og.leads)):
        raise ConfigError(f"entrance index {cfg.entrance} out of range")
    channel = cfg.entrance if cfg.entrance is not None else og.entrance
    nleads = len(og.leads)
    header: list[str] = ["k"]
    if "probabilities" in cfg.outputs:
        header += [f"p_{j}" for j in range(1, nleads + 1)]
    if "entropy" in cfg.outputs:
        header += [m.column_name for m in cfg.measures]
    if "amplitudes_re_im" in cfg.outputs:
        for j in range(1, nleads + 1):
            header += [f"sigma_{j}_re", f"sigma_{j}_im"]
    try:
        retry_scale = infer_period(e.length for e in og.graph.edges)
    except NoPeriod:
        retry_scale = cfg.k_max

    def row(k: float) -> tuple:
        used = float(k)
        try:
            sm = scattering_matrix(og, used)
        except SingularSystem:
            used = float(k) + 1e-9 * retry_scale
            try:
                sm = scattering_matrix(og, used)
            except SingularSystem:
                return (float(k),) + (None,) * (len(header) - 1)
        col = sm.matrix[:, channel]
        cells: list = [used]
        p = None
        if "probabilities" in cfg.outputs or "entropy" in cfg.outputs:
            p = probabilities_from_amplitudes(col)
        if "probabilities" in cfg.outputs:
            cells += [float(x) for x in p]
        if "entropy" in cfg.outputs:
            cells += [float(m.evaluate(p)) for m in cfg.measures]
        if "amplitudes_re_im" in cfg.outputs:
            for amp in col:
                cells += [float(amp.real), float(amp.imag)]
        return tuple(cells)

    ks = cfg.kgrid()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(row, ks))
    else:
        rows = [row(k) for k in ks]
    return Table(tuple(header), tuple(rows))


# ---------------------------------------------------------------------------
# period averages

_AVERAGE_KEYS = {"measure", "parameter_grid", "period", "families", "tol"}
_FAMILY_ENTRY_KEYS = ({"family", "n"}, {"family", "n_min", "n_max"}, {"graph"})


@dataclass(frozen=True)
class AverageJob:
    label: str
    n: int
    case: FamilyCase | None
    og: OpenGraph | None


@dataclass(frozen=True)
class AverageConfig:
    measure_kind: str
    parameter_grid: tuple[float, ...]
    period: PeriodSpec
    jobs: tuple[AverageJob, ...]
    tol: float = 1e-6

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path = ".") -> "AverageConfig":
        if not isinstance(data, dict):
            raise ConfigError("average config must be an object")
        extra = set(data) - _AVERAGE_KEYS
        if extra:
            raise ConfigError(f"unknown fields {sorted(extra)}")
        kind = data.get("measure")
        if kind not in ("renyi", "tsallis"):
            raise ConfigError("measure must be 'renyi' or 'tsallis'")
        grid = tuple(float(x) for x in data.get("parameter_grid", ()))
        if not grid:
            raise ConfigError("parameter_grid must be nonempty")
        period_raw = data.get("period", "infer")
        if period_raw == "infer":
            period = PeriodSpec.inferred()
        else:
            period = PeriodSpec.explicit(float(period_raw))
        entries = data.get("families")
        if not entries:
            raise ConfigError("families must be nonempty")
        jobs = []
        for entry in entries:
            if not isinstance(entry, dict) or \
                    not any(set(entry) == ks for ks in _FAMILY_ENTRY_KEYS):
                raise ConfigError(f"bad family entry {entry!r}")
            if "graph" in entry:
                og = load_graph(Path(base_dir) / entry["graph"])
                jobs.append(AverageJob(Path(entry["graph"]).stem,
                                       og.graph.vertex_count, None, og))
            elif "n" in entry:
                case = family_case(entry["family"], int(entry["n"]))
                jobs.append(AverageJob(case.family, case.n, case, None))
            else:
                for n in range(int(entry["n_min"]), int(entry["n_max"]) + 1):
                    case = family_case(entry["family"], n)
                    jobs.append(AverageJob(case.family, case.n, case, None))
        return cls(kind, grid, period, tuple(jobs),
                   float(data.get("tol", 1e-6)))


def _measure_for(kind: str, value: float) -> EntropyMeasure:
    """Grid values within 1e-9 of 1 select the Shannon limit."""
    if abs(value - 1.0) < 1e-9:
        return EntropyMeasure("shannon")
    return EntropyMeasure(kind, value)


def average_for_case(case: FamilyCase, measure: EntropyMeasure,
                     period: PeriodSpec, tol: float) -> tuple[float, float]:
    """Closed-form-backed mean entropy of one family member."""
    K = period.value if period.kind == "explicit" else \
        infer_period(e.length for e in case.og.graph.edges)

    def integrand(ks: np.ndarray) -> np.ndarray:
        p = family_probabilities(case, ks)
        return np.asarray(measure.evaluate(p), dtype=float)

    return periodic_average(integrand, K, tol=tol)


def run_average(cfg: AverageConfig) -> Table:
    """One row per (family member, grid parameter)."""
    header = ("family", "n", "parameter", "value", "quad_error_estimate")
    rows = []
    for job in cfg.jobs:
        for value in cfg.parameter_grid:
            measure = _measure_for(cfg.measure_kind, value)
            if job.case is not None:
                mean, err = average_for_case(job.case, measure, cfg.period,
                                             cfg.tol)
            else:
                mean, err = average_entropy(job.og, measure, cfg.period,
                                            tol=cfg.tol)
            rows.append((job.label, job.n, float(value), mean, err))
    return Table(header, tuple(rows))


# ---------------------------------------------------------------------------
# closed form versus engine validation

@dataclass(frozen=True)
class ValidationRow:
    family: str
    label: str
    max_deviation: float
    skipped: int
    passed: bool


def validate_case(case: FamilyCase, tol: float = 1e-8,
                  samples: int = 512, span: float = DEFAULT_SPAN) -> ValidationRow:
    """Compare formula and engine pointwise over a uniform grid.

    Grid points where the formula degenerates are skipped and counted.
    Where the engine retries off a singular point, the formula is
    re-evaluated at the retried wavenumber so both sides see the same k.
    """
    ks = default_kgrid(samples, span)
    worst = 0.0
    skipped = 0
    for k in ks:
        try:
            used, engine_amps = engine_column(case, k)
            closed = case.full_column(np.array([used]))[0]
        except (cf.DegenerateBranch, cf.DenominatorVanishes):
            skipped += 1
            continue
        dev = float(np.max(np.abs(closed - engine_amps)))
        worst = max(worst, dev)
    return ValidationRow(case.family, case.label, worst, skipped, worst < tol)


def validate_families(family: str = "all", tol: float = 1e-8,
                      samples: int = 512) -> list[ValidationRow]:
    return [validate_case(c, tol, samples) for c in validation_cases(family)]


# ---------------------------------------------------------------------------
# bundled datasets

FIGURE_MEASURES = tuple(
    EntropyMeasure.parse(name)
    for name in ("shannon", "renyi_0.5", "renyi_2", "renyi_4",
                 "tsallis_0.5", "tsallis_2", "tsallis_4")
)
FIGURE_PARAM_GRID = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0)


def _distinct_first(case: FamilyCase) -> list[int]:
    firsts = []
    for j in range(len(case.channels)):
        firsts.append(case.expand.index(j))
    return firsts


def _prob_block(case: FamilyCase, ks: np.ndarray, workers: int) -> np.ndarray:
    def fn(chunk: np.ndarray) -> np.ndarray:
        return family_probabilities(case, chunk)

    full = _chunked(fn, ks, workers)
    return full[:, _distinct_first(case)]


def _entropy_block(case: FamilyCase, ks: np.ndarray,
                   measures: Sequence[EntropyMeasure],
                   workers: int) -> np.ndarray:
    def fn(chunk: np.ndarray) -> np.ndarray:
        p = family_probabilities(case, chunk)
        cols = [np.asarray(m.evaluate(p), dtype=float) for m in measures]
        return np.stack(cols, axis=-1)

    return _chunked(fn, ks, workers)


def _sweep_style_table(parts: list[tuple[str, np.ndarray, tuple[str, ...]]],
                       ks: np.ndarray) -> Table:
    header = ["k"]
    blocks = []
    for prefix, block, names in parts:
        header += [f"{prefix}{name}" for name in names]
        blocks.append(block)
    data = np.concatenate(blocks, axis=1)
    rows = tuple(
        (float(k),) + tuple(float(x) for x in data[i])
        for i, k in enumerate(ks)
    )
    return Table(tuple(header), rows)


def _coefficient_figure(cases: list[tuple[str, FamilyCase]],
                        workers: int) -> Table:
    ks = default_kgrid()
    parts = [
        (prefix, _prob_block(case, ks, workers), case.channels)
        for prefix, case in cases
    ]
    return _sweep_style_table(parts, ks)


def _entropy_figure(cases: list[tuple[str, FamilyCase]], workers: int) -> Table:
    ks = default_kgrid()
    names = tuple(m.column_name for m in FIGURE_MEASURES)
    parts = [
        (prefix, _entropy_block(case, ks, FIGURE_MEASURES, workers), names)
        for prefix, case in cases
    ]
    return _sweep_style_table(parts, ks)


def _average_figure(kind: str, members: list[tuple[str, int]]) -> Table:
    jobs = tuple(
        AverageJob(family, n, family_case(family, n), None)
        for family, n in members
    )
    cfg = AverageConfig(kind, FIGURE_PARAM_GRID, PeriodSpec.inferred(), jobs)
    return run_average(cfg)


def build_fig6(workers: int = 1) -> Table:
    return _coefficient_figure(
        [("series_", family_case("series", 8)),
         ("parallel_", family_case("parallel", 8))], workers)


def build_fig7(workers: int = 1) -> Table:
    return _entropy_figure(
        [("series_", family_case("series", 8)),
         ("parallel_", family_case("parallel", 8))], workers)


def build_fig9(workers: int = 1) -> Table:
    return _coefficient_figure(
        [("c7_", family_case("cycle", 7)), ("c8_", family_case("cycle", 8))],
        workers)


def build_fig10(workers: int = 1) -> Table:
    return _entropy_figure(
        [("c7_", family_case("cycle", 7)), ("c8_", family_case("cycle", 8))],
        workers)


def build_fig11(workers: int = 1) -> Table:
    return _coefficient_figure([("", family_case("wheel", 5))], workers)


def build_fig12(workers: int = 1) -> Table:
    return _entropy_figure([("", family_case("wheel", 5))], workers)


def build_fig13(workers: int = 1) -> Table:
    return _coefficient_figure([("", family_case("complete", 4))], workers)


def build_fig14(workers: int = 1) -> Table:
    return _entropy_figure([("", family_case("complete", 4))], workers)


def _series_parallel_members() -> list[tuple[str, int]]:
    return [("series", n) for n in (1, 2, 4, 8)] + \
        [("parallel", n) for n in (1, 2, 4, 8)]


def _polygon_members() -> list[tuple[str, int]]:
    return [("cycle", n) for n in range(3, 9)] + \
        [("wheel", n) for n in range(4, 8)] + \
        [("complete", n) for n in range(2, 7)]


def build_fig15(workers: int = 1) -> Table:
    return _average_figure("renyi", _series_parallel_members())


def build_fig16(workers: int = 1) -> Table:
    return _average_figure("tsallis", _series_parallel_members())


def build_fig17(workers: int = 1) -> Table:
    return _average_figure("renyi", _polygon_members())


def build_fig18(workers: int = 1) -> Table:
    return _average_figure("tsallis", _polygon_members())


FIGURES: dict[str, Callable[[int], Table]] = {
    "fig6": build_fig6,
    "fig7": build_fig7,
    "fig9": build_fig9,
    "fig10": build_fig10,
    "fig11": build_fig11,
    "fig12": build_fig12,
    "fig13": build_fig13,
    "fig14": build_fig14,
    "fig15": build_fig15,
    "fig16": build_fig16,
    "fig17": build_fig17,
    "fig18": build_fig18,
}


def run_figures(out_dir: str | Path, names: Sequence[str] | None = None,
                workers: int = 1, plot: bool = True) -> list[Path]:
    """Build the bundled datasets, one CSV (and optionally PNG) each."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    chosen = list(FIGURES) if names is None else list(names)
    for name in chosen:
        if name not in FIGURES:
            raise ConfigError(f"unknown figure {name!r}")
    if plot:
        from .plotting import render_table
    written = []
    for name in chosen:
        table = FIGURES[name](workers)
        csv_path = out / f"{name}.csv"
        table.write(csv_path)
        written.append(csv_path)
        if plot:
            png_path = out / f"{name}.png"
            render_table(table, png_path, title=name)
            written.append(png_path)
    return written
