"""Metric graph model for open scattering problems.

A metric graph is a set of vertices joined by edges of positive length.
Attaching semi-infinite leads to some vertices opens the graph: each lead
is a scattering channel. Vertices carry boundary conditions that fix the
local reflection and transmission amplitudes used by the wave propagation
model.

Vertex ids are 1-based. Parallel edges are allowed; self-loops can be
represented but are rejected by :func:`validate_graph`.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Union


class GraphError(ValueError):
    """Base class for graph construction and validation failures."""


class BadEndpoint(GraphError):
    """An edge refers to a vertex id outside 1..vertex_count."""


class NonPositiveLength(GraphError):
    """An edge length is zero, negative or not finite."""


class SelfLoop(GraphError):
    """An edge joins a vertex to itself."""


class BadLead(GraphError):
    """A lead list entry or the entrance index is invalid."""


class GraphFormatError(ValueError):
    """A graph description file does not follow the expected schema."""


class UnitarityWarning(UserWarning):
    """Custom vertex amplitudes deviate from local unitarity."""


NEUMANN = "neumann"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Custom:
    """Explicit vertex amplitudes, bypassing the boundary-condition rules.

    The reflection amplitude ``r`` applies to the incoming edge and the
    transmission amplitude ``t`` to every other incidence. Useful for
    transparent junctions (``Custom(0, 1)``) and for vertices that stand
    in for a renormalized subgraph, whose effective amplitudes may be
    evaluated per wavenumber and injected here.
    """

    r: complex
    t: complex = 0j


Boundary = Union[str, Custom]


class Edge(NamedTuple):
    a: int
    b: int
    length: float


@dataclass(frozen=True)
class VertexAmplitudes:
    """Local reflection and transmission amplitudes of one vertex."""

    r: complex
    t: complex
    degree: int

    def unitarity_defect(self) -> float:
        """Return ``| |r|^2 + (d-1)|t|^2 - 1 |`` for this vertex."""
        return abs(abs(self.r) ** 2 + (self.degree - 1) * abs(self.t) ** 2 - 1.0)


def _check_boundary_value(value: Boundary, label: str) -> None:
    if isinstance(value, Custom):
        return
    if value not in (NEUMANN, DIRICHLET):
        raise GraphError(f"{label}: unknown boundary condition {value!r}")


@dataclass(frozen=True)
class MetricGraph:
    """A compact metric graph.

    Parameters
    ----------
    vertex_count:
        Number of vertices, labelled 1..vertex_count.
    edges:
        Iterable of ``(a, b, length)`` triples. Parallel edges are kept
        as distinct entries.
    default_boundary:
        Boundary condition for vertices without an override. One of
        ``NEUMANN``, ``DIRICHLET`` or a :class:`Custom` instance.
    boundary_overrides:
        Mapping from vertex id to a boundary condition.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    default_boundary: Boundary = NEUMANN
    boundary_overrides: dict[int, Boundary] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise GraphError("vertex_count must be at least 1")
        normalized = []
        for raw in self.edges:
            a, b, length = raw
            a, b = int(a), int(b)
            length = float(length)
            if not (1 <= a <= self.vertex_count and 1 <= b <= self.vertex_count):
                raise BadEndpoint(
                    f"edge ({a}, {b}) outside vertex range 1..{self.vertex_count}"
                )
            if not length > 0 or length != length or length == float("inf"):
                raise NonPositiveLength(f"edge ({a}, {b}) has length {length}")
            if a == b:
                raise SelfLoop(f"edge at vertex {a} joins the vertex to itself")
            normalized.append(Edge(a, b, length))
        object.__setattr__(self, "edges", tuple(normalized))
        _check_boundary_value(self.default_boundary, "default boundary")
        overrides = dict(self.boundary_overrides)
        for v, bc in overrides.items():
            if not (1 <= int(v) <= self.vertex_count):
                raise BadEndpoint(f"boundary override for unknown vertex {v}")
            _check_boundary_value(bc, f"boundary override for vertex {v}")
        object.__setattr__(self, "boundary_overrides", overrides)

    def boundary_of(self, v: int) -> Boundary:
        return self.boundary_overrides.get(v, self.default_boundary)

    def degree(self, v: int) -> int:
        """Number of edge incidences at ``v`` (a self-loop counts twice)."""
        return sum((e.a == v) + (e.b == v) for e in self.edges)


def validate_graph(g: MetricGraph) -> None:
    """Re-check every structural invariant of ``g``.

    Raises :class:`BadEndpoint`, :class:`NonPositiveLength` or
    :class:`SelfLoop` on the first violation found. Construction already
    enforces endpoint ranges and positive lengths, so on ordinary
    instances only the self-loop check can fire here.
    """
    if g.vertex_count < 1:
        raise GraphError("vertex_count must be at least 1")
    for e in g.edges:
        if not (1 <= e.a <= g.vertex_count and 1 <= e.b <= g.vertex_count):
            raise BadEndpoint(f"edge ({e.a}, {e.b}) outside vertex range")
        if not e.length > 0:
            raise NonPositiveLength(f"edge ({e.a}, {e.b}) has length {e.length}")
        if e.a == e.b:
            raise SelfLoop(f"edge at vertex {e.a} joins the vertex to itself")


@dataclass(frozen=True)
class OpenGraph:
    """A metric graph with semi-infinite leads attached.

    ``leads`` lists the vertices carrying a lead, at most one per vertex;
    its order defines the scattering channel order. ``entrance`` is an
    index into ``leads`` selecting the incoming channel used by sweep
    helpers.
    """

    graph: MetricGraph
    leads: tuple[int, ...]
    entrance: int = 0

    def __post_init__(self) -> None:
        validate_graph(self.graph)
        leads = tuple(int(v) for v in self.leads)
        if not leads:
            raise BadLead("an open graph needs at least one lead")
        for v in leads:
            if not (1 <= v <= self.graph.vertex_count):
                raise BadLead(f"lead at unknown vertex {v}")
        if len(set(leads)) != len(leads):
            raise BadLead("at most one lead per vertex")
        if not (0 <= self.entrance < len(leads)):
            raise BadLead(
                f"entrance index {self.entrance} outside 0..{len(leads) - 1}"
            )
        object.__setattr__(self, "leads", leads)

    @property
    def entrance_vertex(self) -> int:
        return self.leads[self.entrance]

    def has_lead(self, v: int) -> bool:
        return v in self.leads

    def channel_of(self, v: int) -> int:
        """Channel index of the lead attached at vertex ``v``."""
        try:
            return self.leads.index(v)
        except ValueError:
            raise BadLead(f"vertex {v} carries no lead") from None


def effective_degree(og: OpenGraph, v: int) -> int:
    """Edge incidences at ``v`` plus one if a lead is attached."""
    return og.graph.degree(v) + (1 if og.has_lead(v) else 0)


def vertex_amplitudes(og: OpenGraph, v: int) -> VertexAmplitudes:
    """Reflection and transmission amplitudes for vertex ``v``.

    Neumann vertices of effective degree d give r = 2/d - 1 and t = 2/d;
    a degree-1 Neumann vertex is a hard reflector with r = 1. Dirichlet
    vertices reflect with r = -1 and do not transmit. Custom amplitudes
    are taken as given, with a :class:`UnitarityWarning` when the local
    unitarity defect exceeds 1e-12.
    """
    d = effective_degree(og, v)
    if d < 1:
        raise GraphError(f"vertex {v} has no incidences")
    bc = og.graph.boundary_of(v)
    if isinstance(bc, Custom):
        amps = VertexAmplitudes(complex(bc.r), complex(bc.t), d)
        if amps.unitarity_defect() > 1e-12:
            warnings.warn(
                f"custom amplitudes at vertex {v} deviate from unitarity "
                f"by {amps.unitarity_defect():.3e}",
                UnitarityWarning,
                stacklevel=2,
            )
        return amps
    if bc == DIRICHLET:
        return VertexAmplitudes(-1.0 + 0j, 0j, d)
    if d == 1:
        return VertexAmplitudes(1.0 + 0j, 0j, d)
    return VertexAmplitudes(2.0 / d - 1.0 + 0j, 2.0 / d + 0j, d)


def amplitude_table(og: OpenGraph) -> dict[int, VertexAmplitudes]:
    """Amplitudes for every vertex that appears in an edge or lead."""
    touched = set(og.leads)
    for e in og.graph.edges:
        touched.add(e.a)
        touched.add(e.b)
    return {v: vertex_amplitudes(og, v) for v in sorted(touched)}


# ---------------------------------------------------------------------------
# description files

_TOP_KEYS = {"vertices", "edges", "boundary", "leads", "entrance"}
_BOUNDARY_KEYS = {"default", "overrides"}


def _boundary_from_json(value: object, label: str) -> Boundary:
    if isinstance(value, str):
        if value in (NEUMANN, DIRICHLET):
            return value
        raise GraphFormatError(f"{label}: unknown boundary {value!r}")
    if isinstance(value, dict):
        extra = set(value) - {"r", "t"}
        if extra:
            raise GraphFormatError(f"{label}: unknown keys {sorted(extra)}")
        if "r" not in value:
            raise GraphFormatError(f"{label}: custom boundary needs 'r'")

        def as_complex(x: object) -> complex:
            if isinstance(x, (int, float)):
                return complex(x)
            if isinstance(x, list) and len(x) == 2:
                return complex(float(x[0]), float(x[1]))
            raise GraphFormatError(f"{label}: bad complex value {x!r}")

        return Custom(as_complex(value["r"]), as_complex(value.get("t", 0.0)))
    raise GraphFormatError(f"{label}: bad boundary entry {value!r}")


def graph_from_dict(data: dict) -> OpenGraph:
    """Build an :class:`OpenGraph` from a parsed description dictionary."""
    if not isinstance(data, dict):
        raise GraphFormatError("graph description must be an object")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise GraphFormatError(f"unknown fields {sorted(extra)}")
    for key in ("vertices", "edges", "leads"):
        if key not in data:
            raise GraphFormatError(f"missing field {key!r}")
    try:
        vertices = int(data["vertices"])
    except (TypeError, ValueError):
        raise GraphFormatError("'vertices' must be an integer") from None
    edges = []
    for i, entry in enumerate(data["edges"]):
        if not isinstance(entry, list) or len(entry) != 3:
            raise GraphFormatError(f"edge {i}: expected [a, b, length]")
        edges.append((entry[0], entry[1], entry[2]))
    default: Boundary = NEUMANN
    overrides: dict[int, Boundary] = {}
    if "boundary" in data:
        bdata = data["boundary"]
        if not isinstance(bdata, dict):
            raise GraphFormatError("'boundary' must be an object")
        extra = set(bdata) - _BOUNDARY_KEYS
        if extra:
            raise GraphFormatError(f"boundary: unknown fields {sorted(extra)}")
        if "default" in bdata:
            default = _boundary_from_json(bdata["default"], "boundary default")
        for key, value in bdata.get("overrides", {}).items():
            try:
                v = int(key)
            except ValueError:
                raise GraphFormatError(
                    f"boundary override key {key!r} is not a vertex id"
                ) from None
            overrides[v] = _boundary_from_json(value, f"boundary override {key}")
    try:
        graph = MetricGraph(vertices, tuple(edges), default, overrides)
        return OpenGraph(
            graph,
            tuple(int(v) for v in data["leads"]),
            int(data.get("entrance", 0)),
        )
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc


def load_graph(path: str | Path) -> OpenGraph:
    """Load an open graph from a JSON description file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"{path}: {exc}") from exc
    return graph_from_dict(data)


# small constructors used across sweeps and tests -----------------------------


def interval_graph(lengths: Iterable[float]) -> OpenGraph:
    """Chain of vertices joined by edges of the given lengths, leads at
    both ends."""
    lens = [float(x) for x in lengths]
    edges = [(i + 1, i + 2, L) for i, L in enumerate(lens)]
    g = MetricGraph(len(lens) + 1, tuple(edges))
    return OpenGraph(g, (1, len(lens) + 1))


def cycle_graph(n: int, length: float = 1.0) -> OpenGraph:
    """Cycle on ``n`` vertices with a lead at every vertex."""
    edges = [(i, i % n + 1, length) for i in range(1, n + 1)]
    g = MetricGraph(n, tuple(edges))
    return OpenGraph(g, tuple(range(1, n + 1)))


def wheel_graph(n: int, length: float = 1.0) -> OpenGraph:
    """Wheel on ``n`` vertices (hub plus a rim cycle), leads everywhere.

    Vertex 1 is the hub; the entrance channel is the hub lead.
    """
    if n < 4:
        raise GraphError("a wheel needs at least 4 vertices")
    rim = list(range(2, n + 1))
    edges = [(1, j, length) for j in rim]
    edges += [(rim[i], rim[(i + 1) % len(rim)], length) for i in range(len(rim))]
    g = MetricGraph(n, tuple(edges))
    return OpenGraph(g, tuple(range(1, n + 1)))


def complete_graph(n: int, length: float = 1.0) -> OpenGraph:
    """Complete graph on ``n`` vertices with a lead at every vertex."""
    if n < 2:
        raise GraphError("a complete scattering graph needs at least 2 vertices")
    edges = [
        (i, j, length) for i in range(1, n + 1) for j in range(i + 1, n + 1)
    ]
    g = MetricGraph(n, tuple(edges))
    return OpenGraph(g, tuple(range(1, n + 1)))


def double_edge_graph(length_a: float = 1.0, length_b: float = 1.0) -> OpenGraph:
    """Two vertices joined by two parallel edges, a lead on each vertex."""
    g = MetricGraph(2, (Edge(1, 2, float(length_a)), Edge(1, 2, float(length_b))))
    return OpenGraph(g, (1, 2))
