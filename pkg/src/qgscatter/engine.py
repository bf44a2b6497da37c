"""Scattering amplitudes of open metric graphs via path-family resummation.

Every directed edge of the graph carries one unknown, the summed amplitude
of all trajectories that start by traversing that edge and eventually exit
through a chosen lead. Collecting the first bounce of each trajectory turns
the infinite sum into a sparse linear fixed point, solved here as a dense
system of size twice the edge count.

For the unknown attached to the directed edge (i -> j) with phase
z = exp(i k length):

* arriving at j exits through the lead there when j is the exit vertex,
  contributing the source term z * t_j,
* reflecting back onto the reversed edge contributes a coupling z * r_j,
* transmitting into any other directed edge leaving j, including a parallel
  edge back towards i, contributes a coupling z * t_j.

The global amplitude from entrance i to exit f is then
delta_fi * r_i + t_i * (sum of the unknowns on edges leaving i).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .graphs import OpenGraph, amplitude_table

PIVOT_RTOL = 1e-14
PROBABILITY_TOL = 1e-8


class EngineError(ValueError):
    """Base class for scattering computation failures."""


class NotALeadVertex(EngineError):
    """The requested entrance or exit vertex carries no lead."""


class NonPositiveWavenumber(EngineError):
    """Wavenumbers must be strictly positive."""


class SingularSystem(EngineError):
    """The path-family system is numerically singular at this wavenumber."""


class UnitarityViolation(EngineError):
    """Channel probabilities fail to sum to one beyond tolerance."""


@dataclass(frozen=True)
class PathFamilySystem:
    """Dense linear system (I - M) P = b for one exit channel.

    ``tails[d]`` and ``heads[d]`` give the directed edge endpoints; the
    reversed partner of directed edge ``d`` is ``d ^ 1``.
    """

    matrix: np.ndarray
    source: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    k: float
    exit_vertex: int

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class FamilySolution:
    values: np.ndarray
    residual: float
    condition: float


@dataclass(frozen=True)
class ScatteringMatrix:
    """Full lead-to-lead amplitude matrix at one wavenumber.

    ``matrix[f, i]`` is the amplitude from entrance channel ``i`` to exit
    channel ``f``, channels ordered as ``leads``.
    """

    k: float
    leads: tuple[int, ...]
    matrix: np.ndarray
    residual: float
    condition: float

    def amplitude(self, f: int, i: int) -> complex:
        """Amplitude between the leads attached at vertices ``f`` and ``i``."""
        return complex(self.matrix[self.leads.index(f), self.leads.index(i)])

    def asymmetry(self) -> float:
        """Largest deviation from reciprocity, max |S - S^T|."""
        return float(np.max(np.abs(self.matrix - self.matrix.T), initial=0.0))


def _require_lead(og: OpenGraph, v: int, role: str) -> None:
    if not og.has_lead(v):
        raise NotALeadVertex(f"{role} vertex {v} carries no lead")


def assemble_system(og: OpenGraph, exit_vertex: int, k: float) -> PathFamilySystem:
    """Assemble (I - M) and the source vector for one exit channel.

    The matrix has unit diagonal; its dimension is exactly twice the number
    of edges. Raises :class:`NotALeadVertex` if ``exit_vertex`` has no lead
    and :class:`NonPositiveWavenumber` unless ``k > 0``.
    """
    if not k > 0:
        raise NonPositiveWavenumber(f"k must be positive, got {k}")
    _require_lead(og, exit_vertex, "exit")
    edges = og.graph.edges
    n = 2 * len(edges)
    tails = np.empty(n, dtype=np.int64)
    heads = np.empty(n, dtype=np.int64)
    phase = np.empty(n, dtype=complex)
    out_edges: dict[int, list[int]] = {}
    for s, e in enumerate(edges):
        d_fwd, d_rev = 2 * s, 2 * s + 1
        tails[d_fwd], heads[d_fwd] = e.a, e.b
        tails[d_rev], heads[d_rev] = e.b, e.a
        phase[d_fwd] = phase[d_rev] = np.exp(1j * k * e.length)
        out_edges.setdefault(e.a, []).append(d_fwd)
        out_edges.setdefault(e.b, []).append(d_rev)
    amps = amplitude_table(og)
    matrix = np.eye(n, dtype=complex)
    source = np.zeros(n, dtype=complex)
    for d in range(n):
        w = int(heads[d])
        va = amps[w]
        for d2 in out_edges.get(w, ()):
            coeff = va.r if d2 == (d ^ 1) else va.t
            matrix[d, d2] -= phase[d] * coeff
        if w == exit_vertex:
            source[d] = phase[d] * va.t
    return PathFamilySystem(matrix, source, tails, heads, float(k), exit_vertex)


def solve_families(system: PathFamilySystem) -> FamilySolution:
    """LU solve of the assembled system with basic diagnostics.

    Raises :class:`SingularSystem` when the smallest pivot drops below
    ``1e-14`` times the infinity norm of the matrix. The reported condition
    number is the reciprocal of the LAPACK 1-norm estimate.
    """
    a = system.matrix
    if a.size == 0:
        return FamilySolution(np.zeros(0, dtype=complex), 0.0, 1.0)
    norm_inf = float(np.linalg.norm(a, np.inf))
    lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < PIVOT_RTOL * norm_inf:
        raise SingularSystem(
            f"pivot {pivots.min():.3e} below threshold at k={system.k}"
        )
    values = scipy.linalg.lu_solve((lu, piv), system.source, check_finite=False)
    residual = float(np.max(np.abs(a @ values - system.source), initial=0.0))
    norm_1 = float(np.linalg.norm(a, 1))
    rcond, info = scipy.linalg.lapack.zgecon(lu, norm_1)
    condition = float(1.0 / rcond) if info == 0 and rcond > 0 else float("inf")
    return FamilySolution(values, residual, condition)


def _column(og: OpenGraph, exit_vertex: int, k: float,
            solution: FamilySolution, tails: np.ndarray) -> np.ndarray:
    amps = amplitude_table(og)
    col = np.zeros(len(og.leads), dtype=complex)
    for ci, i in enumerate(og.leads):
        va = amps[i]
        acc = 0j
        for d in np.flatnonzero(tails == i):
            acc += solution.values[d]
        col[ci] = (va.r if exit_vertex == i else 0j) + va.t * acc
    return col


def scattering_amplitude(og: OpenGraph, f: int, i: int, k: float) -> complex:
    """Amplitude from the lead at vertex ``i`` to the lead at vertex ``f``."""
    _require_lead(og, i, "entrance")
    system = assemble_system(og, f, k)
    solution = solve_families(system)
    col = _column(og, f, k, solution, system.tails)
    return complex(col[og.channel_of(i)])


def scattering_matrix(og: OpenGraph, k: float) -> ScatteringMatrix:
    """All lead-to-lead amplitudes at wavenumber ``k``.

    One system is assembled and solved per exit channel; rows follow the
    lead order of ``og``.
    """
    l = len(og.leads)
    matrix = np.zeros((l, l), dtype=complex)
    worst_res = 0.0
    worst_cond = 1.0
    for fc, f in enumerate(og.leads):
        system = assemble_system(og, f, k)
        solution = solve_families(system)
        matrix[fc, :] = _column(og, f, k, solution, system.tails)
        worst_res = max(worst_res, solution.residual)
        worst_cond = max(worst_cond, solution.condition)
    return ScatteringMatrix(float(k), og.leads, matrix, worst_res, worst_cond)


def probabilities_from_amplitudes(column: np.ndarray,
                                  tol: float = PROBABILITY_TOL) -> np.ndarray:
    """Channel probabilities |sigma|^2 renormalized to an exact unit sum.

    Raises :class:`UnitarityViolation` when the raw sum deviates from one
    by more than ``tol``.
    """
    p = np.abs(np.asarray(column, dtype=complex)) ** 2
    total = float(p.sum())
    if abs(total - 1.0) > tol:
        raise UnitarityViolation(
            f"probabilities sum to {total!r}, off by {abs(total - 1.0):.3e}"
        )
    return p / total


def probabilities(sm: ScatteringMatrix, entrance: int,
                  tol: float = PROBABILITY_TOL) -> np.ndarray:
    """Exit probabilities for the entrance lead at vertex ``entrance``."""
    ci = sm.leads.index(entrance)
    return probabilities_from_amplitudes(sm.matrix[:, ci], tol=tol)


def greens_function(og: OpenGraph, f: int, i: int, k: float,
                    x_i: float = 0.0, x_f: float = 0.0) -> complex:
    """Scattering Green's function between two lead points.

    ``x_i`` and ``x_f`` are coordinates along the entrance and exit
    leads with the attachment vertex at zero, in natural units (mass and
    hbar equal one):

        G = (1/(i k)) * (delta_fi e^{i k |x_f - x_i|}
                         + sigma^{(f,i)} e^{i k (|x_f| + |x_i|)})
    """
    sigma = scattering_amplitude(og, f, i, k)
    direct = np.exp(1j * k * abs(x_f - x_i)) if f == i else 0.0
    scattered = sigma * np.exp(1j * k * (abs(x_f) + abs(x_i)))
    return complex((direct + scattered) / (1j * k))
