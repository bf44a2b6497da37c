"""Channel entropies of scattering probability vectors and their averages.

All entropies are reported in bits. The Shannon entropy is
``-sum p log2 p`` with ``0 log 0 = 0``. The one-parameter families are

* ``renyi(alpha, p) = log2(sum p^alpha) / (1 - alpha)`` for
  ``alpha >= 0``, ``alpha != 1``, with the ``alpha = 0`` case counting
  the channels above a fixed support threshold,
* ``tsallis(q, p) = log2(e) * (1 - sum p^q) / (q - 1)`` for ``q >= 0``,
  ``q != 1``.

Both families reduce to the Shannon entropy as the parameter tends to 1;
values within 1e-9 of 1 are rejected so the limit is taken deliberately.

Averages over one period of the wavenumber dependence use an adaptive
composite Gauss-Legendre rule with a deterministic reduction order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from .engine import SingularSystem, probabilities, scattering_matrix
from .graphs import OpenGraph

LOG2E = math.log2(math.e)
SUPPORT_THRESHOLD = 1e-12
UNIT_PARAM_TOL = 1e-9


class EntropyError(ValueError):
    pass


class BadParameter(EntropyError):
    """Entropy parameter outside the accepted domain."""


class NoPeriod(EntropyError):
    """Edge lengths admit no commensurate period within tolerance."""


class QuadratureStalled(EntropyError):
    """Panel refinement hit its budget before reaching tolerance."""


@dataclass(frozen=True)
class ProbabilityVector:
    """A nonnegative vector normalized to unit sum at construction."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise EntropyError("probability vector must be 1-d and nonempty")
        if np.any(v < -SUPPORT_THRESHOLD):
            raise EntropyError("negative probability entry")
        v = np.clip(v, 0.0, None)
        total = v.sum()
        if not total > 0:
            raise EntropyError("probability vector sums to zero")
        object.__setattr__(self, "values", v / total)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __len__(self) -> int:
        return len(self.values)


def _as_dist(p) -> np.ndarray:
    return np.asarray(p, dtype=float)


def shannon(p) -> Union[float, np.ndarray]:
    """Shannon entropy in bits, over the last axis of ``p``."""
    v = _as_dist(p)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(v > 0, v * np.log2(np.where(v > 0, v, 1.0)), 0.0)
    out = -terms.sum(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def renyi(alpha: float, p) -> Union[float, np.ndarray]:
    """Renyi entropy of order ``alpha`` in bits, over the last axis."""
    alpha = float(alpha)
    if alpha < 0:
        raise BadParameter(f"renyi order must be nonnegative, got {alpha}")
    if abs(alpha - 1.0) < UNIT_PARAM_TOL:
        raise BadParameter("renyi order too close to 1, use shannon")
    v = _as_dist(p)
    if alpha == 0.0:
        count = (v > SUPPORT_THRESHOLD).sum(axis=-1)
        out = np.log2(count)
        return float(out) if np.ndim(out) == 0 else out
    out = np.log2((v ** alpha).sum(axis=-1)) / (1.0 - alpha)
    return float(out) if np.ndim(out) == 0 else out


def tsallis(q: float, p) -> Union[float, np.ndarray]:
    """Tsallis entropy of order ``q``, in bits-compatible normalization.

    The prefactor ``log2(e)`` puts the q -> 1 limit on the same scale as
    :func:`shannon`.
    """
    q = float(q)
    if q < 0:
        raise BadParameter(f"tsallis order must be nonnegative, got {q}")
    if abs(q - 1.0) < UNIT_PARAM_TOL:
        raise BadParameter("tsallis order too close to 1, use shannon")
    v = _as_dist(p)
    if q == 0.0:
        count = (v > SUPPORT_THRESHOLD).sum(axis=-1)
        out = LOG2E * (count - 1.0)
        return float(out) if np.ndim(out) == 0 else out
    out = LOG2E * (1.0 - (v ** q).sum(axis=-1)) / (q - 1.0)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class EntropyMeasure:
    """A chosen entropy functional, usable as a sweep column.

    ``kind`` is one of ``shannon``, ``renyi`` or ``tsallis``; the latter
    two carry a parameter. Construction validates the parameter domain.
    """

    kind: str
    param: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "shannon":
            if self.param is not None:
                raise BadParameter("shannon takes no parameter")
            return
        if self.kind not in ("renyi", "tsallis"):
            raise BadParameter(f"unknown entropy kind {self.kind!r}")
        if self.param is None:
            raise BadParameter(f"{self.kind} needs a parameter")
        param = float(self.param)
        object.__setattr__(self, "param", param)
        if param < 0:
            raise BadParameter(f"{self.kind} parameter must be nonnegative")
        if abs(param - 1.0) < UNIT_PARAM_TOL:
            raise BadParameter(
                f"{self.kind} parameter too close to 1, use shannon"
            )

    @classmethod
    def shannon_measure(cls) -> "EntropyMeasure":
        return cls("shannon")

    @classmethod
    def renyi_measure(cls, alpha: float) -> "EntropyMeasure":
        return cls("renyi", float(alpha))

    @classmethod
    def tsallis_measure(cls, q: float) -> "EntropyMeasure":
        return cls("tsallis", float(q))

    @classmethod
    def parse(cls, text: str) -> "EntropyMeasure":
        """Parse a column-style name such as ``renyi_0.5`` or ``shannon``."""
        if text == "shannon":
            return cls("shannon")
        for prefix in ("renyi_", "tsallis_"):
            if text.startswith(prefix):
                try:
                    return cls(prefix[:-1], float(text[len(prefix):]))
                except ValueError as exc:
                    raise BadParameter(f"bad measure {text!r}") from exc
        raise BadParameter(f"bad measure {text!r}")

    @property
    def column_name(self) -> str:
        if self.kind == "shannon":
            return "shannon"
        return f"{self.kind}_{self.param:g}"

    def evaluate(self, p) -> Union[float, np.ndarray]:
        if self.kind == "shannon":
            return shannon(p)
        if self.kind == "renyi":
            return renyi(self.param, p)
        return tsallis(self.param, p)


# ---------------------------------------------------------------------------
# periods

def infer_period(lengths: Iterable[float], tol: float = 1e-9,
                 max_denominator: int = 1000) -> float:
    """Wavenumber period 2 pi / l0 from commensurate edge lengths.

    l0 is the largest length of which every edge length is an integer
    multiple, reconstructed through rational approximation of the ratios
    to the shortest edge. Raises :class:`NoPeriod` when some ratio has no
    rational representation with denominator up to ``max_denominator``
    matching the lengths within ``tol``.
    """
    lens = sorted(float(x) for x in lengths)
    if not lens:
        raise NoPeriod("no edge lengths to infer a period from")
    base = lens[0]
    fracs = [Fraction(x / base).limit_denominator(max_denominator)
             for x in lens]
    denom = math.lcm(*(f.denominator for f in fracs))
    nums = [f.numerator * (denom // f.denominator) for f in fracs]
    l0 = base * math.gcd(*nums) / denom
    for x in lens:
        multiple = round(x / l0)
        if multiple < 1 or abs(x - multiple * l0) > tol:
            raise NoPeriod(
                f"edge length {x} is not a multiple of {l0} within {tol}"
            )
    return 2.0 * math.pi / l0


@dataclass(frozen=True)
class PeriodSpec:
    """Either an explicit period K or a request to infer one."""

    kind: str
    value: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("explicit", "inferred"):
            raise EntropyError(f"unknown period kind {self.kind!r}")
        if self.kind == "explicit" and not (self.value and self.value > 0):
            raise EntropyError("explicit period must be positive")

    @classmethod
    def explicit(cls, value: float) -> "PeriodSpec":
        return cls("explicit", float(value))

    @classmethod
    def inferred(cls) -> "PeriodSpec":
        return cls("inferred")

    def resolve(self, og: OpenGraph | None = None) -> float:
        if self.kind == "explicit":
            return float(self.value)
        if og is None:
            raise NoPeriod("nothing to infer a period from")
        return infer_period(e.length for e in og.graph.edges)


# ---------------------------------------------------------------------------
# averaging

_GL_NODES, _GL_WEIGHTS = leggauss(8)


def periodic_average(fn: Callable[[np.ndarray], np.ndarray], period: float,
                     tol: float = 1e-6, start: float = 0.0,
                     initial_panels: int = 64,
                     max_panels: int = 2 ** 16) -> tuple[float, float]:
    """Mean of ``fn`` over ``[start, start + period]``.

    ``fn`` must accept a 1-d array of sample points and return values of
    the same shape. Composite 8-node Gauss-Legendre panels are refined by
    doubling until two successive estimates of the mean agree within
    ``tol``; the last difference is returned as the error estimate.
    Panels are reduced in a fixed order so the result is independent of
    how the evaluation is scheduled.
    """
    if not period > 0:
        raise EntropyError("period must be positive")

    def estimate(panels: int) -> float:
        width = period / panels
        left = start + width * np.arange(panels)
        pts = left[:, None] + (_GL_NODES[None, :] + 1.0) * (width / 2.0)
        vals = np.asarray(fn(pts.ravel()), dtype=float).reshape(panels, -1)
        per_panel = (vals @ _GL_WEIGHTS) * (width / 2.0)
        return math.fsum(per_panel.tolist()) / period

    panels = initial_panels
    prev = estimate(panels)
    while panels < max_panels:
        panels *= 2
        cur = estimate(panels)
        diff = abs(cur - prev)
        if diff < tol:
            return cur, diff
        prev = cur
    raise QuadratureStalled(
        f"no convergence to {tol} within {max_panels} panels"
    )


def scattering_entropy(og: OpenGraph, measure: EntropyMeasure,
                       k: float) -> float:
    """Entropy of the exit-channel distribution at one wavenumber."""
    sm = scattering_matrix(og, k)
    p = probabilities(sm, og.entrance_vertex)
    return float(measure.evaluate(p))


def average_entropy(og: OpenGraph, measure: EntropyMeasure,
                    period: PeriodSpec | float | None = None,
                    tol: float = 1e-6) -> tuple[float, float]:
    """Mean scattering entropy over one wavenumber period.

    ``period`` may be a :class:`PeriodSpec`, a positive number, or None
    to infer the period from the edge lengths. Wavenumbers where the
    linear system is singular are retried once with an offset of
    ``1e-9 * K``. Returns the mean and the quadrature error estimate.
    """
    if period is None:
        spec = PeriodSpec.inferred()
    elif isinstance(period, PeriodSpec):
        spec = period
    else:
        spec = PeriodSpec.explicit(float(period))
    K = spec.resolve(og)

    def point(k: float) -> float:
        try:
            return scattering_entropy(og, measure, k)
        except SingularSystem:
            return scattering_entropy(og, measure, k + 1e-9 * K)

    def integrand(ks: np.ndarray) -> np.ndarray:
        return np.array([point(float(k)) for k in ks])

    return periodic_average(integrand, K, tol=tol)
