"""Closed-form reflection and transmission amplitudes for graph families.

These expressions give the entrance-channel amplitudes of several layouts
(chains and bundles of two-port blocks, the two-edge band graph, cycles,
wheels and complete graphs) as rational functions of phase factors, so a
whole wavenumber sweep is a handful of vectorized array operations. Each
formula is cross-checked against the direct linear-system solution in the
test suite; tests/test_closed_forms.py keeps the two routes honest.

Phase conventions vary by family and are recorded in
:data:`PHASE_CONVENTIONS`. Unless noted otherwise ``z = exp(i k length)``
with the relevant edge length.

Two transcription notes, both settled numerically to machine precision:

* the reflection numerator of :func:`double_edge_pair` carries an overall minus
  sign, fixed against the direct solution and the equal-length reduction;
* the even-cycle transmission prefactor is ``2**(2 v - 1)``. The variant
  ``2**(4 v - 1)`` breaks probability conservation and disagrees with the
  direct solution by a factor ``4**v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

DENOMINATOR_RTOL = 1e-12
BRANCH_TOL = 1e-6

ComplexLike = Union[complex, np.ndarray]


class ClosedFormError(ValueError):
    """Base class for closed-form evaluation failures."""


class DenominatorVanishes(ClosedFormError):
    """A shared denominator is too small for a trustworthy value."""


class DegenerateBranch(ClosedFormError):
    """The branch structure collapses (square-root argument near zero)."""


@dataclass(frozen=True)
class TwoPort:
    """Reflection and transmission amplitudes of a two-channel scatterer."""

    refl: ComplexLike
    trans: ComplexLike


@dataclass(frozen=True)
class PhaseConvention:
    """How the phase argument of a formula family relates to k."""

    family: str
    description: str
    half_length: bool = False

    def z(self, k: ComplexLike, length: float = 1.0) -> ComplexLike:
        scale = 0.5 if self.half_length else 1.0
        return np.exp(1j * np.asarray(k) * (scale * length))


PHASE_CONVENTIONS = {
    pc.family: pc
    for pc in (
        PhaseConvention("series", "z = exp(i k l), l the edge between blocks"),
        PhaseConvention("parallel", "z = exp(i k l), l the edge from an end "
                                    "vertex to a block"),
        PhaseConvention("parallel_pair", "z_j = exp(i k l_j), l_j the length "
                                         "of each edge through inner vertex j"),
        PhaseConvention("double_edge_pair", "z_j = exp(i k l_j / 2), l_j the full "
                                       "length of band edge j", half_length=True),
        PhaseConvention("cycle", "z = exp(i k l), l the length of one cycle "
                                 "edge"),
        PhaseConvention("wheel", "z = exp(i k l), all spokes and rim edges of "
                                 "length l"),
        PhaseConvention("complete", "z = exp(i k l), all edges of length l"),
    )
}


def phase(k: ComplexLike, length: float = 1.0) -> ComplexLike:
    """Propagation factor exp(i k length)."""
    return np.exp(1j * np.asarray(k) * length)


def _guard(den: ComplexLike, num_scale: ComplexLike, what: str) -> None:
    bad = np.abs(den) < DENOMINATOR_RTOL * np.maximum(1.0, np.abs(num_scale))
    if np.any(bad):
        raise DenominatorVanishes(f"{what}: denominator vanishes "
                                  f"({int(np.count_nonzero(bad))} point(s))")


# ---------------------------------------------------------------------------
# chains

def series_pair(a: TwoPort, b: TwoPort, z: ComplexLike) -> TwoPort:
    """Compose two scatterers separated by an edge with phase ``z``."""
    den = 1 - a.refl * b.refl * z * z
    _guard(den, a.refl, "series_pair")
    refl = a.refl + a.trans * a.trans * b.refl * z * z / den
    trans = a.trans * b.trans * z / den
    return TwoPort(refl, trans)


def series_chain(blocks: Sequence[TwoPort], z: ComplexLike) -> TwoPort:
    """Left fold of :func:`series_pair` over a chain of blocks."""
    if not blocks:
        raise ClosedFormError("series_chain needs at least one block")
    acc = blocks[0]
    for blk in blocks[1:]:
        acc = series_pair(acc, blk, z)
    return acc


def series_identical(block: TwoPort, n: int, z: ComplexLike) -> TwoPort:
    """Chain of ``n`` copies of one block in closed form.

    Uses the eigenvalues of the transfer recursion,
    ``L = 1 + (T^2 - R^2) z^2 +- sqrt(disc)``. The result does not depend
    on the square-root branch (both eigenvalue labels swap), but the
    expression degenerates when the discriminant vanishes; a
    :class:`DegenerateBranch` is raised then and callers should fall back
    to :func:`series_chain`.
    """
    if n < 1:
        raise ClosedFormError("series_identical needs n >= 1")
    R, T = block.refl, block.trans
    zz = np.asarray(z) ** 2
    disc = 1 - 2 * (R * R + T * T) * zz + (R * R - T * T) ** 2 * zz * zz
    if np.any(np.abs(disc) < 1e-12):
        raise DegenerateBranch("series_identical: discriminant near zero")
    root = np.sqrt(disc + 0j)
    lp = 1 + (T * T - R * R) * zz + root
    lm = 1 + (T * T - R * R) * zz - root
    den = (2 - lm) * lp ** n - (2 - lp) * lm ** n
    _guard(den, lp ** n, "series_identical")
    refl = 2 * (lp ** n - lm ** n) * R / den
    trans = 2 ** n * (lp - lm) * T ** n * np.asarray(z) ** (n - 1) / den
    return TwoPort(refl, trans)


# ---------------------------------------------------------------------------
# bundles

def parallel_pair(ends: TwoPort, a: TwoPort, b: TwoPort,
                  z1: ComplexLike, z2: ComplexLike) -> TwoPort:
    """Two inner scatterers on parallel branches between common ends.

    The layout is a diamond: each end vertex (amplitudes ``ends``) joins
    both inner vertices, ``a`` via edges of phase ``z1`` and ``b`` via
    edges of phase ``z2``.
    """
    r, t = ends.refl, ends.trans
    r1, t1 = a.refl, a.trans
    r2, t2 = b.refl, b.trans
    w1 = np.asarray(z1) ** 2
    w2 = np.asarray(z2) ** 2

    def cross(rm, tm, rn, tn, wm, wn):
        return (rm - r * (rm * rm - tm * tm) * wm
                + r * (r - t) * rm * (rn * rn - tn * tn) * wn * wn
                + (2 * r * r - r * t - t * t) * (rm * rm - tm * tm) * rn
                * wm * wn) * wm

    den = (1 - r * (r1 * w1 + r2 * w2)
           + (r * r - t * t) * (r1 * r2 + t1 * t2) * w1 * w2) ** 2 \
        - (r * (t1 * w1 + t2 * w2)
           - (r * r - t * t) * (r1 * t2 + t1 * r2) * w1 * w2) ** 2
    _guard(den, 1.0, "parallel_pair")
    refl_num = cross(r1, t1, r2, t2, w1, w2) + cross(r2, t2, r1, t1, w2, w1) \
        + 2 * (t * t1 * t2 - (2 * r - t) * r1 * r2) * w1 * w2 \
        - 2 * ((r + t) * (r - t) ** 2 * (r1 * r1 - t1 * t1)
               * (r2 * r2 - t2 * t2)) * w1 * w1 * w2 * w2
    trans_num = t1 * w1 + t2 * w2 \
        - 2 * (r - t) * (r1 * t2 + r2 * t1) * w1 * w2 \
        + (r - t) ** 2 * ((r1 * r1 - t1 * t1) * t2 * w1
                          + t1 * (r2 * r2 - t2 * t2) * w2) * w1 * w2
    return TwoPort(r + t * t * refl_num / den, t * t * trans_num / den)


def parallel_identical(block: TwoPort, n: int, z: ComplexLike,
                       ends: TwoPort | None = None) -> TwoPort:
    """``n`` copies of one block bridging two end vertices.

    Each end vertex joins every block through an edge of phase ``z``.
    With ``ends=None`` the ends take the natural junction amplitudes of a
    vertex with ``n`` edges and a lead, ``r = -(n-1)/(n+1)``,
    ``t = 2/(n+1)``.
    """
    if n < 1:
        raise ClosedFormError("parallel_identical needs n >= 1")
    R, T = block.refl, block.trans
    zz = np.asarray(z) ** 2
    if ends is None:
        den = (n + 1 - (n - 1) * R * zz) ** 2 - (n - 1) ** 2 * T * T * zz * zz
        _guard(den, 1.0, "parallel_identical")
        refl = -((n * n - 1) * (1 + (R * R - T * T) * zz * zz)
                 - 2 * (n * n + 1) * R * zz) / den
        trans = 4 * n * T * zz / den
        return TwoPort(refl, trans)
    r, t = ends.refl, ends.trans
    g = r + (n - 1) * t
    den = (1 - g * R * zz) ** 2 - (g * T * zz) ** 2
    _guard(den, 1.0, "parallel_identical")
    refl = r + n * t * t * (R - g * (R * R - T * T) * zz) * zz / den
    trans = n * t * t * T * zz / den
    return TwoPort(refl, trans)


def double_edge_pair(z1: ComplexLike, z2: ComplexLike) -> TwoPort:
    """Two vertices joined by two edges, a lead on each vertex.

    ``z_j = exp(i k l_j / 2)`` with ``l_j`` the full length of edge j, so
    ``z_j**2`` is the phase across that edge. Junction amplitudes are the
    natural ones for degree 3. Near ``z1**2 == z2**2`` the general
    expression turns 0/0 and the equal-length reduction is used instead.
    """
    u = np.asarray(z1) ** 2
    w = np.asarray(z2) ** 2
    close = np.abs(u - w) < 1e-9
    if np.all(close):
        return double_edge_equal(u)
    den = (3 - u * w) ** 2 - (u + w) ** 2
    refl_num = 3 + (u - w) ** 2 - 3 * (2 - u * w) * u * w
    trans_num = 4 * ((1 - w * w) * u + (1 - u * u) * w)
    if np.any(close):
        den = np.where(close, 1.0, den)
        out = TwoPort(-refl_num / den, trans_num / den)
        eq = double_edge_equal(u)
        return TwoPort(np.where(close, eq.refl, out.refl),
                       np.where(close, eq.trans, out.trans))
    _guard(den, refl_num, "double_edge_pair")
    return TwoPort(-refl_num / den, trans_num / den)


def double_edge_equal(z: ComplexLike) -> TwoPort:
    """Equal-length band graph, ``z = exp(i k l)`` for the common length."""
    z = np.asarray(z)
    den = 9 - z * z
    _guard(den, 1.0, "double_edge_equal")
    return TwoPort(-3 * (1 - z * z) / den, 8 * z / den)


# ---------------------------------------------------------------------------
# cycles

def _cycle_roots(z: ComplexLike):
    z = np.asarray(z)
    zz = z * z
    beta = np.sqrt((zz - 1) * (zz - 9) + 0j)
    if np.any(np.abs(beta) < BRANCH_TOL):
        raise DegenerateBranch("cycle: branch points coincide (z^2 near 1 "
                               "or 9)")
    return z, beta, 3 + zz + beta, 3 + zz - beta


def cycle_reflection(n: int, z: ComplexLike) -> ComplexLike:
    """Return amplitude back into the entrance lead of an n-cycle."""
    if n < 3:
        raise ClosedFormError("a cycle needs n >= 3")
    z, beta, mp, mm = _cycle_roots(z)
    zz = z * z
    if n % 2:
        m = (n - 1) // 2
        den = (3 - z) * (mm ** m * (mm + 4 * z) - mp ** m * (mp + 4 * z))
        num = mp ** m * (mp + (2 + 3 * mm + 4 * z - 6 * zz) * z) \
            - mm ** m * (mm + (2 + 3 * mp + 4 * z - 6 * zz) * z)
        _guard(den, num, "cycle_reflection")
        return num / den
    h = n // 2
    den = (9 - zz) * (mp * mm) * (mp ** h - mm ** h)
    num = mp * mm ** h * (3 * mm + (14 + 3 * mp - 6 * zz) * zz) \
        - mm * mp ** h * (3 * mp + (14 + 3 * mm - 6 * zz) * zz)
    _guard(den, num, "cycle_reflection")
    return num / den


def cycle_transmission(n: int, z: ComplexLike, v: int) -> ComplexLike:
    """Amplitude into the lead at cycle vertex ``v`` (entrance at vertex 1).

    Valid for ``2 <= v <= n``; by symmetry the value for ``v`` equals the
    one for ``n - v + 2``. For odd ``n`` the half-integer powers are
    reduced with ``sqrt(mu+ mu-) = 4 z``, which makes the expression
    branch-free; the overall result does not depend on the sign choice.
    """
    if not 2 <= v <= n:
        raise ClosedFormError(f"transmission vertex {v} outside 2..{n}")
    z, beta, mp, mm = _cycle_roots(z)
    zz = z * z
    if n % 2:
        m = (n - 1) // 2
        den = (3 - z) * (mm ** m * (mm + 4 * z) - mp ** m * (mp + 4 * z))
        pref = 2.0 ** (2 * v - 3) * z ** (v - 2) * (1 + z) * (16 * zz) ** (-v)
        num = (4 * z - mp) * mp ** v * mm ** ((n + 3) // 2) \
            - (4 * z - mm) * mm ** v * mp ** ((n + 3) // 2)
        _guard(den, num, "cycle_transmission")
        return pref * num / den
    h = n // 2
    e = h + 1 - v
    den = (9 - zz) * (mp ** h - mm ** h)
    num = 2.0 ** (2 * v - 1) * z ** (v - 1) * beta * (mp ** e + mm ** e)
    _guard(den, num, "cycle_transmission")
    return num / den


def cycle_column(n: int, z: ComplexLike) -> np.ndarray:
    """Entrance-channel amplitudes ordered by exit vertex 1..n.

    The result has shape ``(..., n)`` with the reflection first.
    """
    parts = [cycle_reflection(n, z)]
    parts += [cycle_transmission(n, z, v) for v in range(2, n + 1)]
    return np.stack([np.asarray(p, dtype=complex) for p in parts], axis=-1)


# ---------------------------------------------------------------------------
# wheels and complete graphs

def wheel_amplitudes(n: int, z: ComplexLike) -> TwoPort:
    """Hub-entrance amplitudes of the n-vertex wheel.

    All rim channels share the same transmission amplitude.
    """
    if n < 4:
        raise ClosedFormError("a wheel needs n >= 4")
    z = np.asarray(z)
    zz = z * z
    den = 2 * n + (n - 2) * (zz - zz * z)
    _guard(den, 1.0, "wheel_amplitudes")
    return TwoPort((4 - n * (2 + zz - zz * z)) / den, 2 * z * (1 + z) / den)


def complete_amplitudes(n: int, z: ComplexLike) -> TwoPort:
    """Entrance amplitudes of the complete graph on n vertices."""
    if n < 2:
        raise ClosedFormError("a complete graph needs n >= 2")
    z = np.asarray(z)
    zz = z * z
    den = n * n - n * (n - 4) * z + (n - 2) ** 2 * (zz - zz * z)
    _guard(den, 1.0, "complete_amplitudes")
    return TwoPort((n - 2) * ((n - 4) * z - n * (1 + zz - zz * z)) / den,
                   4 * z * (1 + z) / den)
