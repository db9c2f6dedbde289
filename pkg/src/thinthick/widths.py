"""Conformal widths of boundary-to-boundary curve families on the disk.

The width of the family of curves connecting two disjoint closed boundary
arcs is the reciprocal extremal length, equal to the Dirichlet energy of
the harmonic potential with plates held at 0 and 1.  For a quadrilateral
(two arcs, endpoints a < b <= c < d in turns) the width has a closed form
through complete elliptic integrals of the cross-ratio of chord lengths;
a boundary Galerkin capacity solver provides an independent route for
general multi-arc condensers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import capacity as _capacity
from .hypdisk import IdealPoint

INFINITE_WIDTH = math.inf


class AdjacencyError(ValueError):
    """The two sides share an endpoint, so the connecting width is infinite."""


class WidthDomainError(ValueError):
    """Argument outside the domain of a width operation."""


@dataclass(frozen=True)
class CircleArc:
    """Closed counterclockwise boundary arc from start to end, in turns."""

    start: IdealPoint
    end: IdealPoint

    def __post_init__(self):
        if self.length <= 0.0:
            raise WidthDomainError("arc must have positive length")

    @staticmethod
    def from_turns(start: float, end: float) -> "CircleArc":
        return CircleArc(IdealPoint(start), IdealPoint(end))

    @property
    def length(self) -> float:
        return (self.end.angle - self.start.angle) % 1.0

    def contains(self, angle: float, closed: bool = True) -> bool:
        rel = (angle - self.start.angle) % 1.0
        if closed:
            return rel <= self.length or rel >= 1.0 - 1e-15
        return 0.0 < rel < self.length

    def endpoints_turns(self) -> tuple[float, float]:
        return (self.start.angle, self.start.angle + self.length)


def _turns_gap(x: float, y: float) -> float:
    """Counterclockwise distance from x to y in turns, in [0, 1)."""
    return (y - x) % 1.0


@dataclass(frozen=True)
class Quadrilateral:
    """Two disjoint boundary arcs I, J bounding a conformal quadrilateral.

    The horizontal sides are I and J; the connecting family runs between
    them.  Arcs must be disjoint and non-interleaved; shared endpoints
    raise AdjacencyError at width time.
    """

    I: CircleArc
    J: CircleArc

    def __post_init__(self):
        a, _, _, d = self.corner_turns()
        if d - a > 1.0 + 1e-15:
            raise WidthDomainError("arcs interleave; not a quadrilateral")

    def corner_turns(self) -> tuple[float, float, float, float]:
        """Corners a <= b <= c <= d on one counterclockwise lift, a = I.start."""
        a = self.I.start.angle
        b = a + self.I.length
        c = b + _turns_gap(self.I.end.angle, self.J.start.angle)
        d = c + self.J.length
        return (a, b, c, d)

    def dual(self) -> "Quadrilateral":
        """Quadrilateral with the roles of horizontal and vertical swapped."""
        a, b, c, d = self.corner_turns()
        return Quadrilateral(
            CircleArc.from_turns(b, c), CircleArc.from_turns(d, a + 1.0)
        )


@dataclass(frozen=True)
class BoundaryCondenser:
    """Plates E0 and E1, each a finite union of boundary arcs."""

    plates0: tuple[CircleArc, ...]
    plates1: tuple[CircleArc, ...]

    def __post_init__(self):
        if not self.plates0 or not self.plates1:
            raise WidthDomainError("both plates must be nonempty")

    @staticmethod
    def from_turns(arcs0, arcs1) -> "BoundaryCondenser":
        return BoundaryCondenser(
            tuple(CircleArc.from_turns(s, e) for s, e in arcs0),
            tuple(CircleArc.from_turns(s, e) for s, e in arcs1),
        )

    def arcs_turns(self) -> tuple[list, list]:
        return (
            [a.endpoints_turns() for a in self.plates0],
            [a.endpoints_turns() for a in self.plates1],
        )


@dataclass(frozen=True)
class CapacityGrid:
    """Discretization request for the capacity solver.

    resolution is the free-boundary node budget; with extrapolate=True the
    reported width is the Richardson value from solves at resolution and
    resolution // 2.
    """

    resolution: int = 256
    extrapolate: bool = True

    def __post_init__(self):
        if self.resolution < 16:
            raise WidthDomainError("resolution must be at least 16")


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of nonnegative a, b."""
    if a < 0.0 or b < 0.0:
        raise WidthDomainError("agm needs nonnegative arguments")
    if b > a:
        a, b = b, a
    if b == 0.0:
        return 0.0
    for _ in range(80):
        if a - b <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus k in [0, 1)."""
    if not 0.0 <= k < 1.0:
        raise WidthDomainError("modulus must lie in [0, 1)")
    return math.pi / (2.0 * agm(1.0, math.sqrt((1.0 - k) * (1.0 + k))))


def _chord_cross_ratio(a: float, b: float, c: float, d: float) -> float:
    """lambda = (|cb| |da|) / (|ca| |db|) of four ccw circle points in turns."""
    s = lambda x: math.sin(math.pi * ((x) % 1.0))
    return (s(c - b) * s(d - a)) / (s(c - a) * s(d - b))


def quad_width_exact(q: Quadrilateral) -> float:
    """Width of the family connecting I to J, by elliptic integrals.

    Symmetric quadrilaterals give exactly 1; the width tends to +inf as
    the arcs approach adjacency and to 0 as either arc degenerates.
    """
    a, b, c, d = q.corner_turns()
    eps = 1e-15
    if c - b < eps or a + 1.0 - d < eps:
        raise AdjacencyError("arcs share an endpoint; width is infinite")
    lam = _chord_cross_ratio(a, b, c, d)
    if not 0.0 < lam < 1.0:
        raise WidthDomainError(f"degenerate cross-ratio {lam}")
    # K(sqrt(1-lam)) / K(sqrt(lam)) via the agm form of K
    return agm(1.0, math.sqrt(1.0 - lam)) / agm(1.0, math.sqrt(lam))


def truncate_width(wbar: float) -> float:
    """Truncated width W = max(Wbar - 2, 0); infinite widths propagate."""
    if math.isnan(wbar) or wbar < 0.0:
        raise WidthDomainError("width must be nonnegative")
    if math.isinf(wbar):
        return INFINITE_WIDTH
    return max(wbar - 2.0, 0.0)


def capacity_width(c: BoundaryCondenser, grid: CapacityGrid = CapacityGrid()) -> float:
    """Width of the connecting family of a general condenser, by the
    boundary Galerkin solver."""
    sol = capacity_solution(c, grid)
    if grid.extrapolate:
        return float(sol.extrapolated)
    return float(sol.energy)


def capacity_solution(c: BoundaryCondenser, grid: CapacityGrid = CapacityGrid()):
    """Full solver output (energy, node counts, residual, extrapolation)."""
    arcs0, arcs1 = c.arcs_turns()
    return _capacity.solve_condenser(
        arcs0, arcs1, resolution=grid.resolution, extrapolate=grid.extrapolate
    )


def parallel_sum(widths) -> float:
    """Combined width of disjointly supported parallel families."""
    ws = list(widths)
    if not ws:
        raise WidthDomainError("parallel_sum needs at least one width")
    for w in ws:
        if math.isnan(w) or w < 0.0:
            raise WidthDomainError("widths must be nonnegative")
    return math.fsum(ws) if all(map(math.isfinite, ws)) else INFINITE_WIDTH


def serial_bound(widths) -> float:
    """Width bound 1 / sum(1/w) for families traversed in series."""
    ws = list(widths)
    if not ws:
        raise WidthDomainError("serial_bound needs at least one width")
    acc = 0.0
    for w in ws:
        if math.isnan(w) or w <= 0.0:
            raise WidthDomainError("serial widths must be strictly positive")
        if math.isfinite(w):
            acc += 1.0 / w
    if acc == 0.0:
        return INFINITE_WIDTH
    return 1.0 / acc
