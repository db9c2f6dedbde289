"""Hyperbolic geometry of the Poincaré disk.

Angles on the unit circle are measured in turns (fractions of a full
revolution) so that angle doubling stays exact for dyadic rationals;
they are converted to radians only at trig call sites.  Distances and
arclengths are in hyperbolic length units.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

TAU = 2.0 * math.pi

# Euclidean circle centers beyond this are represented as straight lines.
_LINE_CENTER_LIMIT = 1e8
_SHARED_ENDPOINT_TOL = 1e-13


class DomainError(ValueError):
    """Input outside the open unit disk or otherwise out of range."""


class DegenerateEndpointsError(ValueError):
    """Geodesic endpoints coincide."""


class CrossingGeodesicsError(ValueError):
    """Operation requires disjoint geodesics but they intersect."""


def unit_point(angle: float) -> complex:
    """Point exp(2*pi*i*angle) on the unit circle; angle in turns."""
    return cmath.exp(1j * TAU * angle)


def _norm_turn(t: float) -> float:
    t = t % 1.0
    return t if t < 1.0 else 0.0


def angle_of(z: complex) -> float:
    """Angle of z in turns, normalized to [0, 1)."""
    return _norm_turn(cmath.phase(z) / TAU)


@dataclass(frozen=True)
class DiskPoint:
    re: float
    im: float

    def __post_init__(self):
        if self.re * self.re + self.im * self.im >= 1.0:
            raise DomainError(f"point ({self.re}, {self.im}) not inside the unit disk")

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @staticmethod
    def from_complex(z: complex) -> "DiskPoint":
        return DiskPoint(z.real, z.imag)


@dataclass(frozen=True)
class IdealPoint:
    angle: float  # turns in [0, 1)

    def __post_init__(self):
        object.__setattr__(self, "angle", _norm_turn(float(self.angle)))

    @property
    def z(self) -> complex:
        return unit_point(self.angle)


def _as_ideal(p) -> IdealPoint:
    return p if isinstance(p, IdealPoint) else IdealPoint(float(p))


class MobiusMap:
    """Disk-preserving Möbius transformation, stored as a unit-determinant
    2x2 complex matrix acting by z -> (az + b)/(cz + d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: complex, b: complex, c: complex, d: complex):
        det = a * d - b * c
        if abs(det) < 1e-300:
            raise ValueError("singular matrix")
        s = cmath.sqrt(det)
        self.a, self.b, self.c, self.d = a / s, b / s, c / s, d / s

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def apply_point(self, p: DiskPoint) -> DiskPoint:
        return DiskPoint.from_complex(self.apply(p.z))

    def apply_ideal(self, p: IdealPoint) -> IdealPoint:
        return IdealPoint(angle_of(self.apply(p.z)))

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        # self after other
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    @staticmethod
    def identity() -> "MobiusMap":
        return MobiusMap(1, 0, 0, 1)

    @staticmethod
    def rotation(turns: float) -> "MobiusMap":
        half = cmath.exp(1j * math.pi * turns)
        return MobiusMap(half, 0, 0, 1 / half)

    @staticmethod
    def centering(c: complex) -> "MobiusMap":
        """Automorphism z -> (z - c)/(1 - conj(c) z) sending c to the origin."""
        if abs(c) >= 1.0:
            raise DomainError("center must be inside the disk")
        return MobiusMap(1, -c, -c.conjugate(), 1)

    @staticmethod
    def random(rng, max_radius: float = 0.8) -> "MobiusMap":
        r = max_radius * math.sqrt(rng.random())
        phi = rng.random()
        c = r * unit_point(phi)
        return MobiusMap.rotation(rng.random()).compose(MobiusMap.centering(c))


@dataclass(frozen=True)
class NearSegment:
    """Arclength interval along a base geodesic; endpoints may be infinite."""

    lo: float
    hi: float

    @property
    def length(self) -> float:
        if self.hi <= self.lo:
            return 0.0
        return self.hi - self.lo

    @property
    def is_empty(self) -> bool:
        return self.hi <= self.lo

    @staticmethod
    def empty() -> "NearSegment":
        return NearSegment(0.0, 0.0)


@dataclass(frozen=True)
class Geodesic:
    """Complete geodesic with distinct ideal endpoints a, b.

    The Euclidean representation is an arc of a circle orthogonal to the
    unit circle, or a diameter when the endpoints are antipodal.  The
    canonical arclength parameterization runs from a to b with origin at
    the foot of the perpendicular dropped from the disk center.
    """

    a: IdealPoint
    b: IdealPoint
    center: complex | None = field(init=False, repr=False, compare=False)
    radius: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if abs((self.a.angle - self.b.angle) % 1.0) < 1e-15:
            raise DegenerateEndpointsError("geodesic endpoints coincide")
        u, v = self.a.z, self.b.z
        denom = 1.0 + (u * v.conjugate()).real
        # center magnitude is 1/|cos(pi*(a-b))|; switch to a line when it
        # would exceed the representable limit
        if denom <= 2.0 / (_LINE_CENTER_LIMIT**2):
            object.__setattr__(self, "center", None)
            object.__setattr__(self, "radius", math.inf)
        else:
            c = (u + v) / denom
            object.__setattr__(self, "center", c)
            object.__setattr__(self, "radius", math.sqrt(max(abs(c) ** 2 - 1.0, 0.0)))

    @property
    def is_diameter(self) -> bool:
        return self.center is None

    def foot_of_origin(self) -> complex:
        """Point of the geodesic closest to the disk center."""
        if self.center is None:
            return 0j
        c = self.center
        return c * (1.0 - self.radius / abs(c))

    def normalizer(self) -> MobiusMap:
        """Disk automorphism sending self to the real diameter, a to -1,
        b to +1, and the foot of the origin perpendicular to 0."""
        t = MobiusMap.centering(self.foot_of_origin())
        ia = angle_of(t.apply(self.a.z))
        return MobiusMap.rotation(0.5 - ia).compose(t)

    def point_at(self, s: float) -> DiskPoint:
        """Point at signed arclength s (s=0 at the origin foot, +s toward b)."""
        m = self.normalizer().inverse()
        return DiskPoint.from_complex(m.apply(math.tanh(s / 2.0)))

    def arclength_of(self, p: DiskPoint) -> float:
        """Signed arclength coordinate of the projection of p onto self."""
        w = _to_half_plane(self.normalizer().apply(p.z))
        return math.log(abs(w))


def geodesic_between(a, b) -> Geodesic:
    """Geodesic with the given ideal endpoints (turns or IdealPoint)."""
    return Geodesic(_as_ideal(a), _as_ideal(b))


def hyp_dist(z: DiskPoint, w: DiskPoint) -> float:
    """Hyperbolic distance between interior points."""
    zz, ww = z.z, w.z
    num = 2.0 * abs(zz - ww) ** 2
    den = (1.0 - abs(zz) ** 2) * (1.0 - abs(ww) ** 2)
    return math.acosh(1.0 + num / den)


def _to_half_plane(z: complex) -> complex:
    """Cayley map of the disk onto the upper half plane, 0 -> i."""
    return 1j * (1.0 + z) / (1.0 - z)


def _boundary_to_real(turn: float) -> float:
    """Boundary image of the Cayley map: turn t -> -cot(pi t)."""
    return -1.0 / math.tan(math.pi * turn)


def dist_point_geodesic(z: DiskPoint, g: Geodesic) -> float:
    """Distance from an interior point to a complete geodesic.

    Closed form: normalize g to the real diameter, pass to the upper half
    plane where the image geodesic is the imaginary axis, and use
    sinh(d) = |x| / y.
    """
    w = _to_half_plane(g.normalizer().apply(z.z))
    return math.asinh(abs(w.real) / w.imag)


def _turns_equal(s: float, t: float) -> bool:
    d = abs((s - t) % 1.0)
    return d < _SHARED_ENDPOINT_TOL or d > 1.0 - _SHARED_ENDPOINT_TOL


def near_segment(g1: Geodesic, g2: Geodesic, eps: float) -> tuple[NearSegment, float]:
    """Segment of g1 consisting of points at distance < eps from g2.

    Returns (segment, length) in the arclength parameterization of g1.
    Geodesics sharing one ideal endpoint are asymptotic and yield a
    half-infinite ray; crossing geodesics raise CrossingGeodesicsError.
    """
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    shared_a = [_turns_equal(t.angle, g1.a.angle) for t in (g2.a, g2.b)]
    shared_b = [_turns_equal(t.angle, g1.b.angle) for t in (g2.a, g2.b)]
    if (shared_a[0] or shared_b[0]) and (shared_a[1] or shared_b[1]):
        raise DegenerateEndpointsError("geodesics share both endpoints")

    m = g1.normalizer()
    s_eps = math.sinh(eps)
    xs = []  # half-plane boundary coordinates of g2's endpoints
    n_inf = 0
    for i, t in enumerate((g2.a, g2.b)):
        if shared_a[i]:
            xs.append(0.0)
        elif shared_b[i]:
            xs.append(math.inf)
            n_inf += 1
        else:
            xs.append(_boundary_to_real(angle_of(m.apply(t.z))))

    finite = [x for x in xs if not math.isinf(x)]
    if n_inf == 0:
        if finite[0] * finite[1] < 0.0:
            raise CrossingGeodesicsError("geodesics intersect")
        alpha, beta = sorted(abs(x) for x in xs)
        if alpha == 0.0:
            # asymptotic at g1.a: near set is y in (0, 2*r*sinh(eps))
            hi = math.log(beta * s_eps)
            return NearSegment(-math.inf, hi), math.inf
        r = (beta - alpha) / 2.0
        disc = (r * s_eps) ** 2 - alpha * beta
        if disc <= 0.0:
            return NearSegment.empty(), 0.0
        root = math.sqrt(disc)
        lo = math.log(r * s_eps - root)
        hi = math.log(r * s_eps + root)
        return NearSegment(lo, hi), hi - lo
    # asymptotic at g1.b: g2 is the vertical line x = finite[0]
    gamma = abs(finite[0])
    if gamma == 0.0:
        raise DegenerateEndpointsError("geodesics share both endpoints")
    lo = math.log(gamma / s_eps)
    return NearSegment(lo, math.inf), math.inf


def ideal_polygon_area(p: int) -> float:
    """Hyperbolic area of an ideal p-gon: pi*(p-2)."""
    if p < 3:
        raise DomainError("an ideal polygon needs at least 3 vertices")
    return math.pi * (p - 2)
