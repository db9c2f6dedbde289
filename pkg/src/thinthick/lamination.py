"""Ideal markings of the disk and their width combinatorics.

An ideal marking is a cyclically ordered family of disjoint closed
boundary arcs.  The module computes pairwise widths between marked arcs,
the canonical weighted arc diagram (pairs whose width survives
truncation), local weights and the total weight, gap fluxes, thin-thick
decomposition reports for the geodesics subtended by the arcs, and the
transformation-rule / key-estimate checks for markings pulled back
through Blaschke coverings of the circle.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from .hypdisk import DiskPoint, Geodesic, IdealPoint, geodesic_between, near_segment
from .widths import (
    BoundaryCondenser,
    CapacityGrid,
    CircleArc,
    INFINITE_WIDTH,
    Quadrilateral,
    capacity_width,
    quad_width_exact,
    truncate_width,
)


class MarkingError(ValueError):
    """Invalid marking data."""


class OverlapError(MarkingError):
    """Marked arcs overlap or are out of cyclic order."""


class FullTilingError(ValueError):
    """The requested gap is empty."""


class DiagramConsistencyError(RuntimeError):
    """Positive-weight chords cross; falsifies the width computation."""


class ContinuationError(RuntimeError):
    """Chord lifting lost track of the preimage branches."""


def _cyclic_dist(a: int, b: int, p: int) -> int:
    return min((a - b) % p, (b - a) % p)


@dataclass(frozen=True)
class IdealMarking:
    """Cyclically ordered disjoint closed arcs, optionally labeled."""

    intervals: tuple[CircleArc, ...]
    labels: tuple = ()

    def __post_init__(self):
        if len(self.intervals) < 3:
            raise MarkingError("a marking needs at least 3 intervals")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.intervals))))
        if len(self.labels) != len(self.intervals):
            raise MarkingError("label count must match interval count")
        # interval lengths plus gap lengths must tile the circle exactly once;
        # any overlap or misordering inflates a wrapped gap
        total = sum(a.length for a in self.intervals)
        total += sum(self._raw_gap(k) for k in range(self.p))
        if abs(total - 1.0) > 1e-9:
            raise OverlapError("intervals overlap or are out of cyclic order")

    @property
    def p(self) -> int:
        return len(self.intervals)

    def _raw_gap(self, k: int) -> float:
        cur = self.intervals[k]
        nxt = self.intervals[(k + 1) % self.p]
        return (nxt.start.angle - cur.end.angle) % 1.0

    def gap_arc(self, k: int) -> CircleArc | None:
        """Gap between interval k and k+1, or None when they touch."""
        length = self._raw_gap(k)
        if length < 1e-13:
            return None
        return CircleArc(self.intervals[k].end, self.intervals[(k + 1) % self.p].start)

    def gap_count(self) -> int:
        return sum(1 for k in range(self.p) if self.gap_arc(k) is not None)

    def is_full_tiling(self) -> bool:
        return self.gap_count() == 0

    @staticmethod
    def from_turns(pairs, labels=()) -> "IdealMarking":
        return IdealMarking(
            tuple(CircleArc.from_turns(s, e) for s, e in pairs), tuple(labels)
        )

    def to_json(self) -> str:
        return json.dumps(
            {"intervals": [[a.start.angle, a.start.angle + a.length] for a in self.intervals]}
        )

    @staticmethod
    def from_json(text: str) -> "IdealMarking":
        data = json.loads(text)
        return IdealMarking.from_turns(data["intervals"])


def validate_marking(m: IdealMarking) -> dict:
    """Re-check invariants and report the gap structure."""
    coverage = sum(a.length for a in m.intervals)
    return {
        "p": m.p,
        "gaps": m.gap_count(),
        "full_tiling": m.is_full_tiling(),
        "coverage": coverage,
        "labels": list(m.labels),
    }


def pairwise_widths(m: IdealMarking) -> np.ndarray:
    """Symmetric table of widths between non-adjacent intervals.

    Adjacent (cyclically consecutive) and equal pairs are undefined and
    hold nan.
    """
    p = m.p
    table = np.full((p, p), math.nan)
    for a in range(p):
        for b in range(a + 1, p):
            if _cyclic_dist(a, b, p) <= 1:
                continue
            w = quad_width_exact(Quadrilateral(m.intervals[a], m.intervals[b]))
            table[a, b] = table[b, a] = w
    return table


@dataclass(frozen=True)
class WeightedArcDiagram:
    """Non-crossing chords between marking labels with positive weights.

    Arc diagrams between intervals forbid adjacent pairs; segment
    diagrams between gaps allow them.
    """

    p: int
    entries: tuple[tuple[int, int, float], ...]
    allow_adjacent: bool = False

    def __post_init__(self):
        for a, b, w in self.entries:
            if w <= 0.0:
                raise DiagramConsistencyError("diagram weights must be positive")
            if not self.allow_adjacent and _cyclic_dist(a, b, self.p) <= 1:
                raise DiagramConsistencyError("diagram joins adjacent intervals")
        ordered = [(min(a, b), max(a, b)) for a, b, _ in self.entries]
        for i, (a1, b1) in enumerate(ordered):
            for a2, b2 in ordered[i + 1 :]:
                if (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1):
                    raise DiagramConsistencyError(
                        f"chords ({a1},{b1}) and ({a2},{b2}) cross"
                    )

    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.entries)

    def weight_of(self, a: int, b: int) -> float:
        for x, y, w in self.entries:
            if {x, y} == {a, b}:
                return w
        return 0.0


def canonical_diagram(m: IdealMarking, widths: np.ndarray | None = None) -> WeightedArcDiagram:
    """Chords between interval pairs whose width survives truncation."""
    if widths is None:
        widths = pairwise_widths(m)
    entries = []
    p = m.p
    for a in range(p):
        for b in range(a + 1, p):
            w = float(widths[a, b])
            if math.isnan(w):
                continue
            t = truncate_width(w)
            if t > 0.0:
                entries.append((a, b, t))
    return WeightedArcDiagram(p=p, entries=tuple(entries))


_DEFAULT_GRID = CapacityGrid(resolution=128)


def local_weight(
    m: IdealMarking, n: int, grid: CapacityGrid = _DEFAULT_GRID
) -> tuple[float, float]:
    """(untruncated, truncated) weight of interval n: the width of the
    family joining I_n to the union of its non-adjacent intervals."""
    p = m.p
    far = [k for k in range(p) if _cyclic_dist(k, n, p) > 1]
    if not far:
        return (0.0, 0.0)
    cond = BoundaryCondenser(
        plates0=tuple(m.intervals[k] for k in far), plates1=(m.intervals[n],)
    )
    wbar = capacity_width(cond, grid)
    return (wbar, truncate_width(wbar))


def local_weights(m: IdealMarking, grid: CapacityGrid = _DEFAULT_GRID):
    return [local_weight(m, n, grid) for n in range(m.p)]


def total_weight(m: IdealMarking, grid: CapacityGrid = _DEFAULT_GRID) -> float:
    """Sum of truncated local weights."""
    return math.fsum(w for _, w in local_weights(m, grid))


def gap_flux(m: IdealMarking, k: int) -> float:
    """Width of the family joining gap G_k to the complementary far arc.

    Equals the reciprocal of the width of the quadrilateral on the two
    intervals adjacent to the gap.
    """
    g = m.gap_arc(k)
    if g is None:
        raise FullTilingError(f"gap {k} is empty")
    far = CircleArc(m.intervals[(k + 1) % m.p].end, m.intervals[k].start)
    return quad_width_exact(Quadrilateral(g, far))


def gap_flux_capacity(
    m: IdealMarking, k: int, grid: CapacityGrid = _DEFAULT_GRID
) -> float:
    """Independent capacity-solver route to the same flux."""
    g = m.gap_arc(k)
    if g is None:
        raise FullTilingError(f"gap {k} is empty")
    far = CircleArc(m.intervals[(k + 1) % m.p].end, m.intervals[k].start)
    cond = BoundaryCondenser(plates0=(far,), plates1=(g,))
    return capacity_width(cond, grid)


def segment_widths(m: IdealMarking) -> dict:
    """Widths of the quadrilaterals joining pairs of nonempty gaps.

    Segments connect gaps; adjacent gaps (separated by one interval) are
    allowed.  Keys are gap-index pairs (j, k) with j < k.
    """
    out = {}
    for j in range(m.p):
        gj = m.gap_arc(j)
        if gj is None:
            continue
        for k in range(j + 1, m.p):
            gk = m.gap_arc(k)
            if gk is None:
                continue
            out[(j, k)] = quad_width_exact(Quadrilateral(gj, gk))
    return out


def segment_diagram(m: IdealMarking) -> WeightedArcDiagram:
    """Gap pairs whose joining width survives truncation."""
    entries = tuple(
        (j, k, truncate_width(w))
        for (j, k), w in sorted(segment_widths(m).items())
        if truncate_width(w) > 0.0
    )
    return WeightedArcDiagram(p=m.p, entries=entries, allow_adjacent=True)


# interval-set helpers for the thin-thick bookkeeping


def _merge(segments):
    segs = sorted((lo, hi) for lo, hi in segments if hi > lo)
    out = []
    for lo, hi in segs:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _clip(segments, lo, hi):
    return [(max(a, lo), min(b, hi)) for a, b in segments if min(b, hi) > max(a, lo)]


def _length(segments) -> float:
    return math.fsum(b - a for a, b in segments)


def _intersect(seg_a, seg_b):
    out = []
    for a1, b1 in seg_a:
        for a2, b2 in seg_b:
            lo, hi = max(a1, a2), min(b1, b2)
            if hi > lo:
                out.append((lo, hi))
    return _merge(out)


@dataclass(frozen=True)
class ThinThickReport:
    """Decomposition bookkeeping for the geodesics under the intervals."""

    eps: float
    pair_lengths: dict
    thin_length: float
    cusp_length: float
    thick_length: float
    window_length: float
    total_weight: float
    diagram_sum: float
    deficit: float
    pair_residuals: dict
    partition_residual: float

    def right_inequality_holds(self, tol: float = 1e-3) -> bool:
        return self.diagram_sum <= self.total_weight + tol

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "pair_lengths": {f"{a}-{b}": v for (a, b), v in self.pair_lengths.items()},
            "thin_length": self.thin_length,
            "cusp_length": self.cusp_length,
            "thick_length": self.thick_length,
            "window_length": self.window_length,
            "total_weight": self.total_weight,
            "diagram_sum": self.diagram_sum,
            "deficit": self.deficit,
            "pair_residuals": {
                f"{a}-{b}": v for (a, b), v in self.pair_residuals.items()
            },
            "partition_residual": self.partition_residual,
        }


def thin_thick_report(
    m: IdealMarking, eps: float, grid: CapacityGrid = _DEFAULT_GRID
) -> ThinThickReport:
    """Partition the marked geodesics into thin, cusp and thick parts.

    Each interval subtends a geodesic; the thin part of geodesic n is the
    union of its eps-near segments against non-adjacent geodesics, the
    cusp part the remainder of its near segments against the two
    neighbors.  Complete geodesics have infinite length, so each one is
    measured inside a window extending one unit beyond its outermost
    near-segment structure; the partition identity is exact there.
    """
    if eps <= 0.0:
        raise MarkingError("eps must be positive")
    p = m.p
    geos = [geodesic_between(a.start, a.end) for a in m.intervals]

    pair_lengths: dict = {}
    thin_total = cusp_total = thick_total = window_total = 0.0
    for n in range(p):
        thin_segs, cusp_segs, finite_pts = [], [], [0.0]
        for mm in range(p):
            if mm == n:
                continue
            seg, seg_len = near_segment(geos[n], geos[mm], eps)
            key = (min(n, mm), max(n, mm))
            if key not in pair_lengths:
                pair_lengths[key] = seg_len
            if seg.is_empty:
                continue
            pair = (seg.lo, seg.hi)
            for v in pair:
                if math.isfinite(v):
                    finite_pts.append(v)
            if _cyclic_dist(n, mm, p) > 1:
                thin_segs.append(pair)
            else:
                cusp_segs.append(pair)
        lo, hi = min(finite_pts) - 1.0, max(finite_pts) + 1.0
        thin_u = _merge(_clip(thin_segs, lo, hi))
        cusp_u = _merge(_clip(cusp_segs, lo, hi))
        thin_len = _length(thin_u)
        cusp_len = _length(cusp_u) - _length(_intersect(cusp_u, thin_u))
        window = hi - lo
        thin_total += thin_len
        cusp_total += cusp_len
        thick_total += window - thin_len - cusp_len
        window_total += window

    w_total = total_weight(m, grid)
    diagram = canonical_diagram(m)
    diagram_sum = 2.0 * diagram.total_weight()
    residuals = {}
    for a, b, w in diagram.entries:
        l = pair_lengths.get((a, b), 0.0)
        # widths measure length in units of pi: a collar of core length l
        # carries weight l/pi, and the same scale governs near segments
        residuals[(a, b)] = w - l / math.pi if math.isfinite(l) else -INFINITE_WIDTH
    partition_residual = abs(
        window_total - (thin_total + cusp_total + thick_total)
    )
    return ThinThickReport(
        eps=eps,
        pair_lengths=pair_lengths,
        thin_length=thin_total,
        cusp_length=cusp_total,
        thick_length=thick_total,
        window_length=window_total,
        total_weight=w_total,
        diagram_sum=diagram_sum,
        deficit=w_total - diagram_sum,
        pair_residuals=residuals,
        partition_residual=partition_residual,
    )


@dataclass(frozen=True)
class BlaschkeMap:
    """Finite Blaschke product: a degree-d holomorphic cover of the disk.

    B(z) = e^{2 pi i rho} prod_j (z - a_j) / (1 - conj(a_j) z).  The
    boundary restriction is a degree-d circle covering with a smooth
    strictly increasing lift.
    """

    zeros: tuple[DiskPoint, ...]
    rotation: IdealPoint = IdealPoint(0.0)

    def __post_init__(self):
        if not self.zeros:
            raise MarkingError("a Blaschke map needs at least one zero")

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @staticmethod
    def from_complex(zeros, rotation: float = 0.0) -> "BlaschkeMap":
        return BlaschkeMap(
            tuple(DiskPoint(z.real, z.imag) for z in zeros), IdealPoint(rotation)
        )

    @staticmethod
    def random(rng, degree: int, max_radius: float = 0.6) -> "BlaschkeMap":
        pts = []
        for _ in range(degree):
            r = max_radius * math.sqrt(rng.uniform(0.0, 1.0))
            t = rng.uniform(0.0, 1.0)
            pts.append(r * cmath.exp(2j * math.pi * t))
        return BlaschkeMap.from_complex(pts, rng.uniform(0.0, 1.0))

    def apply(self, z: complex) -> complex:
        out = cmath.exp(2j * math.pi * self.rotation.angle)
        for a in self.zeros:
            out *= (z - a.z) / (1.0 - a.z.conjugate() * z)
        return out

    def boundary_turn(self, phi: float) -> float:
        """Monotone lift of the boundary covering, in turns.

        Satisfies boundary_turn(phi + 1) = boundary_turn(phi) + degree.
        """
        total = self.rotation.angle + self.degree * phi
        u = cmath.exp(2j * math.pi * phi)
        for a in self.zeros:
            w = 1.0 - a.z.conjugate() * u
            # Re w > 0 always, so the principal argument is smooth in phi
            total -= math.atan2(w.imag, w.real) / math.pi
        return total

    def _lift_inverse(self, y: float) -> float:
        """phi in [0, 1] with boundary_turn(phi) - boundary_turn(0) = y."""
        theta0 = self.boundary_turn(0.0)
        if y <= 0.0:
            return 0.0
        if y >= self.degree:
            return 1.0
        return brentq(
            lambda t: self.boundary_turn(t) - theta0 - y, 0.0, 1.0, xtol=1e-14
        )

    def preimage_turns(self, t: float) -> list[float]:
        """The d boundary preimages of the boundary point at turn t."""
        tau = (t - self.boundary_turn(0.0)) % 1.0
        return sorted(
            self._lift_inverse(tau + j) % 1.0 for j in range(self.degree)
        )

    def interior_fiber(self, c: complex) -> np.ndarray:
        """All d interior preimages of |c| < 1, by polynomial roots."""
        rot = cmath.exp(2j * math.pi * self.rotation.angle)
        num = np.array([1.0 + 0j])
        den = np.array([1.0 + 0j])
        for a in self.zeros:
            num = np.convolve(num, np.array([1.0, -a.z]))
            den = np.convolve(den, np.array([-a.z.conjugate(), 1.0]))
        coeffs = rot * num - c * den
        roots = np.roots(coeffs)
        return roots

    def critical_points(self) -> np.ndarray:
        """Interior critical points (d - 1 of them, with multiplicity)."""
        # B'/B = sum_j (1-|a_j|^2) / ((w - a_j)(1 - conj(a_j) w))
        total = np.array([0.0 + 0j])
        for j, a in enumerate(self.zeros):
            term = np.array([(1.0 - abs(a.z) ** 2) + 0j])
            for k, b in enumerate(self.zeros):
                if k == j:
                    continue
                factor = np.convolve(
                    np.array([1.0, -b.z]), np.array([-b.z.conjugate(), 1.0])
                )
                term = np.convolve(term, factor)
            n = len(total)
            t2 = len(term)
            width = max(n, t2)
            total = np.pad(total, (width - n, 0)) + np.pad(term, (width - t2, 0))
        roots = np.roots(total)
        return roots[np.abs(roots) < 1.0 - 1e-12]


def pullback_marking(b: BlaschkeMap, m: IdealMarking) -> IdealMarking:
    """Full boundary preimage of the marking: d*p arcs labeled (n, sheet),
    ordered by circle position."""
    theta0 = b.boundary_turn(0.0)
    d = b.degree
    arcs = []
    for n, arc in enumerate(m.intervals):
        tau = (arc.start.angle - theta0) % 1.0
        delta = arc.length
        for j in range(d):
            lo = b._lift_inverse(tau + j)
            hi_target = tau + delta + j
            if hi_target <= d:
                hi = b._lift_inverse(hi_target)
            else:
                hi = b._lift_inverse(hi_target - d) + 1.0
            arcs.append((lo % 1.0, (m.labels[n], j), hi - lo))
    arcs.sort()
    return IdealMarking(
        tuple(CircleArc.from_turns(s, s + ln) for s, _, ln in arcs),
        tuple(lab for _, lab, _ in arcs),
    )


def transform_check(
    b: BlaschkeMap,
    m: IdealMarking,
    grid: CapacityGrid = _DEFAULT_GRID,
    tol: float = 1e-3,
) -> dict:
    """Verify the width transformation rules under the pullback.

    (i) widths between preimage arcs never exceed the downstairs width;
    (ii) gap fluxes never drop; (iii) the width between full fibers is
    the downstairs width times the degree (checked as <= with the
    deviation reported).
    """
    mp = pullback_marking(b, m)
    p, d = m.p, b.degree
    pos_of = {lab: i for i, lab in enumerate(mp.labels)}
    down = pairwise_widths(m)

    pair_checks = pair_violations = 0
    worst_pair = 0.0
    for a in range(p):
        for c in range(a + 1, p):
            w_down = down[a, c]
            if math.isnan(w_down):
                continue
            for i in range(d):
                for j in range(d):
                    ia = pos_of[(m.labels[a], i)]
                    ic = pos_of[(m.labels[c], j)]
                    w_up = quad_width_exact(
                        Quadrilateral(mp.intervals[ia], mp.intervals[ic])
                    )
                    pair_checks += 1
                    worst_pair = max(worst_pair, w_up - w_down)
                    if w_up > w_down + tol:
                        pair_violations += 1

    flux_checks = flux_violations = 0
    worst_flux = 0.0
    for k in range(p):
        if m.gap_arc(k) is None:
            continue
        f_down = gap_flux(m, k)
        for pos in range(mp.p):
            lab = mp.labels[pos]
            nxt = mp.labels[(pos + 1) % mp.p]
            if lab[0] == m.labels[k] and nxt[0] == m.labels[(k + 1) % p]:
                if mp.gap_arc(pos) is None:
                    continue
                f_up = gap_flux(mp, pos)
                flux_checks += 1
                worst_flux = max(worst_flux, f_down - f_up)
                if f_up < f_down - tol:
                    flux_violations += 1

    covering_checks = covering_violations = 0
    worst_cover = 0.0
    max_cover_dev = 0.0
    for a in range(p):
        for c in range(a + 1, p):
            w_down = down[a, c]
            if math.isnan(w_down):
                continue
            fibers_a = tuple(
                mp.intervals[pos_of[(m.labels[a], i)]] for i in range(d)
            )
            fibers_c = tuple(
                mp.intervals[pos_of[(m.labels[c], i)]] for i in range(d)
            )
            cap = capacity_width(BoundaryCondenser(fibers_a, fibers_c), grid)
            covering_checks += 1
            worst_cover = max(worst_cover, cap - d * w_down)
            max_cover_dev = max(max_cover_dev, abs(cap - d * w_down))
            if cap > d * w_down + tol:
                covering_violations += 1

    return {
        "degree": d,
        "pair_checks": pair_checks,
        "pair_violations": pair_violations,
        "worst_pair_excess": worst_pair,
        "flux_checks": flux_checks,
        "flux_violations": flux_violations,
        "worst_flux_drop": worst_flux,
        "covering_checks": covering_checks,
        "covering_violations": covering_violations,
        "worst_covering_excess": worst_cover,
        "max_covering_deviation": max_cover_dev,
        "ok": pair_violations == 0
        and flux_violations == 0
        and covering_violations == 0,
    }


def lift_chord(
    b: BlaschkeMap, x_turn: float, y_turn: float, steps: int = 240, span: float = 9.0
):
    """Lift the geodesic chord from boundary turn x to y through B.

    Returns the d lifts as (start_angle, end_angle) boundary turn pairs,
    found by tracking the interior fiber along the chord.  Raises
    ContinuationError when branch tracking becomes ambiguous.
    """
    geo = geodesic_between(IdealPoint(x_turn % 1.0), IdealPoint(y_turn % 1.0))
    s_vals = np.linspace(-span, span, steps)
    z_path = [geo.point_at(float(s)).z for s in s_vals]
    tracks = _track_fiber(b, z_path)
    out = []
    for tr in tracks:
        out.append(
            (
                (cmath.phase(tr[0]) / (2.0 * math.pi)) % 1.0,
                (cmath.phase(tr[-1]) / (2.0 * math.pi)) % 1.0,
            )
        )
    return out


def _track_fiber(b: BlaschkeMap, z_path) -> list[list[complex]]:
    current = list(b.interior_fiber(z_path[0]))
    d = len(current)
    tracks = [[w] for w in current]
    for z_prev, z_next in zip(z_path[:-1], z_path[1:]):
        current = _advance(b, current, z_prev, z_next, depth=0)
        for tr, w in zip(tracks, current):
            tr.append(w)
    return tracks


def _advance(b: BlaschkeMap, current, z_prev, z_next, depth: int) -> list[complex]:
    new_roots = b.interior_fiber(z_next)
    d = len(current)
    cost = np.abs(np.subtract.outer(np.array(current), new_roots))
    rows, cols = linear_sum_assignment(cost)
    moves = cost[rows, cols]
    sep = np.inf
    if d > 1:
        pair = np.abs(np.subtract.outer(new_roots, new_roots))
        np.fill_diagonal(pair, np.inf)
        sep = pair.min()
    if moves.max() > 0.45 * sep:
        if depth >= 12:
            raise ContinuationError("branch tracking ambiguous near a critical point")
        z_mid = 0.5 * (z_prev + z_next)
        half = _advance(b, current, z_prev, z_mid, depth + 1)
        return _advance(b, half, z_mid, z_next, depth + 1)
    ordered = [None] * d
    for r, c in zip(rows, cols):
        ordered[r] = complex(new_roots[c])
    return ordered


def _containing_gap(m: IdealMarking, angle: float) -> int:
    """Index of the gap holding the boundary angle."""
    for k in range(m.p):
        g = m.gap_arc(k)
        if g is not None and g.contains(angle, closed=False):
            return k
    raise ContinuationError(f"turn {angle} is not inside any gap")


def _gap_fiber(mp: IdealMarking, m: IdealMarking, k: int) -> tuple[CircleArc, ...]:
    """All gaps of the pullback marking covering gap k of the base."""
    arcs = []
    for pos in range(mp.p):
        if mp.labels[pos][0] != m.labels[k]:
            continue
        g = mp.gap_arc(pos)
        if g is not None:
            arcs.append(g)
    return tuple(arcs)


def key_estimate_check(
    b: BlaschkeMap,
    m: IdealMarking,
    grid: CapacityGrid = _DEFAULT_GRID,
    tol: float = 1e-3,
) -> dict:
    """Pullback counting inequality for the segment diagram.

    Each segment joins two gaps downstairs.  Its pullback through B is
    tracked two ways: combinatorially, by lifting the segment chord and
    locating the d lift copies among the gaps of the pullback marking
    (a segment is broken when the pullback decomposes into two or more
    lift segments); and analytically, as the width of the family joining
    the full gap fibers, computed by the capacity solver.  A covering
    multiplies the family width by its degree, so the pulled-back weight
    counts every broken segment at least twice:

        W(i*(S_D)) >= W(S_D) + W(S_D_broken) - tol.
    """
    diagram = segment_diagram(m)
    mp = pullback_marking(b, m)
    d = b.degree

    entries = []
    lift_total = 0.0
    broken_weight = 0.0
    for a, c, w_seg in diagram.entries:
        ga, gc = m.gap_arc(a), m.gap_arc(c)
        x = ga.start.angle + ga.length / 2.0
        y = gc.start.angle + gc.length / 2.0
        lifts = lift_chord(b, x, y)
        starts, ends, lift_pairs = set(), set(), []
        for sa, sb in lifts:
            ia, ib = _containing_gap(mp, sa), _containing_gap(mp, sb)
            if mp.labels[ia][0] != m.labels[a] or mp.labels[ib][0] != m.labels[c]:
                raise ContinuationError("lift endpoints landed over wrong gaps")
            starts.add(ia)
            ends.add(ib)
            lift_pairs.append((ia, ib))
        if len(starts) != d or len(ends) != d:
            raise ContinuationError("lift endpoints do not exhaust the gap fibers")
        broken = len(lift_pairs) >= 2
        cap = capacity_width(
            BoundaryCondenser(_gap_fiber(mp, m, a), _gap_fiber(mp, m, c)), grid
        )
        w_up = truncate_width(cap)
        lift_total += w_up
        if broken:
            broken_weight += w_seg
        entries.append(
            {
                "pair": (a, c),
                "weight": w_seg,
                "lift_pairs": lift_pairs,
                "pulled_weight": w_up,
                "fiber_capacity": cap,
                "broken": broken,
            }
        )

    w_diagram = diagram.total_weight()
    ok = lift_total >= w_diagram + broken_weight - tol
    return {
        "degree": d,
        "entries": entries,
        "diagram_weight": w_diagram,
        "broken_weight": broken_weight,
        "pulled_weight": lift_total,
        "ok": ok,
    }
