"""Marking combinatorics: widths tables, diagrams, fluxes, thin-thick
reports, and Blaschke pullback checks."""

import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thinthick.hypdisk import DiskPoint, IdealPoint, MobiusMap, geodesic_between, near_segment
from thinthick.lamination import (
    BlaschkeMap,
    ContinuationError,
    DiagramConsistencyError,
    FullTilingError,
    IdealMarking,
    MarkingError,
    OverlapError,
    WeightedArcDiagram,
    canonical_diagram,
    gap_flux,
    gap_flux_capacity,
    key_estimate_check,
    lift_chord,
    local_weight,
    local_weights,
    pairwise_widths,
    pullback_marking,
    segment_diagram,
    segment_widths,
    thin_thick_report,
    total_weight,
    transform_check,
    validate_marking,
)
from thinthick.widths import (
    BoundaryCondenser,
    CapacityGrid,
    CircleArc,
    Quadrilateral,
    capacity_width,
    quad_width_exact,
    truncate_width,
)


def random_marking(rng, p, min_sep=0.015, full=False):
    """Random valid marking with p intervals; full tiles the circle."""
    while True:
        cuts = sorted(rng.uniform(0.0, 1.0) for _ in range(2 * p))
        ring = cuts + [cuts[0] + 1.0]
        if min(b - a for a, b in zip(ring, ring[1:])) < min_sep:
            continue
        if full:
            pairs = [(cuts[2 * i], cuts[(2 * i + 2) % (2 * p)]) for i in range(p)]
        else:
            pairs = [(cuts[2 * i], cuts[2 * i + 1]) for i in range(p)]
        return IdealMarking.from_turns(pairs)


TWO_LONG = [(0.0, 0.45), (0.452, 0.458), (0.46, 0.91), (0.93, 0.95)]
SPREAD = [(0.0, 0.1), (0.2, 0.3), (0.45, 0.6), (0.7, 0.9)]


class TestMarking:
    def test_quarter_tiling_valid(self):
        m = IdealMarking.from_turns([(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)])
        d = validate_marking(m)
        assert d["p"] == 4
        assert d["gaps"] == 0
        assert d["full_tiling"]
        assert abs(d["coverage"] - 1.0) < 1e-12

    def test_overlap_rejected(self):
        with pytest.raises(OverlapError):
            IdealMarking.from_turns([(0.0, 0.3), (0.2, 0.5), (0.6, 0.9)])

    def test_misordered_rejected(self):
        with pytest.raises(OverlapError):
            IdealMarking.from_turns([(0.0, 0.1), (0.5, 0.6), (0.3, 0.4)])

    def test_too_few_intervals(self):
        with pytest.raises(MarkingError):
            IdealMarking.from_turns([(0.0, 0.2), (0.4, 0.6)])

    def test_p3_full_tiling_allowed(self):
        m = IdealMarking.from_turns([(0.0, 0.3), (0.3, 0.7), (0.7, 1.0)])
        assert m.is_full_tiling()

    def test_json_round_trip(self):
        rng = random.Random(2)
        for _ in range(20):
            m = random_marking(rng, rng.randint(3, 9))
            m2 = IdealMarking.from_json(m.to_json())
            for a, b in zip(m.intervals, m2.intervals):
                assert a.start.angle == b.start.angle
                assert abs(a.length - b.length) < 1e-15

    def test_gap_arcs(self):
        m = IdealMarking.from_turns(SPREAD)
        assert m.gap_count() == 4
        g = m.gap_arc(0)
        assert abs(g.start.angle - 0.1) < 1e-15
        assert abs(g.length - 0.1) < 1e-15


class TestPairwiseWidths:
    def test_p3_all_undefined(self):
        m = IdealMarking.from_turns([(0.0, 0.2), (0.3, 0.5), (0.6, 0.8)])
        t = pairwise_widths(m)
        assert np.isnan(t).all()

    def test_adjacent_nan_pattern(self):
        m = IdealMarking.from_turns(SPREAD)
        t = pairwise_widths(m)
        assert np.isnan(t[0, 1]) and np.isnan(t[1, 2]) and np.isnan(t[0, 3])
        assert not np.isnan(t[0, 2]) and not np.isnan(t[1, 3])
        assert t[0, 2] == t[2, 0]

    def test_symmetric_marking_equal_pairs(self):
        m = IdealMarking.from_turns(
            [(i / 6.0, i / 6.0 + 0.1) for i in range(6)]
        )
        t = pairwise_widths(m)
        vals = [t[i, (i + 2) % 6] for i in range(6)]
        assert max(vals) - min(vals) < 1e-12

    def test_against_capacity_solver_p8(self):
        rng = random.Random(5)
        m = random_marking(rng, 8)
        t = pairwise_widths(m)
        grid = CapacityGrid(resolution=128)
        for a in range(8):
            for b in range(a + 2, min(a + 4, 8)):
                if np.isnan(t[a, b]):
                    continue
                cap = capacity_width(
                    BoundaryCondenser((m.intervals[a],), (m.intervals[b],)), grid
                )
                assert abs(cap - t[a, b]) / t[a, b] < 1e-3


class TestCanonicalDiagram:
    def test_spread_marking_empty(self):
        assert canonical_diagram(IdealMarking.from_turns(SPREAD)).entries == ()

    def test_two_long_intervals_single_entry(self):
        m = IdealMarking.from_turns(TWO_LONG)
        d = canonical_diagram(m)
        assert len(d.entries) == 1
        a, b, w = d.entries[0]
        assert (a, b) == (0, 2)
        # frozen from the closed-form width of this configuration
        assert abs(w - 0.3839717123984117) < 1e-12

    def test_entry_budget(self):
        rng = random.Random(9)
        for _ in range(40):
            m = random_marking(rng, rng.randint(4, 10))
            d = canonical_diagram(m)
            assert len(d.entries) <= m.p - 2

    def test_non_crossing_never_raised_on_valid_markings(self):
        rng = random.Random(10)
        for _ in range(60):
            m = random_marking(rng, rng.randint(4, 9), min_sep=0.004)
            canonical_diagram(m)

    def test_crossing_rejected(self):
        with pytest.raises(DiagramConsistencyError):
            WeightedArcDiagram(p=6, entries=((0, 2, 1.0), (1, 4, 1.0)))

    def test_adjacent_entry_rejected(self):
        with pytest.raises(DiagramConsistencyError):
            WeightedArcDiagram(p=5, entries=((0, 1, 1.0),))

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(DiagramConsistencyError):
            WeightedArcDiagram(p=5, entries=((0, 2, 0.0),))


class TestLocalWeights:
    def test_p3_no_far_intervals(self):
        m = IdealMarking.from_turns([(0.0, 0.3), (0.35, 0.6), (0.65, 0.95)])
        assert local_weight(m, 0) == (0.0, 0.0)

    def test_symmetric_weights_equal(self):
        m = IdealMarking.from_turns([(i / 5.0, i / 5.0 + 0.12) for i in range(5)])
        vals = [w for w, _ in local_weights(m)]
        assert max(vals) - min(vals) < 1e-3 * max(vals)

    def test_per_interval_subadditivity(self):
        # sum over n of pair widths W_mn stays below the local weight W_m
        rng = random.Random(21)
        for _ in range(6):
            m = random_marking(rng, rng.randint(4, 7))
            t = pairwise_widths(m)
            d = canonical_diagram(m, t)
            for n in range(m.p):
                pair_sum = sum(d.weight_of(n, k) for k in range(m.p) if k != n)
                _, w_n = local_weight(m, n)
                assert pair_sum <= w_n + 1e-3

    def test_total_weight_dominates_diagram(self):
        rng = random.Random(22)
        for _ in range(4):
            m = random_marking(rng, rng.randint(4, 7))
            w = total_weight(m)
            d = canonical_diagram(m)
            assert 2.0 * d.total_weight() <= w + 1e-3

    def test_two_long_interval_tight_case(self):
        # p=4 with a single heavy pair: total weight equals the doubled
        # diagram weight up to solver error, never below it
        m = IdealMarking.from_turns(TWO_LONG)
        w = total_weight(m)
        s = 2.0 * canonical_diagram(m).total_weight()
        assert s <= w + 1e-3
        assert w - s < 1e-3


class TestGapFlux:
    def test_symmetric_gaps_equal_fluxes(self):
        m = IdealMarking.from_turns([(i / 4.0, i / 4.0 + 0.15) for i in range(4)])
        fluxes = [gap_flux(m, k) for k in range(4)]
        assert max(fluxes) - min(fluxes) < 1e-12

    def test_reciprocal_law(self):
        rng = random.Random(31)
        for _ in range(40):
            m = random_marking(rng, rng.randint(3, 8))
            for k in range(m.p):
                f = gap_flux(m, k)
                w = quad_width_exact(
                    Quadrilateral(m.intervals[k], m.intervals[(k + 1) % m.p])
                )
                assert abs(f * w - 1.0) < 1e-9

    def test_capacity_cross_check(self):
        rng = random.Random(32)
        m = random_marking(rng, 5)
        for k in range(m.p):
            f = gap_flux(m, k)
            cap = gap_flux_capacity(m, k)
            assert abs(cap - f) / f < 1e-3

    def test_full_tiling_error(self):
        m = IdealMarking.from_turns([(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)])
        with pytest.raises(FullTilingError):
            gap_flux(m, 0)


class TestSegments:
    def test_segment_widths_cover_nonempty_gap_pairs(self):
        m = IdealMarking.from_turns(SPREAD)
        ws = segment_widths(m)
        assert len(ws) == 6
        for w in ws.values():
            assert w > 0.0

    def test_segment_diagram_two_big_gaps(self):
        m = IdealMarking.from_turns(
            [(0.0, 0.002), (0.48, 0.482), (0.484, 0.486), (0.964, 0.966)]
        )
        d = segment_diagram(m)
        assert [(a, b) for a, b, _ in d.entries] == [(0, 2)]

    def test_full_tiling_no_segments(self):
        m = IdealMarking.from_turns([(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)])
        assert segment_widths(m) == {}
        assert segment_diagram(m).entries == ()


class TestThinThick:
    def test_all_tiny_marking_zero(self):
        m = IdealMarking.from_turns([(i / 5.0, i / 5.0 + 0.01) for i in range(5)])
        rep = thin_thick_report(m, eps=0.5)
        assert rep.thin_length == 0.0
        assert rep.diagram_sum == 0.0
        assert rep.total_weight < 1e-6

    def test_partition_identity(self):
        rng = random.Random(41)
        for _ in range(8):
            m = random_marking(rng, rng.randint(4, 8))
            rep = thin_thick_report(m, eps=rng.uniform(0.2, 1.0))
            assert rep.partition_residual < 1e-6
            total = rep.thin_length + rep.cusp_length + rep.thick_length
            assert abs(total - rep.window_length) < 1e-6

    def test_full_tiling_cusp_rays(self):
        # touching intervals subtend asymptotic geodesics; the cusp part
        # is present and the bookkeeping stays finite inside windows
        m = IdealMarking.from_turns([(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)])
        rep = thin_thick_report(m, eps=0.5)
        assert rep.cusp_length > 0.0
        assert math.isfinite(rep.window_length)
        assert rep.partition_residual < 1e-6
        assert math.isinf(rep.pair_lengths[(0, 1)])

    def test_right_inequality(self):
        rng = random.Random(42)
        for _ in range(6):
            m = random_marking(rng, rng.randint(4, 8))
            rep = thin_thick_report(m, eps=0.5)
            assert rep.right_inequality_holds(1e-3)

    def test_pair_residual_bounded_across_family(self):
        # one heavy pair whose width grows without bound; the residual
        # against near-segment-length-over-pi stays an eps-constant
        residuals = []
        widths = []
        for g in (3e-3, 1e-3, 3e-4, 1e-4, 3e-5):
            m = IdealMarking.from_turns(
                [
                    (0.0, 0.5 - 2 * g),
                    (0.5 - g, 0.5 - g + 1e-6),
                    (0.5, 1.0 - 2 * g),
                    (1.0 - g, 1.0 - g + 1e-6),
                ]
            )
            rep = thin_thick_report(m, eps=0.5)
            residuals.append(rep.pair_residuals[(0, 2)])
            widths.append(float(pairwise_widths(m)[0, 2]))
        assert widths[-1] > widths[0] + 2.0
        assert all(math.isfinite(r) for r in residuals)
        assert max(residuals) - min(residuals) < 0.2
        assert max(abs(r) for r in residuals) < 5.0

    def test_rejects_bad_eps(self):
        m = IdealMarking.from_turns(SPREAD)
        with pytest.raises(MarkingError):
            thin_thick_report(m, eps=0.0)


class TestBlaschke:
    def test_squaring_lift(self):
        sq = BlaschkeMap((DiskPoint(0.0, 0.0), DiskPoint(0.0, 0.0)))
        assert abs(sq.boundary_turn(0.3) - 0.6) < 1e-15
        assert abs(sq.boundary_turn(1.3) - sq.boundary_turn(0.3) - 2.0) < 1e-12
        pre = sq.preimage_turns(0.5)
        assert abs(pre[0] - 0.25) < 1e-12 and abs(pre[1] - 0.75) < 1e-12

    def test_lift_periodicity_and_monotonicity(self):
        rng = random.Random(51)
        for _ in range(5):
            b = BlaschkeMap.random(rng, rng.randint(1, 4))
            phis = np.linspace(0.0, 1.0, 200)
            vals = [b.boundary_turn(p) for p in phis]
            assert all(x < y for x, y in zip(vals, vals[1:]))
            assert abs(vals[-1] - vals[0] - b.degree) < 1e-10

    def test_lift_matches_argument(self):
        rng = random.Random(52)
        b = BlaschkeMap.random(rng, 3)
        for phi in (0.05, 0.37, 0.81):
            th = b.boundary_turn(phi)
            z = b.apply(complex(math.cos(2 * math.pi * phi), math.sin(2 * math.pi * phi)))
            diff = (th - math.atan2(z.imag, z.real) / (2 * math.pi)) % 1.0
            assert min(diff, 1.0 - diff) < 1e-12

    def test_interior_fiber(self):
        rng = random.Random(53)
        b = BlaschkeMap.random(rng, 4)
        c = 0.2 - 0.4j
        roots = b.interior_fiber(c)
        assert len(roots) == 4
        for w in roots:
            assert abs(b.apply(complex(w)) - c) < 1e-10
            assert abs(w) < 1.0

    def test_critical_points(self):
        rng = random.Random(54)
        b = BlaschkeMap.random(rng, 3)
        cps = b.critical_points()
        assert len(cps) == 2
        for w in cps:
            h = 1e-6
            deriv = (b.apply(complex(w) + h) - b.apply(complex(w) - h)) / (2 * h)
            assert abs(deriv) < 1e-4

    def test_degree_zero_rejected(self):
        with pytest.raises(MarkingError):
            BlaschkeMap(())


class TestPullbackMarking:
    def test_identity_fixes_marking(self):
        m = IdealMarking.from_turns(SPREAD)
        ident = BlaschkeMap((DiskPoint(0.0, 0.0),))
        mi = pullback_marking(ident, m)
        for a, b in zip(m.intervals, mi.intervals):
            assert abs(a.start.angle - b.start.angle) < 1e-12
            assert abs(a.length - b.length) < 1e-12

    def test_squaring_doubles_marking(self):
        m = IdealMarking.from_turns([(i / 4.0, i / 4.0 + 0.15) for i in range(4)])
        sq = BlaschkeMap((DiskPoint(0.0, 0.0), DiskPoint(0.0, 0.0)))
        mp = pullback_marking(sq, m)
        assert mp.p == 8
        for pos, arc in enumerate(mp.intervals):
            n, sheet = mp.labels[pos]
            src = m.intervals[n]
            assert abs(arc.length - src.length / 2.0) < 1e-12
            expected = (src.start.angle / 2.0 + sheet * 0.5) % 1.0
            assert abs((arc.start.angle - expected) % 1.0) % 1.0 < 1e-10

    def test_preimage_measure(self):
        rng = random.Random(61)
        m = random_marking(rng, 5)
        b = BlaschkeMap.random(rng, 3)
        mp = pullback_marking(b, m)
        assert mp.p == 15
        labels = set(mp.labels)
        assert labels == {(n, j) for n in range(5) for j in range(3)}

    def test_boundary_preimages_map_back(self):
        rng = random.Random(62)
        m = random_marking(rng, 4)
        b = BlaschkeMap.random(rng, 2)
        mp = pullback_marking(b, m)
        for pos, arc in enumerate(mp.intervals):
            n, _ = mp.labels[pos]
            mid = arc.start.angle + arc.length / 2.0
            image = b.boundary_turn(mid) % 1.0
            assert m.intervals[n].contains(image)


class TestTransformCheck:
    def test_identity_equalities(self):
        m = IdealMarking.from_turns(SPREAD)
        ident = BlaschkeMap((DiskPoint(0.0, 0.0),))
        rep = transform_check(ident, m)
        assert rep["ok"]
        assert rep["worst_pair_excess"] < 1e-12
        assert rep["worst_flux_drop"] < 1e-12
        assert rep["max_covering_deviation"] < 1e-4

    def test_squaring_symmetric_factor_two(self):
        # half-turn symmetry makes the fiber condenser exactly two copies
        # of the base condenser, so the covering relation is exact
        m = IdealMarking.from_turns([(i / 4.0, i / 4.0 + 0.15) for i in range(4)])
        sq = BlaschkeMap((DiskPoint(0.0, 0.0), DiskPoint(0.0, 0.0)))
        mp = pullback_marking(sq, m)
        grid = CapacityGrid(resolution=128)
        pos = {lab: i for i, lab in enumerate(mp.labels)}
        down = capacity_width(
            BoundaryCondenser((m.intervals[0],), (m.intervals[2],)), grid
        )
        up = capacity_width(
            BoundaryCondenser(
                tuple(mp.intervals[pos[(0, s)]] for s in range(2)),
                tuple(mp.intervals[pos[(2, s)]] for s in range(2)),
            ),
            grid,
        )
        assert abs(up - 2.0 * down) < 1e-4

    def test_random_transform_rules(self):
        rng = random.Random(71)
        for _ in range(8):
            m = random_marking(rng, rng.randint(4, 6))
            b = BlaschkeMap.random(rng, rng.randint(1, 3), max_radius=0.5)
            rep = transform_check(b, m)
            assert rep["pair_violations"] == 0
            assert rep["flux_violations"] == 0
            assert rep["covering_violations"] == 0


SEGMENT_RICH = [(0.0, 0.002), (0.48, 0.482), (0.484, 0.486), (0.964, 0.966)]


class TestKeyEstimate:
    def test_identity_equality(self):
        m = IdealMarking.from_turns(SEGMENT_RICH)
        ident = BlaschkeMap((DiskPoint(0.0, 0.0),))
        rep = key_estimate_check(ident, m)
        assert rep["ok"]
        assert rep["broken_weight"] == 0.0
        assert abs(rep["pulled_weight"] - rep["diagram_weight"]) < 1e-3

    def test_squaring_counts_twice(self):
        m = IdealMarking.from_turns(SEGMENT_RICH)
        sq = BlaschkeMap((DiskPoint(0.0, 0.0), DiskPoint(0.0, 0.0)))
        rep = key_estimate_check(sq, m)
        assert rep["ok"]
        assert rep["broken_weight"] > 0.0
        e = rep["entries"][0]
        assert e["broken"]
        assert len(set(e["lift_pairs"])) == 2
        # fiber family width is the degree times the base width
        base = segment_widths(m)[(0, 2)]
        assert abs(e["fiber_capacity"] - 2.0 * base) < 1e-3

    def test_random_instances(self):
        rng = random.Random(81)
        done = 0
        while done < 6:
            b = BlaschkeMap.random(rng, rng.choice([1, 2, 2, 3]), max_radius=0.5)
            m = IdealMarking.from_turns(SEGMENT_RICH)
            try:
                rep = key_estimate_check(b, m)
            except ContinuationError:
                continue
            assert rep["ok"]
            done += 1

    def test_lift_chord_squaring(self):
        sq = BlaschkeMap((DiskPoint(0.0, 0.0), DiskPoint(0.0, 0.0)))
        lifts = lift_chord(sq, 0.1, 0.55)
        assert len(lifts) == 2
        starts = sorted(s for s, _ in lifts)
        assert abs(starts[0] - 0.05) < 1e-3
        assert abs(starts[1] - 0.55) < 1e-3
        ends = sorted(e for _, e in lifts)
        assert abs(ends[0] - 0.275) < 1e-3
        assert abs(ends[1] - 0.775) < 1e-3

    def test_lift_chord_through_critical_point_refused(self):
        sq = BlaschkeMap((DiskPoint(0.0, 0.0), DiskPoint(0.0, 0.0)))
        with pytest.raises(ContinuationError):
            lift_chord(sq, 0.1, 0.6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=8, max_size=8))
def test_gap_flux_reciprocal_property(vals):
    cuts = sorted(v % 1.0 for v in vals)
    ring = cuts + [cuts[0] + 1.0]
    if min(b - a for a, b in zip(ring, ring[1:])) < 0.01:
        return
    m = IdealMarking.from_turns([(cuts[2 * i], cuts[2 * i + 1]) for i in range(4)])
    for k in range(4):
        f = gap_flux(m, k)
        w = quad_width_exact(Quadrilateral(m.intervals[k], m.intervals[(k + 1) % 4]))
        assert abs(f * w - 1.0) < 1e-9
