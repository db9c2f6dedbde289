"""Chord-model pull-off dynamics on angle-doubling orbits.

Marked periodic orbits of the doubling map stand in for the little
Julia sets K_n, each set collapsed to its root angle.  The diameter
through theta_0 plays the role of the vertical access pair through the
central set, chords between marked angles play horizontal arcs, and
lifting halves angles.  The core is exact rational arithmetic; floats
enter only through the width helper at the bottom of the module.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .elephant import (
    AxiomViolation,
    ElephantModel,
    ElephantParams,
    SectorPlacement,
    build_model,
)
from .widths import CircleArc, Quadrilateral, WidthDomainError, quad_width_exact, truncate_width

HALF = Fraction(1, 2)

ENUMERATION_MAX_PERIOD = 24


class EnumerationBoundError(ValueError):
    """Requested period exceeds the orbit-enumeration bound."""


class PulloffCycleError(RuntimeError):
    """A chord revisited itself without pulling off.

    This would falsify the fast pull-off model, so it is surfaced as a
    reportable finding rather than swallowed.  Known to occur for b = 0
    orbits, whose marked angles sit on the sector corners.
    """

    def __init__(self, orbit, chord, visited):
        self.orbit = orbit
        self.chord = chord
        self.visited = tuple(visited)
        super().__init__(
            f"chord {chord} revisited after {len(self.visited)} legitimate "
            f"pullbacks without pulling off (cycle bound 3p = {3 * orbit.p})"
        )


class VerticalArcNotFound(RuntimeError):
    """No radial access pair to index 0 avoids the supplied diagram."""


class LedgerError(ValueError):
    """Weight ledger violates its nonnegativity invariants."""


class LedgerArithmeticError(RuntimeError):
    """Ledger bound fell below the guaranteed floor despite preconditions."""


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class AngleOrbit:
    """Period-p orbit of angle doubling, in turns, exact rationals.

    angles[0] is the root of the central marked set and anchors the
    critical diameter.  Doubling must advance the tuple cyclically.
    """

    angles: tuple[Fraction, ...]

    def __post_init__(self):
        angles = tuple(Fraction(a) for a in self.angles)
        object.__setattr__(self, "angles", angles)
        p = len(angles)
        if p < 1:
            raise ValueError("orbit needs at least one angle")
        if len(set(angles)) != p:
            raise ValueError("orbit angles must be distinct")
        modulus = (1 << p) - 1
        for n, a in enumerate(angles):
            if not 0 <= a < 1:
                raise ValueError(f"angle {a} outside [0, 1)")
            if a.denominator % 2 == 0:
                raise ValueError(f"angle {a} has even denominator")
            if (a * modulus).denominator != 1:
                raise ValueError(f"angle {a} not on the 2^p - 1 lattice")
            if (2 * a) % 1 != angles[(n + 1) % p]:
                raise ValueError(f"doubling breaks at position {n}")

    @property
    def p(self) -> int:
        return len(self.angles)

    @property
    def modulus(self) -> int:
        return (1 << self.p) - 1

    def angle(self, n: int) -> Fraction:
        return self.angles[n % self.p]

    def rotated(self, s: int) -> "AngleOrbit":
        s %= self.p
        return AngleOrbit(self.angles[s:] + self.angles[:s])

    def mirrored(self) -> "AngleOrbit":
        """Conjugate orbit under the reflection x -> -x of the circle."""
        return AngleOrbit(tuple((1 - a) % 1 for a in self.angles))

    @staticmethod
    def from_seed(k: int, p: int) -> "AngleOrbit":
        modulus = (1 << p) - 1
        k %= modulus
        if k == 0:
            raise ValueError("seed 0 is the fixed point, not a period-p orbit")
        angles = []
        v = k
        for _ in range(p):
            angles.append(Fraction(v, modulus))
            v = (2 * v) % modulus
        if v != k or len(set(angles)) != p:
            raise ValueError(f"seed {k}/{modulus} does not have exact period {p}")
        return AngleOrbit(tuple(angles))

    def to_dict(self) -> dict:
        m = self.modulus
        return {"p": self.p, "angles": [f"{int(a * m)}/{m}" for a in self.angles]}

    @staticmethod
    def from_dict(data: dict) -> "AngleOrbit":
        orbit = AngleOrbit(tuple(Fraction(s) for s in data["angles"]))
        if orbit.p != data["p"]:
            raise ValueError("angle count disagrees with declared period")
        return orbit


@dataclass(frozen=True)
class CriticalDiameter:
    """Diameter through the root angle and its antipode."""

    root: Fraction

    def __post_init__(self):
        object.__setattr__(self, "root", Fraction(self.root) % 1)

    @property
    def antipode(self) -> Fraction:
        return (self.root + HALF) % 1

    @staticmethod
    def from_orbit(orbit: AngleOrbit) -> "CriticalDiameter":
        return CriticalDiameter(orbit.angles[0])

    def side(self, angle) -> int:
        """+1 on the half-circle after the root, -1 after the antipode, 0 on the diameter."""
        rel = (Fraction(angle) - self.root) % 1
        if rel == 0 or rel == HALF:
            return 0
        return 1 if rel < HALF else -1

    def separates(self, a, b) -> bool:
        """True when the chord (a, b) strictly crosses the diameter."""
        return self.side(a) * self.side(b) < 0


@dataclass(frozen=True)
class Chord:
    """Unordered pair of marked endpoints, each optionally primed.

    A primed endpoint is the +1/2 preimage copy of its marked angle.
    """

    ends: tuple[tuple[int, bool], tuple[int, bool]]

    def __post_init__(self):
        ends = tuple(sorted((int(i), bool(pr)) for i, pr in self.ends))
        if len(ends) != 2:
            raise ValueError("a chord has exactly two endpoints")
        if ends[0] == ends[1]:
            raise ValueError("chord endpoints must be distinct")
        if ends[0][0] < 0 or ends[1][0] < 0:
            raise ValueError("chord endpoints are marked indices, >= 0")
        object.__setattr__(self, "ends", ends)

    @property
    def indices(self) -> tuple[int, int]:
        return (self.ends[0][0], self.ends[1][0])

    @property
    def unprimed(self) -> bool:
        return not (self.ends[0][1] or self.ends[1][1])

    @property
    def mixed(self) -> bool:
        return self.ends[0][1] != self.ends[1][1]

    def angles(self, orbit: AngleOrbit) -> tuple[Fraction, Fraction]:
        return tuple(
            (orbit.angle(i) + (HALF if pr else 0)) % 1 for i, pr in self.ends
        )

    def translated(self, orbit: AngleOrbit, steps: int = 1) -> "Chord":
        return Chord(tuple(((i - steps) % orbit.p, pr) for i, pr in self.ends))

    def to_json(self) -> list:
        return [[i, pr] for i, pr in self.ends]


def chord(i: int, j: int, primed_i: bool = False, primed_j: bool = False) -> Chord:
    return Chord(((i, primed_i), (j, primed_j)))


@dataclass(frozen=True)
class WeightLedger:
    """Exact bookkeeping for the newborn-vertical argument.

    w0, w1 are the local weights around the central and first marked
    sets, nu the total pulled-off weight, etas the per-step weights
    spent on new horizontal arcs.
    """

    w0: Fraction
    w1: Fraction
    nu: Fraction
    etas: tuple[Fraction, ...] = ()
    records: tuple[dict, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "w0", Fraction(self.w0))
        object.__setattr__(self, "w1", Fraction(self.w1))
        object.__setattr__(self, "nu", Fraction(self.nu))
        object.__setattr__(self, "etas", tuple(Fraction(e) for e in self.etas))
        for name, value in (("w0", self.w0), ("w1", self.w1), ("nu", self.nu)):
            if value < 0:
                raise LedgerError(f"{name} must be nonnegative, got {value}")
        if any(e < 0 for e in self.etas):
            raise LedgerError("per-step weights must be nonnegative")


# ---------------------------------------------------------------------------
# sector chart and orbit admissibility


@lru_cache(maxsize=None)
def _region_chart(q: int):
    """Half-open arcs (prev, bound] with region labels, sorted by bound.

    The alpha-ray cycle 2^i/(2^q - 1) and its antipodes cut the circle
    into 2q arcs: the two central arcs around the root and its antipode,
    the q-1 sector arcs, and the q-1 mirror-sector arcs.
    """
    modulus = (1 << q) - 1
    rays = [Fraction(1 << i, modulus) for i in range(q)]
    bounds = [rays[q - 1] + HALF - 1]
    labels: list[tuple[str, int]] = [("Z", q - 1)]
    bounds.append(rays[0])
    labels.append(("U", 0))
    for i in range(1, q):
        bounds.append(rays[i])
        labels.append(("S", i))
    bounds.append(rays[0] + HALF)
    labels.append(("U", 0))
    for i in range(1, q - 1):
        bounds.append(rays[i] + HALF)
        labels.append(("Z", i))
    return tuple(bounds), tuple(labels)


def angle_region(q: int, angle) -> tuple[str, int]:
    """Region of an angle in the q-sector chart: ("U", 0), ("S", i) or ("Z", i)."""
    bounds, labels = _region_chart(q)
    a = Fraction(angle) % 1
    idx = bisect_left(bounds, a)
    if idx == len(bounds):
        idx = 0
    return labels[idx]


def orbit_itinerary(params: ElephantParams, orbit: AngleOrbit) -> SectorPlacement:
    """Sector placement induced by the orbit angles theta_1..theta_{p-1}."""
    regions = [angle_region(params.q, a) for a in orbit.angles[1:]]
    return SectorPlacement(tuple(regions))


def induced_model(params: ElephantParams, orbit: AngleOrbit) -> ElephantModel:
    """Validate the orbit against the sector axioms; raises AxiomViolation."""
    if orbit.p != params.p:
        raise ValueError(f"orbit period {orbit.p} != q + b = {params.p}")
    if angle_region(params.q, orbit.angles[0]) != ("U", 0):
        raise AxiomViolation(
            (("E2", f"root angle {orbit.angles[0]} lies outside the central region"),)
        )
    return build_model(params, orbit_itinerary(params, orbit))


def find_admissible_orbits(params: ElephantParams) -> list[AngleOrbit]:
    """All period-p doubling orbits passing the sector validator.

    The root angle is the unique orbit angle in the central region;
    rotation is normalized so it comes first.
    """
    p = params.p
    if p > ENUMERATION_MAX_PERIOD:
        raise EnumerationBoundError(
            f"period {p} exceeds enumeration bound {ENUMERATION_MAX_PERIOD}"
        )
    modulus = (1 << p) - 1
    out = []
    for k in range(1, modulus):
        cycle = []
        v = k
        minimal = True
        for _ in range(p):
            cycle.append(v)
            v = (2 * v) % modulus
            if v < k:
                minimal = False
                break
        if not minimal or len(set(cycle)) != p:
            continue
        regions = [angle_region(params.q, Fraction(c, modulus)) for c in cycle]
        central = [n for n, reg in enumerate(regions) if reg[0] == "U"]
        if len(central) != 1:
            continue
        s = central[0]
        placement = SectorPlacement(tuple(regions[s + 1 :] + regions[:s]))
        try:
            build_model(params, placement)
        except AxiomViolation:
            continue
        angles = tuple(Fraction(c, modulus) for c in cycle[s:] + cycle[:s])
        out.append(AngleOrbit(angles))
    out.sort(key=lambda o: o.angles[0])
    return out


# ---------------------------------------------------------------------------
# lifting and pull-off


@lru_cache(maxsize=None)
def orbit_sides(orbit: AngleOrbit) -> tuple[int, ...]:
    """Diameter side of each marked angle; index 0 sits on the diameter."""
    diam = CriticalDiameter.from_orbit(orbit)
    return tuple(diam.side(a) for a in orbit.angles)


def chord_straddles(orbit: AngleOrbit, c: Chord) -> bool:
    """True when the chord strictly crosses the critical diameter."""
    a1, a2 = c.angles(orbit)
    return CriticalDiameter.from_orbit(orbit).separates(a1, a2)


@dataclass(frozen=True)
class LiftResult:
    lifts: tuple[Chord, Chord]
    pulled_off: bool

    @property
    def legitimate(self) -> Chord | None:
        if self.pulled_off:
            return None
        return self.lifts[0]


def lift_chord(orbit: AngleOrbit, c: Chord) -> LiftResult:
    """Both preimage chords of c, paired so neither crosses the diameter.

    Endpoint preimages shift the index by -1, once plain and once
    primed.  The pairing is forced by non-crossing; pull-off happens
    exactly when both lifts mix primed and unprimed endpoints, i.e.
    when the plain preimage pair strictly straddles the diameter.  An
    endpoint landing on the diameter belongs to the symmetric central
    set, so it never forces a pull-off.
    """
    if not c.unprimed:
        raise ValueError("lifting is defined for chords landing on unprimed sets")
    p = orbit.p
    sides = orbit_sides(orbit)
    (i, _), (j, _) = c.ends
    ii, jj = (i - 1) % p, (j - 1) % p
    if sides[ii] * sides[jj] < 0:
        lifts = (chord(ii, jj, False, True), chord(ii, jj, True, False))
        return LiftResult(lifts, True)
    lifts = (chord(ii, jj, False, False), chord(ii, jj, True, True))
    return LiftResult(lifts, False)


@dataclass(frozen=True)
class PulloffResult:
    time: int
    steps: tuple[dict, ...]


def pulloff_trace(orbit: AngleOrbit, c: Chord) -> PulloffResult:
    """Iterate the legitimate lift until pull-off, recording each step.

    Raises PulloffCycleError when the chord repeats without pulling
    off; the 3p bound of the model guarantees a repeat by then.
    """
    if not c.unprimed:
        raise ValueError("pull-off time is defined for unprimed starting chords")
    current = c
    visited = [c]
    steps = []
    for step in range(1, 3 * orbit.p + 1):
        res = lift_chord(orbit, current)
        steps.append(
            {
                "step": step,
                "chord": current.to_json(),
                "lifts": [lift.to_json() for lift in res.lifts],
                "pulled_off": res.pulled_off,
            }
        )
        if res.pulled_off:
            return PulloffResult(step, tuple(steps))
        current = res.legitimate
        if current in visited:
            raise PulloffCycleError(orbit, c, visited)
        visited.append(current)
    raise PulloffCycleError(orbit, c, visited)


def pulloff_time(orbit: AngleOrbit, c: Chord) -> int:
    """First pullback step at which the chord pulls off.

    Fast path: after k legitimate pullbacks the chord is the index
    shift by -k, so the time is the first shift whose plain preimage
    pair straddles the diameter.
    """
    if not c.unprimed:
        raise ValueError("pull-off time is defined for unprimed starting chords")
    p = orbit.p
    sides = orbit_sides(orbit)
    i, j = c.indices
    for k in range(1, p + 1):
        if sides[(i - k) % p] * sides[(j - k) % p] < 0:
            return k
    # shifting by p returns the starting chord: a full legitimate cycle
    raise PulloffCycleError(
        orbit, c, [c.translated(orbit, k) for k in range(p)]
    )


# ---------------------------------------------------------------------------
# segment classification


SEGMENT_CLASSES = (
    "self-intersecting",
    "peripheral",
    "short",
    "snake-candidate",
    "long",
)


def default_window(params: ElephantParams) -> tuple[int, int]:
    """Translation window: the single-occupancy sector indices."""
    return (1, min(params.q - params.b, params.p - 1))


def _cross(a1, a2, b1, b2) -> bool:
    # strict interleaving of endpoint angles; shared endpoints touch
    span = (a2 - a1) % 1
    r1 = (b1 - a1) % 1
    r2 = (b2 - a1) % 1
    return (0 < r1 < span) != (0 < r2 < span)


def classify_segment(
    params: ElephantParams,
    orbit: AngleOrbit,
    c: Chord,
    window: tuple[int, int] | None = None,
) -> str:
    """Classify a chord of the translation region.

    Tested in order: self-intersecting (crosses its index -1
    translate), peripheral (translate exits the window), short
    (consecutive indices), snake-candidate (skips exactly one marked
    point without crossing its translate), long (the rest).
    """
    lo, hi = window if window is not None else default_window(params)
    if not c.unprimed:
        raise ValueError("classification applies to unprimed chords")
    i, j = c.indices
    if not (lo <= i <= hi and lo <= j <= hi):
        raise ValueError(f"chord endpoints {i},{j} outside window [{lo},{hi}]")
    translate = c.translated(orbit, 1)
    a1, a2 = c.angles(orbit)
    b1, b2 = translate.angles(orbit)
    if _cross(a1, a2, b1, b2):
        return "self-intersecting"
    ti, tj = translate.indices
    if not (lo <= ti <= hi and lo <= tj <= hi):
        return "peripheral"
    if abs(j - i) == 1:
        return "short"
    if abs(j - i) == 2:
        return "snake-candidate"
    return "long"


def classify_census(
    params: ElephantParams,
    orbit: AngleOrbit,
    window: tuple[int, int] | None = None,
) -> dict[str, int]:
    """Class counts over all chords with both endpoints in the window."""
    lo, hi = window if window is not None else default_window(params)
    census = {name: 0 for name in SEGMENT_CLASSES}
    for i in range(lo, hi + 1):
        for j in range(i + 1, hi + 1):
            census[classify_segment(params, orbit, chord(i, j), (lo, hi))] += 1
    return census


# ---------------------------------------------------------------------------
# two-to-one correspondence


@dataclass(frozen=True)
class TwoToOneVerdict:
    mapping: tuple[tuple[int, tuple], ...]
    max_fiber: int
    passed: bool
    paired_symmetric: bool
    cycling: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "mapping": {str(j): list(beta) for j, beta in self.mapping},
            "max_fiber": self.max_fiber,
            "passed": self.passed,
            "paired_symmetric": self.paired_symmetric,
            "cycling": list(self.cycling),
        }


def two_to_one_check(orbit: AngleOrbit) -> TwoToOneVerdict:
    """Map each chord landing on index 0 to its last legitimate pullback.

    Verifies the fiber of the correspondence has size at most 2 and
    that size-2 fibers pair indices l and -l.  Chords that cycle
    without pulling off are recorded, not mapped.
    """
    p = orbit.p
    mapping = []
    fibers: dict[tuple, list[int]] = {}
    cycling = []
    for j in range(1, p):
        start = chord(0, j)
        try:
            time = pulloff_time(orbit, start)
        except PulloffCycleError:
            cycling.append(j)
            continue
        beta = start.translated(orbit, time - 1)
        mapping.append((j, beta.ends))
        fibers.setdefault(beta.ends, []).append(j)
    max_fiber = max((len(v) for v in fibers.values()), default=0)
    paired = all(
        (pair[0] + pair[1]) % p == 0
        for pair in (sorted(v) for v in fibers.values() if len(v) == 2)
    )
    return TwoToOneVerdict(
        mapping=tuple(mapping),
        max_fiber=max_fiber,
        passed=max_fiber <= 2,
        paired_symmetric=paired,
        cycling=tuple(cycling),
    )


# ---------------------------------------------------------------------------
# newborn vertical ledger


@dataclass(frozen=True)
class LedgerVerdict:
    branch_surgery: Fraction
    branch_rough: Fraction
    bound: Fraction | None
    floor: Fraction
    precondition_ok: bool
    ok: bool
    violation: str | None

    def to_dict(self) -> dict:
        return {
            "branch_surgery": str(self.branch_surgery),
            "branch_rough": str(self.branch_rough),
            "bound": None if self.bound is None else str(self.bound),
            "floor": str(self.floor),
            "precondition_ok": self.precondition_ok,
            "ok": self.ok,
            "violation": self.violation,
        }


def newborn_vertical_ledger(ledger: WeightLedger, slack=Fraction(0)) -> LedgerVerdict:
    """Lower bound on newborn vertical weight from the ledger arithmetic.

    Both proof branches are evaluated as guaranteed floors: the
    surgery branch (w0 - w1)/4 and the rough branch w1/20; the result
    is their max minus the additive slack.  Requires nu >= w0/2 - slack;
    a violated precondition yields a report, not a bound.
    """
    slack = Fraction(slack)
    floor = Fraction(1, 25) * ledger.w1 - slack
    branch_surgery = (ledger.w0 - ledger.w1) / 4
    branch_rough = ledger.w1 / 20
    if ledger.nu < ledger.w0 / 2 - slack:
        return LedgerVerdict(
            branch_surgery=branch_surgery,
            branch_rough=branch_rough,
            bound=None,
            floor=floor,
            precondition_ok=False,
            ok=False,
            violation=(
                f"pulled-off weight nu = {ledger.nu} below w0/2 - slack = "
                f"{ledger.w0 / 2 - slack}"
            ),
        )
    bound = max(branch_surgery, branch_rough) - slack
    if bound < floor:
        raise LedgerArithmeticError(
            f"ledger bound {bound} fell below the 4% floor {floor}"
        )
    return LedgerVerdict(
        branch_surgery=branch_surgery,
        branch_rough=branch_rough,
        bound=bound,
        floor=floor,
        precondition_ok=True,
        ok=True,
        violation=None,
    )


def proof_branch_chain(w0, w1, nu) -> dict:
    """Exact evaluation of the ledger proof chain at one rational point.

    Returns every displayed quantity so the caller can verify the
    identity, the branch inequalities on their own case domains, and
    the final 4% floor, all in exact arithmetic.
    """
    w0, w1, nu = Fraction(w0), Fraction(w1), Fraction(nu)
    identity_lhs = nu - (2 * nu + w1) / 4
    identity_rhs = nu / 2 - w1 / 4
    surgery_case = w0 - w1 > w1 / 5
    if surgery_case:
        loss = identity_rhs
        step = (w0 - w1) / 4
    else:
        loss = nu / 2 - w1 / 5
        step = w0 / 4 - w1 / 5
    return {
        "identity_lhs": identity_lhs,
        "identity_rhs": identity_rhs,
        "case": "surgery" if surgery_case else "rough",
        "loss": loss,
        "step": step,
        "floor": w1 / 20,
        "target": Fraction(1, 25) * w1,
        "ok": (
            identity_lhs == identity_rhs
            and loss >= step
            and step >= w1 / 20
            and w1 / 20 >= Fraction(1, 25) * w1
        ),
    }


# ---------------------------------------------------------------------------
# vertical access


def _open_arcs(a1, a2):
    # arcs a chord can screen off: the strictly shorter side, or both
    # halves when the chord is a diameter
    span = (a2 - a1) % 1
    if span == HALF:
        return ((a1, HALF), (a2, HALF))
    if span < HALF:
        return ((a1, span),)
    return ((a2, 1 - span),)


def _in_open(t, start, length) -> bool:
    return 0 < (t - start) % 1 < length


def vertical_arc_exists(orbit: AngleOrbit, diagram) -> tuple[Fraction, Fraction]:
    """Radial access pair to the central set avoiding the diagram.

    A candidate angle is blocked when some chord's short arc strictly
    contains it while containing neither root angle; arcs over a root
    angle cannot screen the central set, which reaches the circle
    there.  Candidates are the root pair first, then midpoints of gaps
    between circle-consecutive marked angles, paired with their
    antipodes.  Raises VerticalArcNotFound when every pair is blocked.
    """
    diam = CriticalDiameter.from_orbit(orbit)
    roots = (diam.root, diam.antipode)
    screens = []
    for c in diagram:
        a1, a2 = c.angles(orbit) if isinstance(c, Chord) else (
            Fraction(c[0]) % 1,
            Fraction(c[1]) % 1,
        )
        for start, length in _open_arcs(a1, a2):
            if not any(_in_open(r, start, length) for r in roots):
                screens.append((start, length))

    def blocked(t) -> bool:
        return any(_in_open(t, start, length) for start, length in screens)

    ordered = sorted(orbit.angles)
    candidates = [diam.root]
    for n, a in enumerate(ordered):
        b = ordered[(n + 1) % orbit.p]
        gap = (b - a) % 1
        if gap > 0:
            candidates.append((a + gap / 2) % 1)
    for t in candidates:
        if not blocked(t) and not blocked((t + HALF) % 1):
            return (t, (t + HALF) % 1)
    raise VerticalArcNotFound(
        f"all {len(candidates)} access pairs blocked by {len(screens)} screens"
    )


def all_chords(orbit: AngleOrbit) -> list[Chord]:
    """Proxy diagram: every unprimed chord between marked points."""
    return [chord(i, j) for i in range(orbit.p) for j in range(i + 1, orbit.p)]


# ---------------------------------------------------------------------------
# numeric chord weights (float boundary of the module)


def min_gap(orbit: AngleOrbit) -> Fraction:
    """Smallest cyclic gap between marked angles."""
    ordered = sorted(orbit.angles)
    return min(
        (ordered[(n + 1) % orbit.p] - ordered[n]) % 1 for n in range(orbit.p)
    )


def safe_delta(orbit: AngleOrbit) -> Fraction:
    """Default thickening 1/(64p), clamped so the arcs stay disjoint."""
    return min(Fraction(1, 64 * orbit.p), min_gap(orbit) / 4)


def chord_weight(orbit: AngleOrbit, c: Chord, delta: Fraction | None = None) -> float:
    """Truncated width between the delta-thickened endpoint arcs."""
    if delta is None:
        delta = safe_delta(orbit)
    delta = Fraction(delta)
    if delta <= 0:
        raise WidthDomainError("thickening must be positive")
    a1, a2 = sorted(c.angles(orbit))
    if (a2 - a1) % 1 <= 2 * delta or (a1 - a2) % 1 <= 2 * delta:
        raise WidthDomainError("thickened endpoint arcs overlap")
    quad = Quadrilateral(
        CircleArc.from_turns(float(a1 - delta), float(a1 + delta)),
        CircleArc.from_turns(float(a2 - delta), float(a2 + delta)),
    )
    return truncate_width(quad_width_exact(quad))
