"""Hubbard-tree combinatorics of elephant-eye renormalization.

A period-p renormalization with alpha-rotation number 1/q and p = q + b
marches its little Julia sets once around the fixed point: through the
central domain, up the q-1 sectors, with b extra stops in the mirror
sectors.  The placement of the extra stops is the only combinatorial
freedom; everything else (arc transformation scheme, transition matrix,
degree and erosion bounds) is forced and computed here exactly.

Sector tags: "U" is the central domain containing the critical point,
("S", i) the sectors at the fixed point, ("Z", i) the mirror sectors at
its preimage, i = 1..q-1 in mapping order.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class AxiomViolation(ValueError):
    """Parameters or placement break one of the combinatorial axioms.

    violations is a tuple of (axiom, detail) pairs; axiom is one of
    "E1" (sector dynamics), "E2" (central domain occupancy),
    "E3" (parameter ranges).
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(f"{a}: {d}" for a, d in self.violations))

    @property
    def axioms(self) -> tuple:
        return tuple(sorted({a for a, _ in self.violations}))


class ReducibleMatrixError(RuntimeError):
    """Transition digraph has no strongly connected recurrent core."""


class TranslationRegionError(ValueError):
    """Requested window leaves the translation region."""


class ErosionBoundError(RuntimeError):
    """A pullback period lost more than b sets on one side."""


@dataclass(frozen=True)
class ElephantParams:
    """Rotation denominator q and period excess b, so the period is q + b."""

    q: int
    b: int

    def __post_init__(self):
        problems = []
        if not isinstance(self.q, int) or not isinstance(self.b, int):
            problems.append(("E3", "q and b must be integers"))
        else:
            if self.q < 2:
                problems.append(("E3", f"q must be at least 2, got {self.q}"))
            if self.b < 0:
                problems.append(("E3", f"b must be nonnegative, got {self.b}"))
            if 0 <= self.b and 2 <= self.q and self.b >= self.q:
                problems.append(("E3", f"b must stay below q, got b={self.b}, q={self.q}"))
        if problems:
            raise AxiomViolation(problems)

    @property
    def p(self) -> int:
        return self.q + self.b


@dataclass(frozen=True)
class SectorPlacement:
    """Sector assignment for the sets K_1..K_{p-1}.

    sectors[n-1] is ("S", i) or ("Z", i) for K_n; the central set K_0
    is implicit.  Use placement_from_composition for the canonical
    encodings; build_model validates arbitrary assignments.
    """

    sectors: tuple

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple((k, int(i)) for k, i in self.sectors))


def placement_from_composition(params: ElephantParams, parts: tuple) -> SectorPlacement:
    """Placement encoded by mirror-drop excursion costs.

    After the forced march K_i in S_i for i = 1..q-1, each part c
    appends a drop into the mirror sector of index q - c followed by
    the climb back to the last sector; the parts must sum to b.
    A drop of cost 1 lands in the last mirror sector, from which the
    next drop (or the final return) happens directly.
    """
    q, b = params.q, params.b
    if sum(parts) != b:
        raise AxiomViolation([("E3", f"excursion costs {parts} must sum to b={b}")])
    sectors = [("S", i) for i in range(1, q)]
    for c in parts:
        if not 1 <= c <= q - 1:
            raise AxiomViolation([("E1", f"excursion cost {c} has no target sector")])
        sectors.append(("Z", q - c))
        sectors.extend(("S", i) for i in range(q - c + 1, q))
    return SectorPlacement(tuple(sectors))


def admissible_placements(params: ElephantParams) -> list:
    """All placements consistent with the sector dynamics.

    They biject with compositions of b (2^(b-1) of them for b >= 1):
    the only freedom is how deep each mirror-sector excursion drops.
    """
    b = params.b
    if b == 0:
        return [placement_from_composition(params, ())]
    out = []
    for cuts in itertools.product((False, True), repeat=b - 1):
        parts = []
        size = 1
        for cut in cuts:
            if cut:
                parts.append(size)
                size = 1
            else:
                size += 1
        parts.append(size)
        out.append(placement_from_composition(params, tuple(parts)))
    return out


@dataclass(frozen=True)
class ElephantModel:
    """Validated combinatorics: parameters, placement, crossing times."""

    params: ElephantParams
    placement: SectorPlacement
    crossing: frozenset

    def sector_of(self, n: int) -> tuple:
        if n == 0:
            return ("U", 0)
        return self.placement.sectors[n - 1]

    def to_dict(self) -> dict:
        return {
            "q": self.params.q,
            "b": self.params.b,
            "placement": [list(s) for s in self.placement.sectors],
        }


def build_model(params: ElephantParams, placement: SectorPlacement = None) -> ElephantModel:
    """Validate a placement against the sector-mapping rules.

    The placement may be omitted only for b = 0, where it is forced.
    All violations are collected and reported together, tagged by the
    axiom they break.
    """
    q, b, p = params.q, params.b, params.p
    if placement is None:
        if b != 0:
            raise ValueError("placement is only forced for b = 0; pass one explicitly")
        placement = placement_from_composition(params, ())
    sectors = placement.sectors
    problems = []
    if len(sectors) != p - 1:
        raise AxiomViolation(
            [("E1", f"placement must assign K_1..K_{p-1}, got {len(sectors)} entries")]
        )
    for n, (kind, i) in enumerate(sectors, start=1):
        if kind == "U":
            problems.append(("E2", f"K_{n} placed in the central domain, reserved for K_0"))
        elif kind not in ("S", "Z") or not 1 <= i <= q - 1:
            problems.append(("E1", f"K_{n} assigned to nonexistent sector {(kind, i)}"))
    if problems:
        raise AxiomViolation(problems)
    if sectors[0] != ("S", 1):
        problems.append(
            ("E1", f"K_1 must land in the first sector (central domain double-covers it), got {sectors[0]}")
        )
    for n in range(1, p - 1):
        kind, i = sectors[n - 1]
        nkind, ni = sectors[n]
        if i <= q - 2:
            if (nkind, ni) != ("S", i + 1):
                problems.append(
                    ("E1", f"K_{n} in {(kind, i)} must map to sector {i + 1}, but K_{n + 1} sits in {(nkind, ni)}")
                )
        else:
            if nkind != "Z":
                problems.append(
                    ("E1", f"K_{n} in the last sector pair maps into the mirror sectors, but K_{n + 1} sits in {(nkind, ni)}")
                )
    if sectors[p - 2][1] != q - 1:
        problems.append(
            ("E1", f"K_{p-1} must occupy the last sector pair to return to the central domain, got {sectors[p - 2]}")
        )
    occupants = {}
    for n, (kind, i) in enumerate(sectors, start=1):
        if kind == "S":
            occupants.setdefault(i, []).append(n)
    for i in range(1, min(q - b, q - 1) + 1):
        if occupants.get(i, []) != [i]:
            problems.append(
                ("E1", f"sector {i} must contain exactly K_{i}, got {occupants.get(i, [])}")
            )
    if problems:
        raise AxiomViolation(problems)
    crossing = frozenset(
        n for n, (kind, i) in enumerate(sectors, start=1) if i == q - 1
    )
    return ElephantModel(params, placement, crossing)


@dataclass(frozen=True)
class TreeEdge:
    """Arc of the Hubbard tree: gamma_n, or a half of the central arc."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("gamma", "plus", "minus"):
            raise ValueError(f"unknown edge kind {self.kind!r}")
        if self.kind == "gamma" and self.n < 1:
            raise ValueError("gamma edges are indexed from 1")
        if self.kind != "gamma" and self.n != 0:
            raise ValueError("central half-arcs carry no index")

    @property
    def index(self) -> int:
        """Position in the consecutive order, central halves both at 0."""
        return self.n

    def __str__(self):
        if self.kind == "gamma":
            return f"gamma_{self.n}"
        return "gamma_0^+" if self.kind == "plus" else "gamma_0^-"


def gamma(n: int) -> TreeEdge:
    return TreeEdge("gamma", n)


GAMMA0_PLUS = TreeEdge("plus")
GAMMA0_MINUS = TreeEdge("minus")


def all_edges(model: ElephantModel) -> tuple:
    return (GAMMA0_PLUS, GAMMA0_MINUS) + tuple(
        gamma(n) for n in range(1, model.params.p)
    )


def edge_image(model: ElephantModel, e: TreeEdge) -> tuple:
    """Arcs covered by the image of e, per the transformation scheme.

    Central halves map onto gamma_1.  A gamma_n whose set sits in the
    last sector pair (and is not the final one) maps across the whole
    central arc, contributing both halves; the final gamma_{p-1} maps
    onto the plus half alone.
    """
    p = model.params.p
    if e.kind != "gamma":
        return (gamma(1),)
    if not 1 <= e.n <= p - 1:
        raise ValueError(f"edge {e} does not exist at period {p}")
    if e.n == p - 1:
        return (GAMMA0_PLUS,)
    if e.n in model.crossing:
        return (gamma(e.n + 1), GAMMA0_PLUS, GAMMA0_MINUS)
    return (gamma(e.n + 1),)


@dataclass(frozen=True)
class HubbardMatrix:
    """Integer transition matrix over (plus, minus, gamma_1..gamma_{p-1})."""

    edges: tuple
    matrix: np.ndarray

    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def to_rows(self) -> list:
        return [
            [str(e)] + [int(x) for x in row]
            for e, row in zip(self.edges, self.matrix)
        ]


def hubbard_matrix(model: ElephantModel, image_fn=None) -> HubbardMatrix:
    edges = all_edges(model)
    pos = {e: j for j, e in enumerate(edges)}
    fn = image_fn or edge_image
    mat = np.zeros((len(edges), len(edges)), dtype=int)
    for e in edges:
        for im in fn(model, e):
            mat[pos[e], pos[im]] += 1
    return HubbardMatrix(edges, mat)


def iterate_edge(model: ElephantModel, e: TreeEdge, k: int, image_fn=None) -> Counter:
    """Covering multiplicities of the k-fold image of e."""
    if k < 0:
        raise ValueError("iteration count must be nonnegative")
    fn = image_fn or edge_image
    current = Counter({e: 1})
    for _ in range(k):
        nxt = Counter()
        for edge, mult in current.items():
            for im in fn(model, edge):
                nxt[im] += mult
        current = nxt
    return current


def _cyclic_window(indices: set, p: int) -> int:
    """Length of the smallest run of consecutive indices mod p covering the set."""
    if not indices:
        return 0
    pts = sorted(indices)
    if len(pts) == 1:
        return 1
    gaps = [(pts[j + 1] - pts[j]) for j in range(len(pts) - 1)]
    gaps.append(pts[0] + p - pts[-1])
    return p - max(gaps) + 1


@dataclass(frozen=True)
class BoundedDegreeVerdict:
    """Measured degree and support data for the full-period edge images.

    passed holds the literal claim: multiplicity at most 2 and support
    within b+1 consecutive arcs after one full period, for every edge.
    The scheme itself only guarantees this away from the last sector
    pair; crossing-zone edges genuinely reach a 2b+1 window and double
    once more at the final step, so the measured bounds are reported
    alongside for the honest statement.
    """

    passed: bool
    max_multiplicity: int
    max_window: int
    interim_multiplicity: int
    translation_passed: bool
    witness: str = ""

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_multiplicity": self.max_multiplicity,
            "max_window": self.max_window,
            "interim_multiplicity": self.interim_multiplicity,
            "translation_passed": self.translation_passed,
            "witness": self.witness,
        }


def check_bounded_degree(model: ElephantModel, image_fn=None) -> BoundedDegreeVerdict:
    """Full-period degree check for every arc of the tree.

    Two layers are measured: the literal clauses (multiplicity <= 2 at
    step p inside a window of b+1 consecutive arcs) and the guarantees
    the scheme actually delivers: multiplicity <= 2 at every step
    before the period closes, window <= 2b+1 everywhere, and the b+1
    window with multiplicity <= 2 for arcs below the crossing zone,
    which is what the erosion argument consumes.
    """
    q, b, p = model.params.q, model.params.b, model.params.p
    fn = image_fn or edge_image
    passed = True
    translation_passed = True
    max_mult = 0
    max_window = 0
    interim = 0
    witness = ""
    for e in all_edges(model):
        current = Counter({e: 1})
        for step in range(p):
            nxt = Counter()
            for edge, mult in current.items():
                for im in fn(model, edge):
                    nxt[im] += mult
            current = nxt
            if step < p - 1:
                interim = max(interim, max(current.values()))
        mult = max(current.values())
        window = _cyclic_window({edge.index for edge in current}, p)
        if mult > max_mult or (mult == max_mult and window > max_window):
            max_mult = max(max_mult, mult)
            max_window = max(max_window, window)
            witness = f"{e}: multiplicity {mult}, window {window}"
        ok = mult <= 2 and window <= b + 1
        if not ok:
            passed = False
            if e.kind == "gamma" and 1 <= e.n <= q - b - 2:
                translation_passed = False
        max_mult = max(max_mult, mult)
        max_window = max(max_window, window)
    return BoundedDegreeVerdict(
        passed=passed,
        max_multiplicity=max_mult,
        max_window=max_window,
        interim_multiplicity=interim,
        translation_passed=translation_passed,
        witness=witness,
    )


@dataclass(frozen=True)
class FluxReport:
    """Spectral and recursion data of the transition matrix."""

    perron_root: float
    perron_ratio: float
    perron_vector: tuple
    core: tuple
    slacks: tuple
    violations: tuple

    @property
    def recursion_ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "perron_root": self.perron_root,
            "perron_ratio": self.perron_ratio,
            "perron_vector": list(self.perron_vector),
            "core": [str(e) for e in self.core],
            "slacks": list(self.slacks),
            "violations": list(self.violations),
        }


def flux_comparability(model: ElephantModel, weights, matrix: HubbardMatrix = None) -> FluxReport:
    """Perron data of the recurrent core and the weight recursion check.

    weights is one nonnegative value per edge in all_edges order.  The
    recursion asks each edge weight to be at most the sum of weights
    over its image support.  The Perron vector lives on the recurrent
    core; for b = 0 the minus half-arc has no preimage and is excluded
    as transient.  The max/min ratio of the Perron vector entries is
    the comparability constant.
    """
    hm = matrix if matrix is not None else hubbard_matrix(model)
    edges = hm.edges
    mat = hm.matrix
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(edges),):
        raise ValueError(f"need {len(edges)} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0.0):
        raise ValueError("weights must be finite and nonnegative")
    n_comp, labels = connected_components(
        csr_matrix((mat > 0).astype(int)), directed=True, connection="strong"
    )
    core_label = labels[2] if len(edges) > 2 else labels[0]
    core_idx = [j for j, lab in enumerate(labels) if lab == core_label]
    required = [j for j, e in enumerate(edges) if e.kind == "gamma" or e.kind == "plus"]
    if not set(required) <= set(core_idx):
        raise ReducibleMatrixError(
            "transition digraph has no strongly connected core over the arcs"
        )
    sub = mat[np.ix_(core_idx, core_idx)].astype(float)
    vals, vecs = np.linalg.eig(sub)
    # periodic cores put several eigenvalues on the spectral circle;
    # the Perron root is the real positive one among them
    top = np.abs(vals).max()
    ring = [j for j in range(len(vals)) if abs(vals[j]) >= top * (1.0 - 1e-9)]
    lead = max(ring, key=lambda j: vals[j].real)
    root = vals[lead]
    vec = vecs[:, lead]
    if abs(root.imag) > 1e-9 * max(1.0, abs(root)):
        raise ReducibleMatrixError(f"leading eigenvalue not real: {root}")
    vec = np.real(vec)
    if vec.sum() < 0:
        vec = -vec
    if np.any(vec <= 0.0):
        raise ReducibleMatrixError("Perron vector not strictly positive")
    slacks = []
    violations = []
    for j, e in enumerate(edges):
        total = float(np.sum(w[mat[j] >= 1]))
        slack = total - float(w[j])
        slacks.append(slack)
        if slack < -1e-12:
            violations.append((str(e), slack))
    return FluxReport(
        perron_root=float(np.real(root)),
        perron_ratio=float(vec.max() / vec.min()),
        perron_vector=tuple(float(x) for x in vec / vec.sum()),
        core=tuple(edges[j] for j in core_idx),
        slacks=tuple(slacks),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class PullbackWindow:
    """Surviving sets and connecting arcs after iterated pullbacks."""

    lo: int
    hi: int
    losses: tuple
    guaranteed: tuple

    @property
    def surviving(self) -> tuple:
        return tuple(range(self.lo, self.hi + 1))

    @property
    def surviving_arcs(self) -> tuple:
        return tuple(range(self.lo, self.hi))


def translation_pullback(model: ElephantModel, center: int, radius: int, periods: int) -> PullbackWindow:
    """Erosion of a translation-domain window under full-period pullbacks.

    The window spans the 2*radius+1 sectors around the center.  The
    connecting arc below K_{n+1} survives one period when its
    full-period image support stays inside the current window; sets
    stay exactly as far as the chain of surviving arcs from the center
    reaches.  After k periods everything within radius - k*b of the
    center is guaranteed to survive; once k*b exceeds the radius the
    guarantee is vacuous and the chain may collapse to the center.
    """
    q, b, p = model.params.q, model.params.b, model.params.p
    lo, hi = center - radius, center + radius
    if not (1 <= lo and hi <= q - 1):
        raise TranslationRegionError(
            f"window [{lo}, {hi}] leaves the translation region 1..{q - 1}"
        )
    if periods < 0:
        raise ValueError("period count must be nonnegative")
    spans = {}

    def arc_span(n):
        # image support of the arc connecting K_n to K_{n+1}
        if n not in spans:
            idx = set()
            for piece in (gamma(n), gamma(n + 1)):
                idx.update(e.index for e in iterate_edge(model, piece, p))
            spans[n] = (min(idx), max(idx))
        return spans[n]

    losses = []
    for _ in range(periods):
        new_lo, new_hi = center, center
        while new_lo > lo:
            a, c = arc_span(new_lo - 1)
            if a < lo or c > hi:
                break
            new_lo -= 1
        while new_hi < hi:
            a, c = arc_span(new_hi)
            if a < lo or c > hi:
                break
            new_hi += 1
        losses.append((new_lo - lo, hi - new_hi))
        lo, hi = new_lo, new_hi
    g_lo, g_hi = center - radius + periods * b, center + radius - periods * b
    if g_lo <= g_hi and not (lo <= g_lo and g_hi <= hi):
        raise ErosionBoundError(
            f"surviving window [{lo}, {hi}] misses the guaranteed [{g_lo}, {g_hi}]"
        )
    return PullbackWindow(lo=lo, hi=hi, losses=tuple(losses), guaranteed=(g_lo, g_hi))
