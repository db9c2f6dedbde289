"""Condenser capacity on the disk by a boundary Galerkin method.

The extremal width of the family of curves connecting two disjoint
boundary plates equals the Dirichlet energy of the harmonic potential
that is 0 on one plate, 1 on the other, and has vanishing normal
derivative on the free boundary.  The potential's boundary trace
minimizes the energy of the harmonic extension, and for a 2*pi-periodic
piecewise-linear trace the energy has an exact closed form

    E(g, h) = (1/pi) * sum_{i,j} sigma_i(g) sigma_j(h) Cl3(t_i - t_j)

where sigma_i are the slope jumps at the nodes t_i and Cl3 is the third
Clausen function, Cl3(t) = sum_{n>=1} cos(n t)/n^3.  Minimizing over the
trace values at the free-boundary nodes (plate nodes are pinned) is a
dense symmetric solve.  The discrete minimum converges to the capacity
from above as nodes are added; nodes are cosine-graded toward the plate
junctions where the potential has square-root behavior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.special import zeta


class DegeneratePlateError(ValueError):
    """A plate has zero total arc length or the plate closures touch."""


class PlateOverlapError(ValueError):
    """Plate arcs overlap."""


class SolverError(RuntimeError):
    """The linear solve failed; carries the residual for diagnostics."""

    def __init__(self, message: str, residual: float = math.nan):
        super().__init__(message)
        self.residual = residual


_N_SERIES = 40
_K = np.arange(1, _N_SERIES + 1)
# Cl3(t) = zeta(3) - (3/4) t^2 + (t^2/2) log|t| - sum_k B_k t^(2k+2)
_B = zeta(2 * _K) / (_K * (2 * _K + 1) * (2 * _K + 2)) / (2.0 * np.pi) ** (2 * _K)
_ZETA3 = float(zeta(3))


def clausen3(theta):
    """Third Clausen function, vectorized; argument reduced mod 2*pi."""
    th = np.asarray(theta, dtype=float)
    th = np.mod(th + np.pi, 2.0 * np.pi) - np.pi
    t2 = th * th
    acc = np.zeros_like(t2)
    power = t2 * t2  # t^(2k+2) starting at k=1
    for bk in _B:
        acc += bk * power
        power = power * t2
    safe = np.maximum(np.abs(th), 1e-300)
    return _ZETA3 - 0.75 * t2 + 0.5 * t2 * np.log(safe) - acc


@dataclass
class CondenserSolution:
    """Result of one capacity solve."""

    energy: float
    node_count: int
    free_count: int
    residual: float
    resolution: int
    extrapolated: float | None = None
    chart: str = "cosine-graded piecewise-linear boundary traces"

    def report(self) -> dict:
        return {
            "energy": self.energy,
            "nodes": self.node_count,
            "free_nodes": self.free_count,
            "residual": self.residual,
            "resolution": self.resolution,
            "extrapolated": self.extrapolated,
            "chart": self.chart,
        }


def _normalize_arcs(arcs) -> list[tuple[float, float]]:
    """Arcs as (start, length) pairs in turns, lengths in (0, 1)."""
    out = []
    for s, e in arcs:
        s = float(s) % 1.0
        length = (float(e) - float(s)) % 1.0
        if length <= 0.0 or length >= 1.0:
            raise DegeneratePlateError(f"arc ({s}, {e}) has invalid length")
        out.append((s, length))
    return out


def _build_pieces(plates: list[tuple[list, float]]):
    """Partition the circle into plate pieces and free pieces.

    plates: list of (arcs, value) with arcs as (start, end) pairs in turns.
    Returns (start_turn, length_turn, value_or_None) pieces walking ccw.
    """
    tagged = []
    for arcs, value in plates:
        if not arcs:
            raise DegeneratePlateError("a plate has no arcs")
        for s, length in _normalize_arcs(arcs):
            tagged.append((s, length, float(value)))
    tagged.sort()
    if sum(length for _, length, _ in tagged) >= 1.0:
        raise PlateOverlapError("plate arcs cover the whole circle or overlap")
    pieces = []
    for i, (s, length, value) in enumerate(tagged):
        ns, _, nv = tagged[(i + 1) % len(tagged)]
        advance = (ns - s) % 1.0 if len(tagged) > 1 else 1.0
        gap = advance - length
        if gap < -1e-15:
            raise PlateOverlapError("plate arcs overlap")
        pieces.append((s, length, value))
        if gap <= 1e-15:
            if nv != value:
                raise DegeneratePlateError("plate closures touch; width is infinite")
        else:
            pieces.append(((s + length) % 1.0, gap, None))
    return pieces


def _cosine_nodes(n: int) -> np.ndarray:
    """Interior subdivision of [0,1] with quadratic clustering at both ends."""
    u = np.arange(1, n) / n
    return 0.5 * (1.0 - np.cos(np.pi * u))


def solve_condenser(
    plate0, plate1, resolution: int = 256, extrapolate: bool = False
) -> CondenserSolution:
    """Capacity of the condenser with plates held at 0 and 1.

    plate0, plate1: lists of (start, end) arcs in turns.  resolution is
    the free-boundary node budget.  With extrapolate=True a second solve
    at half resolution feeds a Richardson step (the scheme is second
    order in the node spacing).
    """
    return solve_mixed([(plate0, 0.0), (plate1, 1.0)], resolution, extrapolate)


def solve_mixed(
    plates, resolution: int = 256, extrapolate: bool = False
) -> CondenserSolution:
    """Dirichlet energy with several plates held at arbitrary fixed values.

    plates: list of (arcs, value) pairs.  The energy is quadratic in the
    plate values, which makes floating-conductor minima exactly computable
    from three solves.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    sol = _solve_once(plates, resolution)
    if extrapolate:
        low = _solve_once(plates, resolution // 2)
        sol.extrapolated = sol.energy + (sol.energy - low.energy) / 3.0
    return sol


def _solve_once(plates, resolution: int) -> CondenserSolution:
    pieces = _build_pieces([(list(arcs), value) for arcs, value in plates])
    n_free_pieces = sum(1 for _, _, v in pieces if v is None)

    node_turns: list[float] = []
    node_fixed: list[float | None] = []  # plate value, or None for unknown
    for start, length, value in pieces:
        # junction node at the start of each piece: fixed if either side is
        # a plate; walking ccw, the start junction belongs to this piece's
        # predecessor too, so assign the plate value when present
        if value is not None:
            node_turns.append(start)
            node_fixed.append(float(value))
            interior = []
        else:
            # start junction inherits the previous plate's value
            node_turns.append(start)
            prev_value = _prev_plate_value(pieces, start)
            node_fixed.append(prev_value)
            n = max(8, resolution // max(n_free_pieces, 1))
            interior = list(start + length * _cosine_nodes(n))
        for t in interior:
            node_turns.append(t % 1.0)
            node_fixed.append(None)

    order = np.argsort(np.asarray(node_turns))
    t = np.asarray(node_turns, dtype=float)[order] * 2.0 * math.pi
    fixed = [node_fixed[i] for i in order]
    m = len(t)

    gaps = np.diff(np.concatenate([t, [t[0] + 2.0 * math.pi]]))
    if np.any(gaps <= 0):
        keep = np.concatenate([[True], np.diff(t) > 1e-15])
        t = t[keep]
        fixed = [f for f, k in zip(fixed, keep) if k]
        m = len(t)
        gaps = np.diff(np.concatenate([t, [t[0] + 2.0 * math.pi]]))

    # slope-jump operator: sigma_i = (v_{i+1}-v_i)/gap_i - (v_i-v_{i-1})/gap_{i-1}
    inv = 1.0 / gaps
    d = np.zeros((m, m))
    idx = np.arange(m)
    d[idx, idx] = -(inv + np.roll(inv, 1))
    d[idx, (idx + 1) % m] = inv
    d[idx, (idx - 1) % m] = np.roll(inv, 1)

    c = clausen3(t[:, None] - t[None, :])
    a = (d.T @ c @ d) / math.pi

    v = np.array([f if f is not None else 0.0 for f in fixed])
    free = np.array([f is None for f in fixed])
    n_free = int(free.sum())
    if n_free:
        aff = a[np.ix_(free, free)]
        rhs = -a[np.ix_(free, ~free)] @ v[~free]
        try:
            vf = cho_solve(cho_factor(aff + 1e-13 * np.eye(n_free)), rhs)
        except np.linalg.LinAlgError:
            vf = np.linalg.lstsq(aff, rhs, rcond=None)[0]
        residual = float(np.linalg.norm(aff @ vf - rhs, ord=np.inf))
        if not np.all(np.isfinite(vf)):
            raise SolverError("solution not finite", residual)
        v[free] = vf
    else:
        residual = 0.0

    energy = float(v @ a @ v)
    return CondenserSolution(
        energy=energy,
        node_count=m,
        free_count=n_free,
        residual=residual,
        resolution=resolution,
    )


def _prev_plate_value(pieces, start_turn: float) -> float:
    """Plate value on the ccw-predecessor side of a junction."""
    for s, length, value in pieces:
        if abs((s + length) % 1.0 - start_turn) < 1e-15 and value is not None:
            return float(value)
    # junction between two free pieces cannot occur by construction
    raise AssertionError("free piece not flanked by a plate")


def harmonic_trace_energy(values, turns) -> float:
    """Exact Dirichlet energy of the harmonic extension of the
    piecewise-linear boundary trace with the given node values (turns
    sorted ccw).  Exposed for oracle tests."""
    t = np.asarray(turns, dtype=float) * 2.0 * math.pi
    v = np.asarray(values, dtype=float)
    m = len(t)
    gaps = np.diff(np.concatenate([t, [t[0] + 2.0 * math.pi]]))
    inv = 1.0 / gaps
    slopes = (np.roll(v, -1) - v) * inv
    sigma = slopes - np.roll(slopes, 1)
    c = clausen3(t[:, None] - t[None, :])
    return float(sigma @ c @ sigma) / math.pi


def network_capacitances(arcs_a, arcs_b, arcs_c, resolution: int = 256):
    """Pairwise mutual capacitances (c_ab, c_ac, c_bc) of a three-conductor
    boundary system, from three two-plate solves and the Y-Delta relations."""
    cap_a = solve_condenser(list(arcs_b) + list(arcs_c), arcs_a, resolution).energy
    cap_b = solve_condenser(list(arcs_a) + list(arcs_c), arcs_b, resolution).energy
    cap_c = solve_condenser(list(arcs_a) + list(arcs_b), arcs_c, resolution).energy
    c_ab = 0.5 * (cap_a + cap_b - cap_c)
    c_ac = 0.5 * (cap_a + cap_c - cap_b)
    c_bc = 0.5 * (cap_b + cap_c - cap_a)
    return c_ab, c_ac, c_bc
