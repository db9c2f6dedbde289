"""Batch harness: instance generation, verification suites, reports.

Machine output is CSV with one row per check; every row carries its
instance seed and generator parameters.  Timestamps live only in the
JSON sidecar next to each CSV, so reports are byte-reproducible.
"""

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from .capacity import SolverError
from .elephant import (
    AxiomViolation,
    ElephantParams,
    admissible_placements,
    all_edges,
    build_model,
    check_bounded_degree,
    flux_comparability,
)
from .fuchsian import build_pants, thin_thick_surface_report
from .lamination import (
    BlaschkeMap,
    IdealMarking,
    gap_flux,
    key_estimate_check,
    thin_thick_report,
    transform_check,
)
from .pullback import (
    EnumerationBoundError,
    all_chords,
    chord,
    chord_straddles,
    find_admissible_orbits,
    newborn_vertical_ledger,
    orbit_itinerary,
    proof_branch_chain,
    pulloff_time,
    safe_delta,
    two_to_one_check,
    vertical_arc_exists,
    WeightLedger,
)
from .widths import (
    BoundaryCondenser,
    CapacityGrid,
    CircleArc,
    Quadrilateral,
    WidthDomainError,
    capacity_width,
    quad_width_exact,
    truncate_width,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CHECK = 2
EXIT_INPUT = 3

SUITES = ("widths", "lamination", "fuchsian", "elephant", "pullback")

CSV_COLUMNS = ("instance", "check", "seed", "params", "observed", "bound", "passed", "detail")


class CliInputError(ValueError):
    """Bad command line, config file, or input file."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by all subcommands; flags override the config file."""

    seed: int = 0
    suite: str = "all"
    resolution: int = 96
    eps: float | None = None
    delta: float | None = None
    count: int | None = None
    p_max: int = 12
    q_max: int = 20
    b_max: int = 3
    out: str = "reports"
    jobs: int = 1

    def validated(self) -> "RunConfig":
        if self.suite not in SUITES + ("all",):
            raise CliInputError(f"unknown suite {self.suite!r}")
        if self.resolution < 16:
            raise CliInputError("resolution must be at least 16")
        if not 2 <= self.p_max <= 24:
            raise CliInputError("p-max must lie in [2, 24]")
        if self.q_max < 2:
            raise CliInputError("q-max must be at least 2")
        if self.b_max < 0:
            raise CliInputError("b-max must be nonnegative")
        if self.jobs < 1:
            raise CliInputError("jobs must be at least 1")
        if self.count is not None and self.count < 1:
            raise CliInputError("count must be positive")
        if self.eps is not None and self.eps <= 0.0:
            raise CliInputError("eps must be positive")
        if self.delta is not None and self.delta <= 0.0:
            raise CliInputError("delta must be positive")
        return self


def load_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        try:
            raw = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise CliInputError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CliInputError(f"config file is not valid JSON: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        for key, val in raw.items():
            if key not in known:
                raise CliInputError(f"unknown config key {key!r}")
            values[key] = val
    for f in fields(RunConfig):
        flag = getattr(args, f.name.replace("-", "_"), None)
        if flag is not None:
            values[f.name] = flag
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise CliInputError(str(exc)) from exc
    return cfg.validated()


# ---------------------------------------------------------------------------
# deterministic report plumbing


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "pass" if value else "FAIL"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _params_json(params: dict) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def write_csv(path: Path, rows: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in CSV_COLUMNS])


def write_sidecar(path: Path, command: str, cfg: RunConfig, extra: dict | None = None) -> None:
    meta = {
        "command": command,
        "config": asdict(cfg),
        "written_utc": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        meta.update(extra)
    side = path.with_suffix(path.suffix + ".meta.json")
    side.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def family_seeds(seed: int, family: int, n: int) -> list:
    """Per-instance seeds, reproducible and independent of worker count."""
    return [int(s) for s in np.random.SeedSequence((seed, family)).generate_state(n)]


def run_tasks(tasks: list, jobs: int) -> list:
    """Run independent instance tasks, then assemble rows in id order.

    Tasks are (kind, payload) pairs; results keep submission order, so
    single-threaded assembly below is ordered by instance id.
    """
    if jobs <= 1:
        results = [_dispatch(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_dispatch, tasks))
    rows = []
    for chunk in results:
        rows.extend(chunk)
    return rows


def _dispatch(task: tuple) -> list:
    kind, payload = task
    return _TASK_FNS[kind](payload)


# ---------------------------------------------------------------------------
# instance generators


def _random_quad(rng, min_gap: float = 0.02) -> Quadrilateral:
    while True:
        pts = np.sort(rng.uniform(0.0, 1.0, 4))
        a, b, c, d = (float(t) for t in pts)
        if min(b - a, c - b, d - c, 1.0 - (d - a)) >= min_gap:
            return Quadrilateral(CircleArc.from_turns(a, b), CircleArc.from_turns(c, d))


def _random_quad_in_band(rng, lo: float = 0.2, hi: float = 5.0) -> Quadrilateral:
    while True:
        q = _random_quad(rng)
        if lo <= quad_width_exact(q) <= hi:
            return q


def _random_marking(rng, p: int, min_sep: float = 0.02) -> IdealMarking:
    while True:
        cuts = sorted(float(t) for t in rng.uniform(0.0, 1.0, 2 * p))
        ring = cuts + [cuts[0] + 1.0]
        if min(b - a for a, b in zip(ring, ring[1:])) < min_sep:
            continue
        return IdealMarking.from_turns(
            [(cuts[2 * i], cuts[2 * i + 1]) for i in range(p)]
        )


def _clustered_marking(rng, p: int) -> IdealMarking:
    # one tiny interval pinched between two large ones, so at least one
    # non-adjacent pair survives truncation and the right inequality is
    # exercised on a nonempty diagram
    tiny = int(rng.integers(1, p))
    lengths = [float(v) for v in rng.uniform(0.1, 0.4, p)]
    gaps = [float(v) for v in rng.uniform(0.01, 0.03, p)]
    lengths[tiny] = float(rng.uniform(5e-4, 2e-3))
    gaps[tiny - 1] = float(rng.uniform(3e-4, 1e-3))
    gaps[tiny] = float(rng.uniform(3e-4, 1e-3))
    total = sum(lengths) + sum(gaps)
    pairs = []
    pos = 0.0
    for length, gap in zip(lengths, gaps):
        pairs.append((pos / total, (pos + length) / total))
        pos += length + gap
    return IdealMarking.from_turns(pairs)


def _jittered_marking(rng, spread: float = 0.01) -> IdealMarking:
    # gentle, well-separated 4-interval marking for the covering checks
    base = [(0.0, 0.1), (0.2, 0.3), (0.45, 0.6), (0.7, 0.9)]
    pairs = [
        (s + float(rng.uniform(-spread, spread)), e + float(rng.uniform(-spread, spread)))
        for s, e in base
    ]
    return IdealMarking.from_turns(pairs)


# ---------------------------------------------------------------------------
# task bodies (module level so the worker pool can pickle them)


def _task_duality(payload: dict) -> list:
    rng = np.random.default_rng(payload["seed"])
    q = _random_quad(rng)
    a, b, c, d = q.corner_turns()
    product = quad_width_exact(q) * quad_width_exact(q.dual())
    tol = 1e-9
    return [{
        "instance": payload["instance"],
        "check": "duality",
        "seed": payload["seed"],
        "params": _params_json({"corners": [a, b, c, d]}),
        "observed": product,
        "bound": tol,
        "passed": abs(product - 1.0) <= tol,
        "detail": "wbar*dual_wbar",
    }]


def _task_oracle(payload: dict) -> list:
    rng = np.random.default_rng(payload["seed"])
    q = _random_quad_in_band(rng)
    a, b, c, d = q.corner_turns()
    exact = quad_width_exact(q)
    cond = BoundaryCondenser.from_turns([(a, b)], [(c, d)])
    cap = capacity_width(cond, CapacityGrid(resolution=payload["resolution"]))
    rel = abs(exact - cap) / exact
    return [{
        "instance": payload["instance"],
        "check": "oracle",
        "seed": payload["seed"],
        "params": _params_json(
            {"corners": [a, b, c, d], "resolution": payload["resolution"]}
        ),
        "observed": rel,
        "bound": payload["tol"],
        "passed": rel < payload["tol"],
        "detail": f"exact={exact!r};capacity={cap!r}",
    }]


def _task_reciprocal(payload: dict) -> list:
    rng = np.random.default_rng(payload["seed"])
    p = 3 + int(rng.integers(0, 5))
    m = _random_marking(rng, p)
    k = int(rng.integers(0, p))
    flux = gap_flux(m, k)
    quad = Quadrilateral(m.intervals[k], m.intervals[(k + 1) % p])
    product = flux * quad_width_exact(quad)
    tol = 1e-9
    return [{
        "instance": payload["instance"],
        "check": "gap-reciprocal",
        "seed": payload["seed"],
        "params": _params_json({"p": p, "gap": k}),
        "observed": product,
        "bound": tol,
        "passed": abs(product - 1.0) <= tol,
        "detail": "gap_flux*adjacent_width",
    }]


def _task_thin_thick(payload: dict) -> list:
    rng = np.random.default_rng(payload["seed"])
    m = _clustered_marking(rng, payload["p"])
    report = thin_thick_report(
        m, payload["eps"], CapacityGrid(resolution=payload["resolution"])
    )
    tol = 1e-3
    return [{
        "instance": payload["instance"],
        "check": "thin-thick-right",
        "seed": payload["seed"],
        "params": _params_json(
            {"p": payload["p"], "eps": payload["eps"], "resolution": payload["resolution"]}
        ),
        "observed": report.diagram_sum,
        "bound": report.total_weight + tol,
        "passed": report.right_inequality_holds(tol),
        "detail": f"deficit={report.deficit!r}",
    }]


def _task_transform(payload: dict) -> list:
    rng = np.random.default_rng(payload["seed"])
    m = _jittered_marking(rng)
    b = BlaschkeMap.random(rng, degree=2, max_radius=0.3)
    result = transform_check(b, m, CapacityGrid(resolution=payload["resolution"]))
    return [{
        "instance": payload["instance"],
        "check": "transform-rules",
        "seed": payload["seed"],
        "params": _params_json({"degree": 2, "resolution": payload["resolution"]}),
        "observed": result["worst_covering_excess"],
        "bound": 1e-3,
        "passed": result["ok"],
        "detail": (
            f"pair_violations={result['pair_violations']};"
            f"flux_violations={result['flux_violations']};"
            f"covering_violations={result['covering_violations']}"
        ),
    }]


def _task_key_estimate(payload: dict) -> list:
    rng = np.random.default_rng(payload["seed"])
    m = _jittered_marking(rng)
    b = BlaschkeMap.random(rng, degree=2, max_radius=0.3)
    result = key_estimate_check(b, m, CapacityGrid(resolution=payload["resolution"]))
    return [{
        "instance": payload["instance"],
        "check": "key-estimate",
        "seed": payload["seed"],
        "params": _params_json({"degree": 2, "resolution": payload["resolution"]}),
        "observed": result["pulled_weight"],
        "bound": result["diagram_weight"] + result["broken_weight"] - 1e-3,
        "passed": result["ok"],
        "detail": f"broken_weight={result['broken_weight']!r}",
    }]


def _task_pants(payload: dict) -> list:
    rng = np.random.default_rng(payload["seed"])
    lengths = [float(10.0 ** rng.uniform(-1.0, math.log10(30.0))) for _ in range(3)]
    g = build_pants(*lengths)
    report = thin_thick_surface_report(g, max_word=payload["max_word"])
    tol = 1e-3
    passed = report.right_inequality_holds(tol) and report.boundary_inequality_holds(tol)
    return [{
        "instance": payload["instance"],
        "check": "pants-right",
        "seed": payload["seed"],
        "params": _params_json({"lengths": lengths, "max_word": payload["max_word"]}),
        "observed": report.diagram_sum,
        "bound": report.total_weight + tol,
        "passed": passed,
        "detail": f"deficit={report.deficit!r}",
    }]


def _task_bounded_degree(payload: dict) -> list:
    q, b = payload["q"], payload["b"]
    params = ElephantParams(q, b)
    max_window = 0
    max_mult = 0
    literal_ok = True
    translation_ok = True
    for placement in admissible_placements(params):
        verdict = check_bounded_degree(build_model(params, placement))
        max_window = max(max_window, verdict.max_window)
        max_mult = max(max_mult, verdict.max_multiplicity)
        literal_ok = literal_ok and verdict.passed
        translation_ok = translation_ok and verdict.translation_passed
    bound = 2 * b + 1
    return [{
        "instance": payload["instance"],
        "check": "bounded-degree",
        "seed": payload["seed"],
        "params": _params_json({"q": q, "b": b}),
        "observed": max_window,
        "bound": bound,
        "passed": translation_ok and max_window <= bound,
        "detail": f"max_multiplicity={max_mult};literal={'pass' if literal_ok else 'FAIL'}",
    }]


def _task_flux_cv(payload: dict) -> list:
    b = payload["b"]
    ratios = []
    for q in range(payload["q_lo"], payload["q_hi"] + 1):
        params = ElephantParams(q, b)
        model = build_model(params, admissible_placements(params)[0])
        weights = [1.0] * len(all_edges(model))
        ratios.append(flux_comparability(model, weights).perron_ratio)
    arr = np.asarray(ratios)
    cv = float(arr.std() / arr.mean())
    return [{
        "instance": payload["instance"],
        "check": "flux-comparability",
        "seed": payload["seed"],
        "params": _params_json(
            {"b": b, "q_lo": payload["q_lo"], "q_hi": payload["q_hi"]}
        ),
        "observed": cv,
        "bound": 0.10,
        "passed": cv < 0.10,
        "detail": f"points={len(ratios)}",
    }]


def _task_pulloff_pair(payload: dict) -> list:
    q, b = payload["q"], payload["b"]
    params = ElephantParams(q, b)
    rows = []
    for idx, orbit in enumerate(find_admissible_orbits(params)):
        p = orbit.p
        max_time = 0
        tested = straddling = 0
        for i in range(p):
            for j in range(i + 1, p):
                c = chord(i, j)
                if chord_straddles(orbit, c):
                    straddling += 1
                    continue
                max_time = max(max_time, pulloff_time(orbit, c))
                tested += 1
        verdict = two_to_one_check(orbit)
        arc_found = True
        try:
            vertical_arc_exists(orbit, all_chords(orbit))
        except Exception:
            arc_found = False
        passed = (
            max_time < p
            and verdict.passed
            and verdict.paired_symmetric
            and not verdict.cycling
            and arc_found
        )
        rows.append({
            "instance": payload["instance"],
            "check": "pull-off",
            "seed": payload["seed"],
            "params": _params_json(
                {"q": q, "b": b, "orbit": idx, "root": str(orbit.angles[0])}
            ),
            "observed": max_time,
            "bound": p,
            "passed": passed,
            "detail": (
                f"chords={tested};straddling_excluded={straddling};"
                f"max_fiber={verdict.max_fiber}"
            ),
        })
    return rows


def _task_ledger_grid(payload: dict) -> list:
    checked = 0
    ok = True
    for num in range(20, 41):
        for nu_num in range(8, 17):
            w1 = Fraction(20)
            w0 = Fraction(num)
            nu = w0 * Fraction(nu_num, 16)
            chain = proof_branch_chain(w0, w1, nu)
            checked += 1
            ok = ok and chain["ok"]
    for w0, w1, nu, bound in ((100, 100, 50, 5), (120, 100, 60, 5)):
        verdict = newborn_vertical_ledger(WeightLedger(w0, w1, nu))
        checked += 1
        ok = ok and verdict.ok and verdict.bound == bound
    return [{
        "instance": payload["instance"],
        "check": "ledger-grid",
        "seed": payload["seed"],
        "params": _params_json({"w1": 20, "ratio_steps": 21, "nu_steps": 9}),
        "observed": checked,
        "bound": checked,
        "passed": ok,
        "detail": "both proof branches, exact arithmetic",
    }]


_TASK_FNS = {
    "duality": _task_duality,
    "oracle": _task_oracle,
    "reciprocal": _task_reciprocal,
    "thin-thick": _task_thin_thick,
    "transform": _task_transform,
    "key-estimate": _task_key_estimate,
    "pants": _task_pants,
    "bounded-degree": _task_bounded_degree,
    "flux-cv": _task_flux_cv,
    "pulloff": _task_pulloff_pair,
    "ledger": _task_ledger_grid,
}


# ---------------------------------------------------------------------------
# suite task builders


def _suite_tasks(suite: str, cfg: RunConfig) -> list:
    tasks = []
    nxt = 0

    def add(kind: str, payload: dict):
        nonlocal nxt
        payload["instance"] = nxt
        tasks.append((kind, payload))
        nxt += 1

    if suite == "widths":
        n_dual = cfg.count or 200
        n_oracle = min(cfg.count or 6, 6) if cfg.count is None else cfg.count
        for s in family_seeds(cfg.seed, 1, n_dual):
            add("duality", {"seed": s})
        for s in family_seeds(cfg.seed, 2, n_oracle):
            add("oracle", {"seed": s, "resolution": cfg.resolution,
                           "tol": cfg.eps if cfg.eps is not None else 1e-3})
    elif suite == "lamination":
        eps = cfg.eps if cfg.eps is not None else 2.0
        n_tt = cfg.count or 5
        seeds = family_seeds(cfg.seed, 3, n_tt)
        for i, s in enumerate(seeds):
            add("thin-thick", {"seed": s, "p": 4 + i % 5,
                               "eps": eps, "resolution": cfg.resolution})
        for s in family_seeds(cfg.seed, 4, cfg.count or 100):
            add("reciprocal", {"seed": s})
        for s in family_seeds(cfg.seed, 5, min(cfg.count or 2, 4)):
            add("transform", {"seed": s, "resolution": cfg.resolution})
        for s in family_seeds(cfg.seed, 6, min(cfg.count or 2, 4)):
            add("key-estimate", {"seed": s, "resolution": cfg.resolution})
    elif suite == "fuchsian":
        for s in family_seeds(cfg.seed, 7, cfg.count or 6):
            add("pants", {"seed": s, "max_word": 3})
    elif suite == "elephant":
        for q in range(2, cfg.q_max + 1):
            for b in range(0, min(cfg.b_max, q - 1) + 1):
                add("bounded-degree", {"seed": cfg.seed, "q": q, "b": b})
        if cfg.q_max >= 14:
            for b in range(0, cfg.b_max + 1):
                add("flux-cv", {"seed": cfg.seed, "b": b,
                                "q_lo": 10, "q_hi": cfg.q_max})
    elif suite == "pullback":
        for p in range(3, cfg.p_max + 1):
            for b in range(1, min(cfg.b_max, (p - 1) // 2) + 1):
                q = p - b
                if q < 2 or b >= q:
                    continue
                add("pulloff", {"seed": cfg.seed, "q": q, "b": b})
        add("ledger", {"seed": cfg.seed})
    else:
        raise CliInputError(f"unknown suite {suite!r}")
    return tasks


def run_suite(suite: str, cfg: RunConfig) -> list:
    return run_tasks(_suite_tasks(suite, cfg), cfg.jobs)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(cfg: RunConfig) -> int:
    suites = SUITES if cfg.suite == "all" else (cfg.suite,)
    out = Path(cfg.out)
    failures = []
    summary_lines = []
    for suite in suites:
        rows = run_suite(suite, cfg)
        path = out / f"verify_{suite}.csv"
        write_csv(path, rows)
        write_sidecar(path, f"verify --suite {suite}", cfg, {"rows": len(rows)})
        n_pass = sum(1 for r in rows if r["passed"])
        summary_lines.append(f"suite {suite}: {n_pass}/{len(rows)} checks passed")
        failures.extend(r for r in rows if not r["passed"])
    for row in failures:
        summary_lines.append(
            f"FAIL {row['check']} instance={row['instance']} "
            f"params={row['params']} observed={_fmt(row['observed'])} "
            f"bound={_fmt(row['bound'])} {row['detail']}"
        )
    summary_lines.append("RESULT: " + ("PASS" if not failures else "FAIL"))
    text = "\n".join(summary_lines) + "\n"
    (out / "verify_summary.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if not failures else EXIT_CHECK


def _parse_width_input(path: Path):
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliInputError("input must be a JSON object")
    try:
        if "I" in data and "J" in data:
            return Quadrilateral(
                CircleArc.from_turns(*map(float, data["I"])),
                CircleArc.from_turns(*map(float, data["J"])),
            )
        if "arcs" in data and len(data["arcs"]) == 2:
            (a, b), (c, d) = data["arcs"]
            return Quadrilateral(
                CircleArc.from_turns(float(a), float(b)),
                CircleArc.from_turns(float(c), float(d)),
            )
        if "plates0" in data and "plates1" in data:
            return BoundaryCondenser.from_turns(data["plates0"], data["plates1"])
    except (TypeError, ValueError, WidthDomainError) as exc:
        raise CliInputError(f"bad geometry in {path}: {exc}") from exc
    raise CliInputError(
        "input needs either I/J arcs, an arcs pair, or plates0/plates1"
    )


def cmd_width(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = Path(cfg.out)
    tol = cfg.eps if cfg.eps is not None else 1e-3
    grid = CapacityGrid(resolution=cfg.resolution)
    if args.input is None and not args.batch:
        raise CliInputError("width needs an input file or --batch N")
    if args.input is not None:
        obj = _parse_width_input(Path(args.input))
        if isinstance(obj, BoundaryCondenser):
            cap = capacity_width(obj, grid)
            print(f"capacity_width = {cap!r} (resolution {cfg.resolution})")
            return EXIT_OK
        exact = quad_width_exact(obj)
        cap = capacity_width(
            BoundaryCondenser((obj.I,), (obj.J,)), grid
        )
        rel = abs(exact - cap) / exact
        print(f"wbar_exact = {exact!r}")
        print(f"weight = {truncate_width(exact)!r} (truncated at 2)")
        print(f"capacity_width = {cap!r} (resolution {cfg.resolution})")
        print(f"rel_delta = {rel!r} (tolerance {tol!r})")
        print("PASS" if rel < tol else "FAIL")
        return EXIT_OK if rel < tol else EXIT_CHECK
    tasks = []
    for i, s in enumerate(family_seeds(cfg.seed, 2, args.batch)):
        tasks.append(("oracle", {
            "instance": i, "seed": s, "resolution": cfg.resolution, "tol": tol,
        }))
    rows = run_tasks(tasks, cfg.jobs)
    path = out / "width_batch.csv"
    write_csv(path, rows)
    write_sidecar(path, "width --batch", cfg, {"rows": len(rows)})
    n_pass = sum(1 for r in rows if r["passed"])
    print(f"width batch: {n_pass}/{len(rows)} within {tol!r} -> {path}")
    return EXIT_OK if n_pass == len(rows) else EXIT_CHECK


def cmd_enumerate_orbits(args: argparse.Namespace, cfg: RunConfig) -> int:
    try:
        params = ElephantParams(args.q, args.b)
    except (AxiomViolation, ValueError) as exc:
        raise CliInputError(f"bad (q, b): {exc}") from exc
    try:
        orbits = find_admissible_orbits(params)
    except EnumerationBoundError as exc:
        raise CliInputError(str(exc)) from exc
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for idx, orbit in enumerate(orbits):
        diag = orbit.to_dict()
        diag["q"] = params.q
        diag["b"] = params.b
        diag["itinerary"] = [list(r) for r in orbit_itinerary(params, orbit).sectors]
        diag["delta"] = str(safe_delta(orbit) if cfg.delta is None else cfg.delta)
        verdict = two_to_one_check(orbit)
        diag["two_to_one"] = verdict.to_dict()
        if verdict.cycling:
            diag["max_pulloff_time"] = None
        else:
            diag["max_pulloff_time"] = max(
                pulloff_time(orbit, chord(i, j))
                for i in range(orbit.p)
                for j in range(i + 1, orbit.p)
                if not chord_straddles(orbit, chord(i, j))
            )
        t0, t1 = vertical_arc_exists(orbit, all_chords(orbit))
        diag["vertical_arc"] = [str(t0), str(t1)]
        name = f"orbit_q{params.q}_b{params.b}_{idx:03d}.json"
        (out / name).write_text(json.dumps(diag, sort_keys=True, indent=2) + "\n")
        names.append(name)
    write_sidecar(
        out / f"orbits_q{params.q}_b{params.b}", "enumerate-orbits", cfg,
        {"q": params.q, "b": params.b, "files": names},
    )
    print(f"wrote {len(names)} orbit files to {out}")
    return EXIT_OK


def cmd_pants(args: argparse.Namespace, cfg: RunConfig) -> int:
    out = Path(cfg.out)
    tol = cfg.eps if cfg.eps is not None else 1e-3
    if args.lengths:
        l1, l2, l3 = args.lengths
        if min(l1, l2, l3) <= 0.0:
            raise CliInputError("boundary lengths must be positive")
        report = thin_thick_surface_report(build_pants(l1, l2, l3), max_word=4)
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
        ok = report.right_inequality_holds(tol) and report.boundary_inequality_holds(tol)
        print("PASS" if ok else "FAIL")
        return EXIT_OK if ok else EXIT_CHECK
    tasks = []
    for i, s in enumerate(family_seeds(cfg.seed, 7, cfg.count or 6)):
        tasks.append(("pants", {"instance": i, "seed": s, "max_word": 3}))
    rows = run_tasks(tasks, cfg.jobs)
    path = out / "pants_batch.csv"
    write_csv(path, rows)
    write_sidecar(path, "pants", cfg, {"rows": len(rows)})
    n_pass = sum(1 for r in rows if r["passed"])
    print(f"pants batch: {n_pass}/{len(rows)} passed -> {path}")
    return EXIT_OK if n_pass == len(rows) else EXIT_CHECK


def cmd_elephant(cfg: RunConfig) -> int:
    rows = run_suite("elephant", cfg)
    path = Path(cfg.out) / "elephant_sweep.csv"
    write_csv(path, rows)
    write_sidecar(path, "elephant", cfg, {"rows": len(rows)})
    n_pass = sum(1 for r in rows if r["passed"])
    print(f"elephant sweep q<={cfg.q_max}, b<={cfg.b_max}: "
          f"{n_pass}/{len(rows)} checks passed -> {path}")
    return EXIT_OK if n_pass == len(rows) else EXIT_CHECK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliInputError(message)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--seed", type=int, help="base seed for instance generation")
    parser.add_argument("--resolution", type=int, help="capacity solver node budget")
    parser.add_argument("--eps", type=float,
                        help="nearness epsilon (lamination) or tolerance (width)")
    parser.add_argument("--delta", type=float, help="thickening half-width in turns")
    parser.add_argument("--count", type=int, help="instances per check family")
    parser.add_argument("--p-max", type=int, dest="p_max", help="pullback period bound")
    parser.add_argument("--q-max", type=int, dest="q_max", help="elephant q bound")
    parser.add_argument("--b-max", type=int, dest="b_max", help="elephant b bound")
    parser.add_argument("--out", help="report directory")
    parser.add_argument("--jobs", type=int, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thinthick", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_width = sub.add_parser("width", help="width of one quadrilateral or a batch")
    p_width.add_argument("input", nargs="?", help="quadrilateral/condenser JSON file")
    p_width.add_argument("--batch", type=int, help="generate N random quadrilaterals")
    _common_flags(p_width)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", choices=SUITES + ("all",),
                          help="which suite to run (default all)")
    _common_flags(p_verify)

    p_enum = sub.add_parser("enumerate-orbits", help="admissible angle orbits for (q, b)")
    p_enum.add_argument("q", type=int)
    p_enum.add_argument("b", type=int)
    _common_flags(p_enum)

    p_pants = sub.add_parser("pants", help="thin-thick report for hyperbolic pants")
    p_pants.add_argument("--lengths", type=float, nargs=3, metavar=("L1", "L2", "L3"))
    _common_flags(p_pants)

    p_eleph = sub.add_parser("elephant", help="bounded-degree and flux sweep")
    _common_flags(p_eleph)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args)
        if args.command == "width":
            return cmd_width(args, cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "enumerate-orbits":
            return cmd_enumerate_orbits(args, cfg)
        if args.command == "pants":
            return cmd_pants(args, cfg)
        if args.command == "elephant":
            return cmd_elephant(cfg)
        raise CliInputError(f"unknown command {args.command!r}")
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        import traceback

        traceback.print_exc()
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
