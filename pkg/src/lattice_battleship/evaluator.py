"""Batch evaluation: per-position simulation of strategies, bound audits,
inequality sweeps on digital convex sets and exact small-shape surveys.

Audited bounds (n = |S|):

* elimination and greedy: at most n - 1 misses;
* staircase: at most ceil(log_1.5(n / 3)) + 4 misses;
* width: at most k* iterations and 2 k* + 24 misses, where k* is the least
  k >= 0 with n ** ((3/4) ** k) < 25;
* optimal c(S) at most every strategy's worst case (exhaustive runs only).

Report schema version ``SCHEMA_VERSION``. CSV columns are listed in
``CSV_COLUMNS``; the JSON report holds the same records plus bound checks.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .game_engine import explore
from .lattice_core import (
    Shape,
    WitnessUndefined,
    as_shape,
    blaschke_witness,
    convex_hull,
    is_digital_convex,
    is_hv_convex,
    is_parallelogram_free,
    is_polyomino,
    lattice_diameter,
    lattice_width,
)
from .optimal_solver import DEFAULT_MAX_N, solve
from .shape_gen import enumerate_digital_convex, shape_hash
from .strategies import AuditLog, NotApplicable, make_strategy

SCHEMA_VERSION = "1.0"
SUBSAMPLE_THRESHOLD = 5000
SUBSAMPLE_SIZE = 512

CSV_COLUMNS = (
    "schema",
    "shape_id",
    "sha256",
    "n",
    "polyomino",
    "hv_convex",
    "digital_convex",
    "parallelogram_free",
    "diameter",
    "width",
    "strategy",
    "positions",
    "subsampled",
    "max_misses",
    "mean_misses",
    "max_shots",
    "max_iterations",
    "bound",
    "bound_ok",
    "optimal",
    "audit_violations",
)

REQUIRED_CLASS = {"staircase": "hv_convex polyomino", "width": "digital_convex"}


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def staircase_bound(n: int) -> int:
    """ceil(log_1.5(n / 3)) + 4, computed exactly (negative logs allowed)."""
    if n < 1:
        raise ValueError("n must be positive")
    target = Fraction(n, 3)
    k = 0
    while Fraction(3, 2) ** k < target:
        k += 1
    while Fraction(3, 2) ** (k - 1) >= target:
        k -= 1
    return k + 4


def width_iteration_bound(n: int) -> int:
    """Least k >= 0 with n ** ((3/4) ** k) < 25, i.e. n ** (3**k) < 25 ** (4**k)."""
    if n < 1:
        raise ValueError("n must be positive")
    k = 0
    while n ** (3**k) >= 25 ** (4**k):
        k += 1
    return k


def width_miss_bound(n: int) -> int:
    return 2 * width_iteration_bound(n) + 24


def elimination_bound(n: int) -> int:
    return n - 1


MISS_BOUNDS = {
    "elimination": elimination_bound,
    "greedy": elimination_bound,
    "staircase": staircase_bound,
    "width": width_miss_bound,
}


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class BoundCheck:
    name: str
    bound: int
    observed: int
    passed: bool


@dataclass
class StrategyResult:
    name: str
    positions: int
    max_misses: int
    mean_misses: float
    max_shots: int
    max_iterations: Optional[int] = None
    violations: List[Tuple[str, str]] = field(default_factory=list)
    per_position: Dict[Tuple[int, int], int] = field(default_factory=dict, repr=False)


@dataclass
class EvalReport:
    shape_id: str
    sha256: str
    n: int
    flags: Dict[str, bool]
    diameter: int
    width: int
    strategies: Dict[str, StrategyResult]
    optimal: Optional[int]
    checks: List[BoundCheck]
    subsampled: bool
    sample_seed: Optional[int]
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and not any(r.violations for r in self.strategies.values())

    def to_dict(self) -> dict:
        return {
            "shape_id": self.shape_id,
            "sha256": self.sha256,
            "n": self.n,
            "flags": self.flags,
            "diameter": self.diameter,
            "width": self.width,
            "subsampled": self.subsampled,
            "sample_seed": self.sample_seed,
            "optimal": self.optimal,
            "strategies": {
                name: {
                    "positions": r.positions,
                    "max_misses": r.max_misses,
                    "mean_misses": round(r.mean_misses, 6),
                    "max_shots": r.max_shots,
                    "max_iterations": r.max_iterations,
                    "audit_violations": [{"check": c, "detail": d} for c, d in r.violations],
                }
                for name, r in self.strategies.items()
            },
            "checks": [asdict(c) for c in self.checks],
            "notes": self.notes,
            "passed": self.passed,
        }


def classify(shape) -> dict:
    shape = as_shape(shape)
    return {
        "n": shape.n,
        "polyomino": is_polyomino(shape),
        "hv_convex": is_hv_convex(shape),
        "digital_convex": is_digital_convex(shape),
        "parallelogram_free": is_parallelogram_free(shape),
        "diameter": lattice_diameter(shape),
        "width": lattice_width(shape).width,
    }


def describe_classes(flags: dict) -> str:
    names = [k for k in ("polyomino", "hv_convex", "digital_convex", "parallelogram_free") if flags.get(k)]
    return "+".join(names) if names else "general"


def sample_positions(shape: Shape, seed: int, size: int = SUBSAMPLE_SIZE) -> List[Tuple[int, int]]:
    """Seeded sample of ``size`` positions together with the hull vertices."""
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = np.sort(rng.choice(shape.n, size=min(size, shape.n), replace=False))
    picked = {tuple(int(v) for v in shape.coords[i]) for i in idx}
    picked.update(convex_hull(shape))
    return sorted(picked)


def simulate(shape, name: str, targets=None, audit: Optional[AuditLog] = None) -> StrategyResult:
    shape = as_shape(shape)
    audit = audit if audit is not None else AuditLog()
    strategy = make_strategy(name, audit)
    if not strategy.applicable(shape):
        raise NotApplicable(
            f"strategy {name!r} needs a {REQUIRED_CLASS.get(name, 'different')} shape; "
            f"shape is {describe_classes(classify_light(shape))}"
        )
    leaves = explore(shape, strategy, targets)
    misses = np.array([rec.misses for rec in leaves.values()], dtype=np.int64)
    shots = np.array([rec.shots for rec in leaves.values()], dtype=np.int64)
    iters = [rec.stats.get("iterations") for rec in leaves.values()]
    iters = [i for i in iters if i is not None]
    return StrategyResult(
        name=name,
        positions=len(leaves),
        max_misses=int(misses.max()),
        mean_misses=float(misses.mean()),
        max_shots=int(shots.max()),
        max_iterations=max(iters) if iters else None,
        violations=[(v.check, v.detail) for v in audit.violations],
        per_position={p: rec.misses for p, rec in sorted(leaves.items())},
    )


def classify_light(shape) -> dict:
    return {
        "polyomino": is_polyomino(shape),
        "hv_convex": is_hv_convex(shape),
        "digital_convex": is_digital_convex(shape),
        "parallelogram_free": is_parallelogram_free(shape),
    }


def applicable_strategies(shape, names: Sequence[str] = ("elimination", "greedy", "staircase", "width")) -> List[str]:
    return [n for n in names if make_strategy(n).applicable(shape)]


def evaluate(
    shape,
    strategies: Sequence[str],
    compute_optimal: bool = False,
    shape_id: str = "shape",
    seed: int = 0,
    subsample_threshold: int = SUBSAMPLE_THRESHOLD,
    solver_max_n: int = DEFAULT_MAX_N,
) -> EvalReport:
    shape = as_shape(shape)
    n = shape.n
    flags = classify(shape)
    targets = None
    subsampled = n > subsample_threshold
    if subsampled:
        targets = sample_positions(shape, seed)
    results: Dict[str, StrategyResult] = {}
    checks: List[BoundCheck] = []
    for name in strategies:
        res = simulate(shape, name, targets)
        results[name] = res
        bound = MISS_BOUNDS[name](n)
        checks.append(BoundCheck(f"{name}_misses", bound, res.max_misses, res.max_misses <= bound))
        if name == "width":
            kstar = width_iteration_bound(n)
            it = res.max_iterations or 0
            checks.append(BoundCheck("width_iterations", kstar, it, it <= kstar))
    optimal = None
    notes: List[str] = []
    if compute_optimal and n > solver_max_n:
        notes.append(f"optimal skipped: n = {n} exceeds the solver limit {solver_max_n}")
    elif compute_optimal:
        optimal = solve(shape, max_n=solver_max_n)
        checks.append(BoundCheck("optimal_le_n_minus_1", n - 1, optimal, optimal <= n - 1))
        if not subsampled:
            for name, res in results.items():
                checks.append(
                    BoundCheck(f"optimal_le_{name}", res.max_misses, optimal, optimal <= res.max_misses)
                )
    return EvalReport(
        shape_id=shape_id,
        sha256=shape_hash(shape),
        n=n,
        flags={k: flags[k] for k in ("polyomino", "hv_convex", "digital_convex", "parallelogram_free")},
        diameter=flags["diameter"],
        width=flags["width"],
        strategies=results,
        optimal=optimal,
        checks=checks,
        subsampled=subsampled,
        sample_seed=seed if subsampled else None,
        notes=notes,
    )


def _evaluate_job(args):
    shape_id, points, strategies, compute_optimal, seed = args
    shape = Shape(points)
    names = strategies if strategies else applicable_strategies(shape)
    return evaluate(shape, names, compute_optimal, shape_id=shape_id, seed=seed)


def evaluate_corpus(
    corpus: Iterable[Tuple[str, Shape]],
    strategies: Optional[Sequence[str]] = None,
    compute_optimal: bool = False,
    seed: int = 0,
    jobs: int = 1,
) -> List[EvalReport]:
    """Evaluate every shape; results keep corpus order regardless of ``jobs``.

    With ``strategies=None`` every applicable strategy is run.
    """
    work = [(sid, as_shape(s).coords, strategies, compute_optimal, seed) for sid, s in corpus]
    if jobs <= 1:
        return [_evaluate_job(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_job, work))


def reports_to_csv(reports: Sequence[EvalReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        bounds = {c.name: c for c in rep.checks}
        for name, r in rep.strategies.items():
            b = bounds.get(f"{name}_misses")
            writer.writerow(
                [
                    SCHEMA_VERSION,
                    rep.shape_id,
                    rep.sha256,
                    rep.n,
                    int(rep.flags["polyomino"]),
                    int(rep.flags["hv_convex"]),
                    int(rep.flags["digital_convex"]),
                    int(rep.flags["parallelogram_free"]),
                    rep.diameter,
                    rep.width,
                    name,
                    r.positions,
                    int(rep.subsampled),
                    r.max_misses,
                    f"{r.mean_misses:.6f}",
                    r.max_shots,
                    "" if r.max_iterations is None else r.max_iterations,
                    "" if b is None else b.bound,
                    "" if b is None else int(b.passed),
                    "" if rep.optimal is None else rep.optimal,
                    len(r.violations),
                ]
            )
    return buf.getvalue()


def reports_to_json(reports: Sequence[EvalReport], header: Optional[dict] = None) -> str:
    doc = {"schema": SCHEMA_VERSION, "run": header or {}, "reports": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# inequality sweep on digital convex sets
# ---------------------------------------------------------------------------

LEMMAS = ("lemma3", "lemma4", "lemma5", "blaschke")


@dataclass
class InequalityResult:
    shape_id: str
    n: int
    diameter: int
    width: int
    checks: List[BoundCheck]
    witness: Optional[dict]
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def check_inequalities(shape, shape_id: str = "shape", lemmas: Sequence[str] = LEMMAS) -> InequalityResult:
    shape = as_shape(shape)
    if not is_digital_convex(shape):
        raise ValueError(f"shape {shape_id} is not digitally convex")
    n = shape.n
    d = lattice_diameter(shape)
    w = lattice_width(shape).width
    checks = []
    if "lemma3" in lemmas:
        bound = (4 * d) // 3 + 1
        checks.append(BoundCheck("lemma3_width_le_4d_over_3_plus_1", bound, w, w <= bound))
    if "lemma4" in lemmas:
        # n >= 3/8 w^2 - 1/2 w + 3, scaled by 8
        rhs = 3 * w * w - 4 * w + 24
        checks.append(BoundCheck("lemma4_8n_ge_3w2_minus_4w_plus_24", rhs, 8 * n, 8 * n >= rhs))
    if "lemma5" in lemmas:
        checks.append(BoundCheck("lemma5_4n_ge_w2", w * w, 4 * n, 4 * n >= w * w))
    witness = None
    note = ""
    if "blaschke" in lemmas:
        try:
            wit = blaschke_witness(shape)
        except WitnessUndefined:
            note = "collinear: witness undefined"
        else:
            witness = {
                "a": list(wit.a),
                "b": list(wit.b),
                "x": list(wit.x),
                "y": list(wit.y),
                "quad_twice_area": wit.quad_twice_area,
                "quad_points": wit.quad_points,
            }
            checks.append(
                BoundCheck("blaschke_twice_area_ge_dw", d * w, wit.quad_twice_area, wit.area_bound_holds())
            )
            count_ok = wit.count_bound_holds(n)
            if count_ok is None:
                note = "degenerate quadrilateral: point count check skipped"
            else:
                checks.append(
                    BoundCheck("blaschke_2n_ge_dw_plus_6", d * w + 6, 2 * wit.quad_points, bool(count_ok))
                )
    return InequalityResult(shape_id, n, d, w, checks, witness, note)


def verify_inequalities(corpus: Iterable[Tuple[str, Shape]], lemmas: Sequence[str] = LEMMAS) -> List[InequalityResult]:
    return [check_inequalities(shape, sid, lemmas) for sid, shape in corpus]


# ---------------------------------------------------------------------------
# exact complexity of small digital convex sets
# ---------------------------------------------------------------------------


@dataclass
class ComplexitySurvey:
    max_n: int
    box: int
    rows: List[Tuple[int, int, Tuple[Tuple[int, int], ...]]]  # (n, c(S), points)

    @property
    def maximum(self) -> int:
        return max(c for _, c, _ in self.rows)

    def argmax(self) -> List[Tuple[Tuple[int, int], ...]]:
        m = self.maximum
        return [pts for _, c, pts in self.rows if c == m]

    def by_size(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for n, c, _ in self.rows:
            out[n] = max(out.get(n, 0), c)
        return out


def explore_small_convex_complexity(max_n: int = 10, box: Optional[int] = None) -> ComplexitySurvey:
    """Exact c(S) for every digital convex set with at most ``max_n`` points
    inside a ``box`` x ``box`` square (up to translation and square symmetry)."""
    if max_n > DEFAULT_MAX_N:
        raise ValueError(f"max_n = {max_n} exceeds the solver limit {DEFAULT_MAX_N}")
    if box is None:
        box = max(2, min(max_n, 5))
    rows = []
    for shape in enumerate_digital_convex(max_n, box):
        rows.append((shape.n, solve(shape), tuple(shape.points_list())))
    return ComplexitySurvey(max_n, box, rows)
