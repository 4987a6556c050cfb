"""Acceptance suite.

Each criterion prints one line ``[PASS|FAIL] Cn: detail (runtime)`` and
asserts. Tolerances are pinned below. Run standalone with
``python tests/test_acceptance.py`` or through pytest.
"""

import math
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from lattice_battleship.evaluator import (
    SUBSAMPLE_THRESHOLD,
    check_inequalities,
    explore_small_convex_complexity,
    sample_positions,
    simulate,
    staircase_bound,
    width_iteration_bound,
)
from lattice_battleship.game_engine import explore, run_game
from lattice_battleship.lattice_core import Shape, is_digital_convex, is_hv_convex, is_parallelogram_free, is_polyomino
from lattice_battleship.optimal_solver import TreeStrategy, extract_tree, solve, worst_misses
from lattice_battleship.shape_gen import (
    GenSpec,
    enumerate_digital_convex,
    enumerate_polyominoes,
    generate,
    segment,
)
from lattice_battleship.strategies import AuditLog, Strategy, make_strategy

# pinned limits
C1_SECONDS = 1.0
C2_SECONDS = 5 * 60
C2_MIN_INSTANCES = 50
C3_SHAPES = 500
C3_MAX_N = 40
C4_SHAPES = 200
C4_MAX_N = 10**4
C4_SECONDS = 10 * 60
C5_EXTRA_SHAPES = 300
C6_SHAPES = 100
C6_MAX_N = 10**6
C6_SECONDS = 20 * 60
C7_SHAPES = 1000
C7_RANGE = (3, 10**5)
C7_SECONDS = 5 * 60
C8_MAX_N = 7
C8_MIN_SHAPES = 200
C8_SECONDS = 10 * 60
C10_MAX_N = 10
C10_EXPECTED = 3

MASTER_SEED = 20240601


class RightScan(Strategy):
    name = "right_scan"

    def start(self, shape):
        super().start(shape)
        self.k = 0

    def next_shot(self, shape, positions, history):
        self.k += 1
        return (self.k, 0)


def report(capsys, label, ok, detail, seconds):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail} ({seconds:.2f}s)"
    if capsys is None:
        print(line, flush=True)
    else:
        with capsys.disabled():
            print("\n" + line)
    return line


def log_sizes(rng, count, lo, hi):
    return [int(round(math.exp(v))) for v in rng.uniform(math.log(lo), math.log(hi), count)]


# -- sweeps (cached so criterion 5 reuses the audit logs) -------------------------------


@lru_cache(maxsize=None)
def staircase_sweep():
    rng = np.random.default_rng(MASTER_SEED + 4)
    sizes = log_sizes(rng, C4_SHAPES - 2, 3, C4_MAX_N) + [C4_MAX_N, C4_MAX_N]
    audit = AuditLog()
    worst_gap, failures = None, []
    t0 = time.perf_counter()
    for i, n in enumerate(sizes):
        shape = generate(GenSpec("hv_convex", n=n, seed=MASTER_SEED + i))
        assert is_polyomino(shape) and is_hv_convex(shape) and shape.n <= C4_MAX_N
        res = simulate(shape, "staircase", audit=audit)
        bound = staircase_bound(shape.n)
        gap = bound - res.max_misses
        worst_gap = gap if worst_gap is None else min(worst_gap, gap)
        if gap < 0:
            failures.append((i, shape.n, res.max_misses, bound))
    return dict(count=len(sizes), failures=failures, worst_gap=worst_gap, audit=audit,
                seconds=time.perf_counter() - t0, max_n=max(sizes))


@lru_cache(maxsize=None)
def width_sweep():
    rng = np.random.default_rng(MASTER_SEED + 6)
    targets = sorted(log_sizes(rng, C6_SHAPES - 1, 30, C6_MAX_N) + [int(C6_MAX_N / 1.2)])
    audit = AuditLog()
    failures, subsampled, max_n, max_iter = [], 0, 0, 0
    t0 = time.perf_counter()
    for i, n in enumerate(targets):
        shape = generate(GenSpec("digital_convex", n=n, seed=MASTER_SEED + i))
        assert is_digital_convex(shape) and shape.n <= C6_MAX_N
        targets_i = None
        if shape.n > SUBSAMPLE_THRESHOLD:
            targets_i = sample_positions(shape, MASTER_SEED + i)
            subsampled += 1
        res = simulate(shape, "width", targets_i, audit=audit)
        kstar = width_iteration_bound(shape.n)
        it = res.max_iterations or 0
        max_n, max_iter = max(max_n, shape.n), max(max_iter, it)
        if it > kstar or res.max_misses > 2 * kstar + 24:
            failures.append((i, shape.n, it, res.max_misses, kstar))
    return dict(count=len(targets), failures=failures, audit=audit, subsampled=subsampled,
                max_n=max_n, max_iter=max_iter, seconds=time.perf_counter() - t0)


@lru_cache(maxsize=None)
def enumerated_corpus():
    shapes = [s for s in enumerate_polyominoes(C8_MAX_N)]
    shapes += [s for s in enumerate_digital_convex(C8_MAX_N)]
    return shapes


# -- criteria -----------------------------------------------------------------------------------


def criterion_1(capsys=None):
    t0 = time.perf_counter()
    seg = segment(4)
    c = solve(seg)
    scan = max(run_game(seg, RightScan(), p).miss_count for p in seg.points_list())
    dt = time.perf_counter() - t0
    ok = c == 1 and scan == 1 and dt < C1_SECONDS
    report(capsys, "C1 segment of 4", ok, f"c(S) = {c}, right-scan worst = {scan}", dt)
    return ok


def criterion_2(capsys=None):
    t0 = time.perf_counter()
    # polyominoes that are parallelogram-free stop at three cells, so the
    # sweep adds generated parallelogram-free point sets
    polys = [s for s in enumerate_polyominoes(8) if s.n >= 2 and is_parallelogram_free(s)]
    sets = []
    for n in range(2, 9):
        for k in range(8):
            sets.append(generate(GenSpec("parallelogram_free", n=n, seed=MASTER_SEED + 10 * n + k)))
    bad = [(s.points_list(), solve(s)) for s in polys + sets if solve(s) != s.n - 1]
    dt = time.perf_counter() - t0
    count = len(polys) + len(sets)
    ok = not bad and count >= C2_MIN_INSTANCES and dt < C2_SECONDS and all(map(is_parallelogram_free, sets))
    report(capsys, "C2 parallelogram-free c(S) = n-1", ok,
           f"{count} instances ({len(polys)} polyominoes, max polyomino n = "
           f"{max(s.n for s in polys)}), {len(bad)} mismatches", dt)
    return ok


def criterion_3(capsys=None):
    t0 = time.perf_counter()
    rng = np.random.default_rng(MASTER_SEED + 3)
    classes = ["random_polyomino", "hv_convex", "digital_convex", "parallelogram_free", "segment"]
    bad, checked = [], 0
    for i in range(C3_SHAPES):
        cls = classes[i % len(classes)]
        hi = 12 if cls == "parallelogram_free" else C3_MAX_N
        n = int(rng.integers(1, hi + 1))
        shape = generate(GenSpec(cls, n=n, seed=MASTER_SEED + i))
        if shape.n > C3_MAX_N:
            shape = generate(GenSpec(cls, n=int(n * 0.8), seed=MASTER_SEED + i))
        worst = max(r.misses for r in explore(shape, make_strategy("elimination")).values())
        checked += 1
        if worst > shape.n - 1:
            bad.append((i, cls, shape.n, worst))
    dt = time.perf_counter() - t0
    ok = not bad and checked == C3_SHAPES
    report(capsys, "C3 elimination <= n-1", ok, f"{checked} shapes, {len(bad)} violations", dt)
    return ok


def criterion_4(capsys=None):
    r = staircase_sweep()
    ok = not r["failures"] and r["count"] >= C4_SHAPES and r["seconds"] < C4_SECONDS
    report(capsys, "C4 staircase bound", ok,
           f"{r['count']} HV-convex polyominoes up to n = {r['max_n']}, {len(r['failures'])} violations, "
           f"min slack {r['worst_gap']}", r["seconds"])
    return ok


def equal_row_staircases(count=C5_EXTRA_SHAPES, seed=MASTER_SEED + 5):
    """HV-convex polyominoes made of many rows of one length, shifted
    monotonically; they keep several candidates alive into the walk."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        h, ell = int(rng.integers(3, 40)), int(rng.integers(1, 9))
        x, pts = 0, []
        for y in range(h):
            length = ell if rng.random() < 0.7 else int(rng.integers(1, ell + 3))
            pts += [(x + i, y) for i in range(length)]
            x += int(rng.integers(0, max(1, min(length, ell))))
        if rng.random() < 0.5:
            pts = [(-px, py) for px, py in pts]
        shape = Shape(pts)
        if is_polyomino(shape) and is_hv_convex(shape):
            out.append(shape)
    return out


def criterion_5(capsys=None):
    t0 = time.perf_counter()
    extra = AuditLog()
    for shape in equal_row_staircases():
        simulate(shape, "staircase", audit=extra)
    logs = [staircase_sweep()["audit"], width_sweep()["audit"], extra]
    counts, violations = {}, []
    for log in logs:
        for k, v in log.checks.items():
            counts[k] = counts.get(k, 0) + v
        violations += log.violations
    needed = ("claim1_step", "claim2_two_thirds", "claim3_one_point_per_line", "claim3_hull_bound")
    exercised = all(counts.get(k, 0) > 0 for k in needed)
    ok = not violations and exercised
    detail = ", ".join(f"{k}={counts.get(k, 0)}" for k in needed + ("claim1_topmost",))
    report(capsys, "C5 runtime claim audits", ok, f"{len(violations)} violations; checks {detail}",
           time.perf_counter() - t0)
    return ok


def criterion_6(capsys=None):
    r = width_sweep()
    ok = not r["failures"] and r["count"] >= C6_SHAPES and r["seconds"] < C6_SECONDS
    report(capsys, "C6 width bounds", ok,
           f"{r['count']} digital convex sets up to n = {r['max_n']} ({r['subsampled']} subsampled), "
           f"max iterations {r['max_iter']}, {len(r['failures'])} violations", r["seconds"])
    return ok


def criterion_7(capsys=None):
    t0 = time.perf_counter()
    rng = np.random.default_rng(MASTER_SEED + 7)
    sizes = log_sizes(rng, C7_SHAPES - 2, C7_RANGE[0], C7_RANGE[1] / 1.2) + [C7_RANGE[0], int(C7_RANGE[1] / 1.2)]
    bad, witnessed, lo, hi = [], 0, None, 0
    for i, n in enumerate(sizes):
        shape = generate(GenSpec("digital_convex", n=n, seed=MASTER_SEED + 7000 + i))
        lo = shape.n if lo is None else min(lo, shape.n)
        hi = max(hi, shape.n)
        res = check_inequalities(shape, f"c7-{i}")
        if any(c.name.startswith("blaschke_twice_area") for c in res.checks):
            witnessed += 1
        if not res.passed:
            bad.append((i, shape.n, [c.name for c in res.checks if not c.passed]))
    dt = time.perf_counter() - t0
    ok = not bad and len(sizes) == C7_SHAPES and dt < C7_SECONDS and hi <= C7_RANGE[1]
    report(capsys, "C7 lemma sweep", ok,
           f"{len(sizes)} shapes, n in [{lo}, {hi}], {witnessed} area witnesses, {len(bad)} violations", dt)
    return ok


def criterion_8(capsys=None):
    t0 = time.perf_counter()
    shapes = enumerated_corpus()
    bad = []
    for s in shapes:
        c = solve(s)
        plain = solve(s, memo=False)
        tree = extract_tree(s)
        replay = max(run_game(s, TreeStrategy(tree), p).miss_count for p in s.points_list())
        if not (c == plain == worst_misses(tree) == replay):
            bad.append((s.points_list(), c, plain, replay))
    dt = time.perf_counter() - t0
    ok = not bad and len(shapes) >= C8_MIN_SHAPES and dt < C8_SECONDS
    report(capsys, "C8 oracle equivalence", ok, f"{len(shapes)} enumerated shapes n <= {C8_MAX_N}, {len(bad)} mismatches", dt)
    return ok


def criterion_9(capsys=None):
    t0 = time.perf_counter()
    shapes = list(enumerated_corpus())
    for i, cls in enumerate(["random_polyomino", "hv_convex", "digital_convex", "parallelogram_free"] * 25):
        shapes.append(generate(GenSpec(cls, n=8 + i % 7, seed=MASTER_SEED + 900 + i)))
    bad, checked = [], 0
    for s in shapes:
        if s.n > 14:
            continue
        c = solve(s)
        g = max(r.misses for r in explore(s, make_strategy("greedy")).values())
        checked += 1
        if not c <= g <= s.n - 1:
            bad.append((s.points_list(), c, g))
    dt = time.perf_counter() - t0
    ok = not bad
    report(capsys, "C9 sandwich c <= greedy <= n-1", ok, f"{checked} shapes, {len(bad)} violations", dt)
    return ok


def criterion_10(capsys=None):
    t0 = time.perf_counter()
    survey = explore_small_convex_complexity(C10_MAX_N)
    m = survey.maximum
    note = f"expected <= {C10_EXPECTED}" if m <= C10_EXPECTED else f"FINDING: exceeds {C10_EXPECTED}"
    report(capsys, "C10 small convex survey (reported)", True,
           f"{len(survey.rows)} digital convex sets n <= {C10_MAX_N}, max c(S) = {m} ({note}), "
           f"by size {survey.by_size()}", time.perf_counter() - t0)
    return True


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.slow
@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"C{i}" for i in range(1, 11)])
def test_criterion(criterion, capsys):
    assert criterion(capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
