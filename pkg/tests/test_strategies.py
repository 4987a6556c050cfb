import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import L_TROMINO, SEGMENT4, block, generated
from lattice_battleship.evaluator import staircase_bound, width_iteration_bound, width_miss_bound
from lattice_battleship.game_engine import PositionSet, explore, run_game
from lattice_battleship.lattice_core import Shape
from lattice_battleship.shape_gen import GenSpec, generate
from lattice_battleship.strategies import (
    REGISTRY,
    AuditLog,
    best_splitting_shot,
    distinguish_pair,
    make_strategy,
    shot_hit_counts,
    splitting_shots_bruteforce,
)
from lattice_battleship.strategies.width import HULL_THRESHOLD


def worst(shape, name, audit=None):
    leaves = explore(shape, make_strategy(name, audit))
    return max(r.misses for r in leaves.values())


def test_registry_names():
    assert set(REGISTRY) == {"elimination", "greedy", "staircase", "width"}
    with pytest.raises(ValueError):
        make_strategy("random")


def test_applicability():
    assert make_strategy("staircase").applicable(SEGMENT4)
    assert not make_strategy("staircase").applicable([(0, 0), (2, 0)])
    assert make_strategy("width").applicable(block(3, 3))
    assert not make_strategy("width").applicable([(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)])


# -- splitting helpers -------------------------------------------------------


@given(generated("random_polyomino", 2, 25), st.data())
def test_hit_count_sweep_matches_bruteforce(shape, data):
    pts = shape.points_list()
    subset = data.draw(st.lists(st.sampled_from(pts), min_size=2, unique=True))
    P = PositionSet(subset)
    brute = splitting_shots_bruteforce(shape, P)
    rows, xs, counts = shot_hit_counts(shape, P)
    # expand the run-length encoding
    swept = {}
    for i in range(len(rows) - 1):
        if rows[i + 1] != rows[i]:
            continue
        for x in range(xs[i], xs[i + 1]):
            if 0 < counts[i] < len(P):
                swept[(int(x), int(rows[i]))] = int(counts[i])
    assert swept == brute
    lex_first = min(brute, key=lambda x: (x[0], x[1]))
    assert best_splitting_shot(shape, P, greedy=False) == lex_first
    top = max(brute.values())
    greedy_pick = min((x for x, c in brute.items() if c == top), key=lambda x: (x[0], x[1]))
    assert best_splitting_shot(shape, P, greedy=True) == greedy_pick


def test_distinguish_pair_examples():
    s = Shape(SEGMENT4)
    assert distinguish_pair(PositionSet([(0, 0), (1, 0)]), s) == (3, 0)
    t = Shape(L_TROMINO)
    pair = PositionSet([(0, 0), (0, 1)])
    x = distinguish_pair(pair, t)
    assert int(pair.hit_mask(t, x).sum()) == 1
    with pytest.raises(ValueError):
        distinguish_pair(PositionSet(SEGMENT4), s)


@given(generated("random_polyomino", 2, 30), st.data())
def test_distinguish_pair_hits_exactly_one(shape, data):
    a, b = data.draw(st.lists(st.sampled_from(shape.points_list()), min_size=2, max_size=2, unique=True))
    pair = PositionSet([a, b])
    assert int(pair.hit_mask(shape, distinguish_pair(pair, shape)).sum()) == 1


# -- elimination and greedy --------------------------------------------------


def test_elimination_examples():
    assert worst(L_TROMINO, "elimination") == 2
    assert run_game([(0, 0)], make_strategy("elimination"), (0, 0)).miss_count == 0
    assert worst(SEGMENT4, "elimination") <= 3


def test_greedy_examples():
    assert worst(SEGMENT4, "greedy") == 1
    leaves = explore(SEGMENT4, make_strategy("greedy"))
    assert sorted(r.misses for r in leaves.values()) == [0, 1, 1, 1]


@given(st.one_of(generated("random_polyomino", 1, 40), generated("parallelogram_free", 1, 10)))
def test_elimination_and_greedy_cap(shape):
    for name in ("elimination", "greedy"):
        assert worst(shape, name) <= shape.n - 1


@given(generated("parallelogram_free", 2, 9))
def test_parallelogram_free_hits_identify(shape):
    # any hit on a nonzero shot leaves at most one position
    P = PositionSet(shape)
    for x in splitting_shots_bruteforce(shape, P):
        assert int(P.hit_mask(shape, x).sum()) <= 1
    assert worst(shape, "greedy") == shape.n - 1


def test_strategies_are_deterministic():
    shape = generate(GenSpec("hv_convex", n=60, seed=11))
    for name in ("elimination", "greedy", "staircase"):
        traces = [run_game(shape, make_strategy(name), (0, 0) if (0, 0) in shape else shape.points_list()[0]) for _ in range(2)]
        assert traces[0].shots == traces[1].shots


# -- staircase -----------------------------------------------------------------


def test_staircase_segment():
    leaves = explore(SEGMENT4, make_strategy("staircase"))
    # the engine stops once one position remains, so phase 1 ends early
    assert max(r.misses for r in leaves.values()) <= 2
    assert [leaves[(x, 0)].misses for x in range(4)] == [0, 1, 1, 1]


@pytest.mark.parametrize("a", range(1, 9))
@pytest.mark.parametrize("b", range(1, 9))
def test_staircase_rectangles(a, b):
    audit = AuditLog(strict=True)
    w = worst(block(a, b), "staircase", audit)
    assert w <= staircase_bound(a * b)
    assert w <= 4


@given(generated("hv_convex", 1, 400))
def test_staircase_bound_and_claims(shape):
    audit = AuditLog(strict=True)
    w = worst(shape, "staircase", audit)
    assert w <= staircase_bound(shape.n)


@st.composite
def equal_row_staircases(draw):
    ell = draw(st.integers(1, 6))
    shifts = draw(st.lists(st.integers(0, ell - 1), min_size=2, max_size=25))
    x, pts = 0, []
    for y, dx in enumerate([0] + shifts):
        x += dx
        pts += [(x + i, y) for i in range(ell)]
    if draw(st.booleans()):
        pts = [(-px, py) for px, py in pts]
    return Shape(pts)


@given(equal_row_staircases())
def test_staircase_on_equal_rows(shape):
    # every full-length row stays a candidate after the scan
    audit = AuditLog(strict=True)
    assert worst(shape, "staircase", audit) <= staircase_bound(shape.n)


def test_staircase_path_steps_are_unit_moves():
    shape = generate(GenSpec("hv_convex", n=300, seed=4))
    for p in shape.points_list()[::17]:
        strat = make_strategy("staircase", AuditLog(strict=True))
        run_game(shape, strat, p)
        path = strat.path
        for a, b in zip(path, path[1:]):
            assert (b[0] - a[0], b[1] - a[1]) in ((1, 0), (-1, 0), (0, 1))
        # every path cell is a hit for the hidden position
        assert all((s[0] + p[0], s[1] + p[1]) in shape for s in path)


def test_staircase_audits_run():
    audit = AuditLog(strict=True)
    for seed in range(20):
        shape = generate(GenSpec("hv_convex", n=200, seed=seed))
        explore(shape, make_strategy("staircase", audit))
    for name in ("phase1_candidates", "lemma2_monotone", "claim1_step"):
        assert audit.checks.get(name, 0) > 0
    assert not audit.violations


# -- width shooting ---------------------------------------------------------------


def test_width_small_shapes_fall_back_to_greedy():
    assert worst(block(3, 3), "width") == worst(block(3, 3), "greedy")
    leaves = explore(block(4, 4), make_strategy("width"))
    assert all(r.stats["iterations"] == 0 for r in leaves.values())


@given(generated("digital_convex", 25, 3000))
def test_width_bounds_and_claim3(shape):
    audit = AuditLog(strict=True)
    leaves = explore(shape, make_strategy("width", audit))
    kstar = width_iteration_bound(shape.n)
    for r in leaves.values():
        assert r.stats["iterations"] <= kstar
        it, scan = r.stats["iterations"], r.stats["scan_misses"]
        # two endpoint misses per finished iteration
        assert 2 * max(it - 1, 0) <= scan <= 2 * it
        assert r.misses <= width_miss_bound(shape.n)


def test_width_claim3_checked():
    audit = AuditLog(strict=True)
    shape = generate(GenSpec("digital_convex", n=2000, seed=3))
    explore(shape, make_strategy("width", audit))
    assert audit.checks.get("claim3_one_point_per_line", 0) > 0
    assert audit.checks.get("claim3_hull_bound", 0) > 0
    assert HULL_THRESHOLD == 25


def test_audit_log_records_and_raises():
    log = AuditLog()
    log.check("x", False, "bad")
    assert log.violations[0].check == "x"
    strict = AuditLog(strict=True)
    with pytest.raises(AssertionError):
        strict.check("y", False, "bad")


def test_fork_is_independent():
    shape = generate(GenSpec("hv_convex", n=50, seed=2))
    s = make_strategy("staircase")
    s.start(shape)
    P = PositionSet(shape)
    s.next_shot(shape, P, [])
    f = s.fork()
    f.path.append((99, 99))
    assert (99, 99) not in s.path
    assert np.array_equal(P.coords, PositionSet(shape).coords)
