"""Game semantics: hidden-position oracle, shot outcomes and the update
rules for the set of positions still consistent with the shots so far.

A ship of shape S sits at an unknown position p in S (the first hit is at
the origin). A shot x hits iff x + p lies in S. After a hit at x the
possible positions become P & (S - x); after a miss, P - (S - x).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .lattice_core import LatticePoint, Shape, as_shape

HIT = "hit"
MISS = "miss"


class InconsistentOutcome(RuntimeError):
    """An update left no consistent position."""


class StrategyError(RuntimeError):
    """A strategy broke the game contract (repeat shot, livelock, runaway)."""


@dataclass(frozen=True)
class Declare:
    position: LatticePoint


class PositionSet:
    """Immutable set of candidate positions, kept in (x, y) order."""

    __slots__ = ("coords",)

    def __init__(self, points):
        if isinstance(points, PositionSet):
            arr = points.coords
        elif isinstance(points, Shape):
            arr = points.coords
        else:
            arr = as_shape(points).coords
        self.coords = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "PositionSet":
        obj = cls.__new__(cls)
        obj.coords = arr
        return obj

    def __len__(self) -> int:
        return int(self.coords.shape[0])

    def __iter__(self):
        return iter(self.to_list())

    def __contains__(self, point) -> bool:
        p = np.asarray(point, dtype=np.int64)
        return bool(np.any(np.all(self.coords == p, axis=1)))

    def __eq__(self, other) -> bool:
        if isinstance(other, PositionSet):
            return self.coords.shape == other.coords.shape and bool(np.all(self.coords == other.coords))
        if isinstance(other, (set, frozenset)):
            return self.as_set() == other
        return NotImplemented

    def __repr__(self) -> str:
        if len(self) <= 8:
            return f"PositionSet({self.to_list()})"
        return f"PositionSet(size={len(self)})"

    def to_list(self) -> List[LatticePoint]:
        return [(x, y) for x, y in self.coords.tolist()]

    def as_set(self) -> frozenset:
        return frozenset(self.to_list())

    def as_shape(self) -> Shape:
        return Shape._from_sorted(self.coords)

    def hit_mask(self, shape: Shape, shot: Sequence[int]) -> np.ndarray:
        """Which positions would register a hit for ``shot``."""
        return shape.contains(self.coords + np.asarray(shot, dtype=np.int64))

    def split(self, shape: Shape, shot: Sequence[int]) -> Tuple["PositionSet", "PositionSet"]:
        mask = self.hit_mask(shape, shot)
        return PositionSet._wrap(self.coords[mask]), PositionSet._wrap(self.coords[~mask])


@dataclass(frozen=True)
class Oracle:
    shape: Shape
    hidden_position: LatticePoint

    def __post_init__(self):
        if tuple(self.hidden_position) not in self.shape:
            raise ValueError(f"hidden position {self.hidden_position} is not in the shape")

    def answer(self, shot: Sequence[int]) -> str:
        return answer(self, shot)


def answer(oracle: Oracle, shot: Sequence[int]) -> str:
    p = oracle.hidden_position
    return HIT if (shot[0] + p[0], shot[1] + p[1]) in oracle.shape else MISS


def update(positions: PositionSet, shape: Shape, shot: Sequence[int], outcome: str) -> PositionSet:
    """Hit keeps P & (S - shot); miss keeps P - (S - shot)."""
    if len(positions) == 0:
        raise InconsistentOutcome("empty position set")
    mask = positions.hit_mask(shape, shot)
    if outcome == MISS:
        mask = ~mask
    elif outcome != HIT:
        raise ValueError(f"unknown outcome {outcome!r}")
    out = PositionSet._wrap(positions.coords[mask])
    if len(out) == 0:
        raise InconsistentOutcome(f"{outcome} at {tuple(shot)} leaves no consistent position")
    return out


def consistent_positions(shape: Shape, history: Iterable[Tuple[Sequence[int], str]]) -> PositionSet:
    """Recompute the consistent positions from scratch (membership check per shot)."""
    mask = np.ones(shape.n, dtype=bool)
    for shot, outcome in history:
        hit = shape.contains(shape.coords + np.asarray(shot, dtype=np.int64))
        mask &= hit if outcome == HIT else ~hit
    return PositionSet._wrap(shape.coords[mask])


def splitting_shot_exists(positions: PositionSet, shape: Shape) -> LatticePoint:
    """A shot hitting some but not all positions.

    Takes the two smallest positions p1 < p2 and returns the smallest shot of
    (S - p1) \\ (S - p2).
    """
    if len(positions) < 2:
        raise ValueError("need at least two positions to split")
    p1, p2 = positions.coords[0], positions.coords[1]
    cands = shape.coords - p1
    ok = ~shape.contains(cands + p2)
    x, y = cands[ok][0].tolist()
    return (x, y)


def perimeter(shape: Shape) -> int:
    """Number of unit edges between the shape and its complement."""
    c = shape.coords
    adj = 0
    for d in ((1, 0), (0, 1)):
        adj += int(shape.contains(c + np.array(d)).sum())
    return 4 * shape.n - 2 * adj


def livelock_limit(shape: Shape) -> int:
    return 4 * (shape.n + perimeter(shape))


def runaway_limit(shape: Shape) -> int:
    x0, y0, x1, y1 = shape.bbox
    return shape.n * (x1 - x0 + y1 - y0 + 2) + 16


@dataclass
class GameTrace:
    shots: List[Tuple[LatticePoint, str, int]] = field(default_factory=list)
    declared_position: Optional[LatticePoint] = None

    @property
    def miss_count(self) -> int:
        return sum(1 for _, o, _ in self.shots if o == MISS)

    @property
    def shot_count(self) -> int:
        return len(self.shots)

    def to_jsonl(self) -> str:
        lines = [
            json.dumps({"x": s[0], "y": s[1], "outcome": o, "remaining": r})
            for s, o, r in self.shots
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_jsonl(cls, text: str) -> "GameTrace":
        shots = []
        for line in text.splitlines():
            if line.strip():
                rec = json.loads(line)
                shots.append(((rec["x"], rec["y"]), rec["outcome"], rec["remaining"]))
        return cls(shots)


def run_game(shape, strategy, hidden_position, debug: bool = False) -> GameTrace:
    """Play one game of ``strategy`` against an honest oracle."""
    shape = as_shape(shape)
    oracle = Oracle(shape, tuple(hidden_position))
    strategy.start(shape)
    positions = PositionSet._wrap(shape.coords)
    history: List[Tuple[LatticePoint, str]] = []
    fired = set()
    trace = GameTrace()
    stale = 0
    stale_cap = livelock_limit(shape)
    shot_cap = runaway_limit(shape)
    while len(positions) > 1:
        shot = strategy.next_shot(shape, positions, history)
        if isinstance(shot, Declare):
            raise StrategyError(f"{strategy.name} declared {shot.position} with {len(positions)} positions left")
        shot = (int(shot[0]), int(shot[1]))
        if shot in fired:
            raise StrategyError(f"{strategy.name} repeated shot {shot}")
        fired.add(shot)
        outcome = oracle.answer(shot)
        new = update(positions, shape, shot, outcome)
        history.append((shot, outcome))
        if debug:
            check = consistent_positions(shape, history)
            if check != new:
                raise AssertionError("incremental update disagrees with recomputation")
            if oracle.hidden_position not in new:
                raise AssertionError("hidden position left the consistent set")
        stale = stale + 1 if len(new) == len(positions) else 0
        if stale > stale_cap:
            raise StrategyError(f"{strategy.name} made no progress for {stale} shots")
        positions = new
        trace.shots.append((shot, outcome, len(positions)))
        if len(trace.shots) > shot_cap:
            raise StrategyError(f"{strategy.name} exceeded {shot_cap} shots")
    trace.declared_position = positions.to_list()[0]
    if trace.declared_position != oracle.hidden_position:
        raise AssertionError("declared position differs from the hidden position")
    return trace


@dataclass
class LeafRecord:
    misses: int
    shots: int
    stats: Dict[str, int]


def explore(shape, strategy, targets: Optional[Iterable[Sequence[int]]] = None) -> Dict[LatticePoint, LeafRecord]:
    """Expand the strategy's decision tree.

    Every root-to-leaf path is the game the strategy plays for the leaf's
    position, so the result equals running :func:`run_game` once per
    position, at the cost of one split per tree node. With ``targets`` only
    branches containing a target position are expanded.
    """
    shape = as_shape(shape)
    strategy.start(shape)
    root = PositionSet._wrap(shape.coords)
    if targets is None:
        tmask = np.ones(shape.n, dtype=bool)
    else:
        want = np.array([tuple(t) for t in targets], dtype=np.int64).reshape(-1, 2)
        tmask = np.zeros(shape.n, dtype=bool)
        if want.shape[0]:
            lookup = Shape(want)
            tmask = lookup.contains(shape.coords)
    stale_cap = livelock_limit(shape)
    shot_cap = runaway_limit(shape)
    out: Dict[LatticePoint, LeafRecord] = {}
    stack = [(strategy, root, tmask, [], 0, 0)]
    while stack:
        strat, positions, tm, history, misses, stale = stack.pop()
        if len(positions) == 1:
            p = positions.to_list()[0]
            out[p] = LeafRecord(misses, len(history), strat.stats())
            continue
        shot = strat.next_shot(shape, positions, history)
        if isinstance(shot, Declare):
            raise StrategyError(f"{strat.name} declared with {len(positions)} positions left")
        shot = (int(shot[0]), int(shot[1]))
        if len(history) >= shot_cap:
            raise StrategyError(f"{strat.name} exceeded {shot_cap} shots")
        mask = positions.hit_mask(shape, shot)
        branches = []
        for outcome, m in ((MISS, ~mask), (HIT, mask)):
            if m.any() and tm[m].any():
                branches.append((outcome, m))
        for i, (outcome, m) in enumerate(branches):
            child = PositionSet._wrap(positions.coords[m])
            st = stale + 1 if len(child) == len(positions) else 0
            if st > stale_cap:
                raise StrategyError(f"{strat.name} made no progress for {st} shots")
            last = i == len(branches) - 1
            s = strat if last else strat.fork()
            h = history if last else list(history)
            h.append((shot, outcome))
            stack.append((s, child, tm[m], h, misses + (outcome == MISS), st))
    return out
