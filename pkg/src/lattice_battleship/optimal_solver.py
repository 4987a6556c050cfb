"""Exact Battleship complexity c(S) by memoized minimax over position sets.

Position sets are bitmasks over the points of S (in (x, y) order), which
identifies a set of positions in S's own frame. A shot's effect on a
position set depends only on which positions it hits, so shots with the
same hit mask are interchangeable and are searched once.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .game_engine import HIT, PositionSet
from .lattice_core import LatticePoint, as_shape
from .strategies.base import Strategy

DEFAULT_MAX_N = int(os.environ.get("LATTICE_BATTLESHIP_MAX_N", 16))
DEFAULT_MAX_STATES = int(os.environ.get("LATTICE_BATTLESHIP_MAX_STATES", 5_000_000))


class SolverLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveState:
    positions: Tuple[LatticePoint, ...]
    value: int


@dataclass(frozen=True)
class Leaf:
    position: LatticePoint


@dataclass(frozen=True)
class Node:
    shot: LatticePoint
    hit: "Tree"
    miss: "Tree"


Tree = Union[Leaf, Node]


def _popcount(x: int) -> int:
    return bin(x).count("1")


class Solver:
    """Minimax search for one shape; memo entries are exact values."""

    def __init__(self, shape, max_n: int = DEFAULT_MAX_N, max_states: int = DEFAULT_MAX_STATES, memo: bool = True):
        self.shape = as_shape(shape)
        if self.shape.n > max_n:
            raise SolverLimitError(f"n = {self.shape.n} exceeds the solver limit {max_n}")
        self.max_states = max_states
        self.use_memo = memo
        self.points = self.shape.points_list()
        index = {p: i for i, p in enumerate(self.points)}
        self.full = (1 << len(self.points)) - 1
        masks: Dict[int, LatticePoint] = {}
        shots = sorted({(s[0] - p[0], s[1] - p[1]) for p in self.points for s in self.points})
        for x in shots:
            m = 0
            for i, p in enumerate(self.points):
                if (p[0] + x[0], p[1] + x[1]) in index:
                    m |= 1 << i
            if m not in masks:
                masks[m] = x  # smallest shot with this hit mask
        self.shot_masks: List[Tuple[int, LatticePoint]] = sorted(((m, x) for m, x in masks.items()), key=lambda t: t[1])
        self.memo: Dict[int, int] = {}
        self.nodes = 0

    def mask_of(self, positions) -> int:
        index = {p: i for i, p in enumerate(self.points)}
        m = 0
        for p in positions:
            m |= 1 << index[tuple(p)]
        return m

    def positions_of(self, mask: int) -> List[LatticePoint]:
        return [p for i, p in enumerate(self.points) if mask >> i & 1]

    def candidates(self, P: int) -> List[Tuple[int, int, LatticePoint]]:
        """Distinct splits (hit, miss, shot), ordered by miss size then shot."""
        seen = set()
        out = []
        for m, x in self.shot_masks:
            h = P & m
            if h == 0 or h == P or h in seen:
                continue
            seen.add(h)
            out.append((h, P & ~m, x))
        out.sort(key=lambda t: (_popcount(t[1]), t[2]))
        return out

    def value(self, P: int) -> int:
        if P & (P - 1) == 0:
            return 0
        if self.use_memo:
            v = self.memo.get(P)
            if v is not None:
                return v
        self.nodes += 1
        best = _popcount(P) - 1
        if best > 1:
            for h, m, _ in self.candidates(P):
                vm = self.value(m)
                if 1 + vm >= best:
                    continue
                vh = self.value(h)
                if vh >= best:
                    continue
                best = max(vh, 1 + vm)
                if best == 1:
                    break
        if self.use_memo:
            if len(self.memo) >= self.max_states:
                raise SolverLimitError(f"memo exceeded {self.max_states} states")
            self.memo[P] = best
        return best

    def fits(self, P: int, k: int, cache: Dict[Tuple[int, int], bool]) -> bool:
        """Can P be resolved with at most k misses?"""
        if P & (P - 1) == 0:
            return True
        if k == 0:
            return False
        key = (P, k)
        got = cache.get(key)
        if got is not None:
            return got
        ok = False
        for h, m, _ in self.candidates(P):
            if self.fits(m, k - 1, cache) and self.fits(h, k, cache):
                ok = True
                break
        cache[key] = ok
        return ok

    def tree(self, P: int) -> Tree:
        if P & (P - 1) == 0:
            return Leaf(self.positions_of(P)[0])
        target = self.value(P)
        for h, m, x in self.candidates(P):
            if max(self.value(h), 1 + self.value(m)) == target:
                return Node(x, self.tree(h), self.tree(m))
        raise AssertionError("no shot attains the solved value")  # pragma: no cover

    def states(self) -> List[SolveState]:
        return [SolveState(tuple(self.positions_of(P)), v) for P, v in sorted(self.memo.items())]


def solve(shape, budget: Optional[int] = None, max_n: int = DEFAULT_MAX_N, memo: bool = True) -> Optional[int]:
    """c(S). With ``budget``, returns c(S) if it is at most ``budget`` and
    None otherwise, searching only trees within the budget."""
    solver = Solver(shape, max_n=max_n, memo=memo)
    if budget is None:
        return solver.value(solver.full)
    cache: Dict[Tuple[int, int], bool] = {}
    for k in range(0, budget + 1):
        if solver.fits(solver.full, k, cache):
            return k
    return None


def candidate_shots(positions, shape) -> List[LatticePoint]:
    """Every shot splitting P, ordered by miss-branch size then (x, y)."""
    shape = as_shape(shape)
    pos = list(positions) if not isinstance(positions, PositionSet) else positions.to_list()
    if len(pos) < 2:
        raise ValueError("need at least two positions")
    pts = shape.points
    cands = {(s[0] - p[0], s[1] - p[1]) for p in pos for s in pts}
    out = []
    for x in cands:
        hits = sum(1 for p in pos if (p[0] + x[0], p[1] + x[1]) in pts)
        if 0 < hits < len(pos):
            out.append((len(pos) - hits, x))
    out.sort()
    return [x for _, x in out]


def extract_tree(shape, max_n: int = DEFAULT_MAX_N) -> Tree:
    solver = Solver(shape, max_n=max_n)
    return solver.tree(solver.full)


# ---------------------------------------------------------------------------
# tree utilities
# ---------------------------------------------------------------------------


def leaves(tree: Tree) -> List[LatticePoint]:
    if isinstance(tree, Leaf):
        return [tree.position]
    return leaves(tree.hit) + leaves(tree.miss)


def worst_misses(tree: Tree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return max(worst_misses(tree.hit), 1 + worst_misses(tree.miss))


def tree_to_json(tree: Tree) -> dict:
    if isinstance(tree, Leaf):
        return {"position": list(tree.position)}
    return {"shot": list(tree.shot), "hit": tree_to_json(tree.hit), "miss": tree_to_json(tree.miss)}


def tree_from_json(data: dict) -> Tree:
    if "position" in data:
        return Leaf(tuple(data["position"]))
    return Node(tuple(data["shot"]), tree_from_json(data["hit"]), tree_from_json(data["miss"]))


def tree_to_dot(tree: Tree, name: str = "decision_tree") -> str:
    lines = [f"digraph {name} {{", "  node [fontname=\"Helvetica\"];"]
    counter = [0]

    def emit(t: Tree) -> str:
        nid = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(t, Leaf):
            lines.append(f'  {nid} [shape=box, label="p = ({t.position[0]}, {t.position[1]})"];')
            return nid
        lines.append(f'  {nid} [shape=ellipse, label="shoot ({t.shot[0]}, {t.shot[1]})"];')
        h = emit(t.hit)
        m = emit(t.miss)
        lines.append(f'  {nid} -> {h} [label="hit"];')
        lines.append(f'  {nid} -> {m} [label="miss", style=dashed];')
        return nid

    emit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


class TreeStrategy(Strategy):
    """Replays a decision tree as a strategy."""

    name = "tree"

    def __init__(self, tree: Tree, audit=None):
        super().__init__(audit)
        self.tree = tree

    def start(self, shape) -> None:
        super().start(shape)
        self.node = self.tree

    def next_shot(self, shape, positions, history):
        entry = self._new_entry(history)
        if entry is not None:
            self.node = self.node.hit if entry[1] == HIT else self.node.miss
        if isinstance(self.node, Leaf):
            raise AssertionError("tree reached a leaf while positions remain")
        return self.node.shot


def dumps_tree(tree: Tree) -> str:
    return json.dumps(tree_to_json(tree))
