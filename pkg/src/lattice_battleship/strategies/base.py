from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..game_engine import PositionSet
from ..lattice_core import LatticePoint, Shape


class NotApplicable(ValueError):
    """Strategy does not apply to the shape's class."""


@dataclass
class Violation:
    check: str
    detail: str


@dataclass
class AuditLog:
    """Runtime assertions raised by strategies, shared across forks."""

    strict: bool = False
    violations: List[Violation] = field(default_factory=list)
    checks: Dict[str, int] = field(default_factory=dict)

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, 0) + 1
        if not ok:
            self.violations.append(Violation(name, detail))
            if self.strict:
                raise AssertionError(f"{name}: {detail}")


class Strategy:
    """Shot-selection policy driven by the current position set.

    ``start`` resets the state for a new game, ``next_shot`` is called with
    the position set after every shot, together with the shot history.
    ``fork`` returns an independent copy used to expand both outcomes of a
    shot.
    """

    name = "base"

    def __init__(self, audit: Optional[AuditLog] = None):
        self.audit = audit if audit is not None else AuditLog()

    def applicable(self, shape: Shape) -> bool:
        return True

    def start(self, shape: Shape) -> None:
        self._seen = 0

    def next_shot(self, shape: Shape, positions: PositionSet, history: Sequence) -> LatticePoint:
        raise NotImplementedError

    def stats(self) -> Dict[str, int]:
        return {}

    def fork(self) -> "Strategy":
        return copy.copy(self)

    def _new_entry(self, history: Sequence):
        """The latest (shot, outcome) if it has not been consumed yet."""
        if len(history) > self._seen:
            self._seen = len(history)
            return history[-1]
        return None


def shot_hit_counts(shape: Shape, positions: PositionSet):
    """Hit counts of every shot that hits at least one position.

    Returns ``(rows, xs, counts)``: within shot row ``rows[i]`` every shot
    with x in ``[xs[i], xs[i+1])`` hits exactly ``counts[i]`` positions.
    Built by sweeping the horizontal runs of S translated by each position.
    """
    ry, rl, rr = shape.runs()
    px = positions.coords[:, 0][:, None]
    py = positions.coords[:, 1][:, None]
    row = (ry[None, :] - py).ravel()
    start = (rl[None, :] - px).ravel()
    stop = (rr[None, :] - px + 1).ravel()
    rows = np.concatenate([row, row])
    xs = np.concatenate([start, stop])
    delta = np.concatenate([np.ones(start.shape[0], dtype=np.int64), -np.ones(stop.shape[0], dtype=np.int64)])
    order = np.lexsort((xs, rows))
    rows, xs, delta = rows[order], xs[order], delta[order]
    first = np.flatnonzero(np.r_[True, (rows[1:] != rows[:-1]) | (xs[1:] != xs[:-1])])
    dsum = np.add.reduceat(delta, first)
    return rows[first], xs[first], np.cumsum(dsum)


def best_splitting_shot(shape: Shape, positions: PositionSet, greedy: bool) -> LatticePoint:
    """Smallest splitting shot, or (``greedy``) the one with the largest
    hit branch, ties broken by the smallest shot in (x, y) order."""
    m = len(positions)
    if m < 2:
        raise ValueError("need at least two positions to split")
    rows, xs, counts = shot_hit_counts(shape, positions)
    ok = (counts > 0) & (counts < m)
    if greedy:
        ok &= counts == counts[ok].max()
    idx = np.flatnonzero(ok)
    best = idx[np.lexsort((rows[idx], xs[idx]))[0]]
    return (int(xs[best]), int(rows[best]))


def splitting_shots_bruteforce(shape: Shape, positions: PositionSet) -> Dict[LatticePoint, int]:
    """Every splitting shot with its hit count, by direct enumeration."""
    pts = shape.points
    pos = positions.to_list()
    cands = {(s[0] - p[0], s[1] - p[1]) for p in pos for s in pts}
    out = {}
    for x in cands:
        c = sum(1 for p in pos if (x[0] + p[0], x[1] + p[1]) in pts)
        if 0 < c < len(pos):
            out[x] = c
    return out


def distinguish_pair(positions: PositionSet, shape: Shape) -> LatticePoint:
    """A shot hitting exactly one of two positions: the smallest shot that
    hits the smaller position and misses the other."""
    if len(positions) != 2:
        raise ValueError(f"expected exactly two positions, got {len(positions)}")
    p1, p2 = positions.coords[0], positions.coords[1]
    cands = shape.coords - p1
    ok = ~shape.contains(cands + p2)
    x, y = cands[ok][0].tolist()
    return (x, y)
