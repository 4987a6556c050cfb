"""Staircase shooting for HV-convex polyominoes.

Phase 1 scans (k, 0) rightwards and leftwards until a miss on each side,
which fixes the length of the row through the hidden position and leaves at
most one candidate per row of that length. Phase 2 grows a monotone path of
hits from the end of the scanned row, each step going sideways or up,
whichever hits more candidates; a miss followed by a hit keeps at most 2/3
of the candidates, two misses in a row single out the top-most candidate.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from ..game_engine import HIT, MISS
from ..lattice_core import is_hv_convex, is_polyomino
from .base import Strategy, distinguish_pair

SCAN_RIGHT = "scan_right"
SCAN_LEFT = "scan_left"
STAIRCASE = "staircase"
DISTINGUISH = "distinguish"

UP_RIGHT = "up_right"
UP_LEFT = "up_left"


class Staircase(Strategy):
    name = "staircase"

    def applicable(self, shape) -> bool:
        return is_polyomino(shape) and is_hv_convex(shape)

    def start(self, shape) -> None:
        super().start(shape)
        self.phase = SCAN_RIGHT
        self.k = 0
        self.k_plus: Optional[int] = None
        self.k_minus: Optional[int] = None
        self.row_length: Optional[int] = None
        self.orientation = UP_RIGHT
        self.path: List[tuple] = []
        self.pending_second: Optional[tuple] = None
        self._choice = None  # (first shot, other shot, |P| before, topmost)
        self._step = (1, 0)

    def fork(self):
        other = super().fork()
        other.path = list(self.path)
        return other

    def stats(self):
        return {"path_length": len(self.path)}

    # -- feedback ----------------------------------------------------------

    def _observe(self, shot, outcome, shape, positions):
        if self.phase == SCAN_RIGHT:
            if outcome == MISS:
                self.k_plus = shot[0]
                self.phase = SCAN_LEFT
                self.k = 0
        elif self.phase == SCAN_LEFT:
            if outcome == MISS:
                self.k_minus = shot[0]
                self._enter_staircase(shape, positions)
        elif self.phase == STAIRCASE and self._choice is not None:
            first, other, before, topmost = self._choice
            if shot == first:
                if outcome == HIT:
                    self._extend(shot)
                else:
                    self.pending_second = other
            elif shot == other:
                self.pending_second = None
                if outcome == HIT:
                    self._extend(shot)
                    if before >= 3:
                        self.audit.check(
                            "claim2_two_thirds",
                            3 * len(positions) <= 2 * before,
                            f"{len(positions)} of {before} candidates survive a miss then hit",
                        )
                else:
                    self.audit.check(
                        "claim1_topmost",
                        positions.to_list() == [topmost],
                        f"double miss left {positions.to_list()[:4]}, expected {topmost}",
                    )

    def _extend(self, shot):
        self.path.append(shot)
        self._choice = None

    def _enter_staircase(self, shape, positions):
        self.phase = STAIRCASE
        # hits strictly between the two misses
        self.row_length = self.k_plus - self.k_minus - 1
        ell = self.row_length
        ys, lo, hi = shape.rows()
        rows = (hi - lo + 1) == ell
        expected = {(int(x) - (self.k_minus + 1), int(y)) for x, y in zip(lo[rows], ys[rows])}
        self.audit.check(
            "phase1_candidates",
            expected == positions.as_set(),
            f"row length {ell}: {len(expected)} rows vs {len(positions)} positions",
        )
        cand = positions.coords[np.argsort(positions.coords[:, 1], kind="stable")]
        dx = np.diff(cand[:, 0])
        if np.all(dx >= 0):
            self.orientation = UP_RIGHT
        elif np.all(dx <= 0):
            self.orientation = UP_LEFT
        else:
            self.orientation = UP_RIGHT
        self.audit.check("lemma2_monotone", bool(np.all(dx >= 0) or np.all(dx <= 0)),
                         f"candidate x sequence {cand[:, 0].tolist()[:8]} is not monotone")
        if self.orientation == UP_RIGHT:
            self._step = (1, 0)
            start = (self.k_plus - 1, 0)
        else:
            self._step = (-1, 0)
            start = (self.k_minus + 1, 0)
        self.path = [start]

    # -- shot selection ------------------------------------------------------

    def next_shot(self, shape, positions, history):
        entry = self._new_entry(history)
        if entry is not None:
            self._observe(entry[0], entry[1], shape, positions)
        if self.phase == SCAN_RIGHT:
            self.k += 1
            return (self.k, 0)
        if self.phase == SCAN_LEFT:
            self.k -= 1
            return (self.k, 0)
        if len(positions) <= 2:
            self.phase = DISTINGUISH
            self.pending_second = None
            return distinguish_pair(positions, shape)
        if self.pending_second is not None:
            return self.pending_second
        s = self.path[-1]
        side = (s[0] + self._step[0], s[1])
        up = (s[0], s[1] + 1)
        c = positions.coords
        hit_side = shape.contains(c + np.array(side))
        hit_up = shape.contains(c + np.array(up))
        top = int(np.argmax(c[:, 1]))
        others = np.ones(c.shape[0], dtype=bool)
        others[top] = False
        self.audit.check(
            "claim1_step",
            bool(np.all((hit_side | hit_up)[others])),
            f"a non-topmost candidate misses both steps from {s}",
        )
        topmost = (int(c[top, 0]), int(c[top, 1]))
        if int(hit_side.sum()) >= int(hit_up.sum()):
            first, other = side, up
        else:
            first, other = up, side
        self._choice = (first, other, len(positions), topmost)
        return first
