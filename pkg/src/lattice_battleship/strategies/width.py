"""Width shooting for digital convex sets.

Each iteration takes the lattice width of the current positions P, scans
along the direction of the covering Diophantine lines (k*u for k = 1, 2, ...
and then k = -1, -2, ... up to a miss on each side) and so leaves at most one
hull point of the new P per line. Once conv(P) holds fewer than 25 lattice
points the greedy rule finishes the game.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..game_engine import MISS
from ..lattice_core import (
    Direction,
    convex_hull,
    count_lattice_points,
    is_digital_convex,
    lattice_width,
    polygon_lattice_points,
)
from .base import Strategy, best_splitting_shot

HULL_THRESHOLD = 25

START = "iteration_start"
SCAN_PLUS = "scan_plus"
SCAN_MINUS = "scan_minus"
FALLBACK = "fallback"


def hull_count(positions) -> int:
    return count_lattice_points(convex_hull(positions.as_shape()), check=False).total


class WidthShooting(Strategy):
    name = "width"

    def applicable(self, shape) -> bool:
        return is_digital_convex(shape)

    def start(self, shape) -> None:
        super().start(shape)
        self.phase = START
        self.iteration = 0
        self.current_u: Optional[Direction] = None
        self.k = 0
        self.k_plus: Optional[int] = None
        self.k_minus: Optional[int] = None
        self.hull_count: Optional[int] = None
        self._width_before: Optional[int] = None
        self.scan_misses = 0

    def stats(self):
        return {"iterations": self.iteration, "scan_misses": self.scan_misses}

    def _observe(self, outcome, positions):
        if self.phase in (SCAN_PLUS, SCAN_MINUS) and outcome == MISS:
            self.scan_misses += 1
        if self.phase == SCAN_PLUS and outcome == MISS:
            self.k_plus = self.k
            self.phase = SCAN_MINUS
            self.k = 0
        elif self.phase == SCAN_MINUS and outcome == MISS:
            self.k_minus = self.k
            self.phase = START
            self._audit_iteration(positions)

    def _audit_iteration(self, positions):
        u = self.current_u
        hull = convex_hull(positions.as_shape())
        pts = polygon_lattice_points(hull)
        lines = u.p * pts[:, 1] - u.q * pts[:, 0]
        self.audit.check(
            "claim3_one_point_per_line",
            np.unique(lines).shape[0] == pts.shape[0],
            f"iteration {self.iteration}: {pts.shape[0]} hull points on {np.unique(lines).shape[0]} lines",
        )
        self.audit.check(
            "claim3_hull_bound",
            pts.shape[0] <= self._width_before + 1,
            f"iteration {self.iteration}: hull count {pts.shape[0]} > w(P)+1 = {self._width_before + 1}",
        )

    def next_shot(self, shape, positions, history):
        entry = self._new_entry(history)
        if entry is not None:
            self._observe(entry[1], positions)
        if self.phase == START:
            count = hull_count(positions)
            if self.hull_count is not None:
                self.audit.check(
                    "hull_count_monotone",
                    count <= self.hull_count,
                    f"hull count grew from {self.hull_count} to {count}",
                )
            self.hull_count = count
            if count < HULL_THRESHOLD:
                self.phase = FALLBACK
            else:
                cert = lattice_width(positions.as_shape())
                self.current_u = cert.line_direction
                self._width_before = cert.width
                self.iteration += 1
                self.phase = SCAN_PLUS
                self.k = 0
        if self.phase == FALLBACK:
            return best_splitting_shot(shape, positions, greedy=True)
        self.k += 1 if self.phase == SCAN_PLUS else -1
        return (self.k * self.current_u.p, self.k * self.current_u.q)
