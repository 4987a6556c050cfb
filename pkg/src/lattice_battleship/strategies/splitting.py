from __future__ import annotations

from .base import Strategy, best_splitting_shot


class ExhaustiveElimination(Strategy):
    """Always fire the smallest splitting shot; every miss removes at least
    one position, so at most n - 1 misses."""

    name = "elimination"

    def next_shot(self, shape, positions, history):
        return best_splitting_shot(shape, positions, greedy=False)


class GreedyMinMiss(Strategy):
    """Fire the splitting shot whose miss branch is smallest."""

    name = "greedy"

    def next_shot(self, shape, positions, history):
        return best_splitting_shot(shape, positions, greedy=True)
