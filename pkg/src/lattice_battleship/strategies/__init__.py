"""Shooting strategies, selectable by name."""

from .base import (
    AuditLog,
    NotApplicable,
    Strategy,
    Violation,
    best_splitting_shot,
    distinguish_pair,
    shot_hit_counts,
    splitting_shots_bruteforce,
)
from .splitting import ExhaustiveElimination, GreedyMinMiss
from .staircase import Staircase
from .width import WidthShooting

REGISTRY = {
    "elimination": ExhaustiveElimination,
    "greedy": GreedyMinMiss,
    "staircase": Staircase,
    "width": WidthShooting,
}


def make_strategy(name: str, audit: AuditLog = None) -> Strategy:
    try:
        cls = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(REGISTRY)}") from None
    return cls(audit)


__all__ = [
    "AuditLog",
    "ExhaustiveElimination",
    "GreedyMinMiss",
    "NotApplicable",
    "REGISTRY",
    "Staircase",
    "Strategy",
    "Violation",
    "WidthShooting",
    "best_splitting_shot",
    "distinguish_pair",
    "make_strategy",
    "shot_hit_counts",
    "splitting_shots_bruteforce",
]
