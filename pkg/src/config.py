# -*- coding: utf-8 -*-
"""
Solver tolerances
=================

All comparisons in the pipeline go through one :class:`SolverConfig` so that
tests and the CLI see the same numbers. Relative tolerances are scaled by the
perimeter of the polygon being solved.
"""

from __future__ import annotations
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class SolverConfig:
    param_rel: float = 1e-9      # parameter comparisons, times the perimeter
    slope_abs: float = 1e-12     # slope residuals
    boundary_rel: float = 1e-12  # p-on-boundary test, times the bbox diagonal
    clamp_rel: float = 1e-9      # lower clamp of d, times the perimeter
    tie_rel: float = 1e-12       # equal-t events and argmin ties, times the perimeter
    contact_rel: float = 1e-7    # lever contact vs. lever endpoint, times the perimeter
    scan_samples: int = 64       # bracketing samples for the numeric events
    budget_factor: int = 50
    budget_offset: int = 100

    def __post_init__(self) -> None:
        for name in ("param_rel", "slope_abs", "boundary_rel", "clamp_rel", "tie_rel", "contact_rel"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.scan_samples < 2:
            raise ValueError("scan_samples must be >= 2")
        if self.budget_factor <= 0 or self.budget_offset < 0:
            raise ValueError("event budget must be positive")

    def eps_param(self, perimeter: float) -> float:
        return self.param_rel * perimeter

    def eps_tie(self, perimeter: float) -> float:
        return self.tie_rel * perimeter

    def eps_contact(self, perimeter: float) -> float:
        return self.contact_rel * perimeter

    def event_budget(self, n: int) -> int:
        return self.budget_factor * n + self.budget_offset

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)


DEFAULT_CONFIG = SolverConfig()
