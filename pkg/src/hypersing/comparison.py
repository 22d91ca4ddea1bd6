"""Domination of inequality solutions by the equation solution.

A nonnegative q satisfying the mollified integral inequality is pointwise
dominated by the solution b of the corresponding equality; this module
verifies that conclusion on generated instances instead of replaying the
resolvent-positivity argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grid import GridFunction
from .volterra import VolterraProblem, solve_picard


@dataclass(frozen=True)
class DominationReport:
    """Result of comparing an inequality solution q against the equation solution b."""

    max_violation: float
    violation_locus: np.ndarray  # sample times where q > b + tol

    @property
    def dominated(self) -> bool:
        return self.violation_locus.size == 0


def verify_domination(q: GridFunction, prob: VolterraProblem, tol: float = 1e-8) -> DominationReport:
    """Solve the equation and report where q exceeds its solution beyond tol."""
    if np.any(np.real(q.values) < 0):
        raise DomainError("the domination property assumes q >= 0")
    b, _ = solve_picard(prob)
    excess = np.real(q.values) - np.real(b.values)
    max_violation = float(max(0.0, np.max(excess)))
    locus = q.grid[excess > tol]
    return DominationReport(max_violation=max_violation, violation_locus=locus)


def build_inequality_instance(prob: VolterraProblem, slack: GridFunction) -> GridFunction:
    """Generate a valid inequality solution by reducing the forcing by slack.

    q solves the mollified equality with forcing b0 - slack, which makes it a
    strict sub-solution of the original inequality whenever slack >= 0.
    """
    if np.any(np.real(slack.values) < 0):
        raise DomainError("slack must be nonnegative")
    if slack.grid.shape != prob.b0.grid.shape or np.any(slack.grid != prob.b0.grid):
        raise DomainError("slack must live on the problem grid")
    reduced = VolterraProblem(
        b0=prob.b0.with_values(prob.b0.values - slack.values),
        c=prob.c,
        lam=prob.lam,
    )
    q, _ = solve_picard(reduced)
    return q
