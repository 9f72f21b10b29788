"""Solver outcomes, Monte Carlo estimates, and seeded rng derivation.

All randomized trial harnesses derive one rng per (master seed, trial index)
through a stable hash, so results never depend on execution order or on the
number of workers.
"""

from __future__ import annotations

import enum
import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one decision run: status, witness, and work done."""

    status: Status
    coloring: tuple[int, ...] | None
    nodes_explored: int
    elapsed: float

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


WILSON_Z = 1.959963984540054  # two-sided 95%


def wilson_interval(successes: int, decided: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Returns (0.0, 1.0) when no trial was decided.
    """
    if decided == 0:
        return (0.0, 1.0)
    phat = successes / decided
    z2 = z * z
    denom = 1.0 + z2 / decided
    center = (phat + z2 / (2 * decided)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / decided + z2 / (4.0 * decided * decided)) / denom
    # the score interval contains the MLE; keep that true under float rounding
    return (max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat)))


@dataclass(frozen=True)
class Estimate:
    """Aggregated Monte Carlo estimate of a success probability.

    Timeouts are excluded from p_hat and reported separately, so the
    estimator is never silently biased by undecided trials.
    """

    successes: int
    failures: int
    timeouts: int
    p_hat: Fraction
    ci_low: float
    ci_high: float

    @property
    def trials(self) -> int:
        return self.successes + self.failures + self.timeouts


def make_estimate(successes: int, failures: int, timeouts: int = 0) -> Estimate:
    decided = successes + failures
    p_hat = Fraction(successes, decided) if decided else Fraction(0)
    lo, hi = wilson_interval(successes, decided)
    return Estimate(successes, failures, timeouts, p_hat, lo, hi)


def tally_statuses(statuses) -> Estimate:
    """Estimate from an iterable of Status values (SAT counts as success)."""
    succ = fail = tout = 0
    for s in statuses:
        if s is Status.SAT:
            succ += 1
        elif s is Status.UNSAT:
            fail += 1
        else:
            tout += 1
    return make_estimate(succ, fail, tout)


def fmt6(x) -> str:
    """Numbers rendered with 6 significant digits for CSV emission."""
    return "%.6g" % float(x)


def derive_seed(master: int, *path) -> int:
    """Stable 64-bit seed derived from a master seed and a label path."""
    label = "\x1f".join(str(p) for p in (master, *path))
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(master: int, *path) -> random.Random:
    return random.Random(derive_seed(master, *path))
