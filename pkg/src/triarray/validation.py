"""Distances between lattice laws, a Monte Carlo oracle for row sums, and
convergence traces toward the Poisson limit."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from ._pykernels import MASK64
from .charfn import CfGrid, cf_distance, default_grid, poisson_cf, row_cf
from .distributions import Kind, Pmf, poisson_pmf
from .schedules import RowSchedule, ScheduleFamily, generate_row
from .sums import row_sum_law


def _aligned(a: Pmf, b: Pmf):
    lo = min(a.offset, b.offset)
    hi = max(a.last, b.last)
    return a.dense(lo, hi), b.dense(lo, hi)


def tv_distance(a: Pmf, b: Pmf) -> tuple[float, float]:
    """[lo, hi] bracket on the total-variation distance.

    ``lo`` is half the l1 distance of the represented masses; ``hi`` adds
    half of both certified tails.
    """
    x, y = _aligned(a, b)
    lo = 0.5 * math.fsum(np.abs(x - y))
    return lo, lo + 0.5 * (a.tail + b.tail)


def kolmogorov_distance(a: Pmf, b: Pmf) -> float:
    x, y = _aligned(a, b)
    return float(np.max(np.abs(np.cumsum(x) - np.cumsum(y))))


def simulate_row_sum(row: RowSchedule, reps: int, seed: int) -> Pmf:
    """Empirical law of S_n over ``reps`` replicates.

    Replicate r uses the counter stream ``(seed, row.n_index, r)``; see
    :mod:`triarray.rng` for the splitting rule.
    """
    reps = int(reps)
    if reps < 1:
        raise ValueError(f"reps={reps} must be positive")
    sums = kernels.simulate_sums(row.params, row.kind is Kind.GEOMETRIC,
                                 int(seed) & MASK64, row.n_index, reps)
    counts = np.bincount(sums)
    return Pmf(0, counts / reps)


@dataclass
class ConvergenceTrace:
    n_grid: list[int]
    lambda_target: float
    tv: list[tuple[float, float]] = field(default_factory=list)
    tv_hat: list[tuple[float, float]] = field(default_factory=list)
    kolmogorov: list[float] = field(default_factory=list)
    cf_dist: list[float] = field(default_factory=list)
    lambda_hat: list[float] = field(default_factory=list)
    accumulated_tail: list[float] = field(default_factory=list)
    mc_tv: list[float] | None = None

    @property
    def tv_lo(self) -> list[float]:
        return [lo for lo, _ in self.tv]

    @property
    def tv_hi(self) -> list[float]:
        return [hi for _, hi in self.tv]


def convergence_trace(family: ScheduleFamily, n_grid: Sequence[int], tol: float = 1e-12,
                      reps: int | None = None, seed: int = 0,
                      ts: np.ndarray | None = None) -> ConvergenceTrace:
    """Distances of the exact S_n law to Poisson(lambda) along ``n_grid``.

    Row n has n cells. ``tv_hat`` compares against Poisson(lambda_hat_n) with
    the plug-in lambda_hat_n = sum of cell means. The cf distance is taken
    between the row cf and the Poisson cf on ``ts`` (default grid).
    """
    n_grid = [int(n) for n in n_grid]
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n grid must be nonempty and strictly increasing")
    lam = family.lambda_target
    if lam is None:
        raise ValueError("convergence traces need a family with a lambda target")
    ts = default_grid() if ts is None else np.asarray(ts, dtype=np.float64)
    target = poisson_pmf(lam, tol)
    limit_cf = CfGrid(ts, poisson_cf(lam, ts))
    trace = ConvergenceTrace(n_grid, lam, mc_tv=[] if reps else None)
    for n in n_grid:
        row = generate_row(family, n, n)
        law = row_sum_law(row, tol)
        lam_hat = row.moments().mean_sum
        trace.tv.append(tv_distance(law.pmf, target))
        trace.tv_hat.append(tv_distance(law.pmf, poisson_pmf(lam_hat, tol)))
        trace.kolmogorov.append(kolmogorov_distance(law.pmf, target))
        trace.cf_dist.append(cf_distance(CfGrid(ts, row_cf(row, ts)), limit_cf))
        trace.lambda_hat.append(lam_hat)
        trace.accumulated_tail.append(law.accumulated_tail)
        if reps:
            emp = simulate_row_sum(row, reps, seed)
            trace.mc_tv.append(tv_distance(emp, law.pmf)[0])
    return trace
