"""Exact laws of by-row sums and their upper-tail probabilities."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import Kind, Pmf, corrected_geometric_pmf
from .schedules import RowSchedule

# ``row_sum_law`` routes Bernoulli rows with more than CF_THRESHOLD cells and
# at most CF_MAX_DISTINCT distinct parameters to the transform path; see
# benchmarks/bench_kernels.py. The transform wins from ~1000 cells, but its
# ~1e-16 absolute noise swamps far-tail masses, so the DP (relative accuracy
# in the tail) is kept while it costs only milliseconds.
CF_THRESHOLD = 4096
CF_MAX_DISTINCT = 64


class Method(str, enum.Enum):
    DP = "dp"
    CFFFT = "cf-fft"
    DIRECT_CONVOLUTION = "direct-convolution"


class KindMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SumLaw:
    """Law of S_n; ``accumulated_tail`` bounds the TV gap to the true law."""

    pmf: Pmf
    accumulated_tail: float
    method: Method

    def mean(self) -> float:
        return self.pmf.mean()

    def variance(self) -> float:
        return self.pmf.variance()


def _require(row: RowSchedule, kind: Kind) -> None:
    if row.kind is not kind:
        raise KindMismatchError(f"expected a {kind.value} row, got {row.kind.value}")


def poisson_binomial(row: RowSchedule) -> SumLaw:
    """Poisson-binomial law by the O(k^2) dynamic program."""
    _require(row, Kind.BERNOULLI)
    masses = kernels.pb_dp(row.params)
    return SumLaw(Pmf(0, masses), 0.0, Method.DP)


def poisson_binomial_cf(row: RowSchedule) -> SumLaw:
    """Poisson-binomial law by inverting prod_k (q_k + p_k e^{it}).

    The product is evaluated at the N = k+1 lattice frequencies 2 pi m / N.
    Only m <= N/2 is computed; the rest follows by Hermitian symmetry.
    Repeated parameters enter as one factor raised to their multiplicity,
    so rows with few distinct p cost O(distinct * N).
    """
    _require(row, Kind.BERNOULLI)
    vals, counts = np.unique(row.params, return_counts=True)
    size = row.params.size + 1
    t = 2.0 * np.pi * np.arange(size // 2 + 1) / size
    z = np.exp(1j * t)
    phi = np.ones_like(z)
    with np.errstate(divide="ignore"):
        for pk, cnt in zip(vals, counts):
            f = (1.0 - pk) + pk * z
            phi *= f if cnt == 1 else np.exp(cnt * np.log(f))
    masses = np.fft.hfft(phi, size) / size
    np.clip(masses, 0.0, None, out=masses)
    return SumLaw(Pmf(0, masses), 0.0, Method.CFFFT)


def geometric_sum(row: RowSchedule, tol: float = 1e-12) -> SumLaw:
    """Law of a sum of corrected-geometric cells by sequential convolution.

    Cells are truncated at ``tol / k`` each and convolved in descending q
    order. Trailing entries are trimmed after each step within the budget
    left over by the cell truncations, so ``accumulated_tail <= tol``.
    """
    _require(row, Kind.GEOMETRIC)
    tol = float(tol)
    if not (0.0 < tol < 1.0):
        raise ValueError(f"tol={tol!r} must lie in (0, 1)")
    kn = row.params.size
    order = np.argsort(-row.q, kind="stable")
    cells = [corrected_geometric_pmf(float(row.params[i]), tol / kn) for i in order]
    tails = [c.tail for c in cells]
    lost = -math.expm1(math.fsum(math.log1p(-t) for t in tails))
    step_budget = max(tol - math.fsum(tails), 0.0) / max(kn - 1, 1)
    # mass trimmed earlier is thinned by every later cell's truncation
    trimmed = 0.0
    acc = np.array(cells[0].masses)
    for cell in cells[1:]:
        acc = np.convolve(acc, cell.masses)
        trimmed *= 1.0 - cell.tail
        rev = np.cumsum(acc[::-1])
        drop = min(int(np.searchsorted(rev, step_budget, side="right")), acc.size - 1)
        if drop:
            trimmed += float(rev[drop - 1])
            acc = acc[:-drop]
    tail = lost + trimmed
    return SumLaw(Pmf(0, acc, tail), tail, Method.DIRECT_CONVOLUTION)


def row_sum_law(row: RowSchedule, tol: float = 1e-12, method: str = "auto") -> SumLaw:
    """Dispatch to the exact algorithm for the row's kind."""
    if row.kind is Kind.GEOMETRIC:
        return geometric_sum(row, tol)
    if method == "auto":
        fast = (row.params.size > CF_THRESHOLD
                and np.unique(row.params).size <= CF_MAX_DISTINCT)
        method = Method.CFFFT if fast else Method.DP
    return poisson_binomial_cf(row) if Method(method) is Method.CFFFT else poisson_binomial(row)


def tail_probability(law: SumLaw, t: int) -> tuple[float, float]:
    """Certified interval [lo, hi] for P(S > t)."""
    pmf = law.pmf
    t = int(t)
    if t < pmf.offset:
        lo = math.fsum(pmf.masses)
        return lo, 1.0
    if t >= pmf.last:
        return 0.0, law.accumulated_tail
    lo = math.fsum(pmf.masses[t - pmf.offset + 1 :])
    return lo, min(1.0, lo + law.accumulated_tail)
