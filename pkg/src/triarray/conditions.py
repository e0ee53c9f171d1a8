"""Negligibility, variance and Lindeberg-type functionals of a row, and
hypothesis checks for the Poisson limit theorems over a grid of rows.

Geometric cells are handled in closed form. The workhorse identity is the
memoryless tail sum for Y ~ G*(p) with mean c = q/p::

    sum_{j>=m} (j - s)**2 p q**j = q**m * E[(m - s + Y)**2]
                                 = q**m * ((m-s)**2 + 2 (m-s) c + c**2 + q/p**2)

so series over unbounded supports reduce to a finite sum plus one tail term.
All indicators use ``>=`` literally; atoms exactly at distance eps count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .distributions import Kind, geometric_cutoff
from .schedules import RowSchedule, ScheduleFamily, generate_row
from .sums import KindMismatchError

REFERENCE_EPS = 0.5


def _check_eps_unit(eps: float) -> float:
    eps = float(eps)
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps={eps!r} must lie in (0, 1)")
    return eps


def _check_eps_pos(eps: float) -> float:
    eps = float(eps)
    if not (eps > 0.0):
        raise ValueError(f"eps={eps!r} must be positive")
    return eps


def _grouped(row: RowSchedule):
    """Distinct p values with multiplicities, so iid rows cost O(1)."""
    vals, counts = np.unique(row.params, return_counts=True)
    return zip(vals.tolist(), counts.tolist())


def _weighted_fsum(terms) -> float:
    return math.fsum(v * c for v, c in terms)


def _geo_tail_sq(p: float, shift: float, m: int) -> float:
    """sum_{j>=m} (j - shift)**2 p q**j for a corrected-geometric cell."""
    q = 1.0 - p
    c = q / p
    d = m - shift
    return q ** m * (d * d + 2.0 * d * c + c * c + q / (p * p))


# --- scalar functionals -------------------------------------------------------

def uan(row: RowSchedule, eps: float) -> float:
    """sup_k P(|X_k - a_k| >= eps), exact per cell."""
    eps = _check_eps_pos(eps)
    best = 0.0
    for p, _ in _grouped(row):
        q = 1.0 - p
        if row.kind is Kind.BERNOULLI:
            val = q * (abs(0.0 - p) >= eps) + p * (abs(1.0 - p) >= eps)
        else:
            c = q / p
            lo = max(0, math.floor(c - eps))
            hi = math.ceil(c + eps)
            inside = [j for j in range(lo, hi + 1) if abs(j - c) < eps]
            if inside:
                a, b = inside[0], inside[-1]
                val = 1.0 - (q ** a - q ** (b + 1))
            else:
                val = 1.0
        best = max(best, val)
    return min(best, 1.0)


def mv(row: RowSchedule) -> float:
    """Var(S_n) = sum of cell variances."""
    return row.moments().variance_sum


def mean_sum(row: RowSchedule) -> float:
    return row.moments().mean_sum


def lindeberg_gauss(row: RowSchedule, eps: float) -> float:
    """sum_k E[X_k**2 ; |X_k| >= eps] over the raw cell laws."""
    eps = _check_eps_pos(eps)
    terms = []
    for p, cnt in _grouped(row):
        if row.kind is Kind.BERNOULLI:
            val = p * (1.0 >= eps)
        else:
            m = math.ceil(eps)
            val = _geo_tail_sq(p, 0.0, m)
        terms.append((val, cnt))
    return _weighted_fsum(terms)


def _lp_bernoulli_cell(p: float, eps: float) -> float:
    q = 1.0 - p
    total = 0.0
    for j, w in ((0, q), (1, p)):
        y = j - p
        if abs(y - 1.0) >= eps:
            total += y * y * w
    return total


def _lp_geometric_cell(p: float, eps: float) -> float:
    # finite sum up to the last excluded index, closed-form tail beyond it
    q = 1.0 - p
    c = q / p
    b = math.ceil(c + 1.0 + eps)
    while abs((b - c) - 1.0) < eps:
        b += 1
    finite = []
    w = p
    for j in range(b):
        y = j - c
        if abs(y - 1.0) >= eps:
            finite.append(y * y * w)
        w *= q
    return math.fsum(finite) + _geo_tail_sq(p, c, b)


def lindeberg_poisson(row: RowSchedule, eps: float) -> float:
    """sum_k E[(X_k - a_k)**2 ; |X_k - a_k - 1| >= eps], for 0 < eps < 1.

    The vanishing of this quantity along the rows is the Poisson-type
    Lindeberg condition; ``REFERENCE_EPS`` = 1/2 is the customary choice.
    """
    eps = _check_eps_unit(eps)
    cell = _lp_bernoulli_cell if row.kind is Kind.BERNOULLI else _lp_geometric_cell
    return _weighted_fsum((cell(p, eps), cnt) for p, cnt in _grouped(row))


def b_functional_bernoulli(row: RowSchedule, eps: float, center_at_q: bool = False) -> float:
    """B(eps, n) = sum_k sum_{j=0,1} 1{|j - s_k - 1| >= eps} (j - p_k)**2 p_k**j q_k**(1-j).

    The centring ``s_k`` is the cell mean p_k, which makes B(eps, n) the
    Bernoulli case of :func:`lindeberg_poisson`. ``center_at_q=True`` uses
    ``s_k = q_k`` instead; the two differ whenever ``|p_k - q_k|`` straddles
    eps.
    """
    eps = _check_eps_unit(eps)
    if row.kind is not Kind.BERNOULLI:
        raise KindMismatchError("b_functional_bernoulli needs a bernoulli row")
    p = row.params
    q = 1.0 - p
    s = q if center_at_q else p
    j0 = (np.abs((0.0 - s) - 1.0) >= eps) * (0.0 - p) ** 2 * q
    j1 = (np.abs((1.0 - s) - 1.0) >= eps) * (1.0 - p) ** 2 * p
    return math.fsum(j0 + j1)


def b_functional_geometric(row: RowSchedule, eps: float) -> float:
    """B(eps, n) for corrected-geometric rows.

    Each cell's full series is the variance written through the derivatives
    of sum q**j (sum j q**(j-1) = 1/p**2, sum j(j-1) q**(j-2) = 2/p**3); the
    at most two indices inside the eps-window around c + 1 are subtracted.
    """
    eps = _check_eps_unit(eps)
    if row.kind is not Kind.GEOMETRIC:
        raise KindMismatchError("b_functional_geometric needs a geometric row")
    terms = []
    for p, cnt in _grouped(row):
        q = 1.0 - p
        c = q / p
        s1 = 1.0 / (p * p)
        s2 = 2.0 / (p * p * p)
        ej = p * q * s1
        ej2 = p * (q * q * s2 + q * s1)
        full = ej2 - 2.0 * c * ej + c * c
        excluded = 0.0
        for j in range(max(0, math.floor(c + 1.0 - eps)), math.ceil(c + 1.0 + eps) + 1):
            if abs(j - c - 1.0) < eps:
                excluded += (j - c) ** 2 * p * q ** j
        terms.append((full - excluded, cnt))
    return _weighted_fsum(terms)


def b_functional(row: RowSchedule, eps: float) -> float:
    if row.kind is Kind.BERNOULLI:
        return b_functional_bernoulli(row, eps)
    return b_functional_geometric(row, eps)


def geometric_block_bound(row: RowSchedule, eps: float = REFERENCE_EPS):
    """Per distinct cell: (j >= 2 block of B(eps,k,n), 2(1+q) q (q/p + 4q/p**3)).

    The second entry is the majorant built from (a+b)**2 <= 2(a**2 + b**2) and
    the closed forms sum_{j>=2} q**(j-1) = q/p and sum_{j>=2} j**2 q**(j-1) <= 4q/p**3.
    """
    eps = _check_eps_unit(eps)
    if row.kind is not Kind.GEOMETRIC:
        raise KindMismatchError("geometric_block_bound needs a geometric row")
    ps = np.unique(row.params)
    block = np.empty(ps.size)
    bound = np.empty(ps.size)
    for i, p in enumerate(ps.tolist()):
        q = 1.0 - p
        c = q / p
        val = _geo_tail_sq(p, c, 2)
        for j in range(2, math.ceil(c + 1.0 + eps) + 1):
            if abs(j - c - 1.0) < eps:
                val -= (j - c) ** 2 * p * q ** j
        block[i] = val
        bound[i] = 2.0 * (1.0 + q) * q * (q / p + 4.0 * q / p ** 3)
    return ps, block, bound


# --- spectral measure -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Atoms of K_n (raw) or K_n* (mean-centred): y**2-weighted cell laws.

    ``trimmed`` is the y**2-mass of geometric support beyond the truncation.
    """

    locations: np.ndarray
    masses: np.ndarray
    centered: bool
    trimmed: float = 0.0

    @property
    def total(self) -> float:
        return math.fsum(self.masses)

    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.locations.tolist(), self.masses.tolist()))


def spectral_measure(row: RowSchedule, centered: bool = True, tol: float = 1e-12) -> SpectralMeasure:
    locs = []
    masses = []
    trimmed = []
    for p, cnt in _grouped(row):
        q = 1.0 - p
        if row.kind is Kind.BERNOULLI:
            shift = p if centered else 0.0
            js = np.array([0.0, 1.0])
            w = np.array([q, p])
        else:
            shift = q / p if centered else 0.0
            J = geometric_cutoff(q, tol)
            js = np.arange(J + 1, dtype=np.float64)
            w = p * q ** js
            trimmed.append(cnt * _geo_tail_sq(p, shift, J + 1))
        y = js - shift
        locs.append(y)
        masses.append(cnt * y * y * w)
    loc = np.concatenate(locs)
    mass = np.concatenate(masses)
    keep = mass > 0.0
    loc, mass = loc[keep], mass[keep]
    uniq, inv = np.unique(loc, return_inverse=True)
    agg = np.zeros(uniq.size)
    np.add.at(agg, inv, mass)
    return SpectralMeasure(uniq, agg, bool(centered), math.fsum(trimmed))


def evaluate_K(measure: SpectralMeasure, x: float) -> float:
    """Right-continuous distribution function of the measure at ``x``."""
    i = int(np.searchsorted(measure.locations, x, side="right"))
    return math.fsum(measure.masses[:i])


# --- theorem hypothesis sweeps --------------------------------------------------

def hypothesis_quantities(row: RowSchedule) -> dict[str, float]:
    p = row.params
    q = 1.0 - p
    return {
        "sup_p": float(p.max()),
        "sum_p": math.fsum(p),
        "sup_q": float(q.max()),
        "sum_q": math.fsum(q),
        "sup_pq": float((p * q).max()),
        "sum_pq": math.fsum(p * q),
        "sup_q_over_p2": float((q / (p * p)).max()),
        "sum_q_over_p": math.fsum(q / p),
        "sum_q_over_p2": math.fsum(q / (p * p)),
    }


# name -> (quantity key, target is lambda?)
THEOREM_HYPOTHESES = {
    "T1": (Kind.BERNOULLI, [("sup_p->0", "sup_p", False), ("sum_p->lambda", "sum_p", True)]),
    "T2": (Kind.GEOMETRIC, [("sup_q->0", "sup_q", False), ("sum_q->lambda", "sum_q", True)]),
    "T3": (Kind.BERNOULLI, [("sup_pq->0", "sup_pq", False),
                            ("sum_pq->lambda", "sum_pq", True),
                            ("sum_p->lambda", "sum_p", True),
                            ("B->0", "b_functional", False)]),
    "T4": (Kind.GEOMETRIC, [("sup_q_over_p2->0", "sup_q_over_p2", False),
                            ("sum_q_over_p->lambda", "sum_q_over_p", True),
                            ("sum_q_over_p2->lambda", "sum_q_over_p2", True),
                            ("B->0", "b_functional", False)]),
}


@dataclass
class ConditionReport:
    n: int
    kn: int
    eps: float
    theorem: str
    lambda_target: float
    quantities: dict[str, float]
    uan: float
    mv: float
    mean_sum: float
    lindeberg_poisson: float
    lindeberg_gauss: float
    b_functional: float
    verdicts: dict[str, bool] = field(default_factory=dict)
    moment_gap: float | None = None
    moment_disagree: bool = False

    @property
    def verdict(self) -> bool:
        return all(self.verdicts.values())


def trend_toward(values: Sequence[float], target: float, atol: float | None = None) -> bool:
    """True when |v - target| shrinks at every grid step (or is already ~0).

    A diagnostic for a limit statement, not a proof: a single grid point only
    passes if it sits on the target.
    """
    if atol is None:
        atol = 1e-9 * max(1.0, abs(target))
    d = [abs(v - target) for v in values]
    if len(d) == 1:
        return d[0] <= atol
    return all(b < a or b <= atol for a, b in zip(d, d[1:]))


def _as_row_source(source) -> Callable[[int], RowSchedule]:
    if isinstance(source, ScheduleFamily):
        return lambda n: generate_row(source, n, n)
    if isinstance(source, RowSchedule):
        return lambda n: source
    return source


def theorem_verdict(source, n_grid: Sequence[int], eps_grid: Sequence[float] | float,
                    theorem: str, lam: float | None = None) -> list[ConditionReport]:
    """Evaluate a theorem's hypotheses along ``n_grid``.

    ``source`` is a ScheduleFamily (row n has n cells) or a callable
    ``n -> RowSchedule``. Returns one report per (n, eps), n-major. Every
    report carries the grid-wide per-hypothesis verdicts for its eps.
    """
    theorem = theorem.upper()
    if theorem not in THEOREM_HYPOTHESES:
        raise ValueError(f"unknown theorem {theorem!r} (T1, T2, T3, T4)")
    kind, hyps = THEOREM_HYPOTHESES[theorem]
    n_grid = [int(n) for n in n_grid]
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n grid must be nonempty and strictly increasing")
    eps_grid = [float(eps_grid)] if np.isscalar(eps_grid) else [float(e) for e in eps_grid]
    if not eps_grid:
        raise ValueError("eps grid must be nonempty")
    for e in eps_grid:
        _check_eps_unit(e)
    if lam is None:
        if not isinstance(source, ScheduleFamily) or source.lambda_target is None:
            raise ValueError("lambda target required for this source")
        lam = source.lambda_target
    if isinstance(source, ScheduleFamily) and source.kind is not kind:
        raise KindMismatchError(f"{theorem} needs a {kind.value} schedule, got {source.kind.value}")
    make = _as_row_source(source)

    reports: list[ConditionReport] = []
    for n in n_grid:
        row = make(n)
        if row.kind is not kind:
            raise KindMismatchError(f"{theorem} needs a {kind.value} schedule, got {row.kind.value}")
        quantities = hypothesis_quantities(row)
        common = dict(mv=mv(row), mean_sum=mean_sum(row))
        for e in eps_grid:
            rep = ConditionReport(
                n=n, kn=len(row), eps=e, theorem=theorem, lambda_target=float(lam),
                quantities=quantities, uan=uan(row, e),
                lindeberg_poisson=lindeberg_poisson(row, e),
                lindeberg_gauss=lindeberg_gauss(row, e),
                b_functional=b_functional(row, e), **common)
            if theorem == "T4":
                rep.moment_gap = abs(quantities["sum_q_over_p"] - quantities["sum_q_over_p2"])
            reports.append(rep)

    for e in eps_grid:
        series = [r for r in reports if r.eps == e]
        verdicts = {}
        for name, key, to_lambda in hyps:
            vals = [r.b_functional if key == "b_functional" else r.quantities[key] for r in series]
            verdicts[name] = trend_toward(vals, lam if to_lambda else 0.0)
        disagree = False
        if theorem == "T4":
            disagree = not trend_toward([r.moment_gap for r in series], 0.0)
        for r in series:
            r.verdicts = dict(verdicts)
            r.moment_disagree = disagree
    return reports
