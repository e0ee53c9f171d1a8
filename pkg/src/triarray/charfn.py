"""Characteristic functions of cells, rows and Poisson limits, and the
Levy exponent of an atomic spectral measure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import CellLaw, Kind, Pmf
from .conditions import SpectralMeasure
from .schedules import RowSchedule

GRID_LO = -5.0
GRID_HI = 5.0
GRID_POINTS = 101
SINGULAR_X = 1e-8


def default_grid(lo: float = GRID_LO, hi: float = GRID_HI, points: int = GRID_POINTS) -> np.ndarray:
    if points < 1 or not hi >= lo:
        raise ValueError(f"bad grid [{lo}, {hi}] with {points} points")
    return np.linspace(lo, hi, int(points))


@dataclass(frozen=True, eq=False)
class CfGrid:
    ts: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ts = np.array(self.ts, dtype=np.float64).ravel()
        vals = np.array(self.values, dtype=np.complex128).ravel()
        if ts.shape != vals.shape:
            raise ValueError("ts and values must have the same length")
        if np.any(np.diff(ts) <= 0):
            raise ValueError("ts must be strictly increasing")
        if np.any(np.abs(vals) > 1.0 + 1e-12):
            raise ValueError("characteristic function exceeds 1 in modulus")
        zero = ts == 0.0
        if np.any(zero) and np.any(np.abs(vals[zero] - 1.0) > 1e-12):
            raise ValueError("characteristic function must equal 1 at t = 0")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "values", vals)


def cell_cf(law: CellLaw, t):
    """(1-p) + p e^{it} for Bernoulli, p / (1 - q e^{it}) for G*(p)."""
    z = np.exp(1j * np.asarray(t, dtype=np.float64))
    if law.kind is Kind.BERNOULLI:
        return (1.0 - law.p) + law.p * z
    return law.p / (1.0 - law.q * z)


def row_cf(row: RowSchedule, t):
    """Product of the cell cfs, accumulated as a sum of complex logarithms.

    The imaginary parts of the principal logs add up to a valid argument of
    the product, so no unwrapping is needed; the modulus never underflows
    before the final exponential.
    """
    t = np.asarray(t, dtype=np.float64)
    z = np.exp(1j * t)
    vals, counts = np.unique(row.params, return_counts=True)
    logsum = np.zeros(t.shape, dtype=np.complex128)
    with np.errstate(divide="ignore"):
        for p, cnt in zip(vals, counts):
            if row.kind is Kind.BERNOULLI:
                f = (1.0 - p) + p * z
            else:
                f = p / (1.0 - (1.0 - p) * z)
            logsum += cnt * np.log(f)
    return np.exp(logsum)


def poisson_cf(lam: float, t):
    lam = float(lam)
    if not lam > 0.0:
        raise ValueError(f"lambda={lam!r} must be positive")
    return np.exp(lam * np.expm1(1j * np.asarray(t, dtype=np.float64)))


def pmf_cf(pmf: Pmf, t):
    """sum_j m_j e^{itj} over the represented support."""
    t = np.asarray(t, dtype=np.float64)
    phase = np.exp(1j * np.multiply.outer(t, pmf.support.astype(np.float64)))
    return phase @ pmf.masses


def _levy_kernel(u: float, x: np.ndarray) -> np.ndarray:
    """(e^{iux} - 1 - iux) / x**2, evaluated without cancellation."""
    out = np.empty(x.shape, dtype=np.complex128)
    small = np.abs(x) <= SINGULAR_X
    out[small] = -0.5 * u * u
    xs = x[~small]
    ux = u * xs
    re = -2.0 * np.sin(0.5 * ux) ** 2
    im = np.where(np.abs(ux) < 1e-3,
                  -ux ** 3 / 6.0 + ux ** 5 / 120.0,
                  np.sin(ux) - ux)
    out[~small] = (re + 1j * im) / (xs * xs)
    return out


def levy_exponent(measure: SpectralMeasure, u):
    """psi[K](u) = sum over atoms of mass * (e^{iux} - 1 - iux) / x**2."""
    u_arr = np.asarray(u, dtype=np.float64)
    flat = [np.dot(measure.masses, _levy_kernel(float(v), measure.locations))
            for v in u_arr.ravel()]
    out = np.array(flat, dtype=np.complex128).reshape(u_arr.shape)
    return out[()] if out.ndim == 0 else out


def cf_on_grid(func, ts=None) -> CfGrid:
    ts = default_grid() if ts is None else np.asarray(ts, dtype=np.float64)
    return CfGrid(ts, func(ts))


def cf_distance(a: CfGrid, b: CfGrid) -> float:
    """max_t |a(t) - b(t)| on a shared grid."""
    if a.ts.shape != b.ts.shape or not np.array_equal(a.ts, b.ts):
        raise ValueError("cf grids differ")
    return float(np.max(np.abs(a.values - b.values)))
