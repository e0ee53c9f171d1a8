"""Elementary lattice laws: Bernoulli, corrected geometric, Poisson, binomial
and shifted negative binomial, plus the shared :class:`Pmf` container.

Every constructor returns masses on consecutive integers starting at
``offset``. Laws with unbounded support are truncated and the discarded mass
is carried in ``Pmf.tail`` so that error statements downstream stay explicit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SUM_TOL = 1e-9


class Kind(str, enum.Enum):
    BERNOULLI = "bernoulli"
    GEOMETRIC = "geometric"


def check_probability(p: float, what: str = "p") -> float:
    p = float(p)
    if not (0.0 < p < 1.0):
        raise ValueError(f"{what}={p!r} must lie strictly inside (0, 1)")
    return p


def _check_tol(tol: float) -> float:
    tol = float(tol)
    if not (0.0 < tol < 1.0):
        raise ValueError(f"tol={tol!r} must lie in (0, 1)")
    return tol


@dataclass(frozen=True)
class Pmf:
    """Finite lattice mass function with certified missing mass.

    ``masses[i]`` is the probability of ``offset + i``; ``tail`` is mass that
    exists in the true law but is not represented. Leading and trailing exact
    zeros are trimmed on construction.
    """

    offset: int
    masses: np.ndarray
    tail: float = 0.0
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        m = np.array(self.masses, dtype=np.float64).ravel()
        if m.size == 0:
            raise ValueError("a Pmf needs at least one mass entry")
        if np.any(~np.isfinite(m)) or np.any(m < 0.0):
            raise ValueError("masses must be finite and nonnegative")
        tail = float(self.tail)
        if not (tail >= 0.0):
            raise ValueError(f"tail={tail!r} must be nonnegative")
        nz = np.flatnonzero(m)
        offset = int(self.offset)
        if nz.size:
            offset += int(nz[0])
            m = m[nz[0] : nz[-1] + 1]
        else:
            m = m[:1]
        m.flags.writeable = False
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "tail", tail)
        if self.check:
            total = math.fsum(m) + tail
            if abs(total - 1.0) > SUM_TOL:
                raise ValueError(f"masses + tail sum to {total!r}, not 1")

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return (self.offset == other.offset and self.tail == other.tail
                and np.array_equal(self.masses, other.masses))

    __hash__ = None

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.masses.size)

    @property
    def last(self) -> int:
        return self.offset + self.masses.size - 1

    def __len__(self):
        return self.masses.size

    def __getitem__(self, j: int) -> float:
        i = j - self.offset
        if 0 <= i < self.masses.size:
            return float(self.masses[i])
        return 0.0

    def as_dict(self) -> dict[int, float]:
        return {int(j): float(m) for j, m in zip(self.support, self.masses)}

    def mean(self) -> float:
        return math.fsum(self.support * self.masses)

    def variance(self) -> float:
        mu = self.mean()
        return math.fsum((self.support - mu) ** 2 * self.masses)

    def cdf(self) -> np.ndarray:
        """Cumulative masses over ``support`` (tail excluded)."""
        return np.cumsum(self.masses)

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Masses on ``lo..hi`` inclusive, zero-filled outside the support."""
        out = np.zeros(hi - lo + 1)
        a, b = max(lo, self.offset), min(hi, self.last)
        if a <= b:
            out[a - lo : b - lo + 1] = self.masses[a - self.offset : b - self.offset + 1]
        return out


@dataclass(frozen=True)
class CellLaw:
    kind: Kind
    p: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "p", check_probability(self.p))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def mean(self) -> float:
        if self.kind is Kind.BERNOULLI:
            return self.p
        return self.q / self.p

    @property
    def variance(self) -> float:
        if self.kind is Kind.BERNOULLI:
            return self.p * self.q
        return self.q / (self.p * self.p)


@dataclass(frozen=True)
class RowMoments:
    means: np.ndarray
    variances: np.ndarray
    mean_sum: float
    variance_sum: float


def cell_moments(kind: Kind, params) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(params, dtype=np.float64)
    q = 1.0 - p
    if Kind(kind) is Kind.BERNOULLI:
        return p.copy(), p * q
    return q / p, q / (p * p)


def row_moments(kind: Kind, params: Sequence[float]) -> RowMoments:
    means, variances = cell_moments(kind, params)
    return RowMoments(means, variances, math.fsum(means), math.fsum(variances))


# --- constructors -----------------------------------------------------------

def bernoulli_pmf(p: float) -> Pmf:
    p = check_probability(p)
    return Pmf(0, [1.0 - p, p])


def corrected_geometric_pmf(p: float, tol: float = 1e-12) -> Pmf:
    """Law of G(p) - 1, masses p*q**j for j <= J with q**(J+1) <= tol."""
    p = check_probability(p)
    tol = _check_tol(tol)
    q = 1.0 - p
    J = geometric_cutoff(q, tol)
    masses = p * q ** np.arange(J + 1, dtype=np.float64)
    return Pmf(0, masses, q ** (J + 1))


def geometric_cutoff(q: float, tol: float) -> int:
    """Smallest J >= 0 with q**(J+1) <= tol."""
    J = max(0, math.ceil(math.log(tol) / math.log(q)) - 1)
    while J > 0 and q ** J <= tol:
        J -= 1
    while q ** (J + 1) > tol:
        J += 1
    return J


def _neg_tail_bound(m_next: float, ratio: float) -> float:
    """Geometric bound on sum_{i>=0} m_next * ratio**i; inf if ratio >= 1."""
    if ratio >= 1.0:
        return math.inf
    return m_next / (1.0 - ratio)


def poisson_pmf(lam: float, tol: float = 1e-12) -> Pmf:
    """Poisson(lam) truncated at the first J whose residual mass is <= tol.

    The residual is ``1 - sum(masses)``; a geometric majorant of the remaining
    terms is used as a second stopping certificate once ``j > lam`` so tiny
    tolerances do not stall on rounding.
    """
    lam = float(lam)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"lambda={lam!r} must be a positive real")
    tol = _check_tol(tol)
    if lam > 700.0:
        return _poisson_from_mode(lam, tol)
    masses = [math.exp(-lam)]
    j = 0
    while True:
        residual = 1.0 - math.fsum(masses)
        nxt = masses[-1] * lam / (j + 1)
        if residual <= tol or (j + 1 > lam and _neg_tail_bound(nxt, lam / (j + 2)) <= tol):
            break
        masses.append(nxt)
        j += 1
    return Pmf(0, masses, max(0.0, 1.0 - math.fsum(masses)))


def _poisson_from_mode(lam: float, tol: float) -> Pmf:
    # e^{-lam} underflows: start at the mode in log space, recur outward
    mode = int(math.floor(lam))
    m_mode = math.exp(mode * math.log(lam) - lam - math.lgamma(mode + 1))
    left = [m_mode]
    j = mode
    while j > 0 and left[-1] > 0.0:
        left.append(left[-1] * j / lam)
        j -= 1
    right = []
    j = mode
    cur = m_mode
    while True:
        cur = cur * lam / (j + 1)
        j += 1
        if _neg_tail_bound(cur, lam / (j + 1)) <= tol / 2:
            break
        right.append(cur)
    masses = left[::-1] + right
    offset = mode - (len(left) - 1)
    return Pmf(offset, masses, max(0.0, 1.0 - math.fsum(masses)))


def binomial_pmf(n: int, p: float) -> Pmf:
    """Exact B(n, p) masses by the multiplicative recurrence."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n={n!r} must be a positive integer")
    p = check_probability(p)
    q = 1.0 - p
    r = p / q
    m0 = q ** n
    out = np.zeros(n + 1)
    if m0 > 1e-300:
        out[0] = m0
        for j in range(n):
            out[j + 1] = out[j] * (n - j) / (j + 1) * r
        return Pmf(0, out)
    # q**n underflows: anchor at the mode and recur in both directions
    mode = min(n, int(math.floor((n + 1) * p)))
    out[mode] = math.exp(math.lgamma(n + 1) - math.lgamma(mode + 1) - math.lgamma(n - mode + 1)
                         + mode * math.log(p) + (n - mode) * math.log(q))
    for j in range(mode, n):
        out[j + 1] = out[j] * (n - j) / (j + 1) * r
    for j in range(mode, 0, -1):
        out[j - 1] = out[j] * j / (n - j + 1) / r
    return Pmf(0, out)


def negative_binomial_shifted_pmf(n: int, p: float, tol: float = 1e-12) -> Pmf:
    """Law of NB(n, p) - n: mass C(n+j-1, j) p**n q**j at j >= 0."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n={n!r} must be a positive integer")
    p = check_probability(p)
    tol = _check_tol(tol)
    q = 1.0 - p
    m0 = p ** n
    if m0 == 0.0:
        raise ValueError(f"p**n underflows for n={n}, p={p}")
    masses = [m0]
    j = 0
    while True:
        residual = 1.0 - math.fsum(masses)
        nxt = masses[-1] * (n + j) / (j + 1) * q
        ratio = (n + j + 1) / (j + 2) * q
        if residual <= tol or _neg_tail_bound(nxt, ratio) <= tol:
            break
        masses.append(nxt)
        j += 1
    return Pmf(0, masses, max(0.0, 1.0 - math.fsum(masses)))


# --- sampling ---------------------------------------------------------------

def sample_from_uniform(law: CellLaw, u: float) -> int:
    """Inverse transform of one uniform ``u`` in [0, 1).

    Bernoulli returns 1 iff ``u < p``. Corrected geometric returns the
    smallest j with ``1 - q**(j+1) >= u``; the powers of q are built by
    repeated multiplication so compiled and numpy samplers agree exactly.
    """
    if law.kind is Kind.BERNOULLI:
        return int(u < law.p)
    q = law.q
    thresh = 1.0 - u
    tail = q
    j = 0
    while tail > thresh:
        tail *= q
        j += 1
    return j


def sample_cell(law: CellLaw, stream) -> int:
    """Draw one value of ``law`` using the next uniform of ``stream``."""
    return sample_from_uniform(law, stream.next_uniform())


def sample_cells(law: CellLaw, u: np.ndarray) -> np.ndarray:
    """Vectorized :func:`sample_from_uniform` over an array of uniforms."""
    from . import _pykernels

    u = np.asarray(u, dtype=np.float64)
    if law.kind is Kind.BERNOULLI:
        return (u < law.p).astype(np.int64)
    return _pykernels.geometric_from_uniform(u, law.q)
