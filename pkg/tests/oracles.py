"""Independent reference computations. Nothing here imports triarray."""

import itertools
import math
from fractions import Fraction


def enumerate_poisson_binomial(ps):
    """Law of a sum of Bernoullis by walking all 2**k outcomes."""
    out = [0.0] * (len(ps) + 1)
    for bits in itertools.product((0, 1), repeat=len(ps)):
        w = 1.0
        for b, p in zip(bits, ps):
            w *= p if b else 1.0 - p
        out[sum(bits)] += w
    return out


def binomial_exact(n, p, j):
    p = Fraction(p)
    return math.comb(n, j) * p ** j * (1 - p) ** (n - j)


def binomial_upper_tail_exact(n, p, t):
    """P(B(n, p) > t) in exact rational arithmetic, then rounded once."""
    return float(sum(binomial_exact(n, p, j) for j in range(t + 1, n + 1)))


def nb_shifted_direct(n, p, j):
    return math.comb(n + j - 1, j) * p ** n * (1 - p) ** j


def geometric_pair_direct(p1, p2, j):
    """P(X1 + X2 = j) for independent G*(p1), G*(p2) by the double sum."""
    q1, q2 = 1 - p1, 1 - p2
    return sum(p1 * q1 ** i * p2 * q2 ** (j - i) for i in range(j + 1))


def geometric_series(p, eps, weight_shift, window_shift, jmax=500, jmin=0):
    """sum_{jmin<=j<=jmax} 1{|j - window_shift - 1| >= eps} (j - weight_shift)**2 p q**j."""
    q = 1 - p
    return math.fsum(
        (j - weight_shift) ** 2 * p * q ** j
        for j in range(jmin, jmax + 1)
        if abs(j - window_shift - 1) >= eps
    )


def geometric_raw_second_moment_beyond(p, eps, jmax=2000):
    q = 1 - p
    return math.fsum(j * j * p * q ** j for j in range(jmax + 1) if abs(j) >= eps)


def walk_geometric_inverse(p, u):
    """First j whose cumulative mass sum_{i<=j} p q**i reaches u."""
    q = 1 - p
    acc = 0.0
    j = 0
    while True:
        acc += p * q ** j
        if acc >= u:
            return j
        j += 1


def poisson_direct(lam, j):
    return math.exp(-lam) * lam ** j / math.factorial(j)
