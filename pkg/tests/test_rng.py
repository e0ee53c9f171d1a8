import math

import numpy as np
import pytest

from triarray import _pykernels
from triarray.distributions import CellLaw, Kind, sample_cell, sample_cells, sample_from_uniform
from triarray.rng import CounterStream, counter_uniform, stream_key

from oracles import walk_geometric_inverse


def test_bernoulli_convention():
    law = CellLaw(Kind.BERNOULLI, 0.5)
    assert sample_from_uniform(law, 0.3) == 1
    assert sample_from_uniform(law, 0.5) == 0
    assert sample_from_uniform(law, 0.0) == 1


def test_geometric_convention():
    assert walk_geometric_inverse(0.5, 0.9) == 3
    assert sample_from_uniform(CellLaw(Kind.GEOMETRIC, 0.5), 0.9) == 3


@pytest.mark.parametrize("p", [0.05, 0.3, 0.5, 0.9, 0.999])
def test_geometric_inverse_matches_walk(p, rng):
    law = CellLaw(Kind.GEOMETRIC, p)
    for u in rng.random(400):
        assert sample_from_uniform(law, u) == walk_geometric_inverse(p, u)


def test_vectorized_matches_scalar(rng):
    u = rng.random(2000)
    for law in (CellLaw(Kind.GEOMETRIC, 0.37), CellLaw(Kind.BERNOULLI, 0.37)):
        vec = sample_cells(law, u)
        assert list(vec) == [sample_from_uniform(law, x) for x in u]


@pytest.mark.parametrize("law", [CellLaw(Kind.BERNOULLI, 0.2), CellLaw(Kind.GEOMETRIC, 0.4),
                                 CellLaw(Kind.GEOMETRIC, 0.95)])
def test_monte_carlo_mean(law):
    n = 10 ** 6
    keys = _pykernels.replicate_keys(99, 1, 0, n)
    x = sample_cells(law, _pykernels.uniforms(keys, 0))
    assert abs(x.mean() - law.mean) <= 5 * math.sqrt(law.variance / n)


def test_stream_reproducible():
    a = CounterStream(seed=5, row=10, replicate=3)
    b = CounterStream(seed=5, row=10, replicate=3)
    xs = [a.next_uniform() for _ in range(10)]
    assert xs == [b.next_uniform() for _ in range(10)]
    assert xs[4] == a.uniform_at(4)
    assert all(0.0 <= x < 1.0 for x in xs)
    assert CounterStream(seed=5, row=10, replicate=4).next_uniform() != xs[0]


def test_sample_cell_consumes_stream():
    s = CounterStream(1)
    u0 = CounterStream(1).uniform_at(0)
    law = CellLaw(Kind.BERNOULLI, 0.5)
    assert sample_cell(law, s) == int(u0 < 0.5)
    assert s.counter == 1


def test_scalar_and_vector_streams_agree():
    keys = _pykernels.replicate_keys(123, 7, 0, 5)
    for r in range(5):
        assert int(keys[r]) == stream_key(123, 7, r)
        vec = _pykernels.uniforms(keys, 11)
        assert vec[r] == counter_uniform(stream_key(123, 7, r), 11)


def test_uniforms_look_uniform():
    keys = _pykernels.replicate_keys(0, 0, 0, 200_000)
    u = _pykernels.uniforms(keys, 0)
    counts = np.histogram(u, bins=20, range=(0, 1))[0]
    expected = u.size / 20
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < 50  # 19 dof; p ~ 1e-4
