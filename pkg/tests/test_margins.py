import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from copreg.errors import SizeError
from copreg.margins import ecdf_eval, ecdf_transform, empirical_quantile


def _one_column(col):
    col = np.asarray(col, dtype=float)
    return ecdf_transform(np.column_stack([col, np.zeros_like(col)])).u_y


@pytest.mark.parametrize(
    "column,expected",
    [
        ((3, 1, 2), (0.75, 0.25, 0.5)),
        ((1, 2, 3, 4), (0.2, 0.4, 0.6, 0.8)),
        ((1, 1, 2), (0.5, 0.5, 0.75)),
    ],
)
def test_ecdf_transform_examples(column, expected):
    assert_allclose(_one_column(column), expected, rtol=0, atol=1e-15)


def test_ecdf_transform_too_small():
    with pytest.raises(SizeError):
        ecdf_transform([[1.0, 2.0]])


@pytest.mark.parametrize("query,expected", [(0.5, 0.0), (3.0, 0.75), (2.5, 0.5), (10.0, 0.75)])
def test_ecdf_eval(query, expected):
    assert ecdf_eval([3.0, 1.0, 2.0], query) == expected


@pytest.mark.parametrize("p,expected", [(0.5, 2.0), (0.1, 1.0), (0.75, 3.0), (0.9, 3.0)])
def test_empirical_quantile(p, expected):
    assert empirical_quantile([3.0, 1.0, 2.0], p) == expected


def test_pseudo_sample_shapes():
    data = np.random.default_rng(0).normal(size=(50, 3))
    ps = ecdf_transform(data)
    assert (ps.n, ps.d) == (50, 2)
    assert ps.columns().shape == (50, 3)
    assert_array_equal(ps.y_raw, data[:, 0])


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@settings(max_examples=80, deadline=None)
@given(col=arrays(np.float64, st.integers(min_value=2, max_value=40), elements=finite, unique=True))
def test_distinct_column_properties(col):
    n = col.size
    u = _one_column(col)
    assert np.all((u > 0) & (u < 1))
    assert_allclose(np.sort(u), np.arange(1, n + 1) / (n + 1), atol=1e-15)
    assert np.mean(u) == pytest.approx(0.5, abs=1e-14)
    # invariance under a strictly increasing transform
    assert_array_equal(_one_column(np.arctan(col / 1e3) + 3.0 * col), u)
    # quantile round trip
    for x in col:
        assert empirical_quantile(col, ecdf_eval(col, x)) == x


@settings(max_examples=80, deadline=None)
@given(col=arrays(np.float64, st.integers(min_value=2, max_value=40), elements=st.integers(0, 5).map(float)))
def test_ties_share_maximal_count(col):
    u = _one_column(col)
    expected = np.array([np.sum(col <= x) for x in col]) / (col.size + 1)
    assert_array_equal(u, expected)
    assert np.all(u >= 1 / (col.size + 1)) and np.all(u <= col.size / (col.size + 1))
