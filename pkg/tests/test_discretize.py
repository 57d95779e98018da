import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from compressdep.discretize import (RealSeries, SymbolSeries, discretize, empirical_cdf, log_returns,
                                    rank_plot_data)

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_empirical_cdf_examples():
    assert empirical_cdf([1, 2, 3, 4], 2) == 0.5
    assert empirical_cdf([1, 2, 3, 4], 0) == 0.0
    assert empirical_cdf([5, 5, 5], 5) == 1.0


def test_discretize_hand_ranked():
    sym = discretize([3.2, -1.0, 7.0, 0.0], 2)
    assert sym.symbols.tolist() == [2, 0, 3, 1]


def test_discretize_increasing_is_identity_at_8_bits():
    sym = discretize(np.linspace(-3, 5, 256), 8)
    assert sym.symbols.tolist() == list(range(256))


def test_discretize_ties_spread_over_bins():
    sym = discretize(np.full(8, 1.5), 2)
    assert sym.symbols.tolist() == [0, 0, 1, 1, 2, 2, 3, 3]
    assert np.bincount(sym.symbols).tolist() == [2, 2, 2, 2]


def test_distinct_values_match_floor_of_ecdf():
    x = np.random.default_rng(1).standard_normal(1000)
    sym = discretize(x, 8)
    lit = np.array([min(int(256 * empirical_cdf(x, v)), 255) for v in x])
    # ecdf at x_i is rank/n; the rank bin uses (rank - 1)/n, equal except where
    # 256 * rank / n lands exactly on an integer
    assert np.mean(lit == sym.symbols) > 0.7
    assert np.all(np.abs(lit - sym.symbols.astype(int)) <= 1)


def test_rejects_non_finite_and_bad_bits():
    with pytest.raises(ValueError):
        discretize([1.0, np.nan], 2)
    with pytest.raises(ValueError):
        discretize([1.0, np.inf], 2)
    with pytest.raises(ValueError):
        discretize([1.0, 2.0], 0)
    with pytest.raises(ValueError):
        discretize([1.0, 2.0], 17)


def test_warns_when_fewer_points_than_bins():
    with pytest.warns(UserWarning):
        discretize([1.0, 2.0, 3.0], 8)


def test_sixteen_bit_roundtrip():
    sym = discretize(np.random.default_rng(0).standard_normal(70000), 16)
    assert sym.symbols.max() < 1 << 16
    raw = sym.to_bytes()
    assert len(raw) == 2 * len(sym)
    assert SymbolSeries.from_bytes(raw, 16).symbols.tolist() == sym.symbols.tolist()
    assert raw[:2] == int(sym.symbols[0]).to_bytes(2, "little")


@settings(max_examples=60)
@given(st.integers(1, 8), st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_marginal_uniformity(bits, mult, seed):
    n = mult << bits
    rng = np.random.default_rng(seed)
    x = rng.choice(rng.standard_normal(5), size=n)  # heavy ties
    counts = np.bincount(discretize(x, bits).symbols, minlength=1 << bits)
    assert np.all(counts == n >> bits)


@given(arrays(float, st.integers(1, 300), elements=finite), st.integers(1, 8))
def test_occupancy_differs_by_at_most_one(x, bits):
    if x.size < 1 << bits:
        return
    counts = np.bincount(discretize(x, bits).symbols, minlength=1 << bits)
    assert counts.max() - counts.min() <= 1


@given(arrays(np.int64, st.integers(2, 200), elements=st.integers(-10**6, 10**6), unique=True),
       st.integers(1, 8))
def test_monotone_invariance(xi, bits):
    import warnings
    x = xi.astype(float)
    gx = np.cbrt(x) * 5 + np.exp(x / 1e6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = discretize(x, bits).symbols
        b = discretize(gx, bits).symbols
    assert a.tolist() == b.tolist()


@given(arrays(float, st.integers(2, 200), elements=finite, unique=True), st.integers(1, 6),
       st.integers(0, 2**32 - 1))
def test_permutation_equivariance(x, bits, seed):
    import warnings
    perm = np.random.default_rng(seed).permutation(x.size)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = discretize(x, bits).symbols
        b = discretize(x[perm], bits).symbols
    assert b.tolist() == a[perm].tolist()


@given(st.integers(1, 8), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_idempotent(bits, mult, seed):
    n = mult << bits
    sym = discretize(np.random.default_rng(seed).standard_normal(n), bits)
    again = discretize(sym.symbols.astype(float), bits)
    assert again.symbols.tolist() == sym.symbols.tolist()


def test_rank_plot_data():
    assert rank_plot_data(SymbolSeries([5, 0, 255], 8)) == [(0, 5), (1, 0), (2, 255)]
    assert rank_plot_data(SymbolSeries(np.array([], dtype=np.uint8), 8)) == []


def test_rank_plot_occupancy_concentration():
    n = 10_000
    states = [s for _, s in rank_plot_data(discretize(np.random.default_rng(4).uniform(size=n), 8))]
    counts = np.bincount(states, minlength=256)
    assert np.all(np.abs(counts - n / 256) <= 3 * np.sqrt(n / 256))


def test_symbol_series_range_check():
    with pytest.raises(ValueError):
        SymbolSeries([0, 4], 2)


def test_real_series_validation():
    with pytest.raises(ValueError):
        RealSeries([])
    with pytest.raises(ValueError):
        RealSeries([1.0, 2.0], timestamps=[1.0, 1.0])
    assert len(RealSeries([1.0, 2.0], timestamps=[0.0, 1.0])) == 2


def test_log_returns():
    np.testing.assert_allclose(log_returns([100, 110, 99]), [np.log(1.1), np.log(0.9)])
    with pytest.raises(ValueError):
        log_returns([1.0, 0.0])
