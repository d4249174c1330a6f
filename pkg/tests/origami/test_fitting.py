import pytest

from backend.core.enums import CountingEngine
from backend.core.errors import InsufficientData
from backend.core.models import CountSeries
from backend.origami.fitting import fit_power_law, fit_window


def _series(counts):
    return CountSeries(list(enumerate(counts, start=1)), CountingEngine.DIRECT)


def test_pure_power_law():
    result = fit_power_law(_series([3 * l ** 4 for l in range(1, 101)]), 4)
    assert result.v_hat == pytest.approx(3)
    assert result.h_hat == pytest.approx(4)
    assert result.kappa_hat is None
    assert result.window == (10, 100)
    assert result.n_points == 91
    assert result.max_relative_residual == pytest.approx(0, abs=1e-9)


def test_error_term_exponent():
    result = fit_power_law(_series([3 * l ** 4 + l ** 2 for l in range(1, 101)]), 4)
    assert result.v_hat == pytest.approx(3, rel=1e-2)
    assert result.kappa_hat == pytest.approx(2, abs=0.3)
    assert result.residual_norm > 0


def test_window_widens_short_decade():
    series = CountSeries([(1, 1), (2, 16), (3, 81), (50, 50 ** 4), (100, 100 ** 4)], CountingEngine.LATTICE)
    l_values, _ = fit_window(series)
    assert list(l_values) == [1, 2, 3, 50, 100]


def test_zero_counts_are_skipped():
    series = _series([0, 0] + [l ** 2 for l in range(3, 9)])
    l_values, counts = fit_window(series)
    assert l_values[0] == 3
    assert all(counts > 0)


def test_insufficient_data():
    with pytest.raises(InsufficientData):
        fit_power_law(_series([0, 0, 1, 2, 3]), 2)


def test_to_dict():
    payload = fit_power_law(_series([l ** 2 for l in range(1, 21)]), 2).to_dict()
    assert payload["h"] == 2
    assert payload["window"] == [2, 20]
