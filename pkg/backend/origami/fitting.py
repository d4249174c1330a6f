"""
Power-law fits of count series: count(L) ~ v * L^h + O(L^(h - kappa)).

The leading constant is an unweighted least-squares fit with the exponent fixed, over the
largest decade of L. The error exponent is profiled: for every candidate kappa on a grid the
two-term model v * L^h + c * L^(h - kappa) is fitted and the kappa with the smallest residual
is reported. Nothing here estimates the true error exponent of a stratum.
"""

import logging

import numpy as np

from backend.core import constants
from backend.core.errors import InsufficientData
from backend.core.models import CountSeries, FitResult

logger = logging.getLogger(__name__)

KAPPA_STEP = 0.01
RESIDUAL_TOLERANCE = 1e-9


def fit_window(series: CountSeries) -> tuple[np.ndarray, np.ndarray]:
    """
    Points with positive count and L in the largest decade, widened to the last
    MIN_FIT_POINTS positive points when the decade is too short.

    Raises:
        InsufficientData: If fewer than MIN_FIT_POINTS counts are positive.
    """
    positive = [(l_value, count) for l_value, count in series.points if count > 0]
    if len(positive) < constants.MIN_FIT_POINTS:
        raise InsufficientData(
            f"Need at least {constants.MIN_FIT_POINTS} positive counts to fit, got {len(positive)}"
        )
    l_max = positive[-1][0]
    window = [(l_value, count) for l_value, count in positive if l_value * constants.FIT_WINDOW_RATIO >= l_max]
    if len(window) < constants.MIN_FIT_POINTS:
        window = positive[-constants.MIN_FIT_POINTS:]
    l_values = np.array([l_value for l_value, _ in window], dtype=float)
    counts = np.array([count for _, count in window], dtype=float)
    return l_values, counts


def leading_constant(l_values: np.ndarray, counts: np.ndarray, h: int) -> float:
    design = (l_values ** h).reshape(-1, 1)
    solution, *_ = np.linalg.lstsq(design, counts, rcond=None)
    return float(solution[0])


def log_log_slope(l_values: np.ndarray, counts: np.ndarray) -> float:
    slope, _ = np.polyfit(np.log(l_values), np.log(counts), 1)
    return float(slope)


def error_exponent(l_values: np.ndarray, counts: np.ndarray, h: int) -> float | None:
    """
    Best kappa in (0, h] for the model v * x^h + c * x^(h - kappa), with x = L / max L.

    Returns:
        float | None: None when the one-term fit already leaves no residual or there are
            too few points.
    """
    if len(l_values) < constants.MIN_ERROR_POINTS:
        return None
    x = l_values / l_values.max()
    one_term = np.linalg.lstsq((x ** h).reshape(-1, 1), counts, rcond=None)
    base = counts - one_term[0][0] * x ** h
    if np.linalg.norm(base) <= RESIDUAL_TOLERANCE * max(1.0, np.linalg.norm(counts)):
        return None

    best_kappa, best_norm = None, np.inf
    for kappa in np.arange(KAPPA_STEP, h + KAPPA_STEP / 2, KAPPA_STEP):
        design = np.column_stack([x ** h, x ** (h - kappa)])
        solution, *_ = np.linalg.lstsq(design, counts, rcond=None)
        norm = np.linalg.norm(counts - design @ solution)
        if norm < best_norm:
            best_kappa, best_norm = float(kappa), norm
    return best_kappa


def fit_power_law(series: CountSeries, h: int) -> FitResult:
    """
    Fit count(L) = v * L^h on the largest decade of L.

    Args:
        series (CountSeries): Cumulative counts.
        h (int): Exponent of the leading term, usually the stratum dimension.

    Returns:
        FitResult: v_hat, the log-log slope h_hat, the profiled error exponent and residuals.

    Raises:
        InsufficientData: If fewer than MIN_FIT_POINTS counts are positive.
    """
    l_values, counts = fit_window(series)
    v_hat = leading_constant(l_values, counts, h)
    residuals = counts - v_hat * l_values ** h
    result = FitResult(
        v_hat=v_hat,
        h=h,
        h_hat=log_log_slope(l_values, counts),
        kappa_hat=error_exponent(l_values, counts, h),
        residual_norm=float(np.linalg.norm(residuals)),
        max_relative_residual=float(np.max(np.abs(residuals) / counts)),
        window=(int(l_values[0]), int(l_values[-1])),
        n_points=len(l_values),
    )
    logger.info("Fit over L in [%d, %d]: v_hat=%.6g h_hat=%.4f kappa_hat=%s", *result.window, v_hat, result.h_hat, result.kappa_hat)
    return result
