"""Spread of a group's priorities, measured pairwise on log-ratios.

A deviation array holds one non-negative spread value per criterion pair;
the average-deviation (AD) array combines it with the matching average array
into a single display: averages above the diagonal, deviations below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aggregation import (
    MEAN,
    MEDIAN,
    WEIGHTED,
    AwgmmOptions,
    aggregate_awgmm,
    build_average_array,
)
from .composition import PriorityMatrix
from .errors import InputError, InsufficientSamples, WeightDimensionMismatch

STD = "std"
MAD = "mad"
ROBUST = "robust"

AD_MEAN = "mean"
AD_MEDIAN = "median"
AD_AWGMM = "awgmm"


@dataclass(frozen=True, eq=False)
class DeviationArray:
    """Symmetric n x n array of pairwise log-ratio spreads, zero diagonal."""

    tau: np.ndarray
    estimator: str


@dataclass(frozen=True, eq=False)
class AverageDeviationArray:
    """Average array and its matching deviation array for one estimator."""

    xi: np.ndarray
    tau: np.ndarray
    estimator: str
    labels: tuple[str, ...] | None = None

    @property
    def combined(self) -> np.ndarray:
        """Single display array: xi above the diagonal, tau below, zero diagonal."""
        return np.triu(self.xi, k=1) + np.tril(self.tau, k=-1)


def _log_ratio_tensor(W: PriorityMatrix) -> np.ndarray:
    logs = np.log(W.values)
    return logs[:, :, None] - logs[:, None, :]


def deviation_array_std(W: PriorityMatrix) -> DeviationArray:
    """Sample standard deviation (K-1 denominator) of each pairwise log-ratio."""
    if W.n_dms < 2:
        raise InsufficientSamples("standard deviation needs at least two DMs")
    tau = _log_ratio_tensor(W).std(axis=0, ddof=1)
    return DeviationArray(tau=tau, estimator=STD)


def deviation_array_mad(W: PriorityMatrix) -> DeviationArray:
    """Median absolute deviation about the median, no consistency constant."""
    diffs = _log_ratio_tensor(W)
    med = np.median(diffs, axis=0)
    tau = np.median(np.abs(diffs - med), axis=0)
    return DeviationArray(tau=tau, estimator=MAD)


def deviation_array_robust(W: PriorityMatrix, dm_weights, xi) -> DeviationArray:
    """DM-weighted spread around a given average array.

    tau_ij = sqrt(sum_k lambda_k (ln(W_ki/W_kj) - xi_ij)^2), with ``dm_weights``
    the unit-sum weights from the robust aggregation and ``xi`` the matching
    weighted average array.
    """
    lam = np.asarray(dm_weights, dtype=float)
    if lam.shape != (W.n_dms,):
        raise WeightDimensionMismatch(
            f"{lam.size} weights for {W.n_dms} decision-makers"
        )
    xi = np.asarray(xi, dtype=float)
    diffs = _log_ratio_tensor(W)
    if xi.shape != diffs.shape[1:]:
        raise WeightDimensionMismatch(
            f"average array shape {xi.shape} does not match {diffs.shape[1:]}"
        )
    var = np.tensordot(lam, (diffs - xi) ** 2, axes=(0, 0))
    return DeviationArray(tau=np.sqrt(var), estimator=ROBUST)


def average_deviation_array(
    W: PriorityMatrix,
    estimator: str = AD_MEAN,
    awgmm_options: AwgmmOptions | None = None,
) -> AverageDeviationArray:
    """Matched average/deviation pair for one estimator.

    "mean" pairs the mean array with the sample standard deviation, "median"
    pairs the median array with the MAD, and "awgmm" pairs the DM-weighted
    array from the robust aggregation with the weighted spread around it.
    """
    if estimator == AD_MEAN:
        xi = build_average_array(W, MEAN)
        tau = deviation_array_std(W).tau
    elif estimator == AD_MEDIAN:
        xi = build_average_array(W, MEDIAN)
        tau = deviation_array_mad(W).tau
    elif estimator == AD_AWGMM:
        lam = aggregate_awgmm(W, awgmm_options).dm_weights
        xi = build_average_array(W, WEIGHTED, dm_weights=lam)
        tau = deviation_array_robust(W, lam, xi).tau
    else:
        raise InputError(f"unknown estimator {estimator!r}")
    return AverageDeviationArray(xi=xi, tau=tau, estimator=estimator, labels=W.labels)
