"""Aggregation of K decision-maker priority vectors into one group vector.

Three routes are provided:

* ``aggregate_amm``: column-wise arithmetic mean. Statistically unsound for
  ratio data and kept only as the baseline it is usually (wrongly) computed
  with; callers should surface a warning when reporting it.
* ``aggregate_gmm``: exponential-and-normalize readout of the mean pairwise
  log-ratio array, which is identical to the normalized column-wise geometric
  mean of the priorities.
* ``aggregate_awgmm``: adaptive weighted geometric mean. A Welsch M-estimator
  in log-ratio space, solved by half-quadratic iteration: each DM receives a
  weight that decays exponentially with the squared distance between their
  log-ratio vector and the current group vector, so DMs far from the majority
  ("deviants") contribute little. Returns both the group priorities and the
  per-DM weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .composition import (
    Composition,
    PriorityMatrix,
    inverse_log_ratio,
    pair_indices,
)
from .errors import InsufficientSamples, InputError, WeightDimensionMismatch

AMM = "amm"
GMM = "gmm"
AWGMM = "awgmm"

MEAN = "mean"
MEDIAN = "median"
WEIGHTED = "weighted"

#: Below this squared-scale value all DMs are numerically identical.
DEGENERATE_SIGMA2 = 1e-300


@dataclass(frozen=True)
class AwgmmOptions:
    """Knobs for the half-quadratic iteration.

    ``sigma_denominator`` overrides the denominator of the scale update
    sigma^2 = sum_k ||What_k - wg||^2 / denominator (default n^2 with n the
    number of criteria). ``force_identity_estimator`` replaces the Welsch
    kernel by the identity, which collapses the method onto the plain
    geometric mean and is useful for cross-checks.
    """

    max_iter: int = 500
    tol: float = 1e-10
    sigma_denominator: float | None = None
    force_identity_estimator: bool = False

    def __post_init__(self):
        if self.max_iter < 1:
            raise InputError("max_iter must be at least 1")
        if not self.tol > 0:
            raise InputError("tol must be positive")
        if self.sigma_denominator is not None and not self.sigma_denominator > 0:
            raise InputError("sigma_denominator must be positive")


@dataclass(frozen=True, eq=False)
class AggregationResult:
    """Aggregated group priorities plus method diagnostics.

    ``dm_weights`` is the unit-sum vector of per-DM contributions (AWGMM
    only); ``sigma_trace`` records the Welsch scale per iteration, starting
    with the value used for the first weighting step.
    """

    weights: Composition
    method: str
    dm_weights: np.ndarray | None = None
    iterations: int = 0
    converged: bool = True
    sigma_trace: tuple[float, ...] | None = None


def aggregate_amm(W: PriorityMatrix) -> AggregationResult:
    """Column-wise arithmetic mean of the priority rows (fallacy baseline)."""
    return AggregationResult(
        weights=Composition(W.values.mean(axis=0), W.labels),
        method=AMM,
    )


def build_average_array(
    W: PriorityMatrix,
    estimator: str = MEAN,
    dm_weights=None,
) -> np.ndarray:
    """The n x n array of expected pairwise log-ratios across DMs.

    Entry (i, j) is the chosen estimator applied to {ln(W_ki / W_kj)}_k.
    Antisymmetric by construction for every estimator. The mean and weighted
    variants are additively consistent up to rounding; the median variant in
    general is not.

    Parameters
    ----------
    estimator : {"mean", "median", "weighted"}
    dm_weights : array-like, required for "weighted"
        Non-negative unit-sum weights, one per DM.
    """
    n = W.n_criteria
    logs = np.log(W.values)
    # D[k, i, j] = ln(W_ki / W_kj), exactly antisymmetric in (i, j)
    diffs = logs[:, :, None] - logs[:, None, :]
    if estimator == MEAN:
        return diffs.mean(axis=0)
    if estimator == MEDIAN:
        return np.median(diffs, axis=0)
    if estimator == WEIGHTED:
        if dm_weights is None:
            raise WeightDimensionMismatch("weighted estimator needs dm_weights")
        lam = np.asarray(dm_weights, dtype=float)
        if lam.shape != (W.n_dms,):
            raise WeightDimensionMismatch(
                f"{lam.size} weights for {W.n_dms} decision-makers"
            )
        return np.tensordot(lam, diffs, axes=(0, 0))
    raise InputError(f"unknown estimator {estimator!r}")


def aggregate_gmm(W: PriorityMatrix) -> AggregationResult:
    """Group priorities via the mean log-ratio array.

    Equal (to within 1e-12) to the normalized column-wise geometric mean of
    the priority matrix.
    """
    weights = inverse_log_ratio(
        _pairs_of(build_average_array(W, MEAN)), labels=W.labels
    )
    return AggregationResult(weights=weights, method=GMM)


def _pairs_of(xi: np.ndarray) -> np.ndarray:
    i, j = pair_indices(xi.shape[0])
    return xi[i, j]


def aggregate_awgmm(
    W: PriorityMatrix, opts: AwgmmOptions | None = None
) -> AggregationResult:
    """Robust group priorities via Welsch-weighted half-quadratic iteration.

    Starting from the arithmetic mean of the log-ratio rows (the geometric
    mean point), repeats until the group vector moves less than ``opts.tol``
    in the max norm:

    1. alpha_k = exp(-||What_k - wg||^2 / sigma^2)
    2. lambda_k = alpha_k / sum_j alpha_j
    3. wg = sum_k lambda_k What_k
    4. sigma^2 = sum_k ||What_k - wg||^2 / n^2

    The scale is initialized by applying step 4 at the starting point. When
    the scale underflows (all DMs numerically identical) the result equals
    the geometric mean with uniform DM weights rather than failing.
    """
    if opts is None:
        opts = AwgmmOptions()
    K, n = W.n_dms, W.n_criteria
    if K < 2:
        raise InsufficientSamples("AWGMM needs at least two decision-makers")
    denom = opts.sigma_denominator if opts.sigma_denominator is not None else n * n

    what = W.log_ratios()
    wg = what.mean(axis=0)
    sigma2 = float(((what - wg) ** 2).sum() / denom)
    trace = [sigma2]
    lam = np.full(K, 1.0 / K)
    converged = False
    iterations = 0

    for iterations in range(1, opts.max_iter + 1):
        if opts.force_identity_estimator:
            alpha = np.ones(K)
        elif sigma2 < DEGENERATE_SIGMA2:
            # zero spread: every DM already sits at the group vector
            lam = np.full(K, 1.0 / K)
            converged = True
            break
        else:
            sq_dist = ((what - wg) ** 2).sum(axis=1)
            alpha = np.exp(-sq_dist / sigma2)
        lam = alpha / alpha.sum()
        wg_new = lam @ what
        sigma2 = float(((what - wg_new) ** 2).sum() / denom)
        trace.append(sigma2)
        delta = float(np.max(np.abs(wg_new - wg)))
        wg = wg_new
        if delta < opts.tol:
            converged = True
            break

    weights = inverse_log_ratio(wg, labels=W.labels)
    # same readout through the weighted product of rows, cross-checked
    direct = np.prod(W.values ** lam[:, None], axis=0)
    assert np.allclose(weights.parts, direct / direct.sum(), atol=1e-10)
    return AggregationResult(
        weights=weights,
        method=AWGMM,
        dm_weights=lam,
        iterations=iterations,
        converged=converged,
        sigma_trace=tuple(trace),
    )


def check_pareto(W: PriorityMatrix, result: AggregationResult):
    """Audit Pareto optimality of an aggregation against its input.

    For every ordered pair (i, j) that all DMs strictly prefer (W_ki > W_kj
    for every k), reports whether the aggregated weights preserve the strict
    preference. Returns a list of ((i, j), preserved) entries.
    """
    values = W.values
    agg = result.weights.parts
    report = []
    for i in range(W.n_criteria):
        for j in range(W.n_criteria):
            if i != j and bool(np.all(values[:, i] > values[:, j])):
                report.append(((i, j), bool(agg[i] > agg[j])))
    return report
