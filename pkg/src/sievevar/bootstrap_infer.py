"""Residual-bootstrap percentile intervals and bias-corrected variants.

The recursive-design scheme resamples centered LS residuals with
replacement, seeds the recursion with a random contiguous block of the
observed sample, and refits the VAR on each pseudo-sample. The
bias-corrected interval runs one bootstrap to estimate the coefficient
bias, corrects the point estimates under a stationarity guard, then reuses
that same bias estimate on every second-stage draw instead of nesting a
second bootstrap loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dgp_sim import SamplePath
from .errors import DimensionMismatchError, SingularMatrixError
from .estimate import VarModel, fit_var_ls
from .delta_infer import IntervalSet
from .streams import SeedLike, generator, seed_record, substream
from .var_core import MatrixSeq, coeff_seq, companion_form, ma_from_ar, spectral_radius

_MAX_REFIT_ATTEMPTS = 10

# delta grid for the stationarity guard: 1.00, 0.99, ..., 0.00
_GUARD_STEP = 0.01


@dataclass(frozen=True)
class BootstrapDraws:
    """IRF estimates across bootstrap replications, shape (M, H+1, K, K)."""

    m: int
    draws: np.ndarray = field(repr=False)
    seed_record: str = ""

    def __post_init__(self) -> None:
        draws = np.asarray(self.draws, dtype=float)
        if draws.ndim != 4 or draws.shape[0] != self.m:
            raise DimensionMismatchError("draws must have shape (M, H+1, K, K)")
        if not np.all(np.isfinite(draws)):
            raise DimensionMismatchError("bootstrap draws contain non-finite values")
        draws = draws.copy()
        draws.flags.writeable = False
        object.__setattr__(self, "draws", draws)

    @property
    def horizon(self) -> int:
        return self.draws.shape[1] - 1

    @property
    def k(self) -> int:
        return self.draws.shape[2]


def residual_bootstrap_sample(
    model: VarModel,
    residuals: np.ndarray,
    source: SamplePath | np.ndarray,
    seed: SeedLike,
) -> SamplePath:
    """One recursive-design pseudo-sample of the same length as ``source``.

    Residuals are centered before resampling; the first p values are a
    random contiguous block of the source sample. The stream is consumed in
    a fixed order (block start, then T residual indices), so outputs are
    bit-identical given the same seed.
    """
    resid = np.asarray(residuals, dtype=float)
    if resid.ndim == 1:
        resid = resid[:, np.newaxis]
    if resid.shape[0] < 2:
        raise ValueError("need at least 2 residual rows")
    values = source.values if isinstance(source, SamplePath) else np.asarray(source)
    t, k = values.shape
    p = model.p

    rng = generator(seed)
    start = int(rng.integers(0, t - p + 1))
    idx = rng.integers(0, resid.shape[0], size=t)
    centered = resid - resid.mean(axis=0)

    stacked = np.hstack(list(model.ar_hat.mats))  # K x Kp
    const = model.intercept if model.intercept is not None else np.zeros(k)
    out = np.empty((t, k))
    out[:p] = values[start : start + p]
    state = out[:p][::-1].reshape(-1)  # [y_{p-1}', ..., y_0']
    for step in range(p, t):
        y_new = const + stacked @ state + centered[idx[step]]
        out[step] = y_new
        state[k:] = state[:-k]
        state[:k] = y_new
    return SamplePath(k=k, t=t, values=out, seed_record=seed_record(seed))


def _refit_from_draw(
    model: VarModel,
    residuals: np.ndarray,
    source: SamplePath | np.ndarray,
    intercept: bool,
    seed: SeedLike,
    path: tuple[int, ...],
) -> VarModel:
    """Resample and refit, retrying on singular fits with fresh streams."""
    for attempt in range(_MAX_REFIT_ATTEMPTS):
        stream = substream(seed, *path, attempt)
        pseudo = residual_bootstrap_sample(model, residuals, source, stream)
        try:
            refit, _ = fit_var_ls(pseudo, model.p, intercept=intercept)
            return refit
        except SingularMatrixError:
            continue
    raise SingularMatrixError(
        f"bootstrap refit failed {_MAX_REFIT_ATTEMPTS} times for path {path}"
    )


def bootstrap_irf_distribution(
    y: SamplePath | np.ndarray,
    p: int,
    horizon: int,
    m: int,
    seed: SeedLike,
    intercept: bool = False,
) -> BootstrapDraws:
    """IRF estimates from m recursive-bootstrap refits of a VAR(p).

    Replication r draws from the child stream (seed, r); the result does
    not depend on the order replications execute in.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    model, resid = fit_var_ls(y, p, intercept=intercept)
    k = model.k
    draws = np.empty((m, horizon + 1, k, k))
    for r in range(m):
        refit = _refit_from_draw(model, resid, y, intercept, seed, (r,))
        draws[r] = ma_from_ar(refit.ar_hat, horizon).mats
    return BootstrapDraws(m=m, draws=draws, seed_record=seed_record(seed))


def percentile_indices(m: int, level: float) -> tuple[int, int]:
    """1-based order-statistic indices of the equal-tailed percentile interval."""
    lo = math.ceil(m * (1.0 - level) / 2.0)
    hi = math.ceil(m * (1.0 + level) / 2.0)
    return max(lo, 1), min(hi, m)


def percentile_ci(
    draws: BootstrapDraws,
    level: float,
    points: MatrixSeq | np.ndarray | None = None,
    method: str = "BOOT",
    t: int = 0,
) -> IntervalSet:
    """Equal-tailed Efron percentile interval per response entry.

    Bounds are raw order statistics (no interpolation). ``points`` defaults
    to the entrywise sample median of the draws.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    lo, hi = percentile_indices(draws.m, level)
    ordered = np.sort(draws.draws, axis=0)
    lowers = ordered[lo - 1]
    uppers = ordered[hi - 1]
    if points is None:
        pts = np.median(draws.draws, axis=0)
    else:
        pts = points.mats if isinstance(points, MatrixSeq) else np.asarray(points)
    return IntervalSet(
        method=method, level=level, t=t, points=pts, lowers=lowers, uppers=uppers
    )


def stationarity_guard(
    coef: np.ndarray, bias: np.ndarray
) -> tuple[np.ndarray, float]:
    """Largest delta in {1.00, 0.99, ..., 0} with stationary coef - delta*bias.

    Returns the corrected coefficient stack and the delta used; delta = 0
    cancels the correction entirely and is returned without a radius check.
    """
    k = coef.shape[1]
    for step in range(100, 0, -1):
        delta = step * _GUARD_STEP
        cand = coef - delta * bias
        if spectral_radius(companion_form(coeff_seq(cand, k))) < 1.0:
            return cand, delta
    return coef.copy(), 0.0


def bias_corrected_coefficients(
    y: SamplePath | np.ndarray,
    p: int,
    m: int,
    seed: SeedLike,
    intercept: bool = False,
) -> tuple[MatrixSeq, np.ndarray, float]:
    """First-stage bootstrap bias correction of the VAR coefficients.

    Returns (corrected coefficients, bias estimate, guard delta). The bias
    estimate is mean(bootstrap coefficients) - fitted coefficients.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    model, resid = fit_var_ls(y, p, intercept=intercept)
    acc = np.zeros_like(model.ar_hat.mats)
    for r in range(m):
        refit = _refit_from_draw(model, resid, y, intercept, seed, (0, r))
        acc += refit.ar_hat.mats
    bias = acc / m - model.ar_hat.mats
    corrected, delta = stationarity_guard(model.ar_hat.mats, bias)
    return coeff_seq(corrected, model.k), bias, delta


def corrected_model_draws(
    model: VarModel,
    residuals: np.ndarray,
    source: SamplePath | np.ndarray,
    horizon: int,
    m: int,
    seed: SeedLike,
    bias: np.ndarray,
    intercept: bool = False,
) -> BootstrapDraws:
    """Second-stage draws: resample from ``model``, refit, subtract ``bias``.

    Each replication's refitted coefficients receive the same bias estimate
    under a per-draw stationarity guard before the IRFs are computed. With
    a zero bias this reduces exactly to a plain bootstrap of ``model``.
    """
    k = model.k
    draws = np.empty((m, horizon + 1, k, k))
    for r in range(m):
        refit = _refit_from_draw(model, residuals, source, intercept, seed, (1, r))
        fixed, _ = stationarity_guard(refit.ar_hat.mats, bias)
        draws[r] = ma_from_ar(coeff_seq(fixed, k), horizon).mats
    return BootstrapDraws(m=m, draws=draws, seed_record=seed_record(seed))


def bias_corrected_bootstrap(
    y: SamplePath | np.ndarray,
    p: int,
    horizon: int,
    m: int,
    level: float,
    seed: SeedLike,
    intercept: bool = False,
) -> IntervalSet:
    """Bias-corrected bootstrap percentile intervals (single-stage shortcut).

    Stage one estimates the coefficient bias; stage two resamples from the
    bias-corrected model and applies the same stage-one bias estimate to
    each replication's coefficients (with the stationarity guard applied
    per draw) before computing its IRFs. Intervals are equal-tailed
    percentiles of the corrected draws, centered on the corrected model's
    own IRFs.
    """
    model, resid = fit_var_ls(y, p, intercept=intercept)
    corrected, bias, _ = bias_corrected_coefficients(
        y, p, m, seed, intercept=intercept
    )
    corrected_model = replace(model, ar_hat=corrected)
    boot = corrected_model_draws(
        corrected_model, resid, y, horizon, m, seed, bias, intercept
    )
    points = ma_from_ar(corrected, horizon)
    t = y.t if isinstance(y, SamplePath) else len(np.asarray(y))
    return percentile_ci(boot, level, points=points, method="BOOT-db", t=t)
