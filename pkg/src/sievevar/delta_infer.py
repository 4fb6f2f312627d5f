"""Asymptotic IRF covariances and Gaussian confidence intervals.

Two covariance flavors share one algebraic core. The finite-order form is

    G_i (Gamma^{-1} kron Sigma_u) G_i',
    G_i = sum_{m=0}^{i-1} J (A_c')^{i-1-m} kron Phi_m,

with Gamma the regression moment matrix. The sieve form evaluates the
equivalent double sum

    sum_{m,n} [J (A_c')^{i-1-m} Gamma_p^{-1} A_c^{i-1-n} J'] kron
              [Phi_m Sigma_u Phi_n']

with the block-Toeplitz autocovariance Gamma_p plugged in. By the Kronecker
mixed-product identity the two coincide when fed identical Gamma and Sigma;
the finite-sample differences between the interval families come entirely
from which Gamma and which residual-covariance divisor each tradition plugs
in. vec() is column-stacking throughout, so entry (row, col) of Phi_i sits
at position row + K * col.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.linalg
from scipy.special import ndtri

from .errors import DimensionMismatchError, SingularMatrixError
from .estimate import VarModel
from .var_core import MatrixSeq, companion_form, ma_from_ar


@dataclass(frozen=True)
class IrfCovariance:
    """Asymptotic covariance of sqrt(T) vec(Phi_hat_i - Phi_i)."""

    horizon: int
    cov: np.ndarray = field(repr=False)
    flavor: str = "finite_order"

    def __post_init__(self) -> None:
        cov = np.asarray(self.cov, dtype=float)
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > 1e-10 * scale:
            raise DimensionMismatchError("IRF covariance is not symmetric")
        if np.min(np.diag(cov)) < -1e-12 * scale:
            raise DimensionMismatchError("IRF covariance has negative diagonal")
        cov = (cov + cov.T) / 2.0
        cov.flags.writeable = False
        object.__setattr__(self, "cov", cov)

    def entry_variance(self, row: int, col: int) -> float:
        k = int(round(np.sqrt(self.cov.shape[0])))
        return float(self.cov[row + k * col, row + k * col])


@dataclass(frozen=True)
class IntervalSet:
    """Per-horizon, per-response confidence intervals for one method."""

    method: str
    level: float
    t: int
    points: np.ndarray = field(repr=False)
    lowers: np.ndarray = field(repr=False)
    uppers: np.ndarray = field(repr=False)
    clamped: int = 0

    def __post_init__(self) -> None:
        for name in ("points", "lowers", "uppers"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim != 3:
                raise DimensionMismatchError(f"{name} must have shape (H+1, K, K)")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.points.shape != self.lowers.shape or self.points.shape != self.uppers.shape:
            raise DimensionMismatchError("interval arrays disagree in shape")
        if np.any(self.lowers > self.uppers + 1e-15):
            raise DimensionMismatchError("interval lower bound exceeds upper bound")

    @property
    def horizon(self) -> int:
        return self.points.shape[0] - 1

    @property
    def k(self) -> int:
        return self.points.shape[1]

    def lengths(self) -> np.ndarray:
        return self.uppers - self.lowers

    def contains(self, truth: MatrixSeq | np.ndarray) -> np.ndarray:
        """Boolean hit array: true entry inside the closed interval."""
        mats = truth.mats if isinstance(truth, MatrixSeq) else np.asarray(truth)
        if mats.shape != self.points.shape:
            raise DimensionMismatchError("truth shape disagrees with intervals")
        return (self.lowers <= mats) & (mats <= self.uppers)

    def iter_entries(self) -> Iterator[tuple[int, int, int, float, float, float]]:
        """(horizon, row, col, point, lower, upper) in fixed row-major order."""
        h1, k, _ = self.points.shape
        for i in range(h1):
            for r in range(k):
                for c in range(k):
                    yield (
                        i,
                        r,
                        c,
                        float(self.points[i, r, c]),
                        float(self.lowers[i, r, c]),
                        float(self.uppers[i, r, c]),
                    )


def _companion_power_cols(model: VarModel, n: int) -> np.ndarray:
    """Stack of A_c^a J' for a = 0..n-1, shape (n, Kp, K)."""
    comp = companion_form(model.ar_hat).data
    k, kp = model.k, model.k * model.p
    cols = np.empty((max(n, 1), kp, k))
    cols[0] = np.eye(kp, k)
    for a in range(1, n):
        cols[a] = comp @ cols[a - 1]
    return cols[:n]


def _inverse_pd(matrix: np.ndarray, what: str) -> np.ndarray:
    try:
        cho = scipy.linalg.cho_factor(matrix)
        return scipy.linalg.cho_solve(cho, np.eye(matrix.shape[0]))
    except (scipy.linalg.LinAlgError, ValueError):
        raise SingularMatrixError(
            f"singular {what}", condition_number=float(np.linalg.cond(matrix))
        ) from None


def irf_jacobian(model: VarModel, i: int) -> np.ndarray:
    """Jacobian of vec(Phi_i) with respect to vec([A_1 ... A_p]).

    G_i = sum_{m=0}^{i-1} J (A_c')^{i-1-m} kron Phi_m, a K^2 x (K^2 p)
    matrix evaluated at the fitted coefficients.
    """
    if i < 1:
        raise ValueError("Jacobian defined for horizons i >= 1")
    cols = _companion_power_cols(model, i)
    phis = ma_from_ar(model.ar_hat, i - 1).mats
    g = np.zeros((model.k**2, model.k**2 * model.p))
    for m in range(i):
        g += np.kron(cols[i - 1 - m].T, phis[m])
    return g


def finite_order_covariances(
    model: VarModel, horizons: Sequence[int], sigma_u: np.ndarray | None = None
) -> list[IrfCovariance]:
    """Finite-order covariances G_i (Gamma^{-1} kron Sigma) G_i' for each horizon."""
    if sigma_u is None:
        sigma_u = model.sigma_u_hat
    gamma_inv = _inverse_pd(model.moment_matrix, "moment matrix")
    mid = np.kron(gamma_inv, sigma_u)
    maxh = max(horizons, default=0)
    cols = _companion_power_cols(model, maxh)
    phis = ma_from_ar(model.ar_hat, max(maxh - 1, 0)).mats
    out = []
    for i in horizons:
        if i < 1:
            raise ValueError("covariances defined for horizons i >= 1")
        g = np.zeros((model.k**2, model.k**2 * model.p))
        for m in range(i):
            g += np.kron(cols[i - 1 - m].T, phis[m])
        out.append(IrfCovariance(horizon=i, cov=g @ mid @ g.T, flavor="finite_order"))
    return out


def finite_order_cov(
    model: VarModel, i: int, sigma_u: np.ndarray | None = None
) -> IrfCovariance:
    """Single-horizon convenience wrapper around finite_order_covariances."""
    return finite_order_covariances(model, [i], sigma_u=sigma_u)[0]


def sieve_covariances(
    model: VarModel,
    gamma_p: np.ndarray,
    horizons: Sequence[int],
    sigma_u: np.ndarray | None = None,
) -> list[IrfCovariance]:
    """Sieve covariances from the plug-in bracket double sum.

    ``gamma_p`` is the Kp x Kp block-Toeplitz autocovariance matrix; the
    residual covariance defaults to the ml divisor, the plug-in used by the
    sieve tradition.
    """
    if sigma_u is None:
        sigma_u = model.sigma_u("ml")
    gamma_p = np.asarray(gamma_p, dtype=float)
    if gamma_p.shape != (model.k * model.p, model.k * model.p):
        raise DimensionMismatchError(
            f"gamma_p must be {model.k * model.p} square, got {gamma_p.shape}"
        )
    gamma_inv = _inverse_pd(gamma_p, "Toeplitz autocovariance matrix")

    maxh = max(horizons, default=0)
    k = model.k
    cols = _companion_power_cols(model, maxh)  # (H, Kp, K)
    phis = ma_from_ar(model.ar_hat, max(maxh - 1, 0)).mats
    # brackets[a, b] = J (A_c')^a Gamma^{-1} A_c^b J'
    brackets = np.einsum("aux,uv,bvy->abxy", cols, gamma_inv, cols, optimize=True)
    # inner[m, n] = Phi_m Sigma Phi_n'
    inner = np.einsum("mxu,uv,nyv->mnxy", phis, sigma_u, phis, optimize=True)

    out = []
    for i in horizons:
        if i < 1:
            raise ValueError("covariances defined for horizons i >= 1")
        rev = brackets[i - 1 :: -1, i - 1 :: -1][:i, :i]
        cov = np.einsum("mnxy,mnuv->xuyv", rev, inner[:i, :i]).reshape(k * k, k * k)
        out.append(IrfCovariance(horizon=i, cov=cov, flavor="sieve"))
    return out


def sieve_cov(
    model: VarModel,
    gamma_p: np.ndarray,
    i: int,
    sigma_u: np.ndarray | None = None,
) -> IrfCovariance:
    """Single-horizon convenience wrapper around sieve_covariances."""
    return sieve_covariances(model, gamma_p, [i], sigma_u=sigma_u)[0]


def delta_ci(
    phi_hat: MatrixSeq,
    covs: Iterable[IrfCovariance],
    level: float,
    t: int,
    method: str | None = None,
) -> IntervalSet:
    """Gaussian intervals point +- z sqrt(cov_diag / T) for each response.

    Horizon 0 intervals are degenerate at the identity, which is known
    exactly. Negative variance entries (roundoff from near-singular moment
    matrices) are clamped to zero and counted in ``clamped``.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    cov_by_h = {c.horizon: c for c in covs}
    h = phi_hat.max_lag
    missing = [i for i in range(1, h + 1) if i not in cov_by_h]
    if missing:
        raise DimensionMismatchError(f"missing covariances for horizons {missing}")
    if method is None:
        flavors = {c.flavor for c in cov_by_h.values()}
        method = "S-LS" if flavors == {"sieve"} else "LS"

    k = phi_hat.dim
    z = float(ndtri((1.0 + level) / 2.0))
    points = phi_hat.mats.copy()
    lowers = points.copy()
    uppers = points.copy()
    clamped = 0
    for i in range(1, h + 1):
        cov = cov_by_h[i]
        for c in range(k):
            for r in range(k):
                var = cov.entry_variance(r, c)
                if var < 0.0:
                    var = 0.0
                    clamped += 1
                half = z * np.sqrt(var / t)
                lowers[i, r, c] = points[i, r, c] - half
                uppers[i, r, c] = points[i, r, c] + half
    return IntervalSet(
        method=method,
        level=level,
        t=t,
        points=points,
        lowers=lowers,
        uppers=uppers,
        clamped=clamped,
    )


def horizon_gate(p: int, horizon: int) -> list[tuple[int, bool]]:
    """Validity flags for sieve inference: horizon i is in-range iff i <= p."""
    return [(i, i <= p) for i in range(horizon + 1)]
