"""ARMA(p,q) fitting, BIC order selection and residual extraction.

Coefficients follow the convention
``x_t = sum_i phi_i x_{t-i} + e_t + sum_j psi_j e_{t-j}``.

Estimation is conditional-sum-of-squares Gaussian likelihood:
a Hannan-Rissanen two-stage regression (long-AR pre-fit of order
``2 * ceil(ln n)``) provides starting values, then L-BFGS-B minimizes the
CSS objective in a partial-autocorrelation parameterization that keeps
every iterate stationary and invertible.  The innovation recursion and
its exact gradient are single linear-filter passes, so a fit costs a few
dozen O(n) operations regardless of order.

BIC convention: ``-2 log L + (p + q + 1) ln n`` — the innovation variance
counts as a parameter, the mean does not (series are demeaned before
fitting and treated as zero-mean).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_toeplitz
from scipy.optimize import minimize
from scipy.signal import lfilter

from .errors import FitError, ValidationError
from .validation import as_float_1d, check_in_range


# ---------------------------------------------------------------------------
# Stationarity/invertibility parameterization (partial autocorrelations)
# ---------------------------------------------------------------------------

def _pacf_to_coeffs(r: np.ndarray) -> np.ndarray:
    """Durbin-Levinson: partial autocorrelations in (-1,1) -> AR coefficients."""
    y = np.empty(0)
    for k in range(1, len(r) + 1):
        rk = r[k - 1]
        prev = y
        y = np.empty(k)
        y[: k - 1] = prev - rk * prev[::-1]
        y[k - 1] = rk
    return y

def _coeffs_to_pacf(coeffs: np.ndarray) -> np.ndarray:
    """Inverse Durbin-Levinson; clips at the boundary for non-stationary input."""
    y = np.asarray(coeffs, dtype=float).copy()
    r = np.empty(len(y))
    for k in range(len(y), 0, -1):
        rk = float(np.clip(y[k - 1], -0.999, 0.999))
        r[k - 1] = rk
        if k > 1:
            prev = y[: k - 1]
            y = (prev + rk * prev[::-1]) / (1.0 - rk * rk)
    return r

def _uncons_to_coeffs(u: np.ndarray) -> np.ndarray:
    r = u / np.sqrt(1.0 + u * u)
    return _pacf_to_coeffs(r)

def _coeffs_to_uncons(coeffs: np.ndarray) -> np.ndarray:
    if len(coeffs) == 0:
        return np.empty(0)
    r = np.clip(_coeffs_to_pacf(coeffs), -0.999, 0.999)
    return r / np.sqrt(1.0 - r * r)


# ---------------------------------------------------------------------------
# Model containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArmaModel:
    """A fitted ARMA(p,q) model (stationary and invertible by construction)."""

    p: int
    q: int
    ar_coeffs: tuple[float, ...]
    ma_coeffs: tuple[float, ...]
    innovation_variance: float
    log_likelihood: float
    bic: float
    n: int
    mean: float = 0.0
    converged: bool = True
    n_iter: int = 0

    @property
    def order(self) -> tuple[int, int]:
        return (self.p, self.q)


@dataclass
class ResidualSeries:
    """One-step-ahead prediction errors under a fitted model."""

    values: np.ndarray
    model: ArmaModel
    stage: str = "residual"

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class AcfResult:
    """Sample autocorrelations for lags 0..max_lag with a white-noise band."""

    values: np.ndarray
    band: float  # +- 1.96 / sqrt(n)
    n: int


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------

def _innovations(x: np.ndarray, phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    b = np.concatenate(([1.0], -phi))
    a = np.concatenate(([1.0], psi))
    return lfilter(b, a, x)

def _css_objective(u: np.ndarray, x: np.ndarray, p: int, q: int
                   ) -> tuple[float, np.ndarray]:
    """log(SSE) of the innovation recursion and its exact gradient.

    The derivative of the innovations with respect to each coefficient is
    a lag of one auxiliary filtered series, so the gradient needs just two
    extra filter passes; the chain rule through the pacf transform uses a
    finite-difference Jacobian of the (cheap) transform itself.
    """
    phi = _uncons_to_coeffs(u[:p]) if p else np.empty(0)
    psi = -_uncons_to_coeffs(u[p:]) if q else np.empty(0)
    e = _innovations(x, phi, psi)
    sse = float(e @ e)
    grad_c = np.empty(p + q)
    a = np.concatenate(([1.0], psi))
    if p:
        ux = lfilter([1.0], a, x)
        for i in range(1, p + 1):
            grad_c[i - 1] = -2.0 * float(e[i:] @ ux[:-i]) / sse
    if q:
        ue = lfilter([1.0], a, e)
        for j in range(1, q + 1):
            grad_c[p + j - 1] = -2.0 * float(e[j:] @ ue[:-j]) / sse
    grad = np.empty(p + q)
    step = 1e-7
    if p:
        grad[:p] = grad_c[:p] @ _transform_jacobian(u[:p], step, sign=1.0)
    if q:
        grad[p:] = grad_c[p:] @ _transform_jacobian(u[p:], step, sign=-1.0)
    return math.log(sse), grad

def _transform_jacobian(u: np.ndarray, step: float, sign: float) -> np.ndarray:
    base = sign * _uncons_to_coeffs(u)
    jac = np.empty((len(u), len(u)))
    for m in range(len(u)):
        bumped = u.copy()
        bumped[m] += step
        jac[:, m] = (sign * _uncons_to_coeffs(bumped) - base) / step
    return jac

def _hannan_rissanen(x: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Two-stage OLS starting values (long-AR pre-fit, then joint regression)."""
    n = len(x)
    long_order = min(2 * math.ceil(math.log(n)), n // 4)
    acov = np.array([x[: n - lag] @ x[lag:] for lag in range(long_order + 1)]) / n
    if acov[0] <= 0:
        raise FitError("series has zero variance")
    phi_long = solve_toeplitz(acov[:long_order], acov[1: long_order + 1])
    ehat = lfilter(np.concatenate(([1.0], -phi_long)), [1.0], x)
    ehat[:long_order] = 0.0
    start = max(p, q)
    design = np.empty((n - start, p + q))
    for i in range(1, p + 1):
        design[:, i - 1] = x[start - i: n - i]
    for j in range(1, q + 1):
        design[:, p + j - 1] = ehat[start - j: n - j]
    beta, *_ = np.linalg.lstsq(design, x[start:], rcond=None)
    return beta[:p], beta[p:]


def fit_arma(values, p: int, q: int, max_iter: int = 500) -> ArmaModel:
    """Fit ARMA(p,q) by conditional Gaussian likelihood.

    The series is demeaned first; the mean is not counted as a parameter.
    Raises :class:`FitError` with best-so-far diagnostics if the optimizer
    does not converge.
    """
    x = as_float_1d(values, "series")
    check_in_range(p, "p", 0, None)
    check_in_range(q, "q", 0, None)
    n = len(x)
    if n <= 10 * (p + q + 1):
        raise ValidationError(
            f"series too short for ARMA({p},{q}): need n > {10 * (p + q + 1)}")
    if np.ptp(x) == 0.0:
        raise ValidationError("series has zero variance")
    mean = float(x.mean())
    x = x - mean
    sse0 = float(x @ x)
    if sse0 <= 0.0:
        raise ValidationError("series has zero variance")

    if p + q == 0:
        return _finish(x, np.empty(0), np.empty(0), n, mean, True, 0)

    phi0, psi0 = _hannan_rissanen(x, p, q)
    u0 = np.concatenate([_coeffs_to_uncons(phi0), _coeffs_to_uncons(-psi0)])
    result = minimize(
        _css_objective, u0, args=(x, p, q), jac=True, method="L-BFGS-B",
        options={"ftol": 1e-9, "maxiter": max_iter})
    phi = _uncons_to_coeffs(result.x[:p]) if p else np.empty(0)
    psi = -_uncons_to_coeffs(result.x[p:]) if q else np.empty(0)
    # A line search stalling at gradient-precision level still leaves a usable
    # optimum; only an exhausted iteration budget is treated as non-convergence.
    if not result.success and "ITERATIONS REACHED LIMIT" in str(result.message).upper():
        raise FitError(
            f"ARMA({p},{q}) did not converge: {result.message}",
            diagnostics={"ar_coeffs": phi.tolist(), "ma_coeffs": psi.tolist(),
                         "objective": float(result.fun), "n_iter": int(result.nit)})
    return _finish(x, phi, psi, n, mean, bool(result.success), int(result.nit))


def _finish(x, phi, psi, n, mean, converged, n_iter) -> ArmaModel:
    e = _innovations(x, phi, psi)
    sse = float(e @ e)
    variance = sse / n
    loglik = -0.5 * n * (math.log(2.0 * math.pi * variance) + 1.0)
    p, q = len(phi), len(psi)
    bic = -2.0 * loglik + (p + q + 1) * math.log(n)
    return ArmaModel(p=p, q=q, ar_coeffs=tuple(float(v) for v in phi),
                     ma_coeffs=tuple(float(v) for v in psi),
                     innovation_variance=variance, log_likelihood=loglik,
                     bic=bic, n=n, mean=mean, converged=converged, n_iter=n_iter)


@dataclass
class OrderSelection:
    """Outcome of a BIC scan over all orders with p + q <= max_total_order."""

    model: ArmaModel
    grid: list[ArmaModel] = field(default_factory=list)
    failures: list[tuple[int, int, str]] = field(default_factory=list)


def select_order(values, max_total_order: int, max_iter: int = 500
                 ) -> OrderSelection:
    """Fit every (p,q) with p+q <= max_total_order and keep the BIC minimum.

    Ties break toward the smaller total order, then the smaller q.  Orders
    that fail to fit are recorded and skipped; if everything fails a
    :class:`FitError` is raised.
    """
    check_in_range(max_total_order, "max_total_order", 0, None)
    grid: list[ArmaModel] = []
    failures: list[tuple[int, int, str]] = []
    for total in range(max_total_order + 1):
        for q in range(total + 1):
            p = total - q
            try:
                grid.append(fit_arma(values, p, q, max_iter=max_iter))
            except (FitError, ValidationError) as exc:
                failures.append((p, q, str(exc)))
    if not grid:
        raise FitError("every ARMA order failed to fit",
                       diagnostics={"failures": failures})
    best = min(grid, key=lambda m: (m.bic, m.p + m.q, m.q))
    return OrderSelection(model=best, grid=grid, failures=failures)


def residuals(values, model: ArmaModel) -> ResidualSeries:
    """One-step-ahead prediction errors; the first max(p,q) are dropped."""
    x = as_float_1d(values, "series") - model.mean
    burn = max(model.p, model.q)
    if len(x) <= burn:
        raise ValidationError("series shorter than the model burn-in")
    e = _innovations(x, np.asarray(model.ar_coeffs), np.asarray(model.ma_coeffs))
    return ResidualSeries(values=e[burn:], model=model)


def sample_acf(values, max_lag: int) -> AcfResult:
    """Biased sample autocorrelation for lags 0..max_lag.

    The band ``+-1.96/sqrt(n)`` is the 95% significance level for a single
    lag of an i.i.d. series.
    """
    x = as_float_1d(values, "series")
    n = len(x)
    if max_lag >= n / 2:
        raise ValidationError("max_lag must be below half the series length")
    x = x - x.mean()
    c0 = float(x @ x) / n
    if c0 == 0.0:
        raise ValidationError("series has zero variance")
    acf = np.empty(max_lag + 1)
    acf[0] = 1.0
    for lag in range(1, max_lag + 1):
        acf[lag] = (float(x[:-lag] @ x[lag:]) / n) / c0
    return AcfResult(values=acf, band=1.96 / math.sqrt(n), n=n)
