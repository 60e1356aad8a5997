"""Peaks-over-threshold tail modeling for a single series.

The workflow is the classical one: pick a threshold (diagnosed by mean
residual life and parameter-stability plots), reduce serially dependent
exceedances to cluster peaks by the runs method, then fit a generalized
Pareto distribution to the peak excesses by maximum likelihood.

The GPD negative log-likelihood for excesses y_1..y_n is

    n*log(sigma) + (1 + 1/xi) * sum(log(1 + xi*y/sigma))        (xi != 0)
    n*log(sigma) + sum(y)/sigma                                  (xi == 0)

maximized over sigma > 0 and xi > -0.5 (the usual regularity range) on
the reparameterized scale tau = log(sigma). The exponential limit is
used whenever |xi| < 1e-6.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import DomainError, FitError, SizeError, UsageError, ValidationError

XI_ZERO_TOL = 1e-6  # |xi| below this: use the exponential limit
XI_LOWER = -0.5  # MLE regularity bound on the shape
_HESS_STEP = 1e-4  # central-difference step on (tau, xi)


@dataclass(frozen=True)
class GpdFit:
    """A fitted generalized Pareto tail.

    ``zeta_u`` is the rate at which the underlying series exceeds the
    threshold (used by return levels); ``n_exceed`` the number of
    excesses entering the likelihood; ``nll`` its minimized value.
    """

    threshold_u: float
    sigma: float
    xi: float
    zeta_u: float
    n_exceed: int
    se_sigma: float
    se_xi: float
    nll: float
    cov_sigma_xi: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if not 0 < self.zeta_u <= 1:
            raise ValidationError(f"zeta_u must lie in (0, 1], got {self.zeta_u}")


@dataclass(frozen=True)
class ThresholdDiagnostics:
    """Threshold-choice curves; entries are NaN where < 10 exceedances
    (or where a fit failed), mirrored by the ``flagged`` mask."""

    grid: np.ndarray
    n_exceed: np.ndarray
    flagged: np.ndarray
    mrl: np.ndarray | None = None
    mrl_lo: np.ndarray | None = None
    mrl_hi: np.ndarray | None = None
    xi: np.ndarray | None = None
    xi_se: np.ndarray | None = None
    sigma_star: np.ndarray | None = None
    sigma_star_se: np.ndarray | None = None


@dataclass(frozen=True)
class ClusterSet:
    """Cluster peaks from runs declustering."""

    run_length_r: int
    threshold_u: float
    peak_indices: np.ndarray
    peak_values: np.ndarray
    n_clusters: int

    @property
    def cluster_peaks(self) -> list[tuple[int, float]]:
        return [(int(i), float(v)) for i, v in zip(self.peak_indices, self.peak_values)]


def gpd_nll(sigma: float, xi: float, excesses: np.ndarray) -> float:
    """Negative log-likelihood of GPD excesses; +inf outside the support."""
    n = excesses.size
    if sigma <= 0:
        return np.inf
    if abs(xi) < XI_ZERO_TOL:
        return n * np.log(sigma) + excesses.sum() / sigma
    z = xi * excesses / sigma
    if np.any(z <= -1.0):
        return np.inf
    return n * np.log(sigma) + (1.0 + 1.0 / xi) * np.log1p(z).sum()


def gpd_nll_exponential(sigma: float, excesses: np.ndarray) -> float:
    """Exponential-limit (xi = 0) negative log-likelihood."""
    if sigma <= 0:
        return np.inf
    return excesses.size * np.log(sigma) + excesses.sum() / sigma


def _pwm_start(y: np.ndarray) -> tuple[float, float]:
    """Probability-weighted-moments starting values (Hosking-Wallis)."""
    ys = np.sort(y)
    n = ys.size
    a0 = ys.mean()
    a1 = float(ys @ (n - np.arange(1, n + 1))) / (n * (n - 1.0))
    denom = a0 - 2.0 * a1
    if denom <= 0:
        sigma0, xi0 = a0, 0.4
    else:
        xi0 = 2.0 - a0 / denom
        sigma0 = 2.0 * a0 * a1 / denom
    xi0 = float(np.clip(xi0, -0.45, 2.0))
    sigma0 = float(max(sigma0, 1e-8 * max(a0, 1.0)))
    # keep the start inside the support when xi0 < 0
    if xi0 < 0 and sigma0 <= -xi0 * ys[-1]:
        sigma0 = 1.05 * (-xi0 * ys[-1])
    return sigma0, xi0


def _hessian_cov(tau_hat, xi_hat, excesses):
    """Covariance of (sigma, xi) from a finite-difference Hessian on (tau, xi)."""

    def f(tau, xi):
        return gpd_nll(np.exp(tau), xi, excesses)

    h = _HESS_STEP
    f0 = f(tau_hat, xi_hat)
    ftt = (f(tau_hat + h, xi_hat) - 2 * f0 + f(tau_hat - h, xi_hat)) / h**2
    fxx = (f(tau_hat, xi_hat + h) - 2 * f0 + f(tau_hat, xi_hat - h)) / h**2
    ftx = (
        f(tau_hat + h, xi_hat + h)
        - f(tau_hat + h, xi_hat - h)
        - f(tau_hat - h, xi_hat + h)
        + f(tau_hat - h, xi_hat - h)
    ) / (4 * h**2)
    hess = np.array([[ftt, ftx], [ftx, fxx]])
    if not np.all(np.isfinite(hess)):
        return None
    try:
        cov_tau_xi = np.linalg.inv(hess)
    except np.linalg.LinAlgError:
        return None
    if cov_tau_xi[0, 0] <= 0 or cov_tau_xi[1, 1] <= 0:
        return None
    # delta method: sigma = exp(tau)
    sigma = np.exp(tau_hat)
    jac = np.array([[sigma, 0.0], [0.0, 1.0]])
    return jac @ cov_tau_xi @ jac.T


def fit_gpd(
    excesses: np.ndarray,
    seed: int = 0,
    threshold_u: float = 0.0,
    zeta_u: float = 1.0,
    n_restarts: int = 3,
) -> GpdFit:
    """Fit a GPD to strictly positive excesses by maximum likelihood.

    A derivative-free simplex runs on (tau = log sigma, xi), started at
    the probability-weighted-moments estimate plus ``n_restarts``
    seed-jittered restarts; the best converged run wins. Standard errors
    come from the numerically inverted Hessian.

    Raises
    ------
    SizeError
        Fewer than 10 excesses.
    UsageError
        Excesses that are not strictly positive.
    FitError
        No restart converged.
    """
    y = np.asarray(excesses, dtype=float)
    if y.ndim != 1:
        raise ValidationError(f"excesses must be 1-D, got shape {y.shape}")
    if y.size < 10:
        raise SizeError(f"need at least 10 excesses to fit a GPD, got {y.size}")
    if np.any(y <= 0) or not np.isfinite(y).all():
        raise UsageError("excesses must be strictly positive and finite")

    sigma0, xi0 = _pwm_start(y)
    rng = np.random.default_rng(seed)
    starts = [(np.log(sigma0), xi0)]
    for _ in range(n_restarts):
        starts.append(
            (
                np.log(sigma0) + rng.normal(0.0, 0.3),
                float(np.clip(xi0 + rng.normal(0.0, 0.2), XI_LOWER + 0.01, 3.0)),
            )
        )

    def objective(theta):
        return gpd_nll(np.exp(theta[0]), theta[1], y)

    best = None
    for tau_s, xi_s in starts:
        # nudge the start into the support if the jitter left it
        if xi_s < 0 and np.exp(tau_s) <= -xi_s * y.max():
            tau_s = np.log(1.05 * (-xi_s * y.max()))
        res = optimize.minimize(
            objective,
            x0=[tau_s, xi_s],
            method="Nelder-Mead",
            bounds=[(None, None), (XI_LOWER + 1e-9, None)],
            options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 2000},
        )
        if res.success and np.isfinite(res.fun):
            if best is None or res.fun < best.fun:
                best = res
    if best is None:
        raise FitError(
            f"GPD fit did not converge after {1 + n_restarts} starts (n={y.size})"
        )

    tau_hat, xi_hat = best.x
    sigma_hat = float(np.exp(tau_hat))
    xi_hat = float(xi_hat)
    if abs(xi_hat) < XI_ZERO_TOL:
        xi_hat = 0.0
    if xi_hat <= XI_LOWER + 1e-6:
        warnings.warn(
            f"GPD shape estimate on the boundary xi = {XI_LOWER}", stacklevel=2
        )

    cov = _hessian_cov(tau_hat, xi_hat, y)
    if cov is None:
        warnings.warn("GPD Hessian not invertible; standard errors unavailable", stacklevel=2)
        se_sigma = se_xi = float("nan")
    else:
        se_sigma = float(np.sqrt(cov[0, 0]))
        se_xi = float(np.sqrt(cov[1, 1]))

    return GpdFit(
        threshold_u=float(threshold_u),
        sigma=sigma_hat,
        xi=xi_hat,
        zeta_u=float(zeta_u),
        n_exceed=int(y.size),
        se_sigma=se_sigma,
        se_xi=se_xi,
        nll=float(best.fun),
        cov_sigma_xi=cov,
    )


def mean_residual_life(data: np.ndarray, grid: np.ndarray) -> ThresholdDiagnostics:
    """Mean excess over each grid threshold with a 95% normal band.

    Points backed by fewer than 10 exceedances are flagged and reported
    as NaN.
    """
    x = np.asarray(data, dtype=float).ravel()
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise UsageError("threshold grid must be nonempty")
    grid = np.sort(grid)

    m = np.full(grid.size, np.nan)
    lo = np.full(grid.size, np.nan)
    hi = np.full(grid.size, np.nan)
    counts = np.zeros(grid.size, dtype=int)
    flagged = np.zeros(grid.size, dtype=bool)
    for j, u in enumerate(grid):
        exc = x[x > u] - u
        counts[j] = exc.size
        if exc.size < 10:
            flagged[j] = True
            continue
        mean = exc.mean()
        half = 1.96 * exc.std(ddof=1) / np.sqrt(exc.size)
        m[j], lo[j], hi[j] = mean, mean - half, mean + half
    return ThresholdDiagnostics(
        grid=grid, n_exceed=counts, flagged=flagged, mrl=m, mrl_lo=lo, mrl_hi=hi
    )


def parameter_stability(
    data: np.ndarray, grid: np.ndarray, seed: int = 0
) -> ThresholdDiagnostics:
    """Shape and modified-scale estimates across a threshold grid.

    The modified scale ``sigma* = sigma_hat - xi_hat * u`` is constant in
    u when the GPD holds above every grid threshold; its standard error
    follows by the delta method from the fit covariance. Failed or
    under-populated fits are flagged, not fatal.
    """
    x = np.asarray(data, dtype=float).ravel()
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise UsageError("threshold grid must be nonempty")
    grid = np.sort(grid)

    xi = np.full(grid.size, np.nan)
    xi_se = np.full(grid.size, np.nan)
    s_star = np.full(grid.size, np.nan)
    s_star_se = np.full(grid.size, np.nan)
    counts = np.zeros(grid.size, dtype=int)
    flagged = np.zeros(grid.size, dtype=bool)
    for j, u in enumerate(grid):
        exc = x[x > u] - u
        counts[j] = exc.size
        if exc.size < 10:
            flagged[j] = True
            continue
        try:
            fit = fit_gpd(exc, seed=seed, threshold_u=u)
        except (FitError, SizeError, UsageError):
            flagged[j] = True
            continue
        xi[j] = fit.xi
        xi_se[j] = fit.se_xi
        s_star[j] = fit.sigma - fit.xi * u
        if fit.cov_sigma_xi is not None:
            c = fit.cov_sigma_xi
            var = c[0, 0] + u**2 * c[1, 1] - 2 * u * c[0, 1]
            s_star_se[j] = np.sqrt(var) if var > 0 else np.nan
    return ThresholdDiagnostics(
        grid=grid,
        n_exceed=counts,
        flagged=flagged,
        xi=xi,
        xi_se=xi_se,
        sigma_star=s_star,
        sigma_star_se=s_star_se,
    )


def decluster_runs(
    data: np.ndarray, threshold_u: float, run_length_r: int
) -> ClusterSet:
    """Reduce exceedances to one peak per cluster by the runs method.

    Consecutive exceedances belong to the same cluster while their index
    gap is at most ``run_length_r``; a gap of more than ``run_length_r``
    (at least that many sub-threshold samples in between) starts a new
    cluster. Each cluster contributes its maximum, earliest index first
    on ties.
    """
    if int(run_length_r) < 1:
        raise UsageError(f"run length must be >= 1, got {run_length_r}")
    r = int(run_length_r)
    x = np.asarray(data, dtype=float).ravel()
    exc_idx = np.flatnonzero(x > threshold_u)
    if exc_idx.size == 0:
        return ClusterSet(
            run_length_r=r,
            threshold_u=float(threshold_u),
            peak_indices=np.empty(0, dtype=int),
            peak_values=np.empty(0, dtype=float),
            n_clusters=0,
        )
    breaks = np.flatnonzero(np.diff(exc_idx) > r)
    groups = np.split(exc_idx, breaks + 1)
    peaks_i = np.empty(len(groups), dtype=int)
    for g, idx in enumerate(groups):
        peaks_i[g] = idx[np.argmax(x[idx])]
    return ClusterSet(
        run_length_r=r,
        threshold_u=float(threshold_u),
        peak_indices=peaks_i,
        peak_values=x[peaks_i],
        n_clusters=len(groups),
    )


def return_level(fit: GpdFit, m: float, obs_per_unit: float = 1.0) -> float:
    """Level exceeded on average once per ``m`` units of observation.

    With n = m * obs_per_unit observations and exceedance rate zeta_u,

        x_m = u + sigma/xi * ((n * zeta_u)^xi - 1)         (xi != 0)
        x_m = u + sigma * log(n * zeta_u)                  (xi == 0)

    defined only when ``n * zeta_u > 1``.
    """
    n_obs = float(m) * float(obs_per_unit)
    mz = n_obs * fit.zeta_u
    if mz <= 1.0:
        raise DomainError(
            f"return level undefined: m * zeta_u = {mz:g} must exceed 1"
        )
    if abs(fit.xi) < XI_ZERO_TOL:
        return fit.threshold_u + fit.sigma * np.log(mz)
    return fit.threshold_u + fit.sigma / fit.xi * (mz**fit.xi - 1.0)


def fit_channel_tail(
    series: np.ndarray,
    threshold_quantile: float = 0.95,
    run_length_r: int = 1,
    seed: int = 0,
) -> GpdFit:
    """Threshold at an empirical quantile, decluster, and fit the tail.

    The threshold is the type-7 empirical ``threshold_quantile`` of the
    series (allowed range [0.8, 0.999]); cluster-peak excesses feed the
    GPD fit and ``zeta_u`` is the cluster rate n_clusters / T.

    ``run_length_r`` should reflect the series' dependence range, about
    half a second of samples (round(fs/2)) for EEG; the default of 1
    only merges directly adjacent exceedances, appropriate for roughly
    independent data.
    """
    x = np.asarray(series, dtype=float).ravel()
    if not 0.8 <= threshold_quantile <= 0.999:
        raise UsageError(
            f"threshold quantile must lie in [0.8, 0.999], got {threshold_quantile}"
        )
    u = float(np.quantile(x, threshold_quantile))
    clusters = decluster_runs(x, u, run_length_r)
    if clusters.n_clusters == 0:
        raise FitError(
            f"no exceedances above the {threshold_quantile:g} quantile (u={u:g})"
        )
    excesses = clusters.peak_values - u
    fit = fit_gpd(
        excesses,
        seed=seed,
        threshold_u=u,
        zeta_u=clusters.n_clusters / x.size,
    )
    return fit
