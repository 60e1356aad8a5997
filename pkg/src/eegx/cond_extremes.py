"""Conditional extremes modeling (Heffernan-Tawn) on Laplace margins.

Each channel is first mapped to standard Laplace scale through a
semiparametric probability transform: the empirical CDF below a high
threshold spliced with a fitted GPD tail above it. Given the
conditioning channel exceeds a high Laplace level y, a dependent
channel is modeled as

    Y_dep = alpha * y + y**beta * Z,      alpha in [-1, 1], beta < 1,

with Z treated as Normal(mu, s^2) for fitting purposes only (a pseudo
likelihood); the empirical residuals z_i = (y_dep_i - alpha*y_i) /
y_i**beta are kept and resampled for simulation, preserving their
cross-channel dependence by drawing the same time index for every
dependent channel.

Laplace margins make negative dependence representable: a perfectly
anti-correlated pair fits alpha = -1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import (
    DomainError,
    FitError,
    SizeError,
    UsageError,
    ValidationError,
)
from .evt_univariate import GpdFit, XI_ZERO_TOL, fit_gpd
from .signal_io import EegRecording

S_FLOOR = 1e-8  # lower bound on the residual spread in the pseudo-likelihood
BETA_MAX = 1.0 - 1e-6
BETA_MIN = -3.0
ALPHA_STARTS = (-0.9, -0.5, 0.0, 0.5, 0.9)
BETA_STARTS = (-0.5, 0.0, 0.5)


def laplace_quantile(p):
    """Quantile of the standard Laplace distribution.

    log(2p) for p < 1/2 and -log(2(1-p)) otherwise; p must lie in (0,1).
    """
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0.0) | (p >= 1.0)):
        raise DomainError("Laplace quantile needs probabilities in (0, 1)")
    out = np.where(p < 0.5, np.log(2.0 * p), -np.log(2.0 * (1.0 - p)))
    return float(out) if out.ndim == 0 else out


def laplace_cdf(y):
    """CDF of the standard Laplace distribution."""
    y = np.asarray(y, dtype=float)
    out = np.where(y < 0.0, 0.5 * np.exp(y), 1.0 - 0.5 * np.exp(-y))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MarginalTransform:
    """Semiparametric CDF of one channel: empirical body, GPD upper tail.

    ``zeta_u`` is chosen so the two branches meet exactly at the
    threshold: it equals one minus the interpolated empirical CDF there.
    """

    channel: str
    sorted_sample: np.ndarray
    u: float
    gpd: GpdFit
    zeta_u: float

    @property
    def n(self) -> int:
        return self.sorted_sample.size

    def __post_init__(self):
        xs = np.asarray(self.sorted_sample, dtype=float)
        if xs.ndim != 1 or xs.size < 2:
            raise ValidationError("marginal transform needs a 1-D sample, n >= 2")
        if np.any(np.diff(xs) < 0):
            raise ValidationError("sorted_sample must be nondecreasing")
        if not 0.0 < self.zeta_u < 1.0:
            raise ValidationError(f"zeta_u must lie in (0, 1), got {self.zeta_u}")
        object.__setattr__(self, "sorted_sample", xs)


def _ecdf_interp(xs: np.ndarray, x) -> np.ndarray:
    """Interpolated empirical CDF: x_(i) -> i/(n+1), linear in between."""
    n = xs.size
    p_at = np.arange(1, n + 1) / (n + 1.0)
    return np.interp(x, xs, p_at, left=p_at[0], right=p_at[-1])


def fit_marginal(
    x: np.ndarray,
    threshold_quantile: float = 0.95,
    channel: str = "",
    seed: int = 0,
) -> MarginalTransform:
    """Fit the semiparametric transform of one channel.

    The threshold is the empirical ``threshold_quantile`` (type-7) and
    the GPD is fitted to all excesses above it (no declustering: the
    transform must preserve the sample's probability calibration).
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.size < 20:
        raise SizeError(f"marginal transform needs >= 20 observations, got {x.size}")
    if not 0.8 <= threshold_quantile <= 0.999:
        raise UsageError(
            f"threshold quantile must lie in [0.8, 0.999], got {threshold_quantile}"
        )
    u = float(np.quantile(x, threshold_quantile))
    excesses = x[x > u] - u
    if excesses.size < 10:
        raise SizeError(
            f"only {excesses.size} excesses above the {threshold_quantile:g} "
            "quantile; need >= 10"
        )
    xs = np.sort(x)
    zeta = 1.0 - float(_ecdf_interp(xs, u))
    gpd = fit_gpd(excesses, seed=seed, threshold_u=u, zeta_u=zeta)
    return MarginalTransform(
        channel=channel, sorted_sample=xs, u=u, gpd=gpd, zeta_u=zeta
    )


def _probability(mt: MarginalTransform, x: np.ndarray) -> np.ndarray:
    """Semiparametric CDF values, clamped to [1/(2n), 1 - 1/(2n)]."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.array(_ecdf_interp(mt.sorted_sample, x), copy=True)
    above = x > mt.u
    if np.any(above):
        sigma, xi = mt.gpd.sigma, mt.gpd.xi
        w = (x[above] - mt.u) / sigma
        if abs(xi) < XI_ZERO_TOL:
            surv = np.exp(-w)
        else:
            arg = 1.0 + xi * w
            if xi < 0 and np.any(arg <= 0):
                warnings.warn(
                    f"values above the fitted upper endpoint for channel "
                    f"{mt.channel!r}; clamped",
                    stacklevel=3,
                )
                arg = np.maximum(arg, 0.0)
            surv = arg ** (-1.0 / xi)
        p[above] = 1.0 - mt.zeta_u * surv
    lo = 1.0 / (2.0 * mt.n)
    return np.clip(p, lo, 1.0 - lo)


def to_laplace(x, mt: MarginalTransform):
    """Map data-scale values to standard Laplace scale."""
    scalar = np.ndim(x) == 0
    out = laplace_quantile(_probability(mt, x))
    return float(out[0]) if scalar else out


def from_laplace(y, mt: MarginalTransform):
    """Inverse of :func:`to_laplace` (up to rank resolution in the body)."""
    scalar = np.ndim(y) == 0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    p = laplace_cdf(y)
    lo = 1.0 / (2.0 * mt.n)
    p = np.clip(p, lo, 1.0 - lo)
    out = np.empty_like(p)
    body = p <= 1.0 - mt.zeta_u
    if np.any(body):
        n = mt.n
        p_at = np.arange(1, n + 1) / (n + 1.0)
        out[body] = np.interp(p[body], p_at, mt.sorted_sample)
    tail = ~body
    if np.any(tail):
        sigma, xi = mt.gpd.sigma, mt.gpd.xi
        ratio = (1.0 - p[tail]) / mt.zeta_u
        if abs(xi) < XI_ZERO_TOL:
            out[tail] = mt.u - sigma * np.log(ratio)
        else:
            out[tail] = mt.u + sigma / xi * (ratio ** (-xi) - 1.0)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class HtFit:
    """Fitted conditional-extremes parameters for one ordered pair."""

    cond_channel: str
    dep_channel: str
    alpha: float
    beta: float
    mu: float
    s: float
    residuals_z: np.ndarray
    cond_threshold_laplace: float
    n_exceed: int
    nll: float
    exceed_indices: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not -1.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha must lie in [-1, 1], got {self.alpha}")
        if not BETA_MIN <= self.beta < 1.0:
            raise ValidationError(f"beta must lie in [{BETA_MIN}, 1), got {self.beta}")
        if not self.s > 0:
            raise ValidationError(f"s must be positive, got {self.s}")
        z = np.asarray(self.residuals_z, dtype=float)
        if z.size != self.n_exceed:
            raise ValidationError("residual count must equal n_exceed")
        object.__setattr__(self, "residuals_z", z)


def _profile_nll(alpha: float, beta: float, y: np.ndarray, y_dep: np.ndarray):
    """Pseudo-NLL with (mu, s) profiled out; returns (nll, mu, s)."""
    logy = np.log(y)
    w = np.exp(beta * logy)
    r = (y_dep - alpha * y) / w
    mu = r.mean()
    s = max(np.sqrt(np.mean((r - mu) ** 2)), S_FLOOR)
    n = y.size
    nll = n * np.log(s) + beta * logy.sum() + 0.5 * n * (1.0 + np.log(2.0 * np.pi))
    return nll, mu, s


def fit_ht(
    y_cond: np.ndarray,
    y_dep: np.ndarray,
    cond_quantile: float = 0.95,
    cond_channel: str = "cond",
    dep_channel: str = "dep",
) -> HtFit:
    """Fit the conditional model of ``y_dep`` given ``y_cond`` extreme.

    Both series must already be on Laplace scale. Pairs where the
    conditioning series exceeds its Laplace ``cond_quantile`` enter a
    Gaussian pseudo-likelihood in (alpha, beta, mu, s); (mu, s) are
    profiled out analytically and (alpha, beta) minimized by a bounded
    simplex from a fixed 5 x 3 start grid, ties broken toward smaller
    |beta|. Deterministic: no randomness is involved.
    """
    yc = np.asarray(y_cond, dtype=float).ravel()
    yd = np.asarray(y_dep, dtype=float).ravel()
    if yc.shape != yd.shape:
        raise ValidationError("conditioning and dependent series must align")
    if not 0.9 <= cond_quantile <= 0.999:
        raise UsageError(
            f"conditioning quantile must lie in [0.9, 0.999], got {cond_quantile}"
        )
    t_q = laplace_quantile(cond_quantile)
    keep = yc > t_q
    n_exc = int(np.count_nonzero(keep))
    if n_exc < 30:
        raise SizeError(
            f"only {n_exc} conditioning exceedances above the "
            f"{cond_quantile:g} Laplace quantile; need >= 30"
        )
    y = yc[keep]
    yd_exc = yd[keep]

    def objective(theta):
        nll, _, _ = _profile_nll(theta[0], theta[1], y, yd_exc)
        return nll

    candidates = []
    for a0 in ALPHA_STARTS:
        for b0 in BETA_STARTS:
            res = optimize.minimize(
                objective,
                x0=[a0, b0],
                method="Nelder-Mead",
                bounds=[(-1.0, 1.0), (BETA_MIN, BETA_MAX)],
                options={"xatol": 1e-7, "fatol": 1e-10, "maxiter": 2000},
            )
            if res.success and np.isfinite(res.fun):
                candidates.append(res)
    if not candidates:
        raise FitError(
            f"conditional-extremes fit failed for ({cond_channel}, {dep_channel}) "
            f"from all {len(ALPHA_STARTS) * len(BETA_STARTS)} starts"
        )
    # best nll; near-ties (within 1e-9) resolved toward smaller |beta|
    best_nll = min(r.fun for r in candidates)
    near = [r for r in candidates if r.fun <= best_nll + 1e-9]
    best = min(near, key=lambda r: abs(r.x[1]))

    alpha_hat = float(np.clip(best.x[0], -1.0, 1.0))
    beta_hat = float(np.clip(best.x[1], BETA_MIN, BETA_MAX))
    if beta_hat <= BETA_MIN + 1e-6:
        warnings.warn(
            f"beta estimate on the lower bound {BETA_MIN} for "
            f"({cond_channel}, {dep_channel})",
            stacklevel=2,
        )
    nll, mu_hat, s_hat = _profile_nll(alpha_hat, beta_hat, y, yd_exc)
    z = (yd_exc - alpha_hat * y) / y**beta_hat
    return HtFit(
        cond_channel=cond_channel,
        dep_channel=dep_channel,
        alpha=alpha_hat,
        beta=beta_hat,
        mu=float(mu_hat),
        s=float(s_hat),
        residuals_z=z,
        cond_threshold_laplace=float(t_q),
        n_exceed=n_exc,
        nll=float(nll),
        exceed_indices=np.flatnonzero(keep),
    )


def conditional_model(
    rec: EegRecording,
    cond_channel: str,
    cond_quantile: float = 0.95,
    marginal_quantile: float = 0.95,
    seed: int = 0,
) -> tuple[dict[str, HtFit], dict[str, MarginalTransform]]:
    """Fit marginal transforms and all pairwise conditional models.

    Returns one :class:`HtFit` per dependent channel (keyed by label)
    plus the per-channel transforms, all sharing the same conditioning
    exceedance set so residuals stay aligned across channels.
    """
    if cond_channel not in rec.channels:
        raise UsageError(
            f"conditioning channel {cond_channel!r} not in {list(rec.channels)}"
        )
    transforms: dict[str, MarginalTransform] = {}
    laplace: dict[str, np.ndarray] = {}
    for name in rec.channels:
        mt = fit_marginal(
            rec.channel(name), marginal_quantile, channel=name, seed=seed
        )
        transforms[name] = mt
        laplace[name] = to_laplace(rec.channel(name), mt)

    fits: dict[str, HtFit] = {}
    for name in rec.channels:
        if name == cond_channel:
            continue
        fits[name] = fit_ht(
            laplace[cond_channel],
            laplace[name],
            cond_quantile,
            cond_channel=cond_channel,
            dep_channel=name,
        )
    return fits, transforms


@dataclass(frozen=True)
class ConditionalSample:
    """Joint draws of dependent channels given an extreme conditioner."""

    cond_channel: str
    dep_channels: tuple[str, ...]
    cond_level_laplace: float
    cond_draws: np.ndarray
    draws: np.ndarray
    cond_back_transformed: np.ndarray | None = None
    back_transformed: np.ndarray | None = None

    def __post_init__(self):
        if self.draws.shape != (self.cond_draws.size, len(self.dep_channels)):
            raise ValidationError("draw matrix shape must be (n_sim, n_dep)")
        if np.any(self.cond_draws <= self.cond_level_laplace):
            raise ValidationError("every conditioning draw must exceed the level")


def simulate_conditional(
    fits: list[HtFit] | tuple[HtFit, ...],
    level_q: float,
    n_sim: int,
    seed: int = 0,
    cond_transform: MarginalTransform | None = None,
    dep_transforms: dict[str, MarginalTransform] | None = None,
) -> ConditionalSample:
    """Simulate dependent channels given the conditioner exceeds a level.

    Conditioning values are drawn from the Laplace tail (threshold plus
    a standard exponential). For each draw one residual time index is
    shared across all dependent channels, keeping their joint extremal
    structure. When transforms are supplied the draws are also mapped
    back to data scale.
    """
    fits = list(fits)
    if not fits:
        raise UsageError("need at least one fitted pair to simulate")
    cond = fits[0].cond_channel
    n_exc = fits[0].n_exceed
    for f in fits:
        if f.cond_channel != cond:
            raise UsageError("all fits must share the conditioning channel")
        if f.n_exceed != n_exc or f.residuals_z.size != n_exc:
            raise UsageError("all fits must share the conditioning exceedance set")
        if f.exceed_indices is not None and fits[0].exceed_indices is not None:
            if not np.array_equal(f.exceed_indices, fits[0].exceed_indices):
                raise UsageError("fits were made on different exceedance sets")
    if n_exc == 0:
        raise UsageError("empty residual set")
    if not 0.0 < level_q < 1.0:
        raise UsageError(f"level must lie in (0, 1), got {level_q}")
    t_level = laplace_quantile(level_q)
    if t_level < fits[0].cond_threshold_laplace - 1e-12:
        raise UsageError(
            f"simulation level {level_q:g} lies below the fitting threshold"
        )
    if n_sim < 1:
        raise UsageError(f"n_sim must be >= 1, got {n_sim}")

    rng = np.random.default_rng(seed)
    y = t_level + rng.standard_exponential(n_sim)
    rows = rng.integers(0, n_exc, size=n_sim)
    z = np.column_stack([f.residuals_z[rows] for f in fits])
    alphas = np.array([f.alpha for f in fits])
    betas = np.array([f.beta for f in fits])
    draws = alphas[None, :] * y[:, None] + y[:, None] ** betas[None, :] * z

    back = None
    cond_back = None
    if dep_transforms is not None:
        cols = []
        for k, f in enumerate(fits):
            if f.dep_channel not in dep_transforms:
                raise UsageError(f"missing marginal transform for {f.dep_channel!r}")
            cols.append(from_laplace(draws[:, k], dep_transforms[f.dep_channel]))
        back = np.column_stack(cols)
    if cond_transform is not None:
        cond_back = from_laplace(y, cond_transform)

    return ConditionalSample(
        cond_channel=cond,
        dep_channels=tuple(f.dep_channel for f in fits),
        cond_level_laplace=float(t_level),
        cond_draws=y,
        draws=draws,
        cond_back_transformed=cond_back,
        back_transformed=back,
    )


def conditional_summary(sample: ConditionalSample) -> list[dict]:
    """Per-channel location summaries of a conditional simulation.

    One row per (dependent channel, scale) with mean, median, and the
    5%/95% quantiles; the data-scale rows appear only when the sample
    was back-transformed.
    """
    if sample.cond_draws.size == 0:
        raise UsageError("cannot summarize an empty sample")
    rows: list[dict] = []

    def _describe(name, scale, values):
        rows.append(
            {
                "channel": name,
                "scale": scale,
                "mean": float(np.mean(values)),
                "median": float(np.median(values)),
                "q05": float(np.quantile(values, 0.05)),
                "q95": float(np.quantile(values, 0.95)),
            }
        )

    for k, name in enumerate(sample.dep_channels):
        _describe(name, "laplace", sample.draws[:, k])
    if sample.back_transformed is not None:
        for k, name in enumerate(sample.dep_channels):
            _describe(name, "data", sample.back_transformed[:, k])
    return rows
