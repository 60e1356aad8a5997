"""Empirical pairwise tail-dependence diagnostics chi(u) and chibar(u).

Both statistics are computed on rank (uniform) scores, so they are
exactly invariant under strictly increasing transforms of either
margin. With joint exceedance probability p_joint = P(Sx > u, Sy > u)
and pooled marginal exceedance probability p_marg,

    chi(u)    = p_joint / p_marg                  clamped to [0, 1]
    chibar(u) = 2 * log(p_marg) / log(p_joint) - 1  clamped to [-1, 1]

p_marg is the empirical average of the two margins' exceedance
fractions; on rank scores it equals 1 - u up to rank granularity, and
using the pooled empirical value makes comonotone inputs yield exactly
chi = chibar = 1 at every level. Confidence intervals come from a
stationary block bootstrap (geometric block lengths) that respects the
serial dependence of EEG samples.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._parallel import parallel_map
from .errors import SizeError, SparseTailError, UsageError, ValidationError
from .signal_io import EegRecording

MIN_JOINT_EXCEEDANCES = 5
DEFAULT_U_GRID = (0.90, 0.95, 0.98)
DEFAULT_N_BOOT = 200


@dataclass(frozen=True)
class ChiEstimate:
    """chi/chibar for one channel pair at one quantile level."""

    pair: tuple[str, str]
    u: float
    chi: float
    chibar: float
    ci_chi: tuple[float, float]
    ci_chibar: tuple[float, float]
    n_eff: int
    sparse: bool = False


@dataclass(frozen=True)
class ChiMatrix:
    """All unordered-pair estimates at one level, plus dense views.

    ``chi_values``/``chibar_values`` are symmetric (C x C) arrays with 1
    on the diagonal and NaN for sparse pairs.
    """

    channels: tuple[str, ...]
    u: float
    estimates: tuple[ChiEstimate, ...]
    chi_values: np.ndarray
    chibar_values: np.ndarray


def uniform_scores(x: np.ndarray) -> np.ndarray:
    """Rank transform to (0, 1): rank / (n + 1), average ranks on ties."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValidationError(f"expected a 1-D series, got shape {x.shape}")
    if x.size < 2:
        raise SizeError(f"need at least 2 observations, got {x.size}")
    return stats.rankdata(x, method="average") / (x.size + 1.0)


def _chi_from_counts(n_joint: float, n_x: float, n_y: float, n: int):
    """(chi, chibar) from exceedance counts; caller ensures n_joint >= 1."""
    p_joint = n_joint / n
    p_marg = (n_x + n_y) / (2.0 * n)
    chi = min(1.0, max(0.0, p_joint / p_marg))
    chibar = 2.0 * np.log(p_marg) / np.log(p_joint) - 1.0
    chibar = min(1.0, max(-1.0, chibar))
    return chi, chibar


def chi_u(
    scores_x: np.ndarray, scores_y: np.ndarray, u: float
) -> tuple[float, float]:
    """Empirical (chi, chibar) of a paired score series at level ``u``.

    Raises :class:`SparseTailError` when fewer than 5 joint exceedances
    are available; pick a lower ``u`` in that case.
    """
    sx = np.asarray(scores_x, dtype=float)
    sy = np.asarray(scores_y, dtype=float)
    if sx.shape != sy.shape or sx.ndim != 1:
        raise ValidationError("score series must be 1-D and of equal length")
    if not 0.0 < u < 1.0:
        raise UsageError(f"quantile level must lie in (0, 1), got {u}")
    bx = sx > u
    by = sy > u
    n_joint = int(np.count_nonzero(bx & by))
    if n_joint < MIN_JOINT_EXCEEDANCES:
        raise SparseTailError(
            f"only {n_joint} joint exceedances at u={u:g} "
            f"(need >= {MIN_JOINT_EXCEEDANCES}); lower u"
        )
    return _chi_from_counts(
        n_joint, np.count_nonzero(bx), np.count_nonzero(by), sx.size
    )


def stationary_bootstrap_indices(
    n: int, mean_block: float, rng: np.random.Generator
) -> np.ndarray:
    """One stationary-bootstrap resample of 0..n-1 (Politis-Romano).

    Blocks have geometric length with the given mean and wrap around the
    end of the series.
    """
    if mean_block < 1:
        raise UsageError(f"mean block length must be >= 1, got {mean_block}")
    p = 1.0 / float(mean_block)
    restart = rng.random(n) < p
    restart[0] = True
    starts = rng.integers(0, n, size=n)
    pos = np.arange(n)
    last_restart = np.maximum.accumulate(np.where(restart, pos, -1))
    offset = pos - last_restart
    return (starts[last_restart] + offset) % n


def _pair_matrices(scores: np.ndarray, u: float):
    """Joint/marginal exceedance counts for all channel pairs at once."""
    b = (scores > u).astype(np.float64)
    joint = b.T @ b
    marg = b.sum(axis=0)
    return joint, marg


def _chi_arrays(joint: np.ndarray, marg: np.ndarray, n: int):
    """Dense chi/chibar matrices; NaN where the joint count is too small."""
    pooled = 0.5 * (marg[:, None] + marg[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        chi = np.clip((joint / n) / (pooled / n), 0.0, 1.0)
        chibar = np.clip(2.0 * np.log(pooled / n) / np.log(joint / n) - 1.0, -1.0, 1.0)
    bad = joint < MIN_JOINT_EXCEEDANCES
    chi[bad] = np.nan
    chibar[bad] = np.nan
    np.fill_diagonal(chi, 1.0)
    np.fill_diagonal(chibar, 1.0)
    return chi, chibar


def chi_matrix(
    data: EegRecording | np.ndarray,
    u: float,
    n_boot: int = DEFAULT_N_BOOT,
    seed: int = 0,
    mean_block_len: float | None = None,
    channels: tuple[str, ...] | None = None,
) -> ChiMatrix:
    """Pairwise chi/chibar across all channels with bootstrap intervals.

    Parameters
    ----------
    data : EegRecording or ndarray (T x C)
    u : float
        Quantile level in (0, 1).
    n_boot : int
        Stationary-bootstrap replicates for the 95% intervals; 0 skips
        the bootstrap (intervals become NaN).
    seed : int
    mean_block_len : float, optional
        Mean bootstrap block length in samples. Defaults to the
        recording's sampling rate (one second), or 1 for a bare matrix.
    channels : tuple of str, optional
        Labels for a bare matrix; defaults to ch0, ch1, ...

    Sparse pairs (under 5 joint exceedances) are flagged, not fatal.
    """
    if isinstance(data, EegRecording):
        matrix = data.data
        labels = data.channels
        if mean_block_len is None:
            mean_block_len = data.fs
    else:
        matrix = np.asarray(data, dtype=float)
        if matrix.ndim != 2:
            raise ValidationError(f"expected (T x C) data, got shape {matrix.shape}")
        labels = channels or tuple(f"ch{i}" for i in range(matrix.shape[1]))
        if mean_block_len is None:
            mean_block_len = 1.0
    if len(labels) != matrix.shape[1]:
        raise ValidationError("channel label count must match data columns")
    if matrix.shape[1] < 2:
        raise ValidationError("need at least 2 channels for pairwise dependence")
    if not 0.0 < u < 1.0:
        raise UsageError(f"quantile level must lie in (0, 1), got {u}")

    n, c = matrix.shape
    scores = stats.rankdata(matrix, method="average", axis=0) / (n + 1.0)
    joint, marg = _pair_matrices(scores, u)
    chi, chibar = _chi_arrays(joint, marg, n)

    if n_boot > 0:
        root = np.random.SeedSequence(seed)
        rngs = [np.random.default_rng(s) for s in root.spawn(n_boot)]

        def _replicate(rng):
            idx = stationary_bootstrap_indices(n, mean_block_len, rng)
            s_b = stats.rankdata(matrix[idx], method="average", axis=0) / (n + 1.0)
            j_b, m_b = _pair_matrices(s_b, u)
            return _chi_arrays(j_b, m_b, n)

        reps = parallel_map(_replicate, rngs)
        chi_b = np.stack([r[0] for r in reps])
        chibar_b = np.stack([r[1] for r in reps])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)  # all-NaN slices
            chi_lo = np.nanpercentile(chi_b, 2.5, axis=0)
            chi_hi = np.nanpercentile(chi_b, 97.5, axis=0)
            cb_lo = np.nanpercentile(chibar_b, 2.5, axis=0)
            cb_hi = np.nanpercentile(chibar_b, 97.5, axis=0)
    else:
        chi_lo = chi_hi = cb_lo = cb_hi = np.full((c, c), np.nan)

    estimates = []
    for i in range(c):
        for j in range(i + 1, c):
            sparse = bool(joint[i, j] < MIN_JOINT_EXCEEDANCES)
            estimates.append(
                ChiEstimate(
                    pair=(labels[i], labels[j]),
                    u=u,
                    chi=float(chi[i, j]),
                    chibar=float(chibar[i, j]),
                    ci_chi=(float(chi_lo[i, j]), float(chi_hi[i, j])),
                    ci_chibar=(float(cb_lo[i, j]), float(cb_hi[i, j])),
                    n_eff=int(joint[i, j]),
                    sparse=sparse,
                )
            )
    return ChiMatrix(
        channels=tuple(labels),
        u=u,
        estimates=tuple(estimates),
        chi_values=chi,
        chibar_values=chibar,
    )
