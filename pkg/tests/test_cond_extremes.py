import numpy as np
import pytest

from eegx import (
    DomainError,
    EegRecording,
    SizeError,
    UsageError,
    conditional_model,
    conditional_summary,
    fit_ht,
    fit_marginal,
    from_laplace,
    gen_gaussian_copula_pair,
    gen_independent_pair,
    laplace_cdf,
    laplace_quantile,
    simulate_conditional,
    to_laplace,
    uniform_scores,
)


def laplace_margins(u):
    return laplace_quantile(uniform_scores(u))


class TestLaplace:
    def test_quantiles(self):
        assert laplace_quantile(0.5) == 0.0
        assert laplace_quantile(0.25) == pytest.approx(np.log(0.5), abs=1e-12)
        assert laplace_quantile(0.975) == pytest.approx(-np.log(0.05), abs=1e-12)

    def test_cdf_inverts_quantile(self):
        p = np.linspace(0.01, 0.99, 37)
        assert np.allclose(laplace_cdf(laplace_quantile(p)), p, atol=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            laplace_quantile(0.0)
        with pytest.raises(DomainError):
            laplace_quantile(np.array([0.5, 1.0]))


class TestMarginalTransform:
    def setup_method(self):
        rng = np.random.default_rng(21)
        self.x = rng.standard_normal(5_000) * 2.0 + 1.0
        self.mt = fit_marginal(self.x, 0.95, channel="A")

    def test_median_maps_near_zero(self):
        med = float(np.median(self.x))
        assert abs(to_laplace(med, self.mt)) < 0.01

    def test_monotone(self):
        xs = np.sort(np.random.default_rng(22).choice(self.x, 500, replace=False))
        ys = to_laplace(xs, self.mt)
        assert np.all(np.diff(ys) >= 0)

    def test_splice_continuity(self):
        # CDF approaching u from below matches the GPD branch at u
        eps = 1e-9 * max(1.0, abs(self.mt.u))
        below = to_laplace(self.mt.u - eps, self.mt)
        at = to_laplace(self.mt.u, self.mt)
        above = to_laplace(self.mt.u + eps, self.mt)
        p_below, p_at, p_above = laplace_cdf(np.array([below, at, above]))
        assert abs(p_at - (1.0 - self.mt.zeta_u)) <= 1e-9
        assert p_below <= p_at <= p_above
        assert p_above - p_below <= 1e-6

    def test_roundtrip_gpd_branch(self):
        tail = self.x[self.x > np.quantile(self.x, 0.97)]
        back = from_laplace(to_laplace(tail, self.mt), self.mt)
        assert np.allclose(back, tail, rtol=1e-6)

    def test_roundtrip_body_within_rank_resolution(self):
        body = self.x[self.x <= self.mt.u]
        back = from_laplace(to_laplace(body, self.mt), self.mt)
        # worst case one rank step
        gap = np.abs(np.argsort(np.argsort(back)) - np.argsort(np.argsort(body)))
        assert gap.max() <= 1
        assert np.allclose(back, body, atol=np.ptp(body) * 0.01)

    def test_probability_clamp(self):
        huge = to_laplace(self.x.max() * 100, self.mt)
        assert laplace_cdf(huge) <= 1.0 - 1.0 / (2 * self.mt.n) + 1e-12

    def test_quantile_range_enforced(self):
        with pytest.raises(UsageError):
            fit_marginal(self.x, 0.5)

    def test_too_small(self):
        with pytest.raises(SizeError):
            fit_marginal(np.arange(10.0), 0.95)


class TestFitHt:
    def test_comonotone(self):
        x = np.random.default_rng(31).standard_normal(50_000)
        y = laplace_quantile(uniform_scores(x))
        fit = fit_ht(y, y, 0.95)
        assert fit.alpha >= 0.99
        # residual spread collapses for perfect dependence
        assert fit.s * np.mean(np.abs(fit.residuals_z)) < 1e-6

    def test_antithetic(self):
        x = np.random.default_rng(32).standard_normal(50_000)
        y = laplace_quantile(uniform_scores(x))
        fit = fit_ht(y, -y, 0.95)
        assert fit.alpha == pytest.approx(-1.0, abs=0.02)

    def test_independence(self):
        a, b = gen_independent_pair(50_000, seed=1)
        fit = fit_ht(laplace_margins(a), laplace_margins(b), 0.95)
        assert abs(fit.alpha) <= 0.1
        # residuals are approximately standard Laplace
        z = fit.residuals_z
        probs = np.arange(0.05, 0.951, 0.05)
        gap = np.abs(np.quantile(z, probs) - laplace_quantile(probs)).max()
        assert gap < 0.15

    def test_gaussian_copula_limits(self):
        u1, u2 = gen_gaussian_copula_pair(100_000, 0.6, seed=0)
        fit = fit_ht(laplace_margins(u1), laplace_margins(u2), 0.99)
        assert fit.alpha == pytest.approx(0.36, abs=0.12)
        assert fit.beta == pytest.approx(0.5, abs=0.2)

    def test_pseudo_likelihood_optimality(self):
        u1, u2 = gen_gaussian_copula_pair(30_000, 0.5, seed=2)
        yc, yd = laplace_margins(u1), laplace_margins(u2)
        fit = fit_ht(yc, yd, 0.95)
        keep = yc > fit.cond_threshold_laplace
        y, yde = yc[keep], yd[keep]

        def full_nll(alpha, beta, mu, s):
            w = y**beta
            n = y.size
            return (
                n * np.log(s)
                + beta * np.log(y).sum()
                + 0.5 * n * np.log(2 * np.pi)
                + np.sum((yde - alpha * y - mu * w) ** 2 / (2 * s**2 * w**2))
            )

        base = full_nll(fit.alpha, fit.beta, fit.mu, fit.s)
        for da in (-0.02, 0.0, 0.02):
            for db in (-0.02, 0.0, 0.02):
                for dm in (-0.02, 0.0, 0.02):
                    for fs_ in (1 / 1.02, 1.0, 1.02):
                        alpha = np.clip(fit.alpha + da, -1, 1)
                        beta = min(fit.beta + db, 1 - 1e-6)
                        nll = full_nll(alpha, beta, fit.mu + dm, fit.s * fs_)
                        assert base <= nll + 1e-7

    def test_residual_uncorrelated_with_conditioner(self):
        u1, u2 = gen_gaussian_copula_pair(100_000, 0.6, seed=3)
        yc = laplace_margins(u1)
        fit = fit_ht(yc, laplace_margins(u2), 0.95)
        y = yc[yc > fit.cond_threshold_laplace]
        corr = np.corrcoef(fit.residuals_z, y)[0, 1]
        assert abs(corr) < 0.1

    def test_self_consistency(self):
        # refit on data simulated from a fitted model recovers (alpha, beta)
        u1, u2 = gen_gaussian_copula_pair(100_000, 0.6, seed=4)
        fit = fit_ht(laplace_margins(u1), laplace_margins(u2), 0.99)
        rng = np.random.default_rng(5)
        n = 100_000
        y = fit.cond_threshold_laplace + rng.standard_exponential(n)
        z = rng.choice(fit.residuals_z, size=n, replace=True)
        y_dep = fit.alpha * y + y**fit.beta * z
        refit = fit_ht(y, y_dep, 0.99)
        assert refit.alpha == pytest.approx(fit.alpha, abs=0.1)
        assert refit.beta == pytest.approx(fit.beta, abs=0.2)

    def test_needs_30_exceedances(self):
        rng = np.random.default_rng(6)
        x = laplace_quantile(uniform_scores(rng.standard_normal(400)))
        with pytest.raises(SizeError):
            fit_ht(x, x, 0.95)

    def test_quantile_range(self):
        rng = np.random.default_rng(7)
        x = laplace_quantile(uniform_scores(rng.standard_normal(1_000)))
        with pytest.raises(UsageError):
            fit_ht(x, x, 0.5)

    def test_deterministic(self):
        u1, u2 = gen_gaussian_copula_pair(20_000, 0.4, seed=8)
        ya, yb = laplace_margins(u1), laplace_margins(u2)
        f1 = fit_ht(ya, yb, 0.95)
        f2 = fit_ht(ya, yb, 0.95)
        assert (f1.alpha, f1.beta, f1.nll) == (f2.alpha, f2.beta, f2.nll)


class TestSimulation:
    def make_fits(self, rho=0.6, n=50_000, seed=41, q=0.95, channels=3):
        rng = np.random.default_rng(seed)
        z0 = rng.standard_normal(n)
        data = {
            "REF": z0,
        }
        for k in range(1, channels):
            data[f"D{k}"] = rho * z0 + np.sqrt(1 - rho**2) * rng.standard_normal(n)
        rec = EegRecording(
            channels=tuple(data), fs=100.0, data=np.column_stack(list(data.values()))
        )
        return conditional_model(rec, "REF", q, 0.95, seed=seed)

    def test_comonotone_simulation(self):
        x = np.random.default_rng(42).standard_normal(30_000)
        y = laplace_quantile(uniform_scores(x))
        fit = fit_ht(y, y, 0.95)
        sample = simulate_conditional([fit], 0.99, 5_000, seed=1)
        assert np.all(sample.cond_draws > sample.cond_level_laplace)
        assert np.allclose(sample.draws[:, 0], sample.cond_draws, atol=1e-4)

    def test_independence_simulation(self):
        a, b = gen_independent_pair(50_000, seed=43)
        fit = fit_ht(laplace_margins(a), laplace_margins(b), 0.95)
        sample = simulate_conditional([fit], 0.99, 10_000, seed=2)
        corr = np.corrcoef(sample.cond_draws, sample.draws[:, 0])[0, 1]
        assert abs(corr) < 0.05
        # marginal of the draws stays near standard Laplace
        probs = np.arange(0.1, 0.91, 0.1)
        gap = np.abs(
            np.quantile(sample.draws[:, 0], probs) - laplace_quantile(probs)
        ).max()
        assert gap < 0.2

    def test_conditional_mean_grows_linearly(self):
        fits, transforms = self.make_fits()
        fit = fits["D1"]
        sample = simulate_conditional([fit], 0.99, 50_000, seed=3)
        y = sample.cond_draws
        # remove the location drift mu * y^beta; what is left grows as alpha*y
        d = sample.draws[:, 0] - fit.mu * y**fit.beta
        slope = np.polyfit(y, d, 1)[0]
        assert slope == pytest.approx(fit.alpha, abs=0.1 * max(abs(fit.alpha), 0.3))

    def test_joint_residual_rows(self):
        fits, transforms = self.make_fits(channels=3)
        flist = [fits["D1"], fits["D2"]]
        s1 = simulate_conditional(flist, 0.99, 1_000, seed=4)
        # same residual row index is used across channels: reconstructing the
        # row from each channel must agree
        y = s1.cond_draws
        z1 = (s1.draws[:, 0] - flist[0].alpha * y) / y ** flist[0].beta
        z2 = (s1.draws[:, 1] - flist[1].alpha * y) / y ** flist[1].beta
        pairs = set(zip(np.round(flist[0].residuals_z, 9), np.round(flist[1].residuals_z, 9)))
        observed = set(zip(np.round(z1, 9), np.round(z2, 9)))
        assert observed <= pairs

    def test_back_transform(self):
        fits, transforms = self.make_fits()
        flist = list(fits.values())
        sample = simulate_conditional(
            flist, 0.99, 2_000, seed=5,
            cond_transform=transforms["REF"], dep_transforms=transforms,
        )
        assert sample.back_transformed.shape == sample.draws.shape
        # conditioning draws land above the marginal's 0.99 data quantile
        ref_q99 = from_laplace(laplace_quantile(0.99), transforms["REF"])
        assert np.all(sample.cond_back_transformed >= ref_q99 - 1e-9)

    def test_level_below_fit_quantile(self):
        fits, _ = self.make_fits(q=0.95)
        with pytest.raises(UsageError, match="below the fitting threshold"):
            simulate_conditional(list(fits.values()), 0.9, 100, seed=0)

    def test_mixed_fits_rejected(self):
        fits_a, _ = self.make_fits(seed=1)
        fits_b, _ = self.make_fits(seed=2, q=0.96)
        with pytest.raises(UsageError):
            simulate_conditional([fits_a["D1"], fits_b["D2"]], 0.99, 10, seed=0)

    def test_deterministic(self):
        fits, _ = self.make_fits()
        flist = list(fits.values())
        s1 = simulate_conditional(flist, 0.99, 500, seed=9)
        s2 = simulate_conditional(flist, 0.99, 500, seed=9)
        assert np.array_equal(s1.draws, s2.draws)


class TestSummary:
    def test_degenerate_constant(self):
        x = np.random.default_rng(51).standard_normal(30_000)
        y = laplace_quantile(uniform_scores(x))
        fit = fit_ht(y, y, 0.95)
        sample = simulate_conditional([fit], 0.99, 1, seed=1)
        rows = conditional_summary(sample)
        row = rows[0]
        assert row["mean"] == row["median"] == row["q05"] == row["q95"]

    def test_comonotone_mean_exceeds_level(self):
        x = np.random.default_rng(52).standard_normal(30_000)
        y = laplace_quantile(uniform_scores(x))
        fit = fit_ht(y, y, 0.95)
        sample = simulate_conditional([fit], 0.99, 5_000, seed=2)
        rows = conditional_summary(sample)
        assert rows[0]["mean"] >= laplace_quantile(0.99)

    def test_means_ordered_by_alpha(self):
        rng = np.random.default_rng(53)
        n = 80_000
        z0 = rng.standard_normal(n)
        strong = 0.8 * z0 + 0.6 * rng.standard_normal(n)
        weak = 0.3 * z0 + np.sqrt(1 - 0.09) * rng.standard_normal(n)
        rec = EegRecording(
            channels=("REF", "S", "W"),
            fs=100.0,
            data=np.column_stack([z0, strong, weak]),
        )
        fits, transforms = conditional_model(rec, "REF", 0.95, 0.95)
        assert fits["S"].alpha > fits["W"].alpha
        sample = simulate_conditional(
            [fits["S"], fits["W"]], 0.99, 20_000, seed=3
        )
        rows = {r["channel"]: r for r in conditional_summary(sample)}
        assert rows["S"]["mean"] > rows["W"]["mean"]
