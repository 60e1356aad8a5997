import numpy as np
import pytest
from scipy.signal import sosfilt

from eegx import (
    DEFAULT_BANDS,
    BandDefinition,
    DesignError,
    EegRecording,
    SizeError,
    ValidationError,
    apply_zero_phase,
    decompose_bands,
    design_bandpass,
    detrend,
)
from eegx.preprocess import band_by_id, effective_high_edge


def tone(freq, fs, n, amp=1.0, phase=0.0):
    t = np.arange(n) / fs
    return amp * np.sin(2 * np.pi * freq * t + phase)


def interior_gain(x, y):
    """Amplitude ratio on the middle 50% of samples (RMS-based)."""
    n = x.size
    sl = slice(n // 4, 3 * n // 4)
    return np.sqrt(np.mean(y[sl] ** 2) / np.mean(x[sl] ** 2))


class TestBandTable:
    def test_canonical_bands(self):
        table = {(b.id, b.low_hz, b.high_hz) for b in DEFAULT_BANDS}
        assert table == {
            ("delta", 0.5, 4.0),
            ("theta", 4.0, 8.0),
            ("alpha", 8.0, 12.0),
            ("beta", 13.0, 30.0),
            ("gamma", 30.0, 100.0),
        }

    def test_gamma_cap_at_100hz(self):
        assert effective_high_edge(band_by_id("gamma"), 100.0) == pytest.approx(49.5)

    def test_invalid_band(self):
        with pytest.raises(ValidationError):
            BandDefinition("x", 10.0, 5.0)
        with pytest.raises(ValidationError):
            BandDefinition("x", 0.0, 5.0)


class TestDetrend:
    def test_constant(self):
        assert np.allclose(detrend(np.full(50, 3.7)), 0.0, atol=1e-12)

    def test_exact_line(self):
        t = np.arange(100)
        assert np.allclose(detrend(2.0 + 0.5 * t), 0.0, atol=1e-9)

    def test_hand_example(self):
        # least-squares line through [1, 2, 4] is 0.8333 + 1.5 t
        res = detrend(np.array([1.0, 2.0, 4.0]))
        assert np.allclose(res, [1 / 6, -1 / 3, 1 / 6], atol=1e-9)

    def test_output_moments(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(1000) + 0.01 * np.arange(1000)
        r = detrend(x)
        t = np.arange(1000) - 499.5
        scale = np.abs(x).max()
        assert abs(r.mean()) <= 1e-9 * scale
        assert abs((t @ r) / (t @ t)) <= 1e-9 * scale

    def test_too_short(self):
        with pytest.raises(SizeError):
            detrend(np.array([1.0]))


class TestDesign:
    def test_alpha_at_100(self):
        spec = design_bandpass(band_by_id("alpha"), 100.0, 4)
        assert spec.sos.shape == (2, 6)
        assert spec.high_hz_effective == 12.0
        # single-pass response is about -3 dB at each edge
        from scipy.signal import sosfreqz

        w, h = sosfreqz(spec.sos, worN=[8.0, 12.0], fs=100.0)
        assert np.allclose(np.abs(h), 10 ** (-3.01 / 20), atol=0.01)

    def test_geometric_mean_gain(self):
        from scipy.signal import sosfreqz

        for band in DEFAULT_BANDS:
            spec = design_bandpass(band, 1000.0, 4)
            f0 = np.sqrt(band.low_hz * spec.high_hz_effective)
            w, h = sosfreqz(spec.sos, worN=[f0], fs=1000.0)
            squared = np.abs(h[0]) ** 2  # forward-backward response
            assert 10 ** (-3.01 / 20) <= squared <= 10 ** (0.01 / 20)

    def test_gamma_capped_with_warning(self):
        with pytest.warns(UserWarning, match="capped"):
            spec = design_bandpass(band_by_id("gamma"), 100.0, 4)
        assert spec.high_hz_effective == pytest.approx(49.5)

    def test_band_above_nyquist(self):
        with pytest.raises(DesignError):
            design_bandpass(band_by_id("delta"), 0.8, 4)

    def test_odd_or_extreme_order(self):
        alpha = band_by_id("alpha")
        for order in (3, 1, 10, 0):
            with pytest.raises(ValidationError):
                design_bandpass(alpha, 100.0, order)

    def test_sections_normalized_and_stable(self):
        for band in DEFAULT_BANDS:
            spec = design_bandpass(band, 100.0, 4)
            assert np.allclose(spec.sos[:, 3], 1.0)
            for row in spec.sos:
                assert np.all(np.abs(np.roots(row[3:])) < 1.0)

    def test_impulse_decay(self):
        # stability: |h| < 1e-8 within 10*fs samples for every band
        fs = 100.0
        for band in DEFAULT_BANDS:
            spec = design_bandpass(band, fs, 4)
            imp = np.zeros(int(12 * fs))
            imp[0] = 1.0
            h = sosfilt(spec.sos, imp)
            assert np.abs(h[int(10 * fs) :]).max() < 1e-8, band.id


class TestZeroPhase:
    def setup_method(self):
        self.fs = 100.0
        self.spec = design_bandpass(band_by_id("alpha"), self.fs, 4)

    def test_zero_in_zero_out(self):
        out = apply_zero_phase(np.zeros(500), self.spec)
        assert np.allclose(out, 0.0)

    def test_dc_rejected(self):
        x = np.full(2000, 5.0)
        y = apply_zero_phase(x, self.spec)
        assert np.abs(y[500:1500]).max() <= 1e-6 * 5.0

    def test_passband_gain(self):
        x = tone(10.0, self.fs, 2000)
        y = apply_zero_phase(x, self.spec)
        assert 0.95 <= interior_gain(x, y) <= 1.0

    def test_stopband_double_edge(self):
        x = tone(24.0, self.fs, 2000)  # twice the alpha upper edge
        y = apply_zero_phase(x, self.spec)
        assert interior_gain(x, y) <= 0.05

    def test_zero_lag(self):
        x = tone(10.0, self.fs, 2000)
        y = apply_zero_phase(x, self.spec)
        a = x[500:1500] - x[500:1500].mean()
        b = y[500:1500] - y[500:1500].mean()
        cc = np.correlate(b, a, "full")
        assert np.argmax(cc) - (a.size - 1) == 0

    def test_output_length(self):
        for n in (16, 100, 999):
            assert apply_zero_phase(np.random.default_rng(0).standard_normal(n), self.spec).size == n

    def test_linearity(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal(400)
        y = rng.standard_normal(400)
        lhs = apply_zero_phase(1.7 * x - 0.3 * y, self.spec)
        rhs = 1.7 * apply_zero_phase(x, self.spec) - 0.3 * apply_zero_phase(y, self.spec)
        scale = np.abs(rhs).max()
        assert np.abs(lhs - rhs).max() <= 1e-9 * scale

    def test_too_short(self):
        with pytest.raises(SizeError):
            apply_zero_phase(np.zeros(self.spec.padlen), self.spec)


class TestDecompose:
    def make_rec(self, T=4000, C=2, fs=100.0, seed=0):
        rng = np.random.default_rng(seed)
        return EegRecording(
            channels=tuple(f"C{i}" for i in range(C)),
            fs=fs,
            data=rng.standard_normal((T, C)),
        )

    def test_all_bands_at_100(self):
        with pytest.warns(UserWarning, match="capped"):
            deco = decompose_bands(self.make_rec())
        assert set(deco.bands) == {"delta", "theta", "alpha", "beta", "gamma"}
        assert deco.omitted == ()
        assert deco.specs["gamma"].high_hz_effective == pytest.approx(49.5)
        for m in deco.bands.values():
            assert m.shape == (4000, 2)

    def test_all_bands_nominal_at_1000(self):
        deco = decompose_bands(self.make_rec(fs=1000.0))
        assert deco.specs["gamma"].high_hz_effective == 100.0

    def test_zero_recording(self):
        rec = EegRecording(channels=("A",), fs=1000.0, data=np.zeros((2000, 1)))
        deco = decompose_bands(rec)
        for m in deco.bands.values():
            assert np.allclose(m, 0.0)

    def test_low_fs_omits_bands(self):
        # at fs = 9 only delta and theta have low edges under 0.99*4.5
        with pytest.warns(UserWarning, match="omitted"):
            deco = decompose_bands(self.make_rec(fs=9.0))
        assert "delta" in deco.bands
        assert "gamma" in deco.omitted and "beta" in deco.omitted

    def test_no_feasible_band(self):
        rec = EegRecording(channels=("A",), fs=0.8, data=np.zeros((2000, 1)))
        with pytest.raises(DesignError, match="no band"):
            decompose_bands(rec)

    def test_detrends_before_filtering(self):
        # a pure trend contributes nothing to any band
        t = np.arange(4000, dtype=float)
        rec = EegRecording(channels=("A",), fs=100.0, data=(3.0 + 0.5 * t)[:, None])
        with pytest.warns(UserWarning):
            deco = decompose_bands(rec)
        for m in deco.bands.values():
            assert np.abs(m).max() < 1e-6 * t.max()
