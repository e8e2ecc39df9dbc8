import math
from dataclasses import replace

import numpy as np
import pytest

from bardina import instability as inst
from bardina.spectral import curl, divergence_coeffs, make_grid

from conftest import CHAIN_COUNT_ORACLE

ALPHA = 1.0 / 64.0
PINNED = inst.Chain(s=8, t=4, r=1, alpha=ALPHA, gamma=1.0, coupling=0.4)


def brute_force_region(s, delta):
    """Independent region scan in float arithmetic."""
    pts = []
    for t in range(1, s):
        for r in range(-s, s + 1):
            if (
                t * t + r * r < s * s / 3.0
                and t * t + (r - s) ** 2 > s * s
                and t * t + (r + s) ** 2 > s * s
                and -s / 6.0 < r < s / 6.0
                and t >= delta * s
            ):
                pts.append((t, r))
    return pts


class TestForcing:
    def test_norms(self):
        g = make_grid(64)
        spec = inst.KolmogorovSpec(s=3, amplitude=1.7, gamma=0.5)
        f = inst.kolmogorov_forcing(spec, g)
        assert f.l2_norm_sq() == pytest.approx(spec.force_norm_sq, rel=1e-12)
        w = curl(f)
        assert w.l2_norm_sq() == pytest.approx(spec.curl_norm_sq, rel=1e-12)

    def test_is_sine_profile(self):
        g = make_grid(32)
        spec = inst.KolmogorovSpec(s=2, amplitude=1.0, gamma=1.0)
        f = inst.kolmogorov_forcing(spec, g)
        x2 = g.nodes()[1]
        want = spec.gamma * spec.amplitude / (math.sqrt(2) * math.pi) * np.sin(2 * x2)
        assert np.allclose(f.component(0).to_samples(), want, atol=1e-13)
        assert np.allclose(f.component(1).to_samples(), 0.0, atol=1e-15)

    def test_divergence_free_zero_mean(self):
        g = make_grid(32)
        f = inst.kolmogorov_forcing(inst.KolmogorovSpec(s=4, amplitude=2.0, gamma=1.0), g)
        assert np.max(np.abs(divergence_coeffs(f))) == 0.0
        assert f.coeffs[0, 0, 0] == 0.0 and f.coeffs[1, 0, 0] == 0.0

    def test_zero_amplitude_gives_zero_field(self):
        g = make_grid(32)
        f = inst.kolmogorov_forcing(inst.KolmogorovSpec(s=1, amplitude=0.0, gamma=1.0), g)
        assert np.all(f.coeffs == 0)

    def test_stationary_vorticity_profile(self):
        g = make_grid(32)
        spec = inst.KolmogorovSpec(s=2, amplitude=1.3, gamma=2.0)
        w = inst.stationary_vorticity(spec, g)
        x2 = g.nodes()[1]
        want = -spec.amplitude * spec.s / (math.sqrt(2) * math.pi) * np.cos(2 * x2)
        assert np.allclose(w.to_samples(), want, atol=1e-13)

    def test_wavenumber_beyond_band_rejected(self):
        g = make_grid(32)  # de-aliased band: |k| <= 10
        with pytest.raises(ValueError):
            inst.kolmogorov_forcing(inst.KolmogorovSpec(s=11, amplitude=1.0, gamma=1.0), g)


class TestRegion:
    def test_frozen_counts(self):
        for s, want in CHAIN_COUNT_ORACLE.items():
            assert len(inst.region_lattice(s, 0.35)) == want

    def test_small_s(self):
        assert inst.region_lattice(1, 0.35) == []
        assert inst.region_lattice(3, 0.35) == []

    def test_matches_brute_force(self):
        for s, delta in [(24, 0.35), (17, 0.2), (40, 0.5)]:
            assert inst.region_lattice(s, delta) == sorted(brute_force_region(s, delta))

    def test_shifted_mode_band(self):
        # every admissible point keeps its shifted neighbors in the annulus
        for t, r in inst.region_lattice(48, 0.35):
            for sgn in (-1, 1):
                v = t * t + (sgn * 48 + r) ** 2
                assert 48**2 <= v <= (5.0 / 3.0) * 48**2

    def test_doubling_ratio_approaches_four(self):
        for s in (12, 24, 48, 96):
            ratio = len(inst.region_lattice(2 * s, 0.35)) / len(inst.region_lattice(s, 0.35))
            assert abs(ratio - 4.0) <= 1.0

    def test_delta_out_of_range(self):
        with pytest.raises(ValueError):
            inst.region_lattice(12, 0.0)
        with pytest.raises(ValueError):
            inst.region_lattice(12, 0.58)


class TestRecurrence:
    def test_coefficient_value(self):
        rec = PINNED.recurrence()
        K1 = 4**2 + (8 + 1) ** 2  # 97
        want = (K1 + ALPHA * K1**2) / (0.4 * 4 * (K1 - 64))
        assert float(rec.A(1)) == pytest.approx(want, rel=1e-14)
        assert float(rec.d(1, 0.25)) == pytest.approx(1.25 * want, rel=1e-14)

    def test_sign_pattern_across_region(self):
        for s, delta in [(8, 0.35), (24, 0.35), (16, 0.5)]:
            for t, r in inst.region_lattice(s, delta):
                ch = inst.Chain(s=s, t=t, r=r, alpha=0.01, gamma=1.0, coupling=0.7)
                rec = ch.recurrence()
                for sigma in (-0.999, -0.5, 0.0, 1.0, 10.0):
                    d = rec.d(np.arange(-6, 7), sigma)
                    assert d[6] < 0  # center
                    assert np.all(np.delete(d, 6) > 0)

    def test_coefficients_grow(self):
        rec = PINNED.recurrence()
        d = np.abs(rec.d(np.arange(2, 40), 0.0))
        assert np.all(np.diff(d) > 0)


class TestContinuedFraction:
    def test_vanishes_at_large_sigma(self):
        assert 0 < inst.continued_fraction_g(PINNED, 1e6) < 1e-5

    def test_two_term_brackets(self):
        rec = PINNED.recurrence()
        sigma = 0.1
        g = inst.continued_fraction_g(PINNED, sigma)
        upper = 1 / float(rec.d(-1, sigma)) + 1 / float(rec.d(1, sigma))
        lower = 1 / (float(rec.d(-1, sigma)) + 1 / float(rec.d(-2, sigma))) + 1 / (
            float(rec.d(1, sigma)) + 1 / float(rec.d(2, sigma))
        )
        assert lower < g < upper

    def test_depth_insensitive(self):
        a = inst.continued_fraction_g(PINNED, 0.3, n_max=8)
        b = inst.continued_fraction_g(PINNED, 0.3, n_max=64)
        assert abs(a - b) < 1e-13

    def test_rejects_sigma_at_minus_gamma(self):
        with pytest.raises(ValueError):
            inst.continued_fraction_g(PINNED, -1.0)

    def test_nonconvergence_flagged_near_minus_gamma(self):
        with pytest.raises(inst.ContinuedFractionError):
            inst.continued_fraction_g(PINNED, -1.0 + 1e-10, n_max=8)


class TestFSigma:
    def test_zero_at_minus_gamma(self):
        assert inst.f_sigma(PINNED, -PINNED.gamma) == 0.0

    def test_closed_form_alpha_zero(self):
        # q = s^2/4 collapses f to (gamma+sigma)/(3*coupling*t)
        ch = inst.Chain(s=4, t=2, r=0, alpha=0.0, gamma=1.0, coupling=0.9)
        for sigma in (-0.4, 0.0, 2.0):
            assert inst.f_sigma(ch, sigma) == pytest.approx(
                (1.0 + sigma) / (3 * 0.9 * 2), rel=1e-14
            )

    def test_monotone_increasing(self):
        sig = np.linspace(-0.9, 5.0, 50)
        vals = [inst.f_sigma(PINNED, s) for s in sig]
        assert np.all(np.diff(vals) > 0)


class TestSolveSigma:
    def test_matches_matrix_oracle_pinned(self):
        sigma = inst.solve_sigma(PINNED)
        oracle = inst.chain_matrix_eigen(PINNED, depth=400)
        assert abs(sigma - oracle) < 1e-8

    def test_all_threshold_chains_unstable(self):
        s, delta = 12, 0.35
        lam = inst.threshold_amplitude(s, delta, alpha=1 / 144, gamma=1.0)
        spec = inst.KolmogorovSpec(s=s, amplitude=lam, gamma=1.0)
        for t, r in inst.region_lattice(s, delta):
            assert inst.solve_sigma(inst.Chain.from_spec(spec, 1 / 144, t, r)) > 0

    def test_monotone_in_coupling(self):
        for c in (0.2, 0.5, 1.0):
            s1 = inst.solve_sigma(replace(PINNED, coupling=c))
            s2 = inst.solve_sigma(replace(PINNED, coupling=2 * c))
            assert s2 > s1

    def test_two_sided_estimate(self):
        delta = 0.35
        for t, r in inst.region_lattice(8, delta):
            ch = inst.Chain(s=8, t=t, r=r, alpha=ALPHA, gamma=1.0, coupling=0.6)
            lo, hi = inst.sigma_bounds(ch, delta)
            assert lo <= inst.solve_sigma(ch) <= hi

    def test_rejects_inadmissible_chain(self):
        bad = inst.Chain(s=8, t=1, r=1, alpha=ALPHA, gamma=1.0, coupling=0.4)
        assert not bad.admissible()  # t^2+(r-s)^2 = 50 < 64
        with pytest.raises(ValueError):
            inst.solve_sigma(bad)

    def test_f_up_g_down_on_bracket(self):
        sig = np.linspace(-0.8, 2.0, 15)
        f = np.array([inst.f_sigma(PINNED, x) for x in sig])
        g = np.array([inst.continued_fraction_g(PINNED, x) for x in sig])
        assert np.all(np.diff(f) > 0)
        assert np.all(np.diff(g) < 0)

    def test_cross_validation_random_chains(self, rng):
        # >= 50 random chains across several regions and couplings
        cases = []
        for s in (8, 12, 16, 24):
            for t, r in inst.region_lattice(s, 0.35):
                cases.append((s, t, r))
        assert len(cases) >= 50
        for s, t, r in cases:
            ch = inst.Chain(
                s=s, t=t, r=r, alpha=1.0 / s**2, gamma=1.0,
                coupling=float(rng.uniform(0.2, 2.0)),
            )
            assert abs(inst.solve_sigma(ch) - inst.chain_matrix_eigen(ch, depth=150)) < 1e-8


class TestLambda0:
    def test_sign_change_around_root(self):
        lam0 = inst.solve_lambda0(PINNED)
        assert inst.solve_sigma(replace(PINNED, coupling=1.01 * lam0)) > 0
        assert inst.solve_sigma(replace(PINNED, coupling=0.99 * lam0)) < 0

    def test_two_sided_estimate_sweep(self):
        for s in (8, 16, 32):
            for delta in (0.2, 0.35, 0.5):
                alpha = 1.0 / s**2
                for t, r in inst.region_lattice(s, delta):
                    ch = inst.Chain(s=s, t=t, r=r, alpha=alpha, gamma=1.0, coupling=1.0)
                    lam0 = inst.solve_lambda0(ch)
                    lo, hi = inst.coupling_bounds(ch, delta)
                    assert lo < lam0 < hi

    def test_matches_matrix_crossing(self):
        lam0 = inst.solve_lambda0(PINNED)
        lo, hi = 0.5 * lam0, 2.0 * lam0

        def eig(c):
            return inst.chain_matrix_eigen(replace(PINNED, coupling=c), depth=200)

        assert eig(lo) < 0 < eig(hi)
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if eig(mid) < 0:
                lo = mid
            else:
                hi = mid
        assert abs(0.5 * (lo + hi) - lam0) < 1e-6


class TestMatrixOracle:
    def test_depth_stability(self):
        assert abs(
            inst.chain_matrix_eigen(PINNED, 200) - inst.chain_matrix_eigen(PINNED, 400)
        ) < 1e-9

    def test_weak_coupling_limit(self):
        ch = replace(PINNED, coupling=1e-9)
        assert inst.chain_matrix_eigen(ch, depth=60) == pytest.approx(-1.0, abs=1e-7)

    def test_structure(self):
        m = inst.chain_matrix(PINNED, depth=5)
        assert m.shape == (11, 11)
        assert np.all(np.diag(m) == 0)
        assert np.count_nonzero(m - np.diag(np.diag(m, 1), 1) - np.diag(np.diag(m, -1), -1)) == 0

    def test_singular_mode_row_decouples(self):
        # s=5, t=4, r=-2: |k_1|^2 = 16+9 = 25 = s^2, so its row vanishes
        ch = inst.Chain(s=5, t=4, r=-2, alpha=0.1, gamma=1.0, coupling=0.3)
        m = inst.chain_matrix(ch, depth=3)
        row = 3 + 1  # n = +1
        assert np.all(m[row] == 0.0)
        assert np.all(np.isfinite(m))

    def test_a_space_similarity(self):
        # same spectrum from the unscaled coefficient form of the ladder
        ch = PINNED
        depth = 150
        n = np.arange(-depth, depth + 1)
        K = ch.mode_sq(n)
        C = (K - ch.s**2) / (K + ch.alpha * K * K)
        m = np.zeros((n.size, n.size))
        i = np.arange(n.size - 1)
        m[i, i + 1] = ch.coupling * ch.t * C[1:]
        m[i + 1, i] = -ch.coupling * ch.t * C[:-1]
        sigma_a = float(np.linalg.eigvals(m).real.max()) - ch.gamma
        assert abs(sigma_a - inst.chain_matrix_eigen(ch, depth)) < 1e-9


class TestUnstableCount:
    def test_frozen_counts(self):
        assert inst.unstable_count(12, 0.35, alpha=1 / 144, gamma=1.0) == 12
        assert inst.unstable_count(24, 0.35, alpha=1 / 576, gamma=1.0) == 54

    def test_empty_region_zero(self):
        assert inst.unstable_count(3, 0.35, alpha=0.1, gamma=1.0) == 0

    def test_doubling_ratio(self):
        counts = {s: inst.unstable_count(s, 0.35, alpha=1.0 / s**2, gamma=1.0)
                  for s in (12, 24, 48)}
        assert abs(counts[24] / counts[12] - 4.0) <= 1.0
        assert abs(counts[48] / counts[24] - 4.0) <= 1.0

    def test_certification_failure_raises(self, monkeypatch):
        monkeypatch.setattr(inst, "solve_sigma", lambda ch: -1.0)
        with pytest.raises(RuntimeError):
            inst.unstable_count(12, 0.35, alpha=1 / 144, gamma=1.0)
