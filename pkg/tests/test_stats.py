import math

import numpy as np
import pytest
from scipy import stats as sps

from massshell.dynamics import RadialDriftSpec
from massshell.errors import DomainError, InfiniteMomentError
from massshell.integrators import HyperbolicPoint, StepConfig, run_ensemble
from massshell.manifold import ModelParams
from massshell.measures import DensitySpec
from massshell.stats import (GofReport, histogram, hitting_fraction, ks_against,
                             ks_distance, ks_two_sample, moment_check,
                             theoretical_moment)

from conftest import inverse_transform_samples

ACCEPTANCE_SPECS = (
    [("radial_s", d, g) for d, g in [(2, 4.0), (3, 4.0), (3, 10.0), (4, 7.0)]]
    + [(kind, 3, g)
       for g in (4.0, 6.0, 8.0, 10.0)
       for kind in ("energy_p0", "speed_v", "momentum_component", "velocity_component")]
)


def params_of(d, g):
    return ModelParams(d=d, m=1.0, gamma=g)


class TestHistogram:
    def test_counts_sum(self, rng):
        samples = rng.standard_normal(500)
        h = histogram(samples)
        assert int(h.counts.sum()) == 500

    def test_permutation_invariant(self, rng):
        samples = rng.standard_normal(400)
        h1 = histogram(samples, bins=32)
        h2 = histogram(rng.permutation(samples), bins=32)
        assert np.array_equal(h1.counts, h2.counts)
        assert np.array_equal(h1.edges, h2.edges)

    def test_density_normalized(self, rng):
        samples = rng.standard_normal(1000)
        h = histogram(samples)
        area = float(np.sum(h.density() * np.diff(h.edges)))
        assert area == pytest.approx(1.0, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            histogram(np.array([]))


class TestKsMachinery:
    def test_one_sample_matches_scipy(self, rng):
        samples = rng.standard_normal(800)
        xs = np.sort(samples)
        D = ks_distance(xs, sps.norm.cdf(xs))
        assert D == pytest.approx(sps.kstest(samples, "norm").statistic, abs=1e-12)

    def test_two_sample_matches_scipy(self, rng):
        x = rng.standard_normal(500)
        y = rng.standard_normal(700) + 0.2
        assert ks_two_sample(x, y) == pytest.approx(
            sps.ks_2samp(x, y).statistic, abs=1e-12)


class TestKsAgainst:
    @pytest.mark.parametrize("kind,d,g", ACCEPTANCE_SPECS)
    def test_inverse_transform_self_consistency(self, kind, d, g, rng):
        # samples drawn from the law itself must pass at the 5% threshold
        spec = DensitySpec(kind, params_of(d, g))
        samples = inverse_transform_samples(spec, 2000, rng)
        report = ks_against(samples, spec)
        assert report.passed, f"{kind} ({d},{g}): D={report.ks_statistic}"
        assert report.ks_statistic < 1.36 / math.sqrt(2000)

    def test_shifted_negative_control(self, rng):
        spec = DensitySpec("velocity_component", params_of(3, 8.0))
        samples = inverse_transform_samples(spec, 2000, rng) * 0.5 + 0.3
        report = ks_against(samples, spec)
        assert not report.passed

    def test_out_of_support_is_conclusive(self, rng):
        spec = DensitySpec("speed_v", params_of(3, 6.0))
        samples = np.concatenate([inverse_transform_samples(spec, 200, rng), [1.5]])
        report = ks_against(samples, spec)
        assert report.ks_statistic == 1.0
        assert not report.passed

    def test_small_sample_rejected(self, rng):
        spec = DensitySpec("speed_v", params_of(3, 6.0))
        with pytest.raises(DomainError):
            ks_against(np.full(50, 0.5), spec)

    def test_threshold_floor(self, rng):
        spec = DensitySpec("speed_v", params_of(3, 6.0))
        samples = inverse_transform_samples(spec, 50000, rng)
        report = ks_against(samples, spec)
        assert report.ks_threshold == 0.03  # bias allowance dominates 1.36/sqrt(n)

    def test_chi2_reported(self, rng):
        spec = DensitySpec("speed_v", params_of(3, 6.0))
        samples = inverse_transform_samples(spec, 2000, rng)
        report = ks_against(samples, spec)
        assert report.chi2_dof > 0
        # informational: chi2 should be in the right ballpark for a true null
        assert report.chi2_statistic < 3.0 * report.chi2_dof


class TestMoments:
    def test_velocity_mean_zero(self):
        spec = DensitySpec("velocity_component", params_of(3, 6.0))
        assert theoretical_moment(spec, 1) == pytest.approx(0.0, abs=1e-12)

    def test_speed_second_moment(self):
        spec = DensitySpec("speed_v", params_of(3, 4.0))
        assert theoretical_moment(spec, 2) == pytest.approx(0.6, rel=1e-10)

    def test_energy_infinite_moment(self):
        spec = DensitySpec("energy_p0", params_of(3, 4.0))
        with pytest.raises(InfiniteMomentError):
            theoretical_moment(spec, 2)

    def test_momentum_component_tail(self):
        spec = DensitySpec("momentum_component", params_of(3, 4.0))
        assert math.isfinite(theoretical_moment(spec, 1))
        with pytest.raises(InfiniteMomentError):
            theoretical_moment(spec, 2)

    def test_moment_check_zscore(self, rng):
        spec = DensitySpec("speed_v", params_of(3, 4.0))
        samples = inverse_transform_samples(spec, 5000, rng)
        emp, theo, z = moment_check(samples, spec, 2)
        assert theo == pytest.approx(0.6, rel=1e-10)
        assert abs(z) < 4.0


@pytest.fixture(scope="module")
def full_ensemble():
    params = ModelParams(d=3, m=1.0, gamma=10.0)
    spec = RadialDriftSpec(params=params, kind="ou")
    cfg = StepConfig(dt=2.0 ** -6, t_end=5.0)
    return run_ensemble(HyperbolicPoint(2.0, np.zeros(2)), spec, cfg,
                        n_paths=200, base_seed=12, record="full", process="radial")


class TestHittingFraction:
    def test_level_above_start_hits_immediately(self, full_ensemble):
        assert hitting_fraction(full_ensemble, 2.5) == 1.0

    def test_monotone_in_level(self, full_ensemble):
        levels = [0.1, 0.3, 0.5, 1.0, 1.5, 2.5]
        fracs = [hitting_fraction(full_ensemble, a) for a in levels]
        assert all(f1 <= f2 + 1e-15 for f1, f2 in zip(fracs, fracs[1:]))

    def test_final_only_rejected(self):
        params = ModelParams(d=3, m=1.0, gamma=10.0)
        spec = RadialDriftSpec(params=params, kind="ou")
        cfg = StepConfig(dt=2.0 ** -6, t_end=1.0)
        ens = run_ensemble(HyperbolicPoint(2.0, np.zeros(2)), spec, cfg,
                           n_paths=10, base_seed=1, process="radial")
        with pytest.raises(DomainError):
            hitting_fraction(ens, 0.5)

    def test_bad_level(self, full_ensemble):
        with pytest.raises(DomainError):
            hitting_fraction(full_ensemble, -1.0)
