import math

import numpy as np
import pytest

from massshell.dynamics import RadialDriftSpec, boundary_report, drift, scale_density
from massshell.errors import DomainError
from massshell.manifold import ModelParams


def spec_of(d, gamma, m=1.0, kind="ou"):
    return RadialDriftSpec(params=ModelParams(d=d, m=m, gamma=gamma), kind=kind)


class TestDrift:
    def test_wiener_value(self):
        # coth(1)/2 for d=2, m=1, gamma=0
        assert drift(spec_of(2, 0.0), 1.0) == pytest.approx(0.6565176427496657, rel=1e-12)

    def test_strong_damping_value(self):
        # coth(5) - 5 tanh(5) for d=3, m=1, gamma=10
        assert drift(spec_of(3, 10.0), 5.0) == pytest.approx(-3.9994552173309565, rel=1e-12)

    def test_wiener_kind_forces_gamma_zero(self):
        s_ou = spec_of(2, 7.0, kind="ou")
        s_w = spec_of(2, 7.0, kind="wiener")
        assert s_w.gamma == 0.0
        assert drift(s_w, 1.0) > drift(s_ou, 1.0)

    def test_balanced_gamma_positive_vanishing(self):
        # gamma = d-1 keeps the drift positive with a zero asymptote
        # (positive up to s = 18; past that coth - tanh underflows to 0)
        sp = spec_of(3, 2.0)
        grid = np.logspace(-3, math.log10(18.0), 200)
        vals = [drift(sp, s) for s in grid]
        assert all(v > 0 for v in vals)
        assert drift(sp, 30.0) == pytest.approx(0.0, abs=1e-12)

    def test_asymptotic_constant(self):
        for d, g, m in [(2, 4.0, 1.0), (3, 0.0, 2.0), (5, 10.0, 0.5)]:
            sp = spec_of(d, g, m=m)
            assert drift(sp, 40.0) == pytest.approx((d - 1 - g) / (2 * m * m), abs=1e-12)

    @pytest.mark.parametrize("d,g,m", [(2, 0.0, 1.0), (3, 4.0, 1.0), (4, 2.0, 0.7), (5, 10.0, 2.0)])
    def test_strictly_decreasing(self, d, g, m):
        # grid stops at 18: past that coth and tanh saturate to 1.0 in
        # float64 and the drift plateaus at its asymptote
        sp = spec_of(d, g, m=m)
        grid = np.logspace(-6, math.log10(18.0), 1000)
        vals = np.array([drift(sp, s) for s in grid])
        assert np.all(np.diff(vals) < 0)

    def test_domain(self):
        with pytest.raises(DomainError):
            drift(spec_of(2, 0.0), 0.0)
        with pytest.raises(DomainError):
            drift(spec_of(2, 0.0), -1.0)


class TestScaleDensity:
    def test_anchor_identity(self):
        assert scale_density(spec_of(3, 4.0), 1.0, 1.0) == 1.0
        assert scale_density(spec_of(3, 4.0, m=3.0), 0.37, 0.37) == 1.0

    def test_wiener_value(self):
        # gamma=0, d=2: rho(s) = sinh(a)/sinh(s)
        assert scale_density(spec_of(2, 0.0), 2.0, 1.0) == pytest.approx(
            0.3240271368319427, rel=1e-12)

    def test_mass_independent(self):
        a = scale_density(spec_of(3, 5.0, m=1.0), 2.2, 0.8)
        b = scale_density(spec_of(3, 5.0, m=4.0), 2.2, 0.8)
        assert a == b

    def test_cocycle(self):
        rng = np.random.default_rng(5)
        sp = spec_of(4, 6.0)
        for _ in range(200):
            a, s, u = rng.uniform(0.05, 6.0, size=3)
            lhs = scale_density(sp, s, a) * scale_density(sp, u, s)
            rhs = scale_density(sp, u, a)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_inverse(self):
        sp = spec_of(2, 3.0)
        assert scale_density(sp, 2.0, 0.5) * scale_density(sp, 0.5, 2.0) == pytest.approx(1.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            scale_density(spec_of(2, 0.0), -1.0, 1.0)
        with pytest.raises(DomainError):
            scale_density(spec_of(2, 0.0), 1.0, 0.0)


class TestBoundaryReport:
    def test_wiener_d2_transient(self):
        rep = boundary_report(spec_of(2, 0.0, kind="wiener"), 1.0)
        assert rep.infinity_type == "typeB"
        assert rep.predicted_behavior == "transient"
        assert rep.singularity_type_at_zero == "type3"
        assert math.isinf(rep.rho_integral_zero)
        assert math.isfinite(rep.rho_integral_inf)
        assert math.isfinite(rep.I_a)
        assert math.isinf(rep.I_inf)

    def test_recurrent_case(self):
        rep = boundary_report(spec_of(3, 4.0), 1.0)
        assert rep.infinity_type == "typeA"
        assert rep.predicted_behavior == "recurrent"
        assert math.isinf(rep.rho_integral_inf)
        assert math.isinf(rep.I_inf)

    def test_boundary_gamma_recurrent(self):
        # gamma = d-1 sits on the recurrent side
        rep = boundary_report(spec_of(3, 2.0), 1.0)
        assert rep.infinity_type == "typeA"
        assert rep.predicted_behavior == "recurrent"

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_classification_grid(self, d):
        # quadrature divergence detector must reproduce gamma >= d-1
        gammas = sorted({0.0, float(max(d - 2, 0)), float(d - 1), float(d), float(d + 2), 10.0})
        for g in gammas:
            rep = boundary_report(spec_of(d, g), 1.0)
            expect = "recurrent" if g >= d - 1 else "transient"
            assert rep.predicted_behavior == expect, (d, g)
            assert math.isfinite(rep.I_a)
            assert math.isinf(rep.rho_integral_zero)

    def test_anchor_range_guard(self):
        with pytest.raises(DomainError):
            boundary_report(spec_of(2, 0.0), 6.0)
        with pytest.raises(DomainError):
            boundary_report(spec_of(2, 0.0), 0.0)
