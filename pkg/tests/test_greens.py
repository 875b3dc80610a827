import math

import numpy as np
import pytest

from casimir_torque import (
    CavityConfig,
    ConstantPair,
    DomainError,
    InconsistentConstantError,
    LossyPolarizer,
    PerfectPolarizer,
    integrand,
)
from casimir_torque import greens
from casimir_torque.greens import (
    build_solutions,
    greens_matrix,
    kernel_spread,
    oracle_integrand,
    reference_constant,
    validate,
)

HALF_KAPPA = math.log(2.0) / 2


def cavity(m1, m2=None, gamma=math.pi / 4, L=1.0):
    return CavityConfig(L, gamma, m1, m2 if m2 is not None else m1)


def _np(m):
    return np.array([[complex(m[i, j]) for j in range(2)] for i in range(2)])


class TestSolutions:
    def test_zero_reflection_at_wall(self):
        sol = build_solutions(0.8, cavity(PerfectPolarizer(), ConstantPair(0.0, 0.0), gamma=0.0))
        np.testing.assert_allclose(_np(sol.u(sol.z2)), np.eye(2), atol=1e-30)

    def test_perfect_polarizer_at_wall(self):
        sol = build_solutions(0.8, cavity(ConstantPair(0, 0), PerfectPolarizer(+1), gamma=0.0))
        np.testing.assert_allclose(_np(sol.u(sol.z2)), np.diag([2.0, 1.0]), atol=1e-30)

    @pytest.mark.parametrize("which", ["u", "v"])
    def test_helmholtz_residual(self, which, dichroic):
        # second central differences in 40-digit arithmetic
        cfg = cavity(dichroic, LossyPolarizer(0.7), gamma=0.9, L=1.7)
        kappa = 1.3
        sol = build_solutions(kappa, cfg)
        ctx = sol.ctx
        f = getattr(sol, which)
        h = ctx.mpf("1e-12")
        rng = np.random.default_rng(7)
        for z in rng.uniform(0.05, 1.65, 5):
            z = ctx.mpf(z)
            fd = (f(z + h) - 2 * f(z) + f(z - h)) / h**2
            residual = fd - kappa**2 * f(z)  # (d^2 + q^2) phi with q^2 = -kappa^2
            scale = max(abs(x) for x in (kappa**2 * f(z)))
            assert max(abs(x) for x in residual) <= 1e-12 * scale

    def test_analytic_derivative(self):
        sol = build_solutions(2.0, cavity(LossyPolarizer(0.5), gamma=0.4))
        ctx = sol.ctx
        z, h = ctx.mpf("0.3"), ctx.mpf("1e-15")
        fd = (sol.v(z + h) - sol.v(z - h)) / (2 * h)
        assert max(abs(x) for x in fd - sol.v(z, 1)) < 1e-20


class TestGreensMatrix:
    def cfg(self, dichroic):
        return cavity(dichroic, PerfectPolarizer(-1), gamma=0.3, L=1.0)

    def test_continuity(self, dichroic):
        cfg = self.cfg(dichroic)
        for eps in (1e-4, 1e-6):
            above = greens_matrix(0.5 + eps, 0.5, 1.0, cfg).G
            below = greens_matrix(0.5 - eps, 0.5, 1.0, cfg).G
            assert np.abs(above - below).max() < 10 * eps

    def test_exact_continuity_at_coincidence(self, dichroic):
        cfg = self.cfg(dichroic)
        up = greens_matrix(0.4, 0.4, 1.0, cfg, upper=True).G
        down = greens_matrix(0.4, 0.4, 1.0, cfg, upper=False).G
        np.testing.assert_allclose(up, down, rtol=1e-14)

    def test_unit_jump(self, dichroic):
        cfg = self.cfg(dichroic)
        eps = 1e-6
        above = greens_matrix(0.5 + eps, 0.5, 1.0, cfg).dG_dz
        below = greens_matrix(0.5 - eps, 0.5, 1.0, cfg).dG_dz
        np.testing.assert_allclose(above - below, np.eye(2), atol=1e-5)

    def test_helmholtz_away_from_source(self, dichroic):
        cfg = self.cfg(dichroic)
        kappa, zp, h = 1.0, 0.3, 1e-4
        for z in (0.1, 0.7):
            g = [greens_matrix(z + s * h, zp, kappa, cfg).G for s in (-1, 0, 1)]
            residual = (g[0] - 2 * g[1] + g[2]) / h**2 - kappa**2 * g[1]
            assert np.abs(residual).max() < 1e-6

    def test_derivative_wrt_source_point(self, dichroic):
        cfg = self.cfg(dichroic)
        h = 1e-6
        ev = greens_matrix(0.7, 0.3, 1.0, cfg)
        fd = (greens_matrix(0.7, 0.3 + h, 1.0, cfg).G - greens_matrix(0.7, 0.3 - h, 1.0, cfg).G) / (2 * h)
        np.testing.assert_allclose(ev.dG_dzprime, fd, atol=1e-8)

    def test_reciprocity(self, dichroic):
        cfg = self.cfg(dichroic)
        a = greens_matrix(0.7, 0.2, 0.9, cfg).G
        b = greens_matrix(0.2, 0.7, 0.9, cfg).G
        np.testing.assert_allclose(a, b.T, rtol=1e-13)

    def test_diagonal_when_decoupled(self):
        cfg = cavity(LossyPolarizer(0.5), ConstantPair(-0.3, -0.3), gamma=0.0)
        g = greens_matrix(0.6, 0.2, 1.1, cfg).G
        assert g[0, 1] == 0 and g[1, 0] == 0

    def test_interior_only(self):
        with pytest.raises(DomainError):
            greens_matrix(0.0, 0.5, 1.0, cavity(PerfectPolarizer()))


class TestKernel:
    def test_constant(self):
        assert reference_constant() == pytest.approx(-1.0, rel=1e-14)

    def test_aligned(self, dichroic):
        for z in (0.2, 0.5):
            assert oracle_integrand(0.7, cavity(dichroic, gamma=0.0), z) == 0.0

    def test_perfect_two_thirds(self):
        k = oracle_integrand(HALF_KAPPA, cavity(PerfectPolarizer()))
        assert k / reference_constant() == pytest.approx(2 / 3, rel=1e-14)

    def test_z_independent(self, dichroic):
        cfg = cavity(dichroic, LossyPolarizer(0.9), gamma=1.1, L=2.0)
        a = oracle_integrand(1.5, cfg, 0.3)
        b = oracle_integrand(1.5, cfg, 1.9)
        assert a == pytest.approx(b, rel=1e-9)
        assert kernel_spread(5.0, cfg) < 1e-9

    def test_antisymmetric_in_angle(self, dichroic):
        a = oracle_integrand(0.4, cavity(dichroic, gamma=0.5))
        b = oracle_integrand(0.4, cavity(dichroic, gamma=-0.5))
        assert b == pytest.approx(-a, rel=1e-14)

    def test_wall_offset_enforced(self):
        with pytest.raises(DomainError):
            oracle_integrand(1.0, cavity(PerfectPolarizer()), z=1e-9)

    @pytest.mark.parametrize("gamma", [math.pi / 6, math.pi / 4, math.pi / 3])
    @pytest.mark.parametrize("kappa_l", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("family", ["perfect", "lossy", "dichroic"])
    def test_universal_constant(self, gamma, kappa_l, family, dichroic):
        m = {"perfect": PerfectPolarizer(), "lossy": LossyPolarizer(0.8), "dichroic": dichroic}[family]
        cfg = cavity(m, gamma=gamma, L=1.3)
        k = kappa_l / 1.3
        c = oracle_integrand(k, cfg) / integrand(k, cfg)
        assert c == pytest.approx(reference_constant(), rel=1e-8)

    def test_double_precision_would_not_do(self):
        # at kappa L = 10 the construction needs the extra digits
        cfg = cavity(PerfectPolarizer(), gamma=math.pi / 4)
        lo = oracle_integrand(10.0, cfg, dps=15) / integrand(10.0, cfg)
        hi = oracle_integrand(10.0, cfg) / integrand(10.0, cfg)
        assert abs(lo + 1) > abs(hi + 1)


class TestValidate:
    def test_perfect(self):
        rep = validate(cavity(PerfectPolarizer()), [0.1, 1.0, 10.0])
        assert rep.passed and rep.max_deviation <= 1e-8

    def test_dichroic(self, dichroic):
        rep = validate(cavity(dichroic), np.geomspace(1e-2, 10.0, 20))
        assert rep.max_deviation <= 1e-8
        assert len(rep.samples) == 20

    def test_aligned_is_zero(self):
        rep = validate(cavity(LossyPolarizer(0.5), gamma=0.0), [0.5, 2.0])
        assert rep.max_deviation == 0.0

    def test_empty(self):
        with pytest.raises(DomainError):
            validate(cavity(PerfectPolarizer()), [])

    def test_inconsistent_constant(self, monkeypatch):
        good = greens.REFERENCE_POINTS[0]
        bad_cfg = cavity(LossyPolarizer(0.8), gamma=math.pi / 6, L=2.0)
        original = greens.integrand

        def skewed(kappa, cfg):
            value = original(kappa, cfg)
            return value * (1.5 if cfg is bad_cfg else 1.0)

        monkeypatch.setattr(greens, "integrand", skewed)
        monkeypatch.setattr(greens, "REFERENCE_POINTS", (good, (bad_cfg, 0.3)))
        with pytest.raises(InconsistentConstantError):
            reference_constant()
