import numpy as np
import pytest

from nullheat import (ArgumentError, Domain, GaussianKernel, ZeroKernel,
                      assemble_generator, build_basis, control_cost, decompose,
                      hum_control, lr_staged_control, observability_cost,
                      observability_gramian, project_kernel, propagate,
                      restricted_mass_matrix, simulate_controlled)


def _dec(domain, kernel, n):
    basis = build_basis(domain, n)
    return basis, decompose(assemble_generator(basis, project_kernel(kernel, basis)))


class TestHumControl:
    def test_zero_initial_state(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        res = hum_control(dec, m_omega, np.zeros(16), 0.5, nt=32)
        assert res.cost_sq == 0.0
        assert res.terminal_residual == 0.0
        assert np.max(np.abs(res.control_coeffs)) == 0.0

    def test_scalar_closed_form(self):
        # single mode, full window: p = -e^{-lam T} u0 / g with
        # g = (1 - e^{-2 lam T}) / (2 lam), and cost = kappa_T u0^2
        domain = Domain(1.0, 0.0, 1.0)
        basis, dec = _dec(domain, ZeroKernel(), 1)
        m_omega = restricted_mass_matrix(basis, 0.0, 1.0)
        T, u0 = 0.3, np.array([2.0])
        lam = np.pi ** 2
        g = (1 - np.exp(-2 * lam * T)) / (2 * lam)
        res = hum_control(dec, m_omega, u0, T, nt=16)
        assert res.multiplier[0] == pytest.approx(-np.exp(-lam * T) * 2.0 / g,
                                                  rel=1e-12)
        kappa = observability_cost(dec, m_omega, T).kappa
        assert res.cost_sq == pytest.approx(kappa * 4.0, rel=1e-10)

    def test_exact_null_identity(self, stable_pipeline, rng):
        basis, _, dec, m_omega = stable_pipeline
        u0 = rng.standard_normal(16)
        T = 0.5
        res = hum_control(dec, m_omega, u0, T, nt=32)
        G = observability_gramian(dec, m_omega, T)
        p = np.asarray(res.multiplier)
        terminal = propagate(dec, u0, T) + G @ p
        assert np.linalg.norm(terminal) <= 1e-8 * np.linalg.norm(u0)
        assert res.terminal_residual <= 1e-8

    def test_control_profile_endpoints(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        u0 = np.eye(16)[0]
        T = 0.5
        res = hum_control(dec, m_omega, u0, T, nt=32)
        p = np.asarray(res.multiplier)
        assert np.allclose(res.control_coeffs[-1], p, rtol=1e-12)
        assert np.allclose(res.control_coeffs[0], propagate(dec, p, T), rtol=1e-9)

    def test_nullcond_inequality_random(self, stable_pipeline, rng):
        _, _, dec, m_omega = stable_pipeline
        T = 0.5
        kappa = observability_cost(dec, m_omega, T).kappa
        for _ in range(20):
            u0 = rng.standard_normal(16)
            res = hum_control(dec, m_omega, u0, T, nt=16)
            assert res.cost_sq <= kappa * float(u0 @ u0) * (1 + 1e-6)

    def test_linearity_and_homogeneity(self, stable_pipeline, rng):
        _, _, dec, m_omega = stable_pipeline
        u = rng.standard_normal(16)
        v = rng.standard_normal(16)
        a, b = 0.7, -1.3
        cu = hum_control(dec, m_omega, u, 0.4, nt=32)
        cv = hum_control(dec, m_omega, v, 0.4, nt=32)
        cw = hum_control(dec, m_omega, a * u + b * v, 0.4, nt=32)
        assert np.max(np.abs(cw.control_coeffs
                             - a * cu.control_coeffs - b * cv.control_coeffs)) <= 1e-9
        c2 = hum_control(dec, m_omega, 2 * u, 0.4, nt=32)
        assert c2.cost_sq == pytest.approx(4 * cu.cost_sq, rel=1e-12)

    def test_ridge_validation(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        with pytest.raises(ArgumentError):
            hum_control(dec, m_omega, np.ones(16), 0.5, nt=32, ridge=-1e-9)
        with pytest.raises(ArgumentError):
            hum_control(dec, m_omega, np.ones(16), 0.5, nt=8)
        with pytest.raises(ArgumentError):
            hum_control(dec, m_omega, np.ones(16), -0.5, nt=32)

    def test_explicit_ridge_shrinks_cost(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        u0 = np.eye(16)[0]
        exact = hum_control(dec, m_omega, u0, 0.5, nt=32, ridge=0.0)
        ridged = hum_control(dec, m_omega, u0, 0.5, nt=32, ridge=1e-6)
        assert ridged.cost_sq < exact.cost_sq
        assert ridged.ridge_used == 1e-6


class TestSimulateControlled:
    def test_free_decay_matches_propagate(self, stable_pipeline, rng):
        _, _, dec, m_omega = stable_pipeline
        u0 = rng.standard_normal(16)
        T = 0.4
        zero_ctrl = np.zeros((65, 16))
        sim = simulate_controlled(dec, m_omega, u0, zero_ctrl, T, nt_fine=257)
        for idx in (0, 64, 128, 256):
            t = sim.times[idx]
            assert np.allclose(sim.states[idx], propagate(dec, u0, t), atol=1e-10)
        assert sim.terminal_norm == pytest.approx(
            np.linalg.norm(propagate(dec, u0, T)), abs=1e-10)

    def test_single_mode_free_decay_norm(self, domain):
        basis, dec = _dec(domain, ZeroKernel(), 8)
        m_omega = restricted_mass_matrix(basis, 0.3, 0.8)
        u0 = np.eye(8)[0]
        T = 0.5
        sim = simulate_controlled(dec, m_omega, u0, np.zeros((33, 8)), T, nt_fine=129)
        assert sim.terminal_norm == pytest.approx(np.exp(-np.pi ** 2 * T), abs=1e-10)

    def test_confirms_hum_terminal_state(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        u0 = np.eye(16)[0]
        T = 0.5
        res = hum_control(dec, m_omega, u0, T, nt=2049)
        sim = simulate_controlled(dec, m_omega, u0, res.control_coeffs, T,
                                  nt_fine=8193)
        assert abs(sim.terminal_norm - res.terminal_residual) <= 1e-5

    def test_grid_refinement_contract(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        with pytest.raises(ArgumentError):
            simulate_controlled(dec, m_omega, np.ones(16), np.zeros((33, 16)),
                                0.5, nt_fine=100)


class TestStagedControl:
    def test_low_modes_annihilated_exactly(self, domain):
        # initial state inside the first cutoff: stage 0 finishes the job
        u0 = np.array([1.0])
        res = lr_staged_control(domain, ZeroKernel(), u0, T=1.0, stages=2,
                                r0=np.pi ** 2, n_modes=8, nt=65)
        assert res.stage_log[0].lowmode_after_active <= 1e-10
        assert res.terminal_residual <= 1e-8

    @pytest.mark.parametrize("kernel", [ZeroKernel(), GaussianKernel(5.0, 0.2)],
                             ids=["zero", "gaussian"])
    def test_staged_sixteen_modes(self, domain, kernel):
        u0 = np.ones(16) / 4.0
        res = lr_staged_control(domain, kernel, u0, T=1.0, stages=4,
                                r0=np.pi ** 2, n_modes=16, nt=1025)
        residuals = [s.residual_after_passive for s in res.stage_log]
        assert all(b < a for a, b in zip([1.0] + residuals[:-1], residuals))
        assert all(s.lowmode_after_active <= 1e-8 for s in res.stage_log)
        assert res.terminal_residual <= 1e-3
        assert res.cost_sq > 0 and np.isfinite(res.cost_sq)

    def test_schedule_geometry(self, domain):
        res = lr_staged_control(domain, ZeroKernel(), np.ones(8) / 8, T=1.0,
                                stages=3, r0=np.pi ** 2, n_modes=8, nt=65)
        for k, stage in enumerate(res.stage_log):
            assert stage.t_end - stage.t_start == pytest.approx(2.0 ** -(k + 1))
            assert stage.t_mid == pytest.approx((stage.t_start + stage.t_end) / 2)
            assert stage.r_k == pytest.approx(np.pi ** 2 * 4.0 ** k)
        assert res.stage_log[-1].t_end == pytest.approx(1.0 - 2.0 ** -3)

    def test_passive_half_exact_decay_zero_kernel(self, domain, rng):
        basis, dec = _dec(domain, ZeroKernel(), 12)
        v = rng.standard_normal(12)
        half = 0.125
        w = propagate(dec, v, half)
        assert np.max(np.abs(w - v * np.exp(-basis.lambdas * half))) <= 1e-10

    def test_cost_comparable_to_one_shot(self, domain):
        u0 = np.ones(16) / 4.0
        staged = lr_staged_control(domain, GaussianKernel(5.0, 0.2), u0, T=1.0,
                                   stages=4, r0=np.pi ** 2, n_modes=16, nt=257)
        basis, dec = _dec(domain, GaussianKernel(5.0, 0.2), 16)
        m_omega = restricted_mass_matrix(basis, 0.3, 0.8)
        one_shot = hum_control(dec, m_omega, u0, 1.0, nt=257)
        assert one_shot.cost_sq <= staged.cost_sq  # minimal-energy is minimal

    def test_argument_validation(self, domain):
        with pytest.raises(ArgumentError):
            lr_staged_control(domain, ZeroKernel(), np.ones(4), T=1.0, stages=1,
                              r0=np.pi ** 2)
        with pytest.raises(ArgumentError):
            lr_staged_control(domain, ZeroKernel(), np.ones(4), T=1.0, stages=2,
                              r0=1.0)
        with pytest.raises(ArgumentError):
            lr_staged_control(domain, ZeroKernel(), np.ones(8), T=1.0, stages=2,
                              r0=np.pi ** 2, n_modes=4)


class TestControlCost:
    def test_zero_control(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        res = hum_control(dec, m_omega, np.zeros(16), 0.5, nt=32)
        assert control_cost(res, m_omega, dec) == 0.0

    def test_matches_closed_form(self, stable_pipeline, rng):
        _, _, dec, m_omega = stable_pipeline
        u0 = rng.standard_normal(16)
        res = hum_control(dec, m_omega, u0, 0.5, nt=32)
        requad = control_cost(res, m_omega, dec)
        assert requad == pytest.approx(res.cost_sq, rel=1e-6)

    def test_staged_cost_requadrature(self, domain):
        u0 = np.ones(12) / np.sqrt(12)
        res = lr_staged_control(domain, GaussianKernel(5.0, 0.2), u0, T=1.0,
                                stages=3, r0=np.pi ** 2, n_modes=12, nt=257)
        basis, dec = _dec(domain, GaussianKernel(5.0, 0.2), 12)
        m_omega = restricted_mass_matrix(basis, 0.3, 0.8)
        requad = control_cost(res, m_omega, dec)
        assert requad == pytest.approx(res.cost_sq, rel=1e-6)


class TestUnstableKernel:
    def test_uncontrolled_grows_controlled_dies(self, domain):
        basis, dec = _dec(domain, GaussianKernel(20.0, 0.15), 32)
        assert dec.mus[0] > 0
        m_omega = restricted_mass_matrix(basis, 0.3, 0.8)
        u0 = np.eye(32)[0]
        T = 0.5
        assert np.linalg.norm(propagate(dec, u0, T)) > 1.0
        res = hum_control(dec, m_omega, u0, T, nt=64)
        assert res.terminal_residual <= 1e-6
