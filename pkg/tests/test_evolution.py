import numpy as np
import pytest

from nullheat import (ArgumentError, Domain, GaussianKernel, IllConditionedError,
                      KernelMatrix, OverflowRefusalError, SeparableKernel,
                      ZeroKernel, assemble_generator, build_basis, decompose,
                      left_inverse_constant, project_kernel, propagate,
                      propagate_backward, restricted_mass_matrix, semigroup_norm)
from nullheat import oracles
from nullheat.bundled import bundled_kernels


def _dec(domain, kernel, n):
    basis = build_basis(domain, n)
    kmat = project_kernel(kernel, basis)
    return basis, kmat, decompose(assemble_generator(basis, kmat))


class TestAssemble:
    def test_zero_kernel_diagonal(self):
        basis = build_basis(Domain(np.pi, 1.0, 2.0), 3)
        gen = assemble_generator(basis, project_kernel(ZeroKernel(), basis))
        assert np.array_equal(gen.lmat, np.diag([-1.0, -4.0, -9.0]))

    def test_rank_one_shift(self, domain):
        basis = build_basis(domain, 4)
        kmat = project_kernel(SeparableKernel(np.array([1.0]), np.array([1.0])), basis)
        gen = assemble_generator(basis, kmat)
        assert gen.lmat[0, 0] == pytest.approx(-np.pi ** 2 + 1.0, abs=1e-12)
        assert gen.lmat[1, 1] == pytest.approx(-4 * np.pi ** 2, abs=1e-12)

    def test_symmetric_exactly(self, domain):
        basis = build_basis(domain, 12)
        gen = assemble_generator(basis, project_kernel(GaussianKernel(5.0, 0.2), basis))
        assert np.array_equal(gen.lmat, gen.lmat.T)

    def test_diagonal_dominated_by_shift(self, domain):
        basis = build_basis(domain, 16)
        kmat = project_kernel(GaussianKernel(5.0, 0.2), basis)
        gen = assemble_generator(basis, kmat)
        assert np.all(np.diag(gen.lmat) <= -basis.lambdas + gen.hs_of_k + 1e-12)

    def test_dimension_mismatch(self, domain):
        basis = build_basis(domain, 8)
        kmat = project_kernel(ZeroKernel(), build_basis(domain, 4))
        with pytest.raises(ArgumentError):
            assemble_generator(basis, kmat)


class TestDecompose:
    def test_zero_kernel(self, domain):
        basis, _, dec = _dec(domain, ZeroKernel(), 6)
        assert np.allclose(dec.mus, -basis.lambdas, atol=1e-12)
        assert np.allclose(np.abs(dec.modes), np.eye(6), atol=1e-12)

    def test_rank_one_invariant_subspace(self, domain):
        basis, _, dec = _dec(domain, SeparableKernel(np.array([1.0]), np.array([1.0])), 5)
        assert dec.mus[0] == pytest.approx(-np.pi ** 2 + 1.0, abs=1e-12)
        assert abs(dec.modes[0, 0]) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonality_and_reconstruction(self, domain):
        basis, kmat, dec = _dec(domain, GaussianKernel(5.0, 0.2), 16)
        assert np.max(np.abs(dec.modes.T @ dec.modes - np.eye(16))) <= 1e-10
        gen = assemble_generator(basis, kmat)
        rec = dec.modes @ (dec.mus[:, None] * dec.modes.T)
        assert np.max(np.abs(rec - gen.lmat)) <= 1e-9 * (1 + np.max(np.abs(gen.lmat)))

    def test_weyl_bound_random_symmetric(self, domain, rng):
        basis = build_basis(domain, 10)
        K = rng.standard_normal((10, 10))
        K = (K + K.T) / 2
        K *= 2.0 / np.linalg.norm(K)
        kmat = KernelMatrix(n_modes=10, matrix=K, hs_of_k=2.0)
        dec = decompose(assemble_generator(basis, kmat))
        assert np.max(np.abs(dec.mus + basis.lambdas)) <= 2.0 + 1e-10

    def test_deterministic_sign_convention(self, domain):
        basis, _, dec1 = _dec(domain, GaussianKernel(5.0, 0.2), 12)
        _, _, dec2 = _dec(domain, GaussianKernel(5.0, 0.2), 12)
        assert np.array_equal(dec1.modes, dec2.modes)
        for col in range(12):
            k = np.argmax(np.abs(dec1.modes[:, col]))
            assert dec1.modes[k, col] > 0


class TestPropagate:
    def test_t_zero_identity(self, domain, rng):
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 8)
        v = rng.standard_normal(8)
        assert np.linalg.norm(propagate(dec, v, 0.0) - v) <= 1e-12

    def test_single_mode_decay(self, domain):
        _, _, dec = _dec(domain, ZeroKernel(), 4)
        e1 = np.array([1.0, 0, 0, 0])
        out = propagate(dec, e1, 0.3)
        assert out[0] == pytest.approx(np.exp(-np.pi ** 2 * 0.3), rel=1e-13)
        assert np.max(np.abs(out[1:])) <= 1e-15

    def test_crank_nicolson_oracle(self, domain, rng):
        for name, kernel in bundled_kernels():
            basis, kmat, dec = _dec(domain, kernel, 16)
            gen = assemble_generator(basis, kmat)
            v = rng.standard_normal(16)
            exact = propagate(dec, v, 0.1)
            cn = oracles.crank_nicolson_propagate(gen.lmat, v, 0.1, steps=10_000)
            rel = np.linalg.norm(exact - cn) / np.linalg.norm(exact)
            assert rel <= 1e-6, name

    def test_semigroup_law(self, domain, rng):
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 16)
        v = rng.standard_normal(16)
        for s in (0.01, 0.1, 1.0):
            for t in (0.01, 0.1, 1.0):
                lhs = propagate(dec, v, s + t)
                rhs = propagate(dec, propagate(dec, v, s), t)
                assert np.linalg.norm(lhs - rhs) <= 1e-9 * np.linalg.norm(lhs)

    def test_negative_t_rejected(self, domain):
        _, _, dec = _dec(domain, ZeroKernel(), 4)
        with pytest.raises(ArgumentError):
            propagate(dec, np.ones(4), -0.1)


class TestPropagateBackward:
    def test_t_zero_identity(self, domain, rng):
        _, _, dec = _dec(domain, ZeroKernel(), 4)
        v = rng.standard_normal(4)
        assert np.array_equal(propagate_backward(dec, v, 0.0), v)

    def test_single_mode_growth(self, domain):
        _, _, dec = _dec(domain, ZeroKernel(), 4)
        e1 = np.array([1.0, 0, 0, 0])
        out = propagate_backward(dec, e1, 0.2)
        assert out[0] == pytest.approx(np.exp(np.pi ** 2 * 0.2), rel=1e-13)

    def test_roundtrip(self, domain, rng):
        # guarantee region: t * spread(mu) <= 30
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 6)
        v = rng.standard_normal(6)
        w = propagate(dec, propagate_backward(dec, v, 0.05), 0.05)
        assert np.linalg.norm(w - v) <= 1e-8 * np.linalg.norm(v)

    def test_overflow_guard(self, domain):
        _, _, dec = _dec(domain, ZeroKernel(), 16)
        with pytest.raises(OverflowRefusalError):
            propagate_backward(dec, np.ones(16), 1.0)


class TestSemigroupNorm:
    def test_t_zero_is_one(self, domain):
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 8)
        assert semigroup_norm(dec, 0.0) == 1.0

    def test_zero_kernel_decay(self, domain):
        _, _, dec = _dec(domain, ZeroKernel(), 8)
        assert semigroup_norm(dec, 0.7) == pytest.approx(np.exp(-np.pi ** 2 * 0.7),
                                                         rel=1e-13)

    def test_growth_bound_all_kernels(self, domain):
        lam1 = np.pi ** 2
        for name, kernel in bundled_kernels():
            basis, kmat, dec = _dec(domain, kernel, 32)
            for t in np.linspace(0.1, 5.0, 50):
                bound = np.exp((-lam1 + kmat.hs_of_k) * t) * (1 + 1e-10)
                assert semigroup_norm(dec, t) <= bound, (name, t)


class TestLeftInverseConstant:
    def test_identity_at_zero(self, stable_pipeline):
        _, _, dec, m_omega = stable_pipeline
        assert left_inverse_constant(dec, m_omega, 0.0) == 1.0

    def test_full_window_zero_kernel(self):
        domain = Domain(1.0, 0.0, 1.0)
        _, _, dec = _dec(domain, ZeroKernel(), 5)
        m_omega = restricted_mass_matrix(build_basis(domain, 5), 0.0, 1.0)
        t = 0.02
        zeta = left_inverse_constant(dec, m_omega, t)
        assert zeta == pytest.approx(np.exp(-25 * np.pi ** 2 * t), rel=1e-10)

    def test_witness_attains_equality(self, domain):
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 8)
        m_omega = restricted_mass_matrix(build_basis(domain, 8), 0.3, 0.8)
        t = 0.01
        zeta, witness = left_inverse_constant(dec, m_omega, t, with_witness=True)
        et = dec.modes @ (np.exp(dec.mus * t)[:, None] * dec.modes.T)
        num = np.sqrt((et @ witness) @ m_omega @ (et @ witness))
        den = np.sqrt(witness @ m_omega @ witness)
        assert num / den == pytest.approx(zeta, rel=1e-6)

    def test_random_vector_inequality(self, domain, rng):
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 8)
        m_omega = restricted_mass_matrix(build_basis(domain, 8), 0.3, 0.8)
        for t in (0.01, 0.1):
            zeta = left_inverse_constant(dec, m_omega, t)
            assert zeta > 0.0
            V = rng.standard_normal((100, 8))
            et = dec.modes @ (np.exp(dec.mus * t)[:, None] * dec.modes.T)
            EV = V @ et.T
            lhs = zeta * np.sqrt(np.einsum("ij,jk,ik->i", V, m_omega, V))
            rhs = np.sqrt(np.einsum("ij,jk,ik->i", EV, m_omega, EV))
            assert np.all(lhs <= rhs + 1e-10)

    def test_sampled_oracle_bounds_from_above(self, domain, rng):
        # the sampled minimum can only sit above the true constant; it gets
        # close when the generalized spectrum is not too spread (small t),
        # while at larger t exponential gaps keep random search far away
        basis = build_basis(domain, 4)
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 4)
        m_omega = restricted_mass_matrix(basis, 0.3, 0.8)
        zeta = left_inverse_constant(dec, m_omega, 0.01)
        sampled = oracles.sampled_min_quotient(dec, m_omega, 0.01, 100_000, rng)
        assert zeta <= sampled * (1 + 1e-10)
        assert sampled <= zeta * 1.02

    def test_sampled_oracle_inequality_deep(self, domain, rng):
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 8)
        m_omega = restricted_mass_matrix(build_basis(domain, 8), 0.3, 0.8)
        zeta = left_inverse_constant(dec, m_omega, 0.1)
        sampled = oracles.sampled_min_quotient(dec, m_omega, 0.1, 100_000, rng)
        assert zeta <= sampled * (1 + 1e-10)

    def test_extended_precision_matches_float_region(self, domain):
        # where float64 is trustworthy the two paths must agree
        _, _, dec = _dec(domain, GaussianKernel(5.0, 0.2), 6)
        m_omega = restricted_mass_matrix(build_basis(domain, 6), 0.3, 0.8)
        t = 0.005
        z_float = left_inverse_constant(dec, m_omega, t, method="float")
        z_mp = left_inverse_constant(dec, m_omega, t, method="mp")
        assert z_mp == pytest.approx(z_float, rel=1e-8)

    def test_conditioning_gate(self, domain):
        _, _, dec = _dec(domain, ZeroKernel(), 32)
        m_omega = restricted_mass_matrix(build_basis(domain, 32), 0.3, 0.8)
        with pytest.raises(IllConditionedError) as err:
            left_inverse_constant(dec, m_omega, 0.1)
        assert err.value.eigenvalue is not None
        assert err.value.eigenvalue < 1e-14
