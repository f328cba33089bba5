import numpy as np
import pytest

from nullheat import (Domain, GaussianKernel, assemble_generator, build_basis,
                      decompose, project_kernel, restricted_mass_matrix)


@pytest.fixture
def domain():
    return Domain(length=1.0, omega_lo=0.3, omega_hi=0.8)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture
def stable_pipeline(domain):
    """Gaussian(5, 0.2) coupling at N=16 on the standard window."""
    basis = build_basis(domain, 16)
    kmat = project_kernel(GaussianKernel(5.0, 0.2), basis)
    dec = decompose(assemble_generator(basis, kmat))
    m_omega = restricted_mass_matrix(basis, 0.3, 0.8)
    return basis, kmat, dec, m_omega
