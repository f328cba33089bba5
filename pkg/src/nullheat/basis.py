"""Dirichlet sine eigenbasis on an interval, restricted Gram matrices, quadrature.

Everything downstream is built on the analytic eigenpairs of -d^2/dx^2 with
zero boundary values on (0, ell):

    lambda_j = ((j+1) pi / ell)^2,   psi_j(x) = sqrt(2/ell) sin((j+1) pi x / ell)

with 0-based mode index j.  The Gram (mass) matrix of the eigenfunctions
restricted to a subinterval is assembled from the closed-form antiderivatives
of sine products; composite Gauss-Legendre quadrature is provided separately
and serves as the independent cross-check of those closed forms.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ArgumentError

SUPPORTED_QUADRATURE_ORDERS = (2, 4, 8, 16, 32, 64)

_GL_NODES = {order: leggauss(order) for order in SUPPORTED_QUADRATURE_ORDERS}


@dataclass(frozen=True)
class Domain:
    """Interval Omega = (0, length) with control subinterval omega = (omega_lo, omega_hi).

    omega may touch the boundary of Omega; that is flagged rather than
    rejected, since the restricted Gram matrix is insensitive to boundary
    contact in one dimension.
    """

    length: float
    omega_lo: float
    omega_hi: float

    def __post_init__(self):
        if not (np.isfinite(self.length) and self.length > 0):
            raise ArgumentError(f"Domain: length must be positive and finite, got {self.length}")
        if not (np.isfinite(self.omega_lo) and np.isfinite(self.omega_hi)):
            raise ArgumentError("Domain: omega endpoints must be finite")
        if not (0.0 <= self.omega_lo < self.omega_hi <= self.length):
            raise ArgumentError(
                f"Domain: need 0 <= omega_lo < omega_hi <= length, got "
                f"({self.omega_lo}, {self.omega_hi}) in (0, {self.length})"
            )

    @property
    def omega(self):
        return (self.omega_lo, self.omega_hi)

    @property
    def omega_touches_boundary(self):
        """True when omega is not compactly contained in Omega."""
        return self.omega_lo == 0.0 or self.omega_hi == self.length


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """First n_modes Dirichlet eigenpairs on a domain, plus quadrature default."""

    domain: Domain
    n_modes: int
    lambdas: np.ndarray = field(repr=False)
    quadrature_order: int = 8


def build_basis(domain, n_modes, quadrature_order=8):
    """Return the basis of the first n_modes analytic Dirichlet eigenpairs.

    Parameters
    ----------
    domain : Domain
    n_modes : int
        Truncation level N >= 1.
    quadrature_order : int
        Default Gauss-Legendre order used by consumers of this basis.
    """
    if not isinstance(n_modes, (int, np.integer)) or n_modes < 1:
        raise ArgumentError(f"build_basis: n_modes must be a positive integer, got {n_modes!r}")
    if quadrature_order not in SUPPORTED_QUADRATURE_ORDERS:
        raise ArgumentError(
            f"build_basis: quadrature order {quadrature_order} not in {SUPPORTED_QUADRATURE_ORDERS}"
        )
    j = np.arange(1, int(n_modes) + 1, dtype=float)
    lambdas = (j * np.pi / domain.length) ** 2
    return SpectralBasis(domain=domain, n_modes=int(n_modes), lambdas=lambdas,
                         quadrature_order=quadrature_order)


def eval_mode(basis, j, x):
    """Evaluate the j-th (0-based) eigenfunction at x (scalar or array).

    psi_j(x) = sqrt(2/ell) sin((j+1) pi x / ell); x must lie in [0, ell].
    """
    if not (0 <= j < basis.n_modes):
        raise ArgumentError(f"eval_mode: mode index {j} out of range [0, {basis.n_modes})")
    x = np.asarray(x, dtype=float)
    ell = basis.domain.length
    if np.any(x < 0.0) or np.any(x > ell):
        raise ArgumentError(f"eval_mode: x outside [0, {ell}]")
    out = np.sqrt(2.0 / ell) * np.sin((j + 1) * np.pi * x / ell)
    return float(out) if out.ndim == 0 else out


def restricted_mass_matrix(basis, lo, hi):
    """Gram matrix M[i, j] = int_lo^hi psi_i psi_j dx, by closed form.

    The i == j and i != j branches use the sine-product antiderivatives

        int psi_m^2        = x/ell - sin(2 m pi x / ell) / (2 m pi)
        int psi_m psi_n    = [sin((m-n) pi x / ell)/(m-n)
                              - sin((m+n) pi x / ell)/(m+n)] / pi

    (1-based mode numbers m, n).  No quadrature is involved; quadrature is
    the cross-check, not the source of truth, because downstream constants
    hinge on eigenvalues of this matrix that are many orders below 1.

    Returns a symmetric n_modes x n_modes array with spectrum in [0, 1].
    """
    ell = basis.domain.length
    if not (0.0 <= lo < hi <= ell):
        raise ArgumentError(
            f"restricted_mass_matrix: need 0 <= lo < hi <= {ell}, got ({lo}, {hi})"
        )
    n = basis.n_modes
    M = np.empty((n, n))
    for i in range(n):
        m = i + 1
        # diagonal
        M[i, i] = (hi - lo) / ell - (
            np.sin(2 * m * np.pi * hi / ell) - np.sin(2 * m * np.pi * lo / ell)
        ) / (2 * m * np.pi)
        for j in range(i + 1, n):
            nn = j + 1
            val = (
                (np.sin((m - nn) * np.pi * hi / ell) - np.sin((m - nn) * np.pi * lo / ell)) / (m - nn)
                - (np.sin((m + nn) * np.pi * hi / ell) - np.sin((m + nn) * np.pi * lo / ell)) / (m + nn)
            ) / np.pi
            M[i, j] = val
            M[j, i] = val
    return M


def gauss_quadrature(f, lo, hi, panels, order):
    """Composite Gauss-Legendre approximation of int_lo^hi f(x) dx.

    f is called once per panel on the array of mapped nodes and may return
    either an array of node values or a scalar per node.  Exact for
    polynomials of degree <= 2*order - 1 on each panel, up to roundoff.
    """
    if order not in SUPPORTED_QUADRATURE_ORDERS:
        raise ArgumentError(
            f"gauss_quadrature: order {order} not in {SUPPORTED_QUADRATURE_ORDERS}"
        )
    if not lo < hi:
        raise ArgumentError(f"gauss_quadrature: need lo < hi, got ({lo}, {hi})")
    if panels < 1:
        raise ArgumentError(f"gauss_quadrature: panels must be >= 1, got {panels}")
    nodes, weights = _GL_NODES[order]
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        x = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        total += 0.5 * (b - a) * float(np.sum(weights * np.asarray(f(x), dtype=float)))
    return total


def composite_gauss_nodes(lo, hi, panels, order):
    """Nodes and weights of the composite rule, concatenated across panels."""
    if order not in SUPPORTED_QUADRATURE_ORDERS:
        raise ArgumentError(
            f"composite_gauss_nodes: order {order} not in {SUPPORTED_QUADRATURE_ORDERS}"
        )
    nodes, weights = _GL_NODES[order]
    edges = np.linspace(lo, hi, panels + 1)
    xs = []
    ws = []
    for a, b in zip(edges[:-1], edges[1:]):
        xs.append(0.5 * (b - a) * nodes + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * weights)
    return np.concatenate(xs), np.concatenate(ws)


def panels_for_mode(basis, lo, hi, max_mode=None):
    """Panel count so each panel spans at most half a wavelength of the
    highest mode involved (wavelength of 1-based mode m is 2*ell/m)."""
    ell = basis.domain.length
    m = basis.n_modes if max_mode is None else max_mode
    half_wave = ell / m
    return max(1, int(np.ceil((hi - lo) / half_wave)))
