"""The coupled generator L = -diag(lambda) + K and its exact semigroup.

L is symmetric, so one eigendecomposition L = Q diag(mu) Q^T serves every
downstream need: exact propagation e^{Lt} v, the operator norm e^{mu_1 t},
closed-form observability Gramians, and the left-inverse constant

    zeta(t) = largest constant with  zeta(t) ||v||_omega <= ||e^{Lt} v||_omega

on the truncated span.  zeta is the square root of the smallest generalized
eigenvalue of (e^{Lt})^T M_omega (e^{Lt}) v = theta M_omega v; the subdomain
mass matrix must be safely positive definite for that problem to mean
anything, hence the conditioning gate.  When the float64 generalized solve
cannot resolve theta_min (it sinks below the eps * ||A|| cancellation floor
once t * (lambda_N - lambda_1) is large), the computation escalates to an
adaptive-precision path instead of returning noise.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import _highprec
from .errors import ArgumentError, IllConditionedError, NumericError, OverflowRefusalError

CONDITIONING_GATE = 1e-14
BACKWARD_EXP_GUARD = 700.0
# float64 generalized eigenvalues below this (relative to the largest) are
# cancellation noise, not data
_FLOAT_TRUST_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Generator:
    basis: object
    lmat: np.ndarray = field(repr=False)
    hs_of_k: float


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of the generator, mus descending, eigenvectors in columns."""

    mus: np.ndarray
    modes: np.ndarray = field(repr=False)

    @property
    def n_modes(self):
        return self.mus.size


def assemble_generator(basis, kmat):
    """L = -diag(lambda) + K, exactly symmetric."""
    if kmat.n_modes != basis.n_modes:
        raise ArgumentError(
            f"assemble_generator: kernel matrix is {kmat.n_modes}x{kmat.n_modes} "
            f"but the basis has {basis.n_modes} modes"
        )
    lmat = kmat.matrix.copy()
    lmat[np.diag_indices_from(lmat)] -= basis.lambdas
    return Generator(basis=basis, lmat=lmat, hs_of_k=kmat.hs_of_k)


def decompose(gen):
    """Full symmetric eigendecomposition, mus descending.

    Sign convention: the largest-magnitude entry of each eigenvector is
    positive (first such index on ties), which makes the output reproducible
    across runs.
    """
    try:
        mus, modes = np.linalg.eigh(gen.lmat)
    except np.linalg.LinAlgError as exc:  # not expected for symmetric input
        raise NumericError(f"decompose: eigensolver failed ({exc})") from exc
    mus = mus[::-1].copy()
    modes = modes[:, ::-1].copy()
    for col in range(modes.shape[1]):
        k = int(np.argmax(np.abs(modes[:, col])))
        if modes[k, col] < 0:
            modes[:, col] = -modes[:, col]
    dec = SpectralDecomposition(mus=mus, modes=modes)
    resid = np.max(np.abs(modes @ (mus[:, None] * modes.T) - gen.lmat))
    scale = 1.0 + np.max(np.abs(gen.lmat))
    if resid > 1e-9 * scale:
        raise NumericError(f"decompose: reconstruction residual {resid:.3e} exceeds tolerance")
    return dec


def propagate(dec, state, t):
    """Apply e^{Lt} to a coefficient vector; t = 0 is the identity."""
    if t < 0:
        raise ArgumentError("propagate: t must be >= 0 (use propagate_backward)")
    state = np.asarray(state, dtype=float)
    return dec.modes @ (np.exp(dec.mus * t) * (dec.modes.T @ state))


def propagate_backward(dec, state, t):
    """Apply e^{-Lt}; refuses once t * spread(mu) would overflow exp().

    The left inverse is unbounded in the continuum limit, so an explicit
    refusal beats silently propagating infinities.
    """
    if t < 0:
        raise ArgumentError("propagate_backward: t must be >= 0")
    spread = float(dec.mus[0] - dec.mus[-1])
    if t * spread > BACKWARD_EXP_GUARD:
        raise OverflowRefusalError(
            f"propagate_backward: t * spread(mu) = {t * spread:.1f} exceeds the "
            f"overflow guard {BACKWARD_EXP_GUARD:g}; the backward solve is not "
            "representable at this precision"
        )
    state = np.asarray(state, dtype=float)
    return dec.modes @ (np.exp(-dec.mus * t) * (dec.modes.T @ state))


def semigroup_norm(dec, t):
    """Exact operator norm of e^{Lt} on the truncation: e^{mu_1 t}."""
    if t < 0:
        raise ArgumentError("semigroup_norm: t must be >= 0")
    return float(np.exp(dec.mus[0] * t))


def left_inverse_constant(dec, m_omega, t, gate=CONDITIONING_GATE,
                          with_witness=False, method="auto"):
    """Largest zeta with zeta ||v||_omega <= ||e^{Lt} v||_omega on the span.

    Computed as sqrt of the smallest generalized eigenvalue of
    (e^{Lt})^T M_omega (e^{Lt}) v = theta M_omega v; the returned minimizer
    attains equality.  method is "auto" (escalate to extended precision when
    the float64 eigenvalue is below trust), "float", or "mp".
    """
    if t < 0:
        raise ArgumentError("left_inverse_constant: t must be >= 0")
    m_omega = np.asarray(m_omega, dtype=float)
    n = dec.n_modes
    if m_omega.shape != (n, n):
        raise ArgumentError(
            f"left_inverse_constant: mass matrix shape {m_omega.shape} does not "
            f"match {n} modes"
        )
    w_m = np.linalg.eigvalsh(m_omega)
    if w_m[0] < gate:
        raise IllConditionedError(
            "left_inverse_constant: subdomain mass matrix below the conditioning "
            f"gate {gate:g}; shrink the truncation or enlarge omega",
            eigenvalue=float(w_m[0]),
        )
    if t == 0.0:
        # e^0 = I: every vector attains equality with constant one
        witness = np.zeros(n)
        witness[0] = 1.0
        return (1.0, witness) if with_witness else 1.0

    if method not in ("auto", "float", "mp"):
        raise ArgumentError(f"left_inverse_constant: unknown method {method!r}")

    zeta = None
    witness = None
    if method in ("auto", "float"):
        et = dec.modes @ (np.exp(dec.mus * t)[:, None] * dec.modes.T)
        a = et @ m_omega @ et
        a = (a + a.T) / 2
        try:
            theta, vecs = sla.eigh(a, m_omega)
        except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
            if method == "float":
                raise NumericError(
                    f"left_inverse_constant: generalized eigensolver failed ({exc}); "
                    "use method='mp'"
                ) from exc
            theta = None
        trusted = theta is not None and theta[0] > _FLOAT_TRUST_FLOOR * max(theta[-1], 0.0)
        if trusted or (method == "float" and theta is not None):
            if theta[0] <= 0:
                raise NumericError(
                    "left_inverse_constant: generalized eigenvalue lost to roundoff "
                    f"({theta[0]:.3e}); use method='mp'"
                )
            zeta = float(np.sqrt(theta[0]))
            witness = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
            k = int(np.argmax(np.abs(witness)))
            if witness[k] < 0:
                witness = -witness
    if zeta is None:
        log_zeta, witness = _highprec.generalized_min_eig_mp(dec.mus, dec.modes, m_omega, t)
        if log_zeta < -745.0:
            raise NumericError(
                f"left_inverse_constant: zeta underflows float64 (log zeta = {log_zeta:.1f}); "
                "reduce t or the truncation level"
            )
        zeta = math.exp(log_zeta)
    return (zeta, witness) if with_witness else zeta
