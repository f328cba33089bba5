"""Extended-precision helpers (mpmath) for quantities below the float64 floor.

Two such quantities arise: the smallest eigenvalue of the restricted Gram
matrix (decays like exp(-c n) and crosses 1e-16 near n ~ 20) and the
left-inverse constant zeta(t) (decays like exp(-lambda_N t)).  Both are
well-defined positive numbers that double precision cannot resolve through
the eps * ||A|| cancellation floor, so they are computed here at adaptive
working precision from closed-form or float-exact inputs.
"""

import numpy as np
import mpmath as mp

from .errors import NumericError


def mass_matrix_mp(n, lo, hi, ell, dps=50):
    """Restricted Gram matrix with entries evaluated in mp arithmetic."""
    with mp.workdps(dps):
        lo_ = mp.mpf(lo)
        hi_ = mp.mpf(hi)
        l_ = mp.mpf(ell)
        M = mp.matrix(n, n)
        for i in range(n):
            m = i + 1
            M[i, i] = (hi_ - lo_) / l_ - (
                mp.sin(2 * m * mp.pi * hi_ / l_) - mp.sin(2 * m * mp.pi * lo_ / l_)
            ) / (2 * m * mp.pi)
            for j in range(i + 1, n):
                nn = j + 1
                val = (
                    (mp.sin((m - nn) * mp.pi * hi_ / l_) - mp.sin((m - nn) * mp.pi * lo_ / l_)) / (m - nn)
                    - (mp.sin((m + nn) * mp.pi * hi_ / l_) - mp.sin((m + nn) * mp.pi * lo_ / l_)) / (m + nn)
                ) / mp.pi
                M[i, j] = val
                M[j, i] = val
        return M


def _solve_lower(L, b):
    n = L.rows
    y = mp.matrix(n, 1)
    for i in range(n):
        s = b[i]
        for k in range(i):
            s -= L[i, k] * y[k]
        y[i] = s / L[i, i]
    return y


def _solve_upper_t(L, y):
    # solves L^T x = y with L lower triangular
    n = L.rows
    x = mp.matrix(n, 1)
    for i in range(n - 1, -1, -1):
        s = y[i]
        for k in range(i + 1, n):
            s -= L[k, i] * x[k]
        x[i] = s / L[i, i]
    return x


def smallest_eigenpair_mp(M, dps=50, max_iter=200, start=None):
    """Smallest eigenpair of an SPD mp matrix by Cholesky + inverse iteration.

    Converges geometrically at the ratio of the two smallest eigenvalues,
    which for the restricted Gram blocks is ~0.13 per sweep.  Returns
    (eigenvalue as mpf, eigenvector as unit float64 array).
    """
    with mp.workdps(dps):
        n = M.rows
        try:
            C = mp.cholesky(M)
        except ValueError as exc:
            raise NumericError(f"smallest_eigenpair_mp: Cholesky failed ({exc})") from exc
        if start is not None and np.all(np.isfinite(start)):
            v = mp.matrix([mp.mpf(float(s)) for s in start])
        else:
            v = mp.matrix([mp.mpf(1) for _ in range(n)])
        v /= mp.norm(v)
        lam_old = None
        lam = None
        for _ in range(max_iter):
            y = _solve_lower(C, v)
            x = _solve_upper_t(C, y)
            v = x / mp.norm(x)
            lam = (v.T * (M * v))[0]
            if lam_old is not None and abs(lam - lam_old) <= mp.mpf(10) ** (-dps + 12) * abs(lam):
                break
            lam_old = lam
        vec = np.array([float(v[i]) for i in range(n)])
        # deterministic sign: largest-magnitude entry positive
        k = int(np.argmax(np.abs(vec)))
        if vec[k] < 0:
            vec = -vec
        return lam, vec


def rayleigh_quotient_mp(n, lo, hi, ell, coeffs, dps=50):
    """(c^T M c) / (c^T c) with the Gram matrix entries evaluated in mp.

    Used to verify witness identities whose scale is below the float64
    quadratic-form rounding floor.
    """
    with mp.workdps(dps):
        M = mass_matrix_mp(n, lo, hi, ell, dps=dps)
        c = mp.matrix([mp.mpf(float(x)) for x in coeffs])
        num = (c.T * (M * c))[0]
        den = (c.T * c)[0]
        return num / den


def generalized_min_eig_mp(mus, modes, m_omega, t, dps=None):
    """Smallest generalized eigenvalue of (E M E) v = theta M v, E = exp(L t).

    mus and modes are the float64 eigendecomposition of the generator,
    treated as exact; m_omega must be SPD at float64 entry precision.
    Working precision adapts to the dynamic range 2 t (mu_max - mu_min).
    Returns (log(theta)/2 as float, theta as mpf context-free string-safe).
    """
    spread = 2.0 * t * float(mus[0] - mus[-1])
    if dps is None:
        dps = int(max(40, spread / np.log(10.0) + 30))
    n = len(mus)
    with mp.workdps(dps):
        Q = mp.matrix(n, n)
        M = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                Q[i, j] = mp.mpf(float(modes[i, j]))
                M[i, j] = mp.mpf(float(m_omega[i, j]))
        D = mp.diag([mp.e ** (mp.mpf(float(mus[i])) * mp.mpf(t)) for i in range(n)])
        E = Q * D * Q.T
        A = E * M * E
        try:
            C = mp.cholesky(M)
        except ValueError as exc:
            raise NumericError(
                "generalized_min_eig_mp: subdomain mass matrix not positive-definite "
                f"at working precision ({exc})"
            ) from exc
        Ci = C ** -1
        S = Ci * A * Ci.T
        S = (S + S.T) / 2
        w, V = mp.eigsy(S)
        kmin = min(range(n), key=lambda i: w[i])
        theta = w[kmin]
        if theta <= 0:
            raise NumericError(
                "generalized_min_eig_mp: nonpositive eigenvalue at working precision; "
                f"increase dps (got {float(theta):.3e} at dps={dps})"
            )
        log_zeta = float(mp.log(theta) / 2)
        # witness in original coordinates: v = C^{-T} y
        y = mp.matrix([V[i, kmin] for i in range(n)])
        v = _solve_upper_t(C, y)
        vec = np.array([float(v[i]) for i in range(n)])
        nrm = np.linalg.norm(vec)
        if nrm > 0 and np.isfinite(nrm):
            vec = vec / nrm
        k = int(np.argmax(np.abs(vec)))
        if vec[k] < 0:
            vec = -vec
        return log_zeta, vec
