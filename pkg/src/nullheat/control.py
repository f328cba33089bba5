"""Null-control synthesis: one-shot minimum-energy control and staged control.

The one-shot route solves the Gramian equation

    (G_T + eps I) p = -e^{LT} u0,

after which the control at time s has spectral coefficients e^{L(T-s)} p
(the physical control is its omega-restriction) and the terminal state is
available in closed form, u(T) = e^{LT} u0 + G_T p -- no time stepping.
With eps = 0 and G_T invertible this is the exact minimum-norm null control
and its cost p^T G_T p saturates the duality with kappa_T.

The staged route splits [0, T] dyadically: stage k occupies a slot of
length T 2^{-(k+1)} whose first half runs a low-mode null control at cutoff
r_k = r0 4^k (so sqrt(r_k) doubles per stage, matching the exp(C sqrt(r))
constant growth against exp(-r tau) free decay), and whose second half is
free decay that crushes what the active half excited.  Stage controls are
designed on the full coupled truncation with a low-mode terminal constraint,
because the integral coupling does not block-diagonalize.

simulate_controlled is the independent audit: it integrates the controlled
equation by exponential stepping with per-step source quadrature from the
*sampled* control, never touching the closed-form terminal identity.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from numpy.polynomial.legendre import leggauss

from .basis import build_basis, restricted_mass_matrix
from .errors import ArgumentError, IllConditionedError, NumericError
from .evolution import assemble_generator, decompose
from .kernels import project_kernel
from .observability import _gramian_eigencoords, _validate_mass

_FALLBACK_RIDGE_SCALE = 1e-12


@dataclass(frozen=True, eq=False)
class StageLog:
    k: int
    r_k: float
    n_low: int
    t_start: float
    t_mid: float
    t_end: float
    residual_after_active: float
    residual_after_passive: float
    lowmode_after_active: float
    cost_sq: float


@dataclass(frozen=True, eq=False)
class ControlResult:
    T: float
    nt: int
    multiplier: object = field(repr=False)     # N-vector (one-shot) or per-stage list
    control_coeffs: np.ndarray = field(repr=False)  # nt x N, rows at linspace(0, T, nt)
    cost_sq: float
    terminal_residual: float
    stage_log: list = field(default_factory=list)
    ridge_used: float = 0.0


@dataclass(frozen=True, eq=False)
class SimulationResult:
    times: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)  # nt_fine x N coefficient snapshots
    terminal_norm: float


def _solve_gramian(G, rhs, ridge, op):
    """Cholesky solve of (G + ridge I) x = rhs with the documented fallback.

    ridge = 0 tries the plain factorization first; on failure a ridge of
    1e-12 trace(G)/N is applied once, with a warning.  Returns (x, ridge)."""
    n = G.shape[0]
    if not np.all(np.isfinite(G)):
        raise NumericError(f"{op}: Gramian contains non-finite entries")
    if ridge < 0:
        raise ArgumentError(f"{op}: ridge must be >= 0, got {ridge}")
    if ridge > 0:
        A = G + ridge * np.eye(n)
        try:
            return sla.cho_solve(sla.cho_factor(A), rhs), ridge
        except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
            raise IllConditionedError(
                f"{op}: Gramian singular even with ridge {ridge:.3e}",
                eigenvalue=float(np.linalg.eigvalsh(G)[0]),
            ) from exc
    try:
        return sla.cho_solve(sla.cho_factor(G), rhs), 0.0
    except (sla.LinAlgError, np.linalg.LinAlgError):
        pass
    fallback = _FALLBACK_RIDGE_SCALE * float(np.trace(G)) / n
    warnings.warn(
        f"{op}: Gramian not factorizable at ridge 0; falling back to ridge "
        f"{fallback:.3e}", RuntimeWarning, stacklevel=3)
    try:
        return sla.cho_solve(sla.cho_factor(G + fallback * np.eye(n)), rhs), fallback
    except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
        raise IllConditionedError(
            f"{op}: Gramian singular; pass an explicit ridge",
            eigenvalue=float(np.linalg.eigvalsh(G)[0]),
        ) from exc


def hum_control(dec, m_omega, u0, T, nt=64, ridge=0.0):
    """Minimum-energy control steering u0 to zero at time T.

    Returns the multiplier p, the control sampled on a uniform nt-grid in
    spectral coefficients, the exact cost p^T G_T p, and the closed-form
    terminal residual ||u(T)|| / ||u0||.  The whole computation runs in the
    eigenbasis of the generator so that the decayed high-mode data stays
    elementwise tiny instead of being drowned by norm-level roundoff.
    """
    if T <= 0:
        raise ArgumentError("hum_control: T must be positive")
    if nt < 16:
        raise ArgumentError(f"hum_control: nt must be >= 16, got {nt}")
    m_omega = _validate_mass(m_omega, dec.n_modes, "hum_control")
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (dec.n_modes,):
        raise ArgumentError(
            f"hum_control: u0 has shape {u0.shape}, expected ({dec.n_modes},)")
    G = _gramian_eigencoords(dec, m_omega, T)
    u0_e = dec.modes.T @ u0
    decay = np.exp(dec.mus * T)
    rhs = -(decay * u0_e)
    p_e, ridge_used = _solve_gramian(G, rhs, ridge, "hum_control")
    terminal_e = decay * u0_e + G @ p_e
    u0_norm = float(np.linalg.norm(u0))
    residual = float(np.linalg.norm(terminal_e)) / u0_norm if u0_norm > 0 else 0.0
    cost_sq = float(p_e @ G @ p_e)
    ts = np.linspace(0.0, T, nt)
    profile = np.exp(np.outer(T - ts, dec.mus)) * p_e   # nt x N, eigencoords
    coeffs = profile @ dec.modes.T                      # back to sine coordinates
    return ControlResult(T=float(T), nt=int(nt), multiplier=dec.modes @ p_e,
                         control_coeffs=coeffs, cost_sq=cost_sq,
                         terminal_residual=residual, ridge_used=ridge_used)


def simulate_controlled(dec, m_omega, u0, control_coeffs, T, nt_fine):
    """Integrate u' = L u + M_omega f(t) from the sampled control.

    Exact exponential stepping on a uniform nt_fine grid with order-4
    Gauss-Legendre source quadrature inside each step; the control between
    its nt samples is linearly interpolated.  nt_fine - 1 must be a multiple
    of nt - 1 so the fine grid refines the sample grid.  Independent of the
    closed-form terminal state used by the synthesis routines.
    """
    if T <= 0:
        raise ArgumentError("simulate_controlled: T must be positive")
    m_omega = _validate_mass(m_omega, dec.n_modes, "simulate_controlled")
    u0 = np.asarray(u0, dtype=float)
    coeffs = np.asarray(control_coeffs, dtype=float)
    if coeffs.ndim != 2 or coeffs.shape[1] != dec.n_modes:
        raise ArgumentError(
            f"simulate_controlled: control array {coeffs.shape} does not match "
            f"{dec.n_modes} modes")
    if u0.shape != (dec.n_modes,):
        raise ArgumentError(
            f"simulate_controlled: u0 has shape {u0.shape}, expected ({dec.n_modes},)")
    nt = coeffs.shape[0]
    if nt < 2 or nt_fine < 2 or (nt_fine - 1) % (nt - 1) != 0:
        raise ArgumentError(
            f"simulate_controlled: fine grid with {nt_fine} points does not refine "
            f"the {nt}-point control grid")
    mus = dec.mus
    Q = dec.modes
    W = Q.T @ m_omega @ Q
    f_e = coeffs @ Q                      # control samples in eigencoords
    times = np.linspace(0.0, T, nt_fine)
    dt = T / (nt_fine - 1)
    g_nodes, g_weights = leggauss(4)
    tau = (g_nodes + 1.0) * dt / 2.0      # offsets inside a step
    wq = g_weights * dt / 2.0
    # linear interpolation of the control at every quadrature node, vectorized
    t_nodes = (times[:-1, None] + tau[None, :]).ravel()
    h = T / (nt - 1)
    idx = np.minimum((t_nodes / h).astype(int), nt - 2)
    frac = (t_nodes - idx * h) / h
    f_nodes = (1.0 - frac)[:, None] * f_e[idx] + frac[:, None] * f_e[idx + 1]
    src = (f_nodes @ W.T).reshape(nt_fine - 1, tau.size, mus.size)
    e_step = np.exp(mus * dt)
    e_node = np.exp(np.outer(dt - tau, mus))  # 4 x N
    u = Q.T @ u0
    states = np.empty((nt_fine, mus.size))
    states[0] = u
    for s in range(nt_fine - 1):
        u = e_step * u + np.einsum("q,qn,qn->n", wq, e_node, src[s])
        states[s + 1] = u
    terminal = float(np.linalg.norm(u))
    return SimulationResult(times=times, states=states @ Q.T, terminal_norm=terminal)


def lr_staged_control(domain, kernel, u0, T, stages, r0, n_modes=None,
                      margin=8, nt=257, quadrature_order=8):
    """Staged low-frequency null control with dyadic free-decay phases.

    Stage k = 0..stages-1 occupies [T(1 - 2^{-k}), T(1 - 2^{-(k+1)})]; in the
    first half a least-norm control annihilates the projection of the state
    onto modes with lambda_j <= r_k = r0 4^k (solved through the low-mode
    block of the stage Gramian on the full coupled truncation), and the
    second half is free decay.  The slot lengths sum to T(1 - 2^{-stages});
    the remainder up to T is additional free decay, and the reported final
    residual is taken at t = T exactly.
    """
    if stages < 2:
        raise ArgumentError(f"lr_staged_control: need at least 2 stages, got {stages}")
    if T <= 0:
        raise ArgumentError("lr_staged_control: T must be positive")
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    lam1 = (np.pi / domain.length) ** 2
    if r0 < lam1 * (1 - 1e-12):
        raise ArgumentError(
            f"lr_staged_control: r0 = {r0:g} is below the first eigenvalue {lam1:g}")
    r_last = r0 * 4.0 ** (stages - 1)
    n_needed = int(np.floor(np.sqrt(r_last) * domain.length / np.pi)) + margin
    n = max(n_needed, u0.size) if n_modes is None else int(n_modes)
    if n < u0.size:
        raise ArgumentError(
            f"lr_staged_control: truncation {n} cannot hold a {u0.size}-mode state")
    basis = build_basis(domain, n, quadrature_order)
    dec = decompose(assemble_generator(basis, project_kernel(kernel, basis)))
    m_omega = _validate_mass(
        restricted_mass_matrix(basis, domain.omega_lo, domain.omega_hi),
        n, "lr_staged_control")
    state = np.zeros(n)
    state[: u0.size] = u0
    u0_norm = float(np.linalg.norm(state))
    Q = dec.modes
    mus = dec.mus

    def prop(v, dt):
        return Q @ (np.exp(mus * dt) * (Q.T @ v))

    ts = np.linspace(0.0, T, nt)
    coeffs = np.zeros((nt, n))
    log = []
    multipliers = []
    total_cost = 0.0
    t_cursor = 0.0
    u = state.copy()
    for k in range(stages):
        r_k = r0 * 4.0 ** k
        n_low = int(np.searchsorted(basis.lambdas, r_k * (1 + 1e-12), side="right"))
        slot = T * 2.0 ** (-(k + 1))
        tau = slot / 2.0
        t_mid = t_cursor + tau
        t_end = t_cursor + slot
        if t_end > T * (1 + 1e-12):
            raise NumericError("lr_staged_control: stage schedule overran the horizon")
        G = Q @ _gramian_eigencoords(dec, m_omega, tau) @ Q.T
        b = prop(u, tau)
        try:
            p_low = sla.solve(G[:n_low, :n_low], -b[:n_low], assume_a="pos")
        except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
            raise IllConditionedError(
                f"lr_staged_control: low-mode Gramian block singular at stage {k}",
                eigenvalue=float(np.linalg.eigvalsh(G[:n_low, :n_low])[0]),
            ) from exc
        p = np.zeros(n)
        p[:n_low] = p_low
        multipliers.append(p)
        cost_k = float(p @ G @ p)
        total_cost += cost_k
        u_active = b + G @ p
        # sample the stage control on the global grid (right-continuous:
        # the instant t_mid already belongs to the passive half)
        in_active = (ts >= t_cursor - 1e-15) & (ts < t_mid - 1e-15)
        if np.any(in_active):
            local = ts[in_active] - t_cursor
            p_e = Q.T @ p
            coeffs[in_active] = (np.exp(np.outer(tau - local, mus)) * p_e) @ Q.T
        res_active = float(np.linalg.norm(u_active))
        low_after = float(np.linalg.norm(u_active[:n_low]))
        u = prop(u_active, slot - tau)
        res_passive = float(np.linalg.norm(u))
        log.append(StageLog(k=k, r_k=r_k, n_low=n_low, t_start=t_cursor,
                            t_mid=t_mid, t_end=t_end,
                            residual_after_active=res_active,
                            residual_after_passive=res_passive,
                            lowmode_after_active=low_after, cost_sq=cost_k))
        t_cursor = t_end
    if T - t_cursor > 0:
        u = prop(u, T - t_cursor)
    final_residual = float(np.linalg.norm(u)) / u0_norm if u0_norm > 0 else 0.0
    return ControlResult(T=float(T), nt=int(nt), multiplier=multipliers,
                         control_coeffs=coeffs, cost_sq=total_cost,
                         terminal_residual=final_residual, stage_log=log)


def _graded_time_nodes(T, rate, order=16):
    """Composite GL nodes on [0, T] with geometric grading toward 0.

    The integrands are sums of e^{s tau} with s as negative as 2 mu_N, so the
    panel ladder starts at ~1/(4 rate) and doubles; each panel then sees at
    most a couple of e-folds and order-16 nodes integrate it to roundoff.
    """
    nodes, weights = leggauss(order)
    first = min(T, 0.25 / max(rate, 1.0 / T))
    edges = [0.0, first]
    while edges[-1] < T:
        edges.append(min(T, edges[-1] * 2.0))
    xs = []
    ws = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        xs.append(0.5 * (b - a) * nodes + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * weights)
    return np.concatenate(xs), np.concatenate(ws)


def control_cost(result, m_omega, dec):
    """Recompute ||f||^2_{L2(0,T;omega)} by time quadrature of the profile.

    For the one-shot control this integrates (e^{L(T-s)} p)^T M_omega
    (e^{L(T-s)} p); for staged results it integrates stage by stage.  The
    value must match result.cost_sq to quadrature accuracy when no ridge
    was applied.
    """
    m_omega = _validate_mass(m_omega, dec.n_modes, "control_cost")
    W = dec.modes.T @ m_omega @ dec.modes
    mus = dec.mus
    rate = float(mus[0] - 2.0 * mus[-1])

    def profile_energy(p, horizon):
        p_e = dec.modes.T @ p
        taus, ws = _graded_time_nodes(horizon, rate)
        vals = np.exp(np.outer(taus, mus)) * p_e   # e^{L tau} p over quadrature nodes
        return float(np.sum(ws * np.einsum("ij,jk,ik->i", vals, W, vals)))

    if result.stage_log:
        total = 0.0
        for p, stage in zip(result.multiplier, result.stage_log):
            total += profile_energy(p, stage.t_mid - stage.t_start)
        return total
    return profile_energy(np.asarray(result.multiplier, dtype=float), result.T)
