"""Command-line entry point: experiments in, deterministic CSV out.

Verbs map one-to-one onto library operations; every run echoes its fully
resolved configuration into the output directory so results reproduce from
the echo alone.  Exit codes: 0 success, 1 argument/config/format errors,
2 numeric or conditioning errors.  Floats are written with repr (shortest
round-trip), so identical configurations produce byte-identical files.
"""

import argparse
import os
import sys

import numpy as np

from . import certify
from .basis import build_basis, restricted_mass_matrix
from .config import format_config, parse_config
from .control import hum_control, lr_staged_control
from .errors import ArgumentError, ConfigError, KernelFormatError, NumericError
from .evolution import assemble_generator, decompose, left_inverse_constant, propagate
from .kernels import project_kernel
from .observability import (_phi, cost_sweep, observability_cost,
                            observability_gramian, spectral_obs_constant)

VERBS = ("basis", "kernel-project", "evolve", "zeta", "obs-constant", "obs-sweep",
         "gramian", "cost", "cost-sweep", "control-hum", "control-lr", "certify-all")


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _require(cfg, field, key, verb):
    value = getattr(cfg, field)
    if value is None or (isinstance(value, tuple) and not value):
        raise ConfigError(f"run_command[{verb}]: missing required key {key}")
    return value


def _pipeline(cfg):
    domain = cfg.domain()
    basis = build_basis(domain, cfg.n_modes)
    kmat = project_kernel(cfg.kernel(), basis, symmetry_tol=cfg.symmetry_tol)
    dec = decompose(assemble_generator(basis, kmat))
    m_omega = restricted_mass_matrix(basis, domain.omega_lo, domain.omega_hi)
    return domain, basis, kmat, dec, m_omega


def _default_r_list(cfg):
    if cfg.r_list:
        return list(cfg.r_list)
    ell = cfg.length
    top = min(24, cfg.n_modes)
    return [(((n + 0.5) * np.pi / ell) ** 2) for n in range(2, top + 1)]


def _u0_vector(cfg, n):
    u0 = np.zeros(n)
    vals = np.asarray(cfg.u0, dtype=float)
    if vals.size > n:
        raise ArgumentError(
            f"run_command: control.u0 has {vals.size} entries but the truncation is {n}")
    u0[: vals.size] = vals
    return u0


def run_command(verb, cfg, out_dir=None):
    """Execute one verb against a resolved config; returns written paths."""
    if verb not in VERBS:
        raise ArgumentError(f"run_command: unknown verb {verb!r} (choose from {VERBS})")
    out = out_dir or cfg.output_dir
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "config.echo.cfg"), "w", encoding="ascii",
              newline="\n") as fh:
        fh.write(format_config(cfg))
    written = [os.path.join(out, "config.echo.cfg")]

    def emit(name, header, rows):
        path = os.path.join(out, name)
        _write_csv(path, header, rows)
        written.append(path)

    if verb == "basis":
        basis = build_basis(cfg.domain(), cfg.n_modes)
        emit("basis.csv", ["j", "lambda_j"],
             [(j, basis.lambdas[j]) for j in range(basis.n_modes)])

    elif verb == "kernel-project":
        _, basis, kmat, _, _ = _pipeline(cfg)
        emit("kernel.csv", ["i", "j", "value"],
             [(i, j, kmat.matrix[i, j])
              for i in range(kmat.n_modes) for j in range(kmat.n_modes)])
        emit("kernel-summary.csv",
             ["n_modes", "hs_of_k", "frobenius", "spectral_radius"],
             [(kmat.n_modes, kmat.hs_of_k, kmat.frobenius, kmat.spectral_radius)])

    elif verb == "evolve":
        T = _require(cfg, "horizon", "time.horizon", verb)
        _, basis, _, dec, _ = _pipeline(cfg)
        u0 = _u0_vector(cfg, basis.n_modes)
        ts = np.linspace(0.0, T, cfg.nt)
        emit("evolve.csv", ["t", "state_norm"],
             [(t, float(np.linalg.norm(propagate(dec, u0, t)))) for t in ts])

    elif verb == "zeta":
        _, basis, _, dec, m_omega = _pipeline(cfg)
        ts = cfg.horizon_list or (_require(cfg, "horizon", "time.horizon", verb),)
        emit("zeta.csv", ["t", "zeta"],
             [(t, left_inverse_constant(dec, m_omega, t, gate=cfg.gate))
              for t in ts])

    elif verb == "obs-constant":
        _, basis, _, _, _ = _pipeline(cfg)
        r = cfg.r_list[0] if cfg.r_list else float(basis.lambdas[-1])
        rep = spectral_obs_constant(basis, cfg.domain().omega, r)
        emit("obs.csv", ["r", "n_modes", "c_min", "specobs_constant"],
             [(rep.r, rep.n_modes, rep.c_min, rep.specobs_constant)])

    elif verb == "obs-sweep":
        _, basis, _, _, _ = _pipeline(cfg)
        reports = [spectral_obs_constant(basis, cfg.domain().omega, r)
                   for r in _default_r_list(cfg)]
        emit("obs-sweep.csv", ["r", "n_modes", "c_min", "specobs_constant"],
             [(rep.r, rep.n_modes, rep.c_min, rep.specobs_constant)
              for rep in reports])

    elif verb == "gramian":
        T = _require(cfg, "horizon", "time.horizon", verb)
        _, basis, _, dec, m_omega = _pipeline(cfg)
        G = observability_gramian(dec, m_omega, T)
        w = np.linalg.eigvalsh(G)
        emit("gramian.csv", ["i", "j", "value"],
             [(i, j, G[i, j]) for i in range(G.shape[0]) for j in range(G.shape[1])])
        emit("gramian-summary.csv", ["T", "min_eig", "max_eig", "trace"],
             [(T, float(w[0]), float(w[-1]), float(np.trace(G)))])

    elif verb == "cost":
        T = _require(cfg, "horizon", "time.horizon", verb)
        _, basis, _, dec, m_omega = _pipeline(cfg)
        rep = observability_cost(dec, m_omega, T)
        emit("cost.csv", ["T", "N_used", "kappa_T", "gramian_min_eig",
                          "fit_model", "fit_C", "fit_alpha", "fit_residual"],
             [(rep.T, rep.n_used, rep.kappa, rep.gramian_min_eig, "", "", "", "")])

    elif verb == "cost-sweep":
        Ts = _require(cfg, "horizon_list", "time.horizon_list", verb)
        sweep = cost_sweep(cfg.domain(), cfg.kernel(), list(Ts),
                           coupling=cfg.coupling, n_fixed=cfg.n_modes,
                           margin=cfg.margin)
        rows = []
        for row in sweep.rows:
            if row.report is None:
                rows.append((row.T, row.n_used, "nan", "nan",
                             "error", "", "", row.error))
                continue
            rows.append((row.T, row.n_used, row.report.kappa,
                         row.report.gramian_min_eig, "free",
                         sweep.fit_free.coeff, sweep.fit_free.alpha,
                         sweep.fit_free.residual))
        rows.append(("", "", "", "", "sqrt", sweep.fit_sqrt.coeff,
                     sweep.fit_sqrt.alpha, sweep.fit_sqrt.residual))
        rows.append(("", "", "", "", "inv", sweep.fit_inv.coeff,
                     sweep.fit_inv.alpha, sweep.fit_inv.residual))
        emit("cost-sweep.csv", ["T", "N_used", "kappa_T", "gramian_min_eig",
                                "fit_model", "fit_C", "fit_alpha", "fit_residual"], rows)

    elif verb == "control-hum":
        T = _require(cfg, "horizon", "time.horizon", verb)
        _, basis, _, dec, m_omega = _pipeline(cfg)
        u0 = _u0_vector(cfg, basis.n_modes)
        result = hum_control(dec, m_omega, u0, T, nt=max(cfg.nt, 16), ridge=cfg.ridge)
        kappa = observability_cost(dec, m_omega, T).kappa
        nullcond_ok = result.cost_sq <= kappa * float(u0 @ u0) * (1 + 1e-6)
        ts = np.linspace(0.0, T, result.nt)
        dens = np.einsum("ij,jk,ik->i", result.control_coeffs, m_omega,
                         result.control_coeffs)
        # closed-form controlled trajectory at the sample times:
        # u(t) = e^{Lt} u0 + [W o D(t)] p with D(t)[a,b] = e^{mu_b (T-t)} phi(mu_a+mu_b, t)
        p_e = dec.modes.T @ np.asarray(result.multiplier, float)
        u0_e = dec.modes.T @ u0
        mus = dec.mus
        Wq = dec.modes.T @ m_omega @ dec.modes
        u0_norm = max(float(np.linalg.norm(u0)), 1e-300)
        norms = []
        for t in ts:
            drive = Wq * (np.exp(mus[None, :] * (T - t))
                          * _phi(mus[:, None] + mus[None, :], t))
            ut = np.exp(mus * t) * u0_e + drive @ p_e
            norms.append(float(np.linalg.norm(ut)) / u0_norm)
        emit("control.csv", ["t", "cost_density", "residual_projection"],
             list(zip(ts, dens, norms)))
        emit("control-summary.csv",
             ["T", "cost_sq", "terminal_residual", "kappa_T", "nullcond_ok"],
             [(result.T, result.cost_sq, result.terminal_residual, kappa,
               nullcond_ok)])

    elif verb == "control-lr":
        T = _require(cfg, "horizon", "time.horizon", verb)
        domain = cfg.domain()
        r0 = cfg.r0 if cfg.r0 > 0 else float((np.pi / domain.length) ** 2)
        u0 = np.asarray(cfg.u0, dtype=float)
        result = lr_staged_control(domain, cfg.kernel(), u0, T,
                                   stages=cfg.stages, r0=r0,
                                   margin=cfg.margin, nt=max(cfg.nt, 16))
        emit("lr.csv", ["k", "r_k", "t_start", "t_mid", "t_end",
                        "residual_after_active", "residual_after_passive"],
             [(s.k, s.r_k, s.t_start, s.t_mid, s.t_end,
               s.residual_after_active, s.residual_after_passive)
              for s in result.stage_log])
        emit("lr-summary.csv", ["T", "stages", "cost_sq", "terminal_residual"],
             [(result.T, cfg.stages, result.cost_sq, result.terminal_residual)])

    elif verb == "certify-all":
        rows = certify.run_all(seed=cfg.seed)
        emit("certify.csv", ["check", "status", "detail"],
             [(name, "pass" if ok else "FAIL", detail.replace(",", ";"))
              for name, ok, detail in rows])
        if not all(ok for _, ok, _ in rows):
            failed = [name for name, ok, _ in rows if not ok]
            raise NumericError(f"certify-all: failing checks: {', '.join(failed)}")

    return written


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nullheat",
        description="Spectral null-control synthesis and certificates for the "
                    "kernel-coupled heat equation on an interval.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("config", help="experiment config file")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config key")
    parser.add_argument("--T", dest="horizon", default=None,
                        help="shorthand for --set time.horizon=...")
    parser.add_argument("--N", dest="n_modes", default=None,
                        help="shorthand for --set truncation.n=...")
    parser.add_argument("--output", dest="output", default=None,
                        help="shorthand for --set output.dir=...")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    overrides = {}
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep:
            print(f"nullheat: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 1
        overrides[key.strip()] = value.strip()
    if args.horizon is not None:
        overrides["time.horizon"] = args.horizon
    if args.n_modes is not None:
        overrides["truncation.n"] = args.n_modes
    if args.output is not None:
        overrides["output.dir"] = args.output
    try:
        cfg = parse_config(args.config, overrides=overrides)
        written = run_command(args.verb, cfg)
    except (ArgumentError, ConfigError, KernelFormatError, FileNotFoundError) as exc:
        print(f"nullheat: error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"nullheat: numeric error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
