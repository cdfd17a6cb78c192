"""
Command-line front end. Every subcommand writes an RFC-4180 CSV table.

    finitemi discrete-mi    --config fig1
    finitemi mercer         --config fig2 [--nystrom]
    finitemi finite-mi      --config my.ini
    finitemi avg-capacity   --config my.ini
    finitemi exceed-average --config fig3 --units bits
    finitemi selftest

Exit status: 0 ok, 1 numerical failure or failed expectation, 2 config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import capacity, grid_mi, mercer
from .config import PRESETS, load_config
from .errors import ConfigError, FiniteMIError
from .kernels import AWGN, ExponentialKernel
from .selftest import run_selftest

LN2 = math.log(2.0)


class ExpectationFailed(Exception):
    pass


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17g" % x


def _conv(units):
    return 1.0 if units == "nats" else 1.0 / LN2


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def run_discrete_mi(cfg, units):
    _require(cfg.signal is not None and cfg.noise is not None, "discrete-mi needs [signal] and [noise]")
    _require(cfg.T_values, "discrete-mi needs window.T or window.T_list")
    _require(cfg.n_values, "discrete-mi needs compute.n or compute.n_list")
    u = units
    c = _conv(u)
    cav = capacity.avg_capacity_quadrature(cfg.signal, cfg.noise)
    header = ["T", "n", f"I_{u}", "C_nats_per_s", "C_bits_per_s", f"C_av_{u}_per_s"]
    rows = []
    monotone = True
    for T in cfg.T_values:
        prev = -math.inf
        for n, rep in grid_mi.mi_convergence_sweep(cfg.signal, cfg.noise, T, cfg.n_values):
            rate = rep.rate_nats_per_s
            rows.append([T, n, rep.value_nats * c, rate, rate / LN2, cav * c])
            monotone &= rep.value_nats >= prev
            prev = rep.value_nats
    failed = []
    if cfg.expect.get("monotone") and not monotone:
        failed.append("mutual information not nondecreasing in n")
    return header, rows, failed


def run_mercer(cfg, units, nystrom=False):
    _require(cfg.signal is not None, "mercer needs [signal]")
    _require(len(cfg.T_values) == 1, "mercer needs a single window.T")
    T = cfg.T_values[0]
    if nystrom or cfg.mode == "nystrom":
        spec = mercer.nystrom_spectrum(cfg.signal, T, cfg.nystrom_n)
        K = spec.K if cfg.K is None else min(cfg.K, spec.K)
        return ["k", "lambda_k"], [[k + 1, spec.lambdas[k]] for k in range(K)], []
    if not isinstance(cfg.signal, ExponentialKernel):
        raise ConfigError("signal.kind: analytic spectrum needs kind=exponential (or use --nystrom)")
    sig = cfg.signal
    spec = mercer.exponential_spectrum(sig.P, sig.alpha, T, cfg.K)
    k = np.arange(1, spec.K + 1)
    res = mercer.omega_residual(spec.omegas, sig.alpha, T, k)
    header = ["k", "omega_k", "lambda_k", "bracket_lo", "bracket_hi", "residual"]
    rows = [
        [int(k[i]), spec.omegas[i], spec.lambdas[i], (k[i] - 1) * np.pi / T, k[i] * np.pi / T, res[i]]
        for i in range(spec.K)
    ]
    return header, rows, []


def run_finite_mi(cfg, units, tol=None, max_terms=None):
    _require(isinstance(cfg.noise, AWGN), "finite-mi needs noise.kind = awgn")
    _require(cfg.signal is not None and cfg.T_values, "finite-mi needs [signal] and window.T")
    u = units
    c = _conv(u)
    tol = cfg.tol if tol is None else tol
    max_terms = cfg.max_terms if max_terms is None else max_terms
    header = ["T", "P", "K", f"I_{u}", f"C_{u}_per_s", f"tail_bound_{u}", "target_met"]
    rows = []
    for T in cfg.T_values:
        for P in cfg.signal_powers:
            if isinstance(cfg.signal, ExponentialKernel) and cfg.mode == "analytic":
                if cfg.K is not None:
                    spec = mercer.exponential_spectrum(P, cfg.signal.alpha, T, cfg.K)
                    rep = capacity.finite_time_mi(spec, cfg.noise.n0)
                    met = rep.tail_bound < tol
                else:
                    rep = capacity.finite_time_mi_auto(
                        P, cfg.signal.alpha, T, cfg.noise.n0, tol=tol, max_terms=max_terms
                    )
                    met = rep.diagnostics.get("target_met", True)
            else:
                sig = _with_power(cfg.signal, P)
                rep = capacity.finite_time_mi(mercer.nystrom_spectrum(sig, T, cfg.nystrom_n), cfg.noise.n0)
                met = rep.tail_bound < tol
            rows.append([T, P, rep.diagnostics["K"], rep.value_nats * c, rep.rate_nats_per_s * c,
                         rep.tail_bound * c, met])
    return header, rows, []


def _with_power(kernel, P):
    if P == kernel.power:
        return kernel
    if isinstance(kernel, ExponentialKernel):
        return ExponentialKernel(P, kernel.alpha)
    return type(kernel)(P, kernel.W)


def run_avg_capacity(cfg, units):
    _require(cfg.signal is not None and cfg.noise is not None, "avg-capacity needs [signal] and [noise]")
    u = units
    c = _conv(u)
    header = ["P", "method", f"C_av_{u}_per_s"]
    rows = []
    for P in cfg.signal_powers:
        sig = _with_power(cfg.signal, P)
        rows.append([P, "quadrature", capacity.avg_capacity_quadrature(sig, cfg.noise) * c])
        if isinstance(sig, ExponentialKernel) and isinstance(cfg.noise, AWGN):
            rows.append([P, "closed-form", capacity.avg_capacity_closed(P, sig.alpha, cfg.noise.n0) * c])
    return header, rows, []


def run_exceed_average(cfg, units):
    _require(isinstance(cfg.signal, ExponentialKernel), "exceed-average needs signal.kind = exponential")
    _require(isinstance(cfg.noise, AWGN), "exceed-average needs noise.kind = awgn")
    _require(cfg.T_values, "exceed-average needs window.T or window.T_list")
    u = units
    c = _conv(u)
    header = ["T", "P", f"I_T_{u}", f"T_times_Cav_{u}", f"margin_{u}_per_s", "delta",
              "within_delta", "verified", "status"]
    rows = []
    failed = []
    for P in cfg.signal_powers:
        for T in cfg.T_values:
            r = capacity.exceed_average_analysis(P, cfg.signal.alpha, cfg.noise.n0, T, cfg.K)
            rows.append([T, P, r.I_T * c, r.T_times_Cav * c, r.margin * c, r.delta,
                         r.within_delta, r.verified, r.status])
            if cfg.expect.get("verified") and not r.verified:
                failed.append(f"P={P}, T={T}: not theorem-verified ({r.status})")
            if cfg.expect.get("exceed") and not r.margin > 0:
                failed.append(f"P={P}, T={T}: no exceedance (margin {r.margin:.3e})")
    return header, rows, failed


def write_csv(header, rows, stream):
    w = csv.writer(stream, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])


def build_parser():
    p = argparse.ArgumentParser(prog="finitemi", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("discrete-mi", "mercer", "finite-mi", "avg-capacity", "exceed-average"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True,
                        help=f"INI file, or a bundled preset: {', '.join(PRESETS)}")
        sp.add_argument("--out", help="output CSV path (default: stdout)")
        sp.add_argument("--units", choices=("nats", "bits"))
        sp.add_argument("--max-terms", type=int)
        sp.add_argument("--tol", type=float)
        if name == "mercer":
            sp.add_argument("--nystrom", action="store_true", help="Nystrom eigenvalues instead")
    sub.add_parser("selftest")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "selftest":
        return 0 if run_selftest() else 1

    try:
        cfg = load_config(args.config)
        if args.max_terms is not None:
            if args.max_terms < 1:
                raise ConfigError("--max-terms: must be >= 1")
            cfg.max_terms = args.max_terms
            if args.command != "finite-mi":
                cfg.K = args.max_terms
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("--tol: must be > 0")
            cfg.tol = args.tol
        units = args.units or cfg.units
        if args.command == "discrete-mi":
            header, rows, failed = run_discrete_mi(cfg, units)
        elif args.command == "mercer":
            header, rows, failed = run_mercer(cfg, units, args.nystrom)
        elif args.command == "finite-mi":
            header, rows, failed = run_finite_mi(cfg, units)
        elif args.command == "avg-capacity":
            header, rows, failed = run_avg_capacity(cfg, units)
        else:
            header, rows, failed = run_exceed_average(cfg, units)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FiniteMIError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 1

    buf = io.StringIO()
    write_csv(header, rows, buf)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    for msg in failed:
        print(f"expectation failed: {msg}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
