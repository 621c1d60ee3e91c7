"""Batch front-end: sweeps over operation times with CSV output.

Subcommands mirror the workbench capabilities:

    fields         drive-field components over time
    eigenenergies  fringe-fitted level energies vs the exact splitting
    populations    handover-readout populations vs direct probabilities
    moments        work moments with adiabatic references
    qgt            rescaled excess, tomography estimator, Bloch angles
    verify         full acceptance battery with a machine-readable report

Every CSV has a one-line header and floats printed to 9 significant
digits; identical configs produce byte-identical files. Frequencies are
reported in MHz, times in ns, work in h MHz, and squared work in
(h MHz)^2. Exit codes: 0 success, 1 criterion failure, 2 configuration
error, 3 I/O error.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import acceptance
from .config import RunConfig, parse_config
from .exceptions import ConfigError, FitFailureError, StaError
from .geometry import bloch_trajectory, excess_from_qgt, geometric_quantity_estimator
from .schedules import cd_field_analytic, reference_field, total_field
from .units import rad_ns_to_mhz
from .virtual_lab import (
    extract_eigenenergies,
    frozen_hamiltonian_sweep,
    frozen_population_sweep,
    sample_record,
    sample_result,
)
from .workstats import conditional_probs, default_grid, moment_table

HMHZ = rad_ns_to_mhz(1.0)


def _fmt(value):
    if isinstance(value, str):
        return value
    return format(float(value), ".9g")


def _write_csv(path, header, rows):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise _IoFailure(f"cannot write {path}: {exc}") from exc
    return path


class _IoFailure(RuntimeError):
    pass


def _label_T(T):
    return str(int(T)) if float(T) == int(T) else str(T)


def _plot_csv(path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="utf-8")
    names = list(data.dtype.names)
    x = np.asarray(data[names[0]], dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for col in names[1:]:
        y = np.asarray(data[col])
        if not np.issubdtype(y.dtype, np.number):
            continue
        ax.plot(x, y.astype(float), label=col, linewidth=1.2)
    ax.set_xlabel(names[0])
    ax.legend(fontsize=8)
    ax.set_title(os.path.basename(path))
    fig.tight_layout()
    fig.savefig(os.path.splitext(path)[0] + ".svg")
    plt.close(fig)


def _run_jobs(jobs, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return [f.result() for f in [pool.submit(job) for job in jobs]]
    return [job() for job in jobs]


def _shot_rng(config):
    if not config.shot_noise_enabled:
        return None
    return np.random.default_rng(config.seed)


def cmd_fields(config, outdir, workers=1):
    """fields_T<ns>.csv: reference, counter-diabatic, and total components in MHz."""
    tbars = default_grid(config.grid_step_tbar)

    def job(T):
        sch = config.schedule(T)
        times = tbars * T
        b0 = rad_ns_to_mhz(reference_field(sch, times))
        bcd = rad_ns_to_mhz(cd_field_analytic(sch, times))
        btot = rad_ns_to_mhz(total_field(sch, times))
        rows = [
            (times[i], *b0[i], *bcd[i], *btot[i]) for i in range(len(times))
        ]
        header = ["t_ns", "b0x", "b0y", "b0z", "bcdx", "bcdy", "bcdz", "bx", "by", "bz"]
        return _write_csv(os.path.join(outdir, f"fields_T{_label_T(T)}.csv"), header, rows)

    return _run_jobs([lambda T=T: job(T) for T in config.operation_times_ns], workers)


def cmd_eigenenergies(config, outdir, workers=1):
    """eigenenergies_T<ns>.csv: fringe fits on a 1 ns interruption grid."""
    diss = config.dissipation() if config.dissipation_enabled else None
    rng = _shot_rng(config)

    def job(T):
        sch = config.schedule(T)
        cfg = config.propagator()
        tau_ms = np.arange(0.0, T + 0.5, 1.0)
        records = frozen_hamiltonian_sweep(sch, tau_ms, cfg, diss=diss)
        rows = []
        for tau, rec in zip(tau_ms, records):
            if rng is not None:
                rec = sample_record(rec, rng, config.shots)
            exact = 0.5 * float(np.linalg.norm(total_field(sch, tau))) * HMHZ
            try:
                fit = extract_eigenenergies(rec)
                rows.append(
                    (tau, fit.e_plus * HMHZ, fit.e_minus * HMHZ, exact, fit.residual, "ok")
                )
            except FitFailureError:
                rows.append((tau, "nan", "nan", exact, "nan", "fit_failed"))
        header = [
            "tau_m_ns",
            "e_plus_mhz",
            "e_minus_mhz",
            "e_plus_exact_mhz",
            "fit_residual",
            "status",
        ]
        return _write_csv(
            os.path.join(outdir, f"eigenenergies_T{_label_T(T)}.csv"), header, rows
        )

    return _run_jobs([lambda T=T: job(T) for T in config.operation_times_ns], workers)


def cmd_populations(config, outdir, workers=1):
    """populations_T<ns>_<n>.csv: handover readout vs direct probabilities."""
    diss = config.dissipation() if config.dissipation_enabled else None
    rng = _shot_rng(config)
    tbars = default_grid(config.grid_step_tbar)

    def job(T, n):
        sch = config.schedule(T)
        cfg = config.propagator()
        tau_ms = tbars * T
        runs = frozen_population_sweep(sch, tau_ms, n, cfg, diss=diss)
        rows = []
        for tau, run in zip(tau_ms, runs):
            if rng is not None:
                run = sample_result(run, rng, config.shots)
            exact_plus, exact_minus = conditional_probs(sch, tau, n, cfg)
            rows.append(
                (tau, run.p_plus_given_n, run.p_minus_given_n, exact_plus, exact_minus)
            )
        header = ["tau_m_ns", "p_plus", "p_minus", "p_plus_exact", "p_minus_exact"]
        return _write_csv(
            os.path.join(outdir, f"populations_T{_label_T(T)}_{n}.csv"), header, rows
        )

    jobs = [
        lambda T=T, n=n: job(T, n)
        for T in config.operation_times_ns
        for n in ("up", "down")
    ]
    return _run_jobs(jobs, workers)


def cmd_moments(config, outdir, workers=1):
    """moments_T<ns>_<n>.csv: work moments and adiabatic references."""
    diss = config.dissipation() if config.dissipation_enabled else None
    tbars = default_grid(config.grid_step_tbar)

    def job(T, n):
        records = moment_table(
            config.schedule(T), n, config.propagator(), tbars=tbars, diss=diss
        )
        rows = [
            (
                r.tbar,
                r.w1 * HMHZ,
                r.w2 * HMHZ**2,
                r.w1_ad * HMHZ,
                r.w2_ad * HMHZ**2,
                r.excess2 * HMHZ**2,
            )
            for r in records
        ]
        header = ["tbar", "w1_hmhz", "w2_hmhz2", "w1_ad", "w2_ad", "excess2"]
        return _write_csv(
            os.path.join(outdir, f"moments_T{_label_T(T)}_{n}.csv"), header, rows
        )

    jobs = [
        lambda T=T, n=n: job(T, n)
        for T in config.operation_times_ns
        for n in ("up", "down")
    ]
    return _run_jobs(jobs, workers)


def cmd_qgt(config, outdir, workers=1):
    """qgt_T<ns>.csv: rescaled excess and estimator data, interior grid only."""
    tbars = default_grid(config.grid_step_tbar)

    def job(T):
        sch = config.schedule(T)
        cfg = config.propagator()
        records = moment_table(sch, "up", cfg, tbars=tbars)
        excess = np.array([r.excess2 for r in records])
        samples = bloch_trajectory(sch, cfg, dtbar=config.grid_step_tbar)
        points = geometric_quantity_estimator(samples, config.grid_step_tbar)
        analytic = excess_from_qgt(sch, tbars) * T**2
        rows = []
        for i, point in enumerate(points, start=1):
            rows.append(
                (
                    tbars[i],
                    T**2 * excess[i] * HMHZ**2,
                    point.value,
                    analytic[i],
                    samples[i].theta_q,
                    samples[i].phi_q,
                )
            )
        header = [
            "tbar",
            "T2_excess2",
            "dl_dt_sq_estimator",
            "dl_dt_sq_analytic",
            "theta_q",
            "phi_q",
        ]
        return _write_csv(os.path.join(outdir, f"qgt_T{_label_T(T)}.csv"), header, rows)

    return _run_jobs([lambda T=T: job(T) for T in config.operation_times_ns], workers)


def cmd_verify(config, outdir, workers=1):
    """Run the acceptance battery; write verify_report.csv; 0 iff all pass."""
    results = acceptance.run_all(
        config,
        on_result=lambda r: print(
            f"[{'PASS' if r.passed else 'FAIL'}] {r.cid} {r.name}: "
            f"measured = {r.measured:.6g}, tolerance {r.tolerance}"
            + (f" ({r.detail})" if r.detail else "")
        ),
    )
    rows = [(r.cid, r.status, r.measured, r.tolerance) for r in results]
    _write_csv(
        os.path.join(outdir, "verify_report.csv"),
        ["criterion_id", "status", "measured", "tolerance"],
        rows,
    )
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


_COMMANDS = {
    "fields": cmd_fields,
    "eigenenergies": cmd_eigenenergies,
    "populations": cmd_populations,
    "moments": cmd_moments,
    "qgt": cmd_qgt,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sta-workbench",
        description="Counter-diabatic qubit drive workbench (CSV batch front-end)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*_COMMANDS, "verify"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", default=None, help="flat key = value config file")
        cmd.add_argument("--plot", action="store_true", help="also write SVG charts")
        cmd.add_argument("--workers", type=int, default=1, help="parallel sweep cells")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = parse_config(args.config) if args.config else RunConfig()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    outdir = os.environ.get("STA_OUTPUT_DIR") or config.output_dir
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        print(f"I/O error: cannot create {outdir}: {exc}", file=sys.stderr)
        return 3

    try:
        if args.command == "verify":
            return cmd_verify(config, outdir, args.workers)
        written = _COMMANDS[args.command](config, outdir, workers=args.workers)
        if args.plot:
            for path in written:
                _plot_csv(path)
        for path in written:
            print(path)
        return 0
    except _IoFailure as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except StaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
