"""Experiment harness for the scheduled-arrival queue solvers.

Every command writes one CSV table: ``#``-prefixed metadata lines (command,
resolved config, seed, version), a header row, then data rows with floats
printed to 9 significant digits.  Defaults are embedded so each command
runs with no arguments; a config file (INI, one section per command) and
the ``--seed`` flag override them.  ``--check`` re-runs the command against
its built-in expectations (reference grids for the table commands,
cross-validations elsewhere) and exits with status 4 on mismatch.

Exit codes: 0 success, 2 configuration error, 3 numeric-domain error,
4 check-mode mismatch.
"""

from __future__ import annotations

import argparse
import configparser
import sys

import numpy as np

from . import __version__, reference_tables as ref
from .delays import DelayDistribution
from .errors import ConfigError, DomainError
from .occupancy import (
    POWER_SUM_MAX_HALF_WIDTH,
    OccupancyModel,
    alpha_chain,
    correlated_mean_queue,
    empty_probability_exact,
    mean_return_time,
    min_alpha_for_horizon,
    occupancy_dist_dp,
    occupancy_dist_power_sum,
)
from .process import PsraProcess
from .queueing import independence_approx_mean, md1_mean_queue
from .simulate import SimConfig, replicate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_CHECK = 4

COMMANDS = ("rate-table", "intensity-table", "queue-table",
            "fig-independence", "fig-correlated", "fermi", "simulate")

DEFAULT_SEED = 20240801

DEFAULTS: dict[str, dict] = {
    "rate-table": {
        "sigmas": ref.RATE_SIGMAS,
        "times": ref.RATE_TIMES,
        "gamma": 1.0,
        "seed": DEFAULT_SEED,
    },
    "intensity-table": {
        "sigmas": ref.INTENSITY_SIGMAS,
        "times": ref.INTENSITY_TIMES,
        "service_time": ref.INTENSITY_SERVICE_TIME,
        "gamma": 1.0,
        "seed": DEFAULT_SEED,
    },
    "queue-table": {
        "sigmas": ref.QUEUE_SIGMAS,
        "times": ref.QUEUE_TIMES,
        "service_time": ref.QUEUE_SERVICE_TIME,
        "gamma": 1.0,
        "seed": DEFAULT_SEED,
    },
    "fig-independence": {
        "rhos": (0.5, 0.7, 0.9),
        "sigmas": (0.2, 0.3, 0.5, 0.7, 1.0, 1.5, 2.0),
        "t": 0.5,
        "horizon": 200_000,
        "n_reps": 1,
        "seed": DEFAULT_SEED,
    },
    "fig-correlated": {
        "rhos": (0.90, 0.95, 0.98, 0.99),
        "half_width": 5,
        "horizon": 2_000_000,
        "warmup": 100_000,
        "n_reps": 1,
        "seed": DEFAULT_SEED,
    },
    "fermi": {
        "half_width": 5,
        "rho": 0.95,
        "operations": 1000,
        "seed": DEFAULT_SEED,
    },
    "simulate": {
        "family": "gaussian",
        "sigma": 1.0,
        "half_width": 2,
        "gamma": 1.0,
        "rate": 1.0,
        "service_time": 1.0,
        "horizon": 10_000,
        "n_reps": 1,
        "track_occupancy": False,
        "seed": DEFAULT_SEED,
    },
}


# ----------------------------------------------------------------------
# configuration plumbing
# ----------------------------------------------------------------------

def _parse_like(key: str, raw: str, template):
    raw = raw.strip()
    if isinstance(template, tuple):
        parts = raw.replace(",", " ").split()
        if not parts:
            raise ConfigError(f"{key}: empty grid")
        return tuple(float(p) for p in parts)
    if isinstance(template, bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    if isinstance(template, int):
        return int(raw)
    if isinstance(template, float):
        return float(raw)
    return raw


def resolve_config(command: str, config_path: str | None,
                   seed: int | None) -> dict:
    cfg = dict(DEFAULTS[command])
    if config_path is not None:
        parser = configparser.ConfigParser()
        try:
            read = parser.read(config_path)
        except configparser.Error as exc:
            raise ConfigError(f"bad config file {config_path}: {exc}") from exc
        if not read:
            raise ConfigError(f"config file not found: {config_path}")
        if parser.has_section(command):
            for key, raw in parser.items(command):
                if key not in cfg:
                    raise ConfigError(f"unknown key {key!r} in section "
                                      f"[{command}]")
                try:
                    cfg[key] = _parse_like(key, raw, cfg[key])
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    if seed is not None:
        cfg["seed"] = seed
    return cfg


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


def _render(command: str, cfg: dict, columns, rows, extra_meta=()) -> str:
    lines = [f"# command: {command}", f"# version: {__version__}",
             f"# seed: {cfg['seed']}"]
    for key in sorted(cfg):
        if key == "seed":
            continue
        value = cfg[key]
        if isinstance(value, tuple):
            value = " ".join(_fmt(v) for v in value)
        lines.append(f"# config {key}: {_fmt(value)}")
    lines.extend(f"# {m}" for m in extra_meta)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _point_seed(base: int, k: int) -> int:
    # deterministic per-row seed for sweep points
    return int(np.random.SeedSequence((int(base), int(k))).generate_state(1)[0])


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_rate_table(cfg: dict, check: bool):
    if check:
        cfg = {**cfg, "sigmas": ref.RATE_SIGMAS, "times": ref.RATE_TIMES}
    rows, failures = [], []
    for s in cfg["sigmas"]:
        proc = PsraProcess(1.0, DelayDistribution.gaussian(s), cfg["gamma"])
        for i, t in enumerate(cfg["times"]):
            val = proc.instantaneous_rate(t)
            rows.append((s, t, val))
            if check:
                want = ref.RATE[s][i]
                if abs(val - want) > ref.RATE_TOLERANCE:
                    failures.append(f"rate({s},{t}) = {val:.9g}, "
                                    f"expected {want}")
    return ("sigma", "t", "rate"), rows, failures, ()


def cmd_intensity_table(cfg: dict, check: bool):
    if check:
        cfg = {**cfg, "sigmas": ref.INTENSITY_SIGMAS,
               "times": ref.INTENSITY_TIMES,
               "service_time": ref.INTENSITY_SERVICE_TIME}
    T = cfg["service_time"]
    rows, failures = [], []
    for s in cfg["sigmas"]:
        proc = PsraProcess(1.0, DelayDistribution.gaussian(s), cfg["gamma"])
        for i, t in enumerate(cfg["times"]):
            val, _ = proc.slot_moments(t, T)
            rows.append((s, t, val))
            if check:
                want = ref.INTENSITY[s][i]
                if abs(val - want) > ref.INTENSITY_TOLERANCE:
                    failures.append(f"intensity({s},{t}) = {val:.9g}, "
                                    f"expected {want}")
    return ("sigma", "t", "intensity"), rows, failures, ()


def cmd_queue_table(cfg: dict, check: bool):
    if check:
        cfg = {**cfg, "sigmas": ref.QUEUE_SIGMAS, "times": ref.QUEUE_TIMES,
               "service_time": ref.QUEUE_SERVICE_TIME}
    T = cfg["service_time"]
    rows, failures = [], []
    for s in cfg["sigmas"]:
        proc = PsraProcess(1.0, DelayDistribution.gaussian(s), cfg["gamma"])
        for i, t in enumerate(cfg["times"]):
            val = independence_approx_mean(proc, t, T)
            rows.append((s, t, val))
            if check:
                want = ref.QUEUE[s][i]
                if abs(val - want) > ref.QUEUE_TOLERANCE:
                    failures.append(f"mean_queue({s},{t}) = {val:.9g}, "
                                    f"expected {want}")
    return ("sigma", "t", "mean_queue"), rows, failures, ()


def cmd_fig_independence(cfg: dict, check: bool):
    rows, failures = [], []
    k = 0
    for rho in cfg["rhos"]:
        poisson_mean = md1_mean_queue(rho)
        for s in cfg["sigmas"]:
            proc = PsraProcess(1.0, DelayDistribution.gaussian(s))
            analytic = independence_approx_mean(proc, cfg["t"], rho)
            sim = replicate(
                SimConfig(process=proc, service_time=rho,
                          horizon=cfg["horizon"],
                          seed=_point_seed(cfg["seed"], k)),
                cfg["n_reps"])
            rows.append((rho, s, poisson_mean, analytic,
                         sim.mean_queue, sim.mean_queue_se))
            if check and sim.mean_queue - analytic > 3.0 * sim.mean_queue_se:
                failures.append(
                    f"rho={rho} sigma={s}: simulated mean {sim.mean_queue:.4f}"
                    f" exceeds the analytic value {analytic:.4f} by more than "
                    f"3 standard errors")
            k += 1
    return (("rho", "sigma", "poisson_md1", "analytic_independence",
             "simulated_mean", "simulated_se"), rows, failures, ())


def cmd_fig_correlated(cfg: dict, check: bool):
    L = int(cfg["half_width"])
    model = OccupancyModel.uniform(L)
    delay = DelayDistribution.uniform(float(L))
    rows, failures = [], []
    for k, rho in enumerate(cfg["rhos"]):
        proc = PsraProcess(1.0, delay, rho)
        analytic = independence_approx_mean(proc, 0.0, 1.0)
        corr = correlated_mean_queue(model, rho)
        sim = replicate(
            SimConfig(process=proc, service_time=1.0, horizon=cfg["horizon"],
                      warmup=cfg["warmup"], seed=_point_seed(cfg["seed"], k)),
            cfg["n_reps"])
        rows.append((rho, sim.mean_queue, sim.mean_queue_se, corr, analytic))
        if check:
            if analytic <= sim.mean_queue:
                failures.append(f"rho={rho}: independence value {analytic:.4f}"
                                f" does not overestimate the simulation "
                                f"{sim.mean_queue:.4f}")
            rel = abs(corr - sim.mean_queue) / sim.mean_queue
            if rel > 0.10:
                failures.append(f"rho={rho}: correlated estimate {corr:.4f} "
                                f"is {rel:.1%} from the simulation "
                                f"{sim.mean_queue:.4f}")
    return (("rho", "simulated_mean", "simulated_se", "correlated_approx",
             "uncorrelated_approx"), rows, failures, ())


def cmd_fermi(cfg: dict, check: bool):
    L = int(cfg["half_width"])
    rho = cfg["rho"]
    model = OccupancyModel.uniform(L)
    dp = occupancy_dist_dp(model)
    ps = occupancy_dist_power_sum(model) if L <= POWER_SUM_MAX_HALF_WIDTH else None
    rows, failures = [], []
    for k, v in enumerate(dp.probs):
        rows.append(("occupancy_dp", k, v))
    if ps is not None:
        for k, v in enumerate(ps.probs):
            rows.append(("occupancy_power_sum", k, v))
    for a in range(-L + 1, 1):
        rows.append(("return_time", a, mean_return_time(model, a)))
    chain = alpha_chain(model, rho)
    for a, pi in zip(chain.states, chain.stationary):
        rows.append(("alpha_stationary", int(a), pi))
    rows.append(("correlated_mean_queue", "", correlated_mean_queue(model, rho)))
    rows.append(("min_alpha", "", min_alpha_for_horizon(model, int(cfg["operations"]))))
    if check:
        if ps is not None and np.max(np.abs(dp.probs - ps.probs)) > 1e-9:
            failures.append("occupancy pmf: recursion and power-sum "
                            "evaluation disagree beyond 1e-9")
        exact = float(empty_probability_exact(L))
        if abs(dp.probs[0] - exact) > 1e-12:
            failures.append(f"P(|I|=0) = {dp.probs[0]:.12g} differs from the "
                            f"exact value {exact:.12g}")
    return ("quantity", "index", "value"), rows, failures, ()


def cmd_simulate(cfg: dict, check: bool):
    family = cfg["family"]
    if family == "gaussian":
        delay = DelayDistribution.gaussian(cfg["sigma"])
    elif family == "uniform_compact":
        delay = DelayDistribution.uniform(float(cfg["half_width"]))
    else:
        raise ConfigError(f"unknown delay family {family!r}")
    proc = PsraProcess(cfg["rate"], delay, cfg["gamma"])
    sim_config = SimConfig(process=proc, service_time=cfg["service_time"],
                           horizon=int(cfg["horizon"]), seed=int(cfg["seed"]),
                           track_occupancy=bool(cfg["track_occupancy"]),
                           keep_trajectory=True)
    n_reps = int(cfg["n_reps"])
    result = replicate(sim_config, n_reps)
    meta = [
        f"summary mean_queue: {_fmt(result.mean_queue)}",
        f"summary mean_queue_se: {_fmt(result.mean_queue_se)}",
        f"summary mean_arrivals_per_slot: {_fmt(result.mean_arrivals_per_slot)}",
        f"summary lag1_autocovariance: {_fmt(result.lag1_autocovariance)}",
        f"summary total_slots: {result.total_slots}",
        f"summary total_arrivals: {result.total_arrivals}",
        f"summary total_services: {result.total_services}",
        f"summary final_queue: {result.final_queue}",
    ]
    failures = []
    if check:
        balance = (result.total_arrivals - result.total_services
                   - result.final_queue + result.initial_queue)
        if balance != 0:
            failures.append(f"conservation violated: arrivals - services - "
                            f"queue change = {balance}")
    rows = []
    if n_reps == 1:
        if result.alpha is not None:
            columns = ("slot", "arrivals", "queue", "occupancy", "alpha")
            for j in range(result.horizon):
                rows.append((j, int(result.counts[j]), int(result.queue[j]),
                             int(result.occupancy[j]), int(result.alpha[j])))
        else:
            columns = ("slot", "arrivals", "queue")
            for j in range(result.horizon):
                rows.append((j, int(result.counts[j]), int(result.queue[j])))
    else:
        columns = ("replication", "mean_queue")
        for i, v in enumerate(result.rep_means):
            rows.append((i, v))
    return columns, rows, failures, meta


_HANDLERS = {
    "rate-table": cmd_rate_table,
    "intensity-table": cmd_intensity_table,
    "queue-table": cmd_queue_table,
    "fig-independence": cmd_fig_independence,
    "fig-correlated": cmd_fig_correlated,
    "fermi": cmd_fermi,
    "simulate": cmd_simulate,
}


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psra-queue",
        description="Scheduled-arrival queueing experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None,
                       help="INI file with a [%s] section" % name)
        p.add_argument("--out", default=None,
                       help="output CSV path (default: stdout)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the experiment seed")
        p.add_argument("--check", action="store_true",
                       help="compare against embedded expectations; "
                            "exit 4 on mismatch")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args.command, args.config, args.seed)
        columns, rows, failures, meta = _HANDLERS[args.command](cfg, args.check)
        text = _render(args.command, cfg, columns, rows, meta)
    except ConfigError as exc:
        print(f"psra-queue: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"psra-queue: numeric-domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"psra-queue: cannot write {args.out}: {exc}",
                  file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    if failures:
        for f in failures:
            print(f"psra-queue: check failed: {f}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
