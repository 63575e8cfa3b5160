"""
Command line interface.

    herding-market simulate [--config PATH] [--seed INT] [--out DIR]
    herding-market sweep    [--config PATH] [--seed INT] [--out DIR] [--alpha A] [--delta D] [--workers N]
    herding-market analyze  --input PATH [--out DIR]

Exit status 0 on success, 1 on any error (printed as "error: <message>"), 2 on invalid usage.
"""

import argparse
import os
import sys

from herding_market.core import sim_logging
from herding_market.core.component_manager import SimComponentManager
from herding_market.experiments import (
    RunScenarioRequest,
    ScenarioComponent,
    bifurcation_sweep,
    horizon_steps,
)
from herding_market.stats import daily_returns, summarize

from . import files
from .config import RunConfig, parse_config, write_config

CONFIG_FILE = "config.json"
PRICES_FILE = "prices.csv"
RETURNS_FILE = "daily_returns.csv"
SUMMARY_FILE = "summary.json"
SWEEP_FILE = "sweep.csv"
LOG_FILE = "run.log"


def build_summary(config, model_log_prices, baseline_log_prices, sigma):
    """
    summary.json content. Depends only on the stored series and the resolved config, so analyze reproduces
    it exactly from prices.csv and config.json.
    :param config: RunConfig
    :rtype: dict
    """
    model = config.model
    summary = summarize(
        model_log_prices,
        baseline_log_prices,
        sigma,
        model.steps_per_day,
        horizon_steps(config.window_years, model.steps_per_day, config.days_per_year),
        acf_lags=config.acf_lags,
        acf_max_lag=config.acf_max_lag,
        tail_fraction=config.tail_fraction,
    )
    summary["seed"] = config.seed
    summary["config_hash"] = config.fingerprint()
    summary["config"] = config.to_dict()
    return summary


def _load_config(args):
    config = parse_config(args.config) if args.config else RunConfig()

    overrides = {}
    for key in ("seed", "alpha", "delta", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if args.out is not None:
        overrides["output_dir"] = args.out
    if overrides:
        config = config.replace(**overrides)
    return config


def _prepare_output(directory, log_level):
    os.makedirs(directory, exist_ok=True)
    log_file = os.path.join(directory, LOG_FILE)
    logger = sim_logging.get_sim_logger(
        "herding-market", sim_logging.get_level(log_level), log_file=log_file
    )
    return logger, log_file


def simulate(args):
    config = _load_config(args)
    out = config.output_dir
    log_level = sim_logging.get_level(config.log_level)
    logger, log_file = _prepare_output(out, config.log_level)

    logger.info(
        "Simulating {} years with {} agents, seed {} (config {})".format(
            config.horizon_years, config.model.num_agents, config.seed, config.fingerprint()[:12]
        )
    )
    write_config(config, os.path.join(out, CONFIG_FILE))

    request = RunScenarioRequest(
        config.seed,
        config.horizon_years,
        snapshot_times=config.snapshot_times,
        days_per_year=config.days_per_year,
        snapshot_sigma_tolerance=config.snapshot_sigma_tolerance,
    )
    manager = SimComponentManager(
        ScenarioComponent, conf=config.model, log_level=log_level, log_file=log_file
    )
    output = manager.run([request])[0]

    files.write_prices(output, os.path.join(out, PRICES_FILE))
    files.write_daily_returns(
        daily_returns(output.model_log_prices, output.steps_per_day),
        daily_returns(output.baseline_log_prices, output.steps_per_day),
        os.path.join(out, RETURNS_FILE),
    )
    for density in output.snapshots:
        path = os.path.join(out, "threshold_density_{}.csv".format(density.step))
        files.write_threshold_density(density, path)
        logger.info(
            "Threshold density at step {} (sigma {:.4f}) written to {}".format(
                density.step, density.sigma, path
            )
        )

    summary = build_summary(
        config, output.model_log_prices, output.baseline_log_prices, output.sigma
    )
    files.write_summary(summary, os.path.join(out, SUMMARY_FILE))

    logger.info(
        "Excess kurtosis model {} baseline {}, max|sigma| {:.4f}".format(
            summary["model"]["excess_kurtosis"],
            summary["baseline"]["excess_kurtosis"],
            summary["sentiment"]["max_abs_sigma"],
        )
    )
    logger.info("Output written to {}".format(os.path.abspath(out)))
    return 0


def sweep(args):
    config = _load_config(args)
    out = config.output_dir
    logger, log_file = _prepare_output(out, config.log_level)
    write_config(config, os.path.join(out, CONFIG_FILE))

    result = bifurcation_sweep(
        config.model,
        cmax_values=config.cmax_values,
        runs_per_point=config.runs_per_point,
        horizon_years=config.horizon_years,
        window_years=config.window_years,
        seed=config.seed,
        initial_sigma=config.sweep_initial_sigma,
        days_per_year=config.days_per_year,
        workers=config.workers,
        log_level=sim_logging.get_level(config.log_level),
        log_file=log_file,
    )

    path = os.path.join(out, SWEEP_FILE)
    files.write_sweep(result, path)
    for point in result.points:
        logger.info("C_max {:>6g}: mean max|sigma| {:.4f}".format(point.c_max, point.mean))
    logger.info("Sweep written to {}".format(os.path.abspath(path)))
    return 0


def _locate_prices(path):
    if os.path.isdir(path):
        return os.path.join(path, PRICES_FILE)
    return path


def analyze(args):
    prices_path = _locate_prices(args.input)
    config_path = os.path.join(os.path.dirname(os.path.abspath(prices_path)), CONFIG_FILE)
    has_config = os.path.isfile(config_path)
    config = parse_config(config_path) if has_config else RunConfig()

    out = args.out if args.out is not None else os.path.dirname(os.path.abspath(prices_path))
    logger, _ = _prepare_output(out, config.log_level)
    if not has_config:
        logger.warning("No {} next to {}, using the default configuration".format(CONFIG_FILE, prices_path))

    num_steps = None
    if has_config:
        num_steps = horizon_steps(
            config.horizon_years, config.model.steps_per_day, config.days_per_year
        )
    frame = files.read_prices(prices_path, num_steps=num_steps)
    summary = build_summary(
        config,
        frame["model_log_price"].to_numpy(),
        frame["baseline_log_price"].to_numpy(),
        frame["sigma"].to_numpy(),
    )
    path = os.path.join(out, SUMMARY_FILE)
    files.write_summary(summary, path)
    logger.info("Summary of {} written to {}".format(prices_path, os.path.abspath(path)))
    return 0


def _parser():
    parser = argparse.ArgumentParser(
        prog="herding-market",
        description="Agent-based market simulation with moving price thresholds and herding",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate_parser = commands.add_parser(
        "simulate", help="Run one scenario and write prices, returns and a summary"
    )
    sweep_parser = commands.add_parser(
        "sweep", help="Run the herding strength bifurcation sweep"
    )
    for sub in (simulate_parser, sweep_parser):
        sub.add_argument("--config", help="JSON config file, defaults when omitted")
        sub.add_argument("--seed", type=int, help="Override the seed of the config")
        sub.add_argument("--out", help="Override the output directory of the config")
    simulate_parser.set_defaults(handler=simulate)

    sweep_parser.add_argument("--alpha", type=float, help="Fast agent distortion of the variant")
    sweep_parser.add_argument("--delta", type=float, help="Threshold volatility of the variant")
    sweep_parser.add_argument("--workers", type=int, help="Number of worker processes")
    sweep_parser.set_defaults(handler=sweep)

    analyze_parser = commands.add_parser(
        "analyze", help="Recompute summary.json from a stored prices.csv"
    )
    analyze_parser.add_argument(
        "--input", required=True, help="prices.csv or the directory holding it"
    )
    analyze_parser.add_argument(
        "--out", help="Directory for summary.json, defaults to the input directory"
    )
    analyze_parser.set_defaults(handler=analyze)

    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        return args.handler(args)
    except Exception as e:
        print("error: {}".format(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
