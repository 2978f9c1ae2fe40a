#!/usr/bin/env python3
"""
Coherent-error QEC command-line tool

Subcommands:
    channel   closed-form logical channel and infidelity (JSON)
    oracle    exact state-vector channel, optionally with every branch (JSON)
    ramsey    GHZ or logical Ramsey decay curves (CSV)
    fringe    per-row GHZ fringes after a fixed wait (CSV)
    sweep     single-round logical infidelity of the Shor variants (CSV)
    fit       exponential or cosine fit of a CSV series (JSON)
    verify    oracle vs closed-form equivalence suite (JSON, exit 1 on failure)

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

import argparse
import logging
import sys
from dataclasses import replace
from typing import List, Optional

import numpy as np
import pandas as pd

import config
from analytic_channels import (
    afm_shor_channel,
    channel_distance,
    channel_infidelity,
    fm_shor_channel,
    gradient_phases,
    repetition_channel,
    swapped_basis_channel,
    wrap_angle,
)
from codes import build_code, build_shor_code, code_to_dict
from exceptions import CoherentQECError, ConfigError
from experiments import (
    curves_to_frame,
    ghz_fringe,
    ghz_ramsey,
    gradient_fringe_offsets,
    logical_ramsey,
    single_round_sweep,
)
from fitting import fit_cosine, fit_exp_decay
from logging_utils import setup_module_logging, setup_verbose_logging
from oracle_sim import channel_from_branches, simulate_channel, simulate_round
from results_utils import ResultWriter, load_experiment_config

logger = logging.getLogger(__name__)

VARIANTS = ["repetition", "fm", "afm", "swapped_plus", "swapped_minus"]
SHOR_VARIANTS = VARIANTS[1:]


def analytic_channel(variant: str, distance: int, theta: float):
    """Closed-form channel for a variant name"""
    if variant == "repetition":
        return repetition_channel(distance, theta)
    if variant == "fm":
        return fm_shor_channel(distance, theta)
    if variant == "afm":
        return afm_shor_channel(distance, theta)
    return swapped_basis_channel(distance, theta, alternating=variant == "swapped_minus")


def parse_theta_range(text: str) -> np.ndarray:
    """
    Parse "start:stop:step" into an inclusive grid

    Raises:
        ConfigError: On malformed input or a non-positive step
    """
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError as e:
        raise ConfigError(f"Expected start:stop:step, got {text!r}") from e
    if step <= 0 or stop < start:
        raise ConfigError(f"Range {text!r} needs step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    return np.linspace(start, start + (count - 1) * step, count)


def parse_angles(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as e:
        raise ConfigError(f"Angles must be comma separated numbers, got {text!r}") from e


class CoherentQECRunner:
    """Runs one subcommand and writes its result"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.writer = ResultWriter(args.output)
        self.settings = load_experiment_config(args.config)
        self.verification_failed = False

    def _code(self, variant: Optional[str] = None, distance: Optional[int] = None):
        return build_code(
            variant or self.settings.variant,
            distance or self.settings.distance,
            self.settings.mapping,
        )

    def _noise(self):
        noise = self.settings.noise
        if getattr(self.args, "seed", None) is not None:
            noise = replace(noise, seed=self.args.seed)
        return noise

    def _shots(self) -> int:
        shots = getattr(self.args, "shots", None)
        return self.settings.shots if shots is None else shots

    def run_channel(self) -> bool:
        a = self.args
        channel = analytic_channel(a.variant, a.distance, a.theta)
        self.writer.write_json({
            "variant": a.variant,
            "distance": a.distance,
            "theta": a.theta,
            "channel": channel.to_dict(),
        })
        return True

    def run_oracle(self) -> bool:
        a = self.args
        code = build_code(a.variant, a.distance, a.mapping)
        if a.angles:
            angles = np.array(parse_angles(a.angles))
        else:
            angles = a.theta + code.positions * a.gradient
        branches = simulate_round(code, angles)
        document = {
            "code": code_to_dict(code),
            "angles": angles.tolist(),
            "channel": channel_from_branches(branches).to_dict(),
        }
        if a.dump_branches:
            document["branches"] = [b.to_dict() for b in branches]
        self.writer.write_json(document)
        return True

    def run_ramsey(self) -> bool:
        a = self.args
        times = self.settings.times_ms
        if a.kind == "ghz":
            curves = [ghz_ramsey(a.qubits, a.pattern, self._noise(), times, self._shots(), workers=a.workers)]
        else:
            code = self._code(a.variant)
            curves = list(logical_ramsey(code, self._noise(), times, self._shots(),
                                         sample=a.sample, workers=a.workers))
        self.writer.write_frame(curves_to_frame(curves, "time_ms"))
        return True

    def run_fringe(self) -> bool:
        a = self.args
        code = self._code(a.variant)
        wait = self.settings.wait_ms if a.wait is None else a.wait
        curves = ghz_fringe(code, self._noise(), wait, self.settings.phases_rad, self._shots(),
                            row_amplitudes=self.settings.row_amplitudes, sample=a.sample)
        self.writer.write_frame(curves_to_frame(curves, "phase_rad"))
        return True

    def run_sweep(self) -> bool:
        a = self.args
        table = single_round_sweep(a.variants, parse_theta_range(a.thetas), a.distance,
                                   oracle_every=a.oracle_every, workers=a.workers)
        self.writer.write_frame(table)
        return True

    def run_fit(self) -> bool:
        a = self.args
        try:
            frame = pd.read_csv(a.input)
        except (OSError, pd.errors.ParserError) as e:
            raise ConfigError(f"Cannot read {a.input}: {e}") from e
        if "series" in frame.columns:
            labels = frame["series"].unique().tolist()
            if a.series is None and len(labels) > 1:
                raise ConfigError(f"{a.input} holds several series {labels}; pick one with --series")
            if a.series is not None:
                frame = frame[frame["series"] == a.series]
                if frame.empty:
                    raise ConfigError(f"No series {a.series!r} in {a.input}")
        x_name = "time_ms" if a.model == "exp" else "phase_rad"
        if x_name not in frame.columns or "value" not in frame.columns:
            raise ConfigError(f"{a.input} needs columns {x_name} and value")
        stderr = frame["stderr"] if a.weighted and "stderr" in frame.columns else None
        if a.model == "exp":
            result = fit_exp_decay(frame[x_name], frame["value"], stderr)
        else:
            result = fit_cosine(frame[x_name], frame["value"], a.harmonic, stderr)
        document = result.to_dict()
        document["series"] = a.series
        self.writer.write_json(document)
        return True

    def run_verify(self) -> bool:
        a = self.args
        tolerance = config.TOLERANCES["oracle_equivalence"]
        rng = np.random.default_rng(a.seed)
        thetas = rng.uniform(-1.0, 1.0, a.trials)
        checks = []

        dense = a.distance * a.distance <= 12
        if a.distance % 2:
            variants = ["repetition"] + (SHOR_VARIANTS if dense else [])
        else:
            # only the AFM closed form exists at even distance
            variants = ["afm"] if dense else []
        for variant in variants:
            code = build_code(variant, a.distance)
            deviation = 0.0
            for theta in thetas:
                if variant == "fm" and abs(a.distance * theta) >= np.pi:
                    continue
                oracle = simulate_channel(code, np.full(code.n_qubits, theta))
                deviation = max(deviation, channel_distance(oracle, analytic_channel(variant, a.distance, theta)))
            checks.append({"check": f"oracle-{variant}", "deviation": deviation})
            logger.info(f"{code.name}: max deviation {deviation:.3g} over {a.trials} angles")

        dfs_code = build_shor_code(2, "afm")
        dfs = max(channel_infidelity(simulate_channel(dfs_code, np.full(4, theta))) for theta in (0.1, 0.5, 1.0))
        checks.append({"check": "dfs-afm-d2", "deviation": dfs})

        if a.distance == 3:
            theta0, delta = 0.3, 0.02
            for variant, mapping in (("fm", "standard"), ("afm", "standard"), ("afm", "center_0_m2_p2")):
                code = build_shor_code(3, variant, mapping)
                expected = [wrap_angle(p) for p in gradient_phases(code, theta0, delta)]
                fitted = gradient_fringe_offsets(code, theta0, delta)
                deviation = max(abs(wrap_angle(f - e)) for f, e in zip(fitted, expected))
                checks.append({"check": f"gradient-{code.name}", "deviation": deviation})

        worst = max(c["deviation"] for c in checks)
        passed = worst <= tolerance
        self.writer.write_json({
            "distance": a.distance,
            "trials": a.trials,
            "seed": a.seed,
            "tolerance": tolerance,
            "checks": checks,
            "max_deviation": worst,
            "passed": passed,
        })
        if not passed:
            logger.error(f"Verification failed: max deviation {worst:.3g} exceeds {tolerance}")
            self.verification_failed = True
        return passed

    def run(self) -> bool:
        command = getattr(self, f"run_{self.args.command}")
        return command()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Coherent-error QEC simulator and analysis tool")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    parser.add_argument("--output", help="Write results to this file instead of stdout")
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--workers", type=int, default=config.RUNTIME["workers"],
                        help="Worker processes (default from COHERENT_QEC_WORKERS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("channel", help="Closed-form logical channel")
    p.add_argument("--variant", choices=VARIANTS, default="fm")
    p.add_argument("--distance", type=int, default=3)
    p.add_argument("--theta", type=float, required=True)

    p = sub.add_parser("oracle", help="Exact state-vector channel")
    p.add_argument("--variant", choices=VARIANTS, default="fm")
    p.add_argument("--distance", type=int, default=3)
    p.add_argument("--mapping", default="standard")
    p.add_argument("--theta", type=float, default=0.0, help="Common angle")
    p.add_argument("--gradient", type=float, default=0.0, help="Angle increment per ion position")
    p.add_argument("--angles", help="Comma-separated per-qubit angles (overrides --theta)")
    p.add_argument("--dump-branches", action="store_true")

    p = sub.add_parser("ramsey", help="Ramsey decay curves")
    p.add_argument("--kind", choices=["ghz", "logical"], default="logical")
    p.add_argument("--variant", choices=SHOR_VARIANTS)
    p.add_argument("--qubits", type=int, default=3, help="GHZ size for --kind ghz")
    p.add_argument("--pattern", default="fm", help="fm, afm or a bit string for --kind ghz")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--sample", action="store_true", help="Add projective shot noise")

    p = sub.add_parser("fringe", help="Per-row GHZ fringes")
    p.add_argument("--variant", choices=["fm", "afm"])
    p.add_argument("--wait", type=float, help="Wait time in ms")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--sample", action="store_true")

    p = sub.add_parser("sweep", help="Single-round infidelity sweep")
    p.add_argument("--thetas", default="0:0.5:0.01", help="start:stop:step in radians")
    p.add_argument("--variants", nargs="+", choices=SHOR_VARIANTS, default=SHOR_VARIANTS)
    p.add_argument("--distance", type=int, default=3)
    p.add_argument("--oracle-every", type=int, default=10)

    p = sub.add_parser("fit", help="Fit a CSV series")
    p.add_argument("input", help="CSV file produced by ramsey or fringe")
    p.add_argument("--model", choices=["exp", "cos"], default="exp")
    p.add_argument("--series", help="Series label to fit")
    p.add_argument("--harmonic", type=int, default=config.FIT_SETTINGS["harmonic"])
    p.add_argument("--weighted", action="store_true", help="Weight points by their stderr")

    p = sub.add_parser("verify", help="Oracle vs closed-form equivalence suite")
    p.add_argument("--distance", type=int, default=3)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=config.DEFAULT_EXPERIMENT["seed"])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    if args.verbose:
        setup_verbose_logging(__name__)
    else:
        setup_module_logging(__name__)
    if args.workers < 1:
        logger.error("--workers must be at least 1")
        return 2

    try:
        runner = CoherentQECRunner(args)
        if runner.run():
            logger.info(f"{args.command} completed")
            return 0
        return 1 if runner.verification_failed else 2
    except CoherentQECError as e:
        logger.error(f"{args.command} failed: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
