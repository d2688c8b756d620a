"""Command-line front end.

    paulitwirl build     --input noise.txt [--stabilisers Z,XX] [--baseline]
    paulitwirl verify    --input noise.txt [--tol 1e-10] [--seed 0] [--baseline]
    paulitwirl simulate  --input noise.txt [--samples 10000] [--seed 0]
    paulitwirl decompose --input noise.txt
    paulitwirl tables    --size 3

JSON goes to ``--output`` (or stdout when omitted, with ``--format json``);
a plain-text summary goes to stdout. Exit status is 0 when every requested
check passes, 1 when a check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import report, sim
from .builder import build_twirl_plan, generator_table, quotient_table
from .channels import DENSE_LIMIT, as_pauli_sum
from .noisefile import parse_noise_spec
from .pauli import parse_pauli

COMMANDS = ("decompose", "build", "verify", "simulate", "tables")


@dataclass
class RunConfig:
    command: str
    input: Optional[Path] = None
    output: Optional[Path] = None
    format: str = "text"
    seed: int = 0
    samples: int = 10_000
    tol: float = 1e-10
    dense_limit: int = DENSE_LIMIT
    state_limit: int = sim.STATE_LIMIT
    stabilisers: Optional[str] = None
    baseline: bool = False
    size: int = 3

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.tol <= 0:
            raise ValueError("--tol must be positive")
        if self.samples < 1:
            raise ValueError("--samples must be at least 1")


def _load(config: RunConfig):
    if config.input is None:
        raise ValueError(f"{config.command} needs --input")
    channel = parse_noise_spec(Path(config.input).read_text())
    return channel


def _stabilisers(config: RunConfig, n: int):
    if config.stabilisers is None:
        return None
    return [parse_pauli(tok, n) for tok in config.stabilisers.split(",") if tok.strip()]


def _plan_summary(data) -> str:
    d = data["diagnostics"]
    lines = [
        f"V       ({d['size_V']}): {' '.join(data['V'])}",
        f"V~      ({d['size_V_tilde']}): {' '.join(data['V_tilde'])}",
        f"V_S     ({d['size_V_S']}): {' '.join(data['V_S'])}",
        f"N = {data['N']}",
        f"W~      ({d['size_W_tilde']}): {' '.join(data['W_tilde'])}",
        f"|W| = {d['size_W']}  (full Pauli twirl: {d['baseline_generators']} generators)",
        f"twirling condition: {'ok' if data['condition']['ok'] else 'VIOLATED'}",
    ]
    if d["union_basis"]:
        lines.append("note: multi-operator channel twirled over the union basis (not optimal)")
    if "substitution" in data:
        sub = data["substitution"]
        lines.append(f"after stabiliser substitution: {' '.join(sub['active']) or '(none)'}")
    return "\n".join(lines)


def _cmd_decompose(config: RunConfig):
    channel = _load(config)
    data = {
        "n": channel.n,
        "kraus": [report.pauli_sum_dict(as_pauli_sum(k)) for k in channel.kraus],
        "weights": channel.branch_weights(),
    }
    text = "\n\n".join(
        "\n".join(f"{t['coefficient'][0]:+.12g} {t['coefficient'][1]:+.12g}j  {t['pauli']}" for t in k["terms"])
        for k in data["kraus"]
    )
    return data, text, True


def _cmd_build(config: RunConfig):
    channel = _load(config)
    plan = build_twirl_plan(channel)
    data = report.plan_dict(plan, _stabilisers(config, channel.n), config.baseline)
    return data, _plan_summary(data), data["condition"]["ok"]


def _cmd_verify(config: RunConfig):
    channel = _load(config)
    plan = build_twirl_plan(channel)
    rep = report.verify_plan(
        plan,
        channel,
        tol=config.tol,
        seed=config.seed,
        state_limit=min(config.state_limit, config.dense_limit),
        baseline=config.baseline,
    )
    data = {
        "plan": report.plan_dict(plan, _stabilisers(config, channel.n), config.baseline),
        "verification": rep.as_dict(),
    }
    return data, _plan_summary(data["plan"]) + "\n\n" + rep.render(), rep.passed


def _cmd_simulate(config: RunConfig):
    channel = _load(config)
    n = channel.n
    if n > min(config.state_limit, config.dense_limit):
        raise ValueError(f"simulate supports at most {config.state_limit} qubits, got {n}")
    plan = build_twirl_plan(channel)
    W = plan.twirling_set()
    rng = np.random.default_rng(config.seed)
    rho = sim.random_density_matrix(n, rng)
    exact = report.twirled_state(W, channel, rho)
    sampled = sum(
        weight * sim.random_twirl(W, k, rho, config.samples, config.seed + b)
        for b, (weight, k) in enumerate(channel.branches())
    )
    predicted = sim.predicted_channel(channel)
    distance = sim.trace_distance(sampled, exact)
    data = {
        "n": n,
        "seed": config.seed,
        "samples": config.samples,
        "W_tilde": report.labels(plan.twirl_generators),
        "predicted_channel": {g.label: report.num(p) for g, p in predicted.probs.items()},
        "exact_vs_predicted_max_abs": report.num(float(np.max(np.abs(exact - predicted.apply(rho))))),
        "random_vs_exact_trace_distance": report.num(distance),
    }
    if n <= 3:
        data["exact_twirled_state"] = [[report.cnum(v) for v in row] for row in exact]
        data["random_twirled_state"] = [[report.cnum(v) for v in row] for row in sampled]
    text = "\n".join(
        [f"p[{g}] = {p:.12g}" for g, p in data["predicted_channel"].items()]
        + [
            f"exact twirl vs predicted channel: {data['exact_vs_predicted_max_abs']:.3e}",
            f"random twirl ({config.samples} samples, seed {config.seed}) trace distance to exact: {distance:.6g}",
        ]
    )
    ok = data["exact_vs_predicted_max_abs"] <= config.tol
    return data, text, ok


def _cmd_tables(config: RunConfig):
    if config.size < 0:
        raise ValueError("--size must be non-negative")
    gen = generator_table(config.size)
    quo = quotient_table(config.size)
    data = {"N": config.size, "generator_table": report.table_dict(gen), "quotient_table": report.table_dict(quo)}
    text = f"generator table (N={config.size})\n{gen.render()}\n\nquotient table\n{quo.render()}"
    return data, text, not gen.composition_violations() and not quo.composition_violations()


_HANDLERS = {
    "decompose": _cmd_decompose,
    "build": _cmd_build,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
    "tables": _cmd_tables,
}


def run(config: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        data, text, ok = _HANDLERS[config.command](config)
    except (ValueError, OSError, RuntimeError) as exc:
        failure = {"status": "error", "command": config.command, "error": type(exc).__name__, "message": str(exc)}
        if config.output is not None:
            Path(config.output).write_text(report.dumps(failure))
        stdout.write(report.dumps(failure))
        return 2
    data = {"status": "ok" if ok else "failed", "command": config.command, **data}
    payload = report.dumps(data)
    if config.output is not None:
        Path(config.output).write_text(payload)
    if config.format == "json" and config.output is None:
        stdout.write(payload)
    else:
        stdout.write(text + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paulitwirl", description="Construct and verify small Pauli twirling sets.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", type=Path, help="noise specification file")
    p.add_argument("--output", "-o", type=Path, help="write the JSON report here")
    p.add_argument("--format", choices=("text", "json"), default="text", help="stdout format when no --output is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000, help="random-twirl samples (simulate)")
    p.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance for dense checks")
    p.add_argument("--dense-limit", type=int, default=DENSE_LIMIT, help="largest qubit count simulated densely")
    p.add_argument("--stabilisers", help="comma-separated measured stabilisers, e.g. 'Z,XX' or 'Z1 Z2'")
    p.add_argument("--baseline", action="store_true", help="compare against the full Pauli twirl")
    p.add_argument("--size", "-N", type=int, default=3, help="number of generators (tables)")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            input=args.input,
            output=args.output,
            format=args.format,
            seed=args.seed,
            samples=args.samples,
            tol=args.tol,
            dense_limit=args.dense_limit,
            stabilisers=args.stabilisers,
            baseline=args.baseline,
            size=args.size,
        )
    except ValueError as exc:
        sys.stdout.write(report.dumps({"status": "error", "command": args.command, "error": "ValueError", "message": str(exc)}))
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
