"""Command-line front end.

Four subcommands: ``fit``, ``integrate``, ``compare``, ``depth``. Options
come from a flat TOML (or JSON) config file, every key overridable by a
flag of the same name; resolved settings are embedded in each JSON report
so any run can be reproduced from its own output. Reports carry no
timestamps - identical seeds give byte-identical files.

Exit status: 0 success, 1 run failure, 2 config error.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import integrator
from .integrator import (
    IntegralRequest,
    TrainingError,
    depth_report,
    exact_reference,
    run_classical_mc,
    run_fqmci,
    run_qfiae,
)
from .iqae import IqaeConfig
from .qnn import (
    TrainingConfig,
    extract_fourier,
    model_forward_batch,
    r_squared,
    train,
)
from .targets import get_target

SCHEMA_VERSION = 1

# every config key with its default; flags mirror these names one-to-one
DEFAULTS = {
    "target": "one_plus_x_squared",
    "method": "qfiae",
    "x_lo": 0.0,
    "x_hi": 1.0,
    "fit_lo": -1.0,
    "fit_hi": 1.0,
    "n_fourier": 10,
    "n_qubits": 4,
    "epsilon": 0.01,
    "alpha": 0.05,
    "shots": 1000,
    "max_rounds": 0,  # 0 = automatic (10x the round budget)
    "learning_rate": 0.05,
    "epochs": 100,
    "num_points": 200,
    "train_seed": 0,
    "seed": 2024,
    "repeat": 1,
    "mc_samples": 1_000_000,
    "infinite_shots": False,
    "loss_ceiling": 0.05,
    "grid_n_fourier": "5,10",
    "grid_shots": "100,1000",
    "k_mean": 9,
    "out_dir": "",  # empty: $QFIAE_OUTPUT_DIR or the working directory
}


class ConfigError(ValueError):
    pass


def _coerce(key, value):
    default = DEFAULTS[key]
    try:
        if isinstance(default, bool):
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in ("1", "true", "yes", "on"):
                return True
            if text in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key!r}: {value!r}") from None


def load_config(path):
    """Flat key-value document; TOML by default, JSON for .json files."""
    raw = Path(path).read_bytes()
    if str(path).endswith(".json"):
        data = json.loads(raw.decode("utf-8"))
        # accept a previous report: its resolved config is nested under "config"
        if isinstance(data, dict) and isinstance(data.get("config"), dict):
            data = data["config"]
    else:
        data = tomllib.loads(raw.decode("utf-8"))
    if not isinstance(data, dict):
        raise ConfigError("config must be a flat table of key = value pairs")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def resolve_config(args):
    """defaults < config file < explicit flags."""
    cfg = dict(DEFAULTS)
    if args.config:
        for key, value in load_config(args.config).items():
            cfg[key] = _coerce(key, value)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = _coerce(key, value)
    if not cfg["out_dir"]:
        cfg["out_dir"] = os.environ.get("QFIAE_OUTPUT_DIR", ".")
    if cfg["method"] not in integrator.METHODS:
        raise ConfigError(f"unknown method {cfg['method']!r}")
    return cfg


def _train_config(cfg, seed):
    return TrainingConfig(
        learning_rate=cfg["learning_rate"],
        epochs=cfg["epochs"],
        num_points=cfg["num_points"],
        domain=(cfg["fit_lo"], cfg["fit_hi"]),
        seed=seed,
    )


def _iqae_config(cfg):
    return IqaeConfig(
        epsilon=cfg["epsilon"],
        alpha=cfg["alpha"],
        shots_per_round=cfg["shots"],
        max_rounds=cfg["max_rounds"] or None,
    )


def _request(cfg, master_seed, method=None, n_fourier=None, shots=None):
    merged = dict(cfg)
    if shots is not None:
        merged["shots"] = shots
    return IntegralRequest(
        target=cfg["target"],
        interval=(cfg["x_lo"], cfg["x_hi"]),
        n_fourier=n_fourier if n_fourier is not None else cfg["n_fourier"],
        n_qubits=cfg["n_qubits"],
        iqae_config=_iqae_config(merged),
        method=method or cfg["method"],
        train_config=_train_config(cfg, cfg["train_seed"]),
        master_seed=master_seed,
        infinite_shots=cfg["infinite_shots"],
        loss_ceiling=cfg["loss_ceiling"],
    )


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path, payload):
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _out(cfg, name):
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / name


def _embedded(cfg):
    """Config as stored in reports: the computation, not the disk layout."""
    return {k: v for k, v in cfg.items() if k != "out_dir"}


def cmd_fit(cfg):
    """Train the model, write loss history, fit curve, and coefficients."""
    target = get_target(cfg["target"]).fn
    train_cfg = _train_config(cfg, cfg["train_seed"])
    scaled, scale = integrator.normalize_target(
        target, train_cfg.domain, integrator.NORMALIZE_GRID
    )
    model, history = train(scaled, train_cfg, cfg["n_fourier"])
    if history[-1] > cfg["loss_ceiling"]:
        print(
            f"fit failed: final loss {history[-1]:.3g} above ceiling "
            f"{cfg['loss_ceiling']:.3g}",
            file=sys.stderr,
        )
        return 1
    series = extract_fourier(model)
    r2 = r_squared(model, lambda x: float(scaled(x)), train_cfg)

    write_csv(
        _out(cfg, "fit_loss.csv"),
        ["epoch", "loss"],
        [(e + 1, l) for e, l in enumerate(history)],
    )
    xs = np.linspace(train_cfg.domain[0], train_cfg.domain[1], 200)
    preds = model_forward_batch(model, xs)
    targets_scaled = np.asarray(scaled(xs), dtype=np.float64)
    write_csv(
        _out(cfg, "fit_curve.csv"),
        ["x", "target", "model"],
        list(zip(xs, targets_scaled, preds)),
    )
    write_json(
        _out(cfg, "fit_fourier.json"),
        {
            "schema_version": SCHEMA_VERSION,
            "config": _embedded(cfg),
            "c0": series.c0,
            "a": list(series.cos_coeffs),
            "b": list(series.sin_coeffs),
            "omega": series.omega,
            "degree": series.degree,
            "seed": cfg["train_seed"],
            "scale_factor": scale,
            "final_loss": history[-1],
            "r_squared": r2,
        },
    )
    print(f"fit: final loss {history[-1]:.3g}, R^2 {r2:.5f}, scale {scale:g}")
    return 0


def _run_one(cfg, master_seed):
    method = cfg["method"]
    if method == integrator.METHOD_QFIAE:
        return run_qfiae(_request(cfg, master_seed))
    if method == integrator.METHOD_FQMCI:
        return run_fqmci(_request(cfg, master_seed))
    if method == integrator.METHOD_CLASSICAL_MC:
        return run_classical_mc(_request(cfg, master_seed), cfg["mc_samples"])
    report = integrator.IntegralReport(
        method=integrator.METHOD_EXACT,
        i_estimate=exact_reference(cfg["target"], (cfg["x_lo"], cfg["x_hi"])),
        error_bar=0.0,
        per_term=[],
        total_oracle_calls=0,
        scale_factor=1.0,
        depth=None,
    )
    report.i_exact = report.i_estimate
    report.ratio_epsilon = 1.0
    return report


def cmd_integrate(cfg):
    """Run the chosen method ``repeat`` times and summarise."""
    repeat = max(1, cfg["repeat"]) if cfg["method"] != integrator.METHOD_EXACT else 1
    rows = []
    reports = []
    for i in range(repeat):
        seed = cfg["seed"] + i
        report = _run_one(cfg, seed)
        reports.append(report)
        rows.append(
            (
                i,
                seed,
                report.i_estimate,
                report.error_bar,
                report.ratio_epsilon if report.ratio_epsilon is not None else math.nan,
                report.total_oracle_calls,
                report.max_grover_power,
            )
        )
    write_csv(
        _out(cfg, "integrate_runs.csv"),
        ["run", "seed", "i_estimate", "error_bar", "ratio", "oracle_calls", "max_k"],
        rows,
    )
    estimates = np.array([r.i_estimate for r in reports])
    ratios = [r.ratio_epsilon for r in reports if r.ratio_epsilon is not None]
    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": _embedded(cfg),
        "method": cfg["method"],
        "runs": repeat,
        "mean_i_estimate": float(estimates.mean()),
        "std_i_estimate": float(estimates.std(ddof=1)) if repeat > 1 else 0.0,
        "mean_error_bar": float(np.mean([r.error_bar for r in reports])),
        "mean_ratio": float(np.mean(ratios)) if ratios else None,
        "mean_oracle_calls": float(np.mean([r.total_oracle_calls for r in reports])),
        "mean_max_k": float(np.mean([r.max_grover_power for r in reports])),
        "i_exact": reports[0].i_exact,
        "all_converged": all(r.all_converged for r in reports),
    }
    write_json(_out(cfg, "integrate_summary.json"), summary)
    ratio_text = f"{summary['mean_ratio']:.4f}" if ratios else "n/a"
    print(
        f"{cfg['method']}: mean I = {summary['mean_i_estimate']:.6f} "
        f"+- {summary['std_i_estimate']:.6f} (ratio {ratio_text}, {repeat} runs)"
    )
    return 0


def cmd_compare(cfg):
    """QFIAE and FQMCI side by side over a grid, identical seeds per cell."""
    n_fouriers = [int(v) for v in str(cfg["grid_n_fourier"]).split(",") if v != ""]
    shots_grid = [int(v) for v in str(cfg["grid_shots"]).split(",") if v != ""]
    repeat = max(1, cfg["repeat"])
    rows = []
    for method in (integrator.METHOD_QFIAE, integrator.METHOD_FQMCI):
        runner = run_qfiae if method == integrator.METHOD_QFIAE else run_fqmci
        for n_fourier in n_fouriers:
            for shots in shots_grid:
                reports = [
                    runner(
                        _request(
                            cfg,
                            cfg["seed"] + i,
                            method=method,
                            n_fourier=n_fourier,
                            shots=shots,
                        )
                    )
                    for i in range(repeat)
                ]
                estimates = np.array([r.i_estimate for r in reports])
                ratios = [r.ratio_epsilon for r in reports if r.ratio_epsilon is not None]
                rows.append(
                    (
                        method,
                        n_fourier,
                        shots,
                        float(estimates.mean()),
                        float(estimates.std(ddof=1)) if repeat > 1 else 0.0,
                        float(np.mean([r.error_bar for r in reports])),
                        float(np.mean(ratios)) if ratios else math.nan,
                    )
                )
    write_csv(
        _out(cfg, "compare_table.csv"),
        ["method", "n_fourier", "shots", "i_est", "std", "mean_error_bar", "ratio"],
        rows,
    )
    for row in rows:
        print(
            f"{row[0]:<14} n_fourier={row[1]:<3} shots={row[2]:<5} "
            f"I={row[3]:.4f} +- {row[4]:.4f}  ratio={row[6]:.4f}"
        )
    return 0


def cmd_depth(cfg):
    print(depth_report(cfg["n_fourier"], cfg["k_mean"], cfg["n_qubits"]))
    return 0


_COMMANDS = {
    "fit": cmd_fit,
    "integrate": cmd_integrate,
    "compare": cmd_compare,
    "depth": cmd_depth,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qfiae",
        description="Fourier-decomposition quantum Monte Carlo integration toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        cmd = sub.add_parser(name, help=fn.__doc__)
        cmd.add_argument("--config", help="flat TOML (or JSON) config file")
        for key in DEFAULTS:
            cmd.add_argument(f"--{key}", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](cfg)
    except TrainingError as exc:
        trace = ", ".join(f"{l:.3g}" for l in exc.loss_history[-5:])
        print(f"run failed: {exc} (last losses: {trace})", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
