"""Command-line surface: keygen, roundtrip, bounds, attack, ebcheck.

Every subcommand loads one JSON config file, applies the shared flag
overrides (--seed, --trials, --out, --format), runs deterministically from
the seed, and writes CSV or JSON to the output path (stdout by default).
Tables carry a comment row echoing the config hash. Exit code 0 on
success, 2 on validation or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np
from scipy.special import ndtr
from scipy.stats import ks_2samp

from . import adversary, bounds, ebprep, protocol
from .codec import bits_to_hex, hex_to_bits
from .config import RunConfig, config_hash, load_config
from .gaussian import Quadrature

FIGURE_COLUMNS = """\
figure columns (grid coordinates first, value last):
  report - one row of beta, eps_df, tau, win_bound, asymptotic_margin plus the parameter echo
  fig1   - alpha, squeezing, margin (negative margin = asymptotically securable)
  fig2a  - squeezing, transmittance, beta_noisy (excess noise fixed, default 0.001)
  fig2b  - transmittance, excess_noise, beta_noisy (squeezing fixed, default 3.6)
  fig4   - msg_len, ideal, conjugate_coding, cv_scheme (winning-probability bounds)
"""


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_csv(columns, rows, digest: str) -> str:
    lines = [f"# config={digest}", ",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _clean(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def write_table(columns, rows, config: RunConfig) -> None:
    digest = config_hash(config)
    if config.fmt == "csv":
        emit(render_csv(columns, rows, digest), config.out)
    else:
        payload = {
            "config_hash": digest,
            "columns": list(columns),
            "rows": [_clean(list(row)) for row in rows],
        }
        emit(render_json(payload), config.out)


def write_record(record: dict, config: RunConfig) -> None:
    if config.fmt == "csv":
        columns = list(record)
        write_table(columns, [[record[c] for c in columns]], config)
    else:
        payload = {"config_hash": config_hash(config), **_clean(record)}
        emit(render_json(payload), config.out)


# --- key serialization ----------------------------------------------------

def key_to_dict(key: protocol.QecmKey, config: RunConfig) -> dict:
    """Key file schema: s/phi as hex bit strings, k as a decimal array."""
    return {
        "s": bits_to_hex(key.pad),
        "phi": bits_to_hex(key.directions),
        "k": [float(v) for v in key.offsets],
        "label": int(key.label),
        "params": config.to_dict()["protocol"],
    }


def load_key(path) -> tuple[protocol.QecmKey, dict]:
    """Read a key file back into a QecmKey; returns (key, params dict)."""
    raw = json.loads(Path(path).read_text())
    params = raw["params"]
    pad = hex_to_bits(raw["s"], int(params["pad_len"]))
    directions = hex_to_bits(raw["phi"], int(params["num_modes"]))
    key = protocol.QecmKey(pad, directions, np.array(raw["k"], dtype=float), int(raw["label"]))
    return key, params


# --- subcommands ------------------------------------------------------------

def cmd_keygen(config: RunConfig) -> int:
    rng = np.random.default_rng(config.seed)
    key = protocol.key_gen(config.protocol, rng)
    payload = {"config_hash": config_hash(config), **key_to_dict(key, config)}
    emit(render_json(payload), config.out)
    return 0


def cmd_roundtrip(config: RunConfig) -> int:
    params = config.protocol
    record = {
        "trials": config.trials,
        "beta_analytic": bounds.ber_analytic(params.alpha, params.squeezing),
        "eps_df": bounds.eps_df(
            params.num_modes, params.max_errors, params.alpha, params.squeezing
        ),
    }
    if config.channel is not None:
        from .channel import noisy_ber, noisy_variance

        record["beta_noisy"] = noisy_ber(params.alpha, params.squeezing, config.channel)
        record["noisy_variance"] = noisy_variance(params.squeezing, config.channel)
    if config.trials > 0:
        rng = np.random.default_rng(config.seed)
        result = protocol.run_round_trip(params, config.trials, rng, channel=config.channel)
        record.update(
            failures=result.failures,
            failure_rate=result.failure_rate,
            failure_rate_low=result.interval[0],
            failure_rate_high=result.interval[1],
            flip_rate=result.flip_rate,
            modes_total=result.modes_total,
        )
    write_record(record, config)
    return 0


def cmd_bounds(config: RunConfig) -> int:
    if config.figure == "report":
        report = bounds.security_report(config.protocol)
        record = report.as_dict()
        write_record(record, config)
        return 0
    columns, rows = bounds.figure_data(config.figure, config.grid)
    write_table(columns, rows, config)
    return 0


def cmd_attack(config: RunConfig) -> int:
    rng = np.random.default_rng(config.seed)
    strategy = adversary.make_strategy(config.strategy)
    outcome = adversary.run_cloning_game(config.protocol, strategy, config.trials, rng)
    check = adversary.check_against_bound(outcome, config.protocol)
    payload = {
        "config_hash": config_hash(config),
        "outcome": outcome.as_dict(),
        "bound_check": check.as_dict(),
    }
    emit(render_json(payload), config.out)
    return 0


def cmd_ebcheck(config: RunConfig) -> int:
    params = config.protocol
    rng = np.random.default_rng(config.seed)
    report = ebprep.game_equivalence_test(params, config.trials, rng)

    spec = ebprep.RestrictedEprSpec(params.squeezing, 1, params.alpha)
    accepted = np.empty(config.rejection_samples)
    attempts = 0
    cov_err = 0.0
    target = np.diag([1.0 / math.cosh(params.squeezing), math.cosh(params.squeezing)])
    for i in range(config.rejection_samples):
        outcome, mode, tries = ebprep.eb_rejection_oracle(
            params.squeezing, params.alpha, 1, rng
        )
        accepted[i] = outcome
        attempts += tries
        cov_err = max(cov_err, float(np.max(np.abs(mode.cov - target))))
    direct = np.array(
        [ebprep.sample_eb_mode(spec, rng, Quadrature.Q)[0] for _ in range(config.rejection_samples)]
    )
    sigma = math.sqrt(0.5 * math.cosh(params.squeezing))
    expected_ratio = float(ndtr(params.alpha / sigma) - ndtr(-params.alpha / sigma))
    ks = ks_2samp(accepted, direct)
    payload = {
        "config_hash": config_hash(config),
        "equivalence": report.as_dict(),
        "rejection_oracle": {
            "samples": config.rejection_samples,
            "attempts": attempts,
            "acceptance_ratio": config.rejection_samples / attempts,
            "expected_ratio": expected_ratio,
            "conditional_cov_error": cov_err,
            "ks_statistic": float(ks.statistic),
            "ks_pvalue": float(ks.pvalue),
        },
    }
    emit(render_json(payload), config.out)
    return 0


COMMANDS = {
    "keygen": cmd_keygen,
    "roundtrip": cmd_roundtrip,
    "bounds": cmd_bounds,
    "attack": cmd_attack,
    "ebcheck": cmd_ebcheck,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvue",
        description="Continuous-variable unclonable-encryption simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "keygen": "generate a key and write it as JSON",
        "roundtrip": "Monte-Carlo decryption-failure rate next to the analytic bounds",
        "bounds": "closed-form security report or figure data tables",
        "attack": "cloning-game Monte Carlo for a concrete strategy",
        "ebcheck": "entanglement-based preparation equivalence checks",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(
            name,
            help=help_text,
            epilog=FIGURE_COLUMNS if name == "bounds" else None,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.add_argument("config", help="path to the JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--trials", type=int, default=None, help="override the trial count")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", default=None, choices=["csv", "json"], help="output format")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "seed": args.seed,
        "trials": args.trials,
        "out": args.out,
        "format": args.format,
    }
    try:
        config = load_config(args.config, overrides)
        return COMMANDS[args.command](config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
