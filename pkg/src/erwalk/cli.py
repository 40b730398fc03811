"""Command-line front end.

One executable, one subcommand per experiment: coeffs, simulate, exact,
qv-scan, rate-scan, verify.  Every run is reproducible from (subcommand,
flags, seed): the resolved configuration is echoed into each artifact,
seeds default to a fixed constant rather than the wall clock, and the
counter-based replicate streams make outputs byte-identical for any
worker-thread count.

Option precedence: explicit flag > --config file (flat key=value lines) >
built-in default.  ERW_THREADS is honored when neither flag nor config
sets the thread count.  Exit codes: 2 usage, 3 resource ceiling, 1 failed
verification checks.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .coefficients import asymptotic_ratio_profile, build_coefficients
from .errors import ResourceLimitError
from .martingale import qv_deviation_mc
from .params import WalkParams
from .rates import w1_scan_exact, w1_scan_mc
from .streams import DEFAULT_SEED
from .verify import run_verify
from .walk import (
    DP_CEILING,
    exact_distribution,
    normalize_distribution,
    sample_final_positions,
)

_USAGE_EXIT = 2
_RESOURCE_EXIT = 3


def _fmt(value) -> str:
    """Deterministic text form: shortest round-trip repr for floats."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


# The thread count never changes results (replicate streams are keyed by
# absolute index), so it is not part of an artifact's identity and is kept
# out of the echoed configuration: equal flags + seed must give equal
# bytes for any worker count.
_NON_IDENTITY_KEYS = ("threads",)


def _echo_keys(config: dict) -> list[str]:
    return sorted(key for key in config if key not in _NON_IDENTITY_KEYS)


def _csv_artifact(config: dict, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [f"# {key}={_fmt(config[key])}" for key in _echo_keys(config)]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_artifact(config: dict, payload: dict) -> str:
    doc = dict(payload)
    doc["config"] = {key: config[key] for key in _echo_keys(config)}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _parse_config_file(path: str) -> dict:
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key=value: {line!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _coerce(text: str, like) -> object:
    if isinstance(like, bool):
        return text.lower() in ("1", "true", "yes", "on")
    if isinstance(like, int):
        return int(text)
    if isinstance(like, float):
        return float(text)
    return text


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """flag > config file > default, for every option of the subcommand."""
    file_values = _parse_config_file(args.config) if args.config else {}
    resolved = {}
    for key, default in defaults.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            resolved[key] = _coerce(file_values[key], default)
        else:
            resolved[key] = default
    if resolved.get("threads") is None:
        env = os.environ.get("ERW_THREADS")
        resolved["threads"] = int(env) if env else 1
    return resolved


def _parse_n_list(text: str) -> list[int]:
    try:
        ns = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"--n-list must be comma-separated integers: {text!r}") from exc
    if not ns:
        raise ValueError("--n-list is empty")
    return ns


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erwalk",
        description="Elephant random walk: exact laws, normal-distance scans, verification.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp: argparse.ArgumentParser, *, seeded: bool = False) -> None:
        sp.add_argument("--config", help="flat key=value config file")
        sp.add_argument("--threads", type=int, help="worker threads (ERW_THREADS fallback)")
        sp.add_argument("--out", help="output path (default: stdout)")
        if seeded:
            sp.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")

    sp = sub.add_parser("coeffs", help="emit a_k, v_k and asymptotic ratios as CSV")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--stride", type=int)
    common(sp)

    sp = sub.add_parser("simulate", help="Monte Carlo terminal positions")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--reps", type=int, required=True)
    sp.add_argument("--literal", action="store_const", const=True,
                    help="draw the copy/flip sign and memory index explicitly")
    sp.add_argument("--emit", choices=("samples", "summary"))
    common(sp, seeded=True)

    sp = sub.add_parser("exact", help="exact law of the terminal position as CSV")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--center", action="store_const", const=True,
                    help="emit centered normalized atoms (a_n s - 2q + 1)/sqrt(v_n)")
    sp.add_argument("--dp-ceiling", type=int, dest="dp_ceiling")
    common(sp)

    sp = sub.add_parser("qv-scan", help="quadratic-variation deviation across horizons")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--n-list", dest="n_list", required=True)
    sp.add_argument("--reps", type=int, required=True)
    sp.add_argument("--first-increment", dest="first_increment", choices=("telescoping", "exact"))
    common(sp, seeded=True)

    sp = sub.add_parser("rate-scan", help="distance-to-normal scan with rate envelope")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--n-list", dest="n_list", required=True)
    sp.add_argument("--mode", choices=("exact", "mc"))
    sp.add_argument("--reps", type=int)
    sp.add_argument("--center", action="store_const", const=True)
    sp.add_argument("--dp-ceiling", type=int, dest="dp_ceiling")
    common(sp, seeded=True)

    sp = sub.add_parser("verify", help="run the invariant suite; exit 1 on failure")
    sp.add_argument("--quick", action="store_const", const=True)
    common(sp, seeded=True)

    return parser


def _cmd_coeffs(args: argparse.Namespace) -> int:
    cfg = _resolve(args, {
        "subcommand": "coeffs", "p": args.p, "n": args.n, "stride": 1, "threads": None,
    })
    params = WalkParams(p=cfg["p"], q=0.5, n=cfg["n"])
    table = build_coefficients(params)
    a_ratio, v_ratio = asymptotic_ratio_profile(table)
    stride = max(1, int(cfg["stride"]))
    ks = list(range(1, cfg["n"] + 1, stride))
    if ks[-1] != cfg["n"]:
        ks.append(cfg["n"])
    rows = [
        (k, table.a[k - 1], table.v[k - 1], a_ratio[k - 1], v_ratio[k - 1])
        for k in ks
    ]
    _write_text(args.out, _csv_artifact(cfg, ("k", "a_k", "v_k", "a_ratio", "v_ratio"), rows))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _resolve(args, {
        "subcommand": "simulate", "p": args.p, "q": args.q, "n": args.n,
        "reps": args.reps, "seed": DEFAULT_SEED, "literal": False,
        "emit": "summary", "threads": None,
    })
    params = WalkParams(p=cfg["p"], q=cfg["q"], n=cfg["n"])
    samples = sample_final_positions(
        params, cfg["reps"], cfg["seed"], literal=cfg["literal"], threads=cfg["threads"],
    )
    if cfg["emit"] == "samples":
        rows = ((r, int(s)) for r, s in enumerate(samples))
        _write_text(args.out, _csv_artifact(cfg, ("replicate", "s_n"), rows))
        return 0
    table = build_coefficients(params)
    x = (table.a_n * samples - (2.0 * cfg["q"] - 1.0)) / math.sqrt(table.v_n)
    mu, sd = float(x.mean()), float(x.std(ddof=1))
    centered = x - mu
    payload = {
        "reps": int(cfg["reps"]),
        "mean_s": float(samples.mean()),
        "var_s": float(samples.var(ddof=1)),
        "mean_normalized": mu,
        "var_normalized": sd * sd,
        "skewness_normalized": float((centered ** 3).mean() / sd ** 3),
        "excess_kurtosis_normalized": float((centered ** 4).mean() / sd ** 4 - 3.0),
    }
    _write_text(args.out, _json_artifact(cfg, payload))
    return 0


def _cmd_exact(args: argparse.Namespace) -> int:
    cfg = _resolve(args, {
        "subcommand": "exact", "p": args.p, "q": args.q, "n": args.n,
        "center": False, "dp_ceiling": DP_CEILING, "threads": None,
    })
    params = WalkParams(p=cfg["p"], q=cfg["q"], n=cfg["n"])
    law = exact_distribution(params, max_n=cfg["dp_ceiling"])
    if cfg["center"]:
        law = normalize_distribution(law, build_coefficients(params), q=cfg["q"], center=True)
    rows = zip(law.atoms, law.weights)
    _write_text(args.out, _csv_artifact(cfg, ("atom", "weight"), rows))
    return 0


def _cmd_qv_scan(args: argparse.Namespace) -> int:
    cfg = _resolve(args, {
        "subcommand": "qv-scan", "p": args.p, "q": args.q, "n_list": args.n_list,
        "reps": args.reps, "seed": DEFAULT_SEED, "first_increment": "telescoping", "threads": None,
    })
    rows = []
    for n in _parse_n_list(cfg["n_list"]):
        result = qv_deviation_mc(
            WalkParams(p=cfg["p"], q=cfg["q"], n=n), cfg["reps"], cfg["seed"],
            first_increment=cfg["first_increment"], threads=cfg["threads"],
        )
        rows.append((n, result.mean_abs_dev, result.stderr))
    _write_text(args.out, _csv_artifact(cfg, ("n", "mean_abs_dev", "stderr"), rows))
    return 0


def _cmd_rate_scan(args: argparse.Namespace) -> int:
    cfg = _resolve(args, {
        "subcommand": "rate-scan", "p": args.p, "q": args.q, "n_list": args.n_list,
        "mode": "exact", "reps": 100_000, "seed": DEFAULT_SEED, "center": False,
        "dp_ceiling": DP_CEILING, "threads": None,
    })
    ns = _parse_n_list(cfg["n_list"])
    if cfg["mode"] == "mc":
        report = w1_scan_mc(
            cfg["p"], cfg["q"], ns, cfg["reps"], cfg["seed"],
            center=cfg["center"], threads=cfg["threads"],
        )
    else:
        report = w1_scan_exact(
            cfg["p"], cfg["q"], ns,
            center=cfg["center"], threads=cfg["threads"], max_n=cfg["dp_ceiling"],
        )
    json_text = _json_artifact(cfg, report.to_dict())
    if args.out is None:
        _write_text(None, json_text)
    else:
        _write_text(args.out, json_text)
        csv_path = str(Path(args.out).with_suffix(".csv"))
        rows = zip(report.ns, report.w1, report.rate, report.ratio)
        _write_text(csv_path, _csv_artifact(cfg, ("n", "w1", "rate", "ratio"), rows))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve(args, {
        "subcommand": "verify", "quick": False, "seed": DEFAULT_SEED, "threads": None,
    })
    results = run_verify(quick=cfg["quick"], seed=cfg["seed"])
    lines = []
    for res in results:
        status = "pass" if res.passed else "FAIL"
        lines.append(f"[{status}] {res.name}: {res.detail}")
    failures = sum(not res.passed for res in results)
    lines.append(f"{len(results) - failures}/{len(results)} checks passed")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 1 if failures else 0


_DISPATCH = {
    "coeffs": _cmd_coeffs,
    "simulate": _cmd_simulate,
    "exact": _cmd_exact,
    "qv-scan": _cmd_qv_scan,
    "rate-scan": _cmd_rate_scan,
    "verify": _cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.subcommand](args)
    except ResourceLimitError as exc:
        print(f"erwalk: {exc}", file=sys.stderr)
        return _RESOURCE_EXIT
    except (ValueError, OSError) as exc:
        print(f"erwalk: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
