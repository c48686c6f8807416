"""Command-line front end: ``waterspin sweep|validate|show``.

Exit codes: 0 success, 1 configuration or I/O error, 2 numerical validation
failure (nothing is written in that case).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import isomer
from .qcore import ValidationError, trace_distance

STDOUT = "-"

COLUMNS = (
    "p", "p_prime",
    "para_gas", "ortho_gas", "ratio_gas",
    "para_liq", "ortho_liq", "ratio_liq",
    "negativity_liq", "entangled",
    "purity_gas", "purity_liq", "entropy_gas_bits",
    "sx_gas", "sy_gas", "sz_gas",
    "sx_liq", "sy_liq", "sz_liq",
    "mc_trace_dist",
)  # fmt: skip

_TOP_KEYS = {"sweep", "method", "mc_samples", "seed", "damping", "gas_variant", "output_format", "output_path"}
_SWEEP_KEYS = {"p_start", "p_end", "p_steps"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    p_start: float
    p_end: float
    p_steps: int
    method: str = "exact"
    mc_samples: int = 100_000
    seed: int = 0
    damping: float = 1.0
    gas_variant: str = "coherent"
    output_format: str = "csv"
    output_path: str = STDOUT

    def __post_init__(self):
        check_config(self)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_real(x) -> bool:
    return (_is_int(x) or isinstance(x, float)) and math.isfinite(x)


def check_config(cfg: ScenarioConfig) -> None:
    for name in ("p_start", "p_end", "damping"):
        if not _is_real(getattr(cfg, name)):
            raise ConfigError(f"{name}: expected a finite number")
    for name in ("p_steps", "mc_samples", "seed"):
        if not _is_int(getattr(cfg, name)):
            raise ConfigError(f"{name}: expected an integer")
    if not 0.0 <= cfg.p_start <= cfg.p_end <= 1.0:
        if cfg.p_start > cfg.p_end:
            raise ConfigError("sweep: p_start ≤ p_end violated")
        raise ConfigError("sweep: p_start and p_end must lie in [0, 1]")
    if cfg.p_steps < 1:
        raise ConfigError("p_steps: must be ≥ 1")
    if cfg.mc_samples < 1:
        raise ConfigError("mc_samples: must be ≥ 1")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed: must be a 64-bit unsigned integer")
    if not 0.0 <= cfg.damping <= 1.0:
        raise ConfigError("damping: must lie in [0, 1]")
    if cfg.method not in ("exact", "mc"):
        raise ConfigError(f"method: expected 'exact' or 'mc', got {cfg.method!r}")
    if cfg.gas_variant not in ("coherent", "mixed"):
        raise ConfigError(f"gas_variant: expected 'coherent' or 'mixed', got {cfg.gas_variant!r}")
    if cfg.output_format not in ("csv", "json"):
        raise ConfigError(f"output_format: expected 'csv' or 'json', got {cfg.output_format!r}")
    if not isinstance(cfg.output_path, str) or not cfg.output_path:
        raise ConfigError("output_path: expected a non-empty string")


def parse_config(document: str) -> ScenarioConfig:
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(raw) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    sweep = raw.get("sweep")
    if not isinstance(sweep, dict):
        raise ConfigError("sweep: required object with p_start, p_end, p_steps")
    unknown = sorted(set(sweep) - _SWEEP_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s) in sweep: {', '.join(unknown)}")
    missing = sorted(_SWEEP_KEYS - set(sweep))
    if missing:
        raise ConfigError(f"sweep: missing {', '.join(missing)}")
    kwargs = {k: v for k, v in raw.items() if k != "sweep"}
    if kwargs.get("output_path") is None:
        kwargs.pop("output_path", None)
    return ScenarioConfig(**sweep, **kwargs)


def p_grid(cfg: ScenarioConfig) -> list[float]:
    if cfg.p_steps == 1:
        return [float(cfg.p_start)]
    step = (cfg.p_end - cfg.p_start) / (cfg.p_steps - 1)
    return [cfg.p_start + k * step for k in range(cfg.p_steps)]


def _sweep_point(p: float, cfg: ScenarioConfig) -> dict:
    gas = isomer.rho_gas(p) if cfg.gas_variant == "coherent" else isomer.rho_gas_mixed_variant(p)
    w, liq = isomer.gas_to_liquid(gas, cfg.method, cfg.mc_samples, cfg.seed, cfg.damping)
    rg = isomer.report(gas)
    rl = isomer.report(liq, w)
    mc_dist = None
    if cfg.method == "mc":
        _, exact = isomer.gas_to_liquid(gas, "exact", damping=cfg.damping)
        mc_dist = trace_distance(liq, exact)
    return {
        "p": p,
        "p_prime": w.p_prime,
        "para_gas": rg.para_fraction,
        "ortho_gas": rg.ortho_fraction,
        "ratio_gas": rg.ortho_para_ratio,
        "para_liq": rl.para_fraction,
        "ortho_liq": rl.ortho_fraction,
        "ratio_liq": rl.ortho_para_ratio,
        "negativity_liq": rl.negativity,
        "entangled": int(rl.entangled),
        "purity_gas": rg.purity,
        "purity_liq": rl.purity,
        "entropy_gas_bits": rg.entropy_bits,
        "sx_gas": rg.magnetization_xyz[0],
        "sy_gas": rg.magnetization_xyz[1],
        "sz_gas": rg.magnetization_xyz[2],
        "sx_liq": rl.magnetization_xyz[0],
        "sy_liq": rl.magnetization_xyz[1],
        "sz_liq": rl.magnetization_xyz[2],
        "mc_trace_dist": mc_dist,
    }


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> list[dict]:
    """One row per grid point, in grid order regardless of ``workers``."""
    grid = p_grid(cfg)
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: _sweep_point(p, cfg), grid))
    return [_sweep_point(p, cfg) for p in grid]


def format_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf"
    # round-off residue below 1e-15 is printed as an exact zero so golden files are platform-stable
    if abs(x) < 1e-15:
        x = 0.0
    return f"{x:.12g}"


def _json_value(x):
    s = format_value(x)
    if s == "":
        return None
    if s == "inf":
        return "inf"
    if isinstance(x, (bool, int, np.integer)):
        return int(s)
    return float(s)


def emit(rows: list[dict], fmt: ScenarioConfig | str = "csv") -> bytes:
    if isinstance(fmt, ScenarioConfig):
        fmt = fmt.output_format
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in COLUMNS])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        data = [{c: _json_value(row[c]) for c in COLUMNS} for row in rows]
        return (json.dumps(data, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown output format {fmt!r}")


def _write(payload: bytes, path: str) -> None:
    if path == STDOUT:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(payload)


def _load_config(path: str) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    overrides = {
        "output_path": args.output,
        "output_format": args.format,
        "seed": args.seed,
        "mc_samples": args.samples,
        "method": args.method,
    }
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    try:
        rows = run_sweep(cfg, workers=args.workers)
    except ValidationError as exc:
        print(f"error: numerical validation failed: {exc}", file=sys.stderr)
        return 2
    try:
        _write(emit(rows, cfg), cfg.output_path)
    except OSError as exc:
        print(f"error: cannot write {cfg.output_path}: {exc.strerror}", file=sys.stderr)
        return 1
    return 0


def _cmd_validate(args) -> int:
    _load_config(args.config)
    return 0


def _cmd_show(args) -> int:
    try:
        rho = isomer.rho_gas(args.p) if args.state == "gas" else isomer.rho_liq(args.p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    m = rho.matrix
    real = bool(np.all(np.abs(m.imag) < 1e-15))
    for row in m:
        if real:
            cells = [f"{z.real + 0.0:10.6f}" for z in row]
        else:
            cells = [f"{z.real + 0.0:.6f}{z.imag + 0.0:+.6f}j" for z in row]
        print(" ".join(cells))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="waterspin", description="Water proton-spin isomer simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a p-sweep and write a CSV/JSON report")
    sw.add_argument("--config", required=True)
    sw.add_argument("--output", help="output file, '-' for stdout")
    sw.add_argument("--format", choices=("csv", "json"))
    sw.add_argument("--seed", type=int)
    sw.add_argument("--samples", type=int, help="Monte-Carlo twirl samples")
    sw.add_argument("--method", choices=("exact", "mc"))
    sw.add_argument("--workers", type=int, default=1, help="grid points evaluated concurrently")
    sw.set_defaults(func=_cmd_sweep)

    va = sub.add_parser("validate", help="parse a config and exit 0 if valid")
    va.add_argument("--config", required=True)
    va.set_defaults(func=_cmd_validate)

    sh = sub.add_parser("show", help="print a 4x4 state matrix")
    sh.add_argument("--state", choices=("gas", "liquid"), required=True)
    sh.add_argument("--p", type=float, required=True, help="gas singlet weight p, or Werner p' for liquid")
    sh.set_defaults(func=_cmd_show)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: numerical validation failed: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
