"""Command-line front end: ``wmwplan plan`` and ``wmwplan power``.

Input files:

* one number per line: raw data, unit weights;
* ``value,weight`` per line: a weighted sample;
* ``category,count_g1,count_g2`` per line (``--table``): both groups as an
  ordered frequency table.

Blank lines and lines starting with ``#`` are ignored; a non-numeric first
line is taken as a header.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import datasets
from .planning import PlanInput, PlanResult, plan
from .powersim import PowerResult, default_workers, simulate_power
from .synthetic import (
    WeightedSample,
    from_frequency_table,
    ordinal_shift,
    scale_effect,
    shift_effect,
)


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    example: str | None = None
    g1: str | None = None
    g2: str | None = None
    table: str | None = None
    effect: str | None = None
    grid_size: int = 100_000
    alpha: float | None = None
    power: float | None = None
    allocation: str = "balanced"
    n1: int | None = None
    n2: int | None = None
    replications: int = 10_000
    seed: int = 0
    threads: int | None = None
    output_format: str = "text"

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        return cls(
            subcommand=ns.command,
            example=ns.example,
            g1=ns.g1,
            g2=ns.g2,
            table=ns.table,
            effect=ns.effect,
            grid_size=ns.grid_size,
            alpha=ns.alpha,
            power=ns.power,
            allocation=ns.allocation,
            n1=getattr(ns, "n1", None),
            n2=getattr(ns, "n2", None),
            replications=getattr(ns, "reps", 10_000),
            seed=getattr(ns, "seed", 0),
            threads=getattr(ns, "threads", None),
            output_format=ns.format,
        )


# -- file parsing --------------------------------------------------------


def _data_lines(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, [f.strip() for f in line.split(",")], first
        first = False


def _is_number(s: str) -> bool:
    try:
        return math.isfinite(float(s))
    except ValueError:
        return False


def read_sample(path: str) -> WeightedSample:
    values, weights = [], []
    width = None
    for lineno, fields, first in _data_lines(path):
        if first and not all(_is_number(f) for f in fields):
            continue
        if width is None:
            width = len(fields)
            if width not in (1, 2):
                raise CliError(f"{path}:{lineno}: expected 'value' or 'value,weight'")
        if len(fields) != width:
            raise CliError(f"{path}:{lineno}: expected {width} field(s), got {len(fields)}")
        if not all(_is_number(f) for f in fields):
            raise CliError(f"{path}:{lineno}: not a finite number: {','.join(fields)!r}")
        values.append(float(fields[0]))
        w = float(fields[1]) if width == 2 else 1.0
        if w < 0:
            raise CliError(f"{path}:{lineno}: negative weight")
        weights.append(w)
    v, w = np.array(values), np.array(weights)
    keep = w > 0
    if not np.any(keep):
        raise CliError(f"{path}: no data with positive weight")
    return WeightedSample(v[keep], w[keep])


def read_table(path: str) -> tuple[WeightedSample, WeightedSample]:
    labels, c1, c2 = [], [], []
    for lineno, fields, first in _data_lines(path):
        if len(fields) != 3:
            raise CliError(f"{path}:{lineno}: expected 'category,count_g1,count_g2'")
        if first and not (_is_number(fields[1]) and _is_number(fields[2])):
            continue
        if not (_is_number(fields[1]) and _is_number(fields[2])):
            raise CliError(f"{path}:{lineno}: counts must be finite numbers")
        a, b = float(fields[1]), float(fields[2])
        if a < 0 or b < 0:
            raise CliError(f"{path}:{lineno}: negative count")
        labels.append(fields[0])
        c1.append(a)
        c2.append(b)
    if not labels:
        raise CliError(f"{path}: empty table")
    try:
        return from_frequency_table(labels, c1), from_frequency_table(labels, c2)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


# -- effect specs --------------------------------------------------------


def apply_effect(spec: str, base: WeightedSample) -> WeightedSample:
    """``scale:q[:floor]``, ``shift:delta[:round=k]``,
    ``ordshift:frac:up|down[:cats=0,1,2][:ncat=K]``."""
    kind, _, rest = spec.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "scale":
            if not 1 <= len(parts) <= 2 or (len(parts) == 2 and parts[1] != "floor"):
                raise CliError(f"bad scale effect {spec!r}; expected scale:q[:floor]")
            return scale_effect(base, float(parts[0]), integer_floor=len(parts) == 2)
        if kind == "shift":
            if not 1 <= len(parts) <= 2:
                raise CliError(f"bad shift effect {spec!r}; expected shift:delta[:round=k]")
            decimals = None
            if len(parts) == 2:
                key, _, val = parts[1].partition("=")
                if key != "round":
                    raise CliError(f"bad shift option {parts[1]!r}")
                decimals = int(val)
            return shift_effect(base, float(parts[0]), decimals)
        if kind == "ordshift":
            return _ordshift(spec, parts, base)
    except ValueError as exc:
        raise CliError(f"effect {spec!r}: {exc}") from None
    raise CliError(f"unknown effect {kind!r}; expected scale, shift or ordshift")


def _ordshift(spec: str, parts: list[str], base: WeightedSample) -> WeightedSample:
    if len(parts) < 2:
        raise CliError(f"bad ordshift effect {spec!r}; expected ordshift:frac:up|down[...]")
    frac, direction = float(parts[0]), parts[1]
    cats, ncat = None, None
    for opt in parts[2:]:
        key, _, val = opt.partition("=")
        if key == "cats":
            cats = [int(c) for c in val.split(",") if c]
        elif key == "ncat":
            ncat = int(val)
        else:
            raise CliError(f"bad ordshift option {opt!r}")
    codes = base.values
    if np.any(codes < 0) or np.any(codes != np.round(codes)):
        raise CliError("ordshift needs category codes 0, 1, 2, ... as values")
    k = int(codes.max()) + 1 if ncat is None else ncat
    if k <= codes.max():
        raise CliError(f"ncat={k} is smaller than the largest category code")
    counts = np.zeros(k)
    np.add.at(counts, codes.astype(int), base.weights)
    moved = ordinal_shift(counts, frac, direction, cats)
    return from_frequency_table(list(range(k)), moved)


# -- resolution of inputs ------------------------------------------------


def resolve_inputs(cfg: RunConfig) -> tuple[WeightedSample, WeightedSample, float, float]:
    alpha, power = 0.05, 0.8
    if cfg.example:
        if cfg.g1 or cfg.g2 or cfg.table or cfg.effect:
            raise CliError("--example cannot be combined with --g1/--g2/--table/--effect")
        try:
            ex = datasets.load_example(cfg.example, m=cfg.grid_size)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        f1, f2, alpha, power = ex.f1, ex.f2, ex.alpha, ex.power
    elif cfg.table:
        if cfg.g1 or cfg.g2 or cfg.effect:
            raise CliError("--table cannot be combined with --g1/--g2/--effect")
        f1, f2 = read_table(cfg.table)
    elif cfg.g1:
        if bool(cfg.g2) == bool(cfg.effect):
            raise CliError("give exactly one of --g2 or --effect together with --g1")
        f1 = read_sample(cfg.g1)
        f2 = read_sample(cfg.g2) if cfg.g2 else apply_effect(cfg.effect, f1)
    else:
        raise CliError("no input: use --example, --table, or --g1 with --g2/--effect")
    if cfg.alpha is not None:
        alpha = cfg.alpha
    if cfg.power is not None:
        power = cfg.power
    return f1, f2, alpha, power


def parse_allocation(text: str) -> str | float:
    if text in ("balanced", "optimal"):
        return text
    if text.startswith("fixed:"):
        try:
            return float(text[len("fixed:") :])
        except ValueError:
            pass
    raise CliError(f"bad allocation {text!r}; expected balanced, optimal or fixed:T")


# -- rendering -----------------------------------------------------------


def _clean(obj):
    # JSON without NaN/Infinity; keeps the output standard and round-trippable
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, (np.floating, np.integer)):
        return _clean(obj.item())
    return obj


def render_json(payload: dict) -> str:
    return json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n"


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.4f}"
    return str(x)


def render_plan_text(res: PlanResult) -> str:
    d = res.as_dict()
    iv = "n/a"
    if res.interval is not None:
        iv = f"[{_fmt(res.interval.lower)}, {_fmt(res.interval.upper)}] ({res.interval.kind})"
    rows = [
        ("allocation", str(res.allocation)),
        ("t", _fmt(res.t)),
        ("n1", _fmt(res.n1)),
        ("n2", _fmt(res.n2)),
        ("N", _fmt(res.N)),
        ("N (unrounded)", _fmt(res.N_raw)),
        ("p*", _fmt(d["p_star"])),
        ("sigma*", _fmt(d["sigma_null"])),
        ("sigma1*", _fmt(d["sigma1"])),
        ("sigma2*", _fmt(d["sigma2"])),
        ("kappa", _fmt(d["kappa"])),
        ("t0 interval", iv),
        ("Noether n per group", _fmt(res.noether_n_per_group)),
    ]
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def render_power_text(res: PowerResult) -> str:
    rows = [
        ("n1/n2", f"{res.n1}/{res.n2}"),
        ("alpha", _fmt(res.alpha)),
        ("power", _fmt(res.power_hat)),
        ("MC std. error", _fmt(res.mc_stderr)),
        ("rejections", f"{res.rejections}/{res.replications}"),
        ("seed", str(res.seed)),
    ]
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


# -- commands ------------------------------------------------------------


def _plan_result(cfg: RunConfig, f1, f2, alpha, power) -> PlanResult:
    try:
        inp = PlanInput(alpha=alpha, power=power, allocation=parse_allocation(cfg.allocation))
        return plan(f1, f2, inp)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_plan(cfg: RunConfig) -> str:
    f1, f2, alpha, power = resolve_inputs(cfg)
    res = _plan_result(cfg, f1, f2, alpha, power)
    if cfg.output_format == "json":
        payload = res.as_dict()
        payload.update(alpha=alpha, power=power)
        return render_json(payload)
    return render_plan_text(res)


def cmd_power(cfg: RunConfig) -> str:
    f1, f2, alpha, power = resolve_inputs(cfg)
    if (cfg.n1 is None) != (cfg.n2 is None):
        raise CliError("give both --n1 and --n2, or neither")
    if cfg.n1 is None:
        planned = _plan_result(cfg, f1, f2, alpha, power)
        n1, n2 = planned.n1, planned.n2
    else:
        n1, n2 = cfg.n1, cfg.n2
    try:
        res = simulate_power(
            f1, f2, n1, n2, alpha=alpha, replications=cfg.replications,
            seed=cfg.seed, workers=cfg.threads,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if cfg.output_format == "json":
        return render_json(res.as_dict())
    return render_power_text(res)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wmwplan",
        description="Sample-size planning and power simulation for the WMW test.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("inputs")
    src.add_argument("--example", choices=datasets.EXAMPLE_NAMES)
    src.add_argument("--g1", metavar="PATH", help="reference group data")
    src.add_argument("--g2", metavar="PATH", help="alternative group data")
    src.add_argument("--table", metavar="PATH", help="category,count_g1,count_g2 table")
    src.add_argument("--effect", metavar="SPEC", help="derive group 2 from group 1")
    src.add_argument("--grid-size", type=int, default=100_000,
                     help="quantile grid size for beta55_32 (default: %(default)s)")
    common.add_argument("--alpha", type=float, help="two-sided type-I error rate")
    common.add_argument("--power", type=float, help="target power 1 - beta")
    common.add_argument("--allocation", default="balanced",
                        help="balanced, optimal or fixed:T (default: %(default)s)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    sub.add_parser("plan", parents=[common], help="compute t, n1, n2")
    p = sub.add_parser("power", parents=[common], help="simulate power")
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $WMWPLAN_THREADS or 1)")
    return parser


def run(argv=None) -> str:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(ns)
    if cfg.threads is None and cfg.subcommand == "power":
        try:
            cfg.threads = default_workers()
        except ValueError as exc:
            raise CliError(str(exc)) from None
    return cmd_plan(cfg) if cfg.subcommand == "plan" else cmd_power(cfg)


def main(argv=None) -> int:
    try:
        out = run(argv)
    except CliError as exc:
        print(f"wmwplan: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
