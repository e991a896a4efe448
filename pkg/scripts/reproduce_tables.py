"""Plans and simulated power for the four worked examples.

For each example: balanced, optimal and Noether sample sizes, each with its
Monte-Carlo power.

    python3 scripts/reproduce_tables.py --reps 10000 --seed 0
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from wmwplan import PlanInput, load_example, plan, simulate_power


@dataclass(frozen=True)
class Config:
    examples: tuple[str, ...] = ("seizures", "nasal", "kidney", "albumin")
    replications: int = 10_000
    seed: int = 0
    workers: int = 1
    as_json: bool = False


def rows_for(name: str, cfg: Config) -> list[dict]:
    ex = load_example(name)
    balanced = plan(ex.f1, ex.f2, PlanInput(ex.alpha, ex.power, "balanced"))
    optimal = plan(ex.f1, ex.f2, PlanInput(ex.alpha, ex.power, "optimal"))
    k = balanced.noether_n_per_group
    designs = [
        ("balanced", 0.5, balanced.n1, balanced.n2),
        ("optimal", optimal.t, optimal.n1, optimal.n2),
        ("Noether", 0.5, k, k),
    ]
    out = []
    for label, t, n1, n2 in designs:
        sim = simulate_power(ex.f1, ex.f2, n1, n2, ex.alpha, cfg.replications, cfg.seed, cfg.workers)
        out.append(dict(example=name, design=label, t=t, n1=n1, n2=n2,
                        power=sim.power_hat, mc_stderr=sim.mc_stderr))
    return out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--examples", nargs="+", default=list(Config.examples))
    ap.add_argument("--reps", type=int, default=Config.replications)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--workers", type=int, default=Config.workers)
    ap.add_argument("--json", action="store_true")
    ns = ap.parse_args(argv)
    cfg = Config(tuple(ns.examples), ns.reps, ns.seed, ns.workers, ns.json)

    start = time.perf_counter()
    rows = [row for name in cfg.examples for row in rows_for(name, cfg)]
    if cfg.as_json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'example':<10}{'design':<10}{'t':>8}{'n1/n2':>13}{'power':>9}{'se':>8}")
    for r in rows:
        sizes = f"{r['n1']}/{r['n2']}"
        print(f"{r['example']:<10}{r['design']:<10}{r['t']:>8.4f}{sizes:>13}"
              f"{r['power']:>9.4f}{r['mc_stderr']:>8.4f}")
    print(f"\n{cfg.replications} replications per row, seed {cfg.seed}, "
          f"{time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
