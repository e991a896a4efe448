"""Optimal allocation for Beta(5,5) vs Beta(3,2) as alpha and power vary.

Both distributions are represented by deterministic m-point quantile grids.
Prints t0, N(t0) and N(1/2) for a sweep over alpha (power fixed) and a
sweep over power (alpha fixed).

    python3 scripts/beta_sensitivity.py --grid-size 100000
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from wmwplan import PlanInput, estimands_by_integrals, load_example, minimize_t, sample_size_at_t


@dataclass(frozen=True)
class Config:
    grid_size: int = 100_000
    alphas: tuple[float, ...] = tuple(np.round(np.arange(0.01, 0.105, 0.01), 2))
    powers: tuple[float, ...] = (0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95)
    fixed_alpha: float = 0.05
    fixed_power: float = 0.80


def sweep(e, pairs):
    print(f"{'alpha':>6}{'power':>7}{'t0':>9}{'N(t0)':>11}{'N(1/2)':>11}")
    for alpha, power in pairs:
        inp = PlanInput(alpha, power)
        opt = minimize_t(e, inp)
        print(f"{alpha:>6.2f}{power:>7.2f}{opt.t:>9.4f}{opt.N_raw:>11.4f}"
              f"{sample_size_at_t(e, inp, 0.5):>11.4f}")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-size", type=int, default=Config.grid_size)
    cfg = Config(grid_size=ap.parse_args(argv).grid_size)

    ex = load_example("beta55_32", m=cfg.grid_size)
    e = estimands_by_integrals(ex.f1, ex.f2)
    print(f"m = {cfg.grid_size}: p = {e.p_star:.5f}, kappa = {e.kappa:.4f}, "
          f"sigma^2 = {e.sigma2_null:.6f}\n")
    sweep(e, [(a, cfg.fixed_power) for a in cfg.alphas])
    print()
    sweep(e, [(cfg.fixed_alpha, p) for p in cfg.powers])


if __name__ == "__main__":
    main()
