"""Schur parameters of the Carathéodory function of a discrete measure against Szegő reflection coefficients."""

import math
from dataclasses import dataclass

import numpy as np

from common import parse_config
from schurkit import schur_function as sf


@dataclass
class Config:
    """Random discrete measures on the circle."""

    trials: int = 200
    min_atoms: int = 3
    max_atoms: int = 8
    min_gap: float = 0.2
    seed: int = 0


def random_measure(rng, n, gap):
    while True:
        th = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.min(np.diff(np.concatenate([th, [th[0] + 2 * math.pi]]))) >= gap:
            break
    w = rng.uniform(0.1, 1.0, n)
    w /= w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return sf.DiscreteMeasure(tuple(np.exp(1j * th)), tuple(w))


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    worst = {}
    for _ in range(cfg.trials):
        n = int(rng.integers(cfg.min_atoms, cfg.max_atoms + 1))
        mu = random_measure(rng, n, cfg.min_gap)
        refl = [complex(a) for a in sf.szego_polys(mu).reflections]
        params = sf.schur_parameters(sf.schur_from_measure(mu, n), tol_unit=1e-6).gammas
        k = min(len(params), len(refl))
        err = max(abs(complex(a) - b) for a, b in zip(params[:k], refl[:k]))
        worst[n] = max(worst.get(n, 0.0), err)
    print("atoms,max_abs_difference")
    for n in sorted(worst):
        print(f"{n},{worst[n]:.3e}")


if __name__ == "__main__":
    main(parse_config(Config))
