"""Violation counts for the composition and multiplier theorems, with and without their root hypotheses."""

from dataclasses import dataclass

import numpy as np

from common import parse_config
from schurkit import polya_schur as ps


@dataclass
class Config:
    """Random real-rooted inputs with exact rational roots."""

    trials: int = 1000
    max_degree: int = 6
    seed: int = 0


def survey(rng, mode, q_gen, cfg):
    bad = total = 0
    for _ in range(cfg.trials):
        p = ps.random_real_rooted(rng, int(rng.integers(1, cfg.max_degree + 1)))
        q = q_gen(rng, int(rng.integers(1, cfg.max_degree + 1)))
        r = ps.compose(p, q, mode)
        if r.is_zero():
            continue
        total += 1
        limit = 0 if mode in ("malo", "schur") else ps.nonreal_count(p)
        bad += ps.nonreal_count(r) > limit
    return bad, total


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print("mode,q_roots,violations,instances")
    for mode in ("hermite", "laguerre", "malo", "schur"):
        for label, gen in [("negative", ps.random_negative_rooted), ("mixed", ps.random_real_rooted)]:
            bad, total = survey(rng, mode, gen, cfg)
            print(f"{mode},{label},{bad},{total}")
    bad = 0
    for _ in range(cfg.trials):
        alpha = ps.random_rational(rng, 0, 3)
        deltas = [ps.random_rational(rng, 0, 3) for _ in range(int(rng.integers(0, 4)))]
        p = ps.random_real_rooted(rng, int(rng.integers(1, cfg.max_degree + 1)))
        r = ps.apply_multiplier(ps.MultiplierSeq.first_type(alpha, deltas, p.degree + 1), p)
        bad += not r.is_zero() and ps.nonreal_count(r) != 0
    print(f"multiplier,first_type,{bad},{cfg.trials}")


if __name__ == "__main__":
    main(parse_config(Config))
