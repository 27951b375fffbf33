"""Finite-section classification of builtin summability matrices and Hölder/Cesàro means of 1, 0, 1, 0, ..."""

from dataclasses import dataclass

import numpy as np

from common import parse_config
from schurkit import summability as sm


@dataclass
class Config:
    """Summability evidence at desk scale."""

    n: int = 256
    terms: int = 10_000
    equiv_n: int = 100


def main(cfg: Config):
    grid = (cfg.n // 4, cfg.n // 2, cfg.n)
    print("matrix,r,preserving,regular,generating,row_sum_limit,row_norm_sup")
    for name, r in [("identity", 1), ("cesaro", 1), ("holder", 2), ("cesaro", 2), ("geometric", 1)]:
        c = sm.classify(sm.builtin(name, cfg.n, r), grid, tol=1e-3)
        print(f"{name},{r},{c.preserving},{c.regular},{c.generating},{c.row_sum_limit.real:.6f},{c.row_norm_sup:.6f}")
    x = np.array([(1 + (-1) ** k) / 2 for k in range(1, cfg.terms + 1)])
    print("\nkind,r,last_mean,distance_to_half")
    for kind in ("holder", "cesaro"):
        for r in (1, 2, 3):
            y = sm.mean_transform(kind, r, x)[-1]
            print(f"{kind},{r},{y:.8f},{abs(y - 0.5):.2e}")
    print("\nr,tol,equivalent")
    for r, tol in [(1, 1e-6), (2, 1e-3), (3, 1e-2), (4, 1e-2)]:
        print(f"{r},{tol},{sm.equivalence_check(r, cfg.equiv_n, tol)}")


if __name__ == "__main__":
    main(parse_config(Config))
