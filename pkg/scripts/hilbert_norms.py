"""Finite Hilbert sections: spectral norm against unweighted and weighted Schur-test bounds."""

import math
from dataclasses import dataclass

import numpy as np

from common import parse_config
from schurkit import hadamard
from schurkit.algebra import spectral_norm


@dataclass
class Config:
    """Norms of hilbert_plus(n) for n = 2, 4, ..., max_n."""

    max_n: int = 512


def main(cfg: Config):
    print("n,spectral_norm,schur_bound,weighted_bound,pi_gap")
    n = 2
    while n <= cfg.max_n:
        h = hadamard.matrix_gallery("hilbert_plus", n)
        norm = spectral_norm(h)
        plain = hadamard.schur_test(h).bound
        weighted = hadamard.schur_test(h, np.arange(1, n + 1) ** -0.5).bound
        print(f"{n},{norm:.10f},{plain:.10f},{weighted:.10f},{math.pi - norm:.3e}")
        n *= 2


if __name__ == "__main__":
    main(parse_config(Config))
