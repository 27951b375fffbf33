"""Lax hierarchy for L = D^2 + u0: fractional powers, their differential parts and [(L^(k/2))+, L]."""

from dataclasses import dataclass

from common import parse_config
from schurkit import psido


@dataclass
class Config:
    """KdV hierarchy from fractional powers of L."""

    max_k: int = 5
    floor: int = -6


def main(cfg: Config):
    lax = psido.lax_operator()
    root = psido.power(lax, 1, 2, cfg.floor)
    print(f"L^(1/2) to D^{cfg.floor}: {psido.format_op(root)}")
    for k in range(1, cfg.max_k + 1, 2):
        plus = psido.truncate(psido.power(lax, k, 2, -1), "positive")
        flow = psido.commutator(plus, lax, -1)
        print(f"k={k}: (L^({k}/2))+ = {psido.format_op(plus)}")
        print(f"      [(L^({k}/2))+, L] = {psido.format_op(flow)}")


if __name__ == "__main__":
    main(parse_config(Config))
