"""Dataclass config to argparse flags, shared by the experiment scripts."""

import argparse
import dataclasses


def parse_config(cls, argv=None):
    p = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        kind = type(f.default)
        p.add_argument(f"--{f.name.replace('_', '-')}", type=kind, default=f.default)
    return cls(**vars(p.parse_args(argv)))
