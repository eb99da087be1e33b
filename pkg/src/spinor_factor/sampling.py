"""Seeded random group elements built as products of generators.

Random words only reach the part of each group that products of the chosen
generator families cover; the decompositions never rely on that coverage,
they only need valid inputs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import generators as G
from .generators import GeneratorSpec, GroupOperator

GROUPS = ("f4", "e6", "e7")
GROUP_SPACE = {"f4": "J", "e6": "JC", "e7": "PC"}
GROUP_FAMILIES = {
    "f4": ("alpha",),
    "e6": ("alpha", "beta", "eps2"),
    "e7": ("alpha", "beta", "gamma", "delta", "eps1", "eps2"),
}
RNG_NAME = "numpy.PCG64"


@dataclass(frozen=True)
class SampleConfig:
    """What to draw: ``n`` generators for ``group`` from a PCG64 stream seeded with ``seed``."""

    group: str
    n: int = 20
    seed: int = 0
    max_angle: float = np.pi

    def __post_init__(self):
        g = self.group.lower()
        if g not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}, got {self.group!r}")
        object.__setattr__(self, "group", g)
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")

    def to_json(self):
        return {**asdict(self), "rng": RNG_NAME}


def random_spec(family: str, rng: np.random.Generator, max_angle: float = np.pi) -> GeneratorSpec:
    """One generator with index uniform in {1, 2, 3}.

    Octonion parameters have a uniform direction on the unit sphere and a
    length uniform in ``(0, max_angle)``; the eps families get a uniform
    phase.
    """
    k = int(rng.integers(1, 4))
    if family in G.CALIBRATED_FAMILIES:
        d = rng.standard_normal(8)
        param = rng.uniform(0.0, max_angle) * d / np.linalg.norm(d)
    elif family == "eps1":
        param = np.exp(2j * rng.uniform(0.0, max_angle))
    else:
        param = 2 * rng.uniform(0.0, max_angle)
    return GeneratorSpec(family, k, param)


def sample_word(cfg: SampleConfig) -> tuple:
    rng = np.random.default_rng(cfg.seed)
    fams = GROUP_FAMILIES[cfg.group]
    return tuple(random_spec(fams[int(rng.integers(len(fams)))], rng, cfg.max_angle)
                 for _ in range(cfg.n))


def sample_group_element(cfg: SampleConfig) -> GroupOperator:
    """The product of ``cfg.n`` random generators (applied in drawing order)."""
    return G.word_operator(sample_word(cfg), GROUP_SPACE[cfg.group], cfg.group.upper())


@dataclass
class RunReport:
    config: SampleConfig
    residuals: dict = field(default_factory=dict)
    trace: dict | None = None
    wall_time: float = 0.0

    def __post_init__(self):
        bad = [k for k, v in self.residuals.items() if not np.all(np.isfinite(v))]
        if bad:
            raise ValueError(f"non-finite residuals: {bad}")

    def to_json(self):
        return {"schema": "spinor-factor/run-report/v1", "config": self.config.to_json(),
                "residuals": self.residuals, "trace": self.trace, "wall_time": self.wall_time}
