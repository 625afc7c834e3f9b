"""Seeded random instances: uncorrelated (unc) and weakly correlated (wco).

All draws come from numpy's Generator over PCG64 seeded with the GenSpec seed,
so a GenSpec always produces the same instance. Uniform integers use
Generator.integers with endpoint=True (unbiased bounded sampling).
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from mckp.core.models import validate_instance

logger = logging.getLogger(__name__)

DEFAULT_R = 10000
DEFAULT_WCO_HALFWIDTH = 10


class GenKind(Enum):
    UNC = 'unc'
    WCO = 'wco'


@dataclass(frozen=True)
class GenSpec:
    kind: GenKind
    k: int
    n: int
    R: int = DEFAULT_R
    seed: int = 0
    wco_halfwidth: int = DEFAULT_WCO_HALFWIDTH

    def __post_init__(self):
        if not isinstance(self.kind, GenKind):
            object.__setattr__(self, 'kind', GenKind(self.kind))
        if self.k < 1 or self.n < 1:
            raise ValueError(f"k and n must be at least 1, got k={self.k}, n={self.n}")
        if self.R < 1:
            raise ValueError(f"R must be at least 1, got {self.R}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if self.kind is GenKind.WCO:
            if self.wco_halfwidth < 0:
                raise ValueError(f"wco_halfwidth must be nonnegative, got {self.wco_halfwidth}")
            if self.R <= self.wco_halfwidth:
                raise ValueError(f"wco needs R > wco_halfwidth, got R={self.R}, "
                                 f"halfwidth={self.wco_halfwidth}")

    @property
    def file_name(self):
        return f"{self.kind.value}_{self.k}_{self.n}_{self.seed}.mckp"

    def series(self, count):
        '''count specs with seeds seed, seed + 1, ...'''
        return [replace(self, seed=self.seed + i) for i in range(count)]


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def compute_budget(costs, rng):
    """b = c +/- random(0, floor(c/4)), c = (1/2) * sum over groups of (min + max) cost.

    costs is one sequence of item costs per group. When the sum is odd, c and
    therefore b are half-integral and come back as floats.
    """
    twice_c = sum(int(min(g)) + int(max(g)) for g in costs)
    r = twice_c // 8    # floor(c / 4)
    sign = int(rng.integers(0, 1, endpoint=True))
    offset = int(rng.integers(0, r, endpoint=True))
    delta = offset if sign else -offset
    if twice_c % 2 == 0:
        return twice_c // 2 + delta
    return twice_c / 2 + delta


def generate(spec):
    rng = make_rng(spec.seed)
    shape = (spec.k, spec.n)
    if spec.kind is GenKind.UNC:
        P = rng.integers(1, spec.R, size=shape, endpoint=True)
        C = rng.integers(1, spec.R, size=shape, endpoint=True)
    else:
        h = spec.wco_halfwidth
        C = rng.integers(1, spec.R, size=shape, endpoint=True)
        P = rng.integers(np.maximum(1, C - h), C + h, endpoint=True)

    profits, costs = P.tolist(), C.tolist()
    budget = compute_budget(costs, rng)
    logger.debug(f"Generated {spec.kind.value} k={spec.k} n={spec.n} R={spec.R} "
                 f"seed={spec.seed}: budget {budget}")
    return validate_instance([list(zip(p, c)) for p, c in zip(profits, costs)], budget)
