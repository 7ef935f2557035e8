import math

import numpy as np
import pytest

from chedra.linkage import Sublinkage
from chedra.samples import (
    collineation_sample,
    perspectivity_sample,
    pnet_sample,
    revolution_sample,
    scaling_sample,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def scaling_initial():
    root2 = math.sqrt(2.0)
    return Sublinkage(s=root2, t=root2, u=2.0, v=root2)


@pytest.fixture
def collineation_initial():
    return Sublinkage(s=2.0, t=1.0, u=1.0, v=-1.0)


@pytest.fixture
def perspectivity_initial():
    return Sublinkage(s=1.0, t=2.0, u=1.0, v=3.0)


@pytest.fixture
def scaling_spec():
    return scaling_sample()


@pytest.fixture
def collineation_spec():
    return collineation_sample()


@pytest.fixture
def perspectivity_spec():
    return perspectivity_sample()


@pytest.fixture
def revolution_spec():
    return revolution_sample()


@pytest.fixture
def pnet_spec():
    return pnet_sample()


def draw_initial(rng, case: str) -> Sublinkage:
    """Random valid initial sublinkage for the given sub-case."""
    s0, t0 = rng.uniform(0.6, 2.6, 2)
    u0 = rng.uniform(0.6, 2.6)
    if case in ("2a", "2b") and abs(s0 - t0) < 5e-2:
        s0 += 0.15
    if case in ("1a", "2b"):
        v0 = u0 / t0
    elif case in ("1b", "2a"):
        v0 = -u0 / t0
    else:
        v0 = rng.uniform(0.4, 2.5) * rng.choice([-1.0, 1.0])
    return Sublinkage(s=float(s0), t=float(t0), u=float(u0), v=float(v0))


def draw_reference_parameter(rng, initial: Sublinkage, *, table_regime: bool = False):
    """Admissible driving parameter for the initial triangle.

    With table_regime the value additionally satisfies a^2 >= |s^2 - t^2|: the
    profile point sits between the tip heights, the regime in which the plus
    branch always carries the scaling-family root.
    """
    lo = abs(initial.s - initial.t)
    hi = initial.s + initial.t
    if table_regime:
        lo = max(lo, math.sqrt(abs(initial.s ** 2 - initial.t ** 2)))
    if hi <= lo * 1.02:
        return None
    return float(rng.uniform(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo)))
