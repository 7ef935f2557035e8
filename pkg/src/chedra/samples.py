"""Ready-made net specs, one per flexible family, used by tests and demos."""
import math

from .linkage import Sublinkage
from .nets import ChainLink, NetSpec, ProfileEntry


def scaling_sample(p: int = 3, phi_step: float = math.pi / 6) -> NetSpec:
    """Scaling-family patch: v0 = u0/t0 with b = v0 * a = 2*sqrt(2) at a = 2."""
    root2 = math.sqrt(2.0)
    return NetSpec(
        cases=("1a",),
        initial=Sublinkage(s=root2, t=root2, u=2.0, v=root2),
        profile=tuple(ProfileEntry(phi=j * phi_step, s=2.0, t=2.0)
                      for j in range(1, p + 1)),
        a_ref=2.0,
    )


def collineation_sample(p: int = 3, phi_step: float = 0.4) -> NetSpec:
    """Collineation-family patch: v0 = -u0/t0 with b = -3/2 at a = 2."""
    profile = [(3.0, 2.0), (2.6, 1.8), (2.9, 2.3), (3.2, 2.4), (2.7, 2.1)]
    return NetSpec(
        cases=("2a",),
        initial=Sublinkage(s=2.0, t=1.0, u=1.0, v=-1.0),
        profile=tuple(ProfileEntry(phi=j * phi_step, s=s, t=t)
                      for j, (s, t) in enumerate(profile[:p], start=1)),
        a_ref=2.0,
    )


def perspectivity_sample(p: int = 3, phi_step: float = 0.35,
                         a_ref: float = 2.95) -> NetSpec:
    """Perspectivity-family patch (a stretch-rotation surface); free data is s only.

    The admissible window of this dataset is narrow: the tip radicand is
    positive only for a in roughly (2.915, 3).
    """
    sizes = [2.0, 1.6, 1.2, 1.8, 1.4]
    return NetSpec(
        cases=("3",),
        initial=Sublinkage(s=1.0, t=2.0, u=1.0, v=3.0),
        profile=tuple(ProfileEntry(phi=j * phi_step, s=s)
                      for j, s in enumerate(sizes[:p], start=1)),
        a_ref=a_ref,
    )


def revolution_sample(p: int = 3, phi_step: float = 0.5) -> NetSpec:
    """Perspectivity patch with equal column data: a discrete surface of revolution."""
    return NetSpec(
        cases=("3",),
        initial=Sublinkage(s=1.0, t=2.0, u=1.0, v=3.0),
        profile=tuple(ProfileEntry(phi=j * phi_step, s=1.0)
                      for j in range(1, p + 1)),
        a_ref=2.95,
    )


def pnet_sample() -> NetSpec:
    """Two-triple chain mixing a scaling and a collineation strip."""
    return NetSpec(
        cases=("1a", "2a"),
        initial=Sublinkage(s=1.5, t=2.0, u=1.6, v=0.8),
        profile=(ProfileEntry(phi=0.3, s=1.8, t=2.2),
                 ProfileEntry(phi=0.7, s=2.1, t=1.7),
                 ProfileEntry(phi=1.0, s=1.6, t=2.4)),
        a_ref=2.0,
        chain=(ChainLink(v0=-0.8),),
    )
