"""The overconstrained planar linkage behind three consecutive conical strips.

A sublinkage couples one profile point to the three collinear tips through
four bars; compatibility of all sublinkages with the initial one across the
whole motion is equivalent to the vanishing of a quartic in the driving
parameter.  The five flexible families (two scaling, two collineation, one
perspectivity) are detected from the closed-form coefficient system.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .config import (
    ABS_TOLERANCE,
    RANGE_BISECTION_TOLERANCE,
    RANGE_GRID_SAMPLES,
    base_tolerance,
)
from .errors import (
    DegenerateTip,
    InvariantError,
    MixedCases,
    RadicandNegative,
    SingularDenominator,
)
from .geometry import profile_point

BRANCHES = ("+", "-")


class CaseLabel(str, Enum):
    SCALING_1A = "Scaling_1a"
    SCALING_1B = "Scaling_1b"
    COLLINEATION_2A = "Collineation_2a"
    COLLINEATION_2B = "Collineation_2b"
    PERSPECTIVITY_3 = "Perspectivity_3"
    NOT_FLEXIBLE = "NotFlexible"

    @property
    def family(self) -> Optional[int]:
        """1 = scaling, 2 = collineation, 3 = perspectivity, None if not flexible."""
        return _FAMILY_OF_LABEL.get(self)


_FAMILY_OF_LABEL = {
    CaseLabel.SCALING_1A: 1,
    CaseLabel.SCALING_1B: 1,
    CaseLabel.COLLINEATION_2A: 2,
    CaseLabel.COLLINEATION_2B: 2,
    CaseLabel.PERSPECTIVITY_3: 3,
}

_CASE_ALIASES = {
    "1a": CaseLabel.SCALING_1A,
    "1b": CaseLabel.SCALING_1B,
    "2a": CaseLabel.COLLINEATION_2A,
    "2b": CaseLabel.COLLINEATION_2B,
    "3": CaseLabel.PERSPECTIVITY_3,
}


def case_label(value) -> CaseLabel:
    """Coerce a short ('1a') or full ('Scaling_1a') case name to a label."""
    if isinstance(value, CaseLabel):
        return value
    try:
        return _CASE_ALIASES.get(str(value).lower()) or CaseLabel(value)
    except ValueError:
        raise InvariantError(f"unknown case label: {value!r}") from None


@dataclass(frozen=True)
class Sublinkage:
    """Bar lengths and ratio of one meridian cut: s = |S2 A|, t = |S1 A|, u = |S3 B|."""

    s: float
    t: float
    u: float
    v: float
    phi: float = 0.0

    def __post_init__(self):
        if not (self.s > 0 and self.t > 0 and self.u > 0):
            raise InvariantError("bar lengths s, t, u must be strictly positive")
        if self.v == 0:
            raise InvariantError("ratio v must be nonzero")
        for name in ("s", "t", "u", "v", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise InvariantError(f"sublinkage field {name} is not finite")


@dataclass(frozen=True)
class LinkageSpec:
    """Initial sublinkage plus the sublinkages of the remaining meridian planes."""

    initial: Sublinkage
    others: tuple
    branch: str = "+"
    a_ref: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "others", tuple(self.others))
        if len(self.others) < 1:
            raise InvariantError("a linkage needs at least one non-initial sublinkage")
        if self.branch not in BRANCHES:
            raise InvariantError(f"branch must be '+' or '-', got {self.branch!r}")
        if self.a_ref <= 0:
            raise InvariantError("reference driving parameter must be positive")
        phis = [self.initial.phi] + [sub.phi for sub in self.others]
        if self.initial.phi != 0.0:
            raise InvariantError("initial sublinkage must have phi = 0")
        if any(b <= a for a, b in zip(phis, phis[1:])):
            raise InvariantError("meridian angles must be strictly increasing")


@dataclass(frozen=True)
class CoeffTriple:
    """Coefficients of the compatibility quartic  a4*x^4 + a2*x^2 + a0  in x = a.

    The scale fields hold the largest absolute monomial contribution of each
    coefficient; `normalized()` divides by them so the vanishing test is
    magnitude-independent.
    """

    a4: float
    a2: float
    a0: float
    scale4: float = 1.0
    scale2: float = 1.0
    scale0: float = 1.0

    def normalized(self) -> tuple:
        return (
            abs(self.a4) / max(self.scale4, ABS_TOLERANCE),
            abs(self.a2) / max(self.scale2, ABS_TOLERANCE),
            abs(self.a0) / max(self.scale0, ABS_TOLERANCE),
        )

    def max_normalized(self) -> float:
        return max(self.normalized())


@dataclass(frozen=True)
class Classification:
    """Result of matching a linkage against the flexible families."""

    label: CaseLabel
    branch: Optional[str] = None
    case3_compatible: bool = False
    families: frozenset = frozenset()
    max_residual: float = 0.0
    per_index_residuals: tuple = ()
    message: str = ""

    @property
    def flexible(self) -> bool:
        return self.label is not CaseLabel.NOT_FLEXIBLE


def tip_radicand(a: float, initial: Sublinkage) -> float:
    """Radicand of the closed form for the third tip height."""
    s2, t2, v0, u0 = initial.s ** 2, initial.t ** 2, initial.v, initial.u
    a2 = a * a
    return ((a2 * a2 - 2 * (s2 + t2) * a2 + (initial.s - initial.t) ** 2
             * (initial.s + initial.t) ** 2) * v0 * v0 + 4 * u0 * u0 * a2)


def tip_b(a: float, initial: Sublinkage, branch: str = "+") -> float:
    """Height b of the third tip so that the initial B-bar keeps its length.

    Solves |B0 - (0,0,b)| = u0 with B0 = v0 * A0; the two quadratic roots are
    selected by the branch sign.  Positive a is the standard frame; negative a
    is accepted for axis-reversed local frames of chained strips.
    """
    if branch not in BRANCHES:
        raise InvariantError(f"branch must be '+' or '-', got {branch!r}")
    if a == 0:
        raise InvariantError("driving parameter must be nonzero")
    rad = tip_radicand(a, initial)
    scale = (abs(a) + initial.s + initial.t) ** 4 * max(initial.v ** 2, 1.0)
    if rad < -1e-12 * scale:
        raise RadicandNegative(
            f"tip radicand negative at a={a}: driving parameter outside admissible range"
        )
    root = math.sqrt(max(rad, 0.0))
    sign = 1.0 if branch == "+" else -1.0
    b = ((a * a + initial.s ** 2 - initial.t ** 2) * initial.v + sign * root) / (2 * a)
    if abs(b) <= ABS_TOLERANCE * max(abs(a), 1.0):
        raise DegenerateTip("third tip coincides with the middle tip (b = 0)")
    return b


def residual_w(a: float, initial: Sublinkage, other: Sublinkage,
               branch: str = "+") -> float:
    """Compatibility residual |B_j - S3|^2 - u_j^2 at driving parameter a."""
    b = tip_b(a, initial, branch)
    pt = profile_point(a, other.s, other.t)
    vd = other.v * pt.d
    vz = other.v * pt.z
    return vd * vd + (vz - b) * (vz - b) - other.u * other.u


def compatibility_coeffs(initial: Sublinkage, other: Sublinkage) -> CoeffTriple:
    """Closed-form coefficients whose joint vanishing makes the residual identical zero.

    Each coefficient is accumulated as its fully expanded monomial list; the
    largest absolute monomial serves as the normalization scale, so the
    vanishing test is independent of the data magnitude and of cancellations
    inside factored sub-expressions.
    """
    s0, t0, u0, v0 = initial.s, initial.t, initial.u, initial.v
    sj, tj, uj, vj = other.s, other.t, other.u, other.v
    s02, t02, u02, v02 = s0 * s0, t0 * t0, u0 * u0, v0 * v0
    sj2, tj2, uj2, vj2 = sj * sj, tj * tj, uj * uj, vj * vj

    def acc(terms):
        return math.fsum(terms), max(abs(t) for t in terms)

    # (v0 - vj) * (s0^2 vj v0^2 - u0^2 vj + (uj^2 - sj^2 vj^2) v0), expanded
    f_val, f_scale = acc([
        s02 * vj * v02 * v0,
        -u02 * vj * v0,
        uj2 * v02,
        -sj2 * vj2 * v02,
        -s02 * vj2 * v02,
        u02 * vj2,
        -uj2 * v0 * vj,
        sj2 * vj2 * vj * v0,
    ])

    g_val, g_scale = acc([
        # (s0^2 + sj^2 - t0^2 - tj^2) v0 sj^2 vj^3
        s02 * sj2 * v0 * vj2 * vj,
        sj2 * sj2 * v0 * vj2 * vj,
        -t02 * sj2 * v0 * vj2 * vj,
        -tj2 * sj2 * v0 * vj2 * vj,
        2 * s02 * u02 * v02,
        -2 * t02 * uj2 * v02,
        # -(u0 - uj)^2 (u0 + uj)^2 = -(u0^2 - uj^2)^2
        -u02 * u02,
        2 * u02 * uj2,
        -uj2 * uj2,
        -sj2 * sj2 * vj2 * vj2,
        -s02 * s02 * v02 * v02,
        # 2 [(t0^2 - s0^2) sj^2 + s0^2 tj^2] v0^2 vj^2
        2 * t02 * sj2 * v02 * vj2,
        -2 * s02 * sj2 * v02 * vj2,
        2 * s02 * tj2 * v02 * vj2,
        2 * sj2 * uj2 * vj2,
        -2 * tj2 * u02 * vj2,
        # (s0^2 v0^2 - u0^2 - uj^2)(s0^2 + sj^2 - t0^2 - tj^2) v0 vj
        s02 * s02 * v02 * v0 * vj,
        s02 * sj2 * v02 * v0 * vj,
        -s02 * t02 * v02 * v0 * vj,
        -s02 * tj2 * v02 * v0 * vj,
        -u02 * s02 * v0 * vj,
        -u02 * sj2 * v0 * vj,
        u02 * t02 * v0 * vj,
        u02 * tj2 * v0 * vj,
        -uj2 * s02 * v0 * vj,
        -uj2 * sj2 * v0 * vj,
        uj2 * t02 * v0 * vj,
        uj2 * tj2 * v0 * vj,
    ])

    # h is a product of two bracket sums; expand both and multiply out
    h_left = [
        s02 * v0 * uj2,
        -t02 * v0 * uj2,
        -s02 * v0 * sj2 * vj2,
        t02 * v0 * sj2 * vj2,
        s02 * sj2 * v02 * vj,
        -s02 * tj2 * v02 * vj,
        tj2 * u02 * vj,
        -sj2 * u02 * vj,
    ]
    h_right = [tj2 * vj, -sj2 * vj, v0 * s02, -v0 * t02]
    h_val, h_scale = acc([a * b for a in h_left for b in h_right])

    return CoeffTriple(f_val, g_val, h_val, f_scale, g_scale, h_scale)


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1.0)


def _close(x: float, y: float, tol: float) -> bool:
    return _rel(x, y) <= tol


def _family_deficits(initial: Sublinkage, other: Sublinkage) -> dict:
    """Relative mismatch of each family's defining equations for one index pair.

    A value near zero means the pair satisfies that family.  Unlike the quartic
    coefficients, these are first-order sensitive in every data direction, so
    they provide the separation margin for perturbed (rigid) inputs.
    """
    s0, t0, u0, v0 = initial.s, initial.t, initial.u, initial.v
    sj, tj, uj, vj = other.s, other.t, other.u, other.v
    prop = _rel(t0 * abs(v0), u0)
    return {
        1: max(prop, _rel(vj, v0), _rel(uj, u0 * tj / t0)),
        2: max(prop,
               _rel(vj * (sj * sj - tj * tj), v0 * (s0 * s0 - t0 * t0)),
               _rel(uj, abs(vj) * tj)),
        3: max(_rel(vj, v0),
               _rel(tj * tj, sj * sj - s0 * s0 + t0 * t0),
               _rel(uj * uj, v0 * v0 * (sj * sj - s0 * s0) + u0 * u0)),
    }


def classify(spec: LinkageSpec) -> Classification:
    """Match the linkage against the flexible families.

    Returns the scaling or collineation label when the intercept proportion
    holds at index 0, the perspectivity label when only the equal-height family
    matches, and NotFlexible when the coefficient system does not vanish.
    Raises MixedCases when distinct indices match disjoint families.
    """
    tol = base_tolerance()
    initial = spec.initial

    residuals = []
    family_sets = []
    for sub in spec.others:
        coeffs = compatibility_coeffs(initial, sub)
        deficits = _family_deficits(initial, sub)
        residuals.append(max(coeffs.max_normalized(),
                             min(deficits.values())))
        family_sets.append({fam for fam, dev in deficits.items() if dev <= tol})

    max_res = max(residuals)
    per_index = tuple(residuals)
    if max_res > tol or any(not fams for fams in family_sets):
        return Classification(
            CaseLabel.NOT_FLEXIBLE,
            max_residual=max_res,
            per_index_residuals=per_index,
            message="compatibility coefficients do not vanish",
        )

    common = frozenset(set.intersection(*family_sets))
    if not common:
        raise MixedCases(
            "sublinkages match different flexible families; inconsistent input data"
        )

    if 1 in common:
        label = CaseLabel.SCALING_1A if initial.v > 0 else CaseLabel.SCALING_1B
    elif 2 in common:
        label = CaseLabel.COLLINEATION_2A if initial.v < 0 else CaseLabel.COLLINEATION_2B
    else:
        label = CaseLabel.PERSPECTIVITY_3
    branch = select_branch(initial, label, spec.a_ref)
    return Classification(
        label,
        branch=branch,
        case3_compatible=(3 in common and label is not CaseLabel.PERSPECTIVITY_3),
        families=common,
        max_residual=max_res,
        per_index_residuals=per_index,
    )


def extend_sublinkage(initial: Sublinkage, label, s: float = None,
                      t: float = None, phi: float = 0.0) -> Sublinkage:
    """Complete the free data of one meridian cut to a compatible sublinkage.

    Scaling and collineation take free (s, t); the perspectivity takes free s
    only and derives t from the equal-height condition.
    """
    label = case_label(label)
    if label is CaseLabel.NOT_FLEXIBLE:
        raise InvariantError("cannot extend a non-flexible label")
    tol = base_tolerance()
    s0, t0, u0, v0 = initial.s, initial.t, initial.u, initial.v
    if s is None or s <= 0:
        raise InvariantError("free bar length s must be positive")

    if label.family == 3:
        t2 = s * s - s0 * s0 + t0 * t0
        if t2 <= 0:
            raise RadicandNegative("perspectivity t-formula has nonpositive radicand")
        if t is not None and not _close(t * t, t2, tol):
            raise InvariantError("supplied t contradicts the equal-height condition")
        u2 = v0 * v0 * (s * s - s0 * s0) + u0 * u0
        if u2 <= 0:
            raise RadicandNegative("perspectivity u-formula has nonpositive radicand")
        return Sublinkage(s=s, t=math.sqrt(t2), u=math.sqrt(u2), v=v0, phi=phi)

    if t is None or t <= 0:
        raise InvariantError("free bar length t must be positive for cases 1 and 2")
    expected_sign = 1.0 if label in (CaseLabel.SCALING_1A, CaseLabel.COLLINEATION_2B) else -1.0
    if not _close(v0 * t0, expected_sign * u0, tol):
        raise InvariantError(
            f"initial sublinkage does not satisfy the intercept proportion for {label.value}"
        )

    if label.family == 1:
        return Sublinkage(s=s, t=t, u=u0 * t / t0, v=expected_sign * u0 / t0, phi=phi)

    # collineation family
    if abs(s0 - t0) <= tol * max(s0, t0):
        raise SingularDenominator("collineation family needs s0 != t0")
    if abs(s - t) <= tol * max(s, t):
        raise SingularDenominator("collineation family needs s != t for the free data")
    vj = expected_sign * u0 * (s0 * s0 - t0 * t0) / (t0 * (s * s - t * t))
    inner = s * s * t0 * vj - expected_sign * u0 * (s0 * s0 - t0 * t0)
    rad = t0 * vj * inner
    if rad <= 0:
        raise RadicandNegative("collineation u-formula has nonpositive radicand")
    return Sublinkage(s=s, t=t, u=math.sqrt(rad) / t0, v=vj, phi=phi)


def select_branch(initial: Sublinkage, label, a_ref: float) -> str:
    """Branch sign on which the family's tip height is the chosen quadratic root.

    The scaling family's root v0*a is the '+' root exactly when
    v0 * (a - z0) >= 0; the collineation family takes the opposite sign.  The
    perspectivity accepts either branch and returns '+' by convention.
    """
    label = case_label(label)
    if label is CaseLabel.NOT_FLEXIBLE:
        raise InvariantError("branch selection needs a flexible label")
    if label.family == 3:
        return "+"
    z0 = profile_point(a_ref, initial.s, initial.t).z
    key = initial.v * (a_ref - z0)
    if label.family == 1:
        return "+" if key >= 0 else "-"
    return "+" if key <= 0 else "-"


def family_tip_height(a: float, initial: Sublinkage, label,
                      branch: str = "+") -> float:
    """Tip height b(a) along the motion of the given family.

    Closed forms: v0*a for scaling, v0*(2*z0(a) - a) for the collineation,
    and the branch-selected quadratic root for the perspectivity.
    """
    label = case_label(label)
    v0 = initial.v
    if label.family == 1:
        return v0 * a
    if label.family == 2:
        z0 = profile_point(a, initial.s, initial.t).z
        return v0 * (2 * z0 - a)
    return tip_b(a, initial, branch)


def _snap(value: float) -> float:
    """Treat rounding noise around zero as exact zero."""
    return 0.0 if abs(value) < 1e-12 else value


def _feasibility(a: float, spec: LinkageSpec) -> float:
    """Smallest normalized constraint value at a; nonnegative means admissible."""
    worst = math.inf
    for sub in (spec.initial, *spec.others):
        a2, s2, t2 = a * a, sub.s ** 2, sub.t ** 2
        disc = 2 * a2 * s2 + 2 * a2 * t2 + 2 * s2 * t2 - a2 * a2 - s2 * s2 - t2 * t2
        worst = min(worst, _snap(disc / (s2 + t2) ** 2))
    rad = tip_radicand(a, spec.initial)
    scale = (abs(a) + spec.initial.s + spec.initial.t) ** 4 * max(spec.initial.v ** 2, 1.0)
    worst = min(worst, _snap(rad / scale))
    return worst


def _radicand_roots(initial: Sublinkage) -> list:
    """Positive zeros of the tip radicand, a quadratic in a^2 (closed form).

    These include the double zeros where the radicand touches zero without a
    sign change (the two quadratic roots collide and the branch labels swap),
    which a sign-scan cannot see.  Coefficients and discriminant are snapped
    to zero relative to their natural scales so rounding noise neither invents
    roots nor loses genuine double roots.
    """
    v2 = initial.v ** 2
    s2, t2, u2 = initial.s ** 2, initial.t ** 2, initial.u ** 2
    # radicand = v2*x^2 + p*x + q with x = a^2
    p = 4 * u2 - 2 * (s2 + t2) * v2
    q = v2 * (s2 - t2) ** 2
    p_scale = 4 * u2 + 2 * (s2 + t2) * v2
    q_scale = v2 * (s2 + t2) ** 2
    if abs(p) < 1e-12 * p_scale:
        p = 0.0
    if abs(q) < 1e-12 * q_scale:
        q = 0.0
    disc = p * p - 4 * v2 * q
    disc_scale = p_scale * p_scale + 4 * v2 * q_scale
    if abs(disc) < 1e-12 * disc_scale:
        disc = 0.0
    if disc < 0 or (p == 0.0 and q == 0.0):
        return []
    roots = []
    for sgn in (-1.0, 1.0):
        x = (-p + sgn * math.sqrt(disc)) / (2 * v2)
        if x > 0:
            roots.append(math.sqrt(x))
    return sorted(set(roots))


def _bisect_boundary(f, good: float, bad: float, tol: float) -> float:
    """Bisect the admissibility boundary between a feasible and an infeasible value."""
    for _ in range(200):
        if abs(bad - good) <= tol:
            break
        mid = 0.5 * (good + bad)
        if f(mid) >= 0:
            good = mid
        else:
            bad = mid
    return good


def flexion_range(spec: LinkageSpec) -> list:
    """Maximal intervals of the driving parameter around a_ref that stay admissible.

    Admissible means every profile discriminant and the tip radicand are
    nonnegative.  Endpoints (where some discriminant vanishes) are refined by
    bisection after bracketing on a uniform grid; interior double zeros of the
    radicand split the interval because the two quadratic roots collide there.
    """
    hi_cap = max(sub.s + sub.t for sub in (spec.initial, *spec.others))
    tol = RANGE_BISECTION_TOLERANCE * max(hi_cap, 1.0)
    f = lambda a: _feasibility(a, spec)

    knots = list(np.linspace(hi_cap / RANGE_GRID_SAMPLES, hi_cap, RANGE_GRID_SAMPLES))
    for root in _radicand_roots(spec.initial):
        if 0 < root < hi_cap:
            knots.extend([root, max(root - tol, tol), min(root + tol, hi_cap)])
    knots = sorted(set(knots))

    feasible = [f(a) >= 0 for a in knots]
    intervals = []
    i = 0
    while i < len(knots):
        if not feasible[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(knots) and feasible[j + 1]:
            j += 1
        lo = knots[i]
        if i == 0:
            lo = 0.0 if f(tol) >= 0 else _bisect_boundary(f, knots[i], tol, tol)
        else:
            lo = _bisect_boundary(f, knots[i], knots[i - 1], tol)
        if j == len(knots) - 1:
            hi = knots[j]
        else:
            hi = _bisect_boundary(f, knots[j], knots[j + 1], tol)
        intervals.append((lo, hi))
        i = j + 1

    # split at interior touch-zeros of the radicand (branch identity swaps there)
    split = []
    touch = _radicand_roots(spec.initial)
    for lo, hi in intervals:
        cuts = [r for r in touch if lo + tol < r < hi - tol]
        edges = [float(lo)] + cuts + [float(hi)]
        split.extend((x, y) for x, y in zip(edges, edges[1:]))

    return [iv for iv in split if iv[0] <= spec.a_ref <= iv[1]]


def interval_containing(intervals: Sequence, a: float):
    """The interval of a sorted interval list containing a, or None."""
    for lo, hi in intervals:
        if lo <= a <= hi:
            return (lo, hi)
    return None
