"""Assembly and isometric flexion of discrete and semi-discrete axial cone-nets.

A net is a rows-by-columns vertex grid whose columns live in meridian planes
through a common vertical axis.  Each strip of quads lies on a cone with tip
on the axis; consecutive strip triples are coupled by the planar linkage of
`linkage`, and the one-parameter flexion is driven by the distance between the
first two tips.  The parallelism (Combescure) transfer rebuilds a
combinatorially identical net with all edges parallel, which yields the
general nets that are no longer axial.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .config import ABS_TOLERANCE, base_tolerance
from .errors import (
    AngleUnsolvable,
    ChedraError,
    ClosureFailure,
    InadmissibleSample,
    IncompatibleChaining,
    InvariantError,
    NonSimpleFan,
    NotFlexibleError,
    RadicandNegative,
    SingularDenominator,
)
from .geometry import profile_point
from .linkage import (
    CaseLabel,
    Classification,
    LinkageSpec,
    Sublinkage,
    case_label,
    classify,
    extend_sublinkage,
    flexion_range,
    interval_containing,
    select_branch,
)

_SCALING_SIGN = {
    CaseLabel.SCALING_1A: 1.0,
    CaseLabel.COLLINEATION_2B: 1.0,
    CaseLabel.SCALING_1B: -1.0,
    CaseLabel.COLLINEATION_2A: -1.0,
}


@dataclass(frozen=True)
class ProfileEntry:
    """One column of the profile: bar lengths (s, t) or an explicit point (d, z)."""

    phi: float
    s: Optional[float] = None
    t: Optional[float] = None
    d: Optional[float] = None
    z: Optional[float] = None

    def __post_init__(self):
        if self.s is None and self.d is None:
            raise InvariantError("profile entry needs either bar data s or a point d")
        if self.s is not None and self.s <= 0:
            raise InvariantError("profile bar length s must be positive")
        if self.t is not None and self.t <= 0:
            raise InvariantError("profile bar length t must be positive")
        if self.d is not None and self.d < 0:
            raise InvariantError("profile distance d must be nonnegative")


@dataclass(frozen=True)
class ChainLink:
    """Free initial data of a chained strip triple: B-bar length and/or ratio."""

    u0: Optional[float] = None
    v0: Optional[float] = None


@dataclass(frozen=True)
class CurveSampler:
    """Smooth profile curve r in [0, 1] -> (d(r), phi(r)[, z(r)]) with sample count n."""

    d: Callable[[float], float]
    phi: Callable[[float], float]
    n: int
    z: Optional[Callable[[float], float]] = None


@dataclass(frozen=True)
class NetSpec:
    """Everything needed to build one axial net at a reference parameter value."""

    cases: tuple
    initial: Sublinkage
    profile: tuple
    a_ref: float
    branches: tuple = ()
    chain: tuple = ()
    lambda_top: float = 0.5
    lambda_bottom: float = 0.5
    row_scales: Optional[tuple] = None
    col_scales: Optional[tuple] = None

    def __post_init__(self):
        cases = tuple(case_label(c) for c in self.cases)
        object.__setattr__(self, "cases", cases)
        object.__setattr__(self, "profile", tuple(self.profile))
        object.__setattr__(self, "chain", tuple(self.chain))
        branches = self.branches or ("+",) * len(cases)
        if isinstance(branches, str):
            branches = (branches,) * len(cases)
        object.__setattr__(self, "branches", tuple(branches))
        if not cases:
            raise InvariantError("at least one strip triple is required")
        families = {c.family for c in cases}
        if CaseLabel.NOT_FLEXIBLE in cases:
            raise InvariantError("case sequence must consist of flexible labels")
        if 3 in families and families != {3}:
            raise InvariantError(
                "the perspectivity case cannot be mixed with scaling/collineation triples"
            )
        if len(self.branches) != len(cases):
            raise InvariantError("one branch sign per strip triple is required")
        if any(b not in ("+", "-") for b in self.branches):
            raise InvariantError("branch signs must be '+' or '-'")
        if len(self.chain) != len(cases) - 1:
            raise InvariantError("chain data must cover every triple after the first")
        if not self.profile:
            raise InvariantError("profile needs at least one entry besides the initial column")
        if self.initial.phi != 0.0:
            raise InvariantError("initial sublinkage must lie in the phi = 0 plane")
        phis = [0.0] + [e.phi for e in self.profile]
        if any(b <= a for a, b in zip(phis, phis[1:])):
            raise NonSimpleFan("meridian plane angles must be strictly increasing")
        if self.a_ref <= 0:
            raise InvariantError("reference driving parameter must be positive")
        for name in ("lambda_top", "lambda_bottom"):
            lam = getattr(self, name)
            if not 0 < lam <= 1:
                raise InvariantError(f"{name} must lie in (0, 1]")

    @property
    def triples(self) -> int:
        return len(self.cases)


@dataclass(frozen=True)
class Intrinsics:
    """Reference edge lengths and one diagonal per quad (the congruence certificate)."""

    row_edges: np.ndarray  # (rows, cols-1)
    col_edges: np.ndarray  # (rows-1, cols)
    diagonals: np.ndarray  # (rows-1, cols-1)


def compute_intrinsics(vertices: np.ndarray) -> Intrinsics:
    v = np.asarray(vertices, dtype=float)
    row_edges = np.linalg.norm(v[:, 1:] - v[:, :-1], axis=-1)
    col_edges = np.linalg.norm(v[1:, :] - v[:-1, :], axis=-1)
    diagonals = np.linalg.norm(v[1:, 1:] - v[:-1, :-1], axis=-1)
    return Intrinsics(row_edges, col_edges, diagonals)


@dataclass(frozen=True)
class _TripleData:
    """Cached per-triple machinery for re-evaluating the motion at any parameter."""

    family: int
    branch_sign: float
    v_cols: np.ndarray  # constant column ratios, length = columns
    s0: float           # |A0 - middle tip| in the triple's local frame
    u0: float
    v0: float


@dataclass(frozen=True)
class _FlexData:
    s_row: np.ndarray       # first linkage row bars to the middle tip, per column
    t_row: np.ndarray       # first linkage row bars to the first tip, per column
    ref_phis: np.ndarray
    dphi_signs: np.ndarray
    ref_len_sq: np.ndarray  # squared first-row edge lengths at the reference state
    triples: tuple
    lambda_top: float
    lambda_bottom: float


@dataclass(frozen=True)
class FlexionState:
    """Vertex grid of one flexion state together with the realized angles and tips."""

    a: float
    vertices: np.ndarray
    phis: Optional[np.ndarray] = None
    tip_heights: Optional[tuple] = None


@dataclass(frozen=True)
class ConeNet:
    """Reference net with cached intrinsics and the data needed to flex it."""

    vertices: np.ndarray
    tip_heights: tuple
    spec: NetSpec
    intrinsics: Intrinsics
    classification: Classification
    linkage: LinkageSpec = field(repr=False, default=None)
    flex_data: _FlexData = field(repr=False, default=None)

    @property
    def a_ref(self) -> float:
        return self.spec.a_ref

    @property
    def rows(self) -> int:
        return self.vertices.shape[0]

    @property
    def cols(self) -> int:
        return self.vertices.shape[1]

    def tip_points(self) -> np.ndarray:
        return np.array([[0.0, 0.0, h] for h in self.tip_heights])


@dataclass(frozen=True)
class GeneralNet:
    """Image of an axial net under the parallelism operation (tips no longer axial)."""

    master: ConeNet
    row_scales: tuple
    col_scales: tuple
    vertices: np.ndarray
    intrinsics: Intrinsics


def _resolve_entry(entry: ProfileEntry, initial: Sublinkage, label: CaseLabel,
                   a_ref: float):
    """Profile entry -> free bar data (s, t) for extend_sublinkage."""
    if entry.s is not None:
        return entry.s, entry.t
    z = entry.z
    if z is None:
        if label.family != 3:
            raise InvariantError("point-form profile entries need z for cases 1 and 2")
        z = profile_point(a_ref, initial.s, initial.t).z
    s = math.hypot(entry.d, z)
    t = math.hypot(entry.d, z - a_ref)
    return s, t


def sample_semidiscrete(sampler: CurveSampler, label) -> tuple:
    """Evaluate a smooth profile curve at uniform parameters into profile entries.

    Cases 1 and 2 sample (d, phi, z); the perspectivity keeps the constant row
    height and samples (d, phi) only.  The first sample (r = 0) corresponds to
    the initial column.
    """
    label = case_label(label)
    if sampler.n < 2:
        raise InadmissibleSample("need at least two curve samples")
    rs = np.linspace(0.0, 1.0, sampler.n)
    entries = []
    last_phi = -math.inf
    for r in rs:
        d = float(sampler.d(r))
        phi = float(sampler.phi(r))
        if d <= 0:
            raise InadmissibleSample(f"curve distance must stay positive (r={r})")
        if phi <= last_phi:
            raise InadmissibleSample(f"curve angle must be strictly monotone (r={r})")
        last_phi = phi
        if label.family == 3:
            entries.append(ProfileEntry(phi=phi, d=d))
        else:
            if sampler.z is None:
                raise InadmissibleSample("cases 1 and 2 need a height callback z(r)")
            entries.append(ProfileEntry(phi=phi, d=d, z=float(sampler.z(r))))
    return tuple(entries)


def spec_from_curve(initial: Sublinkage, label, sampler: CurveSampler,
                    a_ref: float, **kwargs) -> NetSpec:
    """Single-triple net spec from a smooth profile curve.

    The curve must start at the initial column: its r = 0 sample has to
    reproduce the initial profile point.
    """
    label = case_label(label)
    entries = sample_semidiscrete(sampler, label)
    first = entries[0]
    ref = profile_point(a_ref, initial.s, initial.t)
    tol = base_tolerance() * 1e3
    z_first = first.z if first.z is not None else ref.z
    if first.phi != 0.0:
        raise InadmissibleSample("curve must start in the phi = 0 meridian plane")
    if (abs(first.d - ref.d) > tol * max(1.0, ref.d)
            or abs(z_first - ref.z) > tol * max(1.0, abs(ref.z))):
        raise InadmissibleSample("curve start does not reproduce the initial profile point")
    return NetSpec(cases=(label,), initial=initial, profile=entries[1:],
                   a_ref=a_ref, **kwargs)


def _chain_initial(link: ChainLink, label: CaseLabel, s0: float, t0: float) -> Sublinkage:
    """Resolve the free initial data of a chained triple against its case label."""
    tol = base_tolerance()
    if label.family == 3:
        if link.u0 is None or link.v0 is None:
            raise InvariantError("a chained perspectivity triple needs both u0 and v0")
        return Sublinkage(s=s0, t=t0, u=link.u0, v=link.v0)
    sign = _SCALING_SIGN[label]
    if link.v0 is not None:
        if link.v0 * sign <= 0:
            raise InvariantError(
                f"chained ratio v0={link.v0} has the wrong sign for {label.value}"
            )
        u0 = abs(link.v0) * t0
        if link.u0 is not None and abs(link.u0 - u0) > tol * max(u0, 1.0):
            raise IncompatibleChaining(
                "chained u0 contradicts the intercept proportion for the given v0"
            )
        return Sublinkage(s=s0, t=t0, u=u0, v=link.v0)
    if link.u0 is None:
        raise InvariantError("a chained triple needs u0 or v0")
    return Sublinkage(s=s0, t=t0, u=link.u0, v=sign * link.u0 / t0)


def _derive_chained_column(initial: Sublinkage, label: CaseLabel,
                           s: float, t: float, column: int) -> Sublinkage:
    """Sublinkage of a chained triple whose (s, t) data is fixed by the previous one."""
    tol = base_tolerance()
    s0, t0, u0, v0 = initial.s, initial.t, initial.u, initial.v
    if label.family == 1:
        return Sublinkage(s=s, t=t, u=u0 * t / t0, v=v0)
    if label.family == 2:
        denom = s * s - t * t
        if abs(denom) <= tol * max(s * s, t * t):
            raise IncompatibleChaining(
                f"chained collineation triple is singular at column {column} (s = t)"
            )
        vj = v0 * (s0 * s0 - t0 * t0) / denom
        if vj == 0:
            raise IncompatibleChaining(f"chained ratio vanishes at column {column}")
        return Sublinkage(s=s, t=t, u=abs(vj) * t, v=vj)
    # perspectivity: the inherited t must already satisfy the equal-height condition
    expected_t2 = s * s - s0 * s0 + t0 * t0
    if abs(t * t - expected_t2) > tol * max(t * t, abs(expected_t2), 1.0):
        raise IncompatibleChaining(
            f"inherited bar data at column {column} fails the equal-height condition"
        )
    u2 = v0 * v0 * (s * s - s0 * s0) + u0 * u0
    if u2 <= 0:
        raise IncompatibleChaining(
            f"chained perspectivity u-radicand is nonpositive at column {column}"
        )
    return Sublinkage(s=s, t=t, u=math.sqrt(u2), v=v0)


def _triple_tip(family: int, branch_sign: float, v0: float, s0: float, u0: float,
                a_local: float, zeta0: float) -> float:
    """Local height of the far tip for one triple at the current state."""
    if family == 1:
        return v0 * a_local
    if family == 2:
        return v0 * (2.0 * zeta0 - a_local)
    disc = v0 * v0 * zeta0 * zeta0 - v0 * v0 * s0 * s0 + u0 * u0
    scale = v0 * v0 * (zeta0 * zeta0 + s0 * s0) + u0 * u0
    if disc < -1e-12 * max(scale, 1.0):
        raise RadicandNegative("perspectivity tip radicand negative: outside flexion range")
    return v0 * zeta0 + branch_sign * math.sqrt(max(disc, 0.0))


def _assemble(flex_data: _FlexData, a: float, phis: np.ndarray,
              d_row: np.ndarray, z_row: np.ndarray):
    """Rows, tips and boundary rows from the first linkage row at parameter a."""
    cos_p, sin_p = np.cos(phis), np.sin(phis)
    row = np.stack([d_row * cos_p, d_row * sin_p, z_row], axis=-1)
    tips = [a, 0.0]
    rows = [row]
    for triple in flex_data.triples:
        center_h = tips[-1]
        a_local = tips[-2] - tips[-1]
        zeta0 = rows[-1][0, 2] - center_h
        b = _triple_tip(triple.family, triple.branch_sign, triple.v0, triple.s0,
                        triple.u0, a_local, zeta0)
        if abs(b) <= ABS_TOLERANCE * max(abs(a_local), 1.0):
            raise IncompatibleChaining("chained tip collapses onto the middle tip")
        nxt = rows[-1].copy()
        nxt[:, 0] *= triple.v_cols
        nxt[:, 1] *= triple.v_cols
        nxt[:, 2] = center_h + triple.v_cols * (nxt[:, 2] - center_h)
        rows.append(nxt)
        tips.append(center_h + b)
    top_tip = np.array([0.0, 0.0, tips[0]])
    bot_tip = np.array([0.0, 0.0, tips[-1]])
    top = rows[0] + flex_data.lambda_top * (top_tip - rows[0])
    bottom = rows[-1] + flex_data.lambda_bottom * (bot_tip - rows[-1])
    vertices = np.stack([top, *rows, bottom])
    return vertices, tuple(tips)


def build_net(spec: NetSpec) -> ConeNet:
    """Build the reference net of a spec, verifying flexibility triple by triple."""
    initial = spec.initial
    label0 = spec.cases[0]
    a_ref = spec.a_ref

    if label0.family in (1, 2):
        sign = _SCALING_SIGN[label0]
        deficit = abs(initial.v * initial.t - sign * initial.u) / max(
            abs(initial.v) * initial.t, initial.u, 1.0)
        if deficit > base_tolerance():
            raise NotFlexibleError(
                f"initial data violates the intercept proportion required by "
                f"{label0.value}",
                residuals={"proportion_deficit": deficit},
            )

    subs = []
    for j, entry in enumerate(spec.profile, start=1):
        s, t = _resolve_entry(entry, initial, label0, a_ref)
        if label0.family == 3 and t is not None:
            # keep the user's t; classification decides whether it is compatible
            u2 = initial.v ** 2 * (s * s - initial.s ** 2) + initial.u ** 2
            if u2 <= 0:
                raise RadicandNegative(
                    f"perspectivity u-formula has nonpositive radicand at column {j}")
            subs.append(Sublinkage(s=s, t=t, u=math.sqrt(u2), v=initial.v,
                                   phi=entry.phi))
        else:
            subs.append(extend_sublinkage(initial, label0, s=s, t=t, phi=entry.phi))
    lspec = LinkageSpec(initial=initial, others=tuple(subs), branch=spec.branches[0],
                        a_ref=a_ref)
    cls = classify(lspec)
    if not cls.flexible:
        raise NotFlexibleError(
            "profile data does not classify as flexible",
            residuals={"max": cls.max_residual, "per_index": cls.per_index_residuals},
        )
    if label0.family not in cls.families:
        raise NotFlexibleError(
            f"profile data is incompatible with the requested case {label0.value}",
            residuals={"families": sorted(cls.families)},
        )

    p0 = profile_point(a_ref, initial.s, initial.t)
    phis = np.array([0.0] + [e.phi for e in spec.profile])
    d_row = np.array([p0.d] + [profile_point(a_ref, sub.s, sub.t).d for sub in subs])
    z_row = np.array([p0.z] + [profile_point(a_ref, sub.s, sub.t).z for sub in subs])

    cur = [initial, *subs]
    triples = []
    for k, label in enumerate(spec.cases):
        if k > 0:
            s0 = cur[0].u
            t0 = abs(cur[0].v) * cur[0].s
            init_k = _chain_initial(spec.chain[k - 1], label, s0, t0)
            nxt = [init_k]
            for j, sub in enumerate(cur[1:], start=1):
                nxt.append(_derive_chained_column(
                    init_k, label, sub.u, abs(sub.v) * sub.s, j))
            _verify_triple(init_k, nxt[1:], label)
            cur = nxt
        init_k = cur[0]
        if label.family == 3:
            branch_sign = 1.0 if spec.branches[k] == "+" else -1.0
        else:
            branch = select_branch(init_k, label, a_ref) if k == 0 else spec.branches[k]
            branch_sign = 1.0 if branch == "+" else -1.0
        triples.append(_TripleData(
            family=label.family,
            branch_sign=branch_sign,
            v_cols=np.array([sub.v for sub in cur]),
            s0=init_k.s, u0=init_k.u, v0=init_k.v,
        ))

    # cache the squared first-row edge lengths through the same cosine expression
    # the angular solve inverts, so flexing at a_ref reproduces the reference
    # phis to the last ulp
    dphi = np.diff(phis)
    ref_len_sq = (d_row[:-1] ** 2 + d_row[1:] ** 2 + (z_row[:-1] - z_row[1:]) ** 2
                  - 2 * d_row[:-1] * d_row[1:] * np.cos(dphi))
    flex_data = _FlexData(
        s_row=np.array([sub.s for sub in (initial, *subs)]),
        t_row=np.array([sub.t for sub in (initial, *subs)]),
        ref_phis=phis,
        dphi_signs=np.where(dphi >= 0, 1.0, -1.0),
        ref_len_sq=ref_len_sq,
        triples=tuple(triples),
        lambda_top=spec.lambda_top,
        lambda_bottom=spec.lambda_bottom,
    )
    vertices, tips = _assemble(flex_data, a_ref, phis, d_row, z_row)
    return ConeNet(vertices=vertices, tip_heights=tips, spec=spec,
                   intrinsics=compute_intrinsics(vertices), classification=cls,
                   linkage=lspec, flex_data=flex_data)


def _verify_triple(initial: Sublinkage, others, label: CaseLabel):
    """Chained-triple compatibility: the quartic coefficients must vanish."""
    from .linkage import compatibility_coeffs

    tol = base_tolerance()
    for j, sub in enumerate(others, start=1):
        res = compatibility_coeffs(initial, sub).max_normalized()
        if res > tol:
            raise IncompatibleChaining(
                f"renormalized data of column {j} fails the {label.value} "
                f"classification (residual {res:.3e})"
            )


def build_patch(spec: NetSpec) -> ConeNet:
    """Single-triple patch: three conical strips, four vertex rows."""
    if spec.triples != 1:
        raise InvariantError("build_patch expects exactly one strip triple")
    return build_net(spec)


def build_pnet(spec: NetSpec) -> ConeNet:
    """Multi-triple net from a subsequent combination of scaling/collineation triples."""
    if spec.triples < 2:
        raise InvariantError("build_pnet expects at least two strip triples")
    return build_net(spec)


def flex(net: ConeNet, a: float) -> FlexionState:
    """Reconstruct the net at driving parameter a, preserving the quad intrinsics.

    Only the first linkage row's edge lengths drive the meridian angles; every
    further row follows from the constant column ratios, and the remaining
    edge constancy is the content of the flexibility classification.
    """
    fd = net.flex_data
    pts = [profile_point(a, s, t) for s, t in zip(fd.s_row, fd.t_row)]
    d_row = np.array([p.d for p in pts])
    z_row = np.array([p.z for p in pts])

    prod = d_row[:-1] * d_row[1:]
    if np.any(prod <= ABS_TOLERANCE):
        j = int(np.argmax(prod <= ABS_TOLERANCE))
        raise AngleUnsolvable(
            f"profile point of column {j} reaches the axis at a={a}", column=j)
    # preserve the reference first-row edge lengths:
    # |edge|^2 = d_j^2 + d_{j+1}^2 + (z_j - z_{j+1})^2 - 2 d_j d_{j+1} cos(dphi)
    cos_dphi = (d_row[:-1] ** 2 + d_row[1:] ** 2
                + (z_row[:-1] - z_row[1:]) ** 2 - fd.ref_len_sq) / (2 * prod)
    over = np.abs(cos_dphi) - 1.0
    tol = 1e-12
    if np.any(over > tol):
        j = int(np.argmax(over > tol))
        raise AngleUnsolvable(
            f"first-row edge {j} cannot keep its length at a={a} "
            f"(|cos| = {abs(cos_dphi[j]):.12f})", column=j)
    cos_dphi = np.clip(cos_dphi, -1.0, 1.0)
    dphi = fd.dphi_signs * np.arccos(cos_dphi)
    phis = np.concatenate([[0.0], np.cumsum(dphi)])

    vertices, tips = _assemble(fd, a, phis, d_row, z_row)
    return FlexionState(a=a, vertices=vertices, phis=phis, tip_heights=tips)


def _intrinsic_deviation(net: ConeNet, state: FlexionState) -> float:
    """Largest relative deviation of the state's edge data from the reference."""
    cur = compute_intrinsics(state.vertices)
    ref = net.intrinsics
    dev = 0.0
    for a, b in ((cur.row_edges, ref.row_edges), (cur.col_edges, ref.col_edges),
                 (cur.diagonals, ref.diagonals)):
        dev = max(dev, float(np.max(np.abs(a - b) / np.maximum(b, ABS_TOLERANCE))))
    return dev


def net_flexion_range(net: ConeNet, samples: int = 256) -> tuple:
    """Maximal interval around the reference value where the full net flexes.

    Starts from the planar linkage interval of the first triple and shrinks it
    by probing the complete reconstruction (angular solves, chained tips, and
    the isometry certificate, which also rules out the numerically degenerate
    fringe near the planar limits); endpoints are refined by bisection and are
    themselves feasible values.
    """
    from .config import ISOMETRY_TOLERANCE

    spec = net.spec
    planar = flexion_range(net.linkage)
    box = interval_containing(planar, spec.a_ref)
    if box is None:
        raise InvariantError("reference parameter is outside the planar range")
    lo, hi = box

    def feasible(x: float) -> bool:
        if not lo <= x <= hi or x <= 0:
            return False
        try:
            state = flex(net, x)
        except ChedraError:
            return False
        return _intrinsic_deviation(net, state) < 0.25 * ISOMETRY_TOLERANCE

    if not feasible(spec.a_ref):
        raise InvariantError("reference parameter is not a feasible flexion state")
    span = hi - lo
    tol = 1e-9 * max(span, 1.0)
    grid = np.linspace(lo + 1e-9 * span, hi - 1e-9 * span, samples)

    def walk(direction: int) -> float:
        side = grid[grid < spec.a_ref][::-1] if direction < 0 else grid[grid > spec.a_ref]
        good = spec.a_ref
        bad = lo if direction < 0 else hi
        for x in side:
            if feasible(x):
                good = x
            else:
                bad = x
                break
        return _bisect_feasible(feasible, good, bad, tol)

    return (walk(-1), walk(+1))


def _bisect_feasible(pred, good: float, bad: float, tol: float) -> float:
    for _ in range(200):
        if abs(bad - good) <= tol:
            break
        mid = 0.5 * (good + bad)
        if pred(mid):
            good = mid
        else:
            bad = mid
    return good


def transfer_grid(vertices: np.ndarray, row_scales: Sequence[float],
                  col_scales: Sequence[float]) -> np.ndarray:
    """Combescure transfer of a planar-quad grid.

    The first row and column are rebuilt from the scaled edge vectors; every
    interior vertex is the intersection of the two lines through its known
    neighbours parallel to the original edges, which keeps all edges parallel
    and all quads planar.
    """
    v = np.asarray(vertices, dtype=float)
    rows, cols = v.shape[:2]
    row_scales = np.asarray(row_scales, dtype=float)
    col_scales = np.asarray(col_scales, dtype=float)
    if row_scales.shape != (cols - 1,) or col_scales.shape != (rows - 1,):
        raise InvariantError(
            f"need {cols - 1} row-edge scales and {rows - 1} column-edge scales")
    if np.any(row_scales <= 0) or np.any(col_scales <= 0):
        raise ClosureFailure("scale factors must be positive")

    w = np.empty_like(v)
    w[0, 0] = v[0, 0]
    for j in range(cols - 1):
        w[0, j + 1] = w[0, j] + row_scales[j] * (v[0, j + 1] - v[0, j])
    for i in range(rows - 1):
        w[i + 1, 0] = w[i, 0] + col_scales[i] * (v[i + 1, 0] - v[i, 0])

    mean_edge = float(np.mean(np.linalg.norm(v[:, 1:] - v[:, :-1], axis=-1)))
    for i in range(rows - 1):
        for j in range(cols - 1):
            e_row = v[i + 1, j + 1] - v[i + 1, j]
            e_col = v[i + 1, j + 1] - v[i, j + 1]
            gap = w[i, j + 1] - w[i + 1, j]
            basis = np.stack([e_row, -e_col], axis=-1)
            sol, _, rank, sv = np.linalg.lstsq(basis, gap, rcond=None)
            if rank < 2 or sv[-1] <= 1e-12 * sv[0]:
                raise ClosureFailure(
                    f"quad ({i}, {j}) has parallel ruling directions; closure is degenerate")
            residual = np.linalg.norm(basis @ sol - gap)
            if residual > 1e-8 * max(mean_edge, 1.0):
                raise ClosureFailure(
                    f"quad ({i}, {j}) closure is inconsistent (residual {residual:.3e})")
            w[i + 1, j + 1] = w[i + 1, j] + sol[0] * e_row
    return w


def parallel_transfer(net: ConeNet, row_scales: Sequence[float],
                      col_scales: Sequence[float]) -> GeneralNet:
    """General net with every edge parallel to the corresponding edge of the input."""
    vertices = transfer_grid(net.vertices, row_scales, col_scales)
    return GeneralNet(master=net, row_scales=tuple(float(x) for x in row_scales),
                      col_scales=tuple(float(x) for x in col_scales),
                      vertices=vertices, intrinsics=compute_intrinsics(vertices))


def flex_parallel(master: ConeNet, row_scales: Sequence[float],
                  col_scales: Sequence[float], a: float) -> FlexionState:
    """State of the general net: transfer the master's state with fixed scales."""
    state = flex(master, a)
    vertices = transfer_grid(state.vertices, row_scales, col_scales)
    return FlexionState(a=a, vertices=vertices, phis=state.phis, tip_heights=None)
