"""Independent numerical certificates for built nets and flexion states.

Planarity, isometry and tip collinearity are direct measurements.  The
rigid-foldability oracle treats a 3x3 panel complex as nine rigid bodies
coupled by hinges and decides finite flexibility from loop-closure residuals
along a swept driving angle; it never consults the linkage classification.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from .config import (
    ABS_TOLERANCE,
    COLLINEARITY_TOLERANCE,
    ISOMETRY_TOLERANCE,
    ORACLE_RESIDUAL_TOLERANCE,
    ORACLE_WITNESS_INTERVAL,
    PLANARITY_TOLERANCE,
)
from .errors import InvariantError, ShapeMismatch
from .nets import ConeNet, compute_intrinsics


@dataclass(frozen=True)
class ValidationReport:
    planarity_max: float
    isometry_max: float
    collinearity_max: float
    planarity_pass: bool
    isometry_pass: bool
    collinearity_pass: bool
    offenders: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.planarity_pass and self.isometry_pass and self.collinearity_pass

    def to_dict(self) -> dict:
        return {
            "planarity": {"max_defect": self.planarity_max, "pass": self.planarity_pass},
            "isometry": {"max_deviation": self.isometry_max, "pass": self.isometry_pass},
            "collinearity": {"max_defect": self.collinearity_max,
                             "pass": self.collinearity_pass},
            "pass": self.passed,
            "offenders": {k: list(v) for k, v in self.offenders.items()},
        }


def _grid_of(obj) -> np.ndarray:
    if hasattr(obj, "vertices"):
        return np.asarray(obj.vertices, dtype=float)
    return np.asarray(obj, dtype=float)


def check_planarity(obj) -> tuple:
    """Worst normalized planarity defect over all quads and its quad index.

    Defect = distance of the fourth corner to the plane of the first three,
    divided by the quad's mean edge length.
    """
    v = _grid_of(obj)
    rows, cols = v.shape[:2]
    worst, where = 0.0, (0, 0)
    for i in range(rows - 1):
        for j in range(cols - 1):
            p0, p1, p2, p3 = v[i, j], v[i, j + 1], v[i + 1, j + 1], v[i + 1, j]
            n = np.cross(p1 - p0, p2 - p0)
            nn = np.linalg.norm(n)
            edges = [np.linalg.norm(b - a)
                     for a, b in ((p0, p1), (p1, p2), (p2, p3), (p3, p0))]
            mean_edge = max(np.mean(edges), ABS_TOLERANCE)
            if nn <= ABS_TOLERANCE * mean_edge * mean_edge:
                continue  # degenerate triangle spans no plane
            dist = abs(float(np.dot(p3 - p0, n / nn)))
            defect = float(dist / mean_edge)
            if defect > worst:
                worst, where = defect, (i, j)
    return worst, where


def check_isometry(reference, state) -> tuple:
    """Worst relative deviation of edge lengths and quad diagonals, with its index."""
    ref_v = _grid_of(reference)
    cur_v = _grid_of(state)
    if ref_v.shape != cur_v.shape:
        raise ShapeMismatch(
            f"grids are not combinatorially identical: {ref_v.shape} vs {cur_v.shape}")
    ref = compute_intrinsics(ref_v)
    cur = compute_intrinsics(cur_v)
    worst, where = 0.0, ("row", 0, 0)
    for name, a, b in (("row", cur.row_edges, ref.row_edges),
                       ("col", cur.col_edges, ref.col_edges),
                       ("diag", cur.diagonals, ref.diagonals)):
        dev = np.abs(a - b) / np.maximum(b, ABS_TOLERANCE)
        idx = np.unravel_index(int(np.argmax(dev)), dev.shape)
        if dev[idx] > worst:
            worst, where = float(dev[idx]), (name, int(idx[0]), int(idx[1]))
    return worst, where


def check_tip_collinearity(tips) -> float:
    """Largest distance of the tip points to their best-fit line (SVD fit)."""
    pts = np.asarray(tips, dtype=float)
    if pts.ndim == 1:
        pts = np.array([[0.0, 0.0, z] for z in pts])
    if len(pts) < 2:
        raise InvariantError("collinearity needs at least two tips")
    if len(pts) == 2:
        return 0.0
    centroid = pts.mean(axis=0)
    rel = pts - centroid
    _, _, vt = np.linalg.svd(rel, full_matrices=False)
    direction = vt[0]
    offsets = rel - np.outer(rel @ direction, direction)
    return float(np.max(np.linalg.norm(offsets, axis=1)))


def validate_state(reference: ConeNet, state=None) -> ValidationReport:
    """Full certificate: planarity, isometry against the reference, tip collinearity."""
    state = reference if state is None else state
    pl, pl_where = check_planarity(state)
    iso, iso_where = check_isometry(reference, state)
    tips = getattr(state, "tip_heights", None)
    if tips is None:
        tips = getattr(reference, "tip_heights", None)
    # general (transferred) nets have no axial tips; the check does not apply
    col = 0.0 if tips is None else check_tip_collinearity(tips)
    pl, iso, col = float(pl), float(iso), float(col)
    return ValidationReport(
        planarity_max=pl,
        isometry_max=iso,
        collinearity_max=col,
        planarity_pass=bool(pl < PLANARITY_TOLERANCE),
        isometry_pass=bool(iso < ISOMETRY_TOLERANCE),
        collinearity_pass=bool(col < COLLINEARITY_TOLERANCE),
        offenders={"planarity": pl_where, "isometry": iso_where},
    )


# ---------------------------------------------------------------------------
# rigid-foldability oracle for 3x3 complexes
# ---------------------------------------------------------------------------

# panel (r, c) has corners V[r, c], V[r, c+1], V[r+1, c+1], V[r+1, c];
# the spanning tree roots at the center panel, the driven hinge attaches the
# top-center panel, and four ring hinges are left as closure constraints
_TREE_EDGES = (
    # (parent panel, child panel, hinge vertex indices)
    ((1, 1), (1, 2), ((1, 2), (2, 2))),
    ((1, 1), (2, 1), ((2, 1), (2, 2))),
    ((1, 1), (1, 0), ((1, 1), (2, 1))),
    ((0, 1), (0, 0), ((0, 1), (1, 1))),
    ((0, 1), (0, 2), ((0, 2), (1, 2))),
    ((2, 1), (2, 0), ((2, 1), (3, 1))),
    ((2, 1), (2, 2), ((2, 2), (3, 2))),
)
_DRIVEN = ((1, 1), (0, 1), ((1, 1), (1, 2)))
_CLOSURE_HINGES = (
    ((0, 0), (1, 0), ((1, 0), (1, 1))),
    ((0, 2), (1, 2), ((1, 2), (1, 3))),
    ((2, 0), (1, 0), ((2, 0), (2, 1))),
    ((2, 2), (1, 2), ((2, 2), (2, 3))),
)


_HINGE_TURNS = {"top": 0, "left": 1, "bottom": 2, "right": 3}


@dataclass(frozen=True)
class Complex3x3:
    """Nine-panel complex given by its 4x4 vertex grid and the driven hinge.

    The driving hinge is one of the four hinges of the center panel, named by
    its side; the grid is re-indexed so the driven hinge plays the canonical
    role, which leaves rigid-foldability unchanged.
    """

    vertices: np.ndarray
    driving_hinge: str = "top"

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.shape != (4, 4, 3):
            raise InvariantError("a 3x3 complex needs a 4x4 vertex grid")
        if self.driving_hinge not in _HINGE_TURNS:
            raise InvariantError(
                f"driving hinge must be one of {sorted(_HINGE_TURNS)}")
        object.__setattr__(self, "vertices", v)

    def oriented_vertices(self) -> np.ndarray:
        return np.rot90(self.vertices, k=_HINGE_TURNS[self.driving_hinge],
                        axes=(0, 1))


@dataclass(frozen=True)
class OracleResult:
    flexible: bool
    samples: tuple  # (driving angle offset, normalized closure residual)
    reason: str = ""


def _rotation_about_line(point: np.ndarray, direction: np.ndarray, angle: float):
    d = direction / np.linalg.norm(direction)
    c, s = math.cos(angle), math.sin(angle)
    K = np.array([[0, -d[2], d[1]], [d[2], 0, -d[0]], [-d[1], d[0], 0]])
    R = np.eye(3) + s * K + (1 - c) * (K @ K)
    t = point - R @ point
    return R, t


def _compose(pose_a, pose_b):
    Ra, ta = pose_a
    Rb, tb = pose_b
    return Ra @ Rb, Ra @ tb + ta


def _poses(v: np.ndarray, theta: float, ring: np.ndarray) -> dict:
    """Panel poses from the spanning tree for driven angle theta and ring angles."""
    poses = {(1, 1): (np.eye(3), np.zeros(3))}
    (_, driven_panel, (h0, h1)) = _DRIVEN
    axis_p, axis_q = v[h0], v[h1]
    poses[driven_panel] = _rotation_about_line(axis_p, axis_q - axis_p, theta)
    for (parent, child, (a, b)), angle in zip(_TREE_EDGES, ring):
        local = _rotation_about_line(v[a], v[b] - v[a], angle)
        poses[child] = _compose(poses[parent], local)
    return poses


def _closure_residuals(v: np.ndarray, theta: float, ring: np.ndarray) -> np.ndarray:
    poses = _poses(v, theta, ring)
    res = []
    for pa, pb, (a, b) in _CLOSURE_HINGES:
        Ra, ta = poses[pa]
        Rb, tb = poses[pb]
        for idx in (a, b):
            p = v[idx]
            res.extend(Ra @ p + ta - (Rb @ p + tb))
    return np.asarray(res)


def kokotsakis_oracle(complex3x3: Complex3x3, span: float = 1.2e-2,
                      steps: int = 12) -> OracleResult:
    """Decide finite rigid-foldability of a 3x3 complex by sweeping the driven hinge.

    The input geometry is the zero state.  For each sampled driving angle the
    seven remaining hinge angles are solved from the four ring-closure
    equations (least squares, seeded by continuation).  The complex counts as
    flexible when the normalized closure residual stays below the oracle
    tolerance over a full witness interval on either side of the zero state;
    one side suffices because the driven dihedral may sit at a fold (an
    extremum along the motion), where only one sweep direction is attainable.
    """
    if span < ORACLE_WITNESS_INTERVAL:
        raise InvariantError("sweep span is below the witness interval")
    v = complex3x3.oriented_vertices()
    mean_edge = float(np.mean(np.linalg.norm(v[:, 1:] - v[:, :-1], axis=-1)))
    offsets = [k * span / steps for k in range(steps + 1)]

    samples = []
    reasons = []
    full_side = False
    for direction in (+1.0, -1.0):
        ring = np.zeros(len(_TREE_EDGES))
        side_ok = True
        for off in offsets:
            theta = direction * off
            if off == 0.0 and direction < 0:
                continue
            try:
                sol = least_squares(
                    lambda x: _closure_residuals(v, theta, x), ring,
                    method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
            except Exception as exc:  # solver blow-up counts as a failed side
                reasons.append(f"closure solve diverged at {theta:+.4f}: {exc}")
                side_ok = False
                break
            ring = sol.x
            residual = math.sqrt(2.0 * sol.cost / len(sol.fun)) / mean_edge
            samples.append((theta, residual))
            if residual >= ORACLE_RESIDUAL_TOLERANCE:
                reasons.append(f"closure residual {residual:.3e} at {theta:+.4f}")
                side_ok = False
                break
        full_side = full_side or side_ok
    reason = "" if full_side else "; ".join(reasons)
    return OracleResult(full_side, tuple(sorted(samples)), reason)


def extract_3x3_blocks(vertices: np.ndarray) -> list:
    """All 4x4 vertex windows of a grid as 3x3 complexes."""
    v = np.asarray(vertices, dtype=float)
    rows, cols = v.shape[:2]
    return [Complex3x3(v[i:i + 4, j:j + 4])
            for i in range(rows - 3) for j in range(cols - 3)]


@dataclass(frozen=True)
class CrossValidationSummary:
    classification: str
    flexible_by_classification: bool
    oracle_results: tuple
    report: Optional[ValidationReport]
    agreement: bool


def cross_validate(net_or_spec, sweep_states: int = 8) -> CrossValidationSummary:
    """Tie the classification to the oracle: build, sweep, and test every 3x3 block."""
    from .linkage import LinkageSpec, classify
    from .nets import NetSpec, build_net, flex, net_flexion_range

    if isinstance(net_or_spec, LinkageSpec):
        cls = classify(net_or_spec)
        return CrossValidationSummary(cls.label.value, cls.flexible, (), None,
                                      agreement=True)
    net = build_net(net_or_spec) if isinstance(net_or_spec, NetSpec) else net_or_spec
    lo, hi = net_flexion_range(net)
    worst_report = None
    for a in np.linspace(lo, hi, sweep_states):
        report = validate_state(net, flex(net, a))
        if worst_report is None or report.isometry_max > worst_report.isometry_max:
            worst_report = report
    oracle_results = tuple(kokotsakis_oracle(block)
                           for block in extract_3x3_blocks(net.vertices))
    agreement = worst_report.passed and all(r.flexible for r in oracle_results)
    return CrossValidationSummary(
        classification=net.classification.label.value,
        flexible_by_classification=True,
        oracle_results=oracle_results,
        report=worst_report,
        agreement=agreement,
    )
