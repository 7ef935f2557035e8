"""Document formats: net specs and geometry as JSON, meshes as OBJ.

All emitters are deterministic: keys are sorted, floats are printed with 17
significant digits (exact round-trip for doubles), and no timestamps or
environment data are embedded, so identical inputs produce identical bytes.
"""
import json
import math
from pathlib import Path

import jsonschema
import numpy as np

from .errors import InvariantError, SchemaError
from .linkage import Sublinkage, case_label
from .nets import ChainLink, ConeNet, FlexionState, GeneralNet, NetSpec, ProfileEntry

NET_SPEC_SCHEMA = {
    "type": "object",
    "required": ["a_ref", "cases", "initial", "profile"],
    "additionalProperties": False,
    "properties": {
        "a_ref": {"type": "number", "exclusiveMinimum": 0},
        "branch": {
            "oneOf": [
                {"enum": ["+", "-"]},
                {"type": "array", "items": {"enum": ["+", "-"]}, "minItems": 1},
            ]
        },
        "cases": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "string"},
        },
        "initial": {
            "type": "object",
            "required": ["s", "t", "u", "v"],
            "additionalProperties": False,
            "properties": {name: {"type": "number"} for name in "stuv"},
        },
        "chain": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "properties": {"u0": {"type": "number"}, "v0": {"type": "number"}},
            },
        },
        "profile": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["phi"],
                "additionalProperties": False,
                "properties": {name: {"type": "number"} for name in ("s", "t", "d", "z", "phi")},
            },
        },
        "boundary": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "lambda_top": {"type": "number"},
                "lambda_bottom": {"type": "number"},
            },
        },
        "parallel": {
            "type": "object",
            "required": ["row_scales", "col_scales"],
            "additionalProperties": False,
            "properties": {
                "row_scales": {"type": "array", "items": {"type": "number"}},
                "col_scales": {"type": "array", "items": {"type": "number"}},
            },
        },
    },
}


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    value = float(x)
    if not math.isfinite(value):
        raise InvariantError(f"cannot serialize non-finite number: {value!r}")
    if value == int(value) and abs(value) < 1e16:
        return f"{value:.1f}"
    return format(value, ".17g")


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: sorted keys, 17-significant-digit floats."""
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.integer, np.floating)):
        return _fmt(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        return "[" + ",".join(dumps_canonical(x) for x in items) + "]"
    if isinstance(obj, dict):
        parts = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise InvariantError("canonical JSON requires string keys")
            parts.append(json.dumps(key) + ":" + dumps_canonical(obj[key]))
        return "{" + ",".join(parts) + "}"
    raise InvariantError(f"cannot serialize object of type {type(obj).__name__}")


def spec_from_document(doc: dict) -> NetSpec:
    """Validate a spec document against the schema and the structural invariants."""
    try:
        jsonschema.validate(doc, NET_SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"spec document rejected: {exc.message}") from exc

    init = doc["initial"]
    initial = Sublinkage(s=init["s"], t=init["t"], u=init["u"], v=init["v"])
    cases = tuple(case_label(c) for c in doc["cases"])
    branch = doc.get("branch", "+")
    branches = (branch,) * len(cases) if isinstance(branch, str) else tuple(branch)
    if len(branches) == 1 and len(cases) > 1:
        branches = branches * len(cases)
    profile = tuple(
        ProfileEntry(phi=e["phi"], s=e.get("s"), t=e.get("t"),
                     d=e.get("d"), z=e.get("z"))
        for e in doc["profile"]
    )
    chain = tuple(ChainLink(u0=link.get("u0"), v0=link.get("v0"))
                  for link in doc.get("chain", ()))
    boundary = doc.get("boundary", {})
    parallel = doc.get("parallel")
    return NetSpec(
        cases=cases,
        initial=initial,
        profile=profile,
        a_ref=doc["a_ref"],
        branches=branches,
        chain=chain,
        lambda_top=boundary.get("lambda_top", 0.5),
        lambda_bottom=boundary.get("lambda_bottom", 0.5),
        row_scales=tuple(parallel["row_scales"]) if parallel else None,
        col_scales=tuple(parallel["col_scales"]) if parallel else None,
    )


def spec_to_document(spec: NetSpec) -> dict:
    doc = {
        "a_ref": spec.a_ref,
        "branch": spec.branches[0] if len(spec.branches) == 1 else list(spec.branches),
        "cases": [c.value for c in spec.cases],
        "initial": {"s": spec.initial.s, "t": spec.initial.t,
                    "u": spec.initial.u, "v": spec.initial.v},
        "profile": [
            {k: v for k, v in (("s", e.s), ("t", e.t), ("d", e.d),
                               ("z", e.z), ("phi", e.phi)) if v is not None}
            for e in spec.profile
        ],
        "boundary": {"lambda_top": spec.lambda_top, "lambda_bottom": spec.lambda_bottom},
    }
    if spec.chain:
        doc["chain"] = [
            {k: v for k, v in (("u0", link.u0), ("v0", link.v0)) if v is not None}
            for link in spec.chain
        ]
    if spec.row_scales is not None and spec.col_scales is not None:
        doc["parallel"] = {"row_scales": list(spec.row_scales),
                           "col_scales": list(spec.col_scales)}
    return doc


def load_spec(path) -> NetSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return spec_from_document(doc)


def save_spec(spec: NetSpec, path) -> None:
    Path(path).write_text(dumps_canonical(spec_to_document(spec)) + "\n",
                          encoding="utf-8")


def geometry_document(state, report: dict = None, boundary: bool = None) -> dict:
    """JSON-ready geometry of a net or flexion state."""
    if isinstance(state, (ConeNet, GeneralNet)):
        vertices = state.vertices
        a = state.master.spec.a_ref if isinstance(state, GeneralNet) else state.spec.a_ref
        tips = getattr(state, "tip_heights", None)
    elif isinstance(state, FlexionState):
        vertices, a, tips = state.vertices, state.a, state.tip_heights
    else:
        raise InvariantError(f"cannot export {type(state).__name__}")
    vertices = np.asarray(vertices, dtype=float)
    if vertices.size == 0:
        raise InvariantError("empty net cannot be exported")
    doc = {
        "a": float(a),
        "rows": [[[float(c) for c in p] for p in row] for row in vertices],
        "tips": [[0.0, 0.0, float(h)] for h in tips] if tips is not None else [],
    }
    if report is not None:
        doc["report"] = report
    if boundary is not None:
        doc["boundary"] = bool(boundary)
    return doc


def export_obj(vertices: np.ndarray) -> str:
    """Wavefront OBJ with quad faces, row-major vertex order."""
    v = np.asarray(vertices, dtype=float)
    if v.size == 0:
        raise InvariantError("empty net cannot be exported")
    rows, cols = v.shape[:2]
    lines = [f"# quad net {rows}x{cols}"]
    for row in v:
        for p in row:
            lines.append("v " + " ".join(_fmt(float(c)) for c in p))
    for i in range(rows - 1):
        for j in range(cols - 1):
            base = i * cols + j + 1
            lines.append(f"f {base} {base + 1} {base + cols + 1} {base + cols}")
    return "\n".join(lines) + "\n"


def export_geometry(state, fmt: str = "json", report: dict = None,
                    boundary: bool = None) -> bytes:
    """Deterministic byte output of a geometry in the requested format."""
    if fmt == "json":
        return (dumps_canonical(geometry_document(state, report, boundary)) + "\n").encode()
    if fmt == "obj":
        vertices = state.vertices if hasattr(state, "vertices") else state
        return export_obj(vertices).encode()
    raise InvariantError(f"unknown export format: {fmt!r}")
