import json
import math

import numpy as np
import pytest

from chedra.errors import InvariantError, SchemaError
from chedra.nets import build_net, build_patch, flex
from chedra.serialize import (
    dumps_canonical,
    export_geometry,
    geometry_document,
    load_spec,
    save_spec,
    spec_from_document,
    spec_to_document,
)


class TestCanonicalJson:
    def test_sorted_keys_and_float_format(self):
        text = dumps_canonical({"b": 1.5, "a": 2, "c": [True, None, "x"]})
        assert text == '{"a":2,"b":1.5,"c":[true,null,"x"]}'

    def test_floats_round_trip_exactly(self, rng):
        values = list(rng.uniform(-1e6, 1e6, 50)) + [math.pi, 1 / 3, 2 ** -40]
        text = dumps_canonical(values)
        back = json.loads(text)
        assert all(a == b for a, b in zip(back, values))

    def test_non_finite_rejected(self):
        with pytest.raises(InvariantError):
            dumps_canonical(float("nan"))

    def test_byte_stability(self, scaling_spec):
        a = dumps_canonical(spec_to_document(scaling_spec))
        b = dumps_canonical(spec_to_document(scaling_spec))
        assert a == b


class TestSpecDocuments:
    def test_round_trip_idempotent(self, tmp_path, pnet_spec):
        path = tmp_path / "spec.json"
        save_spec(pnet_spec, path)
        spec1 = load_spec(path)
        save_spec(spec1, path)
        spec2 = load_spec(path)
        assert dumps_canonical(spec_to_document(spec1)) \
            == dumps_canonical(spec_to_document(spec2)) \
            == dumps_canonical(spec_to_document(pnet_spec))

    def test_missing_initial_is_schema_error(self):
        with pytest.raises(SchemaError):
            spec_from_document({"a_ref": 2.0, "cases": ["1a"],
                                "profile": [{"s": 2.0, "t": 2.0, "phi": 0.4}]})

    def test_zero_ratio_is_invariant_error(self, scaling_spec):
        doc = spec_to_document(scaling_spec)
        doc["initial"]["v"] = 0.0
        with pytest.raises(InvariantError):
            spec_from_document(doc)

    def test_unknown_case_rejected(self, scaling_spec):
        doc = spec_to_document(scaling_spec)
        doc["cases"] = ["4x"]
        with pytest.raises(InvariantError):
            spec_from_document(doc)

    def test_short_case_names_accepted(self, scaling_spec):
        doc = spec_to_document(scaling_spec)
        doc["cases"] = ["1a"]
        spec = spec_from_document(doc)
        assert spec.cases[0].value == "Scaling_1a"

    def test_point_form_profile(self, scaling_spec):
        doc = spec_to_document(scaling_spec)
        doc["profile"] = [{"d": 1.2, "z": 1.1, "phi": 0.5}]
        spec = spec_from_document(doc)
        net = build_net(spec)
        assert net.vertices.shape == (4, 2, 3)
        # the built first-row vertex reproduces the requested point
        assert np.allclose(net.vertices[1, 1, 2], 1.1)
        assert abs(np.hypot(*net.vertices[1, 1, :2]) - 1.2) < 1e-12


class TestGeometryExport:
    def test_json_round_trip_precision(self, scaling_spec):
        net = build_patch(scaling_spec)
        payload = export_geometry(net, fmt="json")
        doc = json.loads(payload)
        back = np.array(doc["rows"])
        assert np.max(np.abs(back - net.vertices)) < 1e-15
        assert doc["tips"][1] == [0.0, 0.0, 0.0]

    def test_obj_quad_count(self, pnet_spec):
        net = build_net(pnet_spec)
        text = export_geometry(net, fmt="obj").decode()
        rows, cols = net.vertices.shape[:2]
        assert text.count("\nf ") == (rows - 1) * (cols - 1)
        assert text.count("\nv ") + text.startswith("v ") == rows * cols

    def test_flexion_state_export(self, scaling_spec):
        net = build_patch(scaling_spec)
        state = flex(net, 1.5)
        doc = geometry_document(state, report={"pass": True}, boundary=False)
        assert doc["a"] == 1.5
        assert doc["report"] == {"pass": True}
        assert doc["boundary"] is False

    def test_empty_grid_rejected(self):
        with pytest.raises(InvariantError):
            export_geometry(np.zeros((0, 0, 3)), fmt="obj")

    def test_deterministic_bytes(self, scaling_spec):
        net = build_patch(scaling_spec)
        assert export_geometry(net, fmt="obj") == export_geometry(net, fmt="obj")
        assert export_geometry(net, fmt="json") == export_geometry(net, fmt="json")

    def test_unknown_format(self, scaling_spec):
        net = build_patch(scaling_spec)
        with pytest.raises(InvariantError):
            export_geometry(net, fmt="stl")
