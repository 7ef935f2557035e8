import json

import pytest

from chedra.cli import main
from chedra.samples import (
    collineation_sample,
    perspectivity_sample,
    pnet_sample,
    scaling_sample,
)
from chedra.serialize import save_spec


@pytest.fixture
def spec_paths(tmp_path):
    paths = {}
    for name, spec in (("scaling", scaling_sample()),
                       ("collineation", collineation_sample()),
                       ("perspectivity", perspectivity_sample()),
                       ("pnet", pnet_sample())):
        path = tmp_path / f"{name}.json"
        save_spec(spec, path)
        paths[name] = str(path)
    return paths


def test_classify_prints_label(spec_paths, capsys):
    assert main(["classify", spec_paths["scaling"]]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Scaling_1a")
    assert main(["classify", spec_paths["collineation"]]) == 0
    assert capsys.readouterr().out.startswith("Collineation_2a")


def test_build_writes_obj(spec_paths, tmp_path):
    out = tmp_path / "net.obj"
    assert main(["build", spec_paths["scaling"], "-o", str(out)]) == 0
    text = out.read_text()
    assert text.count("\nf ") == 9


def test_build_json_includes_report(spec_paths, tmp_path):
    out = tmp_path / "net.json"
    assert main(["build", spec_paths["perspectivity"], "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["pass"] is True


def test_flex_out_of_range_is_error(spec_paths):
    assert main(["flex", spec_paths["scaling"], "--a", "5"]) == 1


def test_flex_at_value(spec_paths, tmp_path):
    out = tmp_path / "state.json"
    assert main(["flex", spec_paths["scaling"], "--a", "1.5", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["a"] == 1.5


def test_sweep_writes_frames(spec_paths, tmp_path):
    frames = tmp_path / "frames"
    assert main(["flex", spec_paths["scaling"], "--sweep", "5",
                 "-o", str(frames)]) == 0
    files = sorted(p.name for p in frames.iterdir())
    assert files == [f"frame_{k:04d}.obj" for k in range(5)]


def test_range_reports_intervals(spec_paths, capsys):
    assert main(["range", spec_paths["scaling"]]) == 0
    out = capsys.readouterr().out
    assert "planar interval" in out and "usable interval" in out
    assert "2.8284271" in out


def test_validate_passes(spec_paths):
    assert main(["validate", spec_paths["perspectivity"]]) == 0


def test_validate_chained_net(spec_paths):
    assert main(["validate", spec_paths["pnet"]]) == 0


def test_parallel_requires_scales(spec_paths):
    assert main(["parallel", spec_paths["scaling"]]) == 1


def test_parallel_with_scales(tmp_path):
    import dataclasses

    spec = dataclasses.replace(scaling_sample(), row_scales=(1.2, 0.8, 1.5),
                               col_scales=(0.9, 1.3, 1.1))
    path = tmp_path / "spec.json"
    save_spec(spec, path)
    out = tmp_path / "general.obj"
    assert main(["parallel", str(path), "-o", str(out)]) == 0
    assert out.read_text().count("\nf ") == 9


def test_missing_file_is_error(tmp_path):
    assert main(["classify", str(tmp_path / "missing.json")]) == 1


def test_output_is_byte_stable(spec_paths, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["build", spec_paths["pnet"], "-o", str(out1)])
    main(["build", spec_paths["pnet"], "-o", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
