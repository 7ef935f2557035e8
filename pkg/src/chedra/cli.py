"""Command-line surface: build, classify, flex, range, validate, parallel, serve.

Exit codes: 0 on success, 2 when a validation check fails, 1 on any error.
"""
import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ChedraError
from .linkage import flexion_range, interval_containing
from .nets import build_net, flex, flex_parallel, net_flexion_range, parallel_transfer
from .serialize import export_geometry, load_spec
from .service import DEFAULT_PORT
from .validation import cross_validate, validate_state


def _write_output(data: bytes, out):
    if out is None or out == "-":
        sys.stdout.write(data.decode())
    else:
        Path(out).write_bytes(data)


def _fmt_for(out, explicit):
    if explicit:
        return explicit
    if out and str(out).endswith(".obj"):
        return "obj"
    return "json"


def cmd_build(args) -> int:
    spec = load_spec(args.spec)
    net = build_net(spec)
    report = validate_state(net).to_dict()
    fmt = _fmt_for(args.output, args.format)
    _write_output(export_geometry(net, fmt=fmt, report=report if fmt == "json" else None),
                  args.output)
    return 0


def cmd_classify(args) -> int:
    spec = load_spec(args.spec)
    net = build_net(spec)
    cls = net.classification
    flags = " (also case 3)" if cls.case3_compatible else ""
    print(f"{cls.label.value}{flags}")
    print(f"branch: {cls.branch}")
    print(f"max residual: {cls.max_residual:.3e}")
    return 0


def cmd_flex(args) -> int:
    spec = load_spec(args.spec)
    net = build_net(spec)
    if args.sweep is None:
        state = flex(net, args.a if args.a is not None else spec.a_ref)
        fmt = _fmt_for(args.output, args.format)
        _write_output(export_geometry(state, fmt=fmt), args.output)
        return 0
    lo, hi = net_flexion_range(net)
    out_dir = Path(args.output or "frames")
    out_dir.mkdir(parents=True, exist_ok=True)
    for k, a in enumerate(np.linspace(lo, hi, args.sweep)):
        state = flex(net, float(a))
        (out_dir / f"frame_{k:04d}.obj").write_bytes(export_geometry(state, fmt="obj"))
    print(f"wrote {args.sweep} frames to {out_dir}")
    return 0


def cmd_range(args) -> int:
    spec = load_spec(args.spec)
    net = build_net(spec)
    planar = flexion_range(net.linkage)
    usable = net_flexion_range(net)
    box = interval_containing(planar, spec.a_ref)
    print(f"planar interval: [{box[0]:.9g}, {box[1]:.9g}]")
    print(f"usable interval: [{usable[0]:.9g}, {usable[1]:.9g}]")
    return 0


def cmd_validate(args) -> int:
    spec = load_spec(args.spec)
    summary = cross_validate(spec)
    report = summary.report.to_dict()
    print(f"classification: {summary.classification}")
    print(f"planarity: {report['planarity']['max_defect']:.3e} "
          f"pass={report['planarity']['pass']}")
    print(f"isometry:  {report['isometry']['max_deviation']:.3e} "
          f"pass={report['isometry']['pass']}")
    print(f"collinearity: {report['collinearity']['max_defect']:.3e} "
          f"pass={report['collinearity']['pass']}")
    oracle_ok = all(r.flexible for r in summary.oracle_results)
    print(f"foldability oracle: {len(summary.oracle_results)} blocks, "
          f"all flexible={oracle_ok}")
    if not summary.agreement:
        print("validation FAILED")
        return 2
    print("validation passed")
    return 0


def cmd_parallel(args) -> int:
    spec = load_spec(args.spec)
    net = build_net(spec)
    if spec.row_scales is None or spec.col_scales is None:
        raise ChedraError("spec document has no 'parallel' scale data")
    if args.a is None:
        general = parallel_transfer(net, spec.row_scales, spec.col_scales)
        payload = general
    else:
        payload = flex_parallel(net, spec.row_scales, spec.col_scales, args.a)
    fmt = _fmt_for(args.output, args.format)
    _write_output(export_geometry(payload, fmt=fmt), args.output)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chedra",
        description="axial cone-net construction, classification and flexion")
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_cmd(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="path to a net spec JSON document")
        p.set_defaults(fn=fn)
        return p

    p = spec_cmd("build", cmd_build, "build the reference net")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--format", choices=("json", "obj"), default=None)

    spec_cmd("classify", cmd_classify, "classify the linkage of the first triple")

    p = spec_cmd("flex", cmd_flex, "reconstruct at a parameter value or sweep")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--sweep", type=int, default=None, metavar="N")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--format", choices=("json", "obj"), default=None)

    spec_cmd("range", cmd_range, "print the admissible parameter intervals")

    spec_cmd("validate", cmd_validate, "run all certificates and the oracle")

    p = spec_cmd("parallel", cmd_parallel, "apply the parallelism scales of the spec")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--format", choices=("json", "obj"), default=None)

    p = sub.add_parser("serve", help="run the HTTP design service")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ChedraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
