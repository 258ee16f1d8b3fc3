"""Command line entry point: ``foldcap {classify,survey,curves,verify,mesh}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from dataclasses import dataclass, fields
from pathlib import Path

from .classify import NonGenericCrossCapWarning, classify_fold, phi_poly, survey_sphere
from .crosscap import CrossCapParams
from .export import VERIFY_COLUMNS, curves_csv, mesh_obj, survey_csv, survey_svg, write_csv
from .folding import FoldPlane
from .geometry import CHARACTERISATION_DESCRIPTIONS, characterisation_item_for
from .verify import CRITERIA, Hooks, run_verification

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
PARAM_FIELDS = [f.name for f in fields(CrossCapParams) if f.name != "order"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    params: CrossCapParams
    tol: float = 1e-9
    grid: tuple[int, int] = (512, 256)
    out: Path | None = None
    seed: int = 0


def parse_eta(text: str) -> tuple[float, float, float]:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--eta expects three comma-separated numbers, got {text!r}") from None
    if len(vals) != 3:
        raise UsageError(f"--eta expects three comma-separated numbers, got {text!r}")
    if all(v == 0.0 for v in vals):
        raise UsageError("--eta must be a nonzero vector")
    return vals


def parse_grid(text: str) -> tuple[int, int]:
    try:
        w, h = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--grid expects WxH, got {text!r}") from None
    if w < 8 or h < 4:
        raise UsageError("--grid must be at least 8x4")
    return w, h


def build_config(args) -> RunConfig:
    data = {}
    if args.params:
        try:
            text = Path(args.params).read_text()
        except OSError as err:
            raise OSError(f"cannot read {args.params}: {err.strerror}") from err
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise UsageError(f"{args.params} is not valid JSON: {err}") from None
        if not isinstance(data, dict):
            raise UsageError(f"{args.params} must hold a JSON object")
    for name in PARAM_FIELDS:
        v = getattr(args, name)
        if v is not None:
            data[name] = v
    if args.order is not None:
        data["order"] = args.order
    try:
        params = CrossCapParams.from_dict(data)
    except (TypeError, ValueError) as err:
        raise UsageError(f"invalid cross-cap parameters: {err}") from None
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    return RunConfig(params, args.tol, parse_grid(args.grid), Path(args.out) if args.out else None, args.seed)


def _write(path: Path, text: str):
    path.write_text(text)


def _emit(cfg: RunConfig, text: str, default: Path | None = None):
    target = cfg.out or default
    if target is None:
        sys.stdout.write(text)
    else:
        _write(target, text)
        print(f"wrote {target}")


def cmd_classify(cfg: RunConfig, args) -> int:
    eta = parse_eta(args.eta)
    plane = FoldPlane.from_vector(eta, args.delta)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonGenericCrossCapWarning)
        label = classify_fold(cfg.params, plane, cfg.tol)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    item = characterisation_item_for(label.kind) if plane.delta == 0.0 else None
    doc = {
        "eta": list(plane.eta),
        "delta": plane.delta,
        **label.to_dict(),
        "geometry": CHARACTERISATION_DESCRIPTIONS.get(item) if item else None,
    }
    if args.json or cfg.out:
        _emit(cfg, json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    print(f"kind={label.kind.value}")
    print("eta=({:.12g}, {:.12g}, {:.12g}) delta={:.12g}".format(*plane.eta, plane.delta))
    if label.modulus_k is not None:
        print(f"modulus_k={label.modulus_k:.12g}")
    if label.collisions:
        print("collisions=" + ",".join(k.value for k in label.collisions))
    print("residuals:")
    for k, v in label.residuals.items():
        print(f"  {k:<12} {v: .6e}")
    for note in label.notes:
        print(f"note: {note}")
    if item:
        print(f"geometry ({item}): {CHARACTERISATION_DESCRIPTIONS[item]}")
    return EXIT_OK


def cmd_survey(cfg: RunConfig, args) -> int:
    report = survey_sphere(cfg.params, cfg.grid[0], cfg.grid[1], cfg.tol)
    csv_path = cfg.out or Path("survey.csv")
    svg_path = csv_path.with_suffix(".svg")
    _write(csv_path, survey_csv(report))
    _write(svg_path, survey_svg(report))
    print(json.dumps(report.inventory(), indent=2))
    print(f"wrote {csv_path} and {svg_path}")
    return EXIT_OK


def cmd_curves(cfg: RunConfig, args) -> int:
    _emit(cfg, curves_csv(cfg.params))
    return EXIT_OK


def _corrupted_phi(params, beta, gamma):
    return phi_poly(params, beta, gamma) + 0.5 * beta**3


def cmd_verify(cfg: RunConfig, args) -> int:
    criteria = None
    if args.criteria:
        try:
            criteria = [int(t) for t in args.criteria.split(",")]
        except ValueError:
            raise UsageError("--criteria expects comma-separated integers") from None
        if any(k not in CRITERIA for k in criteria):
            raise UsageError(f"criteria must be among {sorted(CRITERIA)}")
    hooks = Hooks(phi=_corrupted_phi) if args.corrupt_phi else None
    report = run_verification(cfg.params, cfg.seed, cfg.grid, cfg.tol, criteria, hooks)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if cfg.out:
        _write(cfg.out, write_csv(report.rows(), VERIFY_COLUMNS))
    width = max(len(c.quantity) for c in report.checks)
    for c in report.checks:
        if args.all_rows or not c.passed:
            mark = "PASS" if c.passed else "FAIL"
            print(f"{mark}  {c.quantity:<{width}}  closed={c.closed_form!s:<22} oracle={c.oracle_value!s:<22} "
                  f"err={c.abs_error:.3e} tol={c.tolerance:.1e}")
    names = {0: "surface type", **CRITERIA}
    for k in sorted({c.criterion for c in report.checks}):
        ok = all(c.passed for c in report.checks if c.criterion == k)
        t = report.timings.get(k)
        print(f"[{'PASS' if ok else 'FAIL'}] {k:>2} {names[k]}" + (f" ({t:.1f}s)" if t is not None else ""))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_mesh(cfg: RunConfig, args) -> int:
    if not 0.0 < args.range <= 1.0:
        raise UsageError("--range must lie in (0, 1]")
    if args.resolution < 8:
        raise UsageError("--resolution must be at least 8")
    path = cfg.out or Path("crosscap.obj")
    _write(path, mesh_obj(cfg.params, args.range, args.resolution))
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("cross-cap")
    g.add_argument("--params", metavar="FILE.json", help="cross-cap coefficients as JSON; flags below override it")
    for name in PARAM_FIELDS:
        g.add_argument(f"--{name}", type=float, default=None, metavar="R")
    g.add_argument("--order", type=int, default=None, help="jet truncation order (4..9, default 5)")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--grid", default="512x256", metavar="WxH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="foldcap", description="Folding maps on a geometric cross-cap.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify one folding plane")
    p.add_argument("--eta", required=True, metavar="A,B,C", help="plane normal; write --eta=-1,0,0 for a leading minus")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--json", action="store_true", help="print the label as JSON")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("survey", parents=[common], help="classify a grid over the hemisphere of normals")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("curves", parents=[common], help="list distinguished directions and coefficients")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("verify", parents=[common], help="check closed forms against numeric oracles")
    p.add_argument("--criteria", metavar="K,K,...", help="run only these criteria")
    p.add_argument("--all-rows", action="store_true", help="print passing checks too")
    p.add_argument("--corrupt-phi", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mesh", parents=[common], help="write the surface as an OBJ mesh")
    p.add_argument("--range", type=float, default=1.0)
    p.add_argument("--resolution", type=int, default=48)
    p.set_defaults(func=cmd_mesh)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = build_config(args)
        return args.func(cfg, args)
    except UsageError as err:
        parser.error(str(err))
    except OSError as err:
        print(f"foldcap: I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
