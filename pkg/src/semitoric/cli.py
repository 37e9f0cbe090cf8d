"""Command-line entry point: validate, reduce, normalize, enumerate, distance, path, render.

Exit status is 0 on success, 1 when an input is well-formed but invalid or
the inputs are incompatible, and 2 when an input cannot be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from .moduli import CapSequence, ComponentMismatch, IngredientList, connectivity_path, ingredient_distance
from .moves import trace_to_json
from .oracle import EnumerationSpec, SearchSpaceTooLarge, census_csv, census_rows, enumerate_solutions, geometric_equiv_check
from .polygeom import Density, GeometryError, PrimitiveSemitoricPolygon, family_distance
from .render import render_svg
from .semitoricfan import SemitoricFan, apply_move, normalize, standard_fan
from .toricfan import InvalidFan, ToricFan, apply_toric_move, fans_equivalent, fulton_reduce, minimal_model_fan, validate_toric
from .semitoricfan import validate_semitoric


class InputError(Exception):
    """The input could not be read or does not match any known schema."""


class Rejected(Exception):
    """The input parsed but describes an invalid object or an incompatible pair."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {"error": message}


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_encode) + "\n"


def _encode(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"cannot encode {type(x).__name__}")


def _load(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _kind(data: Any) -> str:
    if isinstance(data, dict):
        if "polygon" in data:
            return "ingredients"
        if "vertices" in data:
            return "polygon"
        if "vectors" in data:
            return "semitoric_fan" if "labels" in data else "toric_fan"
    raise InputError("input is not a fan, polygon, or ingredient list")


def _vectors(data: dict) -> list[tuple[int, int]]:
    try:
        return [(int(v[0]), int(v[1])) for v in data["vectors"]]
    except (TypeError, ValueError, IndexError, KeyError) as exc:
        raise InputError(f"malformed vectors: {exc}") from exc


def _parse(build, data):
    """Run a constructor, separating schema problems from invalid content."""
    try:
        return build(data)
    except (InvalidFan, GeometryError) as exc:
        raise Rejected(str(exc)) from exc
    except (KeyError, TypeError, IndexError, ZeroDivisionError) as exc:
        raise InputError(f"malformed input: {exc!r}") from exc
    except ValueError as exc:
        raise Rejected(str(exc)) from exc


def _toric(path: str) -> ToricFan:
    data = _load(path)
    if _kind(data) != "toric_fan":
        raise InputError("expected a toric fan with a 'vectors' list and no labels")
    return _parse(lambda d: ToricFan(tuple(_vectors(d))), data)


def _semitoric(path: str) -> SemitoricFan:
    data = _load(path)
    if _kind(data) not in ("toric_fan", "semitoric_fan"):
        raise InputError("expected a fan")
    return _parse(SemitoricFan.from_json, data)


def _ingredients(path: str) -> IngredientList | PrimitiveSemitoricPolygon:
    data = _load(path)
    kind = _kind(data)
    if kind == "polygon":
        return _parse(PrimitiveSemitoricPolygon.from_json, data)
    if kind == "ingredients":
        return _parse(IngredientList.from_json, data)
    raise InputError("expected a polygon or an ingredient list")


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands ---------------------------------------------------------

def run_validate(args) -> int:
    data = _load(args.input)
    kind = _kind(data)
    if kind == "toric_fan":
        report = validate_toric(_vectors(data)).to_json()
    elif kind == "semitoric_fan":
        labels = data.get("labels")
        if not isinstance(labels, list):
            raise InputError("labels must be a list")
        try:
            report = validate_semitoric(_vectors(data), labels).to_json()
        except ValueError as exc:
            report = {"valid": False, "reason": str(exc)}
    else:
        try:
            _ingredients(args.input)
            report = {"valid": True}
        except Rejected as exc:
            report = {"valid": False, "reason": str(exc)}
    report["kind"] = kind
    sys.stdout.write(_dump(report))
    return 0 if report["valid"] else 1


def run_reduce(args) -> int:
    fan = _toric(args.input)
    model, trace = fulton_reduce(fan)
    if args.verify:
        current = fan
        for m in trace:
            current = apply_toric_move(current, m)  # validates every intermediate fan
        if not fans_equivalent(current, minimal_model_fan(model)):
            raise Rejected("replayed trace does not reach the reported minimal model")
    summary = f"{model}, {len(trace)} moves"
    result = {"summary": summary, "model": str(model), "moves": len(trace), "trace": trace_to_json(trace),
              "verified": bool(args.verify)}
    if args.out:
        Path(args.out).write_text(_dump(trace_to_json(trace)))
        result.pop("trace")
    sys.stdout.write(_dump(result))
    return 0


def run_normalize(args) -> int:
    fan = _semitoric(args.input)
    result_fan, trace, k = normalize(fan)
    c = fan.complexity
    if args.verify:
        current = fan
        for m in trace:
            current = apply_move(current, m)
            if current.complexity != c:
                raise Rejected(f"complexity changed at {m}")
        if current != standard_fan(c):
            raise Rejected("replayed trace does not reach the standard fan")
    summary = f"standard c={c}, {len(trace)} moves"
    result = {"summary": summary, "complexity": c, "moves": len(trace), "act_t_total": k,
              "fan": result_fan.to_json(), "trace": trace_to_json(trace), "verified": bool(args.verify)}
    if args.out:
        Path(args.out).write_text(_dump(trace_to_json(trace)))
        result.pop("trace")
    sys.stdout.write(_dump(result))
    return 0


def run_enumerate(args) -> int:
    try:
        spec = EnumerationSpec(args.d, args.bound)
        words = enumerate_solutions(spec, workers=args.workers)
    except SearchSpaceTooLarge as exc:
        raise Rejected(str(exc)) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = census_rows(words)
    if args.format == "csv":
        _emit(args, census_csv(rows))
        return 0
    result: dict = {"d": spec.d, "bound": spec.bound, "count": len(rows), "solutions": rows}
    if args.check:
        result["equivalence"] = geometric_equiv_check(spec).to_json()
    _emit(args, _dump(result))
    return 0


def _caps(args, degree: int) -> CapSequence:
    if args.caps != "geometric":
        raise InputError(f"unknown cap sequence {args.caps}")
    return CapSequence.geometric(degree)


def run_distance(args) -> int:
    a, b = _ingredients(args.a), _ingredients(args.b)
    density = Density(args.measure)
    result: dict = {"measure": density.value, "caps": args.caps}
    try:
        if isinstance(a, IngredientList) and isinstance(b, IngredientList):
            degree = a.series[0].degree if a.series else 6
            caps = _caps(args, degree)
            result["distance"] = ingredient_distance(a, b, density, caps)
            result["truncation_degree"] = degree
            result["truncation_tail_bound"] = caps.tail_bound(degree)
        elif isinstance(a, PrimitiveSemitoricPolygon) and isinstance(b, PrimitiveSemitoricPolygon):
            d = family_distance(a, b, density)
            result["distance"] = str(d) if isinstance(d, Fraction) else d
        else:
            raise Rejected("cannot compare a polygon with an ingredient list")
    except (ComponentMismatch, GeometryError) as exc:
        raise Rejected(f"component mismatch: {exc}") from exc
    sys.stdout.write(_dump(result))
    return 0


def run_path(args) -> int:
    a, b = _ingredients(args.a), _ingredients(args.b)
    if not (isinstance(a, IngredientList) and isinstance(b, IngredientList)):
        raise Rejected("path needs two ingredient lists")
    if args.steps < 1:
        raise InputError("--steps must be positive")
    try:
        path = connectivity_path(a, b, args.steps)
    except (ComponentMismatch, GeometryError) as exc:
        raise Rejected(f"component mismatch: {exc}") from exc
    samples = [m.to_json() for m in path]
    if args.out:
        Path(args.out).write_text(_dump(samples))
        density = Density(args.measure)
        steps = [ingredient_distance(x, y, density) for x, y in zip(path, path[1:])]
        sys.stdout.write(_dump({"samples": len(samples), "max_step_distance": max(steps), "measure": density.value}))
    else:
        sys.stdout.write(_dump(samples))
    return 0


def run_render(args) -> int:
    objects = []
    for path in args.inputs:
        data = _load(path)
        kind = _kind(data)
        if kind == "toric_fan":
            objects.append(_parse(lambda d: ToricFan(tuple(_vectors(d))), data))
        elif kind == "semitoric_fan":
            objects.append(_parse(SemitoricFan.from_json, data))
        else:
            obj = _ingredients(path)
            objects.append(obj.polygon if isinstance(obj, IngredientList) else obj)
    _emit(args, render_svg(objects))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semitoric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a fan, polygon, or ingredient list")
    p.add_argument("input")
    p.set_defaults(func=run_validate)

    for name, func, what in (("reduce", run_reduce, "reduce a toric fan to its minimal model"),
                             ("normalize", run_normalize, "bring a semitoric fan to the standard fan")):
        p = sub.add_parser(name, help=what)
        p.add_argument("input")
        p.add_argument("--out", help="write the trace JSON here")
        p.add_argument("--verify", action="store_true", help="replay the trace and check every step")
        p.set_defaults(func=func)

    p = sub.add_parser("enumerate", help="list fan words whose lift is (I, 12)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--check", action="store_true", help="also run the geometric equivalence check")
    p.add_argument("--out")
    p.set_defaults(func=run_enumerate)

    for name, func, what in (("distance", run_distance, "distance between two polygons or ingredient lists"),
                             ("path", run_path, "sampled path between two ingredient lists")):
        p = sub.add_parser(name, help=what)
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--measure", choices=[d.value for d in Density], default=Density.EXPABSX.value)
        p.add_argument("--caps", choices=("geometric",), default="geometric")
        if name == "path":
            p.add_argument("--steps", type=int, default=100)
            p.add_argument("--out", help="write the samples here and print a summary")
        p.set_defaults(func=func)

    p = sub.add_parser("render", help="draw fans and polygons as SVG")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=run_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Rejected as exc:
        sys.stderr.write(f"invalid: {exc}\n")
        sys.stdout.write(_dump(exc.payload))
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
