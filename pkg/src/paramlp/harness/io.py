"""JSON reading and writing for problems, pairs, decompositions and reports.

Scalars are ints, "p/q" strings or (float mode only) JSON numbers; interval
endpoints may also be "-inf" / "+inf".
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from ..errors import DimensionMismatchError, SchemaError
from ..model import LinearProgram, ParametricPair, build_parametric_pair, validate_standard_form
from ..parametric import Interval, InvariancyDecomposition
from ..pivotpath import PathReport
from ..scalar import EXACT, Arithmetic, format_scalar, parse_endpoint, parse_scalar

PathLike = Union[str, Path]

LP_KEYS = ("A", "b", "c")


def read_json(path: PathLike):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def write_json(data, path: PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def lp_from_dict(data, mode: str = EXACT) -> LinearProgram:
    if not isinstance(data, dict):
        raise SchemaError("LP document must be a JSON object")
    for key in LP_KEYS:
        if key not in data:
            raise SchemaError(f"LP document is missing {key!r}")
    if not isinstance(data["A"], list) or not all(isinstance(r, list) for r in data["A"]):
        raise SchemaError("'A' must be a list of rows")
    raw = {
        "A": [[parse_scalar(v, mode) for v in row] for row in data["A"]],
        "b": [parse_scalar(v, mode) for v in data["b"]],
        "c": [parse_scalar(v, mode) for v in data["c"]],
        "name": data.get("name", "lp"),
    }
    meta = {}
    if "d" in data:
        meta["d"] = [parse_scalar(v, mode) for v in data["d"]]
    if "B" in data:
        meta["B"] = [[parse_scalar(v, mode) for v in row] for row in data["B"]]
    raw["meta"] = meta
    try:
        return validate_standard_form(raw, Arithmetic(mode))
    except DimensionMismatchError as exc:
        raise SchemaError(str(exc)) from None


def lp_to_dict(lp: LinearProgram) -> dict:
    out = {
        "name": lp.name,
        "A": [[format_scalar(v) for v in row] for row in lp.A],
        "b": [format_scalar(v) for v in lp.b],
        "c": [format_scalar(v) for v in lp.c],
    }
    if "d" in lp.meta:
        out["d"] = [format_scalar(v) for v in lp.meta["d"]]
    if "B" in lp.meta:
        out["B"] = [[format_scalar(v) for v in row] for row in lp.meta["B"]]
    return out


def load_lp(path: PathLike, mode: str = EXACT) -> LinearProgram:
    return lp_from_dict(read_json(path), mode)


def save_lp(lp: LinearProgram, path: PathLike) -> None:
    write_json(lp_to_dict(lp), path)


def pair_from_lp(lp: LinearProgram) -> ParametricPair:
    """Pair from an LP that carries its parametric block (``d``, ``B``)."""
    if "d" not in lp.meta or "B" not in lp.meta:
        raise SchemaError(f"{lp.name}: parametric block needs both 'd' and 'B'")
    return build_parametric_pair(lp, lp.meta["d"], lp.meta["B"])


def load_pair(path: PathLike, mode: str = EXACT, lp: Optional[LinearProgram] = None) -> ParametricPair:
    """Read a pair; with ``lp`` given, the file only has to supply ``d`` and ``B``."""
    data = read_json(path)
    if lp is None:
        return pair_from_lp(lp_from_dict(data, mode))
    for key in ("d", "B"):
        if key not in data:
            raise SchemaError(f"pair document is missing {key!r}")
    d = [parse_scalar(v, lp.mode) for v in data["d"]]
    B = [[parse_scalar(v, lp.mode) for v in row] for row in data["B"]]
    return build_parametric_pair(lp, d, B)


def pair_to_dict(pair: ParametricPair) -> dict:
    out = lp_to_dict(pair.lp)
    out["d"] = [format_scalar(v) for v in pair.d]
    out["B"] = [[format_scalar(v) for v in row] for row in pair.B]
    return out


def save_pair(pair: ParametricPair, path: PathLike) -> None:
    write_json(pair_to_dict(pair), path)


def decomposition_from_dict(data, mode: str = EXACT) -> InvariancyDecomposition:
    try:
        theta = data["theta"]
        lo, hi = parse_endpoint(theta["lo"], mode), parse_endpoint(theta["hi"], mode)
        points = tuple(parse_scalar(t, mode) for t in data["transition_points"])
        intervals, images = [], []
        for item in data["intervals"]:
            intervals.append(Interval.open(parse_endpoint(item["lo"], mode), parse_endpoint(item["hi"], mode)))
            images.append(parse_endpoint(item["image"], mode) if "image" in item else None)
        witnesses = []
        for w in data.get("witnesses", []):
            img = Interval.closed(parse_endpoint(w["image"]["lo"], mode), parse_endpoint(w["image"]["hi"], mode))
            vertex = w.get("vertex")
            witnesses.append({
                "point": parse_scalar(w["point"], mode),
                "image": img,
                "vertex": None if vertex is None else tuple(parse_scalar(v, mode) for v in vertex),
            })
        # a finite endpoint of theta is attained; the interval is closed there
        return InvariancyDecomposition(
            side=data["side"],
            theta=Interval(lo, hi),
            transition_points=points,
            intervals=tuple(intervals),
            interval_images=tuple(images),
            witnesses=witnesses,
            hops=int(data.get("hops", 0)),
            diagnostics=list(data.get("diagnostics", [])),
        )
    except KeyError as exc:
        raise SchemaError(f"decomposition document is missing {exc.args[0]!r}") from None


def load_decomposition(path: PathLike, mode: str = EXACT) -> InvariancyDecomposition:
    return decomposition_from_dict(read_json(path), mode)


def save_decomposition(dec: InvariancyDecomposition, path: PathLike) -> None:
    write_json(dec.to_json(), path)


def report_from_dict(data, mode: str = EXACT) -> PathReport:
    try:
        rep = PathReport(instance=data["instance"], n=int(data["n"]))
        rep.pivots_phase2 = int(data["pivots_phase2"])
        rep.pivots_bootstrap = int(data["pivots_bootstrap"])
        rep.breakpoints = [parse_scalar(t, mode) for t in data["breakpoints"]]
        value = data["optimal_value"]
        rep.optimal_value = None if value is None else parse_scalar(value, mode)
        rep.optimal_verified = bool(data["optimal_verified"])
        rep.s = tuple(parse_scalar(v, mode) for v in data["s"])
        rep.seed = data["seed"]
    except KeyError as exc:
        raise SchemaError(f"report document is missing {exc.args[0]!r}") from None
    if data.get("t_start") is not None:
        rep.t_start = parse_scalar(data["t_start"], mode)
    rep.status = data.get("status", rep.status)
    rep.assumption_clean = bool(data.get("assumption_clean", True))
    rep.diagnostics = list(data.get("diagnostics", []))
    return rep


def load_report(path: PathLike, mode: str = EXACT) -> PathReport:
    return report_from_dict(read_json(path), mode)


def save_report(report: PathReport, path: PathLike) -> None:
    write_json(report.to_json(), path)


def save_trace(trace, path: PathLike) -> None:
    write_json(trace.to_json(), path)
