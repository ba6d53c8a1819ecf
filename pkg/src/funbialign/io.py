"""Reading curves and portion lists, atomic JSON/text output."""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

from .curves import CurveSet, PortionRef, SampledCurve
from .errors import InputError, MalformedInput


class FileNotFound(InputError, FileNotFoundError):
    pass


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except FileNotFoundError:
        raise FileNotFound(f"FileNotFound: {path}") from None


def load_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"MalformedInput: {path}: {exc}") from None


def curves_from_json(data: dict) -> CurveSet:
    try:
        step = float(data.get("grid_step", 1.0))
        curves = tuple(
            SampledCurve(str(c["id"]), c["values"], float(c.get("grid_step", step)), float(c.get("origin", 0.0)))
            for c in data["curves"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise MalformedInput(f"MalformedInput: bad curve JSON ({exc})") from None
    return CurveSet(curves)


def curves_to_json(curves: CurveSet) -> dict:
    return {
        "grid_step": curves.grid_step,
        "curves": [{"id": c.id, "values": c.values.tolist()} for c in curves.curves],
    }


def read_curves_csv(path, header: bool = False, grid_step: float = 1.0) -> CurveSet:
    """Wide CSV: curve id, then samples; rows may be ragged."""
    text = _read_text(path)
    rows = [r for r in csv.reader(text.splitlines()) if r and any(cell.strip() for cell in r)]
    if header:
        rows = rows[1:]
    curves = []
    for r in rows:
        cells = [c.strip() for c in r[1:]]
        while cells and cells[-1] == "":
            cells.pop()
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise MalformedInput(f"MalformedInput: {path}: {exc}") from None
        curves.append(SampledCurve(r[0].strip(), values, grid_step))
    return CurveSet(tuple(curves))


def read_curves(path, header: bool = False) -> CurveSet:
    if str(path).lower().endswith(".csv"):
        return read_curves_csv(path, header=header)
    return curves_from_json(load_json(path))


def read_portion_refs(path, curves: CurveSet) -> list[PortionRef]:
    data = load_json(path)
    if isinstance(data, dict) and "portions" in data:
        data = data["portions"]
    refs = []
    try:
        for p in data:
            curve = p["curve_id"] if "curve_id" in p else p["curve_index"]
            index = curves.index_of(curve) if isinstance(curve, str) else int(curve)
            length = int(p.get("length", p.get("length_points", 0)))
            refs.append(PortionRef(index, int(p["start"]), length))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise MalformedInput(f"MalformedInput: bad portion list ({exc})") from None
    return refs


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    atomic_write_text(path, dumps(obj))


def write_curves(path, curves: CurveSet) -> None:
    if str(path).lower().endswith(".csv"):
        lines = [",".join([c.id] + [repr(float(v)) for v in c.values]) for c in curves.curves]
        atomic_write_text(path, "\n".join(lines) + "\n")
    else:
        write_json(path, curves_to_json(curves))
