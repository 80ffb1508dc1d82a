"""Canonical text format for cycles and maps.

UTF-8 JSON with rationals encoded as decimal integers or "p/q" strings;
no float literal can ever appear.  Serialization is canonical (sorted
generator arrays, lexicographic cell order, fixed key order), so
parse -> serialize -> parse is the identity and equal cycles written by
different runs are byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .calculus import IntegralAffineMap
from .complexes import PolyhedralComplex
from .cycles import TropicalCycle
from .lattice import IntegerMatrix
from .polyhedron import Polyhedron


class DocumentError(ValueError):
    """Malformed input document (syntax or schema)."""


def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"{where}: bad rational literal {value!r}") from exc
    raise DocumentError(f"{where}: expected an integer or 'p/q' string, got {value!r}")


def _parse_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"{where}: expected an integer, got {value!r}")
    return value


def _encode_rational(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def parse_cycle(text: str, validate: bool = True) -> TropicalCycle:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise DocumentError("top level: expected an object")
    try:
        rank = _parse_int(doc["ambient_rank"], "ambient_rank")
        raw_points = doc["points"]
        raw_rays = doc["rays"]
        raw_lineality = doc["lineality"]
        raw_cells = doc["cells"]
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}") from exc

    points = [
        tuple(_parse_rational(x, f"points[{i}]") for x in _tuple_of(p, rank, f"points[{i}]"))
        for i, p in enumerate(raw_points)
    ]
    rays = [
        tuple(_parse_int(x, f"rays[{i}]") for x in _tuple_of(rvec, rank, f"rays[{i}]"))
        for i, rvec in enumerate(raw_rays)
    ]
    lineality = [
        tuple(_parse_int(x, f"lineality[{i}]") for x in _tuple_of(l, rank, f"lineality[{i}]"))
        for i, l in enumerate(raw_lineality)
    ]

    weighted = []
    for i, cell in enumerate(raw_cells):
        where = f"cells[{i}]"
        if not isinstance(cell, dict):
            raise DocumentError(f"{where}: expected an object")
        pidx = _indices(cell.get("point_indices", []), len(points), f"{where}.point_indices")
        ridx = _indices(cell.get("ray_indices", []), len(rays), f"{where}.ray_indices")
        lidx = _indices(cell.get("lineality_indices", []), len(lineality), f"{where}.lineality_indices")
        weight = _parse_int(cell.get("weight", 1), f"{where}.weight")
        if not pidx and not ridx and not lidx:
            raise DocumentError(f"{where}: cell without generators")
        poly = Polyhedron.from_generators(
            vertices=[points[j] for j in pidx],
            rays=[rays[j] for j in ridx],
            lineality=[lineality[j] for j in lidx],
            ambient_rank=rank,
        )
        weighted.append((poly, weight))

    if not weighted:
        return TropicalCycle.zero(rank, 0)
    complex_ = PolyhedralComplex.from_maximal_cells(
        [c for c, _ in weighted], ambient_rank=rank
    )
    merged: dict = {}
    for poly, w in weighted:
        merged[poly.key] = merged.get(poly.key, 0) + w
    return TropicalCycle(complex_, merged, validate=validate)


def _tuple_of(value, rank: int, where: str):
    if not isinstance(value, list) or len(value) != rank:
        raise DocumentError(f"{where}: expected a list of length {rank}")
    return value


def _indices(value, bound: int, where: str):
    if not isinstance(value, list):
        raise DocumentError(f"{where}: expected a list of indices")
    out = []
    for x in value:
        i = _parse_int(x, where)
        if not 0 <= i < bound:
            raise DocumentError(f"{where}: index {i} out of range")
        out.append(i)
    return out


def serialize_cycle(cycle: TropicalCycle) -> str:
    cells = [cycle.complex.cells[k] for k in cycle.complex.maximal_keys]
    points = sorted({v for c in cells for v in c.vertices})
    rays = sorted({r for c in cells for r in c.rays})
    lineality = sorted({l for c in cells for l in c.lineality})
    pindex = {p: i for i, p in enumerate(points)}
    rindex = {r: i for i, r in enumerate(rays)}
    lindex = {l: i for i, l in enumerate(lineality)}

    cell_docs = []
    for c in cells:
        cell_docs.append(
            {
                "point_indices": sorted(pindex[v] for v in c.vertices),
                "ray_indices": sorted(rindex[r] for r in c.rays),
                "lineality_indices": sorted(lindex[l] for l in c.lineality),
                "weight": cycle.weights[c.key],
            }
        )
    cell_docs.sort(
        key=lambda d: (d["point_indices"], d["ray_indices"], d["lineality_indices"])
    )
    doc = {
        "ambient_rank": cycle.ambient_rank,
        "points": [[_encode_rational(x) for x in p] for p in points],
        "rays": [list(r) for r in rays],
        "lineality": [list(l) for l in lineality],
        "cells": cell_docs,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_map(text: str) -> IntegralAffineMap:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise DocumentError("top level: expected an object")
    try:
        raw_matrix = doc["matrix"]
        raw_translation = doc["translation"]
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}") from exc
    if not isinstance(raw_matrix, list) or not raw_matrix:
        raise DocumentError("matrix: expected a nonempty list of rows")
    width = None
    rows = []
    for i, row in enumerate(raw_matrix):
        if not isinstance(row, list):
            raise DocumentError(f"matrix[{i}]: expected a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DocumentError(f"matrix[{i}]: ragged row")
        rows.append([_parse_int(x, f"matrix[{i}]") for x in row])
    translation = [
        _parse_rational(x, f"translation[{i}]") for i, x in enumerate(raw_translation)
    ]
    if len(translation) != len(rows):
        raise DocumentError("translation length must equal the number of matrix rows")
    return IntegralAffineMap(IntegerMatrix(rows), tuple(translation))


def serialize_map(f: IntegralAffineMap) -> str:
    doc = {
        "matrix": [list(row) for row in f.matrix.entries],
        "translation": [_encode_rational(t) for t in f.translation],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
