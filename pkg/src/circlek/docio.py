"""Canonical document format for systems and homomorphisms.

One JSON tree per document.  System documents carry exact integers only
(validated: a float where an integer belongs is rejected), so exactness
survives the round trip; sampled-path homomorphism documents are the
only float-bearing inputs.  Parse errors carry the field path of the
offending node (for example ``maps[0].entries[0][0]``).

System document shape::

    {
      "meta":   {"name": "...", "notes": "..."},           # optional
      "stages": [{"sizes": [1]}, {"sizes": [2]}],
      "maps":   [{"entries": [[[2, 1]]]}],
      "tail":   {"kind": "none"}
              | {"kind": "periodic",
                 "period": 1,
                 "templates": [{"entries": [[[2, 1]]]}],
                 "pads": [[0]]}                  # or flat [0] shorthand
    }

Homomorphism document shape::

    {
      "source": {"sizes": [1]},
      "target": {"sizes": [2]},
      "blocks": [[{"multiplicity": 2,
                   "permutation": [2, 1],        # or "(1 2)" cycles
                   "paths": [{"kind": "power", "winding": 1, "phase": "1/2"}
                             | {"kind": "samples", "points": [[re, im], ...]}]}]]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebras import CircleAlgebra
from .homs import BlockError, SignatureMatrix, TypeABlock, validate
from .paths import PathError, PowerPath, SampledPath
from .systems import InductiveSystem, PeriodicTail, SystemError

__all__ = [
    "DocumentError",
    "HomGrid",
    "parse_system",
    "parse_system_document",
    "emit_system",
    "parse_hom",
    "emit_signature_matrix",
]


class DocumentError(ValueError):
    """A parse or validation failure, located by field path."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        self.message = message
        super().__init__(f"{message} at {path}" if path else message)


def _expect(condition: bool, message: str, path: str) -> None:
    if not condition:
        raise DocumentError(message, path)


def _as_int(value, path: str) -> int:
    # bool is an int subclass; floats are rejected to keep exactness
    _expect(isinstance(value, int) and not isinstance(value, bool),
            f"expected an integer, got {value!r}", path)
    return value


def _as_list(value, path: str) -> list:
    _expect(isinstance(value, list), f"expected a list, got {type(value).__name__}", path)
    return value


def _as_dict(value, path: str) -> dict:
    _expect(isinstance(value, dict), f"expected an object, got {type(value).__name__}", path)
    return value


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentError(
            f"not valid JSON: {err.msg}", f"line {err.lineno} column {err.colno}"
        ) from err
    if not isinstance(doc, dict):
        raise DocumentError("document root must be an object", "")
    return doc


def _parse_sizes(node, path: str) -> tuple[int, ...]:
    obj = _as_dict(node, path)
    sizes = _as_list(obj.get("sizes"), f"{path}.sizes")
    out = []
    for k, n in enumerate(sizes):
        v = _as_int(n, f"{path}.sizes[{k}]")
        _expect(v >= 1, f"summand size must be >= 1, got {v}", f"{path}.sizes[{k}]")
        out.append(v)
    return tuple(out)


def _parse_pair_grid(node, path: str) -> list[list[tuple[int, int]]]:
    # an empty grid is legal: it is the unique map into the zero algebra
    obj = _as_dict(node, path)
    entries = _as_list(obj.get("entries"), f"{path}.entries")
    grid = []
    for i, row in enumerate(entries):
        row_list = _as_list(row, f"{path}.entries[{i}]")
        out_row = []
        for j, pair in enumerate(row_list):
            ppath = f"{path}.entries[{i}][{j}]"
            pair_list = _as_list(pair, ppath)
            _expect(len(pair_list) == 2, "expected a pair [a, b]", ppath)
            a = _as_int(pair_list[0], ppath)
            b = _as_int(pair_list[1], ppath)
            _expect(a >= 0, f"multiplicity must be >= 0, got {a}", ppath)
            _expect(a > 0 or b == 0, "a=0 requires b=0", ppath)
            out_row.append((a, b))
        grid.append(out_row)
    widths = {len(row) for row in grid}
    _expect(len(widths) <= 1, "ragged rows in map entries", f"{path}.entries")
    return grid


def _check_grid_shape(
    grid, src_sizes, tgt_sizes, path: str
) -> None:
    _expect(
        len(grid) == len(tgt_sizes),
        f"map has {len(grid)} rows, target has {len(tgt_sizes)} summands",
        f"{path}.entries",
    )
    _expect(
        len(tgt_sizes) == 0 or len(grid[0]) == len(src_sizes),
        f"map has {len(grid[0]) if grid else 0} columns, source has "
        f"{len(src_sizes)} summands",
        f"{path}.entries",
    )
    for violation in validate(grid, src_sizes, tgt_sizes):
        where = (
            f"{path}.entries[{violation.row}]"
            if violation.col is None
            else f"{path}.entries[{violation.row}][{violation.col}]"
        )
        raise DocumentError(violation.detail, where)


def _parse_tail(node, last_sizes: tuple[int, ...], path: str) -> PeriodicTail | None:
    if node is None:
        return None
    obj = _as_dict(node, path)
    kind = obj.get("kind")
    if kind == "none":
        return None
    _expect(kind == "periodic", f"unknown tail kind {kind!r}", f"{path}.kind")
    period = _as_int(obj.get("period", len(obj.get("templates", []) or [])), f"{path}.period")
    templates_node = _as_list(obj.get("templates"), f"{path}.templates")
    _expect(
        len(templates_node) == period,
        f"period is {period} but {len(templates_node)} templates given",
        f"{path}.templates",
    )
    grids = [
        _parse_pair_grid(t, f"{path}.templates[{s}]") for s, t in enumerate(templates_node)
    ]
    for s, grid in enumerate(grids):
        _expect(bool(grid), "template needs at least one row", f"{path}.templates[{s}].entries")
    pads_node = obj.get("pads", obj.get("pad"))
    _expect(pads_node is not None, "periodic tail needs pads", f"{path}.pads")
    pads_list = _as_list(pads_node, f"{path}.pads")
    if pads_list and all(isinstance(x, int) and not isinstance(x, bool) for x in pads_list):
        # flat shorthand: one vector broadcast to every step
        pads = [[_as_int(x, f"{path}.pads[{k}]") for k, x in enumerate(pads_list)]] * period
    else:
        _expect(
            len(pads_list) == period,
            f"period is {period} but {len(pads_list)} pad vectors given",
            f"{path}.pads",
        )
        pads = [
            [_as_int(x, f"{path}.pads[{s}][{k}]") for k, x in enumerate(_as_list(vec, f"{path}.pads[{s}]"))]
            for s, vec in enumerate(pads_list)
        ]
    for s, (grid, pad) in enumerate(zip(grids, pads)):
        _expect(
            len(pad) == len(grid),
            f"pad vector has {len(pad)} entries, template has {len(grid)} rows",
            f"{path}.pads[{s}]",
        )
        for k, x in enumerate(pad):
            _expect(x >= 0, f"pad must be >= 0, got {x}", f"{path}.pads[{s}][{k}]")
    # chain the template widths, starting from the last prefix stage
    widths = [len(last_sizes)]
    for s, grid in enumerate(grids):
        _expect(
            len(grid[0]) == widths[-1],
            f"template {s} consumes {len(grid[0])} summands, previous stage has {widths[-1]}",
            f"{path}.templates[{s}].entries",
        )
        widths.append(len(grid))
    _expect(
        widths[-1] == widths[0],
        f"templates do not chain cyclically: width {widths[-1]} after one period, "
        f"started at {widths[0]}",
        f"{path}.templates",
    )
    try:
        return PeriodicTail(templates=tuple(tuple(tuple(p for p in row) for row in g) for g in grids),
                            pads=tuple(tuple(v) for v in pads))
    except (SystemError, BlockError) as err:
        raise DocumentError(str(err), path) from err


def parse_system_document(text: str) -> tuple[InductiveSystem, dict]:
    """Parse a system document; returns the system and its meta block."""
    doc = _load(text)
    meta = doc.get("meta", {})
    if meta and not isinstance(meta, dict):
        raise DocumentError("meta must be an object", "meta")
    stages_node = _as_list(doc.get("stages"), "stages")
    _expect(bool(stages_node), "at least one stage required", "stages")
    sizes = [_parse_sizes(s, f"stages[{k}]") for k, s in enumerate(stages_node)]
    maps_node = _as_list(doc.get("maps", []), "maps")
    _expect(
        len(maps_node) == len(sizes) - 1,
        f"{len(sizes)} stages need {len(sizes) - 1} maps, got {len(maps_node)}",
        "maps",
    )
    grids = []
    for k, m in enumerate(maps_node):
        grid = _parse_pair_grid(m, f"maps[{k}]")
        _check_grid_shape(grid, sizes[k], sizes[k + 1], f"maps[{k}]")
        grids.append(grid)
    tail = _parse_tail(doc.get("tail"), sizes[-1], "tail")
    try:
        stages = tuple(CircleAlgebra(s) for s in sizes)
        maps = tuple(
            SignatureMatrix(source=stages[k], target=stages[k + 1], entries=grids[k])
            for k in range(len(grids))
        )
        system = InductiveSystem(stages=stages, maps=maps, tail=tail)
    except (SystemError, BlockError, ValueError) as err:
        raise DocumentError(str(err), "") from err
    return system, dict(meta)


def parse_system(text: str) -> InductiveSystem:
    """Parse and validate a system document."""
    return parse_system_document(text)[0]


def emit_system(system: InductiveSystem, meta: dict | None = None) -> str:
    """Canonical document for a system; parse(emit(s)) == s."""
    doc: dict = {}
    if meta:
        doc["meta"] = meta
    doc["stages"] = [{"sizes": list(s.sizes)} for s in system.stages]
    doc["maps"] = [
        {"entries": [[[e.a, e.b] for e in row] for row in m.entries]}
        for m in system.maps
    ]
    if system.tail is None:
        doc["tail"] = {"kind": "none"}
    else:
        doc["tail"] = {
            "kind": "periodic",
            "period": system.tail.period,
            "templates": [
                {"entries": [[[e.a, e.b] for e in row] for row in grid]}
                for grid in system.tail.templates
            ],
            "pads": [list(vec) for vec in system.tail.pads],
        }
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class HomGrid:
    """Parsed homomorphism document: a grid of data-tuple blocks."""

    source: CircleAlgebra
    target: CircleAlgebra
    blocks: tuple[tuple[TypeABlock, ...], ...]


def _parse_permutation(node, multiplicity: int, path: str) -> tuple[int, ...]:
    if isinstance(node, str):
        images = list(range(multiplicity))
        text = node.strip()
        _expect(text.count("(") == text.count(")"), "unbalanced cycle notation", path)
        chunks = [c for c in text.replace("(", " ( ").split(")") if c.strip()]
        for chunk in chunks:
            body = chunk.replace("(", " ").strip()
            if not body:
                continue
            members = []
            for token in body.replace(",", " ").split():
                v = int(token) - 1
                _expect(
                    0 <= v < multiplicity,
                    f"cycle member {token} out of range 1..{multiplicity}",
                    path,
                )
                members.append(v)
            for k, v in enumerate(members):
                images[v] = members[(k + 1) % len(members)]
        return tuple(images)
    lst = _as_list(node, path)
    _expect(
        len(lst) == multiplicity,
        f"permutation has {len(lst)} entries, multiplicity is {multiplicity}",
        path,
    )
    images = [_as_int(x, f"{path}[{k}]") - 1 for k, x in enumerate(lst)]
    _expect(
        sorted(images) == list(range(multiplicity)),
        f"not a permutation of 1..{multiplicity}",
        path,
    )
    return tuple(images)


def _parse_phase(node, path: str) -> Fraction:
    if node is None:
        return Fraction(0)
    if isinstance(node, str):
        try:
            return Fraction(node)
        except (ValueError, ZeroDivisionError) as err:
            raise DocumentError(f"bad rational {node!r}", path) from err
    if isinstance(node, int) and not isinstance(node, bool):
        return Fraction(node)
    raise DocumentError(
        f"phase must be an integer or a rational string, got {node!r}", path
    )


def _parse_path(node, path: str):
    obj = _as_dict(node, path)
    kind = obj.get("kind")
    if kind == "power":
        winding = _as_int(obj.get("winding"), f"{path}.winding")
        phase = _parse_phase(obj.get("phase"), f"{path}.phase")
        return PowerPath(winding=winding, phase=phase)
    if kind == "samples":
        points_node = _as_list(obj.get("points"), f"{path}.points")
        pts = []
        for k, pt in enumerate(points_node):
            pair = _as_list(pt, f"{path}.points[{k}]")
            _expect(len(pair) == 2, "expected [re, im]", f"{path}.points[{k}]")
            pts.append(complex(float(pair[0]), float(pair[1])))
        try:
            return SampledPath(tuple(pts))
        except PathError as err:
            raise DocumentError(str(err), f"{path}.points") from err
    raise DocumentError(f"unknown path kind {kind!r}", f"{path}.kind")


def parse_hom(text: str) -> HomGrid:
    """Parse a homomorphism document into a grid of validated blocks."""
    doc = _load(text)
    src_sizes = _parse_sizes(doc.get("source"), "source")
    tgt_sizes = _parse_sizes(doc.get("target"), "target")
    blocks_node = _as_list(doc.get("blocks"), "blocks")
    _expect(
        len(blocks_node) == len(tgt_sizes),
        f"{len(blocks_node)} block rows for a target with {len(tgt_sizes)} summands",
        "blocks",
    )
    rows = []
    for i, row_node in enumerate(blocks_node):
        row_list = _as_list(row_node, f"blocks[{i}]")
        _expect(
            len(row_list) == len(src_sizes),
            f"row {i} has {len(row_list)} blocks for a source with "
            f"{len(src_sizes)} summands",
            f"blocks[{i}]",
        )
        row = []
        for j, node in enumerate(row_list):
            bpath = f"blocks[{i}][{j}]"
            obj = _as_dict(node, bpath)
            a = _as_int(obj.get("multiplicity"), f"{bpath}.multiplicity")
            perm = _parse_permutation(
                obj.get("permutation", list(range(1, a + 1))), a, f"{bpath}.permutation"
            )
            paths_node = _as_list(obj.get("paths", []), f"{bpath}.paths")
            _expect(
                len(paths_node) == a,
                f"{len(paths_node)} paths for multiplicity {a}",
                f"{bpath}.paths",
            )
            paths = [
                _parse_path(p, f"{bpath}.paths[{k}]") for k, p in enumerate(paths_node)
            ]
            try:
                row.append(
                    TypeABlock(
                        source_size=src_sizes[j],
                        target_size=tgt_sizes[i],
                        multiplicity=a,
                        permutation=perm,
                        paths=tuple(paths),
                    )
                )
            except BlockError as err:
                raise DocumentError(str(err), bpath) from err
        used = sum(b.multiplicity * b.source_size for b in row)
        _expect(
            used <= tgt_sizes[i],
            f"row {i} uses {used} > target size {tgt_sizes[i]}",
            f"blocks[{i}]",
        )
        rows.append(tuple(row))
    return HomGrid(
        source=CircleAlgebra(src_sizes),
        target=CircleAlgebra(tgt_sizes),
        blocks=tuple(rows),
    )


def emit_signature_matrix(matrix: SignatureMatrix) -> str:
    """Document for a signature matrix (sizes plus the pair grid)."""
    doc = {
        "source": {"sizes": list(matrix.source.sizes)},
        "target": {"sizes": list(matrix.target.sizes)},
        "entries": [[[e.a, e.b] for e in row] for row in matrix.entries],
    }
    return json.dumps(doc, indent=2) + "\n"
