"""JSON input documents, canonical complex files and report serialization."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping

from . import builders
from .builders import StratificationData, StratificationError
from .complex import CellId, ComplexError, DeltaComplex, validate
from .group_action import DEFAULT_CAP, ActionError, GroupAction, parse_cycles, perm_from_vertex_map, vertex_map_from_labels
from .subdivision import iterated_barycentric

FORMAT_VERSION = "1"
SOURCES = ("stratification", "builder", "complex")


class SchemaError(ValueError):
    """The document does not follow the input format."""


class ValidationError(ValueError):
    """The document is well formed but describes an invalid complex."""

    def __init__(self, message: str, details: list[str]):
        super().__init__(message)
        self.details = details


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


# -- builders ----------------------------------------------------------------


def _int(params: Mapping, key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise SchemaError(f"builder parameter {key!r} is required")
        return default
    value = params[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"builder parameter {key!r} must be an integer")
    return value


def _sub(params: Mapping, key: str) -> DeltaComplex:
    if key not in params:
        raise SchemaError(f"builder parameter {key!r} is required")
    return complex_from_source(params[key])


BUILDERS: dict[str, Callable[[Mapping], DeltaComplex]] = {
    "empty": lambda p: builders.empty(),
    "point": lambda p: builders.point(str(p.get("label", "0"))),
    "sphere0": lambda p: builders.sphere0(),
    "simplex": lambda p: builders.simplex(_int(p, "n")),
    "simplex_boundary": lambda p: builders.simplex_boundary(_int(p, "m")),
    "crosspolytope_boundary": lambda p: builders.crosspolytope_boundary(_int(p, "n")),
    "cycle": lambda p: builders.cycle(_int(p, "n")),
    "path": lambda p: builders.path(_int(p, "n")),
    "torus7": lambda p: builders.torus7(),
    "rp2_6": lambda p: builders.rp2_6(),
    "cone": lambda p: builders.cone(_sub(p, "base"), str(p.get("apex", "apex"))),
    "join": lambda p: builders.join(_sub(p, "a"), _sub(p, "b")),
    "disjoint_union": lambda p: builders.disjoint_union(_sub(p, "a"), _sub(p, "b")),
    "join_power": lambda p: builders.join_power(_sub(p, "base"), _int(p, "n")),
    "subdivide": lambda p: iterated_barycentric(_sub(p, "base"), _int(p, "times", 1)),
}


def _from_builder(spec: Any) -> DeltaComplex:
    if not isinstance(spec, Mapping) or not isinstance(spec.get("name"), str):
        raise SchemaError("builder must be an object with a string 'name'")
    name = spec["name"]
    if name not in BUILDERS:
        raise SchemaError(f"unknown builder {name!r}; known: {', '.join(sorted(BUILDERS))}")
    params = spec.get("params", {})
    if not isinstance(params, Mapping):
        raise SchemaError("builder params must be an object")
    try:
        return BUILDERS[name](params)
    except (SchemaError, ValidationError):
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"builder {name!r}: {exc}") from exc


def _from_explicit(spec: Any) -> DeltaComplex:
    if not isinstance(spec, Mapping):
        raise SchemaError("complex must be an object")
    n0 = spec.get("vertices")
    if not isinstance(n0, int) or isinstance(n0, bool) or n0 < 0:
        raise SchemaError("complex.vertices must be a non-negative integer")
    higher = spec.get("faces", [])
    if not isinstance(higher, list) or not all(isinstance(level, list) for level in higher):
        raise SchemaError("complex.faces must be a list of per-dimension lists")
    for level in higher:
        for f in level:
            if not isinstance(f, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in f):
                raise SchemaError("each face entry must be a list of integers")
    faces = (((),) * n0,) + tuple(tuple(tuple(f) for f in level) for level in higher)
    labels = spec.get("labels")
    if labels is not None and not (isinstance(labels, list) and all(isinstance(level, list) for level in labels)):
        raise SchemaError("complex.labels must be a list of per-dimension lists")
    try:
        return DeltaComplex(faces, None if labels is None else tuple(map(tuple, labels)))
    except ComplexError as exc:
        raise SchemaError(str(exc)) from exc


def _from_stratification(spec: Any) -> DeltaComplex:
    try:
        data = StratificationData.from_dict(spec)
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"malformed stratification: {exc}") from exc
    try:
        return builders.from_stratification(data)
    except StratificationError as exc:
        raise ValidationError(str(exc), list(exc.ids)) from exc


def complex_from_source(doc: Any) -> DeltaComplex:
    """Build the complex named by exactly one of the source keys of ``doc``."""
    if not isinstance(doc, Mapping):
        raise SchemaError("expected an object")
    present = [k for k in SOURCES if k in doc]
    if len(present) != 1:
        raise SchemaError(f"exactly one of {', '.join(SOURCES)} is required, found {present or 'none'}")
    key = present[0]
    cx = {"stratification": _from_stratification, "builder": _from_builder, "complex": _from_explicit}[key](doc[key])
    report = validate(cx)
    if not report.ok:
        raise ValidationError(
            "complex fails validation", [f"{v.rule}: {v.message}" for v in report.violations]
        )
    return cx


# -- documents ----------------------------------------------------------------


@dataclass(frozen=True)
class InputDocument:
    raw: dict
    complex: DeltaComplex
    action: dict | None
    expected: dict

    @property
    def digest(self) -> str:
        return digest(self.raw)


def parse_document(raw: Any) -> InputDocument:
    if not isinstance(raw, dict):
        raise SchemaError("input document must be a JSON object")
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {version!r}; expected {FORMAT_VERSION!r}")
    unknown = set(raw) - {"format_version", "action", "expected", "description", *SOURCES}
    if unknown:
        raise SchemaError(f"unknown top-level keys: {', '.join(sorted(unknown))}")
    action = raw.get("action")
    if action is not None and not (isinstance(action, dict) and isinstance(action.get("generators"), list)):
        raise SchemaError("action must be an object with a 'generators' list")
    expected = raw.get("expected", {})
    if not isinstance(expected, dict):
        raise SchemaError("expected must be an object")
    return InputDocument(raw, complex_from_source(raw), action, expected)


def load_document(path: str | Path) -> InputDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_document(raw)


# -- actions ------------------------------------------------------------------


def _cells_by_label(cx: DeltaComplex) -> dict[str, CellId]:
    out: dict[str, CellId] = {}
    dup = set()
    for c in cx.cells():
        lab = cx.label(c)
        if lab in out:
            dup.add(lab)
        out[lab] = c
    for lab in dup:
        del out[lab]
    return out


def action_from_spec(cx: DeltaComplex, spec: Mapping, cap: int = DEFAULT_CAP) -> GroupAction:
    """Generators in cycle notation on vertex labels, with optional cell pins.

    A generator may instead give ``vertex_map`` as a list of vertex indices.
    ``cells`` maps cell labels (stratum ids) to cell labels where face sets
    alone do not fix the image.
    """
    by_label = None
    perms = []
    for n, gen in enumerate(spec.get("generators", [])):
        if not isinstance(gen, Mapping):
            raise SchemaError(f"generator {n} must be an object")
        if "vertex_map" in gen:
            vmap = list(gen["vertex_map"])
            if sorted(vmap) != list(range(cx.count(0))):
                raise ActionError(f"generator {n}: vertex_map is not a permutation")
        elif "cycles" in gen:
            vmap = vertex_map_from_labels(cx, parse_cycles(str(gen["cycles"])))
        else:
            raise SchemaError(f"generator {n} needs 'cycles' or 'vertex_map'")
        pins = {}
        if gen.get("cells"):
            by_label = by_label if by_label is not None else _cells_by_label(cx)
            for a, b in gen["cells"].items():
                if a not in by_label or b not in by_label:
                    raise ActionError(f"generator {n}: unknown or ambiguous cell label in {a!r} -> {b!r}")
                pins[by_label[a]] = by_label[b]
        perms.append(perm_from_vertex_map(cx, vmap, pins))
    return GroupAction(cx, tuple(perms), cap)


# -- output -------------------------------------------------------------------


def complex_to_json(cx: DeltaComplex) -> dict:
    body: dict[str, Any] = {
        "vertices": cx.count(0),
        "faces": [[list(f) for f in level] for level in cx.faces[1:]],
    }
    if cx.labels is not None:
        body["labels"] = [list(level) for level in cx.labels]
    return {"format_version": FORMAT_VERSION, "complex": body}


def write_complex(cx: DeltaComplex, path: str | Path) -> None:
    Path(path).write_text(canonical_json(complex_to_json(cx)), encoding="utf-8")
