"""Structure description files.

YAML (JSON is accepted too, being a subset)::

    hbar: 1.0          # optional, default 1
    beta: -0.5         # optional, default -0.5
    left_lead:  {mass: 1.0, potential: 0.0}
    layers:            # optional, may be empty
      - {width: 2.0, mass: 2.0, potential: 1.0}
    right_lead: {mass: 1.0, potential: 0.0}

``potential`` defaults to 0 everywhere. Errors name the offending field path
(``layers[1].width``) and, for syntax errors, the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Union

import yaml

from .core import Layer, Lead, OrderingScheme, PhysicalConstants, Structure


class StructureFileError(ValueError):
    pass


@dataclass(frozen=True)
class StructureFile:
    structure: Structure
    scheme: OrderingScheme
    constants: PhysicalConstants


def _number(value: Any, path: str, positive=False) -> float:
    if isinstance(value, str):
        # YAML 1.1 reads exponents without a dot ("1e-3") as strings
        try:
            value = float(value)
        except ValueError:
            pass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StructureFileError(f"{path}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise StructureFileError(f"{path}: must be finite")
    if positive and value <= 0:
        raise StructureFileError(f"{path}: must be positive, got {value!r}")
    return value


def _mapping(value: Any, path: str, allowed) -> Mapping:
    if not isinstance(value, Mapping):
        raise StructureFileError(f"{path}: expected a mapping, got {type(value).__name__}")
    unknown = sorted(set(value) - set(allowed))
    if unknown:
        raise StructureFileError(f"{path}: unknown field(s) {', '.join(map(str, unknown))}")
    return value


def _lead(value: Any, path: str) -> Lead:
    value = _mapping(value, path, ("mass", "potential"))
    if "mass" not in value:
        raise StructureFileError(f"{path}.mass: missing")
    return Lead(_number(value["mass"], f"{path}.mass", positive=True),
                _number(value.get("potential", 0.0), f"{path}.potential"))


def _layer(value: Any, path: str) -> Layer:
    value = _mapping(value, path, ("width", "mass", "potential"))
    for key in ("width", "mass"):
        if key not in value:
            raise StructureFileError(f"{path}.{key}: missing")
    return Layer(_number(value["width"], f"{path}.width", positive=True),
                 _number(value["mass"], f"{path}.mass", positive=True),
                 _number(value.get("potential", 0.0), f"{path}.potential"))


def parse_structure(data: Any) -> StructureFile:
    """Validate an already-decoded document."""
    data = _mapping(data, "<root>", ("hbar", "beta", "left_lead", "layers", "right_lead"))
    for key in ("left_lead", "right_lead"):
        if key not in data:
            raise StructureFileError(f"{key}: missing")
    layers = data.get("layers") or []
    if not isinstance(layers, list):
        raise StructureFileError("layers: expected a list")
    structure = Structure(
        _lead(data["left_lead"], "left_lead"),
        tuple(_layer(item, f"layers[{i}]") for i, item in enumerate(layers)),
        _lead(data["right_lead"], "right_lead"),
    )
    beta = _number(data.get("beta", -0.5), "beta")
    hbar = _number(data.get("hbar", 1.0), "hbar", positive=True)
    return StructureFile(structure, OrderingScheme(beta), PhysicalConstants(hbar))


def loads(text: str) -> StructureFile:
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise StructureFileError(f"{where}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise StructureFileError(str(exc)) from exc
    return parse_structure(data)


def load(path: Union[str, Path]) -> StructureFile:
    return loads(Path(path).read_text(encoding="utf-8"))


def dumps(structure: Structure, scheme: OrderingScheme = OrderingScheme(),
          constants: PhysicalConstants = PhysicalConstants()) -> str:
    doc = {
        "hbar": constants.hbar,
        "beta": scheme.beta,
        "left_lead": {"mass": structure.left_lead.mass,
                      "potential": structure.left_lead.potential},
        "layers": [{"width": l.width, "mass": l.mass, "potential": l.potential}
                   for l in structure.layers],
        "right_lead": {"mass": structure.right_lead.mass,
                       "potential": structure.right_lead.potential},
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
