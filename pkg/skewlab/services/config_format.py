"""Parser for the line-oriented ring-tower configuration format.

    # Z/8 with one identity layer
    [base]
    family = zmod
    prime = 2
    exponent = 3

    [layer]
    var = y
    precision = 3
    tau = id
    delta = zero

    [suite]
    names = ring-axioms, jt-lemma
"""

import logging
import re
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from skewlab.exceptions import ConfigError
from skewlab.models import RelationForm, RingFamily
from skewlab.schemas import BaseRingSpec, BudgetSpec, LayerSpec, RingTowerConfig

logger = logging.getLogger(__name__)

_SECTION = re.compile(r"^\[(?P<name>[a-z]+)\]$")
_UPPER_ENTRY = re.compile(r"^p(?P<i>\d)(?P<j>\d)$")

_BASE_KEYS = {
    RingFamily.ZMOD: {"prime", "exponent"},
    RingFamily.TRUNCPOLY: {"prime", "length", "var"},
    RingFamily.FIELD: {"prime"},
    RingFamily.PRODUCT: {"prime", "copies"},
    RingFamily.QUANTUM_PLANE: {"prime", "q", "precision"},
    RingFamily.QUANTUM_MATRICES: {"prime", "n", "lambda", "relation_form", "precision"},
}
_LAYER_KEYS = {"var", "precision", "tau", "delta", "q"}
_BUDGET_KEYS = {"enumeration", "samples", "seed"}


def _integer(value: str, key: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}", line) from None


def _check_tau(value: str, line: int) -> str:
    head, _, rest = value.partition(" ")
    if value in ("id", "cycle") or (head == "map" and rest.strip()):
        return value
    if head == "scale":
        _integer(rest.strip(), "tau scale", line)
        return value
    raise ConfigError(f"tau must be 'id', 'cycle', 'map <expr>' or 'scale <c>', got {value!r}", line)


def _check_delta(value: str, line: int) -> str:
    head, _, rest = value.partition(" ")
    if value in ("zero", "tau-minus-id") or (head == "leibniz" and rest.strip()):
        return value
    raise ConfigError(f"delta must be 'zero', 'tau-minus-id' or 'leibniz <expr>', got {value!r}", line)


def _split_sections(text: str) -> List[Tuple[str, int, Dict[str, Tuple[str, int]]]]:
    sections: List[Tuple[str, int, Dict[str, Tuple[str, int]]]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _SECTION.match(line)
        if header:
            sections.append((header.group("name"), number, {}))
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", number)
        if not sections:
            raise ConfigError("key outside of a section", number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"empty key or value in {line!r}", number)
        entries = sections[-1][2]
        if key in entries:
            raise ConfigError(f"duplicate key {key!r}", number)
        entries[key] = (value, number)
    return sections


def _parse_base(entries: Dict[str, Tuple[str, int]], line: int) -> BaseRingSpec:
    if "family" not in entries:
        raise ConfigError("[base] needs a family", line)
    family_text, family_line = entries["family"]
    try:
        family = RingFamily(family_text)
    except ValueError:
        raise ConfigError(f"unknown family {family_text!r}", family_line) from None

    fields: Dict[str, object] = {"family": family, "line": line}
    p_upper: Dict[str, int] = {}
    for key, (value, number) in entries.items():
        if key == "family":
            continue
        upper = _UPPER_ENTRY.match(key)
        if family == RingFamily.QUANTUM_MATRICES and upper:
            if int(upper.group("i")) >= int(upper.group("j")):
                raise ConfigError(f"{key} is not above the diagonal", number)
            p_upper[key[1:]] = _integer(value, key, number)
            continue
        if key not in _BASE_KEYS[family]:
            raise ConfigError(f"unknown key {key!r} for family {family.value}", number)
        if key == "var":
            fields["var"] = value
        elif key == "relation_form":
            try:
                fields["relation_form"] = RelationForm(value)
            except ValueError:
                raise ConfigError(f"relation_form must be 'standard' or 'as-printed', got {value!r}", number) from None
        elif key == "lambda":
            fields["lam"] = _integer(value, key, number)
        else:
            fields[key] = _integer(value, key, number)
    fields["p_upper"] = p_upper
    try:
        return BaseRingSpec(**fields)
    except ValidationError as exc:
        raise ConfigError(_first_error(exc), line) from None


def _parse_layer(entries: Dict[str, Tuple[str, int]], line: int) -> LayerSpec:
    fields: Dict[str, object] = {"line": line}
    for key, (value, number) in entries.items():
        if key not in _LAYER_KEYS:
            raise ConfigError(f"unknown layer key {key!r}", number)
        if key == "tau":
            fields[key] = _check_tau(value, number)
        elif key == "delta":
            fields[key] = _check_delta(value, number)
        elif key == "var":
            fields[key] = value
        else:
            fields[key] = _integer(value, key, number)
    if "precision" not in fields:
        raise ConfigError("[layer] needs a precision", line)
    try:
        return LayerSpec(**fields)
    except ValidationError as exc:
        raise ConfigError(_first_error(exc), line) from None


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    message = error.get("msg", "invalid value")
    return f"{location}: {message}" if location else message


def base_precision_cap(base: BaseRingSpec) -> Optional[int]:
    """Largest layer precision the base admits; None for discrete bases."""
    if base.family == RingFamily.ZMOD:
        return base.exponent
    if base.family == RingFamily.TRUNCPOLY:
        return base.length
    if base.family in (RingFamily.QUANTUM_PLANE, RingFamily.QUANTUM_MATRICES):
        return base.precision
    return None


def parse_config(text: str) -> RingTowerConfig:
    """Parse and validate a ring-tower configuration; errors carry the line number."""
    base: Optional[BaseRingSpec] = None
    layers: List[LayerSpec] = []
    suites: List[str] = []
    budget = BudgetSpec()
    seen = set()
    for name, line, entries in _split_sections(text):
        if name in ("base", "suite", "budget") and name in seen:
            raise ConfigError(f"duplicate [{name}] section", line)
        seen.add(name)
        if name == "base":
            base = _parse_base(entries, line)
        elif name == "layer":
            layers.append(_parse_layer(entries, line))
        elif name == "suite":
            unknown = set(entries) - {"names"}
            if unknown:
                raise ConfigError(f"unknown suite key {sorted(unknown)[0]!r}", entries[sorted(unknown)[0]][1])
            if "names" in entries:
                suites = [part.strip() for part in entries["names"][0].split(",") if part.strip()]
        elif name == "budget":
            for key, (value, number) in entries.items():
                if key not in _BUDGET_KEYS:
                    raise ConfigError(f"unknown budget key {key!r}", number)
            try:
                budget = BudgetSpec(**{key: _integer(value, key, number) for key, (value, number) in entries.items()})
            except ValidationError as exc:
                raise ConfigError(_first_error(exc), line) from None
        else:
            raise ConfigError(f"unknown section [{name}]", line)
    if base is None:
        raise ConfigError("missing [base] section")

    cap = base_precision_cap(base)
    for layer in layers:
        if cap is not None and layer.precision > cap:
            raise ConfigError(f"precision {layer.precision} exceeds the precision cap {cap} of the ring below",
                              layer.line)
        cap = layer.precision
    config = RingTowerConfig(base=base, layers=layers, suites=suites, budget=budget, source=text)
    logger.debug("parsed config: %s base, %d layers", base.family.value, len(layers))
    return config
