"""Scenario documents: mock worlds plus the constructions to run on them.

A scenario is a YAML mapping::

    name: lemma33_basic
    horizon: 4
    halting: {events: [[1, 2], [3, 0]]}
    operators:
      W:
        - {string: "1", out: [0]}
        - {string: "01", in: [2], appearance: 2}
    reals:
      g: {direction: increasing, values: ["1/2^2", "3/2^3"]}
    constructions:
      - {id: P, kind: padding, operator: W}
    classes: [ENDS_IN_ZEROS, TOTAL]
    fault: {target: P, kind: flip, input: "0101"}

Dyadics are written ``"num/2^k"``.  Every validation failure raises
:class:`ConfigError` with the dotted key that caused it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import yaml

from .approximations import Axiom, MockCEOperator, MockHaltingSet
from .errors import ConfigError
from .measure_core import Dyadic, is_bitstring
from .orchestration import CASE_TAGS
from .probability import ClassKind
from .reals import DECREASING, INCREASING, MonotoneRealApprox

KINDS = ("padding", "totality", "cor34", "cor36", "leftce", "dce", "ml_test", "rewrite")
FAULT_KINDS = ("drop", "flip")
SIMPLE_CLASSES = (ClassKind.TOTAL.value, ClassKind.ENDS_IN_ZEROS.value)

_REQUIRED = {
    "padding": ("operator",),
    "totality": ("operator",),
    "cor34": ("rho", "targets"),
    "cor36": ("rho", "totals"),
    "leftce": ("goal",),
    "dce": ("left", "right", "case_tag"),
    "ml_test": ("phi", "stages"),
    "rewrite": ("left", "right", "q"),
}


@dataclass(frozen=True)
class Directive:
    id: str
    kind: str
    params: dict


@dataclass(frozen=True)
class Fault:
    target: str
    kind: str
    input: str


@dataclass
class Scenario:
    name: str
    horizon: int
    halting: MockHaltingSet
    operators: dict = field(default_factory=dict)
    reals: dict = field(default_factory=dict)
    constructions: list = field(default_factory=list)
    classes: tuple = SIMPLE_CLASSES
    fault: Optional[Fault] = None

    @property
    def empty(self) -> bool:
        return not self.constructions


def _need(doc: dict, key: str, where: str):
    if key not in doc:
        raise ConfigError(f"{where}{key}: missing")
    return doc[key]


def _dyadic(value: Any, key: str) -> Dyadic:
    try:
        return Dyadic.of(value if not isinstance(value, float) else str(value))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _dyadics(values: Any, key: str) -> list[Dyadic]:
    if not isinstance(values, list) or not values:
        raise ConfigError(f"{key}: expected a non-empty list of dyadics")
    return [_dyadic(v, f"{key}[{i}]") for i, v in enumerate(values)]


def _bits(value: Any, key: str) -> str:
    value = "" if value in (None, "λ") else str(value)
    if not is_bitstring(value):
        raise ConfigError(f"{key}: {value!r} is not a bit string")
    return value


def _int(value: Any, key: str, low: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < low:
        raise ConfigError(f"{key}: expected an integer >= {low}, got {value!r}")
    return value


def fit_horizon(values: list, horizon: int) -> list:
    """Truncate or extend (repeating the last value) to ``horizon + 1`` stages."""
    if len(values) > horizon + 1:
        return values[:horizon + 1]
    return values + [values[-1]] * (horizon + 1 - len(values))


def _parse_halting(doc: Any, horizon: int) -> MockHaltingSet:
    if doc is None:
        return MockHaltingSet((), horizon)
    if not isinstance(doc, dict):
        raise ConfigError("halting: expected a mapping")
    events = doc.get("events", []) or []
    pairs = []
    for i, ev in enumerate(events):
        if not (isinstance(ev, list) and len(ev) == 2):
            raise ConfigError(f"halting.events[{i}]: expected [stage, number]")
        s = _int(ev[0], f"halting.events[{i}][0]", 1)
        if s > horizon:
            raise ConfigError(f"halting.events[{i}][0]: stage {s} exceeds horizon {horizon}")
        pairs.append((s, _int(ev[1], f"halting.events[{i}][1]")))
    try:
        return MockHaltingSet(tuple(pairs), horizon)
    except ValueError as exc:
        raise ConfigError(f"halting.events: {exc}") from None


def _parse_operator(name: str, doc: Any, horizon: int) -> MockCEOperator:
    where = f"operators.{name}"
    if not isinstance(doc, list):
        raise ConfigError(f"{where}: expected a list of axioms")
    axioms = []
    for i, ax in enumerate(doc):
        key = f"{where}[{i}]"
        if not isinstance(ax, dict):
            raise ConfigError(f"{key}: expected a mapping")
        string = _bits(_need(ax, "string", key + "."), key + ".string")
        req_in = [_int(n, f"{key}.in") for n in ax.get("in", []) or []]
        req_out = [_int(n, f"{key}.out") for n in ax.get("out", []) or []]
        appearance = _int(ax.get("appearance", 1), f"{key}.appearance", 1)
        if appearance > horizon:
            raise ConfigError(f"{key}.appearance: stage {appearance} exceeds horizon {horizon}")
        try:
            axioms.append(Axiom(string, frozenset(req_in), frozenset(req_out), appearance))
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    return MockCEOperator(tuple(axioms))


def _parse_real(name: str, doc: Any, horizon: int) -> MonotoneRealApprox:
    where = f"reals.{name}"
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected a mapping")
    direction = doc.get("direction", INCREASING)
    if direction not in (INCREASING, DECREASING):
        raise ConfigError(f"{where}.direction: {direction!r} is not increasing/decreasing")
    values = fit_horizon(_dyadics(_need(doc, "values", where + "."), where + ".values"), horizon)
    limit = doc.get("limit")
    try:
        return MonotoneRealApprox(direction, tuple(values),
                                  None if limit is None else _dyadic(limit, where + ".limit"))
    except ValueError as exc:
        raise ConfigError(f"{where}.values: {exc}") from None


def _parse_directive(i: int, doc: Any, scenario: Scenario) -> Directive:
    where = f"constructions[{i}]"
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected a mapping")
    ident = str(_need(doc, "id", where + "."))
    kind = _need(doc, "kind", where + ".")
    if kind not in KINDS:
        raise ConfigError(f"{where}.kind: {kind!r} is not one of {', '.join(KINDS)}")
    for key in _REQUIRED[kind]:
        _need(doc, key, where + ".")
    p = dict(doc)
    h = scenario.horizon
    if kind in ("padding", "totality"):
        if p["operator"] not in scenario.operators:
            raise ConfigError(f"{where}.operator: unknown operator {p['operator']!r}")
    if "rho" in p:
        p["rho"] = _bits(p["rho"], where + ".rho")
    if kind == "cor34":
        p["targets"] = fit_horizon(_dyadics(p["targets"], where + ".targets"), h)
    if kind == "cor36":
        p["totals"] = fit_horizon(_dyadics(p["totals"], where + ".totals"), h)
    for key in ("goal", "left", "right"):
        if key in p and kind != "ml_test":
            if p[key] not in scenario.reals:
                raise ConfigError(f"{where}.{key}: unknown real {p[key]!r}")
    if kind == "dce" and p["case_tag"] not in CASE_TAGS:
        raise ConfigError(f"{where}.case_tag: {p['case_tag']!r} is not one of {CASE_TAGS}")
    if "e" in p and p["e"] is not None:
        p["e"] = _int(p["e"], where + ".e", 1)
    if kind == "ml_test":
        phi = str(p["phi"])
        if set(phi) - set("01_"):
            raise ConfigError(f"{where}.phi: only 0, 1 and _ (undefined) are allowed")
        p["phi"] = tuple(None if c == "_" else int(c) for c in phi)
        p["stages"] = _int(p["stages"], where + ".stages")
        p["index"] = _int(p.get("index", 0), where + ".index")
    if kind == "rewrite":
        p["q"] = _dyadic(p["q"], where + ".q")
    return Directive(ident, kind, p)


def parse_scenario(doc: Any, horizon: Optional[int] = None) -> Scenario:
    """Validate a loaded YAML document; ``horizon`` overrides the document's."""
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("<root>: expected a mapping")
    name = str(doc.get("name", "scenario"))
    h = horizon if horizon is not None else doc.get("horizon", 4)
    h = _int(h, "horizon")
    if h == 0:
        raise ConfigError("horizon: must be at least 1")
    sc = Scenario(name, h, _parse_halting(doc.get("halting"), h))
    ops = doc.get("operators", {}) or {}
    if not isinstance(ops, dict):
        raise ConfigError("operators: expected a mapping")
    sc.operators = {str(k): _parse_operator(str(k), v, h) for k, v in sorted(ops.items())}
    reals = doc.get("reals", {}) or {}
    if not isinstance(reals, dict):
        raise ConfigError("reals: expected a mapping")
    sc.reals = {str(k): _parse_real(str(k), v, h) for k, v in sorted(reals.items())}
    classes = doc.get("classes", list(SIMPLE_CLASSES))
    for i, c in enumerate(classes):
        if c not in SIMPLE_CLASSES:
            raise ConfigError(f"classes[{i}]: {c!r} is not one of {SIMPLE_CLASSES}")
    sc.classes = tuple(classes)
    cons = doc.get("constructions", []) or []
    if not isinstance(cons, list):
        raise ConfigError("constructions: expected a list")
    seen = set()
    for i, c in enumerate(cons):
        d = _parse_directive(i, c, sc)
        if d.id in seen:
            raise ConfigError(f"constructions[{i}].id: duplicate id {d.id!r}")
        seen.add(d.id)
        sc.constructions.append(d)
    fault = doc.get("fault")
    if fault is not None:
        if not isinstance(fault, dict):
            raise ConfigError("fault: expected a mapping")
        target = _need(fault, "target", "fault.")
        if target not in seen:
            raise ConfigError(f"fault.target: unknown construction {target!r}")
        kind = _need(fault, "kind", "fault.")
        if kind not in FAULT_KINDS:
            raise ConfigError(f"fault.kind: {kind!r} is not one of {FAULT_KINDS}")
        sc.fault = Fault(target, kind, _bits(_need(fault, "input", "fault."), "fault.input"))
    return sc


def load_scenario(path, horizon: Optional[int] = None) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"<file>: {exc}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"<yaml>: {exc}") from None
    return parse_scenario(doc, horizon)


def demo_names() -> list[str]:
    root = resources.files("stagewise") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def demo_path(name: str):
    if name not in demo_names():
        raise ConfigError(f"demo: unknown scenario {name!r}")
    return resources.files("stagewise") / "scenarios" / f"{name}.yaml"
