"""Run the constructions named in a scenario and write their outputs.

Every output is a pure function of the scenario: files are written in a
fixed order with sorted rows and no timestamps.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .approximations import CanonicalApproximation, build_canonical
from .errors import ConfigError
from .machines import (MonotoneMachine, build_padding_machine, build_totality_machine,
                       make_machine_cor34, make_machine_cor36)
from .measure_core import Dyadic
from .orchestration import Orchestration, make_universal_dce, make_universal_leftce
from .probability import ClassSpec, ml_test_member, trace
from .reals import rewrite_right_difference
from .scenario import Directive, Fault, Scenario


@dataclass
class Result:
    """What one directive produced."""

    directive: Directive
    machine: Optional[MonotoneMachine] = None
    approximation: Optional[CanonicalApproximation] = None
    orchestration: Optional[Orchestration] = None
    targets: Optional[list] = None
    rows: list = field(default_factory=list)
    header: tuple = ()

    @property
    def id(self) -> str:
        return self.directive.id

    @property
    def kind(self) -> str:
        return self.directive.kind


def _flip(bits: str) -> str:
    if not bits:
        return "1"
    return bits[:-1] + ("1" if bits[-1] == "0" else "0")


def inject_fault(m: MonotoneMachine, fault: Fault) -> MonotoneMachine:
    """Return ``m`` with one entry dropped or its last output bit flipped."""
    if fault.input not in m.table:
        raise ConfigError(f"fault.input: {fault.input or 'λ'!r} is not defined in {m.name}")
    table = dict(m.table)
    if fault.kind == "drop":
        del table[fault.input]
    else:
        e = table[fault.input]
        table[fault.input] = replace(e, output=_flip(e.output))
    return replace(m, table=table, meta=dict(m.meta))


def build(d: Directive, sc: Scenario) -> Result:
    p, h = d.params, sc.horizon
    r = Result(d)
    if d.kind in ("padding", "totality"):
        q = build_canonical(sc.operators[p["operator"]], sc.halting)
        maker = build_padding_machine if d.kind == "padding" else build_totality_machine
        r.approximation = q
        r.machine = maker(q, h, name=d.id)
    elif d.kind == "cor34":
        r.machine = make_machine_cor34(p["rho"], p["targets"], name=d.id)
        r.targets = list(p["targets"])
    elif d.kind == "cor36":
        r.machine = make_machine_cor36(p["rho"], p["totals"], name=d.id)
        r.targets = list(p["totals"])
    elif d.kind == "leftce":
        o = make_universal_leftce(sc.reals[p["goal"]], e=p.get("e"))
        r.orchestration, r.machine, r.targets = o, o.machine, list(o.goal)
    elif d.kind == "dce":
        o = make_universal_dce(sc.reals[p["left"]], sc.reals[p["right"]], p["case_tag"],
                               e=p.get("e"))
        r.orchestration, r.machine, r.targets = o, o.machine, list(o.goal)
    elif d.kind == "ml_test":
        r.header = ("s", "length", "block_start", "weight", "bound")
        for s in range(p["stages"] + 1):
            member = ml_test_member(p["index"], s, p["phi"])
            r.rows.append((s, member.length, member.start, str(member.weight),
                           str(Dyadic.power(s))))
    elif d.kind == "rewrite":
        a, b = sc.reals[p["left"]], sc.reals[p["right"]]
        left, right = rewrite_right_difference(a, b, p["q"])
        r.header = ("stage", "a", "b", "q_minus_b", "q_minus_a", "difference")
        for s in range(len(a.values)):
            r.rows.append((s, str(a.values[s]), str(b.values[s]), str(left.values[s]),
                           str(right.values[s]), str(left.values[s] - right.values[s])))
    if sc.fault is not None and sc.fault.target == d.id:
        if r.machine is None:
            raise ConfigError(f"fault.target: {d.id!r} does not build a machine")
        r.machine = inject_fault(r.machine, sc.fault)
        if r.orchestration is not None:
            r.orchestration = replace(r.orchestration, machine=r.machine)
    return r


def build_all(sc: Scenario) -> list[Result]:
    return [build(d, sc) for d in sc.constructions]


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def approximation_csv(q: CanonicalApproximation) -> str:
    rows = []
    for s, v in enumerate(q.stages):
        true = "1" if s in q.true_stages else "0"
        for sigma in sorted(v, key=lambda x: (len(x), x)):
            rows.append((s, sigma, true))
    return _csv(("stage", "string", "true_stage"), rows)


def machine_files(r: Result, sc: Scenario) -> dict[str, str]:
    files = {}
    if r.machine is not None:
        files[f"{r.id}.machine.csv"] = r.machine.to_csv()
    if r.approximation is not None:
        files[f"{r.id}.approx.csv"] = approximation_csv(r.approximation)
    if r.header:
        files[f"{r.id}.{r.kind}.csv"] = _csv(r.header, r.rows)
    return files


def trace_files(r: Result, sc: Scenario) -> dict[str, str]:
    files = {}
    if r.machine is None:
        return files
    for label in sc.classes:
        t = trace(r.machine, ClassSpec.parse(label), targets=r.targets)
        files[f"{r.id}.{label}.trace.csv"] = t.to_csv()
    return files


def write_files(files: dict[str, str], out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(files):
        path = out / name
        path.write_text(files[name])
        written.append(path)
    return written
