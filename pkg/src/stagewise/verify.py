"""Invariant suites run by ``verify``.

Each suite re-checks a constructed object against the stage rules it was
built from, without calling the builder again.  Violations carry the stage
at which they first show, so a fault is reported where it happens.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .approximations import CanonicalApproximation, settling_stage
from .machines import CONE_EMPTY, PADDING, ZEROS, MonotoneMachine, monotonicity_violations
from .measure_core import ONE, Dyadic, all_strings, compatible, is_prefix
from .probability import (ENDS_IN_ZEROS, TOTAL, frontier_partition, ml_test_member,
                          stage_measure)
from .reals import DCERealApprox
from .runner import Result
from .scenario import Scenario


@dataclass(frozen=True)
class Violation:
    suite: str
    target: str
    stage: Optional[int]
    message: str

    def line(self) -> str:
        where = "" if self.stage is None else f" stage {self.stage}"
        return f"FAIL {self.suite} {self.target}{where}: {self.message}"


def check_monotone(m: MonotoneMachine) -> list[Violation]:
    out = []
    for sigma, tau in monotonicity_violations(m, exhaustive=True):
        a, b = m.table[sigma], m.table[tau]
        out.append(Violation("monotonicity", m.name, max(a.stage, b.stage),
                             f"M({sigma or 'λ'})={a.output or 'λ'} is not a prefix of "
                             f"M({tau})={b.output or 'λ'}"))
    return out


def check_partition(m: MonotoneMachine) -> list[Violation]:
    out = []
    for s in range(m.horizon + 1):
        total = sum(frontier_partition(m, s), Dyadic(0))
        if total != ONE:
            out.append(Violation("partition", m.name, s, f"live+stalled+undefined = {total}"))
    return out


def check_padding_rules(m: MonotoneMachine, q: CanonicalApproximation,
                        cone: Optional[str] = None) -> list[Violation]:
    """Every string of length ``2**(s+1)-1`` outside ``cone`` is defined at
    stage ``s+1`` with the output the padding rule gives: the parent block's
    output followed by ``2**s`` zeros if the string has a prefix in
    ``q.at(s)``, by its own last ``2**s`` bits otherwise."""
    out = []
    table = m.table
    expect = {"": ""}
    root = table.get("")
    if cone is None and (root is None or root.output or root.stage != 0):
        out.append(Violation("padding-rule", m.name, 0, "M(λ) must be λ at stage 0"))
    for s in range(m.horizon):
        width = 1 << s
        qs = q.at(s)
        nxt = {}
        for tau, head in expect.items():
            for x in all_strings(width):
                sigma = tau + x
                padded = qs.has_prefix_of(sigma)
                nxt[sigma] = want = head + ("0" * width if padded else x)
                if cone is not None and compatible(sigma, cone):
                    continue
                e = table.get(sigma)
                if e is None or e.stage != s + 1:
                    got = "undefined" if e is None else f"defined at stage {e.stage}"
                    out.append(Violation("padding-rule", m.name, s + 1, f"{sigma} is {got}"))
                elif e.output != want or (e.rule == PADDING) != padded:
                    out.append(Violation("padding-rule", m.name, s + 1,
                                         f"M({sigma}) = {e.output} ({e.rule}), expected {want}"))
        expect = nxt
    return out


def check_padding_lengths(m: MonotoneMachine) -> list[Violation]:
    return [Violation("length", m.name, e.stage, f"|M({sigma})| = {len(e.output)}")
            for sigma, e in sorted(m.table.items())
            if e.rule != CONE_EMPTY and len(e.output) != len(sigma)]


def check_totality_rules(m: MonotoneMachine, q: CanonicalApproximation,
                         cone: Optional[str] = None) -> list[Violation]:
    """Outside ``cone``: an entry defined at stage ``t`` is ``0^|σ|`` with
    ``|σ| < t`` and no prefix in ``q.at(t-1)``; and every ``|σ| <= s`` with
    no prefix in ``q.at(s)`` is defined by stage ``s+1``."""
    out = []
    for sigma, e in sorted(m.table.items()):
        if cone is not None and compatible(sigma, cone):
            continue
        t = e.stage
        if (e.output != "0" * len(sigma) or e.rule != ZEROS or len(sigma) >= t
                or q.at(t - 1).has_prefix_of(sigma)):
            out.append(Violation("totality-rule", m.name, t,
                                 f"M({sigma or 'λ'}) = {e.output or 'λ'} ({e.rule})"))
    for s in range(m.horizon):
        qs = q.at(s)
        for n in range(s + 1):
            for sigma in all_strings(n):
                if cone is not None and compatible(sigma, cone):
                    continue
                if m.entry(sigma, s + 1) is None and not qs.has_prefix_of(sigma):
                    out.append(Violation("totality-rule", m.name, s + 1,
                                         f"{sigma or 'λ'} uncovered but undefined"))
    return out


def check_cone(m: MonotoneMachine, rho: str) -> list[Violation]:
    out = []
    for s in range(m.horizon + 1):
        for sigma in m.frontier(s):
            if compatible(sigma, rho):
                e = m.entry(sigma, s)
                if e is None or e.rule != CONE_EMPTY or e.output:
                    out.append(Violation("cone", m.name, s, f"{sigma or 'λ'} is not stalled at λ"))
    return out


def check_approximation(q: CanonicalApproximation, name: str) -> list[Violation]:
    out = []
    for s, v in enumerate(q.stages):
        members = list(v)
        for a, b in combinations(members, 2):
            if is_prefix(a, b) or is_prefix(b, a):
                out.append(Violation("prefix-free", name, s, f"{a or 'λ'} and {b or 'λ'}"))
        if q.length_bounded:
            for x in members:
                if len(x) >= s:
                    out.append(Violation("length-bound", name, s, f"|{x}| >= {s}"))
        if s in q.true_stages and not v <= q.limit_set:
            out.append(Violation("true-stage", name, s, "V_s not inside the limit set"))
    for sigma in q.limit_set:
        s0 = settling_stage(q, sigma)
        if s0 is None or s0 > q.horizon:
            out.append(Violation("settling", name, None, f"{sigma or 'λ'} never settles"))
    return out


def check_allocation(m: MonotoneMachine) -> list[Violation]:
    rho = m.meta["rho"]
    want = m.meta.get("allocator_targets", m.meta["targets"])
    sets = m.meta["allocation"]
    out = []
    for s, (v, t) in enumerate(zip(sets, want)):
        if v.weight != t:
            out.append(Violation("kraft-chaitin", m.name, s, f"weight {v.weight} != target {t}"))
        members = list(v)
        for a, b in combinations(members, 2):
            if compatible(a, b):
                out.append(Violation("kraft-chaitin", m.name, s, f"{a} and {b} are comparable"))
        for a in members:
            if compatible(a, rho):
                out.append(Violation("kraft-chaitin", m.name, s, f"{a} meets the cone of {rho}"))
        if s and not sets[s - 1] <= v:
            out.append(Violation("kraft-chaitin", m.name, s, "allocation shrank"))
    return out


def check_realized(m: MonotoneMachine, cls) -> list[Violation]:
    out = []
    for s, want in enumerate(m.meta["realized"]):
        got = stage_measure(m, cls, s)
        if got != want:
            out.append(Violation("measure", m.name, s, f"measured {got}, allocation gives {want}"))
    return out


def check_orchestration(r: Result, sc: Scenario) -> list[Violation]:
    o = r.orchestration
    out = [Violation("splice", r.id, s, f"spliced {a} != outer {b} + 2^-{o.e} * inner {i}")
           for s, a, b, i in o.splice_report().violations]
    for s in o.reconstruction_violations():
        out.append(Violation("reconstruction", r.id, s, "target + 2^-e inner != goal"))
    if r.kind == "dce":
        p = r.directive.params
        a, b = sc.reals[p["left"]], sc.reals[p["right"]]
        d = DCERealApprox(a, b)
        if not d.consistent() or list(d.values) != list(o.goal):
            out.append(Violation("dce", r.id, None, "goal is not the stagewise a - b"))
    return out


def check_ml(r: Result) -> list[Violation]:
    p = r.directive.params
    out = []
    for s in range(p["stages"] + 1):
        member = ml_test_member(p["index"], s, p["phi"])
        if member.weight > Dyadic.power(s):
            out.append(Violation("ml-bound", r.id, s, f"weight {member.weight} > 2^-{s}"))
        if not member.empty and len(member.block) != 1 << s:
            out.append(Violation("ml-bound", r.id, s, "fixed block has the wrong width"))
    return out


def check_rewrite(r: Result) -> list[Violation]:
    out = []
    prev = None
    for stage, a, b, left, right, diff in r.rows:
        a, b, left, right, diff = (Dyadic.parse(x) for x in (a, b, left, right, diff))
        if diff != a - b:
            out.append(Violation("rewrite", r.id, stage, f"{diff} != a - b"))
        if prev is not None and (left > prev[0] or right > prev[1]):
            out.append(Violation("rewrite", r.id, stage, "rewritten sequence increased"))
        prev = (left, right)
    return out


def verify_result(r: Result, sc: Scenario) -> list[Violation]:
    out = []
    m = r.machine
    if m is not None:
        out += check_monotone(m) + check_partition(m)
    if r.kind == "padding":
        out += check_padding_lengths(m) + check_padding_rules(m, r.approximation)
    elif r.kind == "totality":
        out += check_totality_rules(m, r.approximation)
    elif r.kind == "cor34":
        q = m.meta["approximation"]
        out += (check_padding_lengths(m) + check_padding_rules(m, q, m.meta["rho"])
                + check_cone(m, m.meta["rho"]) + check_allocation(m)
                + check_realized(m, ENDS_IN_ZEROS))
    elif r.kind == "cor36":
        q = m.meta["approximation"]
        out += (check_totality_rules(m, q, m.meta["rho"]) + check_cone(m, m.meta["rho"])
                + check_allocation(m) + check_realized(m, TOTAL))
    elif r.kind in ("leftce", "dce"):
        out += check_orchestration(r, sc)
    elif r.kind == "ml_test":
        out += check_ml(r)
    elif r.kind == "rewrite":
        out += check_rewrite(r)
    if r.approximation is not None:
        out += check_approximation(r.approximation, r.id)
    return out


SUITES = {
    "padding": ("monotonicity", "partition", "length", "padding-rule", "approximation"),
    "totality": ("monotonicity", "partition", "totality-rule", "approximation"),
    "cor34": ("monotonicity", "partition", "length", "padding-rule", "cone",
              "kraft-chaitin", "measure"),
    "cor36": ("monotonicity", "partition", "totality-rule", "cone", "kraft-chaitin", "measure"),
    "leftce": ("monotonicity", "partition", "splice", "reconstruction"),
    "dce": ("monotonicity", "partition", "splice", "reconstruction", "dce"),
    "ml_test": ("ml-bound",),
    "rewrite": ("rewrite",),
}
