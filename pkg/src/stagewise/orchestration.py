"""Universal machines with a prescribed probability trace.

Both orchestrations splice a base universal machine into the cone of
``0^e`` and fill the rest of the space with a cone-reserving machine whose trace
makes up the difference:

    outer_target_s + 2**-e * base_s == goal_s    at every stage s.

The measured class throughout is ``ENDS_IN_ZEROS``, the stage surrogate
for a computable output (padding machines and totality machines both write
their zeros through it).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .approximations import CanonicalApproximation
from .errors import NonMonotoneOuter, TargetOutOfRange
from .machines import (MonotoneMachine, build_padding_machine,
                       build_totality_machine, build_universal,
                       make_machine_cor34, make_machine_cor36, splice)
from .measure_core import ONE, ZERO, Dyadic
from .probability import (ENDS_IN_ZEROS, ClassSpec, SpliceReport, trace,
                          verify_splice_identity)
from .reals import INCREASING, MonotoneRealApprox, ks_exponent_search

LEFT_CE = "left_ce"
RIGHT_CE = "right_ce"
NOT_RANDOM = "not_random"
CASE_TAGS = (LEFT_CE, RIGHT_CE, NOT_RANDOM)

MAX_EXPONENT = 32


def default_base_universal(stages: int, settle: int = 2) -> MonotoneMachine:
    """A small universal machine with a nondecreasing ENDS_IN_ZEROS trace.

    Both components are totality machines, whose frontier grows linearly,
    so the base stays cheap at any horizon.  Machine 0 reads the sets
    ``{1^min(t, settle)}``, which flicker and then settle; machine 1 reads
    the empty set.  The trace is ``0, 1/4, 1/2, 5/8, 5/8, ...`` for the
    default ``settle``.
    """
    flicker = CanonicalApproximation.from_sets(
        [["1" * min(t, settle)] for t in range(stages)], origin="base")
    m0 = build_totality_machine(flicker, stages, name="B0")
    m1 = build_totality_machine(CanonicalApproximation.from_sets([[]]), stages, name="B1")
    return build_universal([m0, m1], name="V0")


def padding_base_universal(stages: int) -> MonotoneMachine:
    """Universal machine over a padding machine that pads after ``0^k 1``
    for every ``k < s`` at stage ``s+1``, plus the pure copy machine."""
    grow = CanonicalApproximation.from_sets(
        [["0" * k + "1" for k in range(t)] for t in range(stages)], origin="base")
    m0 = build_padding_machine(grow, stages, name="P0")
    m1 = build_padding_machine(CanonicalApproximation.from_sets([[]]), stages, name="P1")
    return build_universal([m0, m1], name="V0")


def leftce_plan(g: Sequence[Dyadic], p0: Sequence[Dyadic],
                e: Optional[int] = None) -> tuple[int, list[Dyadic]]:
    """Pick ``e`` and the outer targets ``g - 2**-e p0``.

    The least admissible ``e >= 1`` that both makes the targets nondecreasing
    and keeps them in ``[0, 1 - 2**-e)``.
    """
    g_r = MonotoneRealApprox.increasing(g)
    p_r = MonotoneRealApprox.increasing(p0)
    candidates = [e] if e is not None else range(
        max(1, ks_exponent_search(g_r, p_r, MAX_EXPONENT)), MAX_EXPONENT + 1)
    for k in candidates:
        targets = [gs - ps.scale(k) for gs, ps in zip(g_r.values, p_r.values)]
        room = ONE - Dyadic.power(k)
        if any(b < a for a, b in zip(targets, targets[1:])):
            continue
        if all(ZERO <= t < room for t in targets):
            return k, targets
    raise TargetOutOfRange("no exponent puts g - 2^-e p0 inside [0, 1 - 2^-e)")


def dce_plan(d: Sequence[Dyadic], delta: Sequence[Dyadic],
             e: Optional[int] = None) -> tuple[int, list[Dyadic]]:
    """Pick ``e`` and the nonincreasing outer totals ``d - 2**-e delta``.

    Totals must lie in ``(2**-e, 1 - 2**-e]``: the lower end keeps the
    requested probability above the cone mass, the upper end is what a
    totality machine can still reach once the cone is emptied.
    """
    candidates = [e] if e is not None else range(1, MAX_EXPONENT + 1)
    in_window = []
    for k in candidates:
        totals = [ds - ts.scale(k) for ds, ts in zip(d, delta)]
        lo, hi = Dyadic.power(k), ONE - Dyadic.power(k)
        if all(lo < t <= hi for t in totals):
            in_window.append((k, totals))
    if not in_window:
        raise TargetOutOfRange("no exponent puts the outer totals in (2^-e, 1 - 2^-e]")
    for k, totals in in_window:
        if all(b <= a for a, b in zip(totals, totals[1:])):
            return k, totals
    k, totals = in_window[0]
    stage = next(s for s in range(1, len(totals)) if totals[s] > totals[s - 1])
    raise NonMonotoneOuter(
        f"outer totals increase at stage {stage} for every admissible e "
        f"(e={k}: {totals[stage - 1]} -> {totals[stage]})")


@dataclass
class Orchestration:
    """A spliced universal machine together with the ingredients that
    reconstruct its goal trace."""

    machine: MonotoneMachine
    inner: MonotoneMachine
    outer: MonotoneMachine
    e: int
    goal: list
    inner_trace: list
    outer_targets: list
    case_tag: str = LEFT_CE
    cls: ClassSpec = field(default=ENDS_IN_ZEROS)

    def reconstruction_violations(self) -> list[int]:
        """Stages where ``target + 2**-e inner != goal`` (pure arithmetic)."""
        return [s for s, (t, p, g) in
                enumerate(zip(self.outer_targets, self.inner_trace, self.goal))
                if t + p.scale(self.e) != g]

    def measured(self) -> list[Dyadic]:
        return list(trace(self.machine, self.cls).measures)

    def outer_measured(self) -> list[Dyadic]:
        return list(trace(self.outer, self.cls).measures)

    def lag_stages(self) -> list[int]:
        """Stages where the outer machine has not yet resolved its target."""
        return [s for s, (m, t) in enumerate(zip(self.outer_measured(), self.outer_targets))
                if m != t]

    def splice_report(self) -> SpliceReport:
        return verify_splice_identity(self.machine, self.inner, self.outer, self.e, self.cls)


def _base_trace(base: MonotoneMachine, stages: int) -> list[Dyadic]:
    return list(trace(base, ENDS_IN_ZEROS, stages=stages).measures)


def make_universal_leftce(g: MonotoneRealApprox, base: Optional[MonotoneMachine] = None,
                          e: Optional[int] = None) -> Orchestration:
    """Universal machine whose ENDS_IN_ZEROS trace is ``g`` once resolved."""
    if g.direction != INCREASING:
        raise ValueError("make_universal_leftce needs an increasing approximation")
    if not ZERO < g.last < ONE:
        raise ValueError("goal must end inside (0, 1)")
    stages = g.horizon
    base = base or default_base_universal(stages)
    p0 = _base_trace(base, stages)
    k, targets = leftce_plan(g.values, p0, e)
    outer = make_machine_cor34("0" * k, targets, name="M")
    spliced = splice(k, base, outer, name="V")
    return Orchestration(spliced, base, outer, k, list(g.values), p0, targets, LEFT_CE)


def make_universal_dce(a: MonotoneRealApprox, b: MonotoneRealApprox, case_tag: str,
                       base: Optional[MonotoneMachine] = None,
                       e: Optional[int] = None) -> Orchestration:
    """Universal machine whose ENDS_IN_ZEROS trace is ``a - b`` once resolved.

    ``case_tag`` declares which branch applies, since randomness of the
    limit cannot be read off finitely many stages.
    """
    if case_tag not in CASE_TAGS:
        raise ValueError(f"case_tag must be one of {CASE_TAGS}")
    if len(a.values) != len(b.values):
        raise ValueError("approximations have different horizons")
    d = [x - y for x, y in zip(a.values, b.values)]
    for s, v in enumerate(d):
        if not ZERO < v < ONE:
            raise ValueError(f"stage {s}: difference {v} outside (0, 1)")
    if case_tag == LEFT_CE:
        if any(y < x for x, y in zip(d, d[1:])):
            raise NonMonotoneOuter("left_ce tag but the difference decreases")
        orch = make_universal_leftce(MonotoneRealApprox.increasing(d), base, e)
        orch.case_tag = LEFT_CE
        return orch
    stages = len(d) - 1
    base = base or default_base_universal(stages)
    delta = _base_trace(base, stages)
    k, totals = dce_plan(d, delta, e)
    outer = make_machine_cor36("0" * k, totals, name="N")
    spliced = splice(k, base, outer, name="M")
    return Orchestration(spliced, base, outer, k, d, delta, totals, case_tag)
