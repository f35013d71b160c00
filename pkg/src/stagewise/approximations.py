"""Mock halting sets, c.e. operators relative to them, and canonical
stagewise approximations of the sets those operators enumerate.

A mock halting set is finite and fully revealed by its horizon, so true
stages are computed in retrospect.  Operator outputs are delayed with the
hat discipline: an axiom whose oracle use exceeds a number that entered at
the current stage is withheld until the oracle segment below its use agrees
with the previous stage.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import NotPrefixFreeLimit, PrefixConflict
from .measure_core import BitString, check_bitstring
from .prefix_sets import PrefixFreeSet, minimal_strings


@dataclass(frozen=True)
class MockHaltingSet:
    """A finite enumeration ``(stage, number)`` standing in for the halting set."""

    events: tuple[tuple[int, int], ...]
    horizon: int

    def __post_init__(self):
        events = tuple((int(s), int(n)) for s, n in self.events)
        object.__setattr__(self, "events", events)
        seen = set()
        last = 0
        for s, n in events:
            if s <= last:
                raise ValueError(f"event stages must be strictly increasing and >= 1 (at {s})")
            if n < 0:
                raise ValueError("enumerated numbers must be non-negative")
            if n in seen:
                raise ValueError(f"number {n} enumerated twice")
            seen.add(n)
            last = s
        if events and self.horizon < last:
            raise ValueError(f"horizon {self.horizon} precedes event stage {last}")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")

    def at(self, s: int) -> frozenset[int]:
        """The numbers enumerated by stage ``s``."""
        return frozenset(n for t, n in self.events if t <= s)

    def entered_at(self, s: int) -> frozenset[int]:
        return frozenset(n for t, n in self.events if t == s)

    @property
    def final(self) -> frozenset[int]:
        return frozenset(n for _, n in self.events)

    @property
    def last_event_stage(self) -> int:
        return self.events[-1][0] if self.events else 0


@dataclass(frozen=True)
class Axiom:
    """Enumerate ``string`` once the oracle meets the finite condition."""

    string: BitString
    required_in: frozenset[int] = frozenset()
    required_out: frozenset[int] = frozenset()
    appearance: int = 1

    def __post_init__(self):
        check_bitstring(self.string)
        object.__setattr__(self, "required_in", frozenset(self.required_in))
        object.__setattr__(self, "required_out", frozenset(self.required_out))
        if self.appearance < 1:
            raise ValueError("axiom appearance stage must be >= 1")
        if self.required_in & self.required_out:
            raise ValueError("axiom condition is contradictory")

    @property
    def use(self) -> int:
        nums = self.required_in | self.required_out
        return 1 + max(nums) if nums else 0

    def holds(self, oracle: frozenset[int]) -> bool:
        return self.required_in <= oracle and not (self.required_out & oracle)


@dataclass(frozen=True)
class MockCEOperator:
    axioms: tuple[Axiom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))

    @property
    def last_appearance(self) -> int:
        return max((a.appearance for a in self.axioms), default=0)

    @property
    def max_length(self) -> int:
        return max((len(a.string) for a in self.axioms), default=0)


def hat_enumeration(w: MockCEOperator, h: MockHaltingSet, s: int) -> set[BitString]:
    """Strings enumerated by the delayed operator at stage ``s``."""
    oracle = h.at(s)
    fresh = h.entered_at(s)
    out = set()
    for ax in w.axioms:
        if ax.appearance > s or not ax.holds(oracle):
            continue
        # withheld while a number below the use is new at this stage
        if any(n < ax.use for n in fresh):
            continue
        out.add(ax.string)
    return out


def true_stages(h: MockHaltingSet) -> set[int]:
    """Stages enumerating some ``n`` with no smaller number entering later."""
    result = set()
    later_min = None
    for s, n in reversed(h.events):
        if later_min is None or later_min > n:
            result.add(s)
        later_min = n if later_min is None else min(later_min, n)
    return result


@dataclass(frozen=True)
class CanonicalApproximation:
    """Finite prefix-free sets ``stages[s]`` approximating ``limit_set``.

    Stages past the recorded horizon repeat the last recorded set.
    """

    stages: tuple[PrefixFreeSet, ...]
    true_stages: frozenset[int]
    limit_set: PrefixFreeSet
    length_bounded: bool = True
    origin: str = field(default="", compare=False)

    @property
    def horizon(self) -> int:
        return len(self.stages) - 1

    def at(self, s: int) -> PrefixFreeSet:
        if s < 0:
            return PrefixFreeSet()
        return self.stages[min(s, self.horizon)]

    @classmethod
    def from_sets(cls, sets: Sequence[PrefixFreeSet | Iterable[BitString]],
                  limit: Optional[PrefixFreeSet] = None,
                  origin: str = "explicit") -> "CanonicalApproximation":
        """Wrap explicitly given stage sets.

        Without a declared limit the last stage is taken as the limit.  True
        stages are those whose set lies inside the limit.  The ``|σ| < s``
        length bound is not imposed here; the consumer decides what it can
        resolve.
        """
        stages = tuple(x if isinstance(x, PrefixFreeSet) else PrefixFreeSet.of(x)
                       for x in sets)
        if not stages:
            stages = (PrefixFreeSet(),)
        if limit is None:
            limit = stages[-1]
        true = frozenset(s for s, v in enumerate(stages) if v <= limit)
        return cls(stages, true, limit, length_bounded=False, origin=origin)


def extended_horizon(w: MockCEOperator, h: MockHaltingSet) -> int:
    """A horizon after which every stage agrees with the limit, plus one."""
    settled = max(h.last_event_stage + 1, w.last_appearance, w.max_length + 1)
    return max(h.horizon, settled + 1)


def limit_strings(w: MockCEOperator, h: MockHaltingSet) -> set[BitString]:
    final = h.final
    return {ax.string for ax in w.axioms if ax.holds(final)}


def build_canonical(w: MockCEOperator, h: MockHaltingSet) -> CanonicalApproximation:
    """Stage sets ``V_s`` = minimal strings of the delayed enumeration,
    keeping only strings shorter than ``s``."""
    limit_raw = sorted(limit_strings(w, h), key=lambda x: (len(x), x))
    limit = PrefixFreeSet()
    for sigma in limit_raw:
        try:
            limit = limit.insert(sigma)
        except PrefixConflict as exc:
            raise NotPrefixFreeLimit(str(exc)) from None
    horizon = extended_horizon(w, h)
    stages = []
    for s in range(horizon + 1):
        u = {x for x in hat_enumeration(w, h, s) if len(x) < s}
        stages.append(minimal_strings(u))
    ts = frozenset(t for t in true_stages(h) if t <= horizon)
    return CanonicalApproximation(tuple(stages), ts, limit, origin="operator")


def settling_stage(ca: CanonicalApproximation, sigma: BitString) -> Optional[int]:
    """Least ``s0`` such that ``sigma`` has a prefix in every later stage set
    up to the horizon, or ``None``."""
    s0 = None
    for s in range(ca.horizon, -1, -1):
        if ca.stages[s].has_prefix_of(sigma):
            s0 = s
        else:
            break
    return s0
