"""Stagewise approximations of reals from monotone dyadic sequences.

A left-c.e. real relative to a mock halting set is represented by its
increasing stage sequence, a right-c.e. real by a decreasing one.  Every
transformation here is exact at each stage; declared limits are carried
along as metadata and never used by a check.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

from .approximations import CanonicalApproximation
from .errors import NoExponent, QTooSmall
from .measure_core import ONE, ZERO, Dyadic
from .prefix_sets import PrefixFreeSet

INCREASING = "increasing"
DECREASING = "decreasing"


@dataclass(frozen=True)
class MonotoneRealApprox:
    direction: str
    values: tuple[Dyadic, ...]
    declared_limit: Optional[Dyadic] = None

    def __post_init__(self):
        if self.direction not in (INCREASING, DECREASING):
            raise ValueError(f"unknown direction {self.direction!r}")
        vals = tuple(Dyadic.of(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.declared_limit is not None:
            object.__setattr__(self, "declared_limit", Dyadic.of(self.declared_limit))
        for s, v in enumerate(vals):
            if not ZERO <= v <= ONE:
                raise ValueError(f"stage {s} value {v} outside [0, 1]")
        for s in range(1, len(vals)):
            if self.direction == INCREASING and vals[s] < vals[s - 1]:
                raise ValueError(f"stage {s} decreases an increasing approximation")
            if self.direction == DECREASING and vals[s] > vals[s - 1]:
                raise ValueError(f"stage {s} increases a decreasing approximation")

    @classmethod
    def increasing(cls, values: Sequence, declared_limit=None) -> "MonotoneRealApprox":
        return cls(INCREASING, tuple(values), declared_limit)

    @classmethod
    def decreasing(cls, values: Sequence, declared_limit=None) -> "MonotoneRealApprox":
        return cls(DECREASING, tuple(values), declared_limit)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    @property
    def last(self) -> Dyadic:
        return self.values[-1]

    def increments(self) -> list[Dyadic]:
        return [self.values[s] - self.values[s - 1] for s in range(1, len(self.values))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "value"])
        for s, v in enumerate(self.values):
            w.writerow([s, str(v)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, direction: str = INCREASING) -> "MonotoneRealApprox":
        rows = list(csv.DictReader(io.StringIO(text)))
        for i, row in enumerate(rows):
            if int(row["stage"]) != i:
                raise ValueError(f"stage column out of order at row {i}")
        return cls(direction, tuple(Dyadic.parse(r["value"]) for r in rows))


@dataclass(frozen=True)
class DCERealApprox:
    """The stagewise difference ``left - right`` of two increasing approximations."""

    left: MonotoneRealApprox
    right: MonotoneRealApprox
    values: tuple[Dyadic, ...] = ()

    def __post_init__(self):
        if self.left.direction != INCREASING or self.right.direction != INCREASING:
            raise ValueError("both components of a d.c.e. approximation must increase")
        if len(self.left.values) != len(self.right.values):
            raise ValueError("components have different horizons")
        if not self.values:
            object.__setattr__(self, "values", tuple(
                a - b for a, b in zip(self.left.values, self.right.values)))

    def consistent(self) -> bool:
        return all(v == a - b for v, a, b in
                   zip(self.values, self.left.values, self.right.values))


def _same_horizon(*approxs: MonotoneRealApprox):
    lengths = {len(a.values) for a in approxs}
    if len(lengths) != 1:
        raise ValueError("approximations have different horizons")


def weight_real(ca: CanonicalApproximation) -> MonotoneRealApprox:
    """Increasing weights of the limit members seen so far.

    ``values[s]`` is the weight of the limit members that occurred in some
    ``V_t`` with ``t <= s``.  These are subsets of the prefix-free limit, so
    the sequence increases to the weight of the limit set.
    """
    seen = PrefixFreeSet()
    limit = ca.limit_set
    values = []
    for v in ca.stages:
        for sigma in v:
            if sigma in limit and sigma not in seen:
                seen = seen.insert(sigma)
        values.append(seen.weight)
    return MonotoneRealApprox(INCREASING, tuple(values), declared_limit=limit.weight)


def rewrite_right_difference(a: MonotoneRealApprox, b: MonotoneRealApprox,
                             q: Dyadic) -> tuple[MonotoneRealApprox, MonotoneRealApprox]:
    """Rewrite ``a - b`` as ``(q - b) - (q - a)``, a difference of decreasing
    approximations."""
    q = Dyadic.of(q)
    if a.direction != INCREASING or b.direction != INCREASING:
        raise ValueError("rewrite_right_difference needs increasing inputs")
    _same_horizon(a, b)
    bound = max(a.last, b.last)
    for lim in (a.declared_limit, b.declared_limit):
        if lim is not None:
            bound = max(bound, lim)
    if q <= bound:
        raise QTooSmall(f"q = {q} does not exceed {bound}")
    if q > ONE:
        raise QTooSmall(f"q = {q} exceeds 1")
    left = MonotoneRealApprox(DECREASING, tuple(q - v for v in b.values),
                              None if b.declared_limit is None else q - b.declared_limit)
    right = MonotoneRealApprox(DECREASING, tuple(q - v for v in a.values),
                               None if a.declared_limit is None else q - a.declared_limit)
    return left, right


def ks_certificate_holds(g: MonotoneRealApprox, a: MonotoneRealApprox, e: int) -> bool:
    """``s -> g_s - 2**-e * a_s`` is nondecreasing over the whole horizon."""
    return all(dg >= da.scale(e) for dg, da in zip(g.increments(), a.increments()))


def ks_exponent_search(g: MonotoneRealApprox, a: MonotoneRealApprox,
                       bound: int = 64) -> int:
    """Least ``e`` making ``g - 2**-e * a`` nondecreasing on every stage."""
    if g.direction != INCREASING or a.direction != INCREASING:
        raise ValueError("ks_exponent_search needs increasing inputs")
    _same_horizon(g, a)
    for e in range(bound + 1):
        if ks_certificate_holds(g, a, e):
            return e
    raise NoExponent(f"no exponent up to {bound} makes g - 2^-e a nondecreasing")


def shift_by_common(a: MonotoneRealApprox, b: MonotoneRealApprox,
                    g: MonotoneRealApprox) -> tuple[MonotoneRealApprox, MonotoneRealApprox]:
    """Add the same increasing approximation to both sides of ``a - b``."""
    for x in (a, b, g):
        if x.direction != INCREASING:
            raise ValueError("shift_by_common needs increasing inputs")
    _same_horizon(a, b, g)

    def add(x, y):
        lim = (None if x.declared_limit is None or y.declared_limit is None
               else x.declared_limit + y.declared_limit)
        return MonotoneRealApprox(INCREASING, tuple(p + r for p, r in zip(x.values, y.values)), lim)

    return add(a, g), add(b, g)
