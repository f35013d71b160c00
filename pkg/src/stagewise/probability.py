"""Exact stage measures of output classes, and Martin-Löf test members.

At stage ``s`` a class is measured by summing ``2**-|σ|`` over the frontier
strings ``σ`` whose stage-``s`` entry satisfies the class predicate:

* ``TOTAL``: the entry is defined and still growing (not ``cone-empty``);
* ``ENDS_IN_ZEROS``: the entry's latest block was written in zeros mode
  (``padding-rule`` or ``zeros-rule``);
* ``MATCHES_PHI``: a live output agrees with a finite partial table ``phi``
  that is defined on every position of the output;
* ``IN_ML_TEST``: the frontier string has a prefix in a test member.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import HorizonExceeded
from .machines import PADDING, ZEROS, Entry, MonotoneMachine
from .measure_core import ZERO, BitString, Dyadic, all_strings
from .prefix_sets import PrefixFreeSet

Phi = tuple  # entries 0, 1 or None (undefined)


class ClassKind(enum.Enum):
    TOTAL = "TOTAL"
    ENDS_IN_ZEROS = "ENDS_IN_ZEROS"
    MATCHES_PHI = "MATCHES_PHI"
    IN_ML_TEST = "IN_ML_TEST"


def as_phi(values: Sequence) -> Phi:
    out = []
    for v in values:
        if v is None:
            out.append(None)
        elif v in (0, 1, "0", "1"):
            out.append(int(v))
        else:
            raise ValueError(f"phi entries must be 0, 1 or None, got {v!r}")
    return tuple(out)


class BlockPatternSet:
    """Strings of a fixed length agreeing with a pattern on a fixed block.

    This is the prefix-free family of a test member.  It can be far too large
    to list (``2**63`` members at ``s = 6``), so weight and membership are
    computed from the pattern and :meth:`materialize` is for small cases.
    """

    def __init__(self, length: int, start: int, block: str):
        self.length = length
        self.start = start
        self.block = block

    @property
    def weight(self) -> Dyadic:
        if self.length == 0 and not self.block:
            return ZERO
        return Dyadic(1, len(self.block))

    @property
    def empty(self) -> bool:
        return self.length == 0

    def __len__(self):
        return 0 if self.empty else 1 << (self.length - len(self.block))

    def __contains__(self, sigma: BitString) -> bool:
        return (not self.empty and len(sigma) == self.length
                and sigma[self.start:self.start + len(self.block)] == self.block)

    def has_prefix_of(self, sigma: BitString) -> bool:
        return len(sigma) >= self.length and sigma[:self.length] in self

    def __iter__(self) -> Iterator[BitString]:
        if self.empty:
            return
        for head in all_strings(self.start):
            yield head + self.block

    def materialize(self) -> PrefixFreeSet:
        return PrefixFreeSet.of(self)


def ml_test_member(e: int, s: int, phi: Sequence) -> BlockPatternSet:
    """Strings of length ``2**(s+1) - 1`` whose last ``2**s`` bits copy
    ``phi`` there, provided ``phi`` is defined on all earlier positions too;
    the empty family otherwise.  ``e`` only names which table ``phi`` is."""
    phi = as_phi(phi)
    length = (1 << (s + 1)) - 1
    start = (1 << s) - 1
    if len(phi) < length or any(v is None for v in phi[:length]):
        return BlockPatternSet(0, 0, "")
    return BlockPatternSet(length, start, "".join(str(v) for v in phi[start:length]))


@dataclass(frozen=True)
class ClassSpec:
    kind: ClassKind
    phi: Optional[Phi] = None
    e: int = 0
    test_stage: int = 0
    _member: Optional[BlockPatternSet] = field(default=None, compare=False, repr=False)

    @classmethod
    def total(cls):
        return cls(ClassKind.TOTAL)

    @classmethod
    def ends_in_zeros(cls):
        return cls(ClassKind.ENDS_IN_ZEROS)

    @classmethod
    def matches_phi(cls, phi: Sequence, e: int = 0):
        return cls(ClassKind.MATCHES_PHI, as_phi(phi), e)

    @classmethod
    def in_ml_test(cls, e: int, s: int, phi: Sequence):
        phi = as_phi(phi)
        return cls(ClassKind.IN_ML_TEST, phi, e, s, ml_test_member(e, s, phi))

    @classmethod
    def parse(cls, text: str) -> "ClassSpec":
        return cls(ClassKind(text))

    @property
    def label(self) -> str:
        if self.kind == ClassKind.MATCHES_PHI:
            return f"MATCHES_PHI({self.e})"
        if self.kind == ClassKind.IN_ML_TEST:
            return f"IN_ML_TEST({self.e},{self.test_stage})"
        return self.kind.value

    def holds(self, sigma: BitString, entry: Optional[Entry]) -> bool:
        k = self.kind
        if k == ClassKind.IN_ML_TEST:
            return self._member.has_prefix_of(sigma)
        if entry is None or not entry.live:
            return False
        if k == ClassKind.TOTAL:
            return True
        if k == ClassKind.ENDS_IN_ZEROS:
            return entry.rule in (PADDING, ZEROS)
        out = entry.output
        phi = self.phi
        if len(phi) < len(out):
            return False
        return all(phi[i] is not None and str(phi[i]) == c for i, c in enumerate(out))


TOTAL = ClassSpec.total()
ENDS_IN_ZEROS = ClassSpec.ends_in_zeros()


def _check_stage(m: MonotoneMachine, s: int):
    if s < 0 or s > m.horizon:
        raise HorizonExceeded(f"stage {s} outside 0..{m.horizon} for {m.name}")


def stage_measure(m: MonotoneMachine, c: ClassSpec, s: int) -> Dyadic:
    _check_stage(m, s)
    frontier = m.frontier(s)
    if not frontier:
        return ZERO
    top = max(len(x) for x in frontier)
    count = 0
    for sigma in frontier:
        if c.holds(sigma, m.entry(sigma, s)):
            count += 1 << (top - len(sigma))
    return Dyadic(count, top)


def frontier_partition(m: MonotoneMachine, s: int) -> tuple[Dyadic, Dyadic, Dyadic]:
    """Measures of (live, stalled at λ, undefined) frontier cylinders."""
    _check_stage(m, s)
    frontier = m.frontier(s)
    top = max((len(x) for x in frontier), default=0)
    counts = [0, 0, 0]
    for sigma in frontier:
        e = m.entry(sigma, s)
        slot = 2 if e is None else (0 if e.live else 1)
        counts[slot] += 1 << (top - len(sigma))
    return tuple(Dyadic(c, top) for c in counts)


@dataclass(frozen=True)
class StageMeasureTrace:
    machine_id: str
    class_label: str
    measures: tuple[Dyadic, ...]
    targets: Optional[tuple[Dyadic, ...]] = None

    def residuals(self) -> list[Optional[Dyadic]]:
        if self.targets is None:
            return [None] * len(self.measures)
        return [m - t for m, t in zip(self.measures, self.targets)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "machine_id", "class", "measure", "target", "residual"])
        for s, (m, r) in enumerate(zip(self.measures, self.residuals())):
            t = "" if self.targets is None else str(self.targets[s])
            w.writerow([s, self.machine_id, self.class_label, str(m), t,
                        "" if r is None else str(r)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "StageMeasureTrace":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty trace")
        targets = None
        if all(r["target"] for r in rows):
            targets = tuple(Dyadic.parse(r["target"]) for r in rows)
        return cls(rows[0]["machine_id"], rows[0]["class"],
                   tuple(Dyadic.parse(r["measure"]) for r in rows), targets)


def trace(m: MonotoneMachine, c: ClassSpec, targets: Optional[Sequence[Dyadic]] = None,
          stages: Optional[int] = None) -> StageMeasureTrace:
    n = m.horizon if stages is None else stages
    measures = tuple(stage_measure(m, c, s) for s in range(n + 1))
    if targets is not None:
        targets = tuple(Dyadic.of(t) for t in targets[:n + 1])
    return StageMeasureTrace(m.name, c.label, measures, targets)


@dataclass
class SpliceReport:
    e: int
    class_label: str
    stages: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [f"stage {s}: spliced {a} != outer {b} + 2^-{self.e} * inner {c}"
                for s, a, b, c in self.violations]


def verify_splice_identity(spliced: MonotoneMachine, inner: MonotoneMachine,
                           outer: MonotoneMachine, e: int, c: ClassSpec) -> SpliceReport:
    """Check ``μ(spliced) = μ(outer) + 2**-e μ(inner)`` at every stage."""
    report = SpliceReport(e, c.label, spliced.horizon)
    for s in range(spliced.horizon + 1):
        a = stage_measure(spliced, c, s)
        b = stage_measure(outer, c, s)
        i = stage_measure(inner, c, s)
        if a != b + i.scale(e):
            report.violations.append((s, a, b, i))
    return report
