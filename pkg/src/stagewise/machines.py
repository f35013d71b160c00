"""Stagewise monotone machines and the constructions built from them.

A machine is a finite table ``input -> Entry`` where each entry records the
output, the stage at which it was defined and the rule that defined it.
Absence from the table means *undefined*; the empty output with rule
``cone-empty`` is a defined value that never grows.

Every machine also carries a description of its *frontier*: for each stage
``s`` a finite prefix-free cover of Cantor space by the strings on which the
machine is evaluated at that stage.  Stage measures (see ``probability``) sum
cylinder weights over the frontier, so splicing and universal coding must
transport the frontier along with the table.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Optional, Sequence

from .approximations import CanonicalApproximation
from .errors import ConeNotEmpty, HorizonExceeded, MonotonicityBreak, TargetOutOfRange
from .measure_core import (ONE, BitString, Dyadic, all_strings,
                           check_bitstring, compatible)
from .prefix_sets import AllocationRequest, PrefixFreeSet, kc_allocate

PADDING = "padding-rule"
COPY = "copy-rule"
ZEROS = "zeros-rule"
CONE_EMPTY = "cone-empty"
RULES = (PADDING, COPY, ZEROS, CONE_EMPTY)

BLOCKS = "blocks"    # strings of length 2**s - 1
LINEAR = "linear"    # strings of length s - 1 (length 0 at stage 0)
POINT = "point"      # just the prefix itself

# padding tables are enumerated in full: stage 5 would need 2**31 strings
PADDING_STAGE_LIMIT = 4


@dataclass(frozen=True)
class Entry:
    output: BitString
    stage: int
    rule: str
    origin: str = ""

    @property
    def live(self) -> bool:
        return self.rule != CONE_EMPTY

    def tagged(self, name: str, offset: BitString) -> "Entry":
        tag = f"spliced-from({name},{offset or 'λ'})"
        return replace(self, origin=tag + ("/" + self.origin if self.origin else ""))


def frontier_length(kind: str, s: int) -> int:
    if kind == BLOCKS:
        return (1 << s) - 1
    if kind == LINEAR:
        return max(s - 1, 0)
    if kind == POINT:
        return 0
    raise ValueError(f"unknown frontier kind {kind!r}")


@dataclass(frozen=True)
class FrontierPiece:
    """Strings ``prefix + x`` with ``|x|`` given by ``kind``, minus the cones in ``cuts``."""

    prefix: BitString
    kind: str
    cuts: tuple[BitString, ...] = ()

    def strings(self, s: int) -> Iterator[BitString]:
        n = frontier_length(self.kind, s)
        for x in all_strings(n):
            yield from _refine(self.prefix + x, self.cuts)

    def shifted(self, code: BitString) -> "FrontierPiece":
        return FrontierPiece(code + self.prefix, self.kind,
                             tuple(code + c for c in self.cuts))

    def cut(self, cone: BitString) -> "FrontierPiece":
        return FrontierPiece(self.prefix, self.kind, self.cuts + (cone,))


def _refine(sigma: BitString, cuts: Sequence[BitString]) -> Iterator[BitString]:
    """Maximal cylinders inside ``[sigma]`` avoiding every cut cone."""
    for c in cuts:
        if sigma.startswith(c):
            return
    if any(c.startswith(sigma) for c in cuts):
        yield from _refine(sigma + "0", cuts)
        yield from _refine(sigma + "1", cuts)
    else:
        yield sigma


@dataclass(frozen=True)
class MonotoneMachine:
    name: str
    horizon: int
    table: dict
    pieces: tuple[FrontierPiece, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def entry(self, sigma: BitString, s: Optional[int] = None) -> Optional[Entry]:
        """The entry at ``sigma`` if it is defined by stage ``s``."""
        e = self.table.get(sigma)
        if e is None or (s is not None and e.stage > s):
            return None
        return e

    def output(self, x: BitString, s: Optional[int] = None) -> BitString:
        """Output on oracle prefix ``x`` at stage ``s``: the value at the
        longest defined prefix of ``x``."""
        for n in range(len(x), -1, -1):
            e = self.entry(x[:n], s)
            if e is not None:
                return e.output
        return ""

    def frontier(self, s: int) -> list[BitString]:
        out = []
        for piece in self.pieces:
            out.extend(piece.strings(s))
        return out

    def defined_by(self, s: int) -> dict:
        return {k: v for k, v in self.table.items() if v.stage <= s}

    # -- serialization ----------------------------------------------------
    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# machine={self.name}\n")
        buf.write(f"# horizon={self.horizon}\n")
        buf.write("# frontier=" + json.dumps(
            [[p.prefix, p.kind, list(p.cuts)] for p in self.pieces]) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "input", "output", "rule"])
        rows = sorted(self.table.items(), key=lambda kv: (kv[1].stage, len(kv[0]), kv[0]))
        for sigma, e in rows:
            rule = e.rule + ("@" + e.origin if e.origin else "")
            w.writerow([e.stage, sigma, e.output, rule])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "MonotoneMachine":
        meta, body = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif line.strip():
                body.append(line)
        table = {}
        for row in csv.DictReader(body):
            rule, _, origin = row["rule"].partition("@")
            if rule not in RULES:
                raise ValueError(f"unknown rule {rule!r}")
            sigma = check_bitstring(row["input"])
            if sigma in table:
                raise ValueError(f"input {sigma!r} defined twice")
            table[sigma] = Entry(check_bitstring(row["output"]), int(row["stage"]), rule, origin)
        pieces = tuple(FrontierPiece(p, k, tuple(c))
                       for p, k, c in json.loads(meta.get("frontier", "[]")))
        m = cls(meta.get("machine", "loaded"), int(meta.get("horizon", 0)), table, pieces)
        bad = monotonicity_violations(m)
        if bad:
            raise MonotonicityBreak(f"table violates monotonicity at {bad[0]}")
        return m


def monotonicity_violations(m: MonotoneMachine, exhaustive: bool = False) -> list:
    """Pairs ``(sigma, tau)`` with ``sigma`` a prefix of ``tau``, both defined,
    and ``m(sigma)`` not a prefix of ``m(tau)``.

    By default each entry is compared with its nearest defined ancestor,
    which suffices by transitivity.  ``exhaustive`` compares every pair.
    """
    bad = []
    table = m.table
    for tau, e in table.items():
        for n in range(len(tau) - 1, -1, -1):
            anc = table.get(tau[:n])
            if anc is None:
                continue
            if not e.output.startswith(anc.output):
                bad.append((tau[:n], tau))
            if not exhaustive:
                break
    return sorted(bad, key=lambda p: (len(p[1]), p))


def everywhere_empty(horizon: int, name: str = "empty") -> MonotoneMachine:
    """The machine with value λ on every string."""
    return MonotoneMachine(name, horizon, {"": Entry("", 0, CONE_EMPTY)},
                           (FrontierPiece("", POINT),))


# -- padding and totality machines ----------------------------------------

def block_lengths(stages: int) -> list[int]:
    return [(1 << s) - 1 for s in range(stages + 1)]


def build_padding_machine(q: CanonicalApproximation, stages: int,
                          name: str = "padding") -> MonotoneMachine:
    """At stage ``s+1`` extend every string of length ``2**s - 1`` by
    ``2**s`` bits: zeros if it has a prefix in ``q.at(s)``, otherwise the
    corresponding bits of the input itself."""
    if stages < 1:
        raise ValueError("stages must be >= 1")
    if stages > PADDING_STAGE_LIMIT:
        raise HorizonExceeded(f"padding machine with {stages} stages needs strings of "
                              f"length {(1 << stages) - 1}; the limit is {PADDING_STAGE_LIMIT}")
    table = {"": Entry("", 0, COPY)}
    for s in range(stages):
        qs = q.at(s)
        width = 1 << s
        prev_len = width - 1
        zeros = "0" * width
        for tau in all_strings(prev_len):
            head = table[tau].output
            for x in all_strings(width):
                sigma = tau + x
                if qs.has_prefix_of(sigma):
                    table[sigma] = Entry(head + zeros, s + 1, PADDING)
                else:
                    table[sigma] = Entry(head + sigma[len(head):], s + 1, COPY)
    return MonotoneMachine(name, stages, table, (FrontierPiece("", BLOCKS),))


def build_totality_machine(q: CanonicalApproximation, stages: int,
                           name: str = "totality") -> MonotoneMachine:
    """At stage ``s+1`` set ``M(σ) = 0^|σ|`` for each ``|σ| <= s`` without a
    prefix in ``q.at(s)``; everything else stays undefined."""
    if stages < 1:
        raise ValueError("stages must be >= 1")
    table = {}
    for s in range(stages):
        qs = q.at(s)
        for n in range(s + 1):
            for sigma in all_strings(n):
                if sigma not in table and not qs.has_prefix_of(sigma):
                    table[sigma] = Entry("0" * n, s + 1, ZEROS)
    return MonotoneMachine(name, stages, table, (FrontierPiece("", LINEAR),))


def cone_restrict(m: MonotoneMachine, rho: BitString,
                  name: Optional[str] = None) -> MonotoneMachine:
    """Send every string compatible with ``rho`` to λ; keep the rest."""
    check_bitstring(rho)
    table = {}
    for sigma, e in m.table.items():
        if compatible(sigma, rho):
            table[sigma] = Entry("", e.stage, CONE_EMPTY)
        else:
            table[sigma] = e
    # frontier strings inside the cone get λ as soon as they are on the frontier
    for s in range(m.horizon + 1):
        for sigma in m.frontier(s):
            if compatible(sigma, rho):
                old = table.get(sigma)
                if old is None or old.stage > s:
                    table[sigma] = Entry("", s, CONE_EMPTY)
    out = MonotoneMachine(name or f"{m.name}|{rho or 'λ'}", m.horizon, table, m.pieces,
                          dict(m.meta))
    bad = monotonicity_violations(out)
    if bad:
        raise MonotonicityBreak(f"restriction to {rho!r} breaks monotonicity at {bad[0]}")
    return out


def splice(e: int, inner: MonotoneMachine, outer: MonotoneMachine,
           name: Optional[str] = None) -> MonotoneMachine:
    """Run ``inner`` on the cone of ``0^e`` and ``outer`` everywhere else."""
    if e < 1:
        raise ValueError("splice exponent must be >= 1")
    cone = "0" * e
    table = {}
    for sigma, entry in outer.table.items():
        if compatible(sigma, cone):
            if entry.output:
                raise ConeNotEmpty(f"outer maps {sigma!r} (compatible with {cone}) "
                                   f"to {entry.output!r}")
            if sigma.startswith(cone):
                continue
        table[sigma] = entry
    for sigma, entry in inner.table.items():
        table[cone + sigma] = entry.tagged(inner.name, cone)
    pieces = tuple(p.cut(cone) for p in outer.pieces) + \
        tuple(p.shifted(cone) for p in inner.pieces)
    return MonotoneMachine(name or f"splice({e},{inner.name},{outer.name})",
                           min(inner.horizon, outer.horizon), table, pieces)


def universal_code(e: int) -> BitString:
    return "0" * e + "1"


def build_universal(machines: Sequence[MonotoneMachine], horizon: Optional[int] = None,
                    name: str = "U") -> MonotoneMachine:
    """Simulate ``machines[e]`` on the cone of ``0^e 1``; the all-zeros cone
    past the last code maps to λ."""
    n = len(machines)
    if horizon is None:
        horizon = min((m.horizon for m in machines), default=0)
    table = {"0" * j: Entry("", 0, CONE_EMPTY) for j in range(n + 1)}
    pieces = []
    for e, m in enumerate(machines):
        code = universal_code(e)
        for sigma, entry in m.table.items():
            table[code + sigma] = entry.tagged(m.name, code)
        pieces.extend(p.shifted(code) for p in m.pieces)
    pieces.append(FrontierPiece("0" * n, POINT))
    return MonotoneMachine(name, horizon, table, tuple(pieces))


# -- machines with a reserved cone and target trace -----------------------

def _resolved_approximation(sets: Sequence[PrefixFreeSet], stages: int,
                            resolution: Callable[[int], int]) -> CanonicalApproximation:
    """``V_t`` = the latest allocation ``sets[j]`` (``j <= t+1``) whose strings
    the consuming machine can resolve when it reads ``V_t``."""
    maxlen = [max((len(x) for x in st), default=0) for st in sets]
    chosen = []
    for t in range(stages):
        best = PrefixFreeSet()
        for j in range(min(t + 1, len(sets) - 1), -1, -1):
            if maxlen[j] <= resolution(t):
                best = sets[j]
                break
        chosen.append(best)
    return CanonicalApproximation.from_sets(chosen, limit=sets[-1], origin="allocation")


def make_machine_cor34(rho: BitString, targets: Sequence[Dyadic],
                       name: str = "cor34") -> MonotoneMachine:
    """Padding machine whose padded-mode measure follows ``targets``, with
    the cone of ``rho`` sent to λ.

    ``targets[s]`` is the wanted measure at machine stage ``s``.  It is
    realized by the allocation read at stage ``s``, once all its strings fit
    inside that stage's frontier; ``meta["realized"]`` records what each
    stage actually carries.
    """
    targets = [Dyadic.of(t) for t in targets]
    stages = len(targets) - 1
    if stages < 1:
        raise ValueError("need targets for at least stages 0 and 1")
    sets = kc_allocate(AllocationRequest(rho, tuple(targets)))
    q = _resolved_approximation(sets, stages, lambda t: (1 << (t + 1)) - 1)
    m = build_padding_machine(q, stages, name=f"{name}-raw")
    out = cone_restrict(m, rho, name=name)
    realized = [Dyadic(0)] + [q.at(t).weight for t in range(stages)]
    out.meta.update(kind="cor34", rho=rho, targets=targets, realized=realized,
                    allocation=sets, approximation=q)
    return out


def make_machine_cor36(rho: BitString, totals: Sequence[Dyadic],
                       name: str = "cor36") -> MonotoneMachine:
    """Totality machine whose TOTAL measure follows ``totals``, with the cone
    of ``rho`` sent to λ.

    The cone takes away ``2**-|rho|`` of totality, so the allocator is asked
    for ``1 - 2**-|rho| - totals[s]``.
    """
    totals = [Dyadic.of(t) for t in totals]
    stages = len(totals) - 1
    if stages < 1:
        raise ValueError("need totals for at least stages 0 and 1")
    room = ONE - Dyadic.power(len(rho))
    for s, b in enumerate(totals):
        if b > room:
            raise TargetOutOfRange(f"stage {s}: total {b} exceeds 1 - 2^-{len(rho)}")
    alloc_targets = tuple(room - b for b in totals)
    sets = kc_allocate(AllocationRequest(rho, alloc_targets))
    q = _resolved_approximation(sets, stages, lambda t: t)
    m = build_totality_machine(q, stages, name=f"{name}-raw")
    out = cone_restrict(m, rho, name=name)
    # while the frontier is shorter than rho it lies inside the cone
    realized = [Dyadic(0)] + [room - q.at(t).weight if t >= len(rho) else Dyadic(0)
                              for t in range(stages)]
    out.meta.update(kind="cor36", rho=rho, targets=totals, realized=realized,
                    allocator_targets=list(alloc_targets), allocation=sets,
                    approximation=q)
    return out

