"""Brute-force reference implementations used as test oracles.

Nothing here imports the package's construction code.  Values are
``fractions.Fraction`` and strings are enumerated with ``itertools``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product


def strings(n):
    return ["".join(p) for p in product("01", repeat=n)]


def weight(family):
    return sum((Fraction(1, 2 ** len(x)) for x in family), Fraction(0))


def frac(d):
    """Dyadic -> Fraction via its text form only."""
    num, _, k = str(d).partition("/2^")
    return Fraction(int(num), 2 ** int(k))


def comparable(a, b):
    return a.startswith(b) or b.startswith(a)


def prefix_free(family):
    family = list(family)
    return all(not comparable(a, b) for i, a in enumerate(family) for b in family[i + 1:])


def covered(sigma, family):
    return any(sigma.startswith(x) for x in family)


def minimal(family):
    family = set(family)
    return {x for x in family if not any(y != x and x.startswith(y) for y in family)}


def cylinder_union_at(family, n):
    """Strings of length ``n`` lying in the union of the cylinders."""
    return {x for x in strings(n) if covered(x, family)}


# -- mock worlds --------------------------------------------------------------

def oracle_at(events, s):
    return {n for t, n in events if t <= s}


def true_stages_by_definition(events):
    """``s`` is true when the number ``n`` entering at ``s`` has
    ``H_s ∩ [0, n] == H ∩ [0, n]``."""
    final = oracle_at(events, max((t for t, _ in events), default=0))
    out = set()
    for s, n in events:
        now = oracle_at(events, s)
        if {m for m in now if m <= n} == {m for m in final if m <= n}:
            out.add(s)
    return out


def hat_by_definition(axioms, events, s):
    """``axioms`` are tuples ``(string, in, out, appearance)``."""
    oracle = oracle_at(events, s)
    fresh = {n for t, n in events if t == s}
    out = set()
    for string, req_in, req_out, appear in axioms:
        nums = set(req_in) | set(req_out)
        use = 1 + max(nums) if nums else 0
        if appear > s:
            continue
        if not (set(req_in) <= oracle and not (set(req_out) & oracle)):
            continue
        if any(n < use for n in fresh):
            continue
        out.add(string)
    return out


def canonical_by_definition(axioms, events, horizon):
    return [minimal({x for x in hat_by_definition(axioms, events, s) if len(x) < s})
            for s in range(horizon + 1)]


# -- machines -----------------------------------------------------------------

def padding_output(q_sets, sigma):
    """Output of the padding machine on a string of length ``2**k - 1``.

    Block ``t`` covers positions ``[2**t - 1, 2**(t+1) - 1)``; it is zeros when
    the string up to the end of the block has a prefix in ``q_sets[t]``."""
    out = ""
    t = 0
    while (1 << (t + 1)) - 1 <= len(sigma):
        lo, hi = (1 << t) - 1, (1 << (t + 1)) - 1
        q = q_sets[min(t, len(q_sets) - 1)]
        out += "0" * (hi - lo) if covered(sigma[:hi], q) else sigma[lo:hi]
        t += 1
    return out


def padding_padded_last(q_sets, sigma):
    t = len(sigma).bit_length() - 1
    return covered(sigma, q_sets[min(t, len(q_sets) - 1)])


def totality_defined_by(q_sets, sigma, stage):
    """Is ``sigma`` defined by ``stage``: some ``s < stage`` with
    ``|sigma| <= s`` and no prefix in ``q_sets[s]``."""
    for s in range(len(sigma), stage):
        if not covered(sigma, q_sets[min(s, len(q_sets) - 1)]):
            return True
    return False


def ml_member_by_enumeration(s, phi):
    """All strings of length ``2**(s+1)-1`` matching ``phi`` on the last block."""
    n = (1 << (s + 1)) - 1
    lo = (1 << s) - 1
    if len(phi) < n or any(v is None for v in phi[:n]):
        return set()
    return {x for x in strings(n) if all(int(x[i]) == phi[i] for i in range(lo, n))}
