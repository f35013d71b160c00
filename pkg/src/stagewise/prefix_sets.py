"""Prefix-free sets of strings stored as persistent binary tries.

Each trie node caches the weight of its subtree, so the weight of the whole
set is read off the root.  Insertion copies only the path to the new leaf;
older versions of a set stay valid, which is what the staged allocator
relies on.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import CapacityExceeded, NonMonotoneTarget, PrefixConflict
from .measure_core import ONE, ZERO, BitString, Dyadic, check_bitstring


class _Node:
    __slots__ = ("marked", "children", "weight")

    def __init__(self, marked=False, children=(None, None), weight=ZERO):
        self.marked = marked
        self.children = children
        self.weight = weight


_EMPTY = _Node()


class PrefixFreeSet:
    """An immutable prefix-free family of bit strings."""

    __slots__ = ("_root", "_size")

    def __init__(self, _root: _Node = _EMPTY, _size: int = 0):
        self._root = _root
        self._size = _size

    @classmethod
    def of(cls, strings: Iterable[BitString]) -> "PrefixFreeSet":
        s = cls()
        for sigma in strings:
            s = s.insert(sigma)
        return s

    # -- queries --------------------------------------------------------
    @property
    def weight(self) -> Dyadic:
        return self._root.weight

    def __len__(self):
        return self._size

    def __iter__(self) -> Iterator[BitString]:
        stack = [(self._root, "")]
        while stack:
            node, path = stack.pop()
            if node.marked:
                yield path
                continue
            # push "1" first so "0" pops first: lexicographic order
            for bit in (1, 0):
                child = node.children[bit]
                if child is not None:
                    stack.append((child, path + str(bit)))

    def members(self) -> list[BitString]:
        return list(self)

    def __contains__(self, sigma: BitString) -> bool:
        node = self._root
        for c in sigma:
            if node.marked:
                return False
            node = node.children[c == "1"]
            if node is None:
                return False
        return node.marked

    def prefix_of(self, sigma: BitString) -> Optional[BitString]:
        """The member that is a prefix of ``sigma``, if any."""
        node = self._root
        for i, c in enumerate(sigma):
            if node.marked:
                return sigma[:i]
            node = node.children[c == "1"]
            if node is None:
                return None
        return sigma if node.marked else None

    def has_prefix_of(self, sigma: BitString) -> bool:
        return self.prefix_of(sigma) is not None

    def compatible_member(self, sigma: BitString) -> Optional[BitString]:
        """Some member compatible with ``sigma``, if any."""
        hit = self.prefix_of(sigma)
        if hit is not None:
            return hit
        node = self._root
        for c in sigma:
            node = node.children[c == "1"]
            if node is None:
                return None
        # some member extends sigma
        for m in PrefixFreeSet(node, 0):
            return sigma + m
        return None

    def __eq__(self, other):
        if not isinstance(other, PrefixFreeSet):
            return NotImplemented
        return self.members() == other.members()

    def __hash__(self):
        return hash(tuple(self))

    def __le__(self, other: "PrefixFreeSet") -> bool:
        return all(m in other for m in self)

    def issubset(self, other: "PrefixFreeSet") -> bool:
        return self <= other

    def __repr__(self):
        return "PrefixFreeSet({%s})" % ", ".join(repr(m) for m in self)

    # -- updates --------------------------------------------------------
    def insert(self, sigma: BitString) -> "PrefixFreeSet":
        check_bitstring(sigma)
        clash = self.compatible_member(sigma)
        if clash is not None:
            raise PrefixConflict(f"{sigma!r} is compatible with member {clash!r}")
        return PrefixFreeSet(_insert(self._root, sigma, 0), self._size + 1)

    def recompute_weight(self) -> Dyadic:
        """Weight summed from the members, ignoring cached values."""
        total = ZERO
        for m in self:
            total = total + Dyadic.power(len(m))
        return total

    def check_cache(self) -> bool:
        """Every cached subtree weight matches its recomputed value."""
        def walk(node, depth):
            if node.marked:
                return node.weight == Dyadic.power(depth)
            expect = ZERO
            for child in node.children:
                if child is not None:
                    if not walk(child, depth + 1):
                        return False
                    expect = expect + child.weight
            return node.weight == expect
        return walk(self._root, 0)

    # -- free-space search ----------------------------------------------
    def least_free(self, length: int,
                   blocked: Sequence[BitString] = ()) -> Optional[BitString]:
        """Lexicographically least string of ``length`` incompatible with
        every member and with every string in ``blocked``."""
        blocked = list(blocked)

        def search(node, path):
            if node is not None and node.marked:
                return None
            if any(path.startswith(b) for b in blocked):
                return None
            clear = not any(b.startswith(path) for b in blocked)
            if len(path) == length:
                return path if node is None and clear else None
            if node is None and clear:
                return path + "0" * (length - len(path))
            for bit in (0, 1):
                child = None if node is None else node.children[bit]
                found = search(child, path + str(bit))
                if found is not None:
                    return found
            return None

        return search(self._root, "")

    # -- text form --------------------------------------------------------
    def to_text(self) -> str:
        return "".join((m if m else "λ") + "\n" for m in sorted(self))

    @classmethod
    def from_text(cls, text: str) -> "PrefixFreeSet":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        return cls.of("" if ln == "λ" else ln for ln in lines)


def _insert(node: _Node, sigma: str, depth: int) -> _Node:
    if depth == len(sigma):
        return _Node(True, (None, None), Dyadic.power(depth))
    bit = sigma[depth] == "1"
    old = node.children[bit] if node is not None else None
    new_child = _insert(old if old is not None else _EMPTY, sigma, depth + 1)
    children = list(node.children)
    children[bit] = new_child
    weight = node.weight + new_child.weight - (old.weight if old is not None else ZERO)
    return _Node(False, tuple(children), weight)


def minimal_strings(strings: Iterable[BitString]) -> PrefixFreeSet:
    """The strings of the input with no proper prefix in the input."""
    ordered = sorted(set(strings), key=lambda s: (len(s), s))
    result = PrefixFreeSet()
    for sigma in ordered:
        if not result.has_prefix_of(sigma):
            result = result.insert(sigma)
    return result


def set_measure(s: PrefixFreeSet) -> Dyadic:
    return s.weight


@dataclass(frozen=True)
class AllocationRequest:
    """Stage targets for a prefix-free set kept out of the cone of ``reserved``."""

    reserved: BitString
    stage_targets: tuple[Dyadic, ...]

    def __post_init__(self):
        check_bitstring(self.reserved)
        object.__setattr__(self, "stage_targets",
                           tuple(Dyadic.of(t) for t in self.stage_targets))

    @property
    def capacity(self) -> Dyadic:
        return ONE - Dyadic.power(len(self.reserved))


def kc_allocate(req: AllocationRequest) -> list[PrefixFreeSet]:
    """Grow a prefix-free set whose weight hits each stage target exactly.

    Returns one set per target; each set extends the previous one.  Each
    increment is split into powers of two, largest first, and every power
    ``2**-k`` takes the lexicographically least free string of length
    ``k``.  When no such string exists the request is split in two halves
    of length ``k + 1``; this always terminates because the free measure
    outside the reserved cone exceeds what is still owed.
    """
    cap = req.capacity
    prev = ZERO
    for t in req.stage_targets:
        if t < 0:
            raise NonMonotoneTarget(f"negative target {t}")
        if t < prev:
            raise NonMonotoneTarget(f"target decreased from {prev} to {t}")
        if t >= cap:
            raise CapacityExceeded(
                f"target {t} is not below 1 - 2^-{len(req.reserved)} = {cap}")
        prev = t

    current = PrefixFreeSet()
    stages = []
    blocked = (req.reserved,)
    for t in req.stage_targets:
        owed = t - current.weight
        pending = owed.binary_powers() if owed else []
        heapq.heapify(pending)
        while pending:
            k = heapq.heappop(pending)
            sigma = current.least_free(k, blocked)
            if sigma is None:
                heapq.heappush(pending, k + 1)
                heapq.heappush(pending, k + 1)
                continue
            current = current.insert(sigma)
        assert current.weight == t
        stages.append(current)
    return stages
