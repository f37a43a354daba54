"""Node arena, handles and the link/cut primitives shared by every heap variant.

Nodes are stored struct-of-arrays style: each field is a Python list indexed
by slot number, with ``NIL`` (-1) standing in for a missing pointer.  Callers
never see slot numbers; they hold :class:`ItemId` handles that carry a
generation counter so a handle to a deleted node is rejected even after its
slot has been reused.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Union

from .metrics import Metrics

NIL = -1
INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


class HeapError(Exception):
    """Base class for misuse of a heap or of the arena primitives."""


class StaleHandleError(HeapError, LookupError):
    pass


class NotARootError(HeapError):
    pass


class AlreadyRootError(HeapError):
    pass


class EmptyHeapError(HeapError, IndexError):
    pass


class KeyIncreaseError(HeapError, ValueError):
    pass


class BottomKeyError(HeapError, ValueError):
    pass


class SelfMeldError(HeapError, ValueError):
    pass


class ConsumedHeapError(HeapError):
    """Raised when a heap is used after being melded into another."""


@functools.total_ordering
@dataclass(frozen=True)
class ExtKey:
    """An int64 key, or the bottom element that is below every key."""

    kind: str
    value: Optional[int] = None

    def __post_init__(self):
        if self.kind == "bottom":
            if self.value is not None:
                raise ValueError("bottom key carries no value")
        elif self.kind == "value":
            if not isinstance(self.value, int) or isinstance(self.value, bool):
                raise TypeError("key value must be an int")
            if not INT64_MIN <= self.value <= INT64_MAX:
                raise OverflowError(f"key {self.value} outside the int64 range")
        else:
            raise ValueError(f"unknown key kind {self.kind!r}")

    @classmethod
    def of(cls, value: int) -> "ExtKey":
        return cls("value", value)

    @classmethod
    def bottom(cls) -> "ExtKey":
        return BOTTOM

    @property
    def is_bottom(self) -> bool:
        return self.kind == "bottom"

    def __lt__(self, other):
        if not isinstance(other, ExtKey):
            return NotImplemented
        if self.kind == "bottom":
            return other.kind != "bottom"
        if other.kind == "bottom":
            return False
        return self.value < other.value

    def __repr__(self):
        return "ExtKey(⊥)" if self.kind == "bottom" else f"ExtKey({self.value})"


BOTTOM = ExtKey("bottom")

KeyLike = Union[int, ExtKey]


def raw_key(key: KeyLike) -> Optional[int]:
    """Convert to the arena's internal key form (``None`` is bottom)."""
    if type(key) is int and INT64_MIN <= key <= INT64_MAX:
        return key
    if isinstance(key, ExtKey):
        return key.value
    return ExtKey.of(key).value


_setattr = object.__setattr__


def ext_key(raw: Optional[int]) -> ExtKey:
    """Wrap an internal key, which is already known to be valid."""
    if raw is None:
        return BOTTOM
    k = object.__new__(ExtKey)
    _setattr(k, "kind", "value")
    _setattr(k, "value", raw)
    return k


class ItemId(NamedTuple):
    index: int
    generation: int


class Side(enum.Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


class LinkRecord(NamedTuple):
    id: int
    time: int
    winner: ItemId
    loser: ItemId
    # "left"/"right" for delete-min links, None otherwise
    side: Optional[str]
    # insert | meld | decrease_key | pass | assembly | local_max | manual
    context: str
    pass_index: int
    op: int


class CutRecord(NamedTuple):
    time: int
    link_id: int
    cause: str


class ConsolidationRecord(NamedTuple):
    op: int
    variant: str
    roots: tuple
    keys: tuple
    first_link: int
    n_links: int
    comparisons: int
    pass_links: tuple
    n_old_roots: int


_tnew = tuple.__new__


class Arena:
    """Storage for heap nodes plus the link, cut and consolidation logs.

    Every heap that may ever be melded with another must live in the same
    arena.  ``record=False`` keeps the counters but drops the per-event logs,
    which is what the benchmarks use.
    """

    def __init__(self, record: bool = True):
        self.record = record
        self.key: List[Optional[int]] = []
        self.value: list = []
        self.parent: List[int] = []
        self.prev: List[int] = []
        self.next: List[int] = []
        self.first: List[int] = []
        self.last: List[int] = []
        self.link_time: List[int] = []
        self.placed_right: List[bool] = []
        self.plink: List[int] = []
        self.gen: List[int] = []
        self.live: List[bool] = []
        self._free: List[int] = []
        self.clock = 0
        self.op_seq = 0
        self.metrics = Metrics()
        self.link_log: List[LinkRecord] = []
        self.cut_log: List[CutRecord] = []
        self.consolidations: List[ConsolidationRecord] = []

    # -- handles -----------------------------------------------------------

    def handle(self, i: int) -> ItemId:
        return _tnew(ItemId, (i, self.gen[i]))

    def index(self, item: ItemId) -> int:
        """Slot of a live handle; raises StaleHandleError otherwise."""
        try:
            i, g = item
        except (TypeError, ValueError):
            raise TypeError(f"not an ItemId: {item!r}") from None
        if not 0 <= i < len(self.gen) or self.gen[i] != g or not self.live[i]:
            raise StaleHandleError(f"stale or foreign handle {item!r}")
        return i

    def is_live(self, item: ItemId) -> bool:
        i, g = item
        return 0 <= i < len(self.gen) and self.gen[i] == g and self.live[i]

    def key_of(self, item: ItemId) -> ExtKey:
        return ext_key(self.key[self.index(item)])

    def value_of(self, item: ItemId):
        return self.value[self.index(item)]

    def parent_of(self, item: ItemId) -> Optional[ItemId]:
        p = self.parent[self.index(item)]
        return None if p == NIL else self.handle(p)

    def children(self, item: ItemId) -> List[ItemId]:
        return [self.handle(c) for c in self._children(self.index(item))]

    def link_time_of(self, item: ItemId) -> Optional[int]:
        t = self.link_time[self.index(item)]
        return None if t == NIL else t

    def _children(self, i: int) -> List[int]:
        out = []
        c = self.first[i]
        nxt = self.next
        while c != NIL:
            out.append(c)
            c = nxt[c]
        return out

    # -- allocation --------------------------------------------------------

    def _new(self, key: Optional[int], value=None) -> int:
        if self._free:
            i = self._free.pop()
            self.key[i] = key
            self.value[i] = value
            self.parent[i] = self.prev[i] = self.next[i] = NIL
            self.first[i] = self.last[i] = NIL
            self.link_time[i] = NIL
            self.placed_right[i] = False
            self.plink[i] = NIL
            self.live[i] = True
            return i
        self.key.append(key)
        self.value.append(value)
        self.parent.append(NIL)
        self.prev.append(NIL)
        self.next.append(NIL)
        self.first.append(NIL)
        self.last.append(NIL)
        self.link_time.append(NIL)
        self.plink.append(NIL)
        self.placed_right.append(False)
        self.gen.append(0)
        self.live.append(True)
        return len(self.key) - 1

    def _release(self, i: int) -> None:
        self.live[i] = False
        self.gen[i] += 1
        self.value[i] = None
        self._free.append(i)

    def add_node(self, key: KeyLike, value=None) -> ItemId:
        """Create a detached one-node tree (for building fixtures by hand)."""
        return self.handle(self._new(raw_key(key), value))

    # -- primitives --------------------------------------------------------

    def _join(self, w: int, loser: int, place_right: bool, side, context: str,
              pass_index: int = 0) -> None:
        """Make root ``loser`` a child of ``w`` at the chosen end.  No comparison."""
        self.clock += 1
        t = self.clock
        self.parent[loser] = w
        if place_right:
            last = self.last[w]
            self.prev[loser] = last
            self.next[loser] = NIL
            if last == NIL:
                self.first[w] = loser
            else:
                self.next[last] = loser
            self.last[w] = loser
        else:
            first = self.first[w]
            self.next[loser] = first
            self.prev[loser] = NIL
            if first == NIL:
                self.last[w] = loser
            else:
                self.prev[first] = loser
            self.first[w] = loser
        self.link_time[loser] = t
        self.placed_right[loser] = place_right
        if self.record:
            log = self.link_log
            lid = len(log)
            self.plink[loser] = lid
            gen = self.gen
            # tuple.__new__ skips the namedtuple constructor; this runs once per link
            log.append(_tnew(LinkRecord, (lid, t, _tnew(ItemId, (w, gen[w])),
                                          _tnew(ItemId, (loser, gen[loser])),
                                          side, context, pass_index, self.op_seq)))

    def _link_cmp(self, a: int, b: int, context: str) -> int:
        """Leftmost link of two roots, ``a`` winning ties; counts one comparison."""
        key = self.key
        ka, kb = key[a], key[b]
        if ka is None:
            w, loser = a, b
        elif kb is None:
            w, loser = b, a
        else:
            self.metrics.comparisons += 1
            if kb < ka:
                w, loser = b, a
            else:
                w, loser = a, b
        self.metrics.links += 1
        self._join(w, loser, False, None, context)
        return w

    def _cut(self, w: int, cause: str) -> None:
        p = self.parent[w]
        prv, nxt = self.prev[w], self.next[w]
        if prv == NIL:
            self.first[p] = nxt
        else:
            self.next[prv] = nxt
        if nxt == NIL:
            self.last[p] = prv
        else:
            self.prev[nxt] = prv
        self.parent[w] = self.prev[w] = self.next[w] = NIL
        self.clock += 1
        self.metrics.cuts += 1
        if self.record:
            self.cut_log.append(_tnew(CutRecord, (self.clock, self.plink[w], cause)))
            self.plink[w] = NIL

    def _detach_children(self, r: int, cause: str = "delete_min") -> List[int]:
        """Cut every child of ``r``; returns them in child-list order."""
        kids = []
        c = self.first[r]
        parent, prev, nxt, plink = self.parent, self.prev, self.next, self.plink
        record = self.record
        while c != NIL:
            kids.append(c)
            n = nxt[c]
            parent[c] = prev[c] = nxt[c] = NIL
            self.clock += 1
            if record:
                self.cut_log.append(_tnew(CutRecord, (self.clock, plink[c], cause)))
                plink[c] = NIL
            c = n
        self.first[r] = self.last[r] = NIL
        self.metrics.cuts += len(kids)
        return kids

    def _check_free_root(self, i: int, item) -> None:
        if self.parent[i] != NIL or self.prev[i] != NIL or self.next[i] != NIL:
            raise NotARootError(f"{item!r} is not a detached root")

    def link(self, a: ItemId, b: ItemId, loser_side: Side = Side.LEFTMOST) -> ItemId:
        """Link two detached roots; the smaller key wins and ``a`` wins ties.

        The loser goes to ``loser_side`` of the winner's child list.  Counts one
        comparison unless a bottom key decides the link.
        """
        ia, ib = self.index(a), self.index(b)
        if ia == ib:
            raise NotARootError("cannot link a node with itself")
        self._check_free_root(ia, a)
        self._check_free_root(ib, b)
        self.op_seq += 1
        links0, cmps0 = self.metrics.links, self.metrics.comparisons
        ka, kb = self.key[ia], self.key[ib]
        if ka is None or (kb is not None and ka <= kb):
            w, loser = ia, ib
        else:
            w, loser = ib, ia
        if ka is not None and kb is not None:
            self.metrics.comparisons += 1
        self.metrics.links += 1
        self._join(w, loser, loser_side is Side.RIGHTMOST, None, "manual")
        self.metrics.add_row("link", 0, self.metrics.links - links0,
                             self.metrics.comparisons - cmps0)
        return self.handle(w)

    def cut(self, w: ItemId, cause: str = "manual") -> None:
        """Detach ``w`` (with its subtree) from its parent."""
        i = self.index(w)
        if self.parent[i] == NIL:
            raise AlreadyRootError(f"{w!r} has no parent")
        self.op_seq += 1
        self._cut(i, cause)
        self.metrics.add_row("cut", 0, 0, 0)
