"""Eager (single tree) and lazy (forest) heaps over a shared :class:`Arena`."""

from __future__ import annotations

from typing import Iterator, List, Optional, Tuple, Union

from .core import (NIL, Arena, BottomKeyError, ConsumedHeapError, EmptyHeapError,
                   ExtKey, ItemId, KeyIncreaseError, KeyLike, SelfMeldError, ext_key,
                   raw_key)
from .variants import Variant, consolidate


def _insert_key(key: KeyLike) -> int:
    k = raw_key(key)
    if k is None:
        raise BottomKeyError("the bottom key is reserved for delete")
    return k


class _HeapBase:
    mode = ""

    def __init__(self, arena: Optional[Arena] = None, variant: Union[Variant, str] = Variant.PAIRING):
        self.arena = arena if arena is not None else Arena()
        self.variant = Variant(variant)
        self.size = 0
        self._consumed = False

    def __len__(self):
        return self.size

    def _alive(self) -> Arena:
        if self._consumed:
            raise ConsumedHeapError("heap was melded into another heap")
        return self.arena

    def _check_meld(self, other) -> None:
        if other is self:
            raise SelfMeldError("cannot meld a heap with itself")
        other._alive()
        if type(other) is not type(self):
            raise TypeError("cannot meld an eager heap with a lazy one")
        if other.arena is not self.arena:
            raise ValueError("heaps live in different arenas")
        if other.variant is not self.variant:
            raise ValueError("heaps use different variants")

    def _new_key(self, i: int, key: KeyLike) -> Optional[int]:
        k = raw_key(key)
        old = self.arena.key[i]
        if old is None:
            if k is not None:
                raise KeyIncreaseError("cannot raise a bottom key")
        elif k is not None and k > old:
            raise KeyIncreaseError(f"new key {k} exceeds current key {old}")
        return k

    def delete(self, item: ItemId) -> None:
        """Decrease ``item`` to the bottom key, then delete-min."""
        a = self._alive()
        a.index(item)
        n0, links0, cmps0 = self.size, a.metrics.links, a.metrics.comparisons
        a.op_seq += 1
        self._decrease(a.index(item), None)
        self._delete_min()
        a.metrics.add_row("delete", n0, a.metrics.links - links0, a.metrics.comparisons - cmps0)

    def delete_min(self) -> Tuple[ItemId, ExtKey]:
        """Remove a minimum item; returns its (now stale) handle and its key."""
        a = self._alive()
        if self.size == 0:
            raise EmptyHeapError("delete-min on an empty heap")
        m = a.metrics
        n0, links0, cmps0 = self.size, m.links, m.comparisons
        a.op_seq += 1
        i = self._min_index()
        handle, key = a.handle(i), ext_key(a.key[i])
        self._delete_min()
        m.add_row("delete_min", n0, m.links - links0, m.comparisons - cmps0)
        return handle, key

    def decrease_key(self, item: ItemId, key: KeyLike) -> None:
        a = self._alive()
        i = a.index(item)
        k = self._new_key(i, key)
        n0, links0, cmps0 = self.size, a.metrics.links, a.metrics.comparisons
        a.op_seq += 1
        self._decrease(i, k)
        a.metrics.add_row("decrease_key", n0, a.metrics.links - links0, a.metrics.comparisons - cmps0)

    def insert(self, key: KeyLike, value=None) -> ItemId:
        if self._consumed:
            self._alive()
        a = self.arena
        k = _insert_key(key)
        m = a.metrics
        n0, links0, cmps0 = self.size, m.links, m.comparisons
        a.op_seq += 1
        i = a._new(k, value)
        self._insert(i)
        self.size = n0 + 1
        m.add_row("insert", n0, m.links - links0, m.comparisons - cmps0)
        return a.handle(i)

    def meld(self, other: "_HeapBase") -> "_HeapBase":
        """Absorb ``other`` into this heap; ``other`` is unusable afterwards."""
        a = self._alive()
        self._check_meld(other)
        n0, links0, cmps0 = self.size + other.size, a.metrics.links, a.metrics.comparisons
        a.op_seq += 1
        self._meld(other)
        self.size += other.size
        other.size = 0
        other._consumed = True
        a.metrics.add_row("meld", n0, a.metrics.links - links0, a.metrics.comparisons - cmps0)
        return self

    def find_min(self) -> Optional[ItemId]:
        a = self._alive()
        a.op_seq += 1
        a.metrics.add_row("find_min", self.size, 0, 0)
        return None if self.size == 0 else a.handle(self._min_index())

    def roots(self) -> List[ItemId]:
        a = self.arena
        return [a.handle(r) for r in self._root_slots()]

    def items(self) -> Iterator[ItemId]:
        """Every item in the heap, in preorder over the trees."""
        a = self.arena
        stack = list(reversed(self._root_slots()))
        while stack:
            i = stack.pop()
            yield a.handle(i)
            stack.extend(reversed(a._children(i)))


class Heap(_HeapBase):
    """Eager heap: one heap-ordered tree, all linking done as operations occur."""

    mode = "eager"

    def __init__(self, arena=None, variant=Variant.PAIRING):
        super().__init__(arena, variant)
        self.root = NIL

    def _min_index(self) -> int:
        return self.root

    def _root_slots(self) -> List[int]:
        return [] if self.root == NIL else [self.root]

    def _insert(self, i: int) -> None:
        if self.root == NIL:
            self.root = i
        else:
            self.root = self.arena._link_cmp(self.root, i, "insert")

    def _meld(self, other: "Heap") -> None:
        if other.root == NIL:
            return
        if self.root == NIL:
            self.root = other.root
        else:
            self.root = self.arena._link_cmp(self.root, other.root, "meld")
        other.root = NIL

    def _decrease(self, i: int, k: Optional[int]) -> None:
        a = self.arena
        a.key[i] = k
        if i != self.root:
            a._cut(i, "decrease_key")
            self.root = a._link_cmp(i, self.root, "decrease_key")

    def _delete_min(self) -> None:
        a = self.arena
        r = self.root
        kids = a._detach_children(r)
        a._release(r)
        self.size -= 1
        self.root = consolidate(a, kids, self.variant) if kids else NIL


class LazyHeap(_HeapBase):
    """Lazy heap: a ring of roots with a designated min-root.

    The ring reuses the sibling pointers of the roots.  Read from just after
    the min-root around to the min-root itself, it gives the root-list order
    a delete-min sees, so the min-root is always rightmost.
    """

    mode = "lazy"

    def __init__(self, arena=None, variant=Variant.PAIRING):
        super().__init__(arena, variant)
        self.min_root = NIL

    def _min_index(self) -> int:
        return self.min_root

    def _root_slots(self) -> List[int]:
        m = self.min_root
        if m == NIL:
            return []
        nxt = self.arena.next
        out = []
        r = nxt[m]
        while r != m:
            out.append(r)
            r = nxt[r]
        out.append(m)
        return out

    def _less(self, i: int, j: int) -> bool:
        """Strict key order; only value-vs-value comparisons are counted."""
        key = self.arena.key
        ki, kj = key[i], key[j]
        if ki is None:
            return kj is not None
        if kj is None:
            return False
        self.arena.metrics.comparisons += 1
        return ki < kj

    def _add_root(self, i: int) -> None:
        a = self.arena
        m = self.min_root
        if m == NIL:
            a.prev[i] = a.next[i] = i
            self.min_root = i
            return
        p = a.prev[m]
        a.prev[i], a.next[i] = p, m
        a.next[p] = i
        a.prev[m] = i
        if self._less(i, m):
            self.min_root = i

    def _insert(self, i: int) -> None:
        self._add_root(i)

    def _meld(self, other: "LazyHeap") -> None:
        m2 = other.min_root
        if m2 == NIL:
            return
        other.min_root = NIL
        m1 = self.min_root
        if m1 == NIL:
            self.min_root = m2
            return
        a = self.arena
        f1, f2 = a.next[m1], a.next[m2]
        a.next[m1], a.prev[f2] = f2, m1
        a.next[m2], a.prev[f1] = f1, m2
        if self._less(m2, m1):
            self.min_root = m2

    def _decrease(self, i: int, k: Optional[int]) -> None:
        a = self.arena
        a.key[i] = k
        if a.parent[i] != NIL:
            a._cut(i, "decrease_key")
            self._add_root(i)
        elif i != self.min_root and self._less(i, self.min_root):
            self.min_root = i

    def _delete_min(self) -> None:
        a = self.arena
        m = self.min_root
        old = self._root_slots()
        old.pop()
        for r in old:
            a.prev[r] = a.next[r] = NIL
        a.prev[m] = a.next[m] = NIL
        roots = old + a._detach_children(m)
        a._release(m)
        self.size -= 1
        if not roots:
            self.min_root = NIL
            return
        r = consolidate(a, roots, self.variant, n_old_roots=len(old))
        a.prev[r] = a.next[r] = r
        self.min_root = r


def make_heap(variant: Union[Variant, str] = Variant.PAIRING, mode: str = "eager",
              arena: Optional[Arena] = None) -> _HeapBase:
    if mode == "eager":
        return Heap(arena, variant)
    if mode == "lazy":
        return LazyHeap(arena, variant)
    raise ValueError(f"unknown mode {mode!r}")
