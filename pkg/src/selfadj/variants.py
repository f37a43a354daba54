"""Delete-min consolidation disciplines.

Each routine takes the root list left to right as arena slots, links it down
to one root and returns ``(root, comparisons, pass_links)``.  Links never
compare the two roots again: the routine has already decided the winner, so
the only comparisons counted are the ones made while scanning.
"""

from __future__ import annotations

import enum
from typing import List, Sequence, Tuple

from .core import Arena, ConsolidationRecord, ItemId


class Variant(str, enum.Enum):
    PAIRING = "pairing"
    MULTIPASS = "multipass"
    SLIM = "slim"
    SMOOTH = "smooth"

    def __str__(self):
        return self.value


VARIANTS = tuple(Variant)


class Placement(str, enum.Enum):
    ONE_SIDED = "one_sided"
    STABLE = "stable"


def _pairing_pass(a: Arena, roots: List[int], context: str, pass_index: int,
                  out: List[int]) -> int:
    key, join = a.key, a._join
    n = len(roots)
    for i in range(0, n - 1, 2):
        x, y = roots[i], roots[i + 1]
        if key[y] < key[x]:
            join(y, x, False, "left", context, pass_index)
            out.append(y)
        else:
            join(x, y, False, "right", context, pass_index)
            out.append(x)
    if n & 1:
        out.append(roots[-1])
    return n // 2


def _two_pass(a: Arena, roots: List[int]) -> Tuple[int, int, tuple]:
    paired: List[int] = []
    first = _pairing_pass(a, roots, "pass", 1, paired)
    key, join = a.key, a._join
    cur = paired.pop()
    # assembly: rightmost root against its left neighbour, the left one winning ties
    while paired:
        x = paired.pop()
        if key[cur] < key[x]:
            join(cur, x, False, "left", "assembly", 0)
        else:
            join(x, cur, False, "right", "assembly", 0)
            cur = x
    return cur, len(roots) - 1, (first, len(roots) - 1 - first)


def _multipass(a: Arena, roots: List[int]) -> Tuple[int, int, tuple]:
    pass_links = []
    cur = list(roots)
    i = 0
    while len(cur) > 1:
        i += 1
        nxt: List[int] = []
        pass_links.append(_pairing_pass(a, cur, "pass", i, nxt))
        cur = nxt
    return cur[0], len(roots) - 1, tuple(pass_links)


def _locally_max(a: Arena, roots: List[int], stable: bool) -> Tuple[int, int, tuple]:
    # Roots left of the scan position sit on a stack in strictly increasing key
    # order, so the current root always beats its left neighbour and a single
    # comparison with the right neighbour decides whether it is a local maximum.
    key, join = a.key, a._join
    stack: List[int] = []
    cmps = 0
    for x in roots:
        if stack:
            kx = key[x]
            cmps += 1
            if key[stack[-1]] >= kx:
                while True:
                    v = stack.pop()
                    if stack:
                        u = stack[-1]
                        cmps += 1
                        if key[u] >= kx:
                            join(u, v, stable, "right", "local_max")
                            # u >= x is already known, so u is the next local maximum
                            continue
                    join(x, v, False, "left", "local_max")
                    break
        stack.append(x)
    # the right dummy root makes the tail a run of local maxima
    while len(stack) > 1:
        v = stack.pop()
        join(stack[-1], v, stable, "right", "local_max")
    return stack[0], cmps, ()


def _slim(a, roots):
    return _locally_max(a, roots, False)


def _smooth(a, roots):
    return _locally_max(a, roots, True)


_ROUTINES = {
    Variant.PAIRING: _two_pass,
    Variant.MULTIPASS: _multipass,
    Variant.SLIM: _slim,
    Variant.SMOOTH: _smooth,
}


def consolidate(a: Arena, roots: List[int], variant: Variant, n_old_roots: int = 0) -> int:
    """Link detached roots down to one; counts links and comparisons."""
    if len(roots) == 1:
        if a.record:
            a.consolidations.append(ConsolidationRecord(
                a.op_seq, variant.value, (a.handle(roots[0]),), (a.key[roots[0]],),
                len(a.link_log), 0, 0, (), n_old_roots))
        return roots[0]
    first_link = len(a.link_log)
    root, cmps, pass_links = _ROUTINES[variant](a, roots)
    m = a.metrics
    m.links += len(roots) - 1
    m.comparisons += cmps
    if a.record:
        gen, key = a.gen, a.key
        a.consolidations.append(ConsolidationRecord(
            a.op_seq, variant.value,
            tuple(ItemId(r, gen[r]) for r in roots), tuple(key[r] for r in roots),
            first_link, len(roots) - 1, cmps, pass_links, n_old_roots))
    return root


def _run(a: Arena, roots: Sequence[ItemId], variant: Variant) -> ItemId:
    if not roots:
        raise ValueError("empty root list")
    idx = [a.index(r) for r in roots]
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate root in root list")
    for i, r in zip(idx, roots):
        a._check_free_root(i, r)
        if a.key[i] is None:
            raise ValueError("bottom key in a root list")
    a.op_seq += 1
    links0, cmps0 = a.metrics.links, a.metrics.comparisons
    root = consolidate(a, idx, variant)
    a.metrics.add_row("consolidate", len(idx), a.metrics.links - links0,
                      a.metrics.comparisons - cmps0)
    return a.handle(root)


def two_pass_consolidate(a: Arena, roots: Sequence[ItemId]) -> ItemId:
    """Pairing pass over adjacent pairs, then right-to-left assembly."""
    return _run(a, roots, Variant.PAIRING)


def multipass_consolidate(a: Arena, roots: Sequence[ItemId]) -> ItemId:
    """Repeated pairing passes until one root is left."""
    return _run(a, roots, Variant.MULTIPASS)


def locally_max_consolidate(a: Arena, roots: Sequence[ItemId],
                            placement: Placement = Placement.ONE_SIDED) -> ItemId:
    """Leftmost locally maximum linking; ``stable`` placement gives smooth heaps."""
    placement = Placement(placement)
    variant = Variant.SMOOTH if placement is Placement.STABLE else Variant.SLIM
    return _run(a, roots, variant)
