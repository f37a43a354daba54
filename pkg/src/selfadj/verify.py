"""Ground-truth oracle, structural checkers and post-hoc link classification.

Nothing here touches the heap code paths it checks: the oracle keeps plain
sorted lists, and the lemma checks work from the logs a replay leaves behind.
"""

from __future__ import annotations

import bisect
import heapq
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .core import NIL, ConsolidationRecord, ItemId, LinkRecord
from .heap import Heap, LazyHeap
from .trace import Output, ReplayResult, Trace, TraceSemanticError
from .variants import Variant

# -- oracle ------------------------------------------------------------------


def oracle_replay(trace: Trace) -> List[Output]:
    """Replay against one sorted multiset per heap label.

    Ties on delete-min go to the smallest item label.  Raises
    TraceSemanticError on the same ill-formed traces the parser rejects.
    """
    heaps: List[Optional[list]] = []
    where: Dict[int, int] = {}
    keys: Dict[int, int] = {}
    ambiguous = set()
    n_items = 0
    out: List[Output] = []

    def heap(h):
        if not isinstance(h, int) or not 0 <= h < len(heaps) or heaps[h] is None:
            raise TraceSemanticError(f"op {idx}: heap {h} is not live")
        return heaps[h]

    def item(h, i):
        if i not in where:
            raise TraceSemanticError(f"op {idx}: item {i} is not live")
        if i in ambiguous:
            raise TraceSemanticError(f"op {idx}: item {i} is ambiguous after a tied delete-min")
        if where[i] != h:
            raise TraceSemanticError(f"op {idx}: item {i} is not in heap {h}")

    for idx, op in enumerate(trace.ops):
        c = op.code
        if c == "H":
            heaps.append([])
        elif c == "I":
            lst = heap(op.heap)
            if op.item != n_items:
                raise TraceSemanticError(f"op {idx}: item label {op.item} out of sequence")
            n_items += 1
            bisect.insort(lst, (op.key, op.item))
            where[op.item] = op.heap
            keys[op.item] = op.key
        elif c == "F":
            lst = heap(op.heap)
            out.append(Output(idx, lst[0][0], lst[0][1]) if lst else Output(idx, None, None))
        elif c == "D":
            lst = heap(op.heap)
            if not lst:
                raise TraceSemanticError(f"op {idx}: delete-min on empty heap {op.heap}")
            k, i = lst.pop(0)
            del where[i], keys[i]
            ambiguous.discard(i)
            j = 0
            while j < len(lst) and lst[j][0] == k:
                ambiguous.add(lst[j][1])
                j += 1
            out.append(Output(idx, k, i))
        elif c == "M":
            if op.heap == op.heap2:
                raise TraceSemanticError(f"op {idx}: self-meld")
            a, b = heap(op.heap), heap(op.heap2)
            for _, i in b:
                where[i] = op.heap
            heaps[op.heap] = list(heapq.merge(a, b))
            heaps[op.heap2] = None
        elif c == "K":
            lst = heap(op.heap)
            item(op.heap, op.item)
            old = keys[op.item]
            if op.key > old:
                raise TraceSemanticError(f"op {idx}: key increase on item {op.item}")
            lst.pop(bisect.bisect_left(lst, (old, op.item)))
            bisect.insort(lst, (op.key, op.item))
            keys[op.item] = op.key
        elif c == "X":
            lst = heap(op.heap)
            item(op.heap, op.item)
            lst.pop(bisect.bisect_left(lst, (keys[op.item], op.item)))
            del where[op.item], keys[op.item]
        else:
            raise TraceSemanticError(f"op {idx}: unknown op {c!r}")
    return out


# -- structural checks -------------------------------------------------------


class OrderViolation(NamedTuple):
    kind: str  # "edge" (parent above child) or "min_root" (lazy ring)
    upper: ItemId
    lower: ItemId
    upper_key: Optional[int]
    lower_key: Optional[int]


def _le(a: Optional[int], b: Optional[int]) -> bool:
    if a is None:
        return True
    if b is None:
        return False
    return a <= b


def _walk(arena, roots: Iterable[int]):
    stack = list(roots)
    while stack:
        v = stack.pop()
        yield v
        c = arena.first[v]
        while c != NIL:
            stack.append(c)
            c = arena.next[c]


def _root_slots(h) -> List[int]:
    return [r.index for r in h.roots()]


def check_heap_order(h) -> List[OrderViolation]:
    """Every parent/child pair whose keys are out of order."""
    a = h.arena
    key = a.key
    bad = []
    roots = _root_slots(h)
    for v in _walk(a, roots):
        c = a.first[v]
        while c != NIL:
            if not _le(key[v], key[c]):
                bad.append(OrderViolation("edge", a.handle(v), a.handle(c), key[v], key[c]))
            c = a.next[c]
    if isinstance(h, LazyHeap) and roots:
        m = h.min_root
        for r in roots:
            if not _le(key[m], key[r]):
                bad.append(OrderViolation("min_root", a.handle(m), a.handle(r), key[m], key[r]))
    return bad


def check_structure(h) -> List[str]:
    """Pointer consistency of child lists, root shape and size."""
    a = h.arena
    bad = []
    roots = _root_slots(h)
    if isinstance(h, Heap) and roots:
        r = roots[0]
        if a.parent[r] != NIL or a.prev[r] != NIL or a.next[r] != NIL:
            bad.append(f"root {a.handle(r)} has a parent or siblings")
    if isinstance(h, LazyHeap):
        for r in roots:
            if a.parent[r] != NIL:
                bad.append(f"ring member {a.handle(r)} has a parent")
            if a.prev[a.next[r]] != r:
                bad.append(f"ring broken after {a.handle(r)}")
    count = 0
    for v in _walk(a, roots):
        count += 1
        if not a.live[v]:
            bad.append(f"dead slot {v} reachable")
        c, prev = a.first[v], NIL
        while c != NIL:
            if a.parent[c] != v:
                bad.append(f"child {a.handle(c)} names parent {a.parent[c]}, not {v}")
            if a.prev[c] != prev:
                bad.append(f"child {a.handle(c)} has a bad prev pointer")
            prev, c = c, a.next[c]
        if a.last[v] != prev:
            bad.append(f"last_child of {a.handle(v)} disagrees with its sibling chain")
    if count != h.size:
        bad.append(f"size {h.size} but {count} reachable nodes")
    return bad


def check_child_order(h, variant) -> List[str]:
    """Sibling order by link time.

    Smooth heaps keep leftmost-placed children latest-first followed by
    rightmost-placed children earliest-first; every other variant keeps all
    children latest-first.
    """
    variant = Variant(variant)
    a = h.arena
    bad = []
    for v in _walk(a, _root_slots(h)):
        kids = a._children(v)
        left = [c for c in kids if not a.placed_right[c]]
        right = [c for c in kids if a.placed_right[c]]
        if variant is not Variant.SMOOTH and right:
            bad.append(f"{a.handle(v)}: rightmost-placed child under {variant.value}")
        if kids != left + right:
            bad.append(f"{a.handle(v)}: leftmost- and rightmost-placed children interleave")
        lt = [a.link_time[c] for c in left]
        rt = [a.link_time[c] for c in right]
        if any(x <= y for x, y in zip(lt, lt[1:])):
            bad.append(f"{a.handle(v)}: left children not in decreasing link time {lt}")
        if any(x >= y for x, y in zip(rt, rt[1:])):
            bad.append(f"{a.handle(v)}: right children not in increasing link time {rt}")
    return bad


# -- classification ----------------------------------------------------------


class ClassificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LinkClass:
    direction: str  # left | right | insertion | decrease_key
    fate: str  # key_link | delete_link | final_link
    reality: str  # real | phantom
    quality: Optional[str]  # good | bad, only for left/right links


@dataclass(frozen=True)
class NodeClass:
    temporary: bool


@dataclass
class Classification:
    links: List[LinkClass]
    nodes: List[NodeClass]
    label_of: Dict[ItemId, int]

    def count(self, **want) -> int:
        return sum(1 for c in self.links if all(getattr(c, k) == v for k, v in want.items()))


_DIRECTION = {"insert": "insertion", "meld": "insertion", "decrease_key": "decrease_key"}
_FATE = {"decrease_key": "key_link", "delete_min": "delete_link"}


def classify(trace: Trace, r: ReplayResult) -> Classification:
    """Assign every logged link its direction, fate, reality and quality."""
    label_of = {it: lab for lab, it in enumerate(r.items)}
    temporary = set(r.deleted)
    if len(temporary) != len(r.deleted):
        raise ClassificationError("an item was deleted twice")
    fate: Dict[int, str] = {}
    for c in r.cut_log:
        if not 0 <= c.link_id < len(r.link_log):
            raise ClassificationError(f"cut of unknown link {c.link_id}")
        if c.link_id in fate:
            raise ClassificationError(f"link {c.link_id} cut twice")
        if c.cause not in _FATE:
            raise ClassificationError(f"cut with cause {c.cause!r} inside a trace")
        if r.link_log[c.link_id].time >= c.time:
            raise ClassificationError(f"link {c.link_id} cut before it was made")
        fate[c.link_id] = _FATE[c.cause]
    links = []
    for rec in r.link_log:
        if rec.side in ("left", "right"):
            direction = rec.side
        elif rec.context in _DIRECTION:
            direction = _DIRECTION[rec.context]
        else:
            raise ClassificationError(f"link {rec.id} has context {rec.context!r}")
        try:
            w_temp = label_of[rec.winner] in temporary
            l_temp = label_of[rec.loser] in temporary
        except KeyError:
            raise ClassificationError(f"link {rec.id} joins an unknown item") from None
        f = fate.get(rec.id, "final_link")
        reality = "real" if (w_temp and l_temp and f == "delete_link") else "phantom"
        quality = None
        if direction in ("left", "right"):
            quality = "good" if (l_temp or not w_temp) else "bad"
        links.append(LinkClass(direction, f, reality, quality))
    nodes = [NodeClass(lab in temporary) for lab in range(len(r.items))]
    return Classification(links, nodes, label_of)


# -- treaps ------------------------------------------------------------------


class TreapError(ValueError):
    pass


@dataclass
class Treap:
    """Binary tree of one delete-min's links over root-list positions."""

    nodes: Tuple[ItemId, ...]
    keys: Tuple[int, ...]
    parent: List[int]
    left: List[int]
    right: List[int]
    root: int

    def __len__(self):
        return len(self.nodes)

    def inorder(self) -> List[int]:
        out, stack, v = [], [], self.root
        while stack or v != -1:
            while v != -1:
                stack.append(v)
                v = self.left[v]
            v = stack.pop()
            out.append(v)
            v = self.right[v]
        return out

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] != -1:
            v = self.parent[v]
            d += 1
        return d


def build_treap(cons: ConsolidationRecord, link_log: Sequence[LinkRecord]) -> Treap:
    """Rebuild the treap of a locally-maximum consolidation from its link log."""
    r = len(cons.roots)
    pos = {it: p for p, it in enumerate(cons.roots)}
    parent, left, right = [-1] * r, [-1] * r, [-1] * r
    for rec in link_log[cons.first_link:cons.first_link + cons.n_links]:
        try:
            w, l = pos[rec.winner], pos[rec.loser]
        except KeyError:
            raise TreapError(f"link {rec.id} is not between roots of this delete-min") from None
        if parent[l] != -1:
            raise TreapError(f"position {l} lost two links")
        if rec.side == "left":
            if l > w:
                raise TreapError(f"left link {rec.id} has its loser on the right")
            if left[w] != -1:
                raise TreapError(f"position {w} won two left links")
            left[w] = l
        elif rec.side == "right":
            if l < w:
                raise TreapError(f"right link {rec.id} has its loser on the left")
            if right[w] != -1:
                raise TreapError(f"position {w} won two right links")
            right[w] = l
        else:
            raise TreapError(f"link {rec.id} is neither left nor right")
        parent[l] = w
    roots = [p for p in range(r) if parent[p] == -1]
    if len(roots) != 1:
        raise TreapError(f"{len(roots)} treap roots")
    t = Treap(tuple(cons.roots), tuple(cons.keys), parent, left, right, roots[0])
    if t.inorder() != list(range(r)):
        raise TreapError("symmetric order differs from root-list order")
    for c in range(r):
        p = parent[c]
        if p != -1 and t.keys[p] > t.keys[c]:
            raise TreapError(f"heap order fails between positions {p} and {c}")
    return t


def lowest_crossing_link(t: Treap, x: int) -> Tuple[int, int]:
    """The link a boundary's crossing chain must end with.

    It is x's right link if x has a right child.  Otherwise x is the
    rightmost node of the left subtree of its symmetric-order successor, and
    the chain ends with the link into that subtree; this is the link x lost
    exactly when x is a left child.
    """
    if t.right[x] != -1:
        return x, t.right[x]
    v = x
    while t.parent[v] != -1 and t.right[t.parent[v]] == v:
        v = t.parent[v]
    return t.parent[v], v


def check_boundary_alternation(t: Treap, literal_lowest: bool = False) -> List[str]:
    """For each boundary, the crossing links form one alternating chain.

    The boundary of position x separates positions <= x from those > x.  The
    crossing links must lie on the path from the root down to x (or to x's
    right child), alternate left/right along it, and end with
    :func:`lowest_crossing_link`.  With ``literal_lowest`` the last link is
    instead required to be x's right link or, lacking one, the link x lost;
    that stronger form fails whenever x is a right child with no right child
    of its own (root list 5 6 7 1 at the boundary of 7, for instance).
    """
    bad = []
    r = len(t)
    edges = [(t.parent[c], c) for c in range(r) if t.parent[c] != -1]
    for x in range(r - 1):
        crossing = [(p, c) for p, c in edges if min(p, c) <= x < max(p, c)]
        if not crossing:
            bad.append(f"boundary {x}: no crossing link")
            continue
        target = t.right[x] if t.right[x] != -1 else x
        on_path = set()
        v = target
        while t.parent[v] != -1:
            on_path.add((t.parent[v], v))
            v = t.parent[v]
        off = [e for e in crossing if e not in on_path]
        if off:
            bad.append(f"boundary {x}: crossing links {off} off the path to {target}")
            continue
        crossing.sort(key=lambda e: t.depth(e[1]))
        dirs = ["left" if c < p else "right" for p, c in crossing]
        if any(d1 == d2 for d1, d2 in zip(dirs, dirs[1:])):
            bad.append(f"boundary {x}: crossing directions {dirs} do not alternate")
        lowest = crossing[-1]
        if literal_lowest:
            expected = (x, t.right[x]) if t.right[x] != -1 else (t.parent[x], x)
        else:
            expected = lowest_crossing_link(t, x)
        if lowest != expected:
            bad.append(f"boundary {x}: lowest crossing link {lowest}, expected {expected}")
    return bad


# -- lemma checks ------------------------------------------------------------


@dataclass
class LemmaResult:
    id: str
    checked: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, msg: str) -> None:
        self.violations.append(msg)

    def line(self) -> str:
        if self.passed:
            return f"LEMMA {self.id} PASS checked={self.checked}"
        return (f"LEMMA {self.id} FAIL violations={len(self.violations)} "
                f"checked={self.checked} first: {self.violations[0]}")


@dataclass
class LemmaReport:
    variant: str
    mode: str
    results: List[LemmaResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def get(self, lemma_id: str) -> LemmaResult:
        for r in self.results:
            if r.id == lemma_id:
                return r
        raise KeyError(lemma_id)

    def lines(self) -> List[str]:
        return [r.line() for r in self.results]

    def render(self) -> str:
        head = f"lemma report: variant={self.variant} mode={self.mode}"
        return "\n".join([head] + ["  " + ln for ln in self.lines()]) + "\n"


def pass_halving_violations(pass_links: Sequence[int], n_roots: int) -> List[str]:
    """Exact per-pass link counts and the remaining-links halving bound."""
    bad = []
    k = n_roots - 1
    remaining_roots = n_roots
    done = 0
    for i, got in enumerate(pass_links, 1):
        if got != remaining_roots // 2:
            bad.append(f"pass {i}: {got} links with {remaining_roots} roots")
        remaining_roots -= got
        done += got
        if (k - done) * 2 ** i > k:
            bad.append(f"after pass {i}: {k - done} of {k} links remain")
    if done != k:
        bad.append(f"passes did {done} links, expected {k}")
    return bad


def win_limit_violations(links: Sequence[LinkRecord]) -> List[str]:
    wins = Counter((rec.winner, rec.side) for rec in links)
    return [f"{w} won {n} {side} links" for (w, side), n in wins.items() if n > 1]


def check_lemmas(trace: Trace, r: ReplayResult, variant=None,
                 classification: Optional[Classification] = None,
                 treaps: bool = True) -> LemmaReport:
    """Check the operational lemmas that apply to ``variant`` on one replay.

    ``treaps=False`` skips rebuilding each consolidation's treap, which is
    the slowest check; the boundary-alternation line is then left out.
    """
    variant = Variant(variant if variant is not None else r.variant)
    cls = classification if classification is not None else classify(trace, r)
    counts = trace.counts()
    inserts = counts.get("I", 0)
    delete_mins = counts.get("D", 0) + counts.get("X", 0)
    log = r.link_log
    local_max = variant in (Variant.SLIM, Variant.SMOOTH)
    results = []

    ins = LemmaResult("insertion-links", 1)
    n_ins = cls.count(direction="insertion")
    if n_ins > inserts:
        ins.fail(f"{n_ins} insertion links > {inserts} insertions")
    results.append(ins)

    fin = LemmaResult("final-links", 1)
    n_fin = cls.count(fate="final_link")
    if n_fin + delete_mins > inserts:
        fin.fail(f"{n_fin} final links + {delete_mins} delete-mins > {inserts} insertions")
    results.append(fin)

    halving = LemmaResult("pass-halving")
    good = LemmaResult("good-links")
    wins = LemmaResult("win-limit")
    budget = LemmaResult("comparison-budget")
    alternation = LemmaResult("boundary-alternation")
    bound = (lambda k: Fraction(k, 2) - 1) if variant is Variant.MULTIPASS \
        else (lambda k: Fraction(k, 3) - Fraction(2, 3))
    for cons in r.consolidations:
        k = cons.n_links
        span = range(cons.first_link, cons.first_link + k)
        if variant is Variant.MULTIPASS:
            halving.checked += 1
            for msg in pass_halving_violations(cons.pass_links, len(cons.roots)):
                halving.fail(f"op {cons.op}: {msg}")
        if variant is Variant.PAIRING:
            continue
        good.checked += 1
        n_good = sum(1 for j in span if cls.links[j].quality == "good")
        if Fraction(n_good) < bound(k):
            good.fail(f"op {cons.op}: {n_good} good of {k} links")
        if local_max:
            recs = log[cons.first_link:cons.first_link + k]
            wins.checked += 1
            for msg in win_limit_violations(recs):
                wins.fail(f"op {cons.op}: {msg}")
            budget.checked += 1
            if cons.comparisons > 2 * k:
                budget.fail(f"op {cons.op}: {cons.comparisons} comparisons for {k} links")
            if k and treaps:
                alternation.checked += 1
                try:
                    t = build_treap(cons, log)
                except TreapError as e:
                    alternation.fail(f"op {cons.op}: treap: {e}")
                    continue
                for msg in check_boundary_alternation(t):
                    alternation.fail(f"op {cons.op}: {msg}")
    if variant is Variant.MULTIPASS:
        results += [halving, good]
    elif local_max:
        results += [wins, good, budget] + ([alternation] if treaps else [])
    return LemmaReport(variant.value, r.mode, results)


def outputs_match(trace: Trace, got: Sequence[Output], want: Sequence[Output],
                  identity: bool = False) -> bool:
    """Compare replay outputs by key, and by item too when ``identity``."""
    if len(got) != len(want):
        return False
    for g, w in zip(got, want):
        if g.op_index != w.op_index or g.key != w.key:
            return False
        if identity and g.item != w.item:
            return False
    return True
