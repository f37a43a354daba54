"""Operation traces: generation, a line-oriented text format, and replay.

Trace text, one operation per line::

    H            make-heap (next heap label)
    I h i k      insert key k into heap h as item i (next item label)
    F h          find-min
    D h          delete-min
    M h1 h2      meld, the result keeps label h1
    K h i k      decrease-key
    X h i        delete

``#`` starts a comment.  Two structured comments, ``#@ seed <n>`` and
``#@ meta <json>``, carry the generator seed and parameters so that a trace
survives a round trip through text unchanged.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

from .core import INT64_MAX, INT64_MIN, Arena, ItemId
from .heap import Heap, LazyHeap
from .metrics import Metrics
from .variants import Variant


class OpRecord(NamedTuple):
    code: str
    heap: Optional[int] = None
    item: Optional[int] = None
    key: Optional[int] = None
    heap2: Optional[int] = None

    def to_line(self) -> str:
        c = self.code
        if c == "H":
            return "H"
        if c in ("F", "D"):
            return f"{c} {self.heap}"
        if c == "M":
            return f"M {self.heap} {self.heap2}"
        if c in ("I", "K"):
            return f"{c} {self.heap} {self.item} {self.key}"
        if c == "X":
            return f"X {self.heap} {self.item}"
        raise ValueError(f"unknown op code {c!r}")


def make_heap_op():
    return OpRecord("H")


def insert_op(h, i, k):
    return OpRecord("I", h, i, k)


def find_min_op(h):
    return OpRecord("F", h)


def delete_min_op(h):
    return OpRecord("D", h)


def meld_op(h1, h2):
    return OpRecord("M", h1, heap2=h2)


def decrease_key_op(h, i, k):
    return OpRecord("K", h, i, k)


def delete_op(h, i):
    return OpRecord("X", h, i)


@dataclass
class Trace:
    ops: List[OpRecord] = field(default_factory=list)
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.ops)

    def counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for op in self.ops:
            out[op.code] = out.get(op.code, 0) + 1
        return out


class TraceError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


class TraceSyntaxError(TraceError):
    pass


class TraceSemanticError(TraceError):
    pass


# -- model state -------------------------------------------------------------

DEAD, LIVE, AMBIGUOUS = 0, 1, 2


class _HeapModel:
    __slots__ = ("label", "entries", "by_key", "labels")

    def __init__(self, label: int):
        self.label = label
        self.entries: List[Tuple[int, int]] = []
        self.by_key: Dict[int, Set[int]] = {}
        self.labels: Set[int] = set()


class TraceState:
    """What a well-formed trace knows about its heaps at each step.

    When a delete-min removes a key that other items of the same heap share,
    the model cannot tell which of them a real heap removed.  Those other
    items become *ambiguous*: still counted in the heap, but no later
    decrease-key or delete may name them.
    """

    def __init__(self):
        self.heaps: List[Optional[_HeapModel]] = []
        self._item_model: List[_HeapModel] = []
        self.item_key: List[int] = []
        self.status: List[int] = []

    def _heap(self, h) -> _HeapModel:
        if not isinstance(h, int) or not 0 <= h < len(self.heaps) or self.heaps[h] is None:
            raise TraceSemanticError(f"heap {h} does not exist or was melded away")
        return self.heaps[h]

    def _item(self, h: int, i) -> None:
        if not isinstance(i, int) or not 0 <= i < len(self.status):
            raise TraceSemanticError(f"item {i} does not exist")
        st = self.status[i]
        if st == DEAD:
            raise TraceSemanticError(f"item {i} was deleted")
        if st == AMBIGUOUS:
            raise TraceSemanticError(f"item {i} is indistinguishable from a deleted item of equal key")
        if self._item_model[i].label != h:
            raise TraceSemanticError(f"item {i} is in heap {self._item_model[i].label}, not {h}")

    def item_heap(self, i: int) -> int:
        return self._item_model[i].label

    def heap_size(self, h: int) -> int:
        return len(self.heaps[h].labels)

    def make_heap(self) -> int:
        self.heaps.append(_HeapModel(len(self.heaps)))
        return len(self.heaps) - 1

    def insert(self, h: int, i: int, k: int) -> None:
        hm = self._heap(h)
        if i != len(self.status):
            raise TraceSemanticError(f"item label {i} out of sequence (expected {len(self.status)})")
        _check_key(k)
        self._item_model.append(hm)
        self.item_key.append(k)
        self.status.append(LIVE)
        heapq.heappush(hm.entries, (k, i))
        hm.by_key.setdefault(k, set()).add(i)
        hm.labels.add(i)

    def find_min(self, h: int) -> Optional[int]:
        hm = self._heap(h)
        top = self._top(hm)
        return None if top is None else top[0]

    def _top(self, hm: _HeapModel):
        entries = hm.entries
        while entries:
            k, i = entries[0]
            if self.status[i] != DEAD and self.item_key[i] == k and i in hm.labels:
                return entries[0]
            heapq.heappop(entries)
        return None

    def delete_min(self, h: int) -> Tuple[int, int, List[int]]:
        """Remove the model's choice of minimum; returns (key, item, newly ambiguous)."""
        hm = self._heap(h)
        top = self._top(hm)
        if top is None:
            raise TraceSemanticError(f"delete-min on empty heap {h}")
        k, i = heapq.heappop(hm.entries)
        self._remove(hm, i)
        newly = [j for j in hm.by_key.get(k, ()) if self.status[j] == LIVE]
        for j in newly:
            self.status[j] = AMBIGUOUS
        return k, i, newly

    def _remove(self, hm: _HeapModel, i: int) -> None:
        k = self.item_key[i]
        bucket = hm.by_key[k]
        bucket.discard(i)
        if not bucket:
            del hm.by_key[k]
        hm.labels.discard(i)
        self.status[i] = DEAD

    def meld(self, h1: int, h2: int) -> None:
        if h1 == h2:
            raise TraceSemanticError(f"heap {h1} melded with itself")
        a, b = self._heap(h1), self._heap(h2)
        if len(a.labels) < len(b.labels):
            a, b = b, a
        for i in b.labels:
            self._item_model[i] = a
        a.label = h1
        a.labels |= b.labels
        for k, s in b.by_key.items():
            a.by_key.setdefault(k, set()).update(s)
        a.entries.extend(b.entries)
        heapq.heapify(a.entries)
        self.heaps[h1] = a
        self.heaps[h2] = None

    def decrease_key(self, h: int, i: int, k: int) -> None:
        hm = self._heap(h)
        self._item(h, i)
        _check_key(k)
        old = self.item_key[i]
        if k > old:
            raise TraceSemanticError(f"decrease-key raises item {i} from {old} to {k}")
        if k == old:
            return
        bucket = hm.by_key[old]
        bucket.discard(i)
        if not bucket:
            del hm.by_key[old]
        hm.by_key.setdefault(k, set()).add(i)
        self.item_key[i] = k
        heapq.heappush(hm.entries, (k, i))

    def delete(self, h: int, i: int) -> None:
        hm = self._heap(h)
        self._item(h, i)
        self._remove(hm, i)

    def apply(self, op: OpRecord) -> None:
        c = op.code
        if c == "H":
            self.make_heap()
        elif c == "I":
            self.insert(op.heap, op.item, op.key)
        elif c == "F":
            self.find_min(op.heap)
        elif c == "D":
            self.delete_min(op.heap)
        elif c == "M":
            self.meld(op.heap, op.heap2)
        elif c == "K":
            self.decrease_key(op.heap, op.item, op.key)
        elif c == "X":
            self.delete(op.heap, op.item)
        else:
            raise TraceSemanticError(f"unknown op code {c!r}")


def _check_key(k) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or not INT64_MIN <= k <= INT64_MAX:
        raise TraceSemanticError(f"key {k!r} is not an int64")


def validate_trace(trace: Trace, lines: Optional[Sequence[int]] = None) -> None:
    """Raise TraceSemanticError at the first ill-formed operation."""
    st = TraceState()
    for n, op in enumerate(trace.ops):
        try:
            st.apply(op)
        except TraceSemanticError as e:
            where = lines[n] if lines is not None else None
            msg = str(e) if where is not None else f"op {n}: {e}"
            raise TraceSemanticError(msg, where) from None


# -- generators --------------------------------------------------------------

OP_NAMES = ("insert", "delete_min", "decrease_key", "meld", "delete", "find_min", "make_heap")


@dataclass
class MixConfig:
    """Operation weights and sizes for :func:`gen_random_trace`."""

    weights: Dict[str, float] = field(default_factory=lambda: {"insert": 1.0})
    n_ops: int = 1000
    n_heaps: int = 1
    key_range: Tuple[int, int] = (0, 1 << 20)
    prefill: int = 0
    distinct: bool = False

    def __post_init__(self):
        unknown = set(self.weights) - set(OP_NAMES)
        if unknown:
            raise ValueError(f"unknown operations in mix: {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be nonnegative")
        if not any(self.weights.values()):
            raise ValueError("infeasible mix: all weights are zero")
        if self.weights.get("insert", 0) <= 0:
            raise ValueError("infeasible mix: insert weight must be positive")
        if self.n_heaps < 1 or self.n_ops < 0 or self.prefill < 0:
            raise ValueError("n_heaps must be >= 1, n_ops and prefill >= 0")
        lo, hi = self.key_range
        if lo > hi or lo < INT64_MIN or hi > INT64_MAX:
            raise ValueError(f"bad key range {self.key_range}")

    @classmethod
    def from_mix(cls, spec: str, **kw) -> "MixConfig":
        """Parse ``i:d:k`` (insert:delete-min:decrease-key weights)."""
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"mix must look like i:d:k, got {spec!r}")
        i, d, k = (float(p) for p in parts)
        return cls(weights={"insert": i, "delete_min": d, "decrease_key": k}, **kw)

    def to_meta(self) -> dict:
        return {"gen": "random", "weights": {k: v for k, v in sorted(self.weights.items()) if v},
                "n_ops": self.n_ops, "n_heaps": self.n_heaps,
                "key_range": list(self.key_range), "prefill": self.prefill,
                "distinct": self.distinct}


class _Pool:
    """Uniform sampling with O(1) add/remove."""

    def __init__(self):
        self.items: List[int] = []
        self.pos: Dict[int, int] = {}

    def add(self, x: int) -> None:
        self.pos[x] = len(self.items)
        self.items.append(x)

    def discard(self, x: int) -> None:
        p = self.pos.pop(x, None)
        if p is None:
            return
        last = self.items.pop()
        if last != x:
            self.items[p] = last
            self.pos[last] = p

    def __len__(self):
        return len(self.items)

    def sample(self, rng: random.Random) -> int:
        return self.items[rng.randrange(len(self.items))]


def gen_random_trace(cfg: MixConfig, seed: int) -> Trace:
    """Seeded random trace; infeasible operations are skipped and the mix renormalized."""
    rng = random.Random(seed)
    st = TraceState()
    ops: List[OpRecord] = []
    heaps: List[int] = []
    targets = _Pool()
    used: Set[int] = set()
    lo, hi = cfg.key_range

    def fresh_key(top: int) -> Optional[int]:
        for _ in range(64):
            k = rng.randint(lo, top)
            if not cfg.distinct or k not in used:
                return k
        return None

    def do_insert(h: int) -> None:
        k = fresh_key(hi)
        if k is None:
            raise ValueError("key range too small for distinct keys")
        i = len(st.status)
        st.insert(h, i, k)
        used.add(k)
        targets.add(i)
        ops.append(insert_op(h, i, k))

    for _ in range(cfg.n_heaps):
        heaps.append(st.make_heap())
        ops.append(make_heap_op())
    for j in range(cfg.prefill):
        do_insert(heaps[j % len(heaps)])

    names = [n for n in OP_NAMES if cfg.weights.get(n, 0) > 0]
    weights = [cfg.weights[n] for n in names]
    for _ in range(cfg.n_ops):
        nonempty = [h for h in heaps if st.heap_size(h) > 0]
        feasible = {
            "insert": True,
            "delete_min": bool(nonempty),
            "decrease_key": len(targets) > 0,
            "meld": len(heaps) >= 2,
            "delete": len(targets) > 0,
            "find_min": True,
            "make_heap": True,
        }
        choice = [(n, w) for n, w in zip(names, weights) if feasible[n]]
        name = rng.choices([n for n, _ in choice], [w for _, w in choice])[0]
        if name == "insert":
            do_insert(heaps[rng.randrange(len(heaps))])
        elif name == "delete_min":
            h = nonempty[rng.randrange(len(nonempty))]
            k, i, newly = st.delete_min(h)
            used.discard(k)
            targets.discard(i)
            for j in newly:
                targets.discard(j)
            ops.append(delete_min_op(h))
        elif name == "decrease_key":
            i = targets.sample(rng)
            h, old = st.item_heap(i), st.item_key[i]
            k = fresh_key(old)
            if k is None:
                k = old
            st.decrease_key(h, i, k)
            used.discard(old)
            used.add(k)
            ops.append(decrease_key_op(h, i, k))
        elif name == "delete":
            i = targets.sample(rng)
            h = st.item_heap(i)
            used.discard(st.item_key[i])
            st.delete(h, i)
            targets.discard(i)
            ops.append(delete_op(h, i))
        elif name == "meld":
            a, b = rng.sample(range(len(heaps)), 2)
            h1, h2 = heaps[a], heaps[b]
            st.meld(h1, h2)
            heaps.remove(h2)
            ops.append(meld_op(h1, h2))
        elif name == "find_min":
            ops.append(find_min_op(heaps[rng.randrange(len(heaps))]))
        else:
            heaps.append(st.make_heap())
            ops.append(make_heap_op())
    return Trace(ops, seed, cfg.to_meta())


def gen_sorting_trace(n: int, seed: int) -> Trace:
    """One heap, inserts of a seeded permutation of 1..n, then n delete-mins."""
    if n < 1:
        raise ValueError("n must be >= 1")
    keys = list(range(1, n + 1))
    random.Random(seed).shuffle(keys)
    ops = [make_heap_op()]
    ops.extend(insert_op(0, i, k) for i, k in enumerate(keys))
    ops.extend(delete_min_op(0) for _ in range(n))
    return Trace(ops, seed, {"gen": "sorting", "n": n})


# -- text format ---------------------------------------------------------------

_ARITY = {"H": 0, "F": 1, "D": 1, "M": 2, "X": 2, "I": 3, "K": 3}


def serialize_trace(trace: Trace) -> str:
    lines = []
    if trace.seed is not None:
        lines.append(f"#@ seed {trace.seed}")
    if trace.meta:
        lines.append("#@ meta " + json.dumps(trace.meta, sort_keys=True, separators=(",", ":")))
    lines.extend(op.to_line() for op in trace.ops)
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise TraceSyntaxError(f"not an integer: {tok!r}", lineno) from None


def parse_trace(text: str, validate: bool = True) -> Trace:
    ops: List[OpRecord] = []
    lines: List[int] = []
    seed = None
    meta: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#@"):
            parts = line[2:].strip().split(None, 1)
            if len(parts) == 2 and parts[0] == "seed":
                seed = _int(parts[1].strip(), lineno)
            elif len(parts) == 2 and parts[0] == "meta":
                try:
                    meta = json.loads(parts[1])
                except json.JSONDecodeError as e:
                    raise TraceSyntaxError(f"bad meta json: {e}", lineno) from None
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        code = toks[0]
        if code not in _ARITY:
            raise TraceSyntaxError(f"unknown op {code!r}", lineno)
        if len(toks) - 1 != _ARITY[code]:
            raise TraceSyntaxError(f"{code} takes {_ARITY[code]} fields, got {len(toks) - 1}", lineno)
        args = [_int(t, lineno) for t in toks[1:]]
        if code == "H":
            op = make_heap_op()
        elif code in ("F", "D"):
            op = OpRecord(code, args[0])
        elif code == "M":
            op = meld_op(args[0], args[1])
        elif code == "X":
            op = delete_op(args[0], args[1])
        else:
            op = OpRecord(code, args[0], args[1], args[2])
        ops.append(op)
        lines.append(lineno)
    trace = Trace(ops, seed, meta)
    if validate:
        validate_trace(trace, lines)
    return trace


# -- replay --------------------------------------------------------------------

class Output(NamedTuple):
    op_index: int
    key: Optional[int]
    item: Optional[int]


@dataclass
class ReplayResult:
    variant: str
    mode: str
    outputs: List[Output]
    metrics: Metrics
    link_log: list
    cut_log: list
    consolidations: list
    items: List[ItemId]
    deleted: List[int]
    arena: Optional[Arena] = field(default=None, repr=False, compare=False)
    heaps: list = field(default_factory=list, repr=False, compare=False)

    def delete_min_keys(self, trace: Trace) -> List[int]:
        return [o.key for o in self.outputs if trace.ops[o.op_index].code == "D"]

    def to_text(self) -> str:
        m = self.metrics
        out = [f"variant {self.variant} mode {self.mode}",
               f"metrics links={m.links} comparisons={m.comparisons} cuts={m.cuts} ops={len(m.per_op)}"]
        out += [f"out {o.op_index} {'NONE' if o.key is None else o.key} "
                f"{'-' if o.item is None else o.item}" for o in self.outputs]
        out += [f"row {r[0]} {r[1]} {r[2]} {r[3]}" for r in m.per_op]
        out += [f"link {r.id} t={r.time} {tuple(r.winner)}>{tuple(r.loser)} {r.side or '-'} "
                f"{r.context}:{r.pass_index} op={r.op}" for r in self.link_log]
        out += [f"cut t={c.time} link={c.link_id} {c.cause}" for c in self.cut_log]
        return "\n".join(out) + "\n"


def replay(trace: Trace, variant: Union[Variant, str] = Variant.PAIRING, mode: str = "eager",
           record: bool = True) -> ReplayResult:
    variant = Variant(variant)
    if mode == "eager":
        cls = Heap
    elif mode == "lazy":
        cls = LazyHeap
    else:
        raise ValueError(f"unknown mode {mode!r}")
    arena = Arena(record)
    heaps: list = []
    items: List[ItemId] = []
    label: Dict[ItemId, int] = {}
    outputs: List[Output] = []
    deleted: List[int] = []
    for idx, op in enumerate(trace.ops):
        c = op.code
        if c == "I":
            it = heaps[op.heap].insert(op.key)
            items.append(it)
            label[it] = op.item
        elif c == "K":
            heaps[op.heap].decrease_key(items[op.item], op.key)
        elif c == "D":
            it, k = heaps[op.heap].delete_min()
            lab = label[it]
            deleted.append(lab)
            outputs.append(Output(idx, k.value, lab))
        elif c == "F":
            h = heaps[op.heap]
            it = h.find_min()
            if it is None:
                outputs.append(Output(idx, None, None))
            else:
                outputs.append(Output(idx, arena.key[it.index], label[it]))
        elif c == "M":
            heaps[op.heap].meld(heaps[op.heap2])
            heaps[op.heap2] = None
        elif c == "X":
            heaps[op.heap].delete(items[op.item])
            deleted.append(op.item)
        elif c == "H":
            heaps.append(cls(arena, variant))
        else:
            raise ValueError(f"unknown op code {c!r}")
    return ReplayResult(variant.value, mode, outputs, arena.metrics, arena.link_log,
                        arena.cut_log, arena.consolidations, items, deleted, arena, heaps)
