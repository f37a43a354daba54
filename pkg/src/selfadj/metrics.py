"""Link/comparison/cut counters, amortized-cost tables and growth envelopes."""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple


class OpCost(NamedTuple):
    kind: str
    n: int
    links: int
    comparisons: int


_tnew = tuple.__new__


@dataclass
class Metrics:
    links: int = 0
    comparisons: int = 0
    cuts: int = 0
    per_op: List[tuple] = field(default_factory=list)

    def add_row(self, kind: str, n: int, links: int, comparisons: int) -> None:
        self.per_op.append(_tnew(OpCost, (kind, n, links, comparisons)))

    def merge(self, other: "Metrics") -> "Metrics":
        """Combined metrics of two runs; rows of ``self`` come first."""
        return Metrics(self.links + other.links,
                       self.comparisons + other.comparisons,
                       self.cuts + other.cuts,
                       list(self.per_op) + list(other.per_op))

    def is_consistent(self) -> bool:
        return (sum(r[2] for r in self.per_op) == self.links
                and sum(r[3] for r in self.per_op) == self.comparisons)


def pow2_bin(n: int) -> int:
    """Lower edge of the power-of-two bin holding ``n`` (0 for n = 0)."""
    return 0 if n <= 0 else 1 << (n.bit_length() - 1)


class SummaryRow(NamedTuple):
    op: str
    n_bin: int
    count: int
    mean_links: Fraction
    mean_cmps: Fraction


def amortized_summary(m: Metrics, bin_edges: Optional[Sequence[int]] = None) -> List[SummaryRow]:
    """Mean links and comparisons per operation kind and heap-size bin."""
    if not m.per_op:
        raise ValueError("no operations recorded")
    if bin_edges is not None:
        edges = sorted(bin_edges)
        if not edges:
            raise ValueError("empty bin_edges")

        def binner(n):
            return edges[max(bisect_right(edges, n) - 1, 0)]
    else:
        binner = pow2_bin
    acc: Dict[Tuple[str, int], List[int]] = {}
    for kind, n, links, cmps in m.per_op:
        slot = acc.get((kind, binner(n)))
        if slot is None:
            acc[(kind, binner(n))] = [1, links, cmps]
        else:
            slot[0] += 1
            slot[1] += links
            slot[2] += cmps
    return [SummaryRow(kind, b, c, Fraction(sl, c), Fraction(sc, c))
            for (kind, b), (c, sl, sc) in sorted(acc.items())]


def _fmt(x) -> str:
    return f"{float(x):.6g}"


def summary_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["op", "n_bin", "count", "mean_links", "mean_cmps"])
    for r in rows:
        w.writerow([r.op, r.n_bin, r.count, _fmt(r.mean_links), _fmt(r.mean_cmps)])
    return buf.getvalue()


def _lg(n):
    return math.log2(n)


# Exact for powers of two, which is what the benchmarks use.
def _exact_lg(n: int):
    if n > 0 and n & (n - 1) == 0:
        return Fraction(n.bit_length() - 1)
    return Fraction(math.log2(n))


MODELS = {
    "const": lambda n: Fraction(1),
    "lg": _exact_lg,
    "lglg": lambda n: Fraction(math.log2(math.log2(n))),
    "lg_lglglg": lambda n: Fraction(math.log2(math.log2(n)) * math.log2(math.log2(math.log2(n)))),
}

MIN_FIT_N = 8


@dataclass(frozen=True)
class GrowthFit:
    """Envelope fit ``cost <= coefficient * model(n)`` over all points.

    ``max_residual_ratio`` is the largest relative gap between the envelope
    and an observation, ``1 - min(cost/model) / coefficient``; 0 means every
    point lies on the envelope.
    """

    model: str
    coefficient: Fraction
    max_residual_ratio: Fraction

    def __str__(self):
        return (f"{self.model}: c={float(self.coefficient):.4f} "
                f"gap={float(self.max_residual_ratio):.4f}")


def model_value(model: str, n: int) -> Fraction:
    try:
        return MODELS[model](n)
    except KeyError:
        raise ValueError(f"unknown growth model {model!r}") from None


def fit_growth(points: Sequence[Tuple[int, object]], model: str) -> GrowthFit:
    if model not in MODELS:
        raise ValueError(f"unknown growth model {model!r}")
    if len(points) < 2:
        raise ValueError("need at least two points")
    ratios = []
    for n, cost in points:
        if n < MIN_FIT_N:
            raise ValueError(f"point n={n} below the minimum n={MIN_FIT_N}")
        ratios.append(Fraction(cost) / model_value(model, n))
    c = max(ratios)
    gap = Fraction(0) if c == 0 else 1 - min(ratios) / c
    return GrowthFit(model, c, gap)
