"""Growth sweeps: sorting mode and random mixes over powers of two.

Every cell (variant, n, seed) replays one generated trace with logging off
and keeps only operation counts, so the sweeps stay deterministic for a
given base seed.  Seed ``base + j`` drives the ``j``-th repetition.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence

from .metrics import GrowthFit, fit_growth, model_value
from .trace import MixConfig, gen_random_trace, gen_sorting_trace, replay
from .variants import Variant


class CellCost(NamedTuple):
    workload: str
    variant: str
    mode: str
    n: int
    seed: int
    op: str
    count: int
    links: int
    comparisons: int


def powers_of_two(lo: int, hi: int) -> List[int]:
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range {lo}..{hi}")
    out, n = [], 1
    while n <= hi:
        if n >= lo:
            out.append(n)
        n <<= 1
    return out


def _cell_rows(workload, variant, mode, n, seed, metrics) -> List[CellCost]:
    acc: Dict[str, List[int]] = {}
    for kind, _, links, cmps in metrics.per_op:
        a = acc.setdefault(kind, [0, 0, 0])
        a[0] += 1
        a[1] += links
        a[2] += cmps
    return [CellCost(workload, variant, mode, n, seed, op, c, l, k)
            for op, (c, l, k) in sorted(acc.items())]


def sorting_cells(variants: Iterable, ns: Sequence[int], seed: int, repeats: int,
                  mode: str = "eager") -> List[CellCost]:
    """n inserts of a random permutation, then n delete-mins."""
    rows = []
    for v in variants:
        v = Variant(v).value
        for n in ns:
            for j in range(repeats):
                r = replay(gen_sorting_trace(n, seed + j), v, mode, record=False)
                rows += _cell_rows("sorting", v, mode, n, seed + j, r.metrics)
    return rows


def mix_config(mix: str, n: int) -> MixConfig:
    """Heap prefilled to n distinct keys, then n operations drawn from ``mix``.

    Keys come from a wide range so that repeated decrease-keys do not pile
    items onto equal keys.
    """
    return MixConfig.from_mix(mix, n_ops=n, prefill=n, key_range=(0, 1 << 62), distinct=True)


def mix_cells(variants: Iterable, ns: Sequence[int], mix: str, seed: int, repeats: int,
              mode: str = "eager") -> List[CellCost]:
    rows = []
    for v in variants:
        v = Variant(v).value
        for n in ns:
            cfg = mix_config(mix, n)
            for j in range(repeats):
                r = replay(gen_random_trace(cfg, seed + j), v, mode, record=False)
                rows += _cell_rows("mix:" + mix, v, mode, n, seed + j, r.metrics)
    return rows


@dataclass(frozen=True)
class MeanCost:
    workload: str
    variant: str
    mode: str
    n: int
    op: str
    count: int
    mean_links: Fraction
    mean_cmps: Fraction


def mean_costs(rows: Iterable[CellCost]) -> List[MeanCost]:
    """Pool repetitions: totals over seeds divided by the pooled op count."""
    acc: Dict[tuple, List[int]] = {}
    for r in rows:
        a = acc.setdefault((r.workload, r.variant, r.mode, r.n, r.op), [0, 0, 0])
        a[0] += r.count
        a[1] += r.links
        a[2] += r.comparisons
    return [MeanCost(*k, c, Fraction(l, c), Fraction(m, c))
            for k, (c, l, m) in sorted(acc.items())]


def series(costs: Iterable[MeanCost], workload: str, variant: str, op: str,
           mode: str = "eager") -> List[tuple]:
    """(n, mean links) points for one operation kind, in increasing n."""
    return sorted((c.n, c.mean_links) for c in costs
                  if c.workload == workload and c.variant == variant
                  and c.op == op and c.mode == mode)


class Attribution(NamedTuple):
    n: int
    total_links: int
    delete_mins: int
    decrease_keys: int
    per_decrease_key: Fraction


def decrease_key_attribution(rows: Iterable[CellCost], variant: str, delete_min_coef,
                             mode: str = "eager") -> List[Attribution]:
    """Links per decrease-key once delete-mins are charged ``c * lg n`` each.

    ``delete_min_coef`` is the lg envelope coefficient of delete-min cost
    measured without decrease-keys (the sorting sweep); everything the
    delete-mins did beyond that baseline is charged to the decrease-keys,
    along with the links done by the operations themselves.
    """
    c = Fraction(delete_min_coef)
    acc: Dict[int, List[int]] = {}
    for r in rows:
        if r.variant != variant or r.mode != mode or not r.workload.startswith("mix:"):
            continue
        a = acc.setdefault(r.n, [0, 0, 0])
        a[0] += r.links
        if r.op == "delete_min":
            a[1] += r.count
        elif r.op == "decrease_key":
            a[2] += r.count
    out = []
    for n, (links, d, k) in sorted(acc.items()):
        if k == 0:
            raise ValueError(f"no decrease-keys at n={n}")
        out.append(Attribution(n, links, d, k, (links - c * model_value("lg", n) * d) / k))
    return out


class FitRow(NamedTuple):
    workload: str
    variant: str
    mode: str
    quantity: str
    fit: GrowthFit


def fit_series(workload, variant, mode, quantity, points, models=("lg",)) -> List[FitRow]:
    return [FitRow(workload, variant, mode, quantity, fit_growth(points, m)) for m in models]


def _fmt(x) -> str:
    return f"{float(x):.6g}"


def costs_csv(costs: Iterable[MeanCost]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["workload", "variant", "mode", "n", "op", "count", "mean_links", "mean_cmps"])
    for c in costs:
        w.writerow([c.workload, c.variant, c.mode, c.n, c.op, c.count,
                    _fmt(c.mean_links), _fmt(c.mean_cmps)])
    return buf.getvalue()


def fits_csv(fits: Iterable[FitRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["workload", "variant", "mode", "quantity", "model", "coefficient",
                "max_residual_ratio"])
    for f in fits:
        w.writerow([f.workload, f.variant, f.mode, f.quantity, f.fit.model,
                    _fmt(f.fit.coefficient), _fmt(f.fit.max_residual_ratio)])
    return buf.getvalue()


def attribution_csv(mode: str, attribution: Dict[str, List[Attribution]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["variant", "mode", "n", "total_links", "delete_mins", "decrease_keys",
                "links_per_decrease_key"])
    for variant, rows in attribution.items():
        for a in rows:
            w.writerow([variant, mode, a.n, a.total_links, a.delete_mins, a.decrease_keys,
                        _fmt(a.per_decrease_key)])
    return buf.getvalue()


@dataclass
class BenchReport:
    costs: List[MeanCost]
    fits: List[FitRow]
    attribution: Dict[str, List[Attribution]]


def run_bench(variants: Sequence, ns: Sequence[int], seed: int, repeats: int,
              mode: str = "eager", mix: Optional[str] = None) -> BenchReport:
    """Sorting sweep with lg fits of delete-min links, plus an optional mix sweep.

    With a mix, each variant also gets its per-decrease-key attribution and
    that series' lglg and lg fits.
    """
    variants = [Variant(v).value for v in variants]
    rows = sorting_cells(variants, ns, seed, repeats, mode)
    if mix is not None:
        rows += mix_cells(variants, ns, mix, seed, repeats, mode)
    costs = mean_costs(rows)
    fits: List[FitRow] = []
    attribution: Dict[str, List[Attribution]] = {}
    for v in variants:
        pts = series(costs, "sorting", v, "delete_min", mode)
        sort_fit = fit_series("sorting", v, mode, "delete_min_links", pts)
        fits += sort_fit
        if mix is None:
            continue
        attr = decrease_key_attribution(rows, v, sort_fit[0].fit.coefficient, mode)
        attribution[v] = attr
        fits += fit_series("mix:" + mix, v, mode, "decrease_key_links",
                           [(a.n, a.per_decrease_key) for a in attr], ("lglg", "lg"))
    return BenchReport(costs, fits, attribution)
