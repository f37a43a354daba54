from fractions import Fraction

import pytest

from selfadj import Metrics, amortized_summary, fit_growth, gen_sorting_trace, replay
from selfadj.metrics import pow2_bin, summary_csv


def test_fresh_metrics_are_zero():
    m = Metrics()
    assert (m.links, m.comparisons, m.cuts, m.per_op) == (0, 0, 0, [])
    assert m.is_consistent()


def test_summary_of_no_op_row():
    m = Metrics()
    m.add_row("find_min", 0, 0, 0)
    (row,) = amortized_summary(m)
    assert row.mean_links == 0 and row.mean_cmps == 0 and row.count == 1


def test_summary_rejects_empty():
    with pytest.raises(ValueError):
        amortized_summary(Metrics())


def test_pow2_bins():
    assert [pow2_bin(n) for n in (0, 1, 2, 3, 4, 7, 8, 1000)] == [0, 1, 2, 2, 4, 4, 8, 512]


def test_sorting_delete_min_means_positive():
    r = replay(gen_sorting_trace(1 << 8, 1), "pairing", record=False)
    rows = [x for x in amortized_summary(r.metrics) if x.op == "delete_min"]
    assert rows and all(0 < x.mean_links < 100 for x in rows if x.n_bin > 1)
    assert r.metrics.is_consistent()


def test_summary_is_additive():
    a = replay(gen_sorting_trace(100, 1), "slim", record=False).metrics
    b = replay(gen_sorting_trace(60, 2), "smooth", record=False).metrics
    both = a.merge(b)
    assert amortized_summary(both) == amortized_summary(Metrics(per_op=a.per_op + b.per_op))
    assert both.is_consistent()


def test_custom_bins_and_csv():
    m = Metrics()
    for n in (1, 5, 9, 30):
        m.add_row("insert", n, 1, 1)
    rows = amortized_summary(m, bin_edges=[0, 10])
    assert [(r.n_bin, r.count) for r in rows] == [(0, 3), (10, 1)]
    assert summary_csv(rows).splitlines()[0] == "op,n_bin,count,mean_links,mean_cmps"


def test_fit_lg_example():
    f = fit_growth([(8, 3), (64, 6)], "lg")
    assert f.coefficient == 1 and f.max_residual_ratio == 0


def test_fit_const_is_max():
    f = fit_growth([(8, 2), (16, 5), (32, 4)], "const")
    assert f.coefficient == 5 and f.max_residual_ratio == Fraction(3, 5)


def test_fit_rejects_small_n_and_unknown_model():
    with pytest.raises(ValueError):
        fit_growth([(4, 1), (8, 1)], "lg")
    with pytest.raises(ValueError):
        fit_growth([(8, 1), (16, 1)], "cubic")
    with pytest.raises(ValueError):
        fit_growth([(8, 1)], "lg")


def test_slim_comparisons_bounded_by_links():
    t = gen_sorting_trace(500, 3)
    for v in ("slim", "smooth"):
        m = replay(t, v, record=False).metrics
        other = sum(1 for r in m.per_op if r.kind == "insert")
        assert m.comparisons <= 2 * m.links + other
