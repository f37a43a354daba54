from fractions import Fraction

from selfadj.bench import (CellCost, costs_csv, decrease_key_attribution, fits_csv,
                           mean_costs, powers_of_two, run_bench)


def test_powers_of_two():
    assert powers_of_two(8, 100) == [8, 16, 32, 64]
    assert powers_of_two(10, 16) == [16]


def test_attribution_arithmetic():
    rows = [CellCost("mix:1:1:8", "slim", "eager", 16, 0, "delete_min", 2, 30, 0),
            CellCost("mix:1:1:8", "slim", "eager", 16, 0, "decrease_key", 5, 5, 5),
            CellCost("mix:1:1:8", "slim", "eager", 16, 0, "insert", 3, 3, 3)]
    (a,) = decrease_key_attribution(rows, "slim", Fraction(1, 2))
    # 38 links, minus 2 delete-mins * (1/2) * lg 16
    assert a.per_decrease_key == Fraction(38 - 4, 5)


def test_bench_is_deterministic():
    a = run_bench(["slim"], [16, 32], seed=3, repeats=2, mix="1:1:8")
    b = run_bench(["slim"], [16, 32], seed=3, repeats=2, mix="1:1:8")
    assert costs_csv(a.costs) == costs_csv(b.costs) and fits_csv(a.fits) == fits_csv(b.fits)
    assert [f.fit.model for f in a.fits] == ["lg", "lglg", "lg"]


def test_mean_costs_pool_seeds():
    rows = [CellCost("sorting", "slim", "eager", 8, s, "delete_min", 8, l, 0)
            for s, l in ((0, 16), (1, 32))]
    (m,) = mean_costs(rows)
    assert m.count == 16 and m.mean_links == 3
