import itertools
from fractions import Fraction

import pytest

from selfadj import Arena, Heap, Side, Trace, Variant, gen_sorting_trace, replay
from selfadj.trace import (TraceSemanticError, decrease_key_op, delete_min_op, insert_op,
                           make_heap_op)
from selfadj.variants import consolidate
from selfadj.verify import (build_treap, check_boundary_alternation, check_child_order,
                            check_heap_order, check_lemmas, classify, oracle_replay,
                            outputs_match, pass_halving_violations, win_limit_violations)


def hand_trace():
    return Trace([make_heap_op(), insert_op(0, 0, 5), insert_op(0, 1, 2),
                  decrease_key_op(0, 0, 1), delete_min_op(0), delete_min_op(0)])


def test_oracle_sorting():
    t = gen_sorting_trace(10, 2)
    assert [o.key for o in oracle_replay(t)] == list(range(1, 11))


def test_oracle_hand_trace():
    assert [o.key for o in oracle_replay(hand_trace())] == [1, 2]


def test_oracle_rejects_bad_traces():
    with pytest.raises(TraceSemanticError):
        oracle_replay(Trace([make_heap_op(), delete_min_op(0)]))


def test_outputs_match_detects_difference():
    t = gen_sorting_trace(20, 1)
    want = oracle_replay(t)
    got = replay(t, "pairing").outputs
    assert outputs_match(t, got, want, identity=True)
    assert not outputs_match(t, got[:-1], want)
    assert not outputs_match(t, got[::-1], want)


def test_heap_order_checker():
    h = Heap()
    h.insert(5)
    child = h.insert(7)
    assert check_heap_order(h) == []
    h.arena.key[child.index] = 3
    bad = check_heap_order(h)
    assert len(bad) == 1 and bad[0].lower == child and (bad[0].upper_key, bad[0].lower_key) == (5, 3)
    assert check_heap_order(Heap()) == []


def test_classify_final_insertion_link():
    t = Trace([make_heap_op(), insert_op(0, 0, 1), insert_op(0, 1, 2)])
    cls = classify(t, replay(t, "pairing"))
    assert [(c.direction, c.fate, c.reality) for c in cls.links] == [
        ("insertion", "final_link", "phantom")]


def test_classify_key_link():
    t = hand_trace()
    r = replay(t, "pairing")
    cls = classify(t, r)
    assert cls.links[0].direction == "insertion" and cls.links[0].fate == "key_link"
    assert all(n.temporary for n in cls.nodes)


def test_classify_sorting_has_no_final_links():
    t = gen_sorting_trace(64, 3)
    for v in Variant:
        cls = classify(t, replay(t, v))
        assert cls.count(fate="final_link") == 0
        assert all((c.quality is None) == (c.direction not in ("left", "right"))
                   for c in cls.links)


def test_pass_halving():
    assert pass_halving_violations((2, 1, 1), 5) == []
    assert pass_halving_violations((1, 2, 1), 5)
    assert pass_halving_violations((2, 1), 5)


def test_insertion_link_lemma():
    t = Trace([make_heap_op()] + [insert_op(0, i, i) for i in range(10)])
    r = replay(t, "slim")
    assert classify(t, r).count(direction="insertion") == 9
    assert check_lemmas(t, r).passed


def one_consolidation(keys, variant=Variant.SLIM):
    a = Arena()
    idx = [a.index(a.add_node(k)) for k in keys]
    consolidate(a, idx, variant)
    return a


def test_win_limit_example():
    a = one_consolidation([2, 5, 3])
    assert win_limit_violations(a.link_log) == []
    winners = [(a.key[r.winner.index], r.side) for r in a.link_log]
    assert winners == [(3, "left"), (2, "right")]


def test_treap_of_small_list():
    a = one_consolidation([2, 5, 3])
    t = build_treap(a.consolidations[-1], a.link_log)
    assert t.root == 0 and t.right[0] == 2 and t.left[2] == 1
    assert check_boundary_alternation(t) == []
    a = one_consolidation([1, 2])
    t = build_treap(a.consolidations[-1], a.link_log)
    assert check_boundary_alternation(t) == []


def crossings(t, x):
    return [(t.parent[c], c) for c in range(len(t)) if t.parent[c] != -1
            and min(t.parent[c], c) <= x < max(t.parent[c], c)]


def test_crossing_counts_small():
    a = one_consolidation([2, 5, 3])
    t = build_treap(a.consolidations[-1], a.link_log)
    assert [len(crossings(t, x)) for x in range(2)] == [1, 2]


def test_literal_lowest_link_counterexample():
    # 6 beats 7 (right), 5 beats 6 (right), 1 beats 5 (left).  At the boundary
    # after 7 the only crossing link is 1-5; the link 7 lost does not cross.
    a = one_consolidation([5, 6, 7, 1])
    t = build_treap(a.consolidations[-1], a.link_log)
    assert crossings(t, 2) == [(3, 0)]
    assert check_boundary_alternation(t) == []
    assert check_boundary_alternation(t, literal_lowest=True)


@pytest.mark.parametrize("variant", [Variant.SLIM, Variant.SMOOTH])
def test_exhaustive_boundaries_up_to_six(variant):
    for r in range(2, 7):
        for perm in itertools.permutations(range(1, r + 1)):
            a = one_consolidation(perm, variant)
            t = build_treap(a.consolidations[-1], a.link_log)
            assert check_boundary_alternation(t) == [], perm


def smooth_node(left_stamps, right_stamps):
    a = Arena()
    p = a.add_node(0)
    for s in left_stamps[::-1]:
        a.link(p, a.add_node(1))
    for s in right_stamps:
        a.link(p, a.add_node(1), Side.RIGHTMOST)
    kids = a.children(p)
    for c, s in zip(kids, list(left_stamps) + list(right_stamps)):
        a.link_time[c.index] = s
    h = Heap(a, "smooth")
    h.root, h.size = p.index, len(kids) + 1
    return h


def test_child_order_smooth():
    assert check_child_order(smooth_node((5, 3), (2, 4)), "smooth") == []
    assert check_child_order(smooth_node((5, 3), (4, 2)), "smooth")
    assert check_child_order(smooth_node((5, 3), (2, 4)), "slim")


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("mode", ["eager", "lazy"])
def test_child_order_after_replay(variant, mode):
    t = gen_sorting_trace(300, 4)
    t.ops = t.ops[:450]
    r = replay(t, variant, mode)
    assert check_child_order(r.heaps[0], variant) == []


def test_good_link_bound_is_exact():
    # k=4 slim links need at least 4/3 - 2/3 = 2/3 good links, so 1 suffices
    assert Fraction(1) >= Fraction(4, 3) - Fraction(2, 3)


def test_lemma_report_lines():
    t = gen_sorting_trace(200, 6)
    for v in Variant:
        rep = check_lemmas(t, replay(t, v))
        assert rep.passed
        assert all(ln.startswith("LEMMA ") and " PASS " in ln for ln in rep.lines())
    ids = [r.id for r in check_lemmas(t, replay(t, "smooth")).results]
    assert ids == ["insertion-links", "final-links", "win-limit", "good-links",
                   "comparison-budget", "boundary-alternation"]
