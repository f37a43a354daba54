import itertools

import pytest

from selfadj import (Arena, Placement, locally_max_consolidate, multipass_consolidate,
                     two_pass_consolidate)
from selfadj.verify import win_limit_violations


def roots_of(keys, record=True):
    a = Arena(record)
    return a, [a.add_node(k) for k in keys]


def kid_keys(a, item):
    return [a.key_of(c).value for c in a.children(item)]


def by_key(a, items, k):
    return next(i for i in items if a.key_of(i).value == k)


def test_single_root():
    for f in (two_pass_consolidate, multipass_consolidate, locally_max_consolidate):
        a, rs = roots_of([7])
        assert f(a, rs) == rs[0] and a.metrics.links == 0


def test_two_pass_example():
    a, rs = roots_of([4, 1, 3, 2, 5])
    root = two_pass_consolidate(a, rs)
    assert a.key_of(root).value == 1
    assert kid_keys(a, root) == [2, 4]
    assert kid_keys(a, by_key(a, rs, 2)) == [5, 3]
    assert a.metrics.links == 4 and a.metrics.comparisons == 4
    # pairing pass first, then assembly from the right
    assert [(r.context, a.key[r.winner.index], a.key[r.loser.index]) for r in a.link_log] == [
        ("pass", 1, 4), ("pass", 2, 3), ("assembly", 2, 5), ("assembly", 1, 2)]


def test_two_pass_pair():
    a, rs = roots_of([2, 1])
    root = two_pass_consolidate(a, rs)
    assert a.key_of(root).value == 1 and kid_keys(a, root) == [2]


def test_multipass_example():
    a, rs = roots_of([4, 1, 3, 2, 5])
    root = multipass_consolidate(a, rs)
    assert a.key_of(root).value == 1
    assert a.consolidations[-1].pass_links == (2, 1, 1)
    assert kid_keys(a, root) == [5, 2, 4]


def test_slim_example():
    a, rs = roots_of([2, 5, 3])
    root = locally_max_consolidate(a, rs)
    three = by_key(a, rs, 3)
    assert a.key_of(root).value == 2
    assert kid_keys(a, root) == [3] and kid_keys(a, three) == [5]
    assert [r.side for r in a.link_log] == ["left", "right"]
    assert [a.key[r.winner.index] for r in a.link_log] == [3, 2]
    assert not win_limit_violations(a.link_log)


def test_smooth_example():
    a, rs = roots_of([2, 5, 3])
    root = locally_max_consolidate(a, rs, Placement.STABLE)
    two, five, three = rs
    assert root == two
    assert a.children(three) == [five] and not a.placed_right[five.index]
    assert a.children(two) == [three] and a.placed_right[three.index]


def test_smooth_mixed_placement():
    a, rs = roots_of([1, 4, 3, 5, 2])
    locally_max_consolidate(a, rs, Placement.STABLE)
    one = rs[0]
    left = [c for c in a.children(one) if not a.placed_right[c.index]]
    right = [c for c in a.children(one) if a.placed_right[c.index]]
    assert a.children(one) == left + right


def test_increasing_list_links_from_the_right():
    for placement in Placement:
        a, rs = roots_of([1, 2, 3])
        locally_max_consolidate(a, rs, placement)
        assert a.children(rs[0]) == [rs[1]] and a.children(rs[1]) == [rs[2]]
        assert [r.side for r in a.link_log] == ["right", "right"]


def test_comparisons_within_budget():
    for perm in itertools.permutations(range(6)):
        a, rs = roots_of(perm)
        locally_max_consolidate(a, rs)
        assert a.metrics.comparisons <= 2 * a.metrics.links


def test_ties_resolve_deterministically():
    a, rs = roots_of([3, 3, 3])
    assert two_pass_consolidate(a, rs) == rs[0]
    a, rs = roots_of([3, 3, 3])
    assert multipass_consolidate(a, rs) == rs[0]
    # a locally maximum root loses to its neighbour on equal keys
    a, rs = roots_of([3, 3, 3])
    assert locally_max_consolidate(a, rs) == rs[2]


def test_rejects_bad_root_lists():
    a, rs = roots_of([1, 2])
    with pytest.raises(ValueError):
        two_pass_consolidate(a, [])
    with pytest.raises(ValueError):
        two_pass_consolidate(a, [rs[0], rs[0]])
    a.link(rs[0], rs[1])
    with pytest.raises(Exception):
        two_pass_consolidate(a, rs)
