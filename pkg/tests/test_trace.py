import pytest

from selfadj import (MixConfig, Trace, Variant, gen_random_trace, gen_sorting_trace,
                     parse_trace, replay, serialize_trace)
from selfadj.trace import (TraceSemanticError, TraceSyntaxError, decrease_key_op, delete_min_op,
                           insert_op, make_heap_op, validate_trace)

MIX532 = {"insert": 5, "delete_min": 3, "decrease_key": 2, "meld": 0.2, "delete": 0.5,
          "find_min": 0.3, "make_heap": 0.2}


def op_lines(text):
    return [ln for ln in text.splitlines() if ln and not ln.startswith("#")]


def test_generation_is_deterministic():
    cfg = MixConfig(weights=MIX532, n_ops=2000, n_heaps=3)
    assert serialize_trace(gen_random_trace(cfg, 9)) == serialize_trace(gen_random_trace(cfg, 9))
    assert serialize_trace(gen_random_trace(cfg, 9)) != serialize_trace(gen_random_trace(cfg, 10))


def test_insert_only_mix():
    t = gen_random_trace(MixConfig(n_ops=50), 1)
    assert t.counts() == {"H": 1, "I": 50}


def test_mix_proportions():
    cfg = MixConfig.from_mix("0.5:0.3:0.2", n_ops=10_000)
    c = gen_random_trace(cfg, 42).counts()
    for code, w in (("I", 0.5), ("D", 0.3), ("K", 0.2)):
        assert abs(c[code] / 10_000 - w) <= 0.1 * w


def test_mix_config_validation():
    with pytest.raises(ValueError):
        MixConfig(weights={"insert": 0, "delete_min": 1})
    with pytest.raises(ValueError):
        MixConfig(weights={"bogus": 1})
    with pytest.raises(ValueError):
        MixConfig.from_mix("1:2")


def test_distinct_keys_stay_distinct():
    cfg = MixConfig.from_mix("1:1:8", n_ops=3000, prefill=500, distinct=True,
                             key_range=(0, 1 << 40))
    t = gen_random_trace(cfg, 3)
    live = {}
    for op in t.ops:
        if op.code in ("I", "K"):
            live[op.item] = op.key
    keys = [op.key for op in t.ops if op.code in ("I", "K")]
    assert len(set(keys)) == len(keys)


def test_distinct_needs_room():
    with pytest.raises(ValueError):
        gen_random_trace(MixConfig(n_ops=0, prefill=7, key_range=(0, 5), distinct=True), 0)


def test_sorting_trace_shape():
    t = gen_sorting_trace(1, 0)
    assert [op.code for op in t.ops] == ["H", "I", "D"]
    t = gen_sorting_trace(5, 7)
    assert sorted(op.key for op in t.ops if op.code == "I") == [1, 2, 3, 4, 5]
    assert op_lines(serialize_trace(gen_sorting_trace(2, 3)))[0] == "H"
    lines = op_lines(serialize_trace(gen_sorting_trace(2, 3)))
    assert len(lines) == 5 and lines[1].startswith("I ")


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("mode", ["eager", "lazy"])
def test_sorting_replay_sorts(variant, mode):
    t = gen_sorting_trace(100, 5)
    assert replay(t, variant, mode).delete_min_keys(t) == list(range(1, 101))


def test_round_trip():
    cfg = MixConfig(weights=MIX532, n_ops=10_000, n_heaps=4)
    t = gen_random_trace(cfg, 11)
    back = parse_trace(serialize_trace(t))
    assert back.ops == t.ops and back.seed == t.seed and back.meta == t.meta


def test_parse_errors_carry_lines():
    with pytest.raises(TraceSemanticError):
        parse_trace("D 0\n")
    with pytest.raises(TraceSyntaxError) as e:
        parse_trace("H\nI 0 0\n")
    assert e.value.line == 2
    with pytest.raises(TraceSyntaxError):
        parse_trace("H\nQ 1\n")
    with pytest.raises(TraceSemanticError) as e:
        parse_trace("H\nI 0 0 5\nK 0 0 9\n")
    assert e.value.line == 3
    with pytest.raises(TraceSemanticError):
        parse_trace("H\nD 0\n")


def test_parse_accepts_comments():
    t = parse_trace("# hi\n#@ seed 4\nH\n\nI 0 0 5\nD 0\n")
    assert t.seed == 4 and len(t) == 3


def test_hand_trace():
    t = Trace([make_heap_op(), insert_op(0, 0, 5), insert_op(0, 1, 2),
               decrease_key_op(0, 0, 1), delete_min_op(0)])
    validate_trace(t)
    for v in Variant:
        for m in ("eager", "lazy"):
            assert [o.key for o in replay(t, v, m).outputs] == [1]


def test_tied_items_become_unreferenceable():
    t = Trace([make_heap_op(), insert_op(0, 0, 5), insert_op(0, 1, 5), delete_min_op(0),
               decrease_key_op(0, 1, 1)])
    with pytest.raises(TraceSemanticError):
        validate_trace(t)


def test_empty_trace_replay():
    r = replay(Trace(), "smooth", "lazy")
    assert r.outputs == [] and r.metrics.links == r.metrics.comparisons == 0
