import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afalab.approx import (
    ABOVE, BELOW, FREE, ApproximationTrace, Sigma2Stream, StepProcess, augmented, check_defeats,
    classify, countdown, diagonal_witness, dual, empty, f_from_v, format_trace, iota, join,
    limit_range, mind_changes, one_complete_build, parse_registry, parse_stream, parse_trace,
    range_encoder, reconstruct_from_countdown, v_from_f, v_membership, v_set,
)
from afalab.errors import BoundViolation, CompletenessError, InputRangeError, KindError, ParseError
from afalab.pairing import pair, unpair
from conftest import random_above_trace


def seqs(*rows, kind=ABOVE):
    return ApproximationTrace.from_sequences(list(rows), kind)


# trace basics

def test_value_is_latest_event():
    t = ApproximationTrace.from_events({0: [(0, 3), (2, 1), (4, 0)]}, ABOVE)
    assert [t.value(0, s) for s in range(6)] == [3, 3, 1, 1, 0, 0]


def test_from_above_rejects_rise():
    with pytest.raises(KindError):
        ApproximationTrace.from_events({0: [(0, 1), (1, 2)]}, ABOVE)


def test_needs_stage_zero():
    with pytest.raises(ValueError):
        ApproximationTrace.from_events({0: [(1, 2)]}, FREE)


def test_limit_refused_when_incomplete():
    t = ApproximationTrace.from_events({0: [(0, 2)]}, ABOVE, complete=False)
    with pytest.raises(CompletenessError):
        t.limit(0)


def test_trace_file_round_trip():
    t = ApproximationTrace.from_events({0: [(0, 5), (3, 2)], 1: [(0, 1)]}, ABOVE, horizon=9)
    assert parse_trace(format_trace(t)) == t


def test_trace_parse_error_has_line_number():
    text = "kind=above complete=1 domain=1\nx 0 s 0 v 3\nx 0 q 1 v 2\n"
    with pytest.raises(ParseError, match=":3:"):
        parse_trace(text, "t.txt")


def test_trace_file_must_cover_domain():
    with pytest.raises(ParseError, match="without events"):
        parse_trace("kind=above complete=1 domain=2\nx 0 s 0 v 3\n")


# mind changes and classification

def test_mind_changes_examples():
    assert mind_changes(seqs([3, 3, 1, 1, 0]), 0, 10) == 2
    assert mind_changes(seqs([7] * 6), 0, 4) == 0
    t = ApproximationTrace.from_events({0: [(0, 5), (1, 4), (2, 3), (3, 2)]}, ABOVE)
    assert mind_changes(t, 0, 2) == 2


def test_mind_changes_unknown_input():
    with pytest.raises(InputRangeError):
        mind_changes(seqs([1]), 3)


def test_classify_max_changes():
    t = ApproximationTrace.from_events({0: [(0, 5), (1, 4)], 1: [(0, 6), (1, 5), (2, 4), (3, 3)]}, ABOVE)
    assert classify(t).max_changes == 3


def test_classify_omega_bound_is_first_value():
    t = ApproximationTrace.from_events({x: [(0, x + 2), (1, 0)] for x in range(5)}, ABOVE)
    assert classify(t).omega_bound == {x: x + 2 for x in range(5)}


def test_classify_non_monotone():
    c = classify(seqs([2, 3, 1], kind=FREE))
    assert not c.monotone_above and not c.monotone_below


def test_classify_needs_complete():
    t = ApproximationTrace.from_events({0: [(0, 2)]}, ABOVE, complete=False)
    with pytest.raises(CompletenessError):
        classify(t)


# countdown

def test_countdown_example():
    c = countdown(seqs([5, 3, 3, 2]), {0: 2})
    assert c.sequence(0) == [2, 1, 1, 0] and c.limit(0) == 0


def test_countdown_constant():
    c = countdown(seqs([4, 4, 4]), lambda x: 4)
    assert c.sequence(0) == [4, 4, 4]


def test_countdown_limit_is_bound_minus_changes():
    assert countdown(seqs([3, 1, 0]), {0: 5}).limit(0) == 3


def test_countdown_bound_violation():
    with pytest.raises(BoundViolation):
        countdown(seqs([3, 1, 0]), {0: 1})


@pytest.mark.parametrize("rows,h,lim,expected", [
    ([5, 3, 3, 2], 2, 0, 2),
    ([9, 9], 4, 4, 9),
    ([4, 4, 1], 3, 2, 1),
])
def test_reconstruct_examples(rows, h, lim, expected):
    value, audit = reconstruct_from_countdown(seqs(rows), {0: h}, 0, lambda x: lim)
    assert value == expected
    assert audit.max_queries == 1


def test_reconstruct_wrong_limit():
    with pytest.raises(CompletenessError):
        reconstruct_from_countdown(seqs([3, 1]), {0: 5}, 0, lambda x: 0)


# dual

def test_dual_example():
    assert dual(seqs([4, 2, 1])).sequence(0) == [0, 2, 3]


def test_dual_constant():
    assert dual(seqs([6, 6])).sequence(0) == [0, 0]


def test_dual_of_dual():
    t = seqs([4, 2, 1], [5, 5, 0])
    back = dual(dual(t), bound=lambda x: t.first(x))
    assert back == t


def test_dual_kind_error():
    with pytest.raises(KindError):
        dual(seqs([1, 3, 2], kind=FREE))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dual_preserves_change_stages(seed):
    t = random_above_trace(random.Random(seed))
    d = dual(t)
    assert d.kind == BELOW
    assert all(d.change_stages(x) == t.change_stages(x) for x in t.domain)


# join and V_f

def test_join_examples():
    phi = lambda x: 10 * x
    assert join(phi, lambda x: -1)(4) == 20
    assert augmented(lambda x: 99)(2) == iota(1) == 0
    assert join(empty, phi)(0) is None


@given(st.integers(0, 500))
def test_join_projections(x):
    phi, psi = (lambda z: 3 * z), (lambda z: z + 7)
    j = join(phi, psi)
    assert j(2 * x) == phi(x) and j(2 * x + 1) == psi(x)


def test_v_membership_example():
    t = seqs([3, 1, 0])
    assert [v_membership(t, 0, n) for n in range(3)] == [True, True, False]
    assert not v_membership(seqs([4, 4]), 0, 0)


def test_f_from_v_example():
    t = seqs([3, 1, 0])
    vf = v_set(t)
    value, audit = f_from_v(t, 0, lambda code: int(code in vf))
    assert value == 0 and audit.max_queries == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_v_round_trips(seed):
    t = random_above_trace(random.Random(seed))
    vf = v_set(t)
    for x in t.domain:
        assert f_from_v(t, x, lambda c: int(c in vf))[0] == t.limit(x)
        for n in range(t.first(x) + 1):
            member, audit = v_from_f(t, pair(x, n), t.limit)
            assert member == (pair(x, n) in vf) and audit.max_queries == 1
        flags = [v_membership(t, x, n) for n in range(6)]
        assert flags == sorted(flags, reverse=True)


@given(st.integers(0, 300), st.integers(0, 300))
def test_pairing_inverts(x, y):
    assert unpair(pair(x, y)) == (x, y)


# range encoder

def test_range_single_growth_is_kept():
    s = Sigma2Stream(2, (2, 0, 0, 5))
    t = range_encoder(s, 4)
    assert 5 in {t.last(x) for x in t.domain}
    assert limit_range(s) == {2, 5}


def test_range_recurring_label_is_purged():
    s = Sigma2Stream(2, (2,), (7,))
    t = range_encoder(s, 8)
    seeded = [x for x in t.domain if t.first(x) == 7]
    assert seeded and all(t.last(x) == 2 for x in seeded[:-1])
    assert limit_range(s) == {2}


def test_range_small_index_seeds_x0():
    t = range_encoder(Sigma2Stream(2, (2, 1)), 2)
    assert t.first(1) == 2


def test_range_changes_at_most_once():
    t = range_encoder(Sigma2Stream(1, (1, 3, 4, 3, 4, 6)), 6)
    assert all(len(t.values(x)) <= 2 for x in t.domain)
    assert all(t.values(x)[-1] == 1 for x in t.domain if len(t.values(x)) == 2)


def test_stream_parse():
    s = parse_stream("x0=2\ngrow 2\ngrow 5\ncycle\ngrow 7\n")
    assert s == Sigma2Stream(2, (2, 5), (7,))
    with pytest.raises(ParseError):
        parse_stream("grow 1\n")


# registry, 1-complete build, diagonal witnesses

REGISTRY = """
e 0 prog constant 5
e 1 prog affine 1 2
e 2 prog staircase-down 4 2 1
e 3 prog delayed-converge 3 2
e 4 prog partial 3 6
e 5 prog staircase-up 2 3 4
e 6 prog divergent
e 7 prog staircase-down 6 1 0
"""


def test_registry_parse_errors():
    with pytest.raises(ParseError, match=":1:"):
        parse_registry("e 0 prog nosuch 1\n")
    with pytest.raises(ParseError):
        parse_registry("e 0 prog constant\n")


def test_one_complete_constant():
    b = one_complete_build([StepProcess(0, "constant", (5,))], 20)
    n = b.d(0)[0]
    assert b.trace.last(n) == 5


def test_one_complete_disjoint_slots():
    b = one_complete_build([StepProcess(0, "constant", (1,)), StepProcess(1, "constant", (2,))], 30)
    assert not set(b.d(0).values()) & set(b.d(1).values())


def test_one_complete_freezes_rising_rival():
    b = one_complete_build([StepProcess(0, "staircase-up", (2, 1, 3))], 10)
    n = b.d(0)[0]
    assert b.trace.values(n) == [2] and n in b.frozen


def test_one_complete_reductions_agree_with_limits():
    reg = parse_registry(REGISTRY)
    b = one_complete_build(reg, 80, max_input=4)
    for p in reg:
        d = b.d(p.index)
        assert len(set(d.values())) == len(d)
        for x, n in d.items():
            if p.from_above and p.stabilized(x, 80 - 1):
                assert b.trace.last(n) == p.limit(x)
        if d:
            with pytest.raises(InputRangeError):
                b.reduction(p.index).g(10 ** 6)


def test_nocollapse_chases_tracking_rival():
    reg = [StepProcess(0, "tracking", (1,))]
    w = diagonal_witness("nocollapse", reg, 30, n=1)
    assert w.values(0) == [2, 1, 0]
    (d,) = check_defeats("nocollapse", w, reg, 30, n=1)
    assert d.satisfied


def test_no_mcomplete_witness_exceeds():
    f = ApproximationTrace.from_events({y: [(0, 6), (2, 4)] for y in range(9)}, ABOVE)
    reg = [StepProcess(0, "constant", (7,))]
    w = diagonal_witness("no_mcomplete_above", reg, 10, trace=f)
    assert w.limit(0) >= 5 > f.limit(7)
    assert all(d.status == "defeated" for d in check_defeats("no_mcomplete_above", w, reg, 10, trace=f))


def test_no1complete_identity_rival():
    k = pair(0, 0)
    g = ApproximationTrace.from_events({y: [(0, 1), (3, 3)] for y in range(k + 3)}, BELOW)
    reg = [StepProcess(0, "affine", (1, 0))]
    w = diagonal_witness("no1complete_below", reg, 10, trace=g, inputs=[0])
    assert w.limit(k) == 4


def test_divergent_member_is_vacuous():
    f = ApproximationTrace.from_events({y: [(0, 1)] for y in range(3)}, ABOVE)
    reg = [StepProcess(0, "divergent")]
    w = diagonal_witness("no_mcomplete_above", reg, 5, trace=f)
    (d,) = check_defeats("no_mcomplete_above", w, reg, 5, trace=f)
    assert d.status == "vacuous" and d.satisfied
