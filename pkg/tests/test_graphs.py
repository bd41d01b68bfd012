import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afalab.approx import ABOVE, BELOW, ApproximationTrace
from afalab.distance import bfs_distance, bfs_from
from afalab.errors import KindError, MonotonicityError, ParseError
from afalab.graphs import (
    DecreasingString, FamilySpec, all_decreasing, build_family, build_singledegree, build_spoke,
    countdown_string, extend_spoke, new_graph, parse_family, permuted_copy, spoke_node_count,
)
from afalab.graphs.io import format_graph, parse_graph, read_graph, read_layout, to_dot, write_graph
from conftest import S, random_above_trace, random_family


# strings and families

def test_decreasing_string_rules():
    assert str(S(2, 1, 0)) == "<2,1,0>"
    assert DecreasingString.parse("<3, 1>") == DecreasingString.parse("3 1") == S(3, 1)
    for bad in [(), (1, 1), (1, 2)]:
        with pytest.raises((ValueError, MonotonicityError)):
            DecreasingString(bad)
    with pytest.raises(MonotonicityError):
        S(3).extend(3)


def test_all_decreasing_counts():
    strings = all_decreasing(2, 2)
    assert set(strings) == {S(0), S(1), S(2), S(1, 0), S(2, 0), S(2, 1)}


def test_periodic_family_is_countdown_prefixes():
    sched = FamilySpec.periodic_countdown(2, repeats=2).schedule()
    assert sched[:3] == [S(2), S(2, 1), S(2, 1, 0)] and sched[3:] == sched[:3]
    assert countdown_string(3, 1) == S(3, 2, 1)


def test_parse_family_file():
    assert parse_family("# spokes\n<2>\n2 1 0\n").schedule() == [S(2), S(2, 1, 0)]
    with pytest.raises(ParseError):
        parse_family("\n# nothing\n")
    with pytest.raises(ParseError, match=":2:"):
        parse_family("2\n1 3\n", "fam.txt")


# single spokes

def test_standard_spoke():
    g = new_graph("standard")
    sp = build_spoke(g, 2)
    snap = g.final()
    assert g.n_nodes - 1 == 11
    assert bfs_distance(snap, sp.a, sp.b) == 4
    assert snap.has_edge(g.layout.u, sp.a) and not snap.has_edge(g.layout.u, sp.b)


def test_elongated_spoke_chains():
    g = new_graph("elongated")
    sp = build_spoke(g, 2, elongated=True)
    snap = g.final()
    assert bfs_distance(snap, g.layout.u, sp.a) == 4
    assert bfs_distance(snap, sp.b, g.layout.v) == 4


def test_directed_spoke():
    g = new_graph("directed")
    sp = build_spoke(g, 1, directed=True)
    snap = g.final()
    assert bfs_distance(snap, g.layout.u, sp.b) == 3
    assert bfs_distance(snap, sp.b, g.layout.u) == 4


def test_extend_spoke():
    g = new_graph("standard")
    sp = build_spoke(g, 2)
    extend_spoke(g, sp, 1, 1)
    assert sp.type == [2, 1] and bfs_distance(g.snapshot(1), sp.a, sp.b) == 3
    assert bfs_distance(g.snapshot(0), sp.a, sp.b) == 4
    extend_spoke(g, sp, 0, 2)
    assert bfs_distance(g.final(), sp.a, sp.b) == 2
    with pytest.raises(MonotonicityError):
        extend_spoke(g, sp, 0, 3)


def test_spoke_invariants():
    g = build_family(FamilySpec.explicit([S(3, 1, 0), S(0)]), "standard")
    snap = g.final()
    for sp in g.layout.spokes:
        lengths = sorted(len(p) + 1 for p in sp.paths)
        expected = sorted([2 + sp.type[0]] * 3 + [2 + v for v in sp.type[1:]])
        assert lengths == expected
        interior = [x for p in sp.paths for x in p]
        assert all(snap.degree(x) == 2 for x in interior)
        for i, p in enumerate(sp.paths):
            others = {x for j, q in enumerate(sp.paths) if j != i for x in q}
            assert not any(y in others for x in p for y in snap.neighbors(x))
    assert snap.degree(g.layout.u) == 2


# families

def test_standard_family_distance():
    g = build_family(FamilySpec.explicit([S(2), S(2, 1, 0)]), "standard")
    b0, b1 = g.layout.spoke(0).b, g.layout.spoke(1).b
    assert bfs_distance(g.final(), b0, b1) == 8


def test_elongated_family_centers():
    g = build_family(FamilySpec.explicit([S(2), S(1, 0)]), "elongated")
    assert bfs_distance(g.final(), g.layout.u, g.layout.v) == 8


def test_node_counts_match_formula():
    fam = [S(2), S(2, 1), S(2, 1, 0)]
    for shape, centers in [("standard", 1), ("elongated", 2), ("directed", 1)]:
        g = build_family(FamilySpec.explicit(fam), shape)
        assert g.n_nodes == centers + sum(spoke_node_count(s, shape) for s in fam)


def test_trace_spokes_grow_at_change_stages():
    t = ApproximationTrace.from_events({0: [(0, 2), (5, 1)]}, ABOVE)
    g = build_family(None, "standard", t)
    sp = g.layout.spoke(0)
    assert bfs_distance(g.snapshot(4), sp.a, sp.b) == 4
    assert bfs_distance(g.snapshot(5), sp.a, sp.b) == 3
    assert sp.type == [2, 1]


def test_truncated_build_is_incomplete():
    t = ApproximationTrace.from_events({0: [(0, 2), (5, 1)]}, ABOVE)
    g = build_family(None, "standard", t, stages=3)
    assert not g.complete and g.layout.spoke(0).type == [2]


def test_periodic_family_encodes_countdown():
    t = ApproximationTrace.from_events({0: [(0, 5), (2, 3)], 1: [(0, 1)]}, ABOVE)
    g = build_family(FamilySpec.periodic_countdown(2), "elongated", t)
    for sp in g.layout.spokes:
        assert list(sp.type) == [2, 1, 0][: len(sp.type)]
    assert g.layout.spoke(0).type == [2, 1]


def test_interleaved_indices():
    t = ApproximationTrace.from_events({0: [(0, 1)], 1: [(0, 2)]}, ABOVE)
    g = build_family(FamilySpec.interleaved(FamilySpec.explicit([S(3), S(4)])), "standard", t)
    kinds = {sp.index: sp.source for sp in g.layout.spokes}
    assert kinds[0] == kinds[2] == "trace" and kinds[1] != "trace" and kinds[3] != "trace"


def test_below_trace_rejected():
    t = ApproximationTrace.from_events({0: [(0, 1)]}, BELOW)
    with pytest.raises(KindError):
        build_family(None, "standard", t)


def test_directed_u_is_only_branching_node():
    g = build_family(FamilySpec.explicit([S(2, 1), S(1, 0)]), "directed")
    snap = g.final()
    assert [x for x in snap.nodes if snap.out_degree(x) > 1] == [g.layout.u]


def test_no_center_shortcut_in_elongated():
    rng = random.Random(5)
    for _ in range(10):
        g = build_family(random_family(rng, 6), "elongated")
        snap = g.final()
        duv = bfs_distance(snap, g.layout.u, g.layout.v)
        for sp in g.layout.spokes:
            assert 2 * sp.l + duv > bfs_distance(snap, sp.a, sp.b)


# single-degree builds

def test_singledegree_loops():
    t = ApproximationTrace.from_sequences({n: [0] for n in range(6)}, ABOVE)
    t = ApproximationTrace.from_events({**{n: [(0, 0)] for n in range(5)}, 5: [(0, 4), (1, 1)]}, ABOVE)
    g = build_singledegree(t)
    sp0, sp5 = g.layout.spoke(0), g.layout.spoke(5)
    assert len(sp0.loop) + 1 == 3
    assert len(sp5.loop) + 1 == 8 and sp5.type == [4, 1]
    plain = build_family(None, "standard", t)
    for n in range(6):
        assert bfs_distance(g.final(), g.layout.spoke(n).a, g.layout.spoke(n).b) == \
            bfs_distance(plain.final(), plain.layout.spoke(n).a, plain.layout.spoke(n).b)


def test_singledegree_needs_contiguous_domain():
    t = ApproximationTrace.from_events({1: [(0, 0)]}, ABOVE)
    with pytest.raises(ValueError):
        build_singledegree(t)


# snapshots and copies

def test_snapshots_nested():
    t = random_above_trace(random.Random(3))
    g = build_family(None, "standard", t)
    first = g.snapshot(0)
    assert set(first.nodes) == {x for x in range(g.n_nodes) if g.node_stage[x] == 0}
    prev = set()
    for s in range(g.last_stage + 1):
        edges = set(g.snapshot(s).edges)
        assert prev <= edges
        prev = edges
    assert g.final().complete


def test_identity_copy():
    g = build_family(FamilySpec.explicit([S(1)]), "standard")
    h = permuted_copy(g)
    assert h.isomorphism == {x: x for x in range(g.n_nodes)}
    assert format_graph(h) == format_graph(g)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_copies_preserve_invariants(seed):
    rng = random.Random(seed)
    shape = rng.choice(["standard", "elongated", "directed"])
    g = build_family(random_family(rng, 4, 4), shape)
    h = permuted_copy(g, seed)
    a, b = g.final(), h.final()
    assert g.n_nodes == h.n_nodes and g.n_edges == h.n_edges
    assert Counter(map(a.degree, a.nodes)) == Counter(map(b.degree, b.nodes))
    iso = h.isomorphism
    for x, y, _ in g.edges:
        assert b.has_edge(iso[x], iso[y])
    x0 = rng.choice(a.nodes)
    da, db = bfs_from(a, x0), bfs_from(b, iso[x0])
    assert all(db[iso[y]] == d for y, d in da.items())


def test_copy_event_order_respects_stages():
    t = random_above_trace(random.Random(9))
    g = build_family(None, "standard", t)
    h = permuted_copy(g, 4)
    for s in range(g.last_stage + 1):
        assert len(g.snapshot(s).edges) == len(h.snapshot(s).edges)


# files

def test_graph_file_round_trip(tmp_path):
    t = random_above_trace(random.Random(11))
    g = build_family(FamilySpec.explicit([S(2, 0)]), "elongated", t)
    path = tmp_path / "g.graph"
    write_graph(g, path, tmp_path / "g.layout.json")
    back = read_graph(path, tmp_path / "g.layout.json")
    assert format_graph(back) == format_graph(g)
    assert back.layout.to_dict() == g.layout.to_dict()
    assert read_layout(tmp_path / "g.layout.json").u == g.layout.u


def test_graph_parse_errors():
    with pytest.raises(ParseError):
        parse_graph("")
    with pytest.raises(ParseError, match=":3:"):
        parse_graph("directed=0 stage=0 complete=1\nn 0 0\nn 5 0\n", "g")
    with pytest.raises(ParseError, match=":3:"):
        parse_graph("directed=0 stage=0 complete=1\nn 0 0\ne 0 9 0\n", "g")


def test_dot_export():
    g = build_family(FamilySpec.explicit([S(2), S(2, 1), S(2, 1, 0)]), "standard")
    dot = to_dot(g, g.layout)
    assert dot.startswith("graph G {") and dot.count(" -- ") == g.n_edges
    assert "not oracle data" in dot
    d = build_family(FamilySpec.explicit([S(1)]), "directed")
    assert to_dot(d).count(" -> ") == d.n_edges
