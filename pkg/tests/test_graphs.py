"""Standard transfinite graphs: axioms, truncation, extremities, shorting."""

import pytest

from ultragraph import (
    OMEGA,
    OMEGA_ARROW,
    Extremity,
    StandardGraph,
    StandardNode,
    TowerScheme,
    extremities,
    shorted_std,
    truncate,
    validate,
)
from ultragraph.errors import NotAnExtremity, RankTooHigh

from conftest import alternating_3graphs, ladder_1graph, loop_2graph, tower_omega_graph


def codes(report):
    return sorted(v.code for v in report.violations)


def test_ladder_validates():
    report = validate(ladder_1graph())
    assert report.passed
    assert any("not checked" in note for note in report.notes)


def test_loop_and_alternating_prototypes_validate():
    for g in (loop_2graph(), *alternating_3graphs()):
        assert validate(g).passed, g.name


def test_shared_exceptional_is_a_violation():
    g = StandardGraph(
        "bad",
        2,
        nodes0=["p", "q", "z"],
        branches={"b1": ("p", "q")},
        tips={0: ["t0"], 1: ["t1", "u1"]},
        nodes=[
            StandardNode.make("x1", 1, ("t0",)),
            StandardNode.make("x2", 2, ("t1",), "z"),
            StandardNode.make("y2", 2, ("u1",), "z"),
        ],
    )
    assert "exceptional-shared" in codes(validate(g))


def test_tipless_node_is_a_violation():
    g = StandardGraph(
        "empty",
        1,
        nodes0=["p", "q"],
        branches={"b1": ("p", "q")},
        tips={0: ["t0"]},
        nodes=[
            StandardNode.make("x1", 1, ("t0",)),
            StandardNode.make("e1", 1, ()),
        ],
    )
    assert "node-empty" in codes(validate(g))


def test_tip_owned_twice_is_a_violation():
    g = StandardGraph(
        "dup",
        1,
        nodes0=["p", "q"],
        branches={"b1": ("p", "q")},
        tips={0: ["t0"]},
        nodes=[
            StandardNode.make("x1", 1, ("t0",)),
            StandardNode.make("y1", 1, ("t0",)),
        ],
    )
    assert "tip-shared" in codes(validate(g))


def test_orphan_tip_is_a_violation():
    g = StandardGraph(
        "orphan",
        1,
        nodes0=["p", "q"],
        branches={"b1": ("p", "q")},
        tips={0: ["t0", "lost"]},
        nodes=[StandardNode.make("x1", 1, ("t0",))],
    )
    assert "tip-unowned" in codes(validate(g))


def test_self_loops_are_flagged():
    g = StandardGraph("loopy", 0, nodes0=["a"], branches={"b1": ("a", "a")})
    assert "branch-loop" in codes(validate(g))


def test_branch_endpoints_must_exist():
    g = StandardGraph("dangling", 0, nodes0=["a", "b"], branches={"b1": ("a", "c")})
    assert "branch-endpoint" in codes(validate(g))


def test_truncate_drops_upper_layers():
    g2 = loop_2graph()
    g1 = truncate(g2, 1)
    assert g1.rank == 1
    assert g1.layer_nodes(1)
    with pytest.raises(RankTooHigh):
        g1.layer_nodes(2)
    assert g1.branches == g2.branches
    assert validate(g1).passed


def test_truncate_to_own_rank_is_identity():
    g = loop_2graph()
    assert truncate(g, 2) == g


def test_truncate_beyond_rank_is_an_error():
    with pytest.raises(RankTooHigh):
        truncate(ladder_1graph(), 3)


def test_truncating_an_omega_template_materializes_a_finite_graph():
    t = tower_omega_graph()
    g3 = truncate(t, 3)
    assert g3.rank == 3
    assert sorted(g3.layer_nodes(3)) == ["x3_0", "x3_1"]
    assert validate(g3).passed


def test_validate_passes_on_all_truncations():
    for g in (loop_2graph(), *alternating_3graphs()):
        for rank in range(1, g.rank + 1):
            assert validate(truncate(g, rank)).passed


def test_ladder_extremity_count():
    # two 0-tips, no exceptional elements -> two extremities at level 1
    exts = extremities(ladder_1graph(), 1)
    assert sorted(e.ident for e in exts) == ["p0", "q0"]
    assert all(e.kind == "tip" and e.rank == 0 for e in exts)


def test_exceptional_element_appears_exactly_once():
    exts = extremities(loop_2graph(), 2)
    embraced = [e for e in exts if e.kind == "node"]
    assert [e.ident for e in embraced] == ["x1"]
    assert embraced[0].rank == 1


def test_shorted_std_is_reflexive():
    g = ladder_1graph()
    e = Extremity("tip", "p0", 0)
    assert shorted_std(g, e, e, 1)


def test_two_tips_in_one_node_are_shorted():
    g = ladder_1graph()
    assert shorted_std(g, Extremity("tip", "p0", 0), Extremity("tip", "q0", 0), 1)


def test_tips_in_distinct_nodes_are_not_shorted():
    a, _ = alternating_3graphs()
    assert not shorted_std(a, Extremity("tip", "t0", 0), Extremity("tip", "s0", 0), 1)


def test_unknown_extremity_is_an_error():
    g = ladder_1graph()
    with pytest.raises(NotAnExtremity):
        shorted_std(g, Extremity("tip", "zz", 0), Extremity("tip", "p0", 0), 1)


def test_partition_recovery_reproduces_the_node_layer():
    # rebuilding classes from pairwise shorted_std queries gives back X^mu
    for g, level in [(loop_2graph(), 1), (loop_2graph(), 2), (alternating_3graphs()[1], 2)]:
        exts = list(extremities(g, level))
        classes = []
        for e in exts:
            for cls in classes:
                if shorted_std(g, e, cls[0], level):
                    cls.append(e)
                    break
            else:
                classes.append([e])
        assert len(classes) == len(g.layer_nodes(level))
        for cls in classes:
            owners = {g.owner_of(e, level) for e in cls}
            assert len(owners) == 1


def test_structural_equality_ignores_construction_order():
    a1 = StandardGraph(
        "same", 1, nodes0=["a", "b"], branches={"b1": ("a", "b")},
        tips={0: ["t"]}, nodes=[StandardNode.make("x1", 1, ("t",))],
    )
    a2 = StandardGraph(
        "same", 1, nodes0=["b", "a"], branches={"b1": ("a", "b")},
        tips={0: ["t"]}, nodes=[StandardNode.make("x1", 1, ("t",))],
    )
    assert a1 == a2 and hash(a1) == hash(a2)


def test_omega_template_basics():
    t = tower_omega_graph()
    report = validate(t)
    assert report.passed
    assert any("scheme layers spot-checked" in n for n in report.notes)
    w0 = t.omega_node_at(0)
    assert w0.exceptional is None
    w3 = t.omega_node_at(3)
    assert w3.exceptional == "x3_0"
    assert t.node_rank("x7_1") == 7


def test_graded_omega_extremities_pair_tips_with_embraced_nodes():
    t = tower_omega_graph()
    exts = extremities(t, OMEGA, bound=4)
    kinds = {e.kind for e in exts}
    assert kinds == {"tip", "node"}
    tips = [e for e in exts if e.kind == "tip"]
    assert all(e.rank is OMEGA_ARROW for e in tips)
