"""Standard and nonstandard network solving, checked against the brute-force oracle."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultragraph import (
    Branch,
    FilterOracle,
    GraphFamily,
    Hyperreal,
    MagnitudeClass,
    NsNetwork,
    StandardGraph,
    StandardNetwork,
    operating_point,
    periodic,
    solve_standard,
    verify_laws,
)
from ultragraph.errors import EmptyNetwork, NumericalFailure, SolverFailure
from ultragraph.sequences import named_generator, value_at

from conftest import random_network
from reference_solver import brute_force_solve, close


def two_branch_loop(r1, e1, r2, e2):
    g = StandardGraph(
        "loop0",
        0,
        nodes0=["a", "b"],
        branches={"b1": ("a", "b"), "b2": ("b", "a")},
    )
    return StandardNetwork(g, {"b1": Branch(r1, e1), "b2": Branch(r2, e2)})


# -- hand-derived fixtures ----------------------------------------------------------


def test_series_loop_carries_one_ampere():
    # 3 V source around 1 + 2 ohms: i = 3/3 = 1 A, drops -2 V and 2 V
    sol = solve_standard(two_branch_loop(1.0, 3.0, 2.0, 0.0))
    assert sol.currents["b1"] == pytest.approx(1.0, rel=1e-12)
    assert sol.currents["b2"] == pytest.approx(1.0, rel=1e-12)
    assert sol.voltages["b1"] == pytest.approx(-2.0, rel=1e-12)
    assert sol.voltages["b2"] == pytest.approx(2.0, rel=1e-12)
    assert sol.potentials["a"] == 0.0
    assert sol.potentials["b"] == pytest.approx(2.0, rel=1e-12)


def test_parallel_opposed_sources_circulate_one_ampere():
    """Two 1-ohm branches a->b with +-1 V sources: i = +1 and -1, no drop."""
    g = StandardGraph(
        "par", 0, nodes0=["a", "b"], branches={"b1": ("a", "b"), "b2": ("a", "b")}
    )
    net = StandardNetwork(g, {"b1": Branch(1.0, 1.0), "b2": Branch(1.0, -1.0)})
    sol = solve_standard(net)
    assert sol.currents["b1"] == pytest.approx(1.0, rel=1e-12)
    assert sol.currents["b2"] == pytest.approx(-1.0, rel=1e-12)
    assert abs(sol.voltages["b1"]) < 1e-12 and abs(sol.voltages["b2"]) < 1e-12
    bf_i, bf_v, bf_phi = brute_force_solve(
        {"b1": ("a", "b", 1.0, 1.0), "b2": ("a", "b", 1.0, -1.0)}
    )
    for bid in ("b1", "b2"):
        assert close(sol.currents[bid], bf_i[bid])
        assert close(sol.voltages[bid], bf_v[bid])


def test_sourceless_network_is_everywhere_zero():
    sol = solve_standard(two_branch_loop(1.0, 0.0, 2.0, 0.0))
    assert all(v == 0.0 for v in sol.currents.values())
    assert all(v == 0.0 for v in sol.voltages.values())
    assert all(v == 0.0 for v in sol.potentials.values())


# -- agreement with the independent oracle ------------------------------------------


def test_matches_brute_force_on_random_networks():
    """Nodal analysis and the all-constraints least-squares oracle agree.

    Both pin the smallest node id of each component to zero, so the
    potentials are comparable directly, not just up to gauge.
    """
    rng = random.Random(20260814)
    for trial in range(24):
        plain, net = random_network(rng)
        sol = solve_standard(net)
        bf_i, bf_v, bf_phi = brute_force_solve(plain)
        for bid in plain:
            assert close(sol.currents[bid], bf_i[bid]), (trial, bid)
            assert close(sol.voltages[bid], bf_v[bid]), (trial, bid)
        for node in bf_phi:
            assert close(sol.potentials[node], bf_phi[node]), (trial, node)


def test_tellegen_holds_for_the_oracle_itself():
    rng = random.Random(5)
    plain, _ = random_network(rng, max_branches=5)
    bf_i, bf_v, _ = brute_force_solve(plain)
    power = sum(bf_v[b] * bf_i[b] for b in plain)
    scale = max(1.0, max(abs(x) for x in bf_i.values()) ** 2)
    assert abs(power) <= 1e-9 * scale


@settings(max_examples=40, deadline=None)
@given(
    emfs=st.tuples(
        st.floats(-10, 10, allow_nan=False),
        st.floats(-10, 10, allow_nan=False),
        st.floats(-10, 10, allow_nan=False),
    ),
    more=st.tuples(
        st.floats(-10, 10, allow_nan=False),
        st.floats(-10, 10, allow_nan=False),
        st.floats(-10, 10, allow_nan=False),
    ),
)
def test_superposition_of_sources(emfs, more):
    """Currents are additive in the sources on a fixed topology."""
    g = StandardGraph(
        "tri",
        0,
        nodes0=["a", "b"],
        branches={"b1": ("a", "b"), "b2": ("b", "a"), "b3": ("a", "b")},
    )
    rs = (1.0, 2.0, 4.0)

    def solve_with(es):
        data = {f"b{k+1}": Branch(rs[k], es[k]) for k in range(3)}
        return solve_standard(StandardNetwork(g, data))

    one, two = solve_with(emfs), solve_with(more)
    both = solve_with(tuple(x + y for x, y in zip(emfs, more)))
    for bid in ("b1", "b2", "b3"):
        assert close(both.currents[bid], one.currents[bid] + two.currents[bid], 1e-9)


def test_scaling_the_sources_scales_the_solution():
    base = solve_standard(two_branch_loop(2.0, 3.0, 1.0, -1.5))
    scaled = solve_standard(two_branch_loop(2.0, 3.0 * 3.5, 1.0, -1.5 * 3.5))
    for bid in ("b1", "b2"):
        assert close(scaled.currents[bid], 3.5 * base.currents[bid])
        assert close(scaled.voltages[bid], 3.5 * base.voltages[bid])


def test_resolving_is_bitwise_deterministic():
    rng = random.Random(99)
    _, net = random_network(rng)
    first, second = solve_standard(net), solve_standard(net)
    assert first.currents == second.currents
    assert first.voltages == second.voltages
    assert first.potentials == second.potentials


# -- failure modes ------------------------------------------------------------------


def test_branchless_network_is_rejected():
    g = StandardGraph("bare", 0, nodes0=["a"], branches={})
    with pytest.raises(EmptyNetwork):
        solve_standard(StandardNetwork(g, {}))


def test_wildly_mismatched_conductances_fail_loudly():
    g = StandardGraph(
        "chain",
        0,
        nodes0=["a", "b", "c"],
        branches={"b1": ("a", "b"), "b2": ("b", "c")},
    )
    net = StandardNetwork(g, {"b1": Branch(1e-15), "b2": Branch(1e15)})
    with pytest.raises(NumericalFailure):
        solve_standard(net)


def test_nonpositive_resistance_names_the_index():
    fam = GraphFamily(
        "divfam",
        (
            StandardGraph(
                "div",
                0,
                nodes0=["a", "b"],
                branches={"b1": ("a", "b"), "b2": ("b", "a")},
            ),
        ),
    )
    net = NsNetwork(
        "bad",
        fam,
        {
            "b1": (periodic((), (1.0,)), periodic((), (1.0,))),
            "b2": (named_generator("affine", (-1, 2), 64), periodic((), (0.0,))),
        },
    )
    op = operating_point(net, FilterOracle())
    with pytest.raises(SolverFailure, match=r"at index n=2"):
        verify_laws(op)


# -- nonstandard operating points ----------------------------------------------------


def divider_network():
    """Unit source against a growing resistor: the loop current is 1/(n+2)."""
    g = StandardGraph(
        "div", 0, nodes0=["a", "b"], branches={"b1": ("a", "b"), "b2": ("b", "a")}
    )
    fam = GraphFamily("divfam", (g,))
    return NsNetwork(
        "divider",
        fam,
        {
            "b1": (periodic((), (1.0,)), periodic((), (1.0,))),
            "b2": (named_generator("affine", (1, 1), 512), periodic((), (0.0,))),
        },
    )


def test_divider_current_is_a_certified_infinitesimal():
    op = operating_point(divider_network(), FilterOracle())
    assert op.route == "generated"
    i = op.currents["b1"]
    assert value_at(i.rep, 0) == pytest.approx(0.5, rel=1e-12)
    assert value_at(i.rep, 6) == pytest.approx(1.0 / 8.0, rel=1e-12)
    certified = i.certify(limit=0.0, monotone=True)
    assert certified.classify() is MagnitudeClass.INFINITESIMAL
    assert certified.standard_part() == 0.0


def test_divider_satisfies_the_laws():
    op = operating_point(divider_network(), FilterOracle())
    report = verify_laws(op, tol=1e-9, check_upto=64)
    assert report.ok
    ohm = [c for c in report.checks if c.law == "Ohm"]
    assert ohm and all(c.class_verdict == "equal" for c in ohm)


def test_constant_family_transfer_is_exact():
    net = NsNetwork(
        "const",
        GraphFamily(
            "onefam",
            (
                StandardGraph(
                    "one",
                    0,
                    nodes0=["a", "b"],
                    branches={"b1": ("a", "b"), "b2": ("b", "a")},
                ),
            ),
        ),
        {
            "b1": (periodic((), (1.0,)), periodic((), (3.0,))),
            "b2": (periodic((), (2.0,)), periodic((), (0.0,))),
        },
    )
    op = operating_point(net, FilterOracle())
    assert op.route == "periodic"
    # the descriptor is the constant standard solution, not an approximation
    assert op.currents["b1"].rep == periodic((), (1.0,))
    assert op.voltages["b2"].rep == periodic((), (2.0,))
    assert op.potentials["b"].rep == periodic((), (2.0,))
    report = verify_laws(op, tol=1e-9)
    assert report.ok
    assert all(c.worst == 0.0 for c in report.checks)


def test_alternating_family_solves_per_phase():
    """Phase-dependent resistance: i alternates 3/1 and 3/3 exactly."""
    g = StandardGraph(
        "alt0", 0, nodes0=["a", "b"], branches={"b1": ("a", "b"), "b2": ("b", "a")}
    )
    fam = GraphFamily("altfam", (g,))
    net = NsNetwork(
        "alt",
        fam,
        {
            "b1": (periodic((), (1.0,)), periodic((), (3.0,))),
            "b2": (periodic((), (2.0, 0.5)), periodic((), (0.0,))),
        },
    )
    op = operating_point(net, FilterOracle())
    assert op.route == "periodic"
    assert value_at(op.currents["b1"].rep, 0) == pytest.approx(1.0)
    assert value_at(op.currents["b1"].rep, 1) == pytest.approx(2.0)
    # the class equals the even-phase value under the default oracle
    assert op.currents["b1"].selected_value() == pytest.approx(1.0)
    assert verify_laws(op).ok


def test_perturbed_current_is_caught_by_kcl():
    op = operating_point(divider_network(), FilterOracle())
    nudge = Hyperreal.lift(0.1, op.oracle)
    op.currents["b1"] = op.currents["b1"] + nudge
    report = verify_laws(op, tol=1e-9, check_upto=16)
    assert not report.ok
    broken = {c.law for c in report.checks if not c.ok}
    assert "KCL" in broken


def test_operating_point_descriptors_are_reproducible():
    first = operating_point(divider_network(), FilterOracle())
    second = operating_point(divider_network(), FilterOracle())
    window = [value_at(first.currents["b2"].rep, n) for n in range(32)]
    again = [value_at(second.currents["b2"].rep, n) for n in range(32)]
    assert window == again
