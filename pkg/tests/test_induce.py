import random

import pytest

import gen
from threelie import catalog
from threelie.errors import NotTrace, ShapeMismatch, ValidationFailure
from threelie.exactla import Mat, vscale
from threelie.induce import (
    BinaryTwistedOperator,
    TraceMap,
    adjoint_preset,
    binary_twisted_ns,
    check_trace,
    diagram_check,
    induce_3lie,
    induce_3ns,
    induce_cocycle,
    induce_rep,
    induced_twisted,
)
from threelie.nslie import check_3ns
from threelie.structures import (
    adjoint_rep_lie,
    check_cocycle3,
    check_filippov,
    check_rep3,
    zero_cocycle_lie,
)
from threelie.twistop import check_twisted

L3 = catalog.l3()


def test_l3_trace_examples():
    tau = TraceMap((0, 0, 1))
    assert check_trace(L3, tau).passed
    assert induce_3lie(L3, tau) == catalog.a3()
    bad = TraceMap((0, 1, 0))
    r = check_trace(L3, bad)
    assert not r.passed
    assert r.details[0].indices == (0, 1)
    with pytest.raises(NotTrace):
        induce_3lie(L3, bad)


def test_trace_shape():
    with pytest.raises(ShapeMismatch):
        check_trace(L3, TraceMap((1, 0)))


def test_traces_on_catalog():
    # sl2 is perfect, so only tau = 0 survives
    assert gen.trace_basis(catalog.sl2()) == []
    assert len(gen.trace_basis(catalog.heisenberg())) == 2
    assert len(gen.trace_basis(catalog.gl2())) == 1


def test_induced_structures_are_valid():
    rng = random.Random(1)
    for _ in range(30):
        g = gen.random_lie(rng)
        tau = gen.random_trace(rng, g)
        alg = induce_3lie(g, tau)
        assert check_filippov(alg).passed
        rho = gen.random_rep_lie(rng, g)
        rep = induce_rep(g, rho, tau)
        assert check_rep3(alg, rep).passed
        theta = gen.random_cocycle_lie(rng, g, rho)
        assert check_cocycle3(alg, rep, induce_cocycle(g, theta, tau)).passed


def test_induction_is_linear_in_tau():
    rng = random.Random(2)
    for _ in range(10):
        g = gen.random_lie(rng)
        tau = gen.random_trace(rng, g)
        c = gen.rq(rng, True)
        a, b = induce_3lie(g, tau), induce_3lie(g, tau.scale(c))
        assert b.table == {k: vscale(c, v) for k, v in a.table.items()}


def test_induced_twisted_operators():
    rng = random.Random(3)
    for _ in range(30):
        bop = gen.random_binary(rng)
        tau = gen.random_trace(rng, bop.g)
        assert check_twisted(induced_twisted(bop, tau)).passed


def test_induced_twisted_rejects_non_operator():
    bad = adjoint_preset(catalog.aff2(), Mat.from_rows([[0, 1], [1, 0]]))
    with pytest.raises(ValidationFailure):
        induced_twisted(bad, TraceMap((1, 0)))


def test_induced_ns_structures():
    rng = random.Random(4)
    for _ in range(15):
        bop = gen.random_binary(rng)
        ns = binary_twisted_ns(bop)
        tau = gen.random_trace(rng, ns)
        assert check_3ns(induce_3ns(ns, tau)).passed


def test_l3_diagram():
    bop = gen.l3_binary_fixture()
    for tau in [TraceMap((1, 0, 0)), TraceMap((0, 0, 1)), TraceMap((2, 0, -1))]:
        r = diagram_check(bop, tau)
        assert r.passed
        assert r.extra["route1"] == r.extra["route2"]


def test_random_diagrams_commute():
    rng = random.Random(5)
    for _ in range(15):
        bop = gen.random_binary(rng)
        tau = gen.random_trace(rng, bop.g)
        assert diagram_check(bop, tau).passed


def test_diagram_discrepancy_formula():
    rng = random.Random(6)
    failing = 0
    for _ in range(15):
        bop = gen.random_binary(rng)
        tau = gen.random_trace(rng, bop.g)
        tp = TraceMap(gen.rvec(rng, bop.v_dim))
        r = diagram_check(bop, tau, tp, limit=1000)
        assert r.extra["discrepancy_formula"] == "pass"
        failing += not r.passed
    assert failing


def test_l3_diagram_with_wrong_trace_fails():
    # T = E11 on adjoint L3: rho(Tu) is nonzero, unlike the E33 fixture
    bop = adjoint_preset(L3, Mat.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))
    tau = TraceMap((0, 0, 1))
    assert diagram_check(bop, tau).passed
    r = diagram_check(bop, tau, TraceMap((0, 1, 0)))
    assert not r.passed
    assert r.details[0].identity == "curly"
    assert r.extra["discrepancy_formula"] == "pass"


def test_zero_operator_diagram():
    g = catalog.heisenberg()
    bop = BinaryTwistedOperator(g, adjoint_rep_lie(g), zero_cocycle_lie(3, 3), Mat.zeros(3, 3))
    r = diagram_check(bop, TraceMap((1, 0, 0)))
    assert r.passed
    assert r.extra["route1"].curly == {} and r.extra["route1"].bracket == {}
