import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropmwis.circuit import (BOTTOM, MAX, PLUS, VAR, ZERO, CircuitBuilder, Gate, computes,
                              evaluate, is_bottom, is_formula, monomials, restrict_gate_neg_inf,
                              support, validate_circuit, wrap_nonneg)
from tropmwis.errors import CircuitError, InvalidInput


def circ(gates, out):
    return validate_circuit([Gate(*g) for g in gates], out)


# max(plus(x0, x2), x1)
MPX = [(VAR, 0), (VAR, 2), (PLUS, 0, 1), (VAR, 1), (MAX, 2, 3)]


def test_validate_examples():
    C = circ([(VAR, 0), (VAR, 1), (MAX, 0, 1)], 2)
    assert C.size == 3
    with pytest.raises(CircuitError, match="cycle"):
        circ([(VAR, 0), (MAX, 1, 0)], 1)
    with pytest.raises(CircuitError):
        circ([(VAR, 0)], 3)
    with pytest.raises(CircuitError):
        circ([(VAR, 0), (MAX, 0, 7)], 1)
    with pytest.raises(CircuitError):
        circ([("c", 0)], 0)


def test_evaluate_examples():
    C = circ(MPX, 4)
    assert evaluate(C, [2, 3, 2]) == 4
    assert evaluate(C, [BOTTOM, 3, 2]) == 3
    assert evaluate(circ([(ZERO,)], 0), []) == 0
    assert is_bottom(evaluate(C, [BOTTOM, BOTTOM, 0]))
    with pytest.raises(InvalidInput):
        evaluate(C, [1])


def test_support_examples():
    C = circ([(VAR, 0), (VAR, 1), (ZERO,), (MAX, 1, 2), (PLUS, 0, 3)], 4)
    assert support(C) == {0, 1}
    assert support(C, 2) == frozenset()
    assert support(circ([(VAR, 5)], 0)) == {5}


def test_formula_examples():
    assert is_formula(circ(MPX, 4))
    diamond = circ([(VAR, 0), (VAR, 1), (MAX, 0, 1), (PLUS, 2, 2)], 3)
    assert not is_formula(diamond)
    assert is_formula(circ([(VAR, 0)], 0))


def test_restrict_examples():
    C = circ(MPX, 4)
    R = restrict_gate_neg_inf(C, 2)
    assert monomials(R).monomials == {frozenset({1})}
    R = restrict_gate_neg_inf(C, 3)
    assert monomials(R).monomials == {frozenset({0, 2})}
    R = restrict_gate_neg_inf(restrict_gate_neg_inf(C, 3), 0)
    assert R.is_empty and R.output is None
    assert is_bottom(evaluate(R, [1, 1, 1]))


def test_monomials_examples():
    C = circ([(VAR, 0), (VAR, 2), (PLUS, 0, 1), (VAR, 1), (ZERO,), (MAX, 3, 4), (MAX, 2, 5)], 6)
    assert monomials(C).monomials == {frozenset(), frozenset({1}), frozenset({0, 2})}
    sq = monomials(circ([(VAR, 0), (PLUS, 0, 0)], 1))
    assert sq.multilinearity_violated and sq.square_witness == 0
    assert monomials(C, cap=2).truncated


def test_wrap_examples():
    W = wrap_nonneg(circ([(VAR, 0)], 0))
    assert evaluate(W, [-5]) == 0
    W = wrap_nonneg(circ([(VAR, 0), (VAR, 1), (MAX, 0, 1)], 2))
    assert monomials(W).monomials == {frozenset(), frozenset({0}), frozenset({1})}


def test_builder_balanced_and_folding():
    b = CircuitBuilder()
    xs = [b.var(i) for i in range(5)]
    top = b.max_all(xs)
    C = b.build(top)
    assert monomials(C).monomials == {frozenset({i}) for i in range(5)}
    assert C.size == 9
    b = CircuitBuilder()
    assert b.plus(b.var(0), b.zero()) == b.var(0)
    assert b.max(b.var(1), b.var(1)) == b.var(1)
    assert b.plus_all([]) == b.zero()


# random circuits for property tests

@st.composite
def random_circuits(draw, n=4, max_gates=14):
    gates = []
    for i in range(draw(st.integers(1, max_gates))):
        if i < 2 or draw(st.integers(0, 3)) == 0:
            if draw(st.booleans()):
                gates.append(Gate(VAR, draw(st.integers(0, n - 1))))
            else:
                gates.append(Gate(ZERO))
        else:
            kind = draw(st.sampled_from([MAX, PLUS]))
            gates.append(Gate(kind, draw(st.integers(0, i - 1)), draw(st.integers(0, i - 1))))
    return validate_circuit(gates, len(gates) - 1)


def _brute_value(ms, w):
    best = BOTTOM
    for m in ms:
        vals = [w[v] for v in m]
        if any(is_bottom(x) for x in vals):
            continue
        s = sum(vals)
        best = s if is_bottom(best) else max(best, s)
    return best


@settings(max_examples=150, deadline=None)
@given(random_circuits(), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_evaluate_equals_monomial_max(C, w):
    # without multilinearity violations evaluation is the max over monomial sums
    ms = monomials(C)
    if ms.multilinearity_violated:
        return
    assert evaluate(C, w) == _brute_value(ms.monomials, w)


@settings(max_examples=150, deadline=None)
@given(random_circuits())
def test_support_is_union_of_monomials(C):
    ms = monomials(C)
    if ms.truncated or ms.multilinearity_violated:
        return
    assert support(C) == frozenset().union(*ms.monomials)


@settings(max_examples=120, deadline=None)
@given(random_circuits(), st.data())
def test_restriction_removes_monomials(C, data):
    g = data.draw(st.sampled_from(sorted(C.reachable)))
    R = restrict_gate_neg_inf(C, g)
    before, after = monomials(C), monomials(R)
    if before.multilinearity_violated:
        return
    assert after.monomials <= before.monomials
    rng = random.Random(g)
    for _ in range(10):
        w = [rng.randint(-3, 3) for _ in range(4)]
        a, b = evaluate(R, w), evaluate(C, w)
        assert is_bottom(a) or a <= b


@settings(max_examples=100, deadline=None)
@given(random_circuits())
def test_computes_agrees_with_monomials(C):
    ms = monomials(C)
    if ms.multilinearity_violated:
        return
    for r in range(5):
        for I in itertools.combinations(range(4), r):
            assert computes(C, I) == (frozenset(I) in ms.monomials)


@settings(max_examples=100, deadline=None)
@given(random_circuits(), st.integers(0, 3), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_monotone_in_weights(C, v, w):
    lo = evaluate(C, w)
    w2 = list(w)
    w2[v] += 2
    hi = evaluate(C, w2)
    assert is_bottom(lo) or hi >= lo
