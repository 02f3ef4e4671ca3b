import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbcp.circle import (
    combine, conjugate, express, format_angle, generate, multiply, order,
    parse_angle, point, representative, subgroup_equal,
)
from fbcp.errors import NotInSubgroup, ParseError, SymbolTableMismatch
from fbcp.ext import INF

from conftest import points, torsion_points

O = point()


def P(frac=0, **sym):
    return point(Fraction(frac), sym)


def test_multiply_examples():
    assert multiply(P("1/3"), P("1/2")) == P("5/6")
    assert multiply(P(0, t=1), P(0, t=-1)) == O
    assert multiply(P("2/3", t=2), P("2/3", t=1)) == P("1/3", t=3)


def test_conjugate_examples():
    assert conjugate(P("1/3")) == P("2/3")
    assert conjugate(O) == O
    assert conjugate(P("1/2")) == P("1/2")


def test_order_examples():
    assert order(P("1/3")) == 3
    assert order(P(0, t=1)) == INF
    assert order(O) == 1


def test_generate_examples():
    assert generate([P("1/3"), P("1/2")]).order == 6
    g = generate([P(0, t=2), P(0, t=3)])
    assert g.basis == (P(0, t=1),)
    assert generate([P(0, t=1), P(0, t=2)]).basis == (P(0, t=1),)


def test_subgroup_equal_examples():
    assert subgroup_equal(generate([P(0, t=1)]), generate([P(0, t=2), P(0, t=3)]))
    assert not subgroup_equal(generate([P(0, t=1)]), generate([P(0, t=2)]))
    assert subgroup_equal(generate([P("1/5")]), generate([P("2/5")]))
    with pytest.raises(SymbolTableMismatch):
        subgroup_equal(generate([P(0, t=1)]), generate([P(0, u=1)]))


def test_express_examples():
    assert express(P("2/5"), [P("1/5")]) == [2]
    with pytest.raises(NotInSubgroup):
        express(P("1/2"), [P("1/3")])
    assert express(P(0, t=1), [P(0, t=2), P(0, t=3)]) == [-1, 1]


def _brute_express(target, gens, box=6):
    best = None
    for c in itertools.product(range(-box, box + 1), repeat=len(gens)):
        if combine(c, gens) == target:
            key = [abs(x) for x in c]
            if best is None or key < best[0]:
                best = (key, list(c))
    return best


def test_express_lexmin_matches_brute_force():
    cases = [
        (P("1/6"), [P("1/2"), P("1/3")]),
        (P("1/4"), [P("1/2"), P("1/4"), P("3/4")]),
        (P("1/12"), [P("1/4"), P("1/3")]),
        (P(0, t=1), [P(0, t=2), P(0, t=3)]),
        (P("1/2", t=1), [P("1/2"), P(0, t=1), P("1/2", t=1)]),
    ]
    for target, gens in cases:
        got = express(target, gens)
        key, want = _brute_express(target, gens)
        assert [abs(x) for x in got] == key and combine(got, gens) == target


def _finite_closure(gens):
    """All multiples, by repeated addition (oracle for finite subgroups)."""
    seen = {O}
    frontier = [O]
    while frontier:
        p = frontier.pop()
        for g in gens:
            for q in (p + g, p - g):
                if q not in seen:
                    seen.add(q)
                    frontier.append(q)
    return seen


@given(st.lists(torsion_points(), min_size=1, max_size=4))
def test_finite_generate_matches_closure(gens):
    H = generate(gens)
    elems = _finite_closure(gens)
    assert H.order == len(elems)
    assert set(H.elements()) == elems
    assert all(H.contains(e) for e in elems)


@given(points(), points(), points())
def test_group_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + O == a
    assert a + conjugate(a) == O


@given(st.lists(points(), min_size=1, max_size=4))
def test_generate_idempotent(gens):
    H = generate(gens, ["t", "u"])
    assert generate(H.basis, ["t", "u"]) == H
    assert all(H.contains(g) for g in gens)


@given(st.lists(points(), min_size=1, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_express_sound(gens, coeffs):
    target = combine(coeffs[:len(gens)], gens)
    c = express(target, gens)
    assert combine(c, gens) == target


@given(torsion_points(max_den=30))
def test_order_minimal(a):
    n = order(a)
    assert a.scale(n) == O
    assert all(a.scale(k) != O for k in range(1, n))


@given(points())
def test_literal_round_trip(a):
    assert parse_angle(format_angle(a)) == a


def test_representative_folds_pairs():
    assert representative(P("2/3")) == P("1/3")
    assert representative(P(0, t=-1)) == P(0, t=1)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_angle("5/3", check_range=True)
    with pytest.raises(ParseError):
        parse_angle("1/0")
    with pytest.raises(ParseError):
        parse_angle("sym:t", symbols=["u"])
