from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbcp.circle import point
from fbcp.errors import NotAlmostPeriodic
from fbcp.ext import INF
from fbcp.presentation import (
    afp_presentation, cocycle_presentation, normalizer_summary, relative_commutant, section_words,
    verify_cocycle,
)
from fbcp.rep import dimension, make_rep, parse_rep


def R(body):
    return parse_rep(body)


def test_afp_examples():
    p = afp_presentation(R("atom sym:t mult 1; atom 1 mult 1"))
    assert (p.m, p.n) == (2, 1) and p.acting_weights() == [point(0, {"t": 1})]
    p = afp_presentation(R("atom -1 mult 2"))
    assert (p.m, p.n) == (0, 2) and p.acting_weights() == [point(Fraction(1, 2))] * 2
    p = afp_presentation(make_rep())
    assert (p.m, p.n) == (0, 0)
    with pytest.raises(NotAlmostPeriodic):
        afp_presentation(R("wm left_regular"))


def test_relative_commutant_examples():
    rc = relative_commutant(R("atom 1/3 mult 1"))
    assert rc.rank == 2 and rc.kernel_rank == 1 and rc.witness.rank == 1
    assert relative_commutant(R("atom sym:t mult 1")).rank == 1
    assert relative_commutant(R("atom sym:t mult 2")).rank == INF


def test_cocycle_examples():
    c = cocycle_presentation(R("atom sym:t mult 1"))
    assert c.K.is_infinite_cyclic and c.cocycle_trivial is True
    assert "Z |x (L F_inf (x) L^inf(S^1))" in c.shift_description
    c = cocycle_presentation(R("atom 1/3 mult 1"))
    assert c.K.order == 3 and len(c.table) == 3 and c.verified
    c = cocycle_presentation(R("atom 1 mult 3"))
    assert c.K.order == 1 and c.cocycle_trivial is True
    c = cocycle_presentation(R("atom sym:t mult 1; atom sym:u mult 1"))
    assert c.cocycle_trivial is None


def test_normaliser_examples():
    s = normalizer_summary(R("wm left_regular; atom sym:t mult 1"))
    assert s.presentation == afp_presentation(R("atom sym:t mult 1"))
    s = normalizer_summary(R("wm left_regular"))
    assert s.presentation is None and "A_pi itself" in s.statement
    s = normalizer_summary(R("atom 1/3 mult 1"))
    assert "whole algebra" in s.statement


@st.composite
def finite_aps(draw):
    atoms = []
    for _ in range(draw(st.integers(1, 3))):
        den = draw(st.sampled_from([1, 2, 3, 4, 6]))
        atoms.append((point(Fraction(draw(st.integers(0, den - 1)), den)), draw(st.integers(1, 2))))
    return make_rep(atoms)


@given(finite_aps())
def test_rank_identities(ap):
    p = afp_presentation(ap)
    assert 2 * p.n1 + p.n2 + p.m0 == dimension(ap)
    rc = relative_commutant(ap)
    if p.n and rc.image_order != INF:
        assert rc.rank == p.m + 1 + rc.image_order * (p.n - 1)
        assert rc.witness.rank == rc.kernel_rank


@given(finite_aps())
def test_cocycle_identity_brute_force(ap):
    c = cocycle_presentation(ap)
    if c.sections:
        weights = afp_presentation(ap).acting_generators()
        sec = section_words(weights, c.K)
        assert verify_cocycle(sec, c.K.elements(), weights)
        assert all(w.weight(weights) == k for k, w in sec.items())
