import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbcp.errors import DimensionMismatch, SizeGuard
from fbcp.freeprob import (
    QSqrt3, CumulantTables, catalan, circular_moments, cumulants_from_moments, enumerate_nc,
    evaluate_moment, moments_from_cumulants, ov_cumulants_from_moments, ov_moment,
    ov_moments_from_cumulants, reduction_report, semicircle_moments, trace_distribution,
    verify_regular_plus_trivial, wick_pairing,
)
from fbcp.rep import parse_rep

Q = Fraction


def set_partitions(items):
    """Every set partition of a list, by placing the first element."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def crosses(p):
    for b1, b2 in itertools.permutations(p, 2):
        for a, c in itertools.combinations(sorted(b1), 2):
            for b, d in itertools.combinations(sorted(b2), 2):
                if a < b < c < d:
                    return True
    return False


def brute_nc(n):
    return {tuple(sorted(tuple(sorted(b)) for b in p))
            for p in set_partitions(list(range(1, n + 1))) if not crosses(p)}


def test_nc_small_examples():
    assert len(enumerate_nc(1)) == 1
    assert len(enumerate_nc(3)) == 5
    assert len(enumerate_nc(4)) == 14 == sum(1 for _ in set_partitions([1, 2, 3, 4])) - 1


@pytest.mark.parametrize("n", range(1, 9))
def test_nc_matches_brute_force(n):
    got = [p.blocks for p in enumerate_nc(n)]
    assert len(got) == len(set(got))
    assert set(got) == brute_nc(n)


def test_catalan_recurrence():
    c = [1]
    for n in range(10):
        c.append(sum(c[k] * c[n - k] for k in range(n + 1)))
    assert [catalan(n) for n in range(11)] == c
    assert [len(enumerate_nc(n)) for n in range(1, 11)] == c[1:]
    with pytest.raises(SizeGuard):
        enumerate_nc(17)


def brute_moments(c, n):
    """Sum over all NC partitions of {1..n} of the product of block cumulants."""
    total = Q(0)
    for p in brute_nc(n):
        v = Q(1)
        for b in p:
            v *= c[len(b) - 1] if len(b) - 1 < len(c) else 0
        total += v
    return total


def test_scalar_examples():
    m = semicircle_moments(6)
    assert m == [1, 0, 1, 0, 2, 0, 5]
    assert moments_from_cumulants([0, 0, 0], 4) == [1, 0, 0, 0, 0]
    v = Q(3, 7)
    m = moments_from_cumulants([0, v], 4)
    assert (m[2], m[4]) == (v, 2 * v * v)
    assert cumulants_from_moments([1, 0, 1, 0, 2, 0, 5], 6) == [0, 1, 0, 0, 0, 0]
    assert cumulants_from_moments([1, 0, 0, 0, 0], 4) == [0, 0, 0, 0]
    c = cumulants_from_moments([1, 0, 1, 0, 3], 4)
    assert c[1] == 1 and c[3] == 1


def test_semicircle_catalan_and_odd():
    m = semicircle_moments(12)
    assert [m[2 * j] for j in range(1, 7)] == [1, 2, 5, 14, 42, 132]
    assert all(m[2 * j + 1] == 0 for j in range(6))


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=1, max_size=7))
@settings(max_examples=40)
def test_moments_match_brute_force(c):
    m = moments_from_cumulants(c, 7)
    for n in range(1, 8):
        assert m[n] == brute_moments(c, n)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=12, max_size=12))
def test_scalar_round_trip(c):
    assert cumulants_from_moments(moments_from_cumulants(c, 12), 12) == c


def test_circular():
    assert circular_moments("cs") == 1
    assert circular_moments("cc") == 0
    assert circular_moments("cscs") == 2
    assert circular_moments("ccss") == 1


def pairing_value(dist, args, pairing):
    """Nested eta evaluation of one NC pairing of the X positions 0..n."""
    k = dist.k
    partner = {}
    for a, b in pairing:
        partner[a], partner[b] = b, a

    def seg(lo, hi):
        # product of X's lo..hi, args between them, as a vector
        out = tuple([Q(1)] * k)
        i = lo
        while i <= hi:
            j = partner[i]
            inner = tuple([Q(1)] * k) if j == i + 1 else tuple(
                x * y * z for x, y, z in zip(args[i], seg(i + 1, j - 1), args[j - 1]))
            if j == i + 1:
                inner = args[i]
            v = dist.apply_eta(inner)
            out = tuple(x * y for x, y in zip(out, v))
            if j < hi:
                out = tuple(x * y for x, y in zip(out, args[j]))
            i = j + 1
        return out

    return seg(0, len(args))


def brute_ov_moment(dist, args):
    n = len(args)
    total = tuple([Q(0)] * dist.k)
    for p in brute_nc(n + 1):
        if all(len(b) == 2 for b in p):
            pairs = [(a - 1, b - 1) for a, b in p]
            v = pairing_value(dist, args, pairs)
            total = tuple(x + y for x, y in zip(total, v))
    return total


def test_ov_examples():
    d = trace_distribution([Q(1, 2), Q(1, 2)])
    assert ov_moment(d, [(1, 0)]) == (Q(1, 2), Q(1, 2))
    assert ov_moment(d, [(1, 0), (0, 1)]) == (0, 0)
    assert ov_moment(d, [(1, 1)] * 3) == (2, 2)
    with pytest.raises(DimensionMismatch):
        ov_moment(d, [(1, 0, 0)])


vec2 = st.tuples(st.fractions(min_value=-2, max_value=2, max_denominator=3),
                 st.fractions(min_value=-2, max_value=2, max_denominator=3))


@given(st.lists(vec2, min_size=1, max_size=5),
       st.sampled_from([(Q(1, 2), Q(1, 2)), (Q(1, 3), Q(2, 3))]))
@settings(max_examples=40)
def test_ov_moment_matches_pairings(args, tau):
    d = trace_distribution(tau)
    assert ov_moment(d, args) == brute_ov_moment(d, args)


@given(st.lists(vec2, min_size=1, max_size=6))
@settings(max_examples=30)
def test_ov_trace_cyclic(args):
    d = trace_distribution([Q(1, 3), Q(2, 3)])

    def t(a):
        return d.trace(tuple(x * y for x, y in zip(a[0], ov_moment(d, a[1:]))))

    rotated = args[1:] + args[:1]
    assert t(args) == t(rotated)


def random_tables(k, order, seed):
    import random
    rng = random.Random(seed)
    tables = {}
    for n in range(order):
        tables[n] = {key: tuple(Q(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(k))
                     for key in itertools.product(range(k), repeat=n)}
    return CumulantTables(k, tables)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ov_round_trip(k):
    cum = random_tables(k, 6, seed=k)
    back = ov_cumulants_from_moments(ov_moments_from_cumulants(cum, 6), k, 6)
    for n in range(6):
        want = {key: v for key, v in cum.tables[n].items() if any(v)}
        assert back.tables[n] == want


def test_ov_scalar_agrees():
    c = [Q(1, 2), Q(2), Q(-1), Q(1, 3)]
    cum = CumulantTables(1, {n: {(0,) * n: (c[n],)} for n in range(4)})
    m = moments_from_cumulants(c, 4)
    for n in range(4):
        assert evaluate_moment(cum, [(1,)] * n) == (m[n + 1],)


def test_reduction():
    assert verify_regular_plus_trivial(1, 1, 4)
    assert verify_regular_plus_trivial(2, 2, 4)
    r = reduction_report(1, 3, 5)
    assert r.ok and not r.moment_identity
    with pytest.raises(SizeGuard):
        reduction_report(2, 2, 9)
    with pytest.raises(SizeGuard):
        reduction_report(4, 5, 2)


def test_wick_examples():
    rep = parse_rep("atom 1/4 mult 1")
    v = wick_pairing([(1, 0)], [(1, 0)], rep, 2)
    assert v.exact and v.value == -1
    assert wick_pairing([(1, 0)] * 2, [(1, 0)] * 3, rep, 1).value == 0
    xi, eta = (Q(1, 2), Q(1, 3)), (Q(2), Q(-1))
    inner = xi[0] * eta[0] + xi[1] * eta[1]
    assert wick_pairing([xi, xi], [eta, eta], rep, 0).value == inner ** 2


def test_wick_twelfth_and_float():
    v = wick_pairing([(1, 0)], [(1, 0)], parse_rep("atom 1/12 mult 1"), 1)
    assert v.exact and v.value == QSqrt3(0, Q(1, 2))
    v = wick_pairing([(1, 0)], [(1, 0)], parse_rep("atom 1/5 mult 1"), 1)
    import math
    assert not v.exact and abs(v.value - math.cos(2 * math.pi / 5)) <= v.tolerance
    rep = parse_rep("atom sym:t mult 1")
    v = wick_pairing([(1, 0)], [(1, 0)], rep, 1, assign={"t": 0.25})
    assert abs(v.value) < 1e-12
    with pytest.raises(DimensionMismatch):
        wick_pairing([(1, 0)], [(1, 0)], rep, 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_basis_memo_matches_general_evaluation(k):
    from fbcp.freeprob import _BasisMoments, _basis
    cum = random_tables(k, 5, seed=10 + k)
    ev = _BasisMoments(cum)
    for n in range(5):
        for key in itertools.product(range(k), repeat=n):
            assert ev(key) == evaluate_moment(cum, [_basis(k, i) for i in key])
