"""Non-crossing partitions and moment-cumulant transforms.

Indexing convention: ``c[n]`` is the cumulant with ``n`` algebra slots,
i.e. the one seeing ``n + 1`` copies of X.  In the usual scalar notation
``c[n] = kappa_{n+1}``, so a semicircular element has only ``c[1]``
nonzero (its variance).  Moment sequences are ``m[0..K]`` with m[0] = 1.

Operator-valued computations run over the commutative algebra C^k of
diagonal vectors; products of algebra elements are pointwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DimensionMismatch, SizeGuard

NC_LIMIT = 16
MOMENT_LIMIT = 16
REDUCTION_ORDER_LIMIT = 8
REDUCTION_DIM_LIMIT = 16
# basis tuples visited by the reduction check, summed over orders
REDUCTION_BUDGET = 200_000


# ------------------------------------------------------------ partitions


@dataclass(frozen=True)
class NCPartition:
    n: int
    blocks: tuple  # sorted tuples of 1-based indices, ordered by minimum

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    @property
    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]


def is_noncrossing(blocks) -> bool:
    owner = {}
    for i, b in enumerate(blocks):
        for x in b:
            owner[x] = i
    pts = sorted(owner)
    for a, b, c, d in itertools.combinations(pts, 4):
        if owner[a] == owner[c] and owner[b] == owner[d] and owner[a] != owner[b]:
            return False
    return True


def _nc_interval(lo: int, hi: int):
    """NC partitions of lo..hi (inclusive) as lists of blocks."""
    if lo > hi:
        yield []
        return
    rest = list(range(lo + 1, hi + 1))
    for size in range(len(rest) + 1):
        for others in itertools.combinations(rest, size):
            block = (lo,) + others
            bounds = list(block) + [hi + 1]
            gaps = [range(bounds[j] + 1, bounds[j + 1]) for j in range(len(block))]
            for parts in itertools.product(*[list(_nc_interval(g.start, g.stop - 1)) for g in gaps]):
                blocks = [block]
                for p in parts:
                    blocks += p
                yield blocks


def _guard(n: int, limit: int, what: str):
    if n < 0:
        raise ValueError(f"{what} must be nonnegative")
    if n > limit:
        raise SizeGuard(f"{what} {n} exceeds the limit {limit}")


def enumerate_nc(n: int) -> list[NCPartition]:
    """All non-crossing partitions of {1..n}, in a fixed order."""
    _guard(n, NC_LIMIT, "n")
    out = []
    for blocks in _nc_interval(1, n):
        out.append(NCPartition(n, tuple(sorted(blocks))))
    return out


def nc_pairings(n: int) -> list[NCPartition]:
    return [p for p in enumerate_nc(n) if p.is_pairing]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


# ------------------------------------------------------- scalar transforms


def _q(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def moments_from_cumulants(c, order: int) -> list:
    """m[0..order] from c[0..order-1] (missing entries count as 0)."""
    _guard(order, MOMENT_LIMIT, "order")
    c = [_q(x) for x in c] + [Fraction(0)] * max(0, order - len(c))
    m = [Fraction(1)]
    for n in range(1, order + 1):
        # first block of size s: s-1 gaps plus the tail, all moments
        total = Fraction(0)
        for s in range(1, n + 1):
            if c[s - 1] == 0:
                continue
            total += c[s - 1] * _gap_sum(m, s, n - s)
        m.append(total)
    return m


def _gap_sum(m, parts: int, total: int):
    """Sum over compositions i_1 + ... + i_parts = total of prod m[i_j]."""
    poly = [Fraction(1)] + [Fraction(0)] * total
    for _ in range(parts):
        new = [Fraction(0)] * (total + 1)
        for a, x in enumerate(poly):
            if x:
                for b in range(total + 1 - a):
                    new[a + b] += x * m[b]
        poly = new
    return poly[total]


def cumulants_from_moments(m, order: int) -> list:
    """Inverse of ``moments_from_cumulants``: c[0..order-1] from m[0..order]."""
    _guard(order, MOMENT_LIMIT, "order")
    m = [_q(x) for x in m]
    if len(m) < order + 1:
        raise ValueError(f"need moments m[0..{order}], got {len(m)} values")
    if m[0] != 1:
        raise ValueError("m[0] must be 1")
    c: list = []
    for n in range(1, order + 1):
        # moments of the partial sequence with c[n-1] = 0 give the crossing-free rest
        partial = moments_from_cumulants(c, n)[n]
        c.append(m[n] - partial)
    return c


def semicircle_moments(order: int, variance=1) -> list:
    return moments_from_cumulants([0, variance], order)


def circular_moments(word: str, variance=1) -> Fraction:
    """tau of a word in c and c* ('c', 's') for a circular element: the
    non-crossing pairings joining each c with a c*, weight ``variance``
    per pair."""
    n = len(word)
    if any(ch not in "cs" for ch in word):
        raise ValueError("word letters must be 'c' or 's' (for c*)")
    if n == 0:
        return Fraction(1)
    if n % 2:
        return Fraction(0)
    total = 0
    for p in nc_pairings(n):
        if all(word[a - 1] != word[b - 1] for a, b in p.blocks):
            total += 1
    return _q(variance) ** (n // 2) * total


# ----------------------------------------------- operator-valued transforms


@dataclass(frozen=True)
class OVDistribution:
    """X semicircular over C^k: eta(b)_i = sum_j eta[i][j] b_j."""

    tau: tuple
    eta: tuple

    def __post_init__(self):
        k = len(self.tau)
        if k == 0 or sum(self.tau) != 1 or any(t <= 0 for t in self.tau):
            raise ValueError("trace weights must be positive and sum to 1")
        if len(self.eta) != k or any(len(r) != k for r in self.eta):
            raise DimensionMismatch(f"eta must be {k}x{k}")
        if any(x < 0 for r in self.eta for x in r):
            raise ValueError("eta must be entrywise nonnegative")

    @property
    def k(self) -> int:
        return len(self.tau)

    def apply_eta(self, b) -> tuple:
        return tuple(sum(e * x for e, x in zip(row, b)) for row in self.eta)

    def trace(self, b):
        return sum(t * x for t, x in zip(self.tau, b))

    def as_cumulants(self) -> "CumulantTables":
        k = self.k
        one = {(j,): tuple(self.eta[i][j] for i in range(k)) for j in range(k)}
        return CumulantTables(k, {1: {key: v for key, v in one.items() if any(v)}})


def trace_distribution(tau) -> OVDistribution:
    """eta = tau(.) 1, the completely positive map used for free Krieger algebras."""
    tau = tuple(_q(t) for t in tau)
    return OVDistribution(tau, tuple(tau for _ in tau))


def _vec(v, k):
    v = tuple(_q(x) for x in v)
    if len(v) != k:
        raise DimensionMismatch(f"expected a vector of length {k}, got {len(v)}")
    return v


def _mul(a, b):
    return tuple(x * y for x, y in zip(a, b))


def _addv(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class CumulantTables:
    """Multilinear maps c[n]: (C^k)^n -> C^k stored on basis tuples.

    ``tables[n]`` maps index tuples to vectors; absent keys are zero.
    """

    k: int
    tables: dict

    def evaluate(self, n: int, args) -> tuple | None:
        table = self.tables.get(n)
        if not table:
            return None
        # slots that are scaled basis vectors reduce to one table lookup
        key, w = [], Fraction(1)
        for a in args:
            nz = [i for i, x in enumerate(a) if x]
            if len(nz) > 1:
                break
            if not nz:
                return None
            key.append(nz[0])
            w *= a[nz[0]]
        else:
            val = table.get(tuple(key))
            return None if val is None else tuple(w * x for x in val)
        acc = [Fraction(0)] * self.k
        for key, val in table.items():
            w = Fraction(1)
            for a, i in zip(args, key):
                w *= a[i]
                if not w:
                    break
            if w:
                for i, x in enumerate(val):
                    acc[i] += w * x
        return tuple(acc)


def evaluate_moment(cum: CumulantTables, args) -> tuple:
    """E(X a_1 X ... a_n X), summing c^(pi) over all non-crossing pi.

    The block holding the first X is chosen first; each gap between its
    points is itself an interval evaluated recursively.
    """
    k = cum.k
    args = [_vec(a, k) for a in args]
    n = len(args)
    one = tuple([Fraction(1)] * k)
    zero = tuple([Fraction(0)] * k)

    @lru_cache(maxsize=None)
    def seg(lo: int, hi: int) -> tuple:
        # X positions lo..hi with args[lo..hi-1] between them
        total = zero
        rest = range(lo + 1, hi + 1)
        for size in range(len(rest) + 1):
            if size not in cum.tables or not cum.tables[size]:
                continue
            for others in itertools.combinations(rest, size):
                pts = (lo,) + others
                slots = []
                for a, b in zip(pts, pts[1:]):
                    inner = args[b - 1] if b == a + 1 else _mul(_mul(args[a], seg(a + 1, b - 1)), args[b - 1])
                    slots.append(inner)
                val = cum.evaluate(size, slots)
                if val is None or not any(val):
                    continue
                last = pts[-1]
                if last < hi:
                    val = _mul(_mul(val, args[last]), seg(last + 1, hi))
                total = _addv(total, val)
        return total

    return seg(0, n) if n >= 0 else one


class _BasisMoments:
    """evaluate_moment on basis tuples, memoized on index sub-words.

    With basis arguments every gap product e_a * m * e_b is zero unless
    a == b, so slots stay scaled basis vectors and each cumulant term is a
    single table lookup.  Sub-word values are shared across calls; the
    top-level word is not stored, so a table added for its length later
    (the inverse transform does this) never meets a stale entry.
    """

    def __init__(self, cum: CumulantTables):
        self.cum = cum
        self.k = cum.k
        self.zero = tuple([Fraction(0)] * self.k)
        self.cache = {}

    def __call__(self, key: tuple) -> tuple:
        return self._seg(tuple(key), store=False)

    def _seg(self, w: tuple, store: bool = True) -> tuple:
        hit = self.cache.get(w)
        if hit is not None:
            return hit
        L = len(w)
        acc = [Fraction(0)] * self.k
        tables = self.cum.tables
        for size in range(L + 1):
            table = tables.get(size)
            if not table:
                continue
            for others in itertools.combinations(range(1, L + 1), size):
                pts = (0,) + others
                idx, scale = [], Fraction(1)
                for a, b in zip(pts, pts[1:]):
                    if b == a + 1:
                        idx.append(w[a])
                        continue
                    if w[a] != w[b - 1]:
                        scale = 0
                        break
                    scale *= self._seg(w[a + 1:b - 1])[w[a]]
                    if not scale:
                        break
                    idx.append(w[a])
                if not scale:
                    continue
                val = table.get(tuple(idx))
                if val is None:
                    continue
                last = pts[-1]
                if last < L:
                    # val * e_j * tail is supported on j alone
                    j = w[last]
                    if val[j]:
                        acc[j] += scale * val[j] * self._seg(w[last + 1:])[j]
                    continue
                for i, x in enumerate(val):
                    if x:
                        acc[i] += scale * x
        out = tuple(acc)
        if store:
            self.cache[w] = out
        return out


def ov_moment(dist: OVDistribution, args) -> tuple:
    """E(X a_1 X ... a_n X) for an operator-valued semicircular X."""
    args = [_vec(a, dist.k) for a in args]
    if len(args) % 2 == 0:
        return tuple([Fraction(0)] * dist.k)
    return evaluate_moment(dist.as_cumulants(), args)


def _basis(k, i):
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(k))


def ov_moments_from_cumulants(cum: CumulantTables, order: int) -> dict:
    """Moment tables phi[n] on basis tuples for n = 0..order-1."""
    _guard(order, MOMENT_LIMIT, "order")
    out = {}
    ev = _BasisMoments(cum)
    for n in range(order):
        table = {}
        for key in itertools.product(range(cum.k), repeat=n):
            v = ev(key)
            if any(v):
                table[key] = v
        out[n] = table
    return out


def ov_cumulants_from_moments(moments: dict, k: int, order: int) -> CumulantTables:
    """Inverse transform: peel off the one-block term order by order."""
    _guard(order, MOMENT_LIMIT, "order")
    cum = CumulantTables(k, {})
    zero = tuple([Fraction(0)] * k)
    ev = _BasisMoments(cum)
    for n in range(order):
        table = {}
        for key in itertools.product(range(k), repeat=n):
            rest = ev(key)
            v = tuple(a - b for a, b in zip(moments.get(n, {}).get(key, zero), rest))
            if any(v):
                table[key] = v
        cum.tables[n] = table
    return cum


# ------------------------------------------------- regular + trivial check


@dataclass(frozen=True)
class ReductionReport:
    k: int
    m: int
    order: int
    moments_agree: bool  # true B-moments equal those of the B-semicircular
    cumulant_identity: bool  # c_B(b_1..b_n) = c_A(E_A b_1, .., E_A b_n)
    semicircular: bool  # B-cumulants vanish except the variance slot
    moment_identity: bool  # E_B(X b_1 X ..) = E_A(X E_A(b_1) X ..), informational
    checked: int

    @property
    def ok(self) -> bool:
        return self.moments_agree and self.cumulant_identity and self.semicircular


class _FreeModel:
    """X semicircular over A = C^k with eta = tau_A(.)1, free over A from
    B = C^m (x) C^k with E_A the average over the C^m factor.

    Mixed moments E_A(y_0 .. y_N) are sums over non-crossing partitions
    whose blocks are all X or all B, as freeness with amalgamation
    prescribes.  B index (j, i) is j * k + i.
    """

    def __init__(self, k: int, m: int):
        self.k, self.m = k, m
        self.one = tuple([Fraction(1)] * k)
        self.zero = tuple([Fraction(0)] * k)
        # per-instance memo tables
        self.moment = lru_cache(maxsize=None)(self._moment)
        self._scalar_cumulant = lru_cache(maxsize=None)(self._scalar_cumulant_raw)

    def eta(self, a):
        t = sum(a) / self.k
        return tuple([t] * self.k)

    def b_cumulant(self, idx: tuple) -> tuple:
        """A-valued cumulant of basis elements of B.

        B splits over the minimal projections of A into k copies of C^m
        with the uniform trace, so the cumulant vanishes unless every
        argument sits over the same i, and then it is the scalar cumulant
        of the C^m projections, which only sees the equality pattern of
        the j's.
        """
        i = idx[0] % self.k
        if any(x % self.k != i for x in idx):
            return self.zero
        relabel = {}
        pattern = tuple(relabel.setdefault(x // self.k, len(relabel)) for x in idx)
        c = self._scalar_cumulant(pattern)
        return tuple(c if t == i else Fraction(0) for t in range(self.k)) if c else self.zero

    def _scalar_cumulant_raw(self, pattern: tuple) -> Fraction:
        # moment of commuting projections in C^m: 1/m if all equal, else 0
        n = len(pattern)
        total = Fraction(1, self.m) if len(set(pattern)) == 1 else Fraction(0)
        for blocks in _nc_interval(0, n - 1):
            if len(blocks) == 1:
                continue
            v = Fraction(1)
            for b in blocks:
                sub = [pattern[x] for x in b]
                relabel = {}
                v *= self._scalar_cumulant(tuple(relabel.setdefault(x, len(relabel)) for x in sub))
                if not v:
                    break
            total -= v
        return total

    def _moment(self, word: tuple) -> tuple:
        """E_A(y_0 ... y_N); items are 'X' or a B basis index.

        The first letter's block is chosen first; the gaps it leaves are
        contiguous sub-words, so the cache is keyed on words alone.
        """
        if not word:
            return self.one
        total = self.zero
        N = len(word)
        if word[0] == "X":
            for q in range(1, N):
                if word[q] != "X":
                    continue
                v = self.eta(self.moment(word[1:q]))
                if any(v):
                    total = _addv(total, _mul(v, self.moment(word[q + 1:])))
            return total
        rest = [q for q in range(1, N) if word[q] != "X"]
        for size in range(len(rest) + 1):
            for others in itertools.combinations(rest, size):
                pts = (0,) + others
                v = self.b_cumulant(tuple(word[p] for p in pts))
                for a, b in zip(pts, pts[1:]):
                    if not any(v):
                        break
                    v = _mul(v, self.moment(word[a + 1:b]))
                if any(v):
                    total = _addv(total, _mul(v, self.moment(word[pts[-1] + 1:])))
        return total

    def b_valued(self, key: tuple) -> tuple:
        """E_B(X b_1 X ... b_n X) through tau(e w) for each minimal
        projection e of B."""
        tail = ["X"]
        for i in key:
            tail += [i, "X"]
        out = []
        for e in range(self.m * self.k):
            v = self.moment(tuple([e] + tail))
            out.append(self.m * sum(v))
        return tuple(out)


def reduction_report(k: int, m: int, order: int) -> ReductionReport:
    """Check that an A-valued semicircular X with eta = tau_A(.)1 is
    B-valued semicircular for B = C^m (x) C^k with eta_B = (tau (x) tau)(.)1,
    when X is free from B over A.

    True B-valued moments come from the free product model; they are
    compared with a directly computed B-semicircular, and their cumulants
    are compared with c_A evaluated on E_A of the arguments.
    """
    if order < 1 or order > REDUCTION_ORDER_LIMIT:
        raise SizeGuard(f"order must lie in 1..{REDUCTION_ORDER_LIMIT}")
    if k < 1 or m < 1 or k * m > REDUCTION_DIM_LIMIT:
        raise SizeGuard(f"k*m must lie in 1..{REDUCTION_DIM_LIMIT}")
    dim = k * m
    visits = sum(dim ** n for n in range(order))
    if visits > REDUCTION_BUDGET:
        raise SizeGuard(f"{visits} basis tuples exceed the budget {REDUCTION_BUDGET}")

    A = trace_distribution([Fraction(1, k)] * k).as_cumulants()
    B = trace_distribution([Fraction(1, dim)] * dim).as_cumulants()
    model = _FreeModel(k, m)

    def slice_(b):
        return tuple(sum(b[j * k + i] for j in range(m)) / m for i in range(k))

    def lift(a):
        return tuple(a[idx % k] for idx in range(dim))

    moments = {}
    agree = literal = True
    b_moment, a_moment = _BasisMoments(B), _BasisMoments(A)
    for n in range(order):
        table = {}
        for key in itertools.product(range(dim), repeat=n):
            true = model.b_valued(key)
            if true != b_moment(key):
                agree = False
            # E_A of the basis element (j, i) is e_i / m
            sliced = tuple(x / m ** n for x in a_moment(tuple(i % k for i in key)))
            if true != lift(sliced):
                literal = False
            if any(true):
                table[key] = true
        moments[n] = table
    cum = ov_cumulants_from_moments(moments, dim, order)
    identity = True
    for n in range(order):
        for key in itertools.product(range(dim), repeat=n):
            got = cum.tables.get(n, {}).get(key)
            want = A.evaluate(n, [slice_(_basis(dim, i)) for i in key])
            want = lift(want) if want is not None and any(want) else None
            if got != want:
                identity = False
    semic = all(not cum.tables.get(n) for n in range(order) if n != 1)
    if order > 1:
        semic = semic and cum.tables.get(1, {}) == B.tables[1]
    return ReductionReport(k, m, order, agree, identity, semic, literal, visits)


def verify_regular_plus_trivial(k: int, m: int, order: int) -> bool:
    return reduction_report(k, m, order).ok


# ------------------------------------------------------------ Wick pairing


class QSqrt3:
    """a + b*sqrt(3) with rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a, self.b = Fraction(a), Fraction(b)

    def _coerce(self, o):
        return o if isinstance(o, QSqrt3) else QSqrt3(o)

    def __add__(self, o):
        o = self._coerce(o)
        return QSqrt3(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __mul__(self, o):
        o = self._coerce(o)
        return QSqrt3(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, QSqrt3)):
            o = self._coerce(o)
            return self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(3)

    def simplify(self):
        return self.a if self.b == 0 else self

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt(3)" if self.a else f"{self.b}*sqrt(3)"


_HALF_SQRT3 = QSqrt3(0, Fraction(1, 2))


def exact_cos_sin(angle: Fraction):
    """cos and sin of 2*pi*angle when the angle is a multiple of 1/12 turn."""
    angle = angle % 1
    if (angle * 12).denominator != 1:
        return None
    k = int(angle * 12)
    table = {
        0: (QSqrt3(1), QSqrt3(0)),
        1: (_HALF_SQRT3, QSqrt3(Fraction(1, 2))),
        2: (QSqrt3(Fraction(1, 2)), _HALF_SQRT3),
        3: (QSqrt3(0), QSqrt3(1)),
    }
    quadrant, r = divmod(k, 3)
    c, s = table[r]
    for _ in range(quadrant):
        c, s = -s, c
    return c, s


@dataclass(frozen=True)
class WickValue:
    value: object  # Fraction, QSqrt3 or float
    exact: bool
    tolerance: float = 0.0

    def __str__(self):
        v = self.value.simplify() if isinstance(self.value, QSqrt3) else self.value
        return str(v) if self.exact else f"{self.value!r} (+/- {self.tolerance:g})"


FLOAT_TOLERANCE = 1e-12


def _components(rep, assign):
    """(size, angle) per ap block in order: 2-dim rotations, 1-dim signs."""
    from .ext import is_inf
    out = []
    for p, mult in rep.atoms:
        if is_inf(mult):
            raise DimensionMismatch("infinite multiplicity has no finite vector model")
        if p.symbols and assign is None:
            raise DimensionMismatch(f"symbolic angle {p}; pass numeric values for its symbols")
        if p.symbols:
            ang = float(p.torsion) + sum(c * assign[s] for s, c in p.symbolic)
        else:
            ang = p.torsion
        size = 1 if not p.symbols and p.torsion in (0, Fraction(1, 2)) else 2
        out += [(size, ang)] * mult
    return out


def wick_pairing(left, right, rep, g: int, assign=None) -> WickValue:
    """<xi_1 (x) ... (x) xi_n, pi(g) eta_1 (x) ... (x) eta_m>.

    Vectors are coordinate lists on the almost periodic part, blocks in the
    order of ``rep.atoms``.  Exact when every angle is a multiple of 1/12
    turn, else double precision.
    """
    if len(left) != len(right):
        return WickValue(Fraction(0), True)
    comps = _components(rep, assign)
    dim = sum(s for s, _ in comps)
    exact = True
    rot = []
    for size, ang in comps:
        if size == 1:
            sign = 1 if ang == 0 or g % 2 == 0 else -1
            rot.append((size, (QSqrt3(sign),)))
            continue
        cs = exact_cos_sin(Fraction(ang) * g) if isinstance(ang, Fraction) else None
        if cs is None:
            exact = False
            t = 2 * math.pi * float(ang) * g
            cs = (math.cos(t), math.sin(t))
        rot.append((size, cs))
    total = QSqrt3(1) if exact else 1.0
    for xi, eta in zip(left, right):
        if len(xi) != dim or len(eta) != dim:
            raise DimensionMismatch(f"factor vectors must have length {dim}")
        inner = QSqrt3(0) if exact else 0.0
        pos = 0
        for size, cs in rot:
            if size == 1:
                term = cs[0] * _q(xi[pos]) * _q(eta[pos]) if exact else \
                    float(cs[0]) * float(xi[pos]) * float(eta[pos])
            else:
                c, s = cs
                x0, x1, e0, e1 = (xi[pos], xi[pos + 1], eta[pos], eta[pos + 1])
                if exact:
                    x0, x1, e0, e1 = map(_q, (x0, x1, e0, e1))
                    term = x0 * (c * e0 + -s * e1) + x1 * (s * e0 + c * e1)
                else:
                    c, s = float(c), float(s)
                    x0, x1, e0, e1 = map(float, (x0, x1, e0, e1))
                    term = x0 * (c * e0 - s * e1) + x1 * (s * e0 + c * e1)
            inner = inner + term
            pos += size
        total = total * inner
    if exact:
        return WickValue(total.simplify(), True)
    return WickValue(float(total), False, FLOAT_TOLERANCE)
