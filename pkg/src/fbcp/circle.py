"""Exact arithmetic in the circle group.

A point of the circle is written additively as an angle in full turns:
a rational torsion part in [0, 1) plus an integer combination of named
irrational angle symbols.  Symbols are opaque and assumed linearly
independent over Q together with 1, so equality is decidable.

Finitely generated subgroups live in Q/Z + Z^s.  Their canonical form is
the Hermite normal form of the preimage lattice in Z^(s+1), where the
torsion coordinate is scaled by the least common denominator of the
subgroup.  Symbol columns come first so symbolic pivots are cleared
before the torsion column.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _lattice
from .errors import NotInSubgroup, ParseError, SymbolTableMismatch
from .ext import INF


@dataclass(frozen=True, order=False)
class CirclePoint:
    torsion: Fraction = Fraction(0)
    symbolic: tuple = ()

    def __post_init__(self):
        t = Fraction(self.torsion)
        t -= math.floor(t)
        items = self.symbolic.items() if isinstance(self.symbolic, Mapping) else self.symbolic
        acc: dict[str, int] = {}
        for name, c in items:
            if int(c) != c:
                raise ValueError("symbolic coefficients must be integers")
            acc[name] = acc.get(name, 0) + int(c)
        sym = tuple(sorted((k, v) for k, v in acc.items() if v))
        object.__setattr__(self, "torsion", t)
        object.__setattr__(self, "symbolic", sym)

    # group law, written additively
    def __add__(self, other: "CirclePoint") -> "CirclePoint":
        return CirclePoint(self.torsion + other.torsion, self.symbolic + other.symbolic)

    def __neg__(self) -> "CirclePoint":
        return CirclePoint(-self.torsion, tuple((k, -v) for k, v in self.symbolic))

    def __sub__(self, other: "CirclePoint") -> "CirclePoint":
        return self + (-other)

    def scale(self, k: int) -> "CirclePoint":
        return CirclePoint(self.torsion * k, tuple((n, v * k) for n, v in self.symbolic))

    def __rmul__(self, k: int) -> "CirclePoint":
        return self.scale(k)

    @property
    def is_identity(self) -> bool:
        return self.torsion == 0 and not self.symbolic

    @property
    def symbols(self) -> tuple:
        return tuple(k for k, _ in self.symbolic)

    def coefficient(self, name: str) -> int:
        return dict(self.symbolic).get(name, 0)

    def order(self):
        return order(self)

    def sort_key(self):
        return (self.symbolic, self.torsion)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def literal(self) -> str:
        return format_angle(self)

    def __str__(self) -> str:
        return format_angle(self)

    def __repr__(self) -> str:
        return f"CirclePoint({format_angle(self)})"


IDENTITY = CirclePoint()
HALF = CirclePoint(Fraction(1, 2))


def point(torsion=0, symbolic: Mapping[str, int] | None = None) -> CirclePoint:
    return CirclePoint(Fraction(torsion), tuple((symbolic or {}).items()))


def multiply(a: CirclePoint, b: CirclePoint) -> CirclePoint:
    return a + b


def conjugate(a: CirclePoint) -> CirclePoint:
    return -a


def order(a: CirclePoint):
    """Least n >= 1 with n*a = 0, or ``INF``."""
    if a.symbolic:
        return INF
    return a.torsion.denominator


def is_real(a: CirclePoint) -> bool:
    """True for the self-conjugate points 0 and 1/2 (eigenvalues 1 and -1)."""
    return a == -a


def representative(a: CirclePoint) -> CirclePoint:
    """Canonical member of the conjugate pair {a, -a}.

    Torsion-only points are folded into [0, 1/2]; symbolic points keep the
    member whose first symbolic coefficient is positive.
    """
    if a.symbolic:
        return a if a.symbolic[0][1] > 0 else -a
    return a if a.torsion <= Fraction(1, 2) else -a


# ---------------------------------------------------------------- literals

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_TERM = re.compile(
    rf"([+-]?)(?:(\d+)\*)?sym:({_NAME})|([+-]?)(\d+)(?:/(\d+))?"
)


def parse_angle(text: str, symbols: Iterable[str] | None = None, check_range: bool = False):
    """Parse ``p/q``, ``sym:name`` or a compound like ``1/2+2*sym:t``.

    With ``check_range`` the rational part must already lie in [0, 1).
    Raises ``ParseError`` (column offsets are 1-based within ``text``).
    """
    from .errors import UndeclaredSymbol

    pos = 0
    torsion = Fraction(0)
    sym: dict[str, int] = {}
    if not text:
        raise ParseError("empty angle literal", col=1)
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"bad angle literal {text!r}", col=pos + 1)
        if not first and not text[pos] in "+-":
            raise ParseError(f"expected '+' or '-' in {text!r}", col=pos + 1)
        if m.group(3) is not None:
            sign = -1 if m.group(1) == "-" else 1
            mult = int(m.group(2)) if m.group(2) else 1
            name = m.group(3)
            if symbols is not None and name not in symbols:
                raise UndeclaredSymbol(f"undeclared symbol {name!r}", col=pos + 1)
            sym[name] = sym.get(name, 0) + sign * mult
        else:
            sign = -1 if m.group(4) == "-" else 1
            num = int(m.group(5))
            den = int(m.group(6)) if m.group(6) else 1
            if den == 0:
                raise ParseError("zero denominator", col=pos + 1)
            torsion += sign * Fraction(num, den)
        pos = m.end()
        first = False
    if check_range and not (0 <= torsion < 1):
        raise ParseError(f"angle {text!r} not in [0,1)", col=1)
    return CirclePoint(torsion, tuple(sym.items()))


def format_angle(a: CirclePoint) -> str:
    parts = []
    if a.torsion or not a.symbolic:
        t = a.torsion
        parts.append(str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}")
    for name, c in a.symbolic:
        if c == 1:
            term = f"sym:{name}"
        elif c == -1:
            term = f"-sym:{name}"
        else:
            term = f"{c}*sym:{name}" if c > 0 else f"-{-c}*sym:{name}"
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts)


# --------------------------------------------------------------- subgroups


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _vector(p: CirclePoint, symbols: Sequence[str], den: int) -> list[int]:
    d = dict(p.symbolic)
    t = p.torsion * den
    assert t.denominator == 1
    return [d.get(s, 0) for s in symbols] + [int(t)]


def _check_symbols(points: Iterable[CirclePoint], symbols: Sequence[str]) -> None:
    known = set(symbols)
    for p in points:
        extra = [s for s in p.symbols if s not in known]
        if extra:
            raise SymbolTableMismatch(f"symbol(s) {', '.join(extra)} not in table {list(symbols)}")


@dataclass(frozen=True)
class CircleSubgroup:
    """Finitely generated subgroup in canonical (Hermite) form.

    ``rows`` is the Hermite basis of the preimage lattice in Z^(s+1) with the
    torsion coordinate scaled by ``denominator``; the row ``(0,..,0,D)`` is
    always part of that lattice.
    """

    symbols: tuple
    denominator: int
    rows: tuple
    pivots: tuple = field(compare=False)

    @property
    def basis(self) -> tuple:
        out = []
        for row in self.rows:
            p = CirclePoint(Fraction(row[-1], self.denominator), tuple(zip(self.symbols, row[:-1])))
            if not p.is_identity:
                out.append(p)
        return tuple(out)

    @property
    def rank(self) -> int:
        """Free rank (number of symbolic pivots)."""
        return sum(1 for c in self.pivots if c < len(self.symbols))

    @property
    def torsion_order(self) -> int:
        """Order of the torsion subgroup."""
        for row, c in zip(self.rows, self.pivots):
            if c == len(self.symbols):
                return self.denominator // row[c]
        return 1

    @property
    def order(self):
        return self.torsion_order if self.rank == 0 else INF

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def is_infinite_cyclic(self) -> bool:
        return self.rank == 1 and self.torsion_order == 1

    def abstract_type(self) -> tuple:
        """Isomorphism type as (free rank, torsion order): Z^rank + Z/torsion."""
        return (self.rank, self.torsion_order)

    def contains(self, p: CirclePoint) -> bool:
        _check_symbols([p], self.symbols)
        if self.denominator % p.torsion.denominator:
            return False
        v = _lattice.reduce_vector([list(r) for r in self.rows], list(self.pivots),
                                   _vector(p, self.symbols, self.denominator))
        return not any(v)

    def coset_representative(self, p: CirclePoint) -> CirclePoint:
        """Canonical representative of the coset ``p + H``."""
        _check_symbols([p], self.symbols)
        den = _lcm([self.denominator, p.torsion.denominator])
        scale = den // self.denominator
        rows = [list(r[:-1]) + [r[-1] * scale] for r in self.rows]
        rows.append([0] * len(self.symbols) + [den])
        h, _, piv = _lattice.hnf(rows, len(self.symbols) + 1)
        v = _lattice.reduce_vector(h, piv, _vector(p, self.symbols, den))
        return CirclePoint(Fraction(v[-1], den), tuple(zip(self.symbols, v[:-1])))

    def elements(self) -> tuple:
        """All elements of a finite subgroup, sorted by angle."""
        if not self.is_finite:
            raise ValueError("infinite subgroup has no element list")
        n = self.torsion_order
        return tuple(CirclePoint(Fraction(k, n)) for k in range(n))

    def with_symbols(self, symbols: Sequence[str]) -> "CircleSubgroup":
        return generate(self.basis, symbols)

    def literal(self) -> str:
        if not self.basis:
            return "<0>"
        return "<" + ", ".join(format_angle(b) for b in self.basis) + ">"

    def __str__(self) -> str:
        return self.literal()


def generate(points: Iterable[CirclePoint], symbols: Sequence[str] | None = None) -> CircleSubgroup:
    points = list(points)
    if symbols is None:
        symbols = sorted({s for p in points for s in p.symbols})
    else:
        symbols = list(symbols)
        _check_symbols(points, symbols)
    den = _lcm(p.torsion.denominator for p in points)
    rows = [_vector(p, symbols, den) for p in points]
    rows.append([0] * len(symbols) + [den])
    h, _, piv = _lattice.hnf(rows, len(symbols) + 1)
    return CircleSubgroup(tuple(symbols), den, tuple(tuple(r) for r in h), tuple(piv))


def subgroup_equal(g1: CircleSubgroup, g2: CircleSubgroup) -> bool:
    if tuple(g1.symbols) != tuple(g2.symbols):
        raise SymbolTableMismatch("subgroups over different symbol tables")
    return g1 == g2


def express(target: CirclePoint, generators: Sequence[CirclePoint]) -> list[int]:
    """Integer coefficients c with sum c_j g_j = target.

    Among all solutions the one with lexicographically least absolute
    values is returned.  Raises ``NotInSubgroup``.
    """
    generators = list(generators)
    symbols = sorted({s for p in generators + [target] for s in p.symbols})
    den = _lcm(p.torsion.denominator for p in generators + [target])
    rows = [_vector(g, symbols, den) for g in generators]
    rows.append([0] * len(symbols) + [den])
    sol = _lattice.solve(rows, _vector(target, symbols, den))
    if sol is None:
        raise NotInSubgroup(f"{format_angle(target)} is not in the subgroup generated by "
                            f"[{', '.join(format_angle(g) for g in generators)}]")
    n = len(generators)
    if n == 0:
        return []
    # an optimum only uses the last copy of a repeated generator and never
    # a trivial one, so solve over those positions alone
    last = {}
    for i, g in enumerate(generators):
        if not g.is_identity:
            last[g] = i
    keep = sorted(last.values())
    if len(keep) < n:
        sub = express(target, [generators[i] for i in keep])
        out = [0] * n
        for i, c in zip(keep, sub):
            out[i] = c
        return out
    particular, kernel = sol
    return _lattice.lex_min_abs(particular[:n], [r[:n] for r in kernel])


def combine(coeffs: Sequence[int], generators: Sequence[CirclePoint]) -> CirclePoint:
    out = IDENTITY
    for c, g in zip(coeffs, generators):
        out = out + g.scale(c)
    return out
