"""Orthogonal representations of Z, described by their spectral data.

The almost periodic part is a multiset of eigenvalues, one representative
per conjugate pair.  The weakly mixing part is a list of tagged archetypes
(left regular, singular with singular convolution powers, generic
atomless) carrying declared mixing flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .circle import CirclePoint, CircleSubgroup, format_angle, generate, is_real, representative
from .errors import ConflictingFlags, InvalidMultiplicity
from .ext import INF, is_inf

LEFT_REGULAR = "left_regular"
SINGULAR_CLOSED = "singular_closed"
ATOMLESS = "atomless"
WM_KINDS = (LEFT_REGULAR, SINGULAR_CLOSED, ATOMLESS)
FLAGS = ("mixing", "mildly_mixing", "rigid")


def check_multiplicity(m):
    if is_inf(m):
        return INF
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise InvalidMultiplicity(f"multiplicity must be a positive integer or inf, got {m!r}")
    return int(m)


def mult_str(m) -> str:
    return "inf" if is_inf(m) else str(m)


@dataclass(frozen=True)
class WmPart:
    kind: str
    multiplicity: object = 1
    mixing: bool = False
    mildly_mixing: bool = False
    rigid: bool = False

    def flags(self) -> tuple:
        return tuple(f for f in FLAGS if getattr(self, f))

    def sort_key(self):
        return (WM_KINDS.index(self.kind), self.flags())

    def describe(self) -> str:
        s = self.kind
        if self.multiplicity != 1:
            s += f" x{mult_str(self.multiplicity)}"
        if self.flags():
            s += " [" + ",".join(self.flags()) + "]"
        return s


def make_wm(kind: str, multiplicity=1, flags=()) -> WmPart:
    """Build a weakly mixing part, enforcing the flag implications."""
    if kind not in WM_KINDS:
        raise ValueError(f"unknown wm kind {kind!r}")
    flags = set(flags)
    bad = flags - set(FLAGS)
    if bad:
        raise ValueError(f"unknown flag(s) {sorted(bad)}")
    mixing = "mixing" in flags
    mild = "mildly_mixing" in flags
    rigid = "rigid" in flags
    if kind == LEFT_REGULAR:
        if rigid:
            raise ConflictingFlags("left_regular is mixing and cannot be rigid")
        mixing = True
    if rigid and (mixing or mild):
        raise ConflictingFlags("a rigid part cannot be (mildly) mixing")
    if mixing:
        mild = True
    return WmPart(kind, check_multiplicity(multiplicity), mixing, mild, rigid)


def _add(a, b):
    return INF if is_inf(a) or is_inf(b) else a + b


@dataclass(frozen=True)
class Representation:
    atoms: tuple = ()
    wm_parts: tuple = ()
    name: str = field(default="", compare=False)
    symbols: tuple = field(default=(), compare=False)

    @property
    def ap(self) -> "Representation":
        return decompose(self)[0]

    @property
    def wm(self) -> "Representation":
        return decompose(self)[1]

    def describe(self) -> str:
        parts = []
        for p, m in self.atoms:
            parts.append(f"{format_angle(p)}" + ("" if m == 1 else f" x{mult_str(m)}"))
        parts += [w.describe() for w in self.wm_parts]
        return "{" + "; ".join(parts) + "}"


def make_rep(atoms=(), wm_parts=(), name: str = "", symbols=()) -> Representation:
    """Canonicalize: fold conjugate pairs, merge duplicates, sort."""
    acc: dict[CirclePoint, object] = {}
    for p, m in atoms:
        m = check_multiplicity(m)
        r = representative(p)
        acc[r] = _add(acc.get(r, 0), m)
    atom_list = tuple(sorted(acc.items(), key=lambda pm: pm[0].sort_key()))
    wacc: dict[tuple, object] = {}
    for w in wm_parts:
        key = (w.kind, w.mixing, w.mildly_mixing, w.rigid)
        wacc[key] = _add(wacc.get(key, 0), w.multiplicity)
    wm = tuple(sorted((WmPart(k[0], m, k[1], k[2], k[3]) for k, m in wacc.items()),
                      key=WmPart.sort_key))
    used = {s for p, _ in atom_list for s in p.symbols}
    syms = tuple(sorted(set(symbols) | used))
    return Representation(atom_list, wm, name, syms)


def atom_multiplicity(rep: Representation, p: CirclePoint):
    return dict(rep.atoms).get(representative(p), 0)


def ranks(rep: Representation) -> tuple:
    """(n1, n2, m0): non-real pairs, copies of -1, copies of 1."""
    n1 = n2 = m0 = 0
    for p, m in rep.atoms:
        if p.is_identity:
            m0 = _add(m0, m)
        elif is_real(p):
            n2 = _add(n2, m)
        else:
            n1 = _add(n1, m)
    return n1, n2, m0


def ap_dimension(rep: Representation):
    n1, n2, m0 = ranks(rep)
    return _add(_add(_add(n1, n1), n2), m0)


def dimension(rep: Representation):
    if rep.wm_parts:
        return INF
    return ap_dimension(rep)


def eigenvalue_subgroup(rep: Representation, symbols=None) -> CircleSubgroup:
    return generate([p for p, _ in rep.atoms], symbols)


def kernel_index(rep: Representation):
    if rep.wm_parts:
        return INF
    return eigenvalue_subgroup(rep).order


def is_faithful(rep: Representation) -> bool:
    return is_inf(kernel_index(rep))


def decompose(rep: Representation) -> tuple:
    ap = Representation(rep.atoms, (), rep.name + ".ap" if rep.name else "", rep.symbols)
    wm = Representation((), rep.wm_parts, rep.name + ".wm" if rep.name else "", rep.symbols)
    return ap, wm


@dataclass(frozen=True)
class RigidCheck:
    status: str  # "yes" | "no" | "unknown"
    witness: str = ""

    def __bool__(self):
        return self.status == "yes"


def has_rigid_2dim(rep: Representation) -> RigidCheck:
    d = ap_dimension(rep)
    if d >= 2:
        eig = ", ".join(format_angle(p) for p, _ in rep.atoms)
        return RigidCheck("yes", f"almost periodic subspace of dimension {mult_str(d)} "
                                 f"(eigenvalues {eig}); its rotations return simultaneously "
                                 "close to the identity along a subsequence")
    rigid = [w for w in rep.wm_parts if w.rigid]
    if rigid:
        return RigidCheck("yes", f"weakly mixing part {rigid[0].describe()} is declared rigid")
    if all(w.mildly_mixing for w in rep.wm_parts):
        return RigidCheck("no")
    return RigidCheck("unknown")


def parse_rep(source: str, symbols=None) -> Representation:
    """Parse a single representation.

    ``source`` is either a spec file holding exactly one ``rep`` block or
    a bare body (``atom ...`` / ``wm ...`` statements).  For a bare body,
    symbols are declared implicitly unless ``symbols`` is given.
    """
    from .specfile import parse_body, parse_specfile

    if "rep" in source.split() or "{" in source:
        spec = parse_specfile(source)
        if len(spec.reps) != 1:
            from .errors import ParseError
            raise ParseError(f"expected exactly one rep block, found {len(spec.reps)}")
        return next(iter(spec.reps.values()))
    return parse_body(source, symbols)


def render(rep: Representation, name: str | None = None, with_symbols: bool = True) -> str:
    """Render in the spec-file grammar; ``parse_rep`` inverts this."""
    name = name or rep.name or "r"
    lines = []
    if with_symbols:
        lines += [f"symbol {s}" for s in rep.symbols]
    lines.append(f"rep {name} {{")
    for p, m in rep.atoms:
        lines.append(f"  atom {format_angle(p)} mult {mult_str(m)}")
    for w in rep.wm_parts:
        s = f"  wm {w.kind} mult {mult_str(w.multiplicity)}"
        if w.flags():
            s += " flags " + " ".join(w.flags())
        lines.append(s)
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(rep: Representation) -> dict:
    from .ext import to_json as xj
    return {
        "name": rep.name,
        "atoms": [{"angle": format_angle(p), "multiplicity": xj(m)} for p, m in rep.atoms],
        "wm_parts": [{"kind": w.kind, "multiplicity": xj(w.multiplicity), "flags": list(w.flags())}
                     for w in rep.wm_parts],
        "dimension": xj(dimension(rep)),
    }


TRIVIAL = CirclePoint(Fraction(0))
