"""Symbolic measure classes on the circle.

A class is an atomic part (a finite set of points, or the cosets of an
infinite subgroup when the support is dense) together with a tag for the
continuous part.  Convolution follows a fixed absorption table that only
pins down the three archetypes the weakly mixing parts can carry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .circle import CirclePoint, CircleSubgroup, format_angle, generate
from .rep import ATOMLESS, LEFT_REGULAR, SINGULAR_CLOSED, Representation, ap_dimension, decompose, is_faithful

NONE = "none"
LEBESGUE = "lebesgue_ac"
SINGULAR = "singular_atomless"
GENERIC = "generic_atomless"
CONTINUOUS = (NONE, LEBESGUE, SINGULAR, GENERIC)

CLOSURE_CAP = 64


@dataclass(frozen=True)
class MeasureClass:
    """``atoms`` are explicit points, or coset representatives modulo
    ``atom_group`` when that infinite subgroup is set."""

    atoms: tuple = ()
    continuous: str = NONE
    closed: bool = False  # singular part has singular convolution powers
    atom_group: CircleSubgroup | None = None
    truncated: bool = False
    iterations: int | None = field(default=None, compare=False)

    @property
    def is_zero(self) -> bool:
        return not self.atoms and self.continuous == NONE

    @property
    def kind(self) -> str:
        """"none", "finite", "subgroup_haar" or "infinite_subgroup"."""
        if not self.atoms:
            return "none"
        if self.atom_group is not None:
            return "infinite_subgroup"
        H = generate(list(self.atoms))
        if H.is_finite and len(self.atoms) == H.order:
            return "subgroup_haar"
        return "finite"

    def subgroup(self) -> CircleSubgroup:
        if self.atom_group is not None:
            return self.atom_group
        return generate(list(self.atoms))

    def describe(self) -> str:
        k = self.kind
        if k == "none":
            a = "no atoms"
        elif k == "infinite_subgroup":
            a = f"atoms on the infinite subgroup {self.atom_group.literal()}"
            if len(self.atoms) > 1 or not self.atoms[0].is_identity:
                a += " + {" + ", ".join(format_angle(p) for p in self.atoms) + "}"
        elif k == "subgroup_haar" and len(self.atoms) == 1:
            a = "atom 0"
        elif k == "subgroup_haar":
            a = f"Haar measure of Z/{len(self.atoms)}"
        else:
            a = "atoms {" + ", ".join(format_angle(p) for p in self.atoms) + "}"
        s = a if self.continuous == NONE else f"{a} + {self.continuous}"
        return s + (" [truncated]" if self.truncated else "")

    def to_json(self) -> dict:
        return {
            "atoms": [format_angle(p) for p in self.atoms],
            "atom_kind": self.kind,
            "atom_group": self.atom_group.literal() if self.atom_group is not None else None,
            "continuous": self.continuous,
            "singular_closed": self.closed,
            "truncated": self.truncated,
        }


def _canon_atoms(points, group):
    if group is None:
        return tuple(sorted(set(points), key=CirclePoint.sort_key))
    reps = {group.coset_representative(p) for p in points}
    return tuple(sorted(reps, key=CirclePoint.sort_key))


def _common_group(groups, extra=()):
    basis = [p for g in groups if g is not None for p in g.basis] + list(extra)
    syms = sorted({s for p in basis for s in p.symbols}
                  | {s for g in groups if g is not None for s in g.symbols})
    return generate(basis, syms)


def measure(atoms=(), continuous: str = NONE, closed: bool = False,
            atom_group: CircleSubgroup | None = None) -> MeasureClass:
    if continuous not in CONTINUOUS:
        raise ValueError(f"unknown continuous class {continuous!r}")
    atoms = list(atoms)
    if atom_group is not None:
        atom_group = _common_group([atom_group], atoms)
        if atom_group.is_finite:
            atoms = [p + h for p in atoms for h in atom_group.elements()]
            atom_group = None
    return MeasureClass(_canon_atoms(atoms, atom_group), continuous,
                        closed and continuous == SINGULAR, atom_group)


def delta(p: CirclePoint = CirclePoint()) -> MeasureClass:
    return measure([p])


def haar(H: CircleSubgroup) -> MeasureClass:
    if H.is_finite:
        return measure(H.elements())
    return measure([CirclePoint()], atom_group=H)


def _join_cont(c1, k1, c2, k2):
    """Class of a sum of two continuous parts, with the closed tag."""
    if c1 == NONE:
        return c2, k2
    if c2 == NONE:
        return c1, k1
    if c1 == c2:
        return c1, k1 and k2
    return GENERIC, False


def _conv_cont(c1, k1, c2, k2):
    if c1 == NONE or c2 == NONE:
        return NONE, False
    if LEBESGUE in (c1, c2):
        return LEBESGUE, False
    if c1 == SINGULAR and c2 == SINGULAR and k1 and k2:
        return SINGULAR, True
    return GENERIC, False


def convolve(a: MeasureClass, b: MeasureClass) -> MeasureClass:
    group = None
    if a.atoms and b.atoms:
        if a.atom_group is not None or b.atom_group is not None:
            group = _common_group([a.atom_group, b.atom_group])
        atoms = [p + q for p in a.atoms for q in b.atoms]
    else:
        atoms = []
    cont, closed = NONE, False
    if a.atoms:
        cont, closed = _join_cont(cont, closed, b.continuous, b.closed)
    if b.atoms:
        cont, closed = _join_cont(cont, closed, a.continuous, a.closed)
    cont, closed = _join_cont(cont, closed, *_conv_cont(a.continuous, a.closed,
                                                        b.continuous, b.closed))
    return measure(atoms, cont, closed, group)


def join(a: MeasureClass, b: MeasureClass) -> MeasureClass:
    """Class of a + b."""
    group = None
    if a.atom_group is not None or b.atom_group is not None:
        group = _common_group([a.atom_group, b.atom_group])
    cont, closed = _join_cont(a.continuous, a.closed, b.continuous, b.closed)
    return measure(list(a.atoms) + list(b.atoms), cont, closed, group)


def convolution_closure(m: MeasureClass, cap: int = CLOSURE_CAP) -> MeasureClass:
    """Class of sum_{n >= 0} m^{*n}, starting from the unit mass at 0."""
    work = m
    if m.atoms:
        H = _common_group([m.atom_group], m.atoms)
        if not H.is_finite:
            # the atoms of the powers are dense in the cosets of H; the
            # n = 0 term puts 0 among them, so everything lands on H itself
            work = MeasureClass((CirclePoint(),), m.continuous, m.closed, H)
    acc = power = delta()
    for i in range(1, cap + 1):
        power = convolve(power, work)
        new = join(acc, power)
        if new == acc:
            return _with_iterations(acc, i)
        acc = new
    if work.atoms and work.atom_group is None and work.subgroup().is_finite:
        # finite generated group: the monoid generated by the atoms is the group
        full = join(acc, haar(work.subgroup()))
        return _with_iterations(full, cap)
    return MeasureClass(acc.atoms, acc.continuous, acc.closed, acc.atom_group, True, cap)


def _with_iterations(m: MeasureClass, i: int) -> MeasureClass:
    return MeasureClass(m.atoms, m.continuous, m.closed, m.atom_group, m.truncated, i)


def spectral_class(rep: Representation) -> MeasureClass:
    """Symmetric spectral class: both conjugates of each eigenvalue, and one
    continuous tag per weakly mixing archetype."""
    atoms = [q for p, _ in rep.atoms for q in (p, -p)]
    m = measure(atoms)
    for w in rep.wm_parts:
        if w.kind == LEFT_REGULAR:
            part = measure(continuous=LEBESGUE)
        elif w.kind == SINGULAR_CLOSED:
            part = measure(continuous=SINGULAR, closed=True)
        else:
            assert w.kind == ATOMLESS
            part = measure(continuous=GENERIC)
        m = join(m, part)
    return m


INFINITE = "inf"
NOT_ASSERTED = "not_asserted"


@dataclass(frozen=True)
class BimoduleInvariant:
    fiber: MeasureClass
    multiplicity: str  # INFINITE or NOT_ASSERTED

    def describe(self) -> str:
        return f"fiber [mu * delta_s]: {self.fiber.describe()}, translated by s; multiplicity {self.multiplicity}"

    def to_json(self) -> dict:
        return {"fiber": self.fiber.to_json(), "multiplicity": self.multiplicity,
                "description": self.describe()}


@lru_cache(maxsize=4096)
def bimodule_type(rep: Representation) -> BimoduleInvariant:
    fiber = convolution_closure(spectral_class(rep))
    return BimoduleInvariant(fiber, INFINITE if rep.atoms else NOT_ASSERTED)


@dataclass(frozen=True)
class Separation:
    invariant: str
    left: str
    right: str

    def describe(self) -> str:
        return f"{self.invariant}: {self.left} vs {self.right}"

    def to_json(self) -> dict:
        return {"invariant": self.invariant, "values": [self.left, self.right]}


PINNED = (NONE, LEBESGUE, SINGULAR)

FIBER_CLASS = "fiber continuous class"
ATOM_DENSITY = "fiber atoms dense"
DECOMPOSABLE = "sum of finite index bimodules"
SEPARATING_INVARIANTS = (FIBER_CLASS, ATOM_DENSITY, DECOMPOSABLE)


def separating_value(name: str, rep: Representation) -> str:
    """Recompute one named invariant; used to re-check certificates."""
    if name == FIBER_CLASS:
        return bimodule_type(rep).fiber.continuous
    if name == ATOM_DENSITY:
        return str(is_faithful(decompose(rep)[0])).lower()
    if name == DECOMPOSABLE:
        return str(not rep.wm_parts).lower()
    raise ValueError(f"unknown invariant {name!r}")


def separating_invariant(r1: Representation, r2: Representation) -> Separation | None:
    """An invariant of the bimodule over the circle algebra that differs.

    Only applies when both almost periodic parts have dimension >= 2, and
    only compares continuous classes the absorption table pins down.
    """
    if not (ap_dimension(r1) >= 2 and ap_dimension(r2) >= 2):
        return None
    c1, c2 = separating_value(FIBER_CLASS, r1), separating_value(FIBER_CLASS, r2)
    if c1 != c2 and c1 in PINNED and c2 in PINNED:
        return Separation(FIBER_CLASS, c1, c2)
    for name in (ATOM_DENSITY, DECOMPOSABLE):
        v1, v2 = separating_value(name, r1), separating_value(name, r2)
        if v1 != v2:
            return Separation(name, v1, v2)
    return None
