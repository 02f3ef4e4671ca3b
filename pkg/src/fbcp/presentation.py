"""Structured presentations of the crossed product of an almost periodic
representation: the amalgamated free product over L^inf(S^1), the group of
the relative commutant of L^inf(S^1), the cocycle crossed product by the
eigenvalue group, and the normaliser summary."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .circle import HALF, CirclePoint, CircleSubgroup, format_angle, is_real
from .errors import NotAlmostPeriodic
from .ext import INF, fmt, is_inf, to_json
from .rep import Representation, decompose, eigenvalue_subgroup, ranks
from .words import SchreierGraph, Word, schreier_graph

AMALGAM = "1 (x) L^inf(S^1)"


def _add(a, b):
    return INF if is_inf(a) or is_inf(b) else a + b


@dataclass(frozen=True)
class AfpPresentation:
    n1: object
    n2: object
    m0: object
    acting: tuple  # ((weight, multiplicity), ...): n1 non-real entries then -1
    amalgam: str = AMALGAM

    @property
    def m(self):
        return _add(self.n1, self.m0)

    @property
    def n(self):
        return _add(self.n1, self.n2)

    def acting_weights(self, truncate: int | None = None) -> list:
        """Acting generator weights listed with multiplicity."""
        out = []
        for p, mult in self.acting:
            if is_inf(mult):
                if truncate is None:
                    raise ValueError("infinite multiplicity; pass truncate")
                mult = truncate
            out += [p] * mult
        return out

    def acting_generators(self, truncate: int | None = None) -> dict:
        """Names x1.. for non-real weights and z1.. for -1, with weights."""
        out, nx, nz = {}, 0, 0
        for p in self.acting_weights(truncate):
            if p == HALF:
                nz += 1
                out[f"z{nz}"] = p
            else:
                nx += 1
                out[f"x{nx}"] = p
        return out

    def describe(self) -> str:
        return (f"(L F_{fmt(self.m)} (x) L^inf(S^1)) *_{{{self.amalgam}}} "
                f"(F_{fmt(self.n)} |x L^inf(S^1))")

    def to_json(self) -> dict:
        return {
            "m": to_json(self.m), "n": to_json(self.n),
            "n1": to_json(self.n1), "n2": to_json(self.n2), "m0": to_json(self.m0),
            "acting_weights": [{"angle": format_angle(p), "multiplicity": to_json(k)}
                               for p, k in self.acting],
            "amalgam": self.amalgam,
            "algebra": self.describe(),
        }


def _require_ap(rep: Representation):
    if rep.wm_parts:
        raise NotAlmostPeriodic("representation has a weakly mixing part")


def afp_presentation(ap: Representation) -> AfpPresentation:
    _require_ap(ap)
    n1, n2, m0 = ranks(ap)
    acting = [(p, k) for p, k in ap.atoms if not is_real(p)]
    acting += [(p, k) for p, k in ap.atoms if p == HALF]
    return AfpPresentation(n1, n2, m0, tuple(acting))


@dataclass(frozen=True)
class RelativeCommutant:
    m: object
    n: object
    image_order: object
    kernel_rank: object
    rank: object
    stabilizer_rank: object
    witness: SchreierGraph | None = field(default=None, compare=False)

    def describe(self) -> str:
        return f"L G (x) L^inf(S^1) with G = F_{fmt(self.m)} * ker, free of rank {fmt(self.rank)}"

    def to_json(self) -> dict:
        return {
            "m": to_json(self.m), "n": to_json(self.n),
            "image_order": to_json(self.image_order),
            "kernel_rank": to_json(self.kernel_rank),
            "rank": to_json(self.rank),
            "stabilizer_rank": to_json(self.stabilizer_rank),
            "witness": self.witness.to_json() if self.witness else None,
            "description": self.describe(),
        }


def _kernel_rank(order, gens):
    """Rank of the kernel of F_gens onto a group of the given order."""
    if gens == 0:
        return 0
    if is_inf(order):
        return 0 if gens == 1 else INF
    if is_inf(gens):
        return INF
    return 1 + order * (gens - 1)


def relative_commutant(ap: Representation) -> RelativeCommutant:
    """Free rank of G = F_m * ker(F_n -> circle).

    ``stabilizer_rank`` is the rank of the kernel of the whole F_{m+n} onto
    the eigenvalue group, which also contains the conjugates of commuting
    generators by acting ones.
    """
    pres = afp_presentation(ap)
    m, n = pres.m, pres.n
    image = eigenvalue_subgroup(Representation(pres.acting))
    T = image.order
    witness = None
    if n == 0:
        kr = 0
    elif not is_inf(T) and not is_inf(n):
        witness = schreier_graph(pres.acting_generators())
        kr = witness.rank
    else:
        kr = _kernel_rank(T, n)
    K = eigenvalue_subgroup(ap).order
    return RelativeCommutant(m, n, T, kr, _add(m, kr), _kernel_rank(K, _add(m, n)), witness)


@dataclass(frozen=True)
class CocyclePresentation:
    K: CircleSubgroup
    commutant_rank: object
    cocycle_trivial: object  # True | False | None (unknown)
    shift_description: str
    sections: tuple = ()  # ((element, Word), ...)
    table: tuple = ()  # rows of Words, Omega(k, l)
    verified: object = None

    def to_json(self) -> dict:
        return {
            "K": self.K.literal(),
            "K_order": to_json(self.K.order),
            "commutant_rank": to_json(self.commutant_rank),
            "cocycle_trivial": "unknown" if self.cocycle_trivial is None else self.cocycle_trivial,
            "description": self.shift_description,
            "sections": [[format_angle(k), str(w)] for k, w in self.sections],
            "table": [[str(w) for w in row] for row in self.table],
            "identity_verified": self.verified,
        }


def section_words(weights: dict, K: CircleSubgroup) -> dict:
    """Shortest positive word of each weight, ties broken lexicographically.

    Breadth-first search over positive words visits each length level in
    lexicographic order, so the first word reaching an element wins.
    """
    zero = CirclePoint()
    found = {zero: Word()}
    queue = deque([zero])
    total = K.order
    while queue and len(found) < total:
        k = queue.popleft()
        for g in weights:
            k2 = k + weights[g]
            if k2 not in found:
                found[k2] = found[k] * Word.gen(g)
                queue.append(k2)
    return found


def cocycle_table(sections: dict, elements) -> list:
    return [[sections[k + l] * sections[l].inverse() * sections[k].inverse() for l in elements]
            for k in elements]


def verify_cocycle(sections: dict, elements, weights: dict) -> bool:
    """Brute-force check of Omega(k+l, m) Omega(k, l) = Omega(k, l+m) g_k Omega(l, m) g_k^-1."""
    idx = {k: i for i, k in enumerate(elements)}
    om = cocycle_table(sections, elements)
    for row in om:
        for w in row:
            if not w.weight(weights).is_identity:
                return False
    for k in elements:
        gk = sections[k]
        for l in elements:
            for m_ in elements:
                lhs = om[idx[k + l]][idx[m_]] * om[idx[k]][idx[l]]
                rhs = om[idx[k]][idx[l + m_]] * gk * om[idx[l]][idx[m_]] * gk.inverse()
                if lhs != rhs:
                    return False
    return True


def cocycle_presentation(ap: Representation, truncate: int = 64) -> CocyclePresentation:
    pres = afp_presentation(ap)
    K = eigenvalue_subgroup(ap)
    rc = relative_commutant(ap)
    rank = rc.stabilizer_rank
    if K.order == 1:
        return CocyclePresentation(K, rank, True,
                                   f"K trivial: M = L F_{fmt(rank)} (x) L^inf(S^1), no action")
    if K.is_infinite_cyclic:
        text = (f"K = {K.literal()} infinite cyclic; trivial cocycle; K acts on G by shifting the "
                f"free basis g1^k gi g1^-k (i >= 2, k in Z) and on S^1 by rotation: "
                f"M = Z |x (L F_{fmt(rank)} (x) L^inf(S^1))")
        return CocyclePresentation(K, rank, True, text)
    if K.is_finite:
        weights = pres.acting_generators(truncate)
        sec = section_words(weights, K)
        elements = K.elements()
        table = cocycle_table(sec, elements)
        ok = verify_cocycle(sec, elements, weights) if len(elements) <= 64 else None
        text = (f"K = Z/{K.order}: M = K |x_Omega (L F_{fmt(rank)} (x) L^inf(S^1)); sections are "
                "shortest positive words, Omega(k,l) = g_(k+l) g_l^-1 g_k^-1")
        return CocyclePresentation(K, rank, None, text,
                                   tuple((k, sec[k]) for k in elements),
                                   tuple(tuple(r) for r in table), ok)
    return CocyclePresentation(K, rank, None,
                               f"K = {K.literal()} is infinite and not cyclic; "
                               "no normalized cocycle is computed")


@dataclass(frozen=True)
class NormalizerSummary:
    presentation: AfpPresentation | None
    relative_commutant: RelativeCommutant | None
    statement: str

    def to_json(self) -> dict:
        return {
            "statement": self.statement,
            "presentation": self.presentation.to_json() if self.presentation else None,
            "relative_commutant": self.relative_commutant.to_json() if self.relative_commutant else None,
        }


def normalizer_summary(rep: Representation) -> NormalizerSummary:
    ap, _ = decompose(rep)
    if not ap.atoms:
        return NormalizerSummary(None, None, "normaliser = quasi-normaliser = A_pi itself "
                                             "(no almost periodic part)")
    pres = afp_presentation(ap)
    rc = relative_commutant(ap)
    what = "the whole algebra" if not rep.wm_parts else "M_ap"
    return NormalizerSummary(pres, rc, f"normaliser = quasi-normaliser of A_pi = {what}: "
                                       f"{pres.describe()}; relative commutant {rc.describe()}")
