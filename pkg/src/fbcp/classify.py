"""Verdicts: solidity, rigidity classes, factoriality and pairwise comparison.

``compare`` walks a fixed ladder of rules, Distinct rules first.  Each
verdict carries a certificate that ``recheck`` can recompute from the two
representations alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .circle import HALF, IDENTITY, format_angle, generate
from .errors import FbcpError
from .ext import fmt, is_inf, to_json
from .freedim import periodic_invariant
from .rep import (LEFT_REGULAR, SINGULAR_CLOSED, Representation, ap_dimension, decompose,
                  dimension, has_rigid_2dim, is_faithful, kernel_index, mult_str, ranks)
from .rep import to_json as rep_json
from .spectral import bimodule_type, separating_invariant, separating_value
from .words import WeightedBasis, check_rebase, rebase

ISOMORPHIC = "Isomorphic"
DISTINCT = "Distinct"
UNKNOWN = "Unknown"

# rule names
R_FACTORIALITY = "factoriality"
R_SOLIDITY = "solidity"
R_RIGIDITY = "rigidity_class"
R_SPECTRAL = "spectral_separation"
R_SHAPE = "periodic_shape"
R_REGULAR = "regular_plus_trivial"
R_PERIODIC = "periodic_parameter"
R_SUBGROUP = "concrete_subgroup"
R_SINGLE_PAIR = "single_irrational_pair"

DISTINCT_RULES = (R_FACTORIALITY, R_SOLIDITY, R_RIGIDITY, R_SPECTRAL, R_SHAPE)
ISOMORPHIC_RULES = (R_REGULAR, R_PERIODIC, R_SUBGROUP, R_SINGLE_PAIR)

# named obstructions for Unknown
FREE_GROUP_FACTOR_PROBLEM = "FreeGroupFactorProblem"
ABSTRACT_SUBGROUP_CONJECTURE = "AbstractSubgroupConjecture"
SOLIDITY_CONJECTURE = "SolidityConjecture"
NO_RULE = "NoRuleApplies"

DEFAULT_TRUNCATE = 64


def _symbols(*reps):
    return sorted({s for r in reps for s in r.symbols}
                  | {s for r in reps for p, _ in r.atoms for s in p.symbols})


# ------------------------------------------------------------ single reps


@dataclass(frozen=True)
class Solidity:
    status: str  # "StronglySolid" | "NotSolid" | "Unknown"
    witness: str = ""
    obstruction: str | None = None

    def to_json(self) -> dict:
        return {"status": self.status, "witness": self.witness, "obstruction": self.obstruction}

    def __str__(self):
        if self.status == "Unknown":
            return f"Unknown({self.obstruction})"
        return self.status


def solidity(rep: Representation) -> Solidity:
    d = ap_dimension(rep)
    if all(w.mixing for w in rep.wm_parts) and d <= 1:
        return Solidity("StronglySolid", "mixing weakly mixing part and almost periodic "
                                         f"dimension {mult_str(d)} <= 1")
    rc = has_rigid_2dim(rep)
    if rc.status == "yes":
        return Solidity("NotSolid", rc.witness)
    return Solidity("Unknown", "no rigid subspace of dimension 2 is known", SOLIDITY_CONJECTURE)


def rigidity_class(rep: Representation) -> int | None:
    """Index 1..7 of the separated classes, or None."""
    d = ap_dimension(rep)
    kinds = {w.kind for w in rep.wm_parts}
    if d >= 2:
        faithful = is_faithful(decompose(rep)[0])
        if kinds == {LEFT_REGULAR}:
            return 1 if faithful else 2
        if kinds == {SINGULAR_CLOSED}:
            return 3 if faithful else 4
        if not kinds:
            return 5 if faithful else 6
        return None
    if rep.wm_parts and all(w.mixing for w in rep.wm_parts):
        return 7
    return None


@dataclass(frozen=True)
class Factoriality:
    factor: bool
    center: str
    kernel_index: object

    def to_json(self) -> dict:
        return {"factor": self.factor, "center": self.center,
                "kernel_index": to_json(self.kernel_index)}


def factoriality(rep: Representation) -> Factoriality:
    T = kernel_index(rep)
    if is_inf(T):
        return Factoriality(True, "trivial", T)
    kern = "Z" if T == 1 else f"{T}Z"
    return Factoriality(False, f"L({kern}) inside A_pi (kernel {kern})", T)


def _periodic(rep: Representation):
    if rep.wm_parts or is_faithful(rep):
        return None
    return periodic_invariant(rep)


# ----------------------------------------------------------- comparison


@dataclass(frozen=True)
class Verdict:
    kind: str
    rule: str
    certificate: dict = field(compare=False)
    human_summary: str = field(default="", compare=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "rule": self.rule, "certificate": self.certificate,
                "human_summary": self.human_summary}

    def __str__(self):
        return f"{self.kind}({self.rule}): {self.human_summary}"


def _is_regular_shape(rep: Representation) -> bool:
    """Single left regular part of multiplicity one, plus at most one
    trivial eigenvalue."""
    if len(rep.wm_parts) != 1:
        return False
    w = rep.wm_parts[0]
    if w.kind != LEFT_REGULAR or w.multiplicity != 1:
        return False
    if not rep.atoms:
        return True
    return len(rep.atoms) == 1 and rep.atoms[0][0].is_identity and rep.atoms[0][1] == 1


def _single_pair(rep: Representation):
    """The unique non-trivial eigenvalue if it is one pair of infinite order
    and every other eigenvalue is trivial."""
    if rep.wm_parts:
        return None
    nontriv = [(p, m) for p, m in rep.atoms if not p.is_identity]
    if len(nontriv) != 1 or nontriv[0][1] != 1 or not nontriv[0][0].symbols:
        return None
    return nontriv[0][0]


def _basis_for(rep: Representation, truncate: int) -> list:
    """Generator weights of the free group in the amalgamated presentation:
    acting generators with their eigenvalues, plus trivial ones."""
    out = []
    m0 = ranks(rep)[2]
    for p, m in rep.atoms:
        if p.is_identity:
            continue
        out += [p] * (truncate if is_inf(m) else m)
    n1 = sum(1 for p in out if p != HALF)
    m0 = truncate if is_inf(m0) else m0
    out += [IDENTITY] * (n1 + m0)
    return out


def _rebase_witness(r1: Representation, r2: Representation, truncate: int):
    w1 = _basis_for(r1, truncate)
    w2 = _basis_for(r2, truncate)
    truncated = is_inf(ap_dimension(r1))
    # pad the shorter truncation with trivial weights (prefixes of the same
    # infinite basis)
    while len(w1) < len(w2):
        w1.append(IDENTITY)
    while len(w2) < len(w1):
        w2.append(IDENTITY)
    names = _source_names(w1)
    src = WeightedBasis.of(list(zip(names, w1)))
    auto, basis = rebase(src, w2)
    return src, w2, auto, basis, truncated


def _source_names(weights) -> list:
    nx = nz = ne = 0
    names = []
    for p in weights:
        if p.is_identity:
            ne += 1
            names.append(f"y{ne}")
        elif p == HALF:
            nz += 1
            names.append(f"z{nz}")
        else:
            nx += 1
            names.append(f"x{nx}")
    return names


@lru_cache(maxsize=None)
def _regular_check():
    from .freeprob import reduction_report
    r = reduction_report(2, 2, 4)
    return r.ok


def _subgroups(r1, r2):
    syms = _symbols(r1, r2)
    return (generate([p for p, _ in r1.atoms], syms), generate([p for p, _ in r2.atoms], syms))


def _distinct_value(rule: str, rep: Representation):
    if rule == R_FACTORIALITY:
        return "factor" if factoriality(rep).factor else "non-factor"
    if rule == R_SOLIDITY:
        return solidity(rep).status
    if rule == R_RIGIDITY:
        return rigidity_class(rep)
    if rule == R_SHAPE:
        p = _periodic(rep)
        return None if p is None else p.shape
    raise ValueError(rule)


def _match_distinct(rule: str, r1, r2):
    """Certificate dict if the Distinct rule fires, else None."""
    if rule == R_FACTORIALITY:
        v1, v2 = _distinct_value(rule, r1), _distinct_value(rule, r2)
        if v1 != v2:
            return {"invariant": "factoriality", "values": [v1, v2]}
    elif rule == R_SOLIDITY:
        v1, v2 = _distinct_value(rule, r1), _distinct_value(rule, r2)
        if {v1, v2} == {"StronglySolid", "NotSolid"}:
            return {"invariant": "solidity", "values": [v1, v2]}
    elif rule == R_RIGIDITY:
        v1, v2 = rigidity_class(r1), rigidity_class(r2)
        if v1 is not None and v2 is not None and v1 != v2:
            return {"invariant": "rigidity class", "values": [v1, v2]}
    elif rule == R_SPECTRAL:
        sep = separating_invariant(r1, r2)
        if sep is not None:
            return {"invariant": sep.invariant, "values": [sep.left, sep.right]}
    elif rule == R_SHAPE:
        v1, v2 = _distinct_value(rule, r1), _distinct_value(rule, r2)
        if v1 and v2 and v1 != v2 and "free" not in (v1, v2):
            return {"invariant": "periodic shape", "values": [v1, v2]}
    return None


def _match_isomorphic(rule: str, r1, r2, truncate: int, witness: bool = True):
    if rule == R_REGULAR:
        if _is_regular_shape(r1) and _is_regular_shape(r2) and r1 != r2:
            cert = {"shapes": [r1.describe(), r2.describe()],
                    "identification": "both crossed products are L F_2"}
            if witness:
                cert["cumulant_check"] = {"k": 2, "m": 2, "order": 4, "passed": _regular_check()}
            return cert
        return None
    if rule == R_PERIODIC:
        p1, p2 = _periodic(r1), _periodic(r2)
        if p1 is not None and p2 is not None and p1.iso_key == p2.iso_key:
            return {"forms": [p1.to_json(), p2.to_json()]}
        return None
    if rule == R_SUBGROUP:
        if r1.wm_parts != r2.wm_parts or ap_dimension(r1) != ap_dimension(r2):
            return None
        if not r1.atoms and not r2.atoms:
            return None
        g1, g2 = _subgroups(r1, r2)
        if g1 != g2:
            return None
        cert = {"subgroup": g1.literal(), "ap_dimension": to_json(ap_dimension(r1)),
                "wm": [w.describe() for w in r1.wm_parts]}
        if witness:
            try:
                src, tgt, auto, basis, truncated = _rebase_witness(r1, r2, truncate)
                cert["rebase"] = {
                    "source": src.to_json(),
                    "target": basis.to_json(),
                    "automorphism": auto.to_json(),
                    "truncated_at": truncate if truncated else None,
                }
            except FbcpError as e:
                cert["rebase"] = {"error": str(e)}
        return cert
    if rule == R_SINGLE_PAIR:
        p1, p2 = _single_pair(r1), _single_pair(r2)
        if p1 is not None and p2 is not None and dimension(r1) == dimension(r2):
            return {"eigenvalues": [format_angle(p1), format_angle(p2)],
                    "dimension": to_json(dimension(r1))}
        return None
    raise ValueError(rule)


def _unknown(r1, r2):
    p1, p2 = _periodic(r1), _periodic(r2)
    if p1 is not None and p2 is not None and p1.shape == "free" == p2.shape:
        return FREE_GROUP_FACTOR_PROBLEM, {"r": [to_json(p1.r), to_json(p2.r)],
                                           "T": [p1.T, p2.T]}
    if (not r1.wm_parts and not r2.wm_parts and is_faithful(r1) and is_faithful(r2)
            and is_inf(ap_dimension(r1)) and is_inf(ap_dimension(r2))):
        g1, g2 = _subgroups(r1, r2)
        if g1.abstract_type() == g2.abstract_type() and g1 != g2:
            return ABSTRACT_SUBGROUP_CONJECTURE, {
                "subgroups": [g1.literal(), g2.literal()],
                "abstract_type": list(g1.abstract_type())}
    return NO_RULE, {}


def rule_matches(r1: Representation, r2: Representation) -> dict:
    """Every ladder rule that fires, split by outcome (no witnesses)."""
    d = [r for r in DISTINCT_RULES if _match_distinct(r, r1, r2) is not None]
    i = [r for r in ISOMORPHIC_RULES if _match_isomorphic(r, r1, r2, 0, witness=False) is not None]
    return {DISTINCT: d, ISOMORPHIC: i}


_SUMMARY = {
    R_FACTORIALITY: "one crossed product is a factor and the other is not",
    R_SOLIDITY: "one crossed product is strongly solid and the other is not solid",
    R_RIGIDITY: "the representations lie in different separated classes",
    R_SPECTRAL: "the bimodule over the circle algebra has different spectral type",
    R_SHAPE: "the periodic crossed products have different type",
    R_REGULAR: "left regular and left regular plus trivial both give L F_2",
    R_PERIODIC: "periodic representations with the same free group factor parameter",
    R_SUBGROUP: "equal weakly mixing parts, equal dimension, same concrete eigenvalue group",
    R_SINGLE_PAIR: "one irrational eigenvalue pair each, same dimension",
}


def compare(r1: Representation, r2: Representation, truncate: int = DEFAULT_TRUNCATE) -> Verdict:
    for rule in (R_FACTORIALITY, R_SOLIDITY, R_RIGIDITY, R_SPECTRAL, R_SHAPE):
        cert = _match_distinct(rule, r1, r2)
        if cert is not None:
            vals = cert["values"]
            return Verdict(DISTINCT, rule, cert,
                           f"{_SUMMARY[rule]} ({cert['invariant']}: {vals[0]} vs {vals[1]})")
    for rule in ISOMORPHIC_RULES:
        cert = _match_isomorphic(rule, r1, r2, truncate)
        if cert is not None:
            return Verdict(ISOMORPHIC, rule, cert, _SUMMARY[rule])
    obstruction, data = _unknown(r1, r2)
    text = {
        FREE_GROUP_FACTOR_PROBLEM: "deciding this is the isomorphism problem for free group factors"
                                   f" (r = {data.get('r', [None, None])[0]} vs "
                                   f"{data.get('r', [None, None])[1]})",
        ABSTRACT_SUBGROUP_CONJECTURE: "abstractly isomorphic but concretely different eigenvalue "
                                      "groups; conjecturally non-isomorphic",
        NO_RULE: "no rule applies",
    }[obstruction]
    return Verdict(UNKNOWN, obstruction, {"obstruction": obstruction, **data}, text)


def recheck(verdict: Verdict, r1: Representation, r2: Representation) -> bool:
    """Recompute the certificate from the inputs."""
    cert = verdict.certificate
    if verdict.kind == DISTINCT:
        if verdict.rule == R_SPECTRAL:
            v1 = separating_value(cert["invariant"], r1)
            v2 = separating_value(cert["invariant"], r2)
        else:
            fresh = _match_distinct(verdict.rule, r1, r2)
            if fresh is None:
                return False
            v1, v2 = fresh["values"]
        return [v1, v2] == cert["values"] and v1 != v2
    if verdict.kind == ISOMORPHIC:
        if verdict.rule == R_SUBGROUP and "rebase" in cert:
            if "error" in cert["rebase"]:
                return False
            trunc = cert["rebase"]["truncated_at"] or DEFAULT_TRUNCATE
            src, tgt, auto, basis, _ = _rebase_witness(r1, r2, trunc)
            if auto.to_json() != cert["rebase"]["automorphism"]:
                return False
            return check_rebase(src, tgt, auto, basis)
        if verdict.rule == R_REGULAR:
            return _is_regular_shape(r1) and _is_regular_shape(r2) and _regular_check()
        fresh = _match_isomorphic(verdict.rule, r1, r2, 0, witness=False)
        return fresh is not None and fresh == {k: v for k, v in cert.items() if k in fresh}
    obstruction, data = _unknown(r1, r2)
    return obstruction == verdict.rule and not any(rule_matches(r1, r2).values())


# ----------------------------------------------------------------- dossier


def theorems(rep: Representation) -> list:
    """Named identifications that apply to this representation."""
    notes = []
    if _is_regular_shape(rep):
        notes.append("crossed product is isomorphic to L F_2")
    p = _periodic(rep)
    if p is not None:
        if p.shape == "free":
            notes.append(f"periodic: M = L F_{fmt(p.r)} (x) L^inf[0,1] with T = {p.T}")
        elif p.shape == "abelian":
            notes.append("periodic of dimension <= 1 with trivial action: M is abelian")
        else:
            notes.append("periodic of dimension 1, non-trivial: M = M_2 (x) L^inf (x) L^inf")
    if _single_pair(rep) is not None:
        notes.append("one irrational eigenvalue pair: determined by the dimension alone")
    if not rep.wm_parts and rep.atoms:
        notes.append("almost periodic: normaliser of A_pi is the whole algebra")
    return notes


def dossier(rep: Representation, truncate: int = DEFAULT_TRUNCATE) -> dict:
    from .presentation import afp_presentation, cocycle_presentation, normalizer_summary, relative_commutant

    ap, _ = decompose(rep)
    out = {
        "representation": rep_json(rep),
        "dimension": to_json(dimension(rep)),
        "ap_dimension": to_json(ap_dimension(rep)),
        "eigenvalue_subgroup": generate([p for p, _ in rep.atoms], _symbols(rep)).literal(),
        "kernel_index": to_json(kernel_index(rep)),
        "factoriality": factoriality(rep).to_json(),
        "solidity": solidity(rep).to_json(),
        "rigidity_class": rigidity_class(rep),
        "bimodule": bimodule_type(rep).to_json(),
        "normaliser": normalizer_summary(rep).to_json(),
        "presentation": None,
        "relative_commutant": None,
        "cocycle": None,
        "periodic": None,
        "notes": theorems(rep),
    }
    if ap.atoms:
        out["presentation"] = afp_presentation(ap).to_json()
        out["relative_commutant"] = relative_commutant(ap).to_json()
        if not rep.wm_parts:
            out["cocycle"] = cocycle_presentation(ap, truncate).to_json()
    p = _periodic(rep)
    if p is not None:
        out["periodic"] = p.to_json()
    return out
