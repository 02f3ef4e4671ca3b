"""Free-dimension calculus.

A ``FactorDescriptor`` is a finite direct sum of a diffuse hyperfinite
piece, interpolated free group factors and matrix blocks, each with its
trace weight.  Its free dimension is

    d = 1 + sum t_i^2 (r_i - 1) - sum_j (w_j / n_j)^2

and an amalgamated free product over a finite-dimensional amalgam has
parameter d_1 + d_2 - d_amalgam, provided the triple center intersection
is trivial (checked by ``factoriality_gate``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IndeterminateInfinity, NotPeriodic, ParseError, UnsupportedPattern
from .ext import INF, fmt, is_inf, normalize
from .rep import Representation, dimension, kernel_index


@dataclass(frozen=True)
class DiffuseHyperfinite:
    weight: Fraction


@dataclass(frozen=True)
class Interpolated:
    r: object
    weight: Fraction


@dataclass(frozen=True)
class MatrixBlock:
    n: int
    weight: Fraction


@dataclass(frozen=True)
class FactorDescriptor:
    summands: tuple

    def __post_init__(self):
        total = Fraction(0)
        for s in self.summands:
            if not isinstance(s.weight, (int, Fraction)) or s.weight <= 0:
                raise ValueError(f"weights must be positive rationals, got {s.weight!r}")
            total += s.weight
            if isinstance(s, Interpolated) and not (is_inf(s.r) or s.r > 1):
                raise ValueError("interpolated parameter must exceed 1")
            if isinstance(s, MatrixBlock) and s.n < 1:
                raise ValueError("matrix size must be positive")
        if total != 1:
            raise ValueError(f"weights sum to {fmt(total)}, not 1")

    def literal(self) -> str:
        out = []
        for s in self.summands:
            if isinstance(s, DiffuseHyperfinite):
                out.append(f"diffuse@{fmt(s.weight)}")
            elif isinstance(s, Interpolated):
                out.append(f"lfr({fmt(s.r)})@{fmt(s.weight)}")
            else:
                out.append(f"mat({s.n})@{fmt(s.weight)}")
        return " + ".join(out)


def diffuse(weight=1) -> FactorDescriptor:
    return FactorDescriptor((DiffuseHyperfinite(Fraction(weight)),))


def interpolated(r, weight=1) -> FactorDescriptor:
    return FactorDescriptor((Interpolated(r, Fraction(weight)),))


def diagonal(T: int) -> FactorDescriptor:
    """C^T with the uniform trace: T one-dimensional blocks."""
    return FactorDescriptor(tuple(MatrixBlock(1, Fraction(1, T)) for _ in range(T)))


def tensor_diagonal(desc_summand, T: int) -> FactorDescriptor:
    """``N tensor C^T`` for a single summand ``N`` of weight 1."""
    s = desc_summand
    w = Fraction(1, T)
    if isinstance(s, DiffuseHyperfinite):
        return FactorDescriptor(tuple(DiffuseHyperfinite(w) for _ in range(T)))
    if isinstance(s, Interpolated):
        return FactorDescriptor(tuple(Interpolated(s.r, w) for _ in range(T)))
    return FactorDescriptor(tuple(MatrixBlock(s.n, w) for _ in range(T)))


_TERM = re.compile(r"\s*(lfr\(\s*([^)]+?)\s*\)|mat\(\s*(\d+)\s*\)|diag\(\s*(\d+)\s*\)|diffuse)"
                   r"\s*@\s*(\d+(?:/\d+)?)\s*")


def parse_descriptor(text: str) -> FactorDescriptor:
    """Parse ``lfr(4/3)@1``, ``mat(3)@1/2 + diffuse@1/2`` or ``diag(3)@1``.

    ``diag(T)@w`` expands to T one-dimensional blocks of weight w/T each.
    """
    pos, out = 0, []
    while True:
        m = _TERM.match(text, pos)
        if not m:
            raise ParseError(f"bad factor literal near {text[pos:]!r}", col=pos + 1)
        w = Fraction(m.group(5))
        if m.group(2) is not None:
            r = m.group(2)
            out.append(Interpolated(INF if r in ("inf", "∞") else normalize(Fraction(r)), w))
        elif m.group(3) is not None:
            out.append(MatrixBlock(int(m.group(3)), w))
        elif m.group(4) is not None:
            T = int(m.group(4))
            if T < 1:
                raise ParseError("diag size must be positive", col=pos + 1)
            out += [MatrixBlock(1, w / T) for _ in range(T)]
        else:
            out.append(DiffuseHyperfinite(w))
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != "+":
            raise ParseError(f"expected '+' at {text[pos:]!r}", col=pos + 1)
        pos += 1
    try:
        return FactorDescriptor(tuple(out))
    except ValueError as e:
        raise ParseError(str(e)) from None


def free_dimension(m: FactorDescriptor):
    d = Fraction(1)
    for s in m.summands:
        if isinstance(s, Interpolated):
            if is_inf(s.r):
                return INF
            d += s.weight ** 2 * (s.r - 1)
        elif isinstance(s, MatrixBlock):
            d -= (s.weight / s.n) ** 2
    return normalize(d)


def afp_free_dimension(d1, d2, d_amalgam):
    if is_inf(d_amalgam):
        raise IndeterminateInfinity("infinite free dimension for the amalgam gives inf - inf")
    if is_inf(d1) or is_inf(d2):
        return INF
    return normalize(Fraction(d1) + Fraction(d2) - Fraction(d_amalgam))


# ------------------------------------------------------- factoriality gate

# side kinds emitted by the periodic reduction
FREE_TENSOR_DIAG = "free_tensor_diag"      # L F_n tensor C^T (n = 1 is L Z tensor C^T)
DIFFUSE_TENSOR_MATRIX = "diffuse_tensor_matrix"  # L^inf[0,1] tensor M_T, C^T on the diagonal
INTERPOLATED_FACTOR = "interpolated_factor"  # L F_r, a factor


@dataclass(frozen=True)
class AfpPattern:
    left: str
    right: str
    amalgam_dim: int
    left_rank: object = 1
    shared_central_projection: bool = False

    def describe(self) -> str:
        names = {
            FREE_TENSOR_DIAG: f"L F_{fmt(self.left_rank)} (x) C^{self.amalgam_dim}",
            DIFFUSE_TENSOR_MATRIX: f"L^inf[0,1] (x) M_{self.amalgam_dim}",
            INTERPOLATED_FACTOR: "L F_r",
        }
        return f"({names.get(self.left, self.left)}) *_C^{self.amalgam_dim} ({names.get(self.right, self.right)})"


def factoriality_gate(pattern: AfpPattern) -> bool:
    """Is the triple center intersection trivial for this pattern?

    The right-hand sides either are factors or have center meeting the
    diagonally embedded C^T trivially, so the intersection is C1 unless a
    central projection is declared shared.
    """
    if pattern.shared_central_projection:
        return False
    if pattern.left != FREE_TENSOR_DIAG or pattern.right not in (DIFFUSE_TENSOR_MATRIX,
                                                                 INTERPOLATED_FACTOR):
        raise UnsupportedPattern(f"no rule for {pattern.left} * {pattern.right}")
    if not (is_inf(pattern.left_rank) or pattern.left_rank >= 1) or pattern.amalgam_dim < 1:
        raise UnsupportedPattern("left side must be diffuse and the amalgam nonzero")
    return True


# -------------------------------------------------------- periodic invariant


@dataclass(frozen=True)
class PeriodicForm:
    T: int
    r: object  # extended rational, or None for the degenerate shapes
    dim: object
    subalgebra_shape: str
    shape: str  # "free" | "abelian" | "type_I2"
    route: tuple = field(default=(), compare=False)

    @property
    def iso_key(self) -> tuple:
        """Equal keys mean isomorphic crossed products."""
        if self.shape == "free":
            return ("free", self.r)
        return (self.shape,)

    def to_json(self) -> dict:
        from .ext import to_json
        return {
            "T": self.T,
            "r": None if self.r is None else to_json(self.r),
            "dimension": to_json(self.dim),
            "shape": self.shape,
            "subalgebra_shape": self.subalgebra_shape,
            "route": [list(step) for step in self.route],
        }


def periodic_formula(T: int, dim):
    if is_inf(dim):
        return INF
    return normalize(1 + Fraction(dim - 1, T))


def free_dimension_route(T: int, dim):
    """Parameter r through amalgamated free products and free dimension.

    The representation is reduced to pi_0 + n*1 where pi_0 is irreducible
    of order T.  Returns ``(r, steps)``.
    """
    steps = []
    if T == 1:
        r = free_dimension(interpolated(dim)) if dim >= 2 else dim
        steps.append(("L F_dim (x) L^inf", fmt(r)))
        return r, steps
    amalgam = free_dimension(diagonal(T))
    if T == 2:
        n = INF if is_inf(dim) else dim - 1
        if not is_inf(n) and n < 1:
            raise NotPeriodic("dimension 1 is a degenerate shape")
        left = free_dimension(tensor_diagonal(Interpolated(n, Fraction(1)) if is_inf(n) or n >= 2
                                              else DiffuseHyperfinite(Fraction(1)), 2))
        right = free_dimension(diffuse())
        pat = AfpPattern(FREE_TENSOR_DIAG, DIFFUSE_TENSOR_MATRIX, 2, n)
        assert factoriality_gate(pat)
        r = afp_free_dimension(left, right, amalgam)
        steps.append((pat.describe(), f"{fmt(left)} + {fmt(right)} - {fmt(amalgam)}", fmt(r)))
        return r, steps
    n = INF if is_inf(dim) else dim - 2
    pat0 = AfpPattern(FREE_TENSOR_DIAG, DIFFUSE_TENSOR_MATRIX, T, 1)
    assert factoriality_gate(pat0)
    lz = free_dimension(tensor_diagonal(DiffuseHyperfinite(Fraction(1)), T))
    r0 = afp_free_dimension(lz, free_dimension(diffuse()), amalgam)
    steps.append((pat0.describe(), f"{fmt(lz)} + 1 - {fmt(amalgam)}", fmt(r0)))
    if n == 0:
        return r0, steps
    left = free_dimension(tensor_diagonal(Interpolated(n, Fraction(1)) if is_inf(n) or n >= 2
                                          else DiffuseHyperfinite(Fraction(1)), T))
    pat = AfpPattern(FREE_TENSOR_DIAG, INTERPOLATED_FACTOR, T, n)
    assert factoriality_gate(pat)
    r = afp_free_dimension(left, r0, amalgam)
    steps.append((pat.describe(), f"{fmt(left)} + {fmt(r0)} - {fmt(amalgam)}", fmt(r)))
    return r, steps


def periodic_invariant(rep: Representation) -> PeriodicForm:
    if rep.wm_parts:
        raise NotPeriodic("representation has a weakly mixing part")
    T = kernel_index(rep)
    if is_inf(T):
        raise NotPeriodic("representation is faithful")
    dim = dimension(rep)
    if dim == 0:
        return PeriodicForm(1, None, 0, "L^inf(S^1) = M", "abelian")
    if T == 1:
        if dim == 1:
            return PeriodicForm(1, 1, 1, "1 (x) L^inf(S^1) inside L Z (x) L^inf(S^1)", "abelian")
        r, steps = free_dimension_route(1, dim)
        return PeriodicForm(1, r, dim, "1 (x) L^inf(S^1) inside L F_dim (x) L^inf(S^1)",
                            "free", tuple(steps))
    if dim == 1:
        return PeriodicForm(2, None, 1, "C^2 (x) 1 (x) L^inf inside M_2 (x) L^inf (x) L^inf",
                            "type_I2")
    r = periodic_formula(T, dim)
    r2, steps = free_dimension_route(T, dim)
    if r != r2:
        raise AssertionError(f"free dimension route gives {fmt(r2)}, formula {fmt(r)}")
    shape = f"C^{T} (x) L^inf[0,1] inside L^inf[0,1] (x) L F_r"
    return PeriodicForm(T, r, dim, shape, "free", tuple(steps))
