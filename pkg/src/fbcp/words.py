"""Free groups: reduced words, weighted bases, substitution automorphisms,
the basis-change algorithm between eigenvalue-weighted bases, and Schreier
graphs for kernels of finite quotients."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .circle import HALF, IDENTITY, CirclePoint, express, format_angle, generate, is_real
from .errors import (ExpressFailure, InfiniteImage, NotInSubgroup, SizeMismatch, SubgroupMismatch,
                     TailUsesSubstitutedLetter)


class Word:
    """A freely reduced word; letters are ``(generator, +1 | -1)``."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable = ()):
        out: list = []
        for g, e in letters:
            if out and out[-1][0] == g and out[-1][1] == -e:
                out.pop()
            else:
                out.append((g, e))
        self.letters = tuple(out)

    @classmethod
    def gen(cls, g: str) -> "Word":
        return cls(((g, 1),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def substitute(self, mapping: Mapping[str, "Word"]) -> "Word":
        out: list = []
        for g, e in self.letters:
            w = mapping.get(g)
            if w is None:
                out.append((g, e))
            else:
                out.extend(w.letters if e > 0 else w.inverse().letters)
        return Word(out)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def weight(self, weights: Mapping[str, CirclePoint]) -> CirclePoint:
        acc = IDENTITY
        for g, e in self.letters:
            acc = acc + weights[g] if e > 0 else acc - weights[g]
        return acc

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e > 0 else f"{g}^-1" for g, e in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def reduce(w: Word) -> Word:
    return Word(w.letters)


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return Word()
    letters = []
    for tok in text.split():
        if tok.endswith("^-1"):
            letters.append((tok[:-3], -1))
        else:
            letters.append((tok, 1))
    return Word(letters)


@dataclass(frozen=True)
class WeightedBasis:
    generators: tuple
    weights: tuple  # aligned with generators

    @classmethod
    def of(cls, pairs) -> "WeightedBasis":
        pairs = list(pairs.items()) if isinstance(pairs, Mapping) else list(pairs)
        return cls(tuple(g for g, _ in pairs), tuple(w for _, w in pairs))

    def weight_map(self) -> dict:
        return dict(zip(self.generators, self.weights))

    def multiset(self) -> list:
        return sorted(self.weights, key=CirclePoint.sort_key)

    def __len__(self):
        return len(self.generators)

    def to_json(self) -> dict:
        return {g: format_angle(w) for g, w in zip(self.generators, self.weights)}


@dataclass
class Automorphism:
    """An isomorphism F(source) -> F(target).

    ``forward[t]`` writes the new generator ``t`` as a word in the source
    generators; ``backward[s]`` writes the source generator ``s`` in the new
    ones.
    """

    source: tuple
    target: tuple
    forward: dict
    backward: dict
    moves: list = field(default_factory=list)

    @classmethod
    def identity(cls, gens: Sequence[str]) -> "Automorphism":
        gens = tuple(gens)
        return cls(gens, gens, {g: Word.gen(g) for g in gens}, {g: Word.gen(g) for g in gens})

    def then(self, other: "Automorphism") -> "Automorphism":
        """Apply ``self`` and then ``other`` (whose source is ``self.target``)."""
        fwd = {c: other.forward[c].substitute(self.forward) for c in other.target}
        bwd = {a: self.backward[a].substitute(other.backward) for a in self.source}
        return Automorphism(self.source, other.target, fwd, bwd, self.moves + other.moves)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.target, self.source, dict(self.backward), dict(self.forward),
                            [("inverse", len(self.moves))])

    def rename(self, mapping: Mapping[str, str]) -> "Automorphism":
        """Relabel the target generators."""
        ren = {g: Word.gen(mapping.get(g, g)) for g in self.target}
        tgt = tuple(mapping.get(g, g) for g in self.target)
        fwd = {mapping.get(g, g): w for g, w in self.forward.items()}
        bwd = {s: w.substitute(ren) for s, w in self.backward.items()}
        return Automorphism(self.source, tgt, fwd, bwd, list(self.moves))

    def verify(self) -> bool:
        """Both compositions reduce to the identity on every generator."""
        if set(self.forward) != set(self.target) or set(self.backward) != set(self.source):
            return False
        for t in self.target:
            if self.forward[t].substitute(self.backward) != Word.gen(t):
                return False
        for s in self.source:
            if self.backward[s].substitute(self.forward) != Word.gen(s):
                return False
        return True

    def induced_weights(self, weights: Mapping[str, CirclePoint]) -> dict:
        return {t: self.forward[t].weight(weights) for t in self.target}

    def to_json(self) -> dict:
        return {
            "forward": {t: str(self.forward[t]) for t in self.target},
            "backward": {s: str(self.backward[s]) for s in self.source},
        }


def nielsen_substitute(basis, I: Iterable[str], tails: Mapping[str, Word]) -> Automorphism:
    """Right-multiply each generator in ``I`` by a word in the other generators.

    ``basis`` may be a ``WeightedBasis`` or a plain generator sequence.
    """
    gens = tuple(basis.generators if isinstance(basis, WeightedBasis) else basis)
    I = [g for g in gens if g in set(I)]
    fwd = {g: Word.gen(g) for g in gens}
    bwd = {g: Word.gen(g) for g in gens}
    for s in I:
        tail = tails.get(s, Word())
        touched = tail.generators() & set(I)
        if touched:
            raise TailUsesSubstitutedLetter(
                f"tail of {s} uses substituted letter(s) {sorted(touched)}")
        fwd[s] = Word.gen(s) * tail
        bwd[s] = Word.gen(s) * tail.inverse()
    moves = [("substitute", {s: str(tails.get(s, Word())) for s in I})] if I else []
    return Automorphism(gens, gens, fwd, bwd, moves)


# ------------------------------------------------------------ basis change


def _power_word(coeffs: Sequence[int], letters: Sequence[str]) -> Word:
    out = Word()
    for c, g in zip(coeffs, letters):
        if c:
            out = out * Word.gen(g) ** c
    return out


class _Builder:
    """Accumulates substitution moves on a weighted basis."""

    def __init__(self, gens, weights):
        self.auto = Automorphism.identity(gens)
        self.w = dict(weights)

    def move(self, tails: Mapping[str, Word]):
        tails = {s: t for s, t in tails.items() if t}
        if not tails:
            return
        step = nielsen_substitute(self.auto.target, tails.keys(), tails)
        for s, t in tails.items():
            self.w[s] = self.w[s] + t.weight(self.w)
        self.auto = self.auto.then(step)


def _roles(gens: Sequence[str], weights: Mapping[str, CirclePoint]):
    xs = [g for g in gens if not is_real(weights[g])]
    zs = [g for g in gens if weights[g] == HALF]
    es = [g for g in gens if weights[g].is_identity]
    if len(es) < len(xs):
        raise SizeMismatch("basis needs a trivial partner for each non-real weight")
    return xs, es[: len(xs)], zs, es[len(xs):]


def _target_roles(target: Sequence[CirclePoint]):
    mus = sorted((p for p in target if not is_real(p)), key=CirclePoint.sort_key)
    l2 = sum(1 for p in target if p == HALF)
    triv = sum(1 for p in target if p.is_identity)
    if triv < len(mus):
        raise SizeMismatch("target multiset needs a trivial weight for each non-real weight")
    return mus, l2, triv - len(mus)


def _express(target: CirclePoint, gens: Sequence[CirclePoint]) -> list[int]:
    try:
        return express(target, gens)
    except NotInSubgroup as e:
        raise ExpressFailure(str(e)) from None


def canonical_basis(mus: Sequence[CirclePoint], l2: int, k0: int, names=("x", "y", "z", "w")):
    """Weighted basis x_i (mu_i), y_i (0), z_j (1/2), w_k (0), 1-based labels."""
    x, y, z, w = names
    pairs = [(f"{x}{i + 1}", m) for i, m in enumerate(mus)]
    pairs += [(f"{y}{i + 1}", IDENTITY) for i in range(len(mus))]
    pairs += [(f"{z}{j + 1}", HALF) for j in range(l2)]
    pairs += [(f"{w}{k + 1}", IDENTITY) for k in range(k0)]
    return WeightedBasis.of(pairs)


def _rebase_oriented(source: WeightedBasis, mus, l2: int, k0: int):
    weights = source.weight_map()
    X, Y, Z, W = _roles(source.generators, weights)
    n1, n2, l1 = len(X), len(Z), len(mus)
    lam = [weights[x] for x in X]
    b = _Builder(source.generators, weights)

    # y_i -> y_i x_i carries the weight of x_i
    b.move({Y[i]: Word.gen(X[i]) for i in range(n1)})
    gens_lz = lam + ([HALF] if n2 else [])
    letters_lz = Y + (Z[:1] if n2 else [])

    def tail_to(target_weight, i):
        a = _express(target_weight, gens_lz)
        if n2:
            a[-1] %= 2
        return Word.gen(Y[i]).inverse() * _power_word(a, letters_lz)

    # r_i = x_i y~_i^-1 prod y~_j^a_j z_1^a_0
    b.move({X[i]: tail_to(mus[i], i) for i in range(l1)})
    R = X[:l1]

    def clear(elems, extra_letters, extra_weights):
        tails = {}
        for e in elems:
            if b.w[e].is_identity:
                continue
            c = _express(-b.w[e], list(mus) + extra_weights)
            if extra_weights:
                c[-1] %= 2
            tails[e] = _power_word(c, R + extra_letters)
        b.move(tails)

    if l2 == 0:
        b.move({X[i]: Word.gen(Y[i]).inverse() for i in range(l1, n1)})
        others = X[l1:] + Y + Z + W
        clear(others, [], [])
        s_gens, t_gens = others, []
    else:
        if l1 < n1:
            t1 = X[l1]
            b.move({t1: tail_to(HALF, l1)})
            unused_x = X[l1 + 1:]
        elif n2:
            t1 = Z[0]
            unused_x = []
        else:
            t1 = W[0]
            b.move({t1: _power_word(_express(HALF, lam), Y)})
            unused_x = []
        others = [g for g in unused_x + Y + Z + W if g != t1]
        clear(others, [t1], [HALF])
        keep = len(others) - (l2 - 1)
        b.move({g: Word.gen(t1) for g in others[keep:]})
        s_gens, t_gens = others[:keep], [t1] + others[keep:]

    names = {}
    for i, g in enumerate(R):
        names[g] = f"r{i + 1}"
    for i, g in enumerate(s_gens):
        names[g] = f"s{i + 1}"
    for i, g in enumerate(t_gens):
        names[g] = f"t{i + 1}"
    order = R + s_gens + t_gens
    auto = b.auto.rename(names)
    auto = Automorphism(auto.source, tuple(names[g] for g in order), auto.forward, auto.backward,
                        auto.moves)
    basis = WeightedBasis.of([(names[g], b.w[g]) for g in order])
    return auto, basis


def rebase(source: WeightedBasis, target_weights: Sequence[CirclePoint]):
    """Change basis so that generator weights become ``target_weights``.

    Returns ``(automorphism, basis)``: ``automorphism.forward`` expresses the
    new generators (labels r, s, t) in the source generators, and ``basis``
    carries their weights, whose multiset equals ``target_weights``.
    """
    target_weights = list(target_weights)
    if len(source) != len(target_weights):
        raise SizeMismatch(f"source has {len(source)} generators, target {len(target_weights)}")
    syms = sorted({s for p in list(source.weights) + target_weights for s in p.symbols})
    if generate(source.weights, syms) != generate(target_weights, syms):
        raise SubgroupMismatch("source and target weights generate different subgroups")
    if source.multiset() == sorted(target_weights, key=CirclePoint.sort_key):
        return Automorphism.identity(source.generators), source
    weights = source.weight_map()
    X, _, _, _ = _roles(source.generators, weights)
    mus, l2, k0 = _target_roles(target_weights)
    if len(mus) <= len(X):
        return _rebase_oriented(source, mus, l2, k0)

    # fewer non-real pairs in the source: run the construction backwards
    X, Y, Z, W = _roles(source.generators, weights)
    flipped = canonical_basis(mus, l2, k0, names=("X", "Y", "Z", "W"))
    src_mus = [weights[x] for x in X]
    back, back_basis = _rebase_oriented(flipped, sorted(src_mus, key=CirclePoint.sort_key),
                                        len(Z), len(W))
    # match the produced generators with the source generators weight by weight
    pool: dict = {}
    for g in source.generators:
        pool.setdefault(weights[g], []).append(g)
    match = {}
    for g, w in zip(back_basis.generators, back_basis.weights):
        match[g] = pool[w].pop(0)
    auto = back.rename(match).inverse()
    rename = {}
    n_mu = len(mus)
    for i in range(n_mu):
        rename[f"X{i + 1}"] = f"r{i + 1}"
        rename[f"Y{i + 1}"] = f"s{i + 1}"
    for k in range(k0):
        rename[f"W{k + 1}"] = f"s{n_mu + k + 1}"
    for j in range(l2):
        rename[f"Z{j + 1}"] = f"t{j + 1}"
    auto = auto.rename(rename)
    fw = flipped.weight_map()
    order = sorted(rename, key=lambda g: (rename[g][0] != "r", rename[g][0] == "t",
                                          int(rename[g][1:])))
    auto = Automorphism(tuple(source.generators), tuple(rename[g] for g in order), auto.forward,
                        auto.backward, auto.moves)
    basis = WeightedBasis.of([(rename[g], fw[g]) for g in order])
    return auto, basis


def check_rebase(source: WeightedBasis, target_weights, auto: Automorphism,
                 basis: WeightedBasis) -> bool:
    """Re-verify a basis change: invertibility, weights, and target multiset."""
    if not auto.verify():
        return False
    if tuple(auto.source) != tuple(source.generators) or tuple(auto.target) != tuple(basis.generators):
        return False
    induced = auto.induced_weights(source.weight_map())
    if induced != basis.weight_map():
        return False
    return basis.multiset() == sorted(target_weights, key=CirclePoint.sort_key)


# --------------------------------------------------------- Schreier graphs


@dataclass
class SchreierGraph:
    """Coset graph of the kernel of F_n -> Z/T, with a BFS spanning tree."""

    order: int
    generators: tuple
    steps: tuple  # generator weight as a multiple of 1/order
    tree: dict  # vertex -> (parent, generator, sign)
    tree_edges: frozenset  # directed edges (vertex, generator) used by the tree

    def edges(self):
        for v in range(self.order):
            for g, a in zip(self.generators, self.steps):
                yield v, g, (v + a) % self.order

    def non_tree_edges(self) -> list:
        return [(v, g, u) for v, g, u in self.edges() if (v, g) not in self.tree_edges]

    @property
    def rank(self) -> int:
        return len(self.non_tree_edges())

    def path(self, v: int) -> Word:
        letters = []
        while v != 0:
            parent, g, sign = self.tree[v]
            letters.append((g, sign))
            v = parent
        return Word(reversed(letters))

    def kernel_generators(self) -> list:
        return [self.path(v) * Word.gen(g) * self.path(u).inverse()
                for v, g, u in self.non_tree_edges()]

    def to_json(self) -> dict:
        return {
            "vertices": self.order,
            "edges": [[v, g, u] for v, g, u in self.edges()],
            "tree_edges": sorted([v, g] for v, g in self.tree_edges),
            "non_tree_edges": [[v, g, u] for v, g, u in self.non_tree_edges()],
            "kernel_generators": [str(w) for w in self.kernel_generators()],
        }


def schreier_graph(weight_map: Mapping[str, CirclePoint]) -> SchreierGraph:
    gens = tuple(weight_map)
    h = generate(weight_map.values())
    if not h.is_finite:
        raise InfiniteImage("image of the generators is infinite")
    T = h.order
    steps = tuple(int(weight_map[g].torsion * T) for g in gens)
    tree: dict = {}
    used = set()
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for g, a in zip(gens, steps):
            for sign in (1, -1):
                u = (v + sign * a) % T
                if u not in seen:
                    seen.add(u)
                    tree[u] = (v, g, sign)
                    used.add((v, g) if sign > 0 else (u, g))
                    queue.append(u)
    return SchreierGraph(T, gens, steps, tree, frozenset(used))


def schreier_rank(n: int, weight_map: Mapping[str, CirclePoint]):
    """Rank of ker(F_n -> circle) for a finite image, with the graph witness."""
    if len(weight_map) != n:
        raise SizeMismatch(f"expected {n} generator weights, got {len(weight_map)}")
    g = schreier_graph(weight_map)
    return g.rank, g
