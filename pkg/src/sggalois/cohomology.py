"""Low-degree cohomology of the finite group Gal with trivial F2 coefficients.

Cochains are functions on canonical elements. Degree-two questions are
answered on the Cayley graph of the generators x_k: a normalized 2-cocycle is
determined by its values c(sigma, x_k), and a cocycle is a coboundary as soon
as d1 f agrees with it on those edges. The dense bar complex is kept as an
oracle for tiny groups.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

import numpy as np

from . import kernels
from .errors import GuardrailError, NotHomomorphismError, PreconditionError
from .galois import GalGroup, gal_group, maximal_subgroup
from .gf2 import Gf2Matrix, Gf2Subspace, dot, parity, solve, to_bitstring
from .ktheory import is_k_stable, k2_product_is_zero, relation_module, relation_pairs
from .psg import Elem, Psg, as_int

MAX_COBOUNDARY_EXP = 14
MAX_H2_EXP = 6
MAX_DENSE_EXP = 8
MAX_BAR_EXP = 4


# group data ------------------------------------------------------------------------


@dataclass
class _Cayley:
    """Elements of Gal with right multiplication by the generators."""

    elems: list[int]
    index: dict[int, int]
    right: np.ndarray  # right[i, k] = index of elems[i] * x_k

    @property
    def order(self) -> int:
        return len(self.elems)


def _cayley(G: GalGroup) -> _Cayley:
    hit = getattr(G, "_cayley_cache", None)
    if hit is not None:
        return hit
    elems = G.elements()
    index = {g: i for i, g in enumerate(elems)}
    right = np.zeros((len(elems), G.n), dtype=np.int64)
    gs = np.array(elems, dtype=np.uint64)
    for k, x in enumerate(G.generators()):
        prods = G.mul_many(gs, np.full(len(elems), x, dtype=np.uint64))
        right[:, k] = [index[int(h)] for h in prods]
    cay = _Cayley(elems, index, right)
    G._cayley_cache = cay
    return cay


def _check_size(G: GalGroup, limit: int, what: str):
    if G.order_exp > limit:
        raise GuardrailError(what, G.order_exp, limit)


# H0 and H1 -------------------------------------------------------------------------


@dataclass(frozen=True)
class H0:
    """H^0 = F2 with the nonzero class as distinguished element."""

    order: int = 2
    elements: tuple[int, ...] = (0, 1)
    distinguished: int = 1


def h0(G: GalGroup) -> H0:
    # trivial action: every element of F2 is fixed
    return H0()


@dataclass(frozen=True)
class GalCharacter:
    """chi_a : Gal -> F2 with kernel M_a (a in native coordinates)."""

    group: GalGroup
    a: int

    @property
    def work(self) -> int:
        return self.group.to_work(self.a)

    def __call__(self, sigma: int) -> int:
        return dot(self.group.gamma(sigma), self.work)

    def __add__(self, other: "GalCharacter") -> "GalCharacter":
        return GalCharacter(self.group, self.a ^ other.a)

    def is_homomorphism(self) -> bool:
        return True

    def __str__(self) -> str:
        return f"chi_{self.group.native.fmt(self.a)}"


@dataclass(frozen=True)
class H1:
    group: GalGroup
    dim: int
    characters: dict[int, GalCharacter] = field(repr=False)

    @property
    def distinguished(self) -> GalCharacter:
        return self.characters[self.group.native.minus_one]

    def iso(self, a: Elem) -> GalCharacter:
        """The pointed isomorphism G -> H^1, a |-> chi_a."""
        return self.characters[as_int(a)]

    def verify(self, max_exp: int = 12) -> bool:
        """Every chi_a is a homomorphism with kernel M_a and they are pairwise distinct.

        A homomorphism to F2 is fixed by its values on the generators, so
        distinct chi_a exhaust Hom(Gal, F2).
        """
        G = self.group
        _check_size(G, max_exp, "character verification")
        cay = _cayley(G)
        seen = set()
        for a, chi in self.characters.items():
            vals = tuple(chi(g) for g in cay.elems)
            if not _is_hom_values(cay, vals):
                return False
            if a and any((v == 0) != maximal_subgroup(G, a).contains(g) for g, v in zip(cay.elems, vals)):
                return False
            if not a and any(vals):
                return False
            seen.add(vals)
        return len(seen) == 1 << G.n


def h1(G: GalGroup) -> H1:
    chars = {a: GalCharacter(G, a) for a in range(1 << G.n)}
    return H1(G, G.n, chars)


def _is_hom_values(cay: _Cayley, vals) -> bool:
    # f(sigma x_k) = f(sigma) + f(x_k) for all sigma, k makes f a homomorphism
    n = cay.right.shape[1]
    gen_vals = [vals[int(cay.right[0, k])] for k in range(n)]
    return all(
        vals[int(cay.right[i, k])] == vals[i] ^ gen_vals[k] for i in range(cay.order) for k in range(n)
    ) and vals[0] == 0


# cochains ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Cochain1:
    """A total function Gal -> F2 stored densely over canonical elements."""

    group: GalGroup
    values: Mapping[int, int] = field(repr=False)

    def __post_init__(self):
        if len(self.values) != self.group.order:
            raise PreconditionError("a 1-cochain must be defined on every element")

    @classmethod
    def from_function(cls, G: GalGroup, f: Callable[[int], int]) -> "Cochain1":
        return cls(G, {g: f(g) & 1 for g in G.elements()})

    @classmethod
    def zero(cls, G: GalGroup) -> "Cochain1":
        return cls.from_function(G, lambda g: 0)

    @classmethod
    def random(cls, G: GalGroup, rng: random.Random) -> "Cochain1":
        return cls.from_function(G, lambda g: rng.getrandbits(1))

    def __call__(self, sigma: int) -> int:
        return self.values[self.group.canon(sigma)]

    def is_homomorphism(self) -> bool:
        cay = _cayley(self.group)
        return _is_hom_values(cay, [self.values[g] for g in cay.elems])

    def coboundary(self) -> "Cochain2":
        G = self.group
        return Cochain2(G, lambda s, t: self(s) ^ self(t) ^ self(G.mul(s, t)), is_cocycle=True)


@dataclass(frozen=True)
class Cochain2:
    """A function Gal x Gal -> F2, kept as a callable on canonical elements.

    ``is_cocycle`` records that the function is a cocycle by construction;
    otherwise queries that rely on the cocycle identity check it densely.
    """

    group: GalGroup
    func: Callable[[int, int], int] = field(repr=False)
    is_cocycle: bool = False
    factors: Optional[tuple] = field(default=None, repr=False)

    @classmethod
    def zero(cls, G: GalGroup) -> "Cochain2":
        return cls(G, lambda s, t: 0, is_cocycle=True)

    @classmethod
    def from_table(cls, G: GalGroup, table: Mapping[tuple[int, int], int]) -> "Cochain2":
        elems = G.elements()
        if any((s, t) not in table for s in elems for t in elems):
            raise PreconditionError("a 2-cochain must be defined on every pair")
        return cls(G, lambda s, t: table[(s, t)] & 1)

    def __call__(self, s: int, t: int) -> int:
        return self.func(s, t) & 1

    def __add__(self, other: "Cochain2") -> "Cochain2":
        return Cochain2(
            self.group, lambda s, t: self(s, t) ^ other(s, t), is_cocycle=self.is_cocycle and other.is_cocycle
        )

    def table(self, max_exp: int = MAX_DENSE_EXP) -> dict[tuple[int, int], int]:
        _check_size(self.group, max_exp, "dense 2-cochain table")
        elems = self.group.elements()
        return {(s, t): self(s, t) for s in elems for t in elems}

    def check_cocycle(self, max_exp: int = 6) -> bool:
        """d2 c = 0 on every triple (dense)."""
        G = self.group
        _check_size(G, max_exp, "dense cocycle check")
        elems = G.elements()
        for s in elems:
            for t in elems:
                st = G.mul(s, t)
                c_st = self(s, t)
                for r in elems:
                    if self(t, r) ^ self(st, r) ^ self(s, G.mul(t, r)) ^ c_st:
                        return False
        return True

    def check_cocycle_sampled(self, trials: int, rng: random.Random) -> bool:
        G = self.group
        elems = G.elements()
        for _ in range(trials):
            s, t, r = (rng.choice(elems) for _ in range(3))
            if self(t, r) ^ self(G.mul(s, t), r) ^ self(s, G.mul(t, r)) ^ self(s, t):
                return False
        return True


CharLike = Union[GalCharacter, Cochain1]


def cup(chi1: CharLike, chi2: CharLike) -> Cochain2:
    """(chi1 cup chi2)(sigma, tau) = chi1(sigma) chi2(tau)."""
    if chi1.group is not chi2.group:
        raise PreconditionError("characters of different groups")
    for chi in (chi1, chi2):
        if not chi.is_homomorphism():
            raise NotHomomorphismError("cup products are taken of homomorphisms Gal -> F2")
    return Cochain2(chi1.group, lambda s, t: chi1(s) & chi2(t), is_cocycle=True, factors=(chi1, chi2))


# coboundaries ------------------------------------------------------------------------


@dataclass
class _Tree:
    """A BFS spanning tree of the Cayley graph.

    ``lin[i]`` is the linear part of f(elems[i]) in the unknowns f(x_k) (bit k)
    and f(1) (bit n); ``order`` lists the tree edges (i, k, j) with
    elems[j] = elems[i] x_k in BFS order; the other edges are in ``extra``.
    """

    lin: np.ndarray
    order: list[tuple[int, int, int]]
    extra: np.ndarray  # rows (i, k, j)
    extra_lin: np.ndarray


def _tree(G: GalGroup) -> _Tree:
    hit = getattr(G, "_tree_cache", None)
    if hit is not None:
        return hit
    cay = _cayley(G)
    n, N = G.n, cay.order
    right = cay.right.tolist()
    lin = [-1] * N
    lin[0] = 1 << n
    order, extra = [], []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for k in range(n):
            j = right[i][k]
            if lin[j] < 0:
                lin[j] = lin[i] ^ (1 << k)
                order.append((i, k, j))
                queue.append(j)
            else:
                extra.append((i, k, j))
    lin_a = np.array(lin, dtype=np.int64)
    ex = np.array(extra, dtype=np.int64).reshape(-1, 3)
    ex_lin = lin_a[ex[:, 0]] ^ lin_a[ex[:, 2]] ^ (np.int64(1) << ex[:, 1])
    tree = _Tree(lin_a, order, ex, ex_lin)
    G._tree_cache = tree
    return tree


def _char_values(chi: CharLike, cay: _Cayley) -> np.ndarray:
    if isinstance(chi, GalCharacter):
        G = chi.group
        gam = np.array([g >> G.m for g in cay.elems], dtype=np.int64) & chi.work
        par = np.zeros(len(gam), dtype=np.uint8)
        while gam.any():
            par ^= (gam & 1).astype(np.uint8)
            gam >>= 1
        return par
    return np.array([chi(g) for g in cay.elems], dtype=np.uint8)


def _edge_values(c: "Cochain2", cay: _Cayley) -> np.ndarray:
    """c(sigma, x_k) as an N x n array."""
    gens = [cay.elems[int(j)] for j in cay.right[0]]
    if c.factors is not None:
        left = _char_values(c.factors[0], cay)
        right = np.array([c.factors[1](x) for x in gens], dtype=np.uint8)
        return np.outer(left, right).astype(np.uint8)
    return np.array([[c(s, x) for x in gens] for s in cay.elems], dtype=np.uint8).reshape(cay.order, len(gens))


def _full_check(G: GalGroup, c: "Cochain2", f: Cochain1) -> bool:
    elems = G.elements()
    return all(f(s) ^ f(t) ^ f(G.mul(s, t)) == c(s, t) for s in elems for t in elems)


def is_coboundary(G: GalGroup, c: "Cochain2", max_exp: int = MAX_COBOUNDARY_EXP) -> Optional[Cochain1]:
    """A witness f with d1 f = c, or None when c is not a coboundary.

    Unknowns are f(x_k) and f(1); f is propagated along a spanning tree of the
    Cayley graph and every other edge contributes one affine equation. For a
    cocycle, agreement on the edges (sigma, x_k) and at (1, 1) forces
    agreement everywhere, so the decision is exact. Cochains not known to be
    cocycles are verified on all pairs, which needs a dense-size group.
    """
    _check_size(G, max_exp, "coboundary solve")
    if not c.is_cocycle and G.order_exp > MAX_DENSE_EXP:
        raise GuardrailError("coboundary check of a cochain not known to be a cocycle", G.order_exp, MAX_DENSE_EXP)
    n = G.n
    cay = _cayley(G)
    tree = _tree(G)
    edges = _edge_values(c, cay)
    const = np.zeros(cay.order, dtype=np.uint8)
    for i, k, j in tree.order:
        const[j] = const[i] ^ edges[i, k]
    ex = tree.extra
    lin_rows = list(tree.extra_lin)
    const_rows = list(const[ex[:, 0]] ^ const[ex[:, 2]] ^ edges[ex[:, 0], ex[:, 1]])
    # f(x_k) is the unknown u_k, and d1 f (1, 1) = f(1) must equal c(1, 1)
    gens = [int(j) for j in cay.right[0]]
    lin_rows += [int(tree.lin[j]) ^ (1 << k) for k, j in enumerate(gens)] + [1 << n]
    const_rows += [int(const[j]) for j in gens] + [c(0, 0)]
    system: dict[int, int] = {}
    for lr, cr in zip(lin_rows, const_rows):
        lr, cr = int(lr), int(cr)
        if system.setdefault(lr, cr) != cr:
            return None
    if system.get(0, 0):
        return None
    keys = sorted(system)
    sol = solve(Gf2Matrix(n + 1, tuple(keys)), sum(system[r] << i for i, r in enumerate(keys)))
    if sol is None:
        return None
    vals = (tree.lin & sol).tolist()
    f = Cochain1(G, {g: parity(v) ^ int(const[i]) for i, (g, v) in enumerate(zip(cay.elems, vals))})
    if (not c.is_cocycle or G.order_exp <= MAX_BAR_EXP) and not _full_check(G, c, f):
        return None
    return f


def is_cohomologous_to_zero(G: GalGroup, c: Cochain2, max_exp: int = MAX_COBOUNDARY_EXP) -> bool:
    return is_coboundary(G, c, max_exp) is not None


# H2 ----------------------------------------------------------------------------------


def h2_dim(G: GalGroup, max_exp: int = MAX_H2_EXP) -> int:
    """dim H^2(Gal, F2) from the normalized complex.

    The unknowns are e(sigma, k) = c(sigma, x_k) for sigma != 1. For each
    sigma the values c(sigma, tau) follow by propagating the cocycle identity
    along a spanning tree in tau; the remaining edges give linear constraints.
    """
    _check_size(G, max_exp, "H^2 computation")
    n = G.n
    cay = _cayley(G)
    N = cay.order
    if N == 1:
        return 0

    def e(i: int, k: int) -> int:
        return 0 if i == 0 else 1 << ((i - 1) * n + k)

    rows: list[int] = []
    right = cay.right.tolist()
    for s in range(1, N):
        forms: list[Optional[int]] = [None] * N
        st = [0] * N  # index of sigma * tau
        forms[0], st[0] = 0, s
        queue = deque([0])
        while queue:
            t = queue.popleft()
            for k in range(n):
                t2 = right[t][k]
                val = forms[t] ^ e(t, k) ^ e(st[t], k)
                if forms[t2] is None:
                    forms[t2] = val
                    st[t2] = right[st[t]][k]
                    queue.append(t2)
                elif forms[t2] != val:
                    rows.append(forms[t2] ^ val)
    nvars = (N - 1) * n
    z2 = nvars - kernels.rank_rows(rows, nvars)
    b2 = N - 1 - n
    return z2 - b2


def bar_h2_dim(G: GalGroup, max_exp: int = MAX_BAR_EXP) -> int:
    """dim H^2 from the full inhomogeneous bar complex (oracle for tiny groups)."""
    _check_size(G, max_exp, "dense bar complex")
    elems = G.elements()
    N = len(elems)
    idx = {g: i for i, g in enumerate(elems)}
    mul = [[idx[G.mul(s, t)] for t in elems] for s in elems]
    # d1: columns f(g), rows (s, t)
    d1 = [(1 << s) ^ (1 << t) ^ (1 << mul[s][t]) for s in range(N) for t in range(N)]
    d1_rank = kernels.rank_rows([r for r in _transpose_rows(d1, N)], N * N)
    # d2: columns c(s, t) indexed s * N + t, rows (s, t, r)
    d2 = []
    for s in range(N):
        for t in range(N):
            st = mul[s][t]
            for r in range(N):
                d2.append((1 << (t * N + r)) ^ (1 << (st * N + r)) ^ (1 << (s * N + mul[t][r])) ^ (1 << (s * N + t)))
    d2_rank = kernels.rank_rows(d2, N * N)
    return N * N - d2_rank - d1_rank


def _transpose_rows(rows: list[int], ncols: int) -> list[int]:
    out = [0] * ncols
    for i, r in enumerate(rows):
        j = 0
        while r:
            if r & 1:
                out[j] |= 1 << i
            r >>= 1
            j += 1
    return out


# the Milnor-map experiment -----------------------------------------------------------


def milnor_map_experiment(p: Psg, max_exp: int = MAX_COBOUNDARY_EXP, h2_max_exp: int = MAX_H2_EXP) -> dict:
    """For every relation pair (a, b), is chi_a cup chi_b a coboundary?

    The assignment l(a) l(b) |-> [chi_a cup chi_b] is well defined on k2
    exactly when every relation pair maps to zero. This is a report of
    evidence, not a theorem.
    """
    if not is_k_stable(p):
        raise PreconditionError("the pre-special group is not k-stable")
    G = gal_group(p)
    _check_size(G, max_exp, "Milnor map experiment")
    H1g = h1(G)
    fmt = p.fmt
    table = []
    cache: dict[tuple[int, int], bool] = {}
    for a, b in sorted(set(relation_pairs(p))):
        if (a, b) not in cache:
            cache[(a, b)] = is_coboundary(G, cup(H1g.iso(a), H1g.iso(b)), max_exp) is not None
        table.append({"a": fmt(a), "b": fmt(b), "cup_is_coboundary": cache[(a, b)]})
    rep = {
        "name": p.name,
        "h0": h0(G).order,
        "h1_dim": H1g.dim,
        "relation_pairs": table,
        "k2_map_well_defined": all(r["cup_is_coboundary"] for r in table),
    }
    if G.order_exp <= h2_max_exp:
        rep["h2_dim"] = h2_dim(G, h2_max_exp)
    return rep


def cohomology_report(p: Psg, max_exp: int = MAX_COBOUNDARY_EXP, h2_max_exp: int = MAX_H2_EXP) -> dict:
    G = gal_group(p)
    H1g = h1(G)
    rep = {
        "name": p.name,
        "order": G.order,
        "h0": h0(G).order,
        "h1_dim": H1g.dim,
        "h1_distinguished": str(H1g.distinguished),
    }
    if G.order_exp <= h2_max_exp:
        rep["h2_dim"] = h2_dim(G, h2_max_exp)
    if is_k_stable(p):
        exp = milnor_map_experiment(p, max_exp, h2_max_exp)
        rep["relation_pairs"] = exp["relation_pairs"]
        rep["k2_map_well_defined"] = exp["k2_map_well_defined"]
    return rep


__all__ = [
    "Cochain1",
    "Cochain2",
    "GalCharacter",
    "H0",
    "H1",
    "bar_h2_dim",
    "cohomology_report",
    "cup",
    "h0",
    "h1",
    "h2_dim",
    "is_coboundary",
    "is_cohomologous_to_zero",
    "milnor_map_experiment",
]
