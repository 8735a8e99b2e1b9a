"""The Galois group W(B)/V(B) of a pre-special group and its structure.

Elements of Gal are canonical packed ints in the W(n) layout: the Frattini
block is reduced against the row echelon basis of V = Q^perp, the gamma block
is untouched. Every structural query has a symbolic path (linear algebra on
gammas and P2 vectors) and, in ``oracle_*`` functions, an enumeration path.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import kernels
from .errors import DimensionError, GuardrailError, NotHomomorphismError, PreconditionError
from .gf2 import (
    BitVec,
    Gf2Matrix,
    Gf2Subspace,
    bits_of,
    complete_basis,
    dot,
    low_bit,
    to_bitstring,
)
from .ktheory import RelationModule, is_k_stable, k2_product_is_zero, q_packed, relation_module, relation_pairs
from .psg import Character, Elem, Psg, PsgMorphism, all_subgroups, as_int, is_saturated
from .wgroup import (
    SmallGroup,
    UniversalHom,
    fingerprint as table_fingerprint,
    identify,
    is_subgroup,
    layout,
    quotient,
    small_group_from,
    table_from_elements,
)

MAX_ENUM_EXP = 20
MAX_STANDARD_N = 5
MAX_LATTICE_N = 4


@dataclass(frozen=True)
class GalElement:
    gamma: BitVec
    phi_part: BitVec


class GalGroup:
    """W(B)/V(B) for the basis B whose rows (native coordinates) are ``basis``."""

    def __init__(self, psg: Psg, basis: Optional[Gf2Matrix] = None):
        n = psg.n
        self.native = psg
        if basis is None:
            basis = Gf2Matrix.identity(n)
        if basis.nrows != n or basis.ncols != n or not basis.is_invertible():
            raise DimensionError("basis must be an invertible n x n matrix")
        self.basis = basis
        self.basis_inv = basis.inverse()
        self.basis_change_to_native = basis
        self.is_native = basis == Gf2Matrix.identity(n)
        self.psg = psg if self.is_native else psg.rebase(basis)
        self.n = n
        self.L = layout(n)
        self.m = self.L.m
        self.Q: RelationModule = relation_module(self.psg)
        self.V: Gf2Subspace = self.Q.basis_of_Q.orthogonal_complement()
        self._vrows = self.V.basis
        self._vpiv = self.V.pivots
        self.order_exp = n + self.Q.dim

    # coordinates -------------------------------------------------------------
    def to_work(self, a: Elem) -> int:
        """Native coordinates of a PSG element -> coordinates in this basis."""
        return self.basis_inv.left_apply(as_int(a))

    def to_native(self, c: int) -> int:
        return self.basis.left_apply(c)

    @property
    def order(self) -> int:
        return 1 << self.order_exp

    @property
    def identity(self) -> int:
        return 0

    # arithmetic --------------------------------------------------------------
    def canon(self, g: int) -> int:
        x = g
        for r, p in zip(self._vrows, self._vpiv):
            if (x >> p) & 1:
                x ^= r
        return x

    def mul(self, g: int, h: int) -> int:
        return self.canon(self.L.mul(g, h))

    def inv(self, g: int) -> int:
        return self.canon(self.L.inv(g))

    def square(self, g: int) -> int:
        return self.canon(self.L.square(g))

    def comm(self, g: int, h: int) -> int:
        return self.canon(self.L.comm(g, h))

    def power(self, g: int, e: int) -> int:
        return self.canon(self.L.power(g, e))

    def gamma(self, g: int) -> int:
        return g >> self.m

    def x(self, k: int) -> int:
        return self.L.x(k)

    def t(self, k: int) -> int:
        return self.canon(self.L.t(k))

    def generators(self) -> list[int]:
        return [self.L.x(k) for k in range(self.n)]

    def is_canonical(self, g: int) -> bool:
        return g >= 0 and g >> self.L.width == 0 and self.canon(g) == g

    def element(self, g: int) -> GalElement:
        return GalElement(BitVec(self.n, self.gamma(g)), BitVec(self.m, g & self.L.phi_mask))

    def from_element(self, e: GalElement) -> int:
        if e.gamma.length != self.n or e.phi_part.length != self.m:
            raise DimensionError("element does not belong to this group")
        return self.canon(e.phi_part.bits | (e.gamma.bits << self.m))

    def mul_many(self, gs, hs):
        """Vectorised products of canonical elements (numpy uint64 arrays)."""
        return kernels.gal_mul_many(gs, hs, self.n, list(self._vrows), list(self._vpiv))

    # enumeration ---------------------------------------------------------------
    def phi_reps(self) -> list[int]:
        return list(self.V.quotient_reps())

    def elements(self, max_exp: int = MAX_ENUM_EXP) -> list[int]:
        if self.order_exp > max_exp:
            raise GuardrailError("Galois group enumeration", self.order_exp, max_exp)
        reps = self.phi_reps()
        m = self.m
        return [r | (g << m) for g in range(1 << self.n) for r in reps]

    def frattini_elements(self) -> list[int]:
        return self.phi_reps()

    # invariants ------------------------------------------------------------------
    def is_abelian(self) -> bool:
        L = self.L
        return all(self.V.contains(L.t2(i, j)) for i, j in L.pairs())

    def involution_count(self) -> int:
        per = 1 << self.Q.dim
        cos = len(involution_cosets(self))
        return cos * per + per - 1

    def exponent(self) -> int:
        if self.order_exp == 0:
            return 1
        if all(self.V.contains(self.L.sq_poly(1 << k)) for k in range(self.n)) and self.is_abelian():
            return 2
        return 4

    def fingerprint(self) -> tuple[int, bool, int, int]:
        return self.order, self.is_abelian(), self.exponent(), self.involution_count()

    def identify(self) -> str:
        from .wgroup import _FINGERPRINTS

        return _FINGERPRINTS.get(self.fingerprint(), "OTHER")

    def small_group(self) -> SmallGroup:
        if self.order_exp > 4:
            raise GuardrailError("Galois group identification", self.order_exp, 4)
        elems, index = table_from_elements(self.generators(), self.L.mul, self.canon, 0)
        return small_group_from(elems, index, self.L.mul, self.canon)


@lru_cache(maxsize=256)
def gal_group(p: Psg, basis: Optional[Gf2Matrix] = None) -> GalGroup:
    return GalGroup(p, basis)


def gal_mul(G: GalGroup, g: GalElement, h: GalElement) -> GalElement:
    return G.element(G.mul(G.from_element(g), G.from_element(h)))


def random_basis(n: int, rng: random.Random) -> Gf2Matrix:
    while True:
        rows = tuple(rng.randrange(1 << n) for _ in range(n))
        m = Gf2Matrix(n, rows)
        if m.is_invertible():
            return m


# homomorphisms -------------------------------------------------------------------


class GalHom:
    """The homomorphism src -> dst sending generator x_k of src to images[k]."""

    def __init__(self, src: GalGroup, dst: GalGroup, images: Sequence[int]):
        if len(images) != src.n:
            raise DimensionError("need one image per generator")
        self.src = src
        self.dst = dst
        self.images = tuple(dst.canon(h) for h in images)
        self._u = UniversalHom(src.n, self.images, dst.L.mul, 0, dst.L.inv)

    def __call__(self, g: int) -> int:
        return self.dst.canon(self._u(g))

    def descends(self) -> bool:
        return all(self(v) == 0 for v in self.src.V.basis)

    def check(self) -> "GalHom":
        if not self.descends():
            raise NotHomomorphismError("map does not kill V of the source")
        return self

    def compose(self, first: "GalHom") -> "GalHom":
        """self after first."""
        if first.dst is not self.src:
            raise DimensionError("homomorphisms do not compose")
        return GalHom(first.src, self.dst, [self(h) for h in first.images])

    def gamma_matrix(self) -> Gf2Matrix:
        """Rows: gamma of the image of each generator."""
        return Gf2Matrix(self.dst.n, tuple(self.dst.gamma(h) for h in self.images))

    def is_surjective(self) -> bool:
        return self.gamma_matrix().rank() == self.dst.n

    def is_isomorphism(self) -> bool:
        return self.src.order_exp == self.dst.order_exp and self.is_surjective() and self.descends()

    def phi_matrix(self) -> list[int]:
        """Images of the Frattini unit vectors (the map is linear on Phi)."""
        src = self.src
        return [self(1 << j) for j in range(src.m)]

    def inverse(self) -> "GalHom":
        if not self.is_isomorphism():
            raise PreconditionError("only isomorphisms can be inverted")
        src, dst = self.src, self.dst
        T = Gf2Matrix(dst.n, tuple(dst.gamma(h) for h in self.images))
        # gamma(f(g)) = gamma(g) T, so the preimage of x_k has gamma e_k T^-1
        Tinv = T.inverse()
        cols = self.phi_matrix()
        phi_mat = Gf2Matrix(src.m, tuple(cols)).transpose()
        out = []
        for k in range(dst.n):
            y = src.canon(Tinv.rows[k] << src.m)
            z = dst.mul(dst.inv(dst.x(k)), self(y))
            w = _solve_columns(phi_mat, z, dst.m)
            out.append(src.canon(y ^ w))
        return GalHom(dst, src, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GalHom):
            return NotImplemented
        return self.src is other.src and self.dst is other.dst and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)


def _solve_columns(mat_t: Gf2Matrix, z: int, m: int) -> int:
    from .gf2 import solve

    x = solve(mat_t, z & ((1 << m) - 1))
    if x is None:
        raise AssertionError("Frattini part not in the image of an isomorphism")
    return x


def identity_hom(G: GalGroup) -> GalHom:
    return GalHom(G, G, G.generators())


def mu_direct(GB: GalGroup, GC: GalGroup) -> GalHom:
    """Gal(C) -> Gal(B) from the change of basis, on generators.

    With M the matrix of C in B-coordinates, x_j^C goes to the ascending
    product of the x_k^B over the support of column j of M^-1. This is the
    lift whose action on W/Phi is dual to l_B(a) |-> l_C(a), so it carries
    V(C) onto V(B).
    """
    _same_psg(GB, GC)
    M = GC.basis @ GB.basis_inv
    cols = M.inverse().transpose().rows
    return GalHom(GC, GB, [c << GB.m for c in cols])


def _same_psg(G1: GalGroup, G2: GalGroup):
    if G1.native != G2.native:
        raise DimensionError("Galois groups of different pre-special groups")


def mu(GB: GalGroup, GC: GalGroup, mode: str = "rigid") -> GalHom:
    """Base-change isomorphism Gal(C) -> Gal(B).

    ``mode="direct"`` applies the generator rule between B and C directly.
    ``mode="rigid"`` routes through the native basis N, mu_NB^-1 o mu_NC,
    which agrees with the direct rule whenever B is native and satisfies the
    cocycle identity exactly.
    """
    _same_psg(GB, GC)
    if mode == "direct":
        return mu_direct(GB, GC)
    if mode != "rigid":
        raise ValueError(f"unknown mode {mode!r}")
    GN = gal_group(GB.native)
    to_n = mu_direct(GN, GC)
    if GB.is_native:
        return GalHom(GC, GB, to_n.images) if GB is not GN else to_n
    return _inverse_cached(GN, GB).compose(to_n)


_INV_CACHE: dict = {}


def _inverse_cached(GN: GalGroup, GB: GalGroup) -> GalHom:
    key = (id(GN), id(GB))
    hit = _INV_CACHE.get(key)
    if hit is None or hit.src is not GN or hit.dst is not GB:
        hit = mu_direct(GN, GB).inverse()
        _INV_CACHE[key] = hit
    return hit


def base_change_mu(p: Psg, new_basis: Gf2Matrix, mode: str = "rigid") -> GalHom:
    """Gal(G, new basis) -> Gal(G, native basis)."""
    if not new_basis.is_invertible():
        raise DimensionError("basis change matrix is singular")
    return mu(gal_group(p), gal_group(p, new_basis), mode)


def mu_cocycle_defects(GB: GalGroup, GC: GalGroup, GD: GalGroup, mode: str = "rigid") -> list[int]:
    """Generators k of Gal(D) on which mu_BD and mu_BC o mu_CD disagree."""
    direct = mu(GB, GD, mode)
    comp = mu(GB, GC, mode).compose(mu(GC, GD, mode))
    return [k for k in range(GD.n) if direct.images[k] != comp.images[k]]


# maximal subgroups and involutions --------------------------------------------------


@dataclass(frozen=True)
class FrattiniSubgroup:
    """A subgroup of Gal containing Phi, described by its allowed gammas."""

    group: GalGroup
    gammas: Gf2Subspace

    def contains(self, g: int) -> bool:
        return self.gammas.contains(self.group.gamma(g))

    @property
    def index_exp(self) -> int:
        return self.group.n - self.gammas.dim

    def elements(self) -> list[int]:
        G = self.group
        reps = G.phi_reps()
        return [r | (c << G.m) for c in self.gammas.elements() for r in reps]


def maximal_subgroup(G: GalGroup, a: Elem) -> FrattiniSubgroup:
    """M_a = {sigma : gamma(sigma) . a = 0} (a in native coordinates)."""
    c = G.to_work(a)
    if c == 0:
        raise PreconditionError("a = 1 gives the whole group, which is not maximal")
    return FrattiniSubgroup(G, Gf2Subspace.span([c], G.n).orthogonal_complement())


def maximal_subgroups(G: GalGroup) -> dict[int, FrattiniSubgroup]:
    return {a: maximal_subgroup(G, a) for a in range(1, 1 << G.n)}


def involution_cosets(G: GalGroup, method: str = "subspace") -> list[int]:
    """Nonzero gammas whose Frattini coset contains an involution.

    ``subspace``: the square (gamma; gamma_i gamma_j) lies in V.
    ``pairing``: (gamma . a)(gamma . b) = 0 for every relation pair (a, b).
    """
    n = G.n
    if method == "subspace":
        out = [g for g in range(1, 1 << n) if G.V.contains(G.L.sq_poly(g))]
    elif method == "pairing":
        pairs = relation_pairs(G.psg)
        out = [g for g in range(1, 1 << n) if all(not (dot(g, a) and dot(g, b)) for a, b in pairs)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return sorted(out, key=lambda g: to_bitstring(g, n))


def involution_span(G: GalGroup) -> Gf2Subspace:
    return Gf2Subspace.span(involution_cosets(G), G.n)


def involution_classes(G: GalGroup) -> dict[int, int]:
    """Number of conjugacy classes of involutions inside each involution coset."""
    L = G.L
    out = {}
    for g in involution_cosets(G):
        img = Gf2Subspace.span([G.V.reduce(L.sym(1 << k, g) << G.n) for k in range(G.n)], G.m)
        out[g] = 1 << (G.Q.dim - img.dim)
    return out


def _characters_native(G: GalGroup, gammas: Iterable[int]) -> list[Character]:
    # chi(x) = gamma . (x B^-1) = (B^-1 gamma) . x
    return [Character(BitVec(G.n, G.basis_inv.apply(g))) for g in gammas]


def orderings_via_galois(G: GalGroup, check_stable: bool = True) -> list[Character]:
    if check_stable and not is_k_stable(G.psg):
        raise PreconditionError("the pre-special group is not k-stable")
    m1 = G.psg.minus_one
    gams = [g for g in involution_cosets(G) if dot(g, m1)]
    return sorted(_characters_native(G, gams), key=str)


def is_formally_real(G: GalGroup) -> bool:
    return bool(involution_cosets(G))


def generated_subgroup(G: GalGroup, gens: Iterable[int], max_exp: int = MAX_ENUM_EXP) -> set[int]:
    """Subgroup generated by gens; closure is recomputed only when a new generator lies outside."""
    H = {0}
    used: list[int] = []
    for g in gens:
        g = G.canon(g)
        if g in H:
            continue
        used.append(g)
        elems, _ = table_from_elements(used, G.L.mul, G.canon, 0, limit=1 << max_exp)
        H = set(elems)
    return H


def is_pythagorean(G: GalGroup, method: str = "closure", max_exp: int = MAX_ENUM_EXP) -> bool:
    """Whether Gal is generated by its involutions."""
    if method == "symbolic":
        return involution_span(G).dim == G.n
    if method != "closure":
        raise ValueError(f"unknown method {method!r}")
    if G.order_exp > max_exp:
        raise GuardrailError("involution closure", G.order_exp, max_exp)
    invs = _involutions(G)
    return len(generated_subgroup(G, invs, max_exp)) == G.order


def _involutions(G: GalGroup) -> list[int]:
    out = [r for r in G.phi_reps() if r]
    for g in involution_cosets(G):
        out += [r | (g << G.m) for r in G.phi_reps()]
    return out


def formally_real_chain(G: GalGroup) -> dict[str, bool]:
    """The three statements linked by the formally-real theorem."""
    invs = involution_cosets(G)
    central = all(
        G.V.contains(G.L.sym(1 << k, g) << G.n) for g in invs for k in range(G.n)
    )
    return {
        "formally_real": bool(invs),
        "involutions_in_frattini": not invs,
        "involutions_central": central,
    }


# Z4 and D4 quotients ---------------------------------------------------------------


@dataclass
class NormalSubgroupWitness:
    kind: str
    elements: tuple[int, ...]
    basis: Gf2Matrix
    subgroup: Gf2Subspace
    quotient: SmallGroup
    checks: dict[str, bool]
    group: GalGroup
    _mu: Optional[GalHom] = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def contains(self, sigma: int) -> bool:
        """Membership of an element of the original (native-basis) group."""
        if self._mu is None:
            GB = gal_group(self.group.native, self.basis)
            self._mu = mu(GB, self.group)
        return self.subgroup.contains(self._mu(sigma))

    def to_json(self) -> dict:
        n = self.basis.ncols
        return {
            "kind": self.kind,
            "elements": [to_bitstring(a, n) for a in self.elements],
            "quotient": self.quotient.cls,
            "checks": dict(self.checks),
        }


def _witness_setup(G: GalGroup, vecs: list[int]):
    n = G.n
    B = Gf2Matrix(n, tuple(complete_basis(vecs, n)))
    GB = gal_group(G.native, B)
    L = GB.L
    V_embedded = GB.V.basis  # V lives in the low m bits of the packed layout
    return B, GB, L, V_embedded


def _with_v(L, conds: list[int], V_basis) -> Gf2Subspace:
    base = Gf2Subspace.span(conds, L.width).orthogonal_complement()
    return Gf2Subspace.span(base.basis + tuple(V_basis), L.width)


def _gamma_proj_rank(L, S: Gf2Subspace) -> int:
    return Gf2Subspace.span([L.gamma(r) for r in S.basis], L.n).dim


def z4_subgroup_for(G: GalGroup, a: Elem) -> NormalSubgroupWitness:
    a = as_int(a)
    p = G.native
    if a == 0:
        raise PreconditionError("a must differ from 1")
    if not k2_product_is_zero(p, a, a):
        raise PreconditionError("l(a)l(a) != 0, no Z4 quotient is promised")
    B, GB, L, Vb = _witness_setup(G, [a])
    S = _with_v(L, [L.t(0), L.x(0)], Vb)
    Q = quotient(L.n, S)
    checks = {
        "quotient_is_Z4": Q.cls == "Z4",
        "contained_in_M_a": all(not (L.gamma(r) & 1) for r in S.basis),
        "unique_maximal_above": (1 << (L.n - _gamma_proj_rank(L, S))) - 1 == 1,
        "v_inside": all(S.contains(v) for v in Vb),
    }
    return NormalSubgroupWitness("Z4", (a,), B, S, Q, checks, G)


def d4_subgroup_for(G: GalGroup, a: Elem, b: Elem) -> NormalSubgroupWitness:
    a, b = as_int(a), as_int(b)
    p = G.native
    if a == 0 or b == 0 or a == b:
        raise PreconditionError("need a, b != 1 and a != b")
    if not k2_product_is_zero(p, a, b):
        raise PreconditionError("l(a)l(b) != 0, no D4 quotient is promised")
    B, GB, L, Vb = _witness_setup(G, [a, b])
    D = _with_v(L, [L.t2(0, 1), L.x(0), L.x(1)], Vb)
    Q = quotient(L.n, D)
    above = {}
    for c in (1, 2, 3):
        M = Gf2Subspace.span([c << L.m], L.width).orthogonal_complement()
        above[c] = quotient(L.n, D, over=M).cls
    cyclic = [c for c, cls in above.items() if cls == "Z4"]
    checks = {
        "quotient_is_D4": Q.cls == "D4",
        "d4_relations": Q.d4_witness() is not None,
        "contained_in_M_a_and_M_b": all(not (L.gamma(r) & 3) for r in D.basis),
        "M_ab_quotient_is_Z4": above[3] == "Z4",
        "unique_pair_above": cyclic == [3] and _gamma_proj_rank(L, D) == L.n - 2,
        "v_inside": all(D.contains(v) for v in Vb),
    }
    return NormalSubgroupWitness("D4", (a, b), B, D, Q, checks, G)


# standardness ---------------------------------------------------------------------


def _z4_table() -> SmallGroup:
    return SmallGroup(tuple(tuple((i + j) % 4 for j in range(4)) for i in range(4)))


def _d4_table() -> SmallGroup:
    # index i + 4 j stands for r^i s^j; s r = r^-1 s
    def mul(x, y):
        i1, j1 = x % 4, x // 4
        i2, j2 = y % 4, y // 4
        i = (i1 + (i2 if j1 == 0 else -i2)) % 4
        return i + 4 * ((j1 + j2) % 2)

    return SmallGroup(tuple(tuple(mul(x, y) for y in range(8)) for x in range(8)))


def table_characters(T: SmallGroup) -> list[tuple[int, ...]]:
    """All homomorphisms T -> Z2 as value tuples."""
    out = []
    N = T.order
    for mask in range(1 << N):
        f = tuple((mask >> i) & 1 for i in range(N))
        if f[0]:
            continue
        if all(f[T.mul(x, y)] == f[x] ^ f[y] for x in range(N) for y in range(N)):
            out.append(f)
    return out


@dataclass
class StandardReport:
    z4: list[dict] = field(default_factory=list)
    d4: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "standard": self.ok,
            "z4_witnesses": [e for e in self.z4 if e["hom_exists"]],
            "d4_witnesses": [e for e in self.d4 if e["hom_exists"]],
            "failures": self.failures,
        }


def _find_hom(G: GalGroup, T: SmallGroup, fibres: list[list[int]], accept: Callable) -> Optional[tuple[int, ...]]:
    """Generator images (one per fibre) giving a surjective hom Gal -> T."""
    for imgs in itertools.product(*fibres):
        u = UniversalHom(G.n, imgs, T.mul, 0, T.inverse)
        if any(u(v) != 0 for v in G.V.basis):
            continue
        elems, _ = table_from_elements(list(imgs), T.mul, lambda x: x, 0)
        if len(elems) != T.order:
            continue
        if accept(imgs):
            return tuple(imgs)
    return None


def is_standard(p: Psg, max_n: int = MAX_STANDARD_N) -> StandardReport:
    """Check both directions of the Z4/D4 characterisation for every a, and every pair a != b."""
    if p.n > max_n:
        raise GuardrailError("standardness check (basis size)", p.n, max_n)
    if not is_k_stable(p):
        raise PreconditionError("the pre-special group is not k-stable")
    G = gal_group(p)
    Qm = G.Q
    rep = StandardReport()
    f = p.fmt
    Z4, D4 = _z4_table(), _d4_table()
    z4_chars = [c for c in table_characters(Z4) if any(c)]
    d4_chars = [c for c in table_characters(D4) if any(c)]

    for a in range(1, p.size):
        k2 = k2_product_is_zero(p, a, a, Qm)
        found = None
        for psi in z4_chars:
            fibres = [[h for h in range(4) if psi[h] == (a >> k) & 1] for k in range(p.n)]
            found = _find_hom(G, Z4, fibres, lambda imgs: True)
            if found:
                break
        entry = {"a": f(a), "k2_zero": k2, "hom_exists": found is not None, "images": list(found or ())}
        rep.z4.append(entry)
        if k2 != (found is not None):
            rep.failures.append({"kind": "Z4", **entry})

    for a, b in itertools.combinations(range(1, p.size), 2):
        k2 = k2_product_is_zero(p, a, b, Qm)
        found = None
        for pa, pb in itertools.permutations(d4_chars, 2):
            ker = [h for h in range(8) if pa[h] == pb[h]]
            if not any(D4.element_order(h) == 4 for h in ker):
                continue
            fibres = [
                [h for h in range(8) if pa[h] == (a >> k) & 1 and pb[h] == (b >> k) & 1]
                for k in range(p.n)
            ]
            found = _find_hom(G, D4, fibres, lambda imgs: True)
            if found:
                break
        entry = {
            "a": f(a),
            "b": f(b),
            "k2_zero": k2,
            "hom_exists": found is not None,
            "images": list(found or ()),
        }
        rep.d4.append(entry)
        if k2 != (found is not None):
            rep.failures.append({"kind": "D4", **entry})
    return rep


# functoriality ---------------------------------------------------------------------


def induced_gal_map(f: PsgMorphism) -> GalHom:
    """Gal(target) -> Gal(source) induced by an injective morphism."""
    if not f.is_injective():
        raise PreconditionError("the morphism is not injective")
    bad = f.violations()
    if bad:
        raise PreconditionError(f"not a morphism of pre-special groups: {bad[0]}")
    src, tgt = f.source, f.target
    cols = [f(1 << k) for k in range(src.n)]
    Bp = Gf2Matrix(tgt.n, tuple(complete_basis(cols, tgt.n)))
    GBp = gal_group(tgt, Bp)
    GS = gal_group(src)
    f0 = GalHom(GBp, GS, [GS.x(k) if k < src.n else 0 for k in range(tgt.n)]).check()
    return f0.compose(mu(GBp, gal_group(tgt)))


def dual_map(theta: GalHom) -> Gf2Matrix:
    """The linear map G -> G' dual to theta: Gal(G') -> Gal(G), in native coordinates."""
    theta.check()
    G, Gp = theta.dst, theta.src
    rows_work = [G.gamma(h) for h in theta.images]  # length n each, one per generator of Gal(G')
    cols = []
    for k in range(G.n):
        a_work = G.to_work(1 << k)
        ap_work = sum(dot(r, a_work) << i for i, r in enumerate(rows_work))
        cols.append(Gp.to_native(ap_work))
    if G.n == 0:
        return Gf2Matrix(0, tuple(0 for _ in range(Gp.n)))
    return Gf2Matrix(Gp.n, tuple(cols)).transpose()


# lattice correspondence ---------------------------------------------------------------


@dataclass
class LatticeReport:
    subgroups_checked: int
    double_perp_failures: list[str]
    saturated_count: int
    involution_generated_count: int
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.double_perp_failures and not self.mismatches

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "subgroups_checked": self.subgroups_checked,
            "double_perp_failures": self.double_perp_failures,
            "saturated_count": self.saturated_count,
            "involution_generated_count": self.involution_generated_count,
            "mismatches": self.mismatches,
        }


def perp(G: GalGroup, delta: Gf2Subspace) -> FrattiniSubgroup:
    """Delta^perp: the intersection of M_a over a in Delta (native coordinates)."""
    work = Gf2Subspace.span([G.to_work(a) for a in delta.basis], G.n)
    return FrattiniSubgroup(G, work.orthogonal_complement())


def perp_back(G: GalGroup, T: FrattiniSubgroup) -> Gf2Subspace:
    """T^perp: the elements a with chi_a trivial on T (native coordinates)."""
    work = T.gammas.orthogonal_complement()
    return Gf2Subspace.span([G.to_native(c) for c in work.basis], G.n)


def is_involution_generated(G: GalGroup, T: FrattiniSubgroup) -> bool:
    inv = [g for g in involution_cosets(G) if T.gammas.contains(g)]
    return Gf2Subspace.span(inv, G.n) == T.gammas


def lattice_correspondence_check(
    p: Psg, sample: Optional[int] = None, seed: int = 0, max_n: int = MAX_LATTICE_N
) -> LatticeReport:
    if p.n > max_n:
        raise GuardrailError("lattice check (basis size)", p.n, max_n)
    G = gal_group(p)
    subs = all_subgroups(p.n)
    if sample is not None and len(subs) > sample:
        subs = random.Random(seed).sample(subs, sample)
    bad_perp, mism = [], []
    n_sat = n_inv = 0
    for d in subs:
        T = perp(G, d)
        if perp_back(G, T) != d:
            bad_perp.append(_fmt_sub(p, d))
        sat = is_saturated(p, d)
        ig = is_involution_generated(G, T)
        n_sat += sat
        n_inv += ig
        if sat != ig:
            mism.append(_fmt_sub(p, d))
    return LatticeReport(len(subs), bad_perp, n_sat, n_inv, mism)


def _fmt_sub(p: Psg, d: Gf2Subspace) -> str:
    return "span{" + ",".join(p.fmt(r) for r in d.basis) + "}"


# oracles ---------------------------------------------------------------------------


def coset_table_oracle(p: Psg, max_exp: int = 12) -> SmallGroup:
    """Gal built from an explicit enumeration of W(n) and of the cosets of V."""
    n = p.n
    L = layout(n)
    if L.width > max_exp + 4:
        raise GuardrailError("W(n) enumeration", L.width, max_exp + 4)
    V = relation_module(p).basis_of_Q.orthogonal_complement()
    Vel = list(V.elements())
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for g in range(1 << L.width):
        if g in coset_of:
            continue
        cid = len(reps)
        reps.append(g)
        for v in Vel:
            coset_of[L.mul(g, v)] = cid
    table = tuple(tuple(coset_of[L.mul(a, b)] for b in reps) for a in reps)
    return SmallGroup(table, tuple(reps))


def oracle_involution_cosets(G: GalGroup, max_exp: int = 10) -> list[int]:
    out = set()
    for g in G.elements(max_exp):
        if g and G.square(g) == 0 and G.gamma(g):
            out.add(G.gamma(g))
    return sorted(out, key=lambda g: to_bitstring(g, G.n))


def oracle_index2_subgroups(G: GalGroup, max_exp: int = 10) -> list[frozenset]:
    """Kernels of all surjections Gal -> Z2, by labelling elements along generator edges."""
    elems = G.elements(max_exp)
    out = []
    gens = G.generators()
    for vals in range(1, 1 << G.n):
        lab = {0: 0}
        queue = [0]
        ok = True
        while queue and ok:
            e = queue.pop()
            for k, x in enumerate(gens):
                y = G.mul(e, x)
                val = lab[e] ^ ((vals >> k) & 1)
                if y in lab:
                    if lab[y] != val:
                        ok = False
                        break
                else:
                    lab[y] = val
                    queue.append(y)
        if ok and len(lab) == len(elems):
            out.append(frozenset(e for e, v in lab.items() if v == 0))
    return out


def oracle_is_pythagorean(G: GalGroup, max_exp: int = 10) -> bool:
    invs = [g for g in G.elements(max_exp) if g and G.square(g) == 0]
    return len(generated_subgroup(G, invs)) == G.order


def oracle_involution_generated(G: GalGroup, T: FrattiniSubgroup, max_exp: int = 10) -> bool:
    if G.order_exp > max_exp:
        raise GuardrailError("subgroup enumeration", G.order_exp, max_exp)
    elems = T.elements()
    invs = [g for g in elems if g and G.square(g) == 0]
    return len(generated_subgroup(G, invs)) == len(elems)


def oracle_fingerprint(G: GalGroup, max_exp: int = 10) -> tuple[int, bool, int, int]:
    elems = G.elements(max_exp)
    abelian = all(G.mul(a, b) == G.mul(b, a) for a in elems for b in G.generators())
    exponent = 1
    invol = 0
    for g in elems:
        k, x = 1, g
        while x != 0:
            x = G.mul(x, g)
            k += 1
        exponent = max(exponent, k)
        invol += k == 2
    return len(elems), abelian, exponent, invol


# report ------------------------------------------------------------------------------


def galois_report(p: Psg, standard: bool = False, bases: int = 0, seed: int = 0) -> dict:
    G = gal_group(p)
    f = p.fmt
    rep = {
        "name": p.name,
        "n": p.n,
        "order": G.order,
        "order_exp": G.order_exp,
        "fingerprint": G.identify(),
        "k2_dim": G.Q.k2_dim,
        "Q_basis": [to_bitstring(r, G.m) for r in G.Q.basis_of_Q.basis],
        "maximal_count": (1 << p.n) - 1,
        "involution_cosets": [f(g) for g in involution_cosets(G)],
        "involution_classes_per_coset": {f(g): c for g, c in involution_classes(G).items()},
        "k_stable": is_k_stable(p),
    }
    if rep["k_stable"]:
        rep["orderings"] = [str(c) for c in orderings_via_galois(G)]
    rep["formally_real"] = is_formally_real(G)
    rep["pythagorean"] = is_pythagorean(G, "symbolic")
    if standard:
        rep["standard"] = is_standard(p).to_json()
    if bases:
        rep["base_change"] = base_change_report(p, bases, seed)
    return rep


def base_change_report(p: Psg, k: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    G = gal_group(p)
    groups = [gal_group(p, random_basis(p.n, rng)) for _ in range(k)]
    checks = []
    for GC in groups:
        h = mu(G, GC)
        checks.append(
            {
                "basis": [f"{p.fmt(r)}" for r in GC.basis.rows],
                "order_equal": GC.order == G.order,
                "fingerprint_equal": GC.fingerprint() == G.fingerprint(),
                "isomorphism": h.is_isomorphism(),
            }
        )
    cocycle = []
    for GB, GC, GD in itertools.permutations(groups, 3) if len(groups) >= 3 else []:
        cocycle.append(not mu_cocycle_defects(GB, GC, GD))
    ok = all(c["order_equal"] and c["fingerprint_equal"] and c["isomorphism"] for c in checks)
    return {"checks": checks, "cocycle_ok": all(cocycle), "all_ok": ok and all(cocycle)}


__all__ = [
    "FrattiniSubgroup",
    "GalElement",
    "GalGroup",
    "GalHom",
    "LatticeReport",
    "NormalSubgroupWitness",
    "StandardReport",
    "base_change_mu",
    "base_change_report",
    "coset_table_oracle",
    "d4_subgroup_for",
    "dual_map",
    "formally_real_chain",
    "gal_group",
    "gal_mul",
    "galois_report",
    "generated_subgroup",
    "identity_hom",
    "induced_gal_map",
    "involution_classes",
    "involution_cosets",
    "involution_span",
    "is_formally_real",
    "is_involution_generated",
    "is_pythagorean",
    "is_standard",
    "lattice_correspondence_check",
    "maximal_subgroup",
    "maximal_subgroups",
    "mu",
    "mu_cocycle_defects",
    "mu_direct",
    "oracle_fingerprint",
    "oracle_index2_subgroups",
    "oracle_involution_cosets",
    "oracle_involution_generated",
    "oracle_is_pythagorean",
    "orderings_via_galois",
    "perp",
    "perp_back",
    "random_basis",
    "z4_subgroup_for",
]
