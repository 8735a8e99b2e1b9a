"""The finite C-free group W(n) and small-group identification.

An element (t_i^alpha_i)(t_ij^beta_ij)(x_i^gamma_i) is packed into one int:
alpha in bits [0, n), beta in bits [n, m) with m = n(n+1)/2 and pairs (i, j),
i < j, in lexicographic order, gamma in bits [m, m + n). The low m bits are the
Frattini coordinates and line up with the P2 coordinates (squares, then mixed
terms), so pairing against a quadratic polynomial is a dot product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .errors import DimensionError, GuardrailError, NotHomomorphismError, PreconditionError
from .gf2 import BitVec, Gf2Subspace, bits_of, dot, low_bit


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class Layout:
    n: int
    offs: tuple[int, ...]

    @property
    def npairs(self) -> int:
        return num_pairs(self.n)

    @property
    def m(self) -> int:
        """Width of the Frattini block (alpha and beta)."""
        return self.n + self.npairs

    @property
    def width(self) -> int:
        return self.m + self.n

    @property
    def order_exp(self) -> int:
        return self.width

    @property
    def phi_mask(self) -> int:
        return (1 << self.m) - 1

    def pair(self, i: int, j: int) -> int:
        """Index of the pair (i, j), i < j, among the beta coordinates."""
        if not 0 <= i < j < self.n:
            raise DimensionError(f"bad pair ({i}, {j}) for n={self.n}")
        return self.offs[i] + (j - i - 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        return itertools.combinations(range(self.n), 2)

    # packing ---------------------------------------------------------------
    def pack(self, alpha: int, beta: int, gamma: int) -> int:
        return alpha | (beta << self.n) | (gamma << self.m)

    def alpha(self, g: int) -> int:
        return g & ((1 << self.n) - 1)

    def beta(self, g: int) -> int:
        return (g >> self.n) & ((1 << self.npairs) - 1)

    def gamma(self, g: int) -> int:
        return g >> self.m

    def phi(self, g: int) -> int:
        return g & self.phi_mask

    def x(self, k: int) -> int:
        return 1 << (self.m + k)

    def t(self, k: int) -> int:
        return 1 << k

    def t2(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return 1 << (self.n + self.pair(i, j))

    # arithmetic ------------------------------------------------------------
    def cross(self, gh: int, gg: int) -> int:
        """Beta vector with pair (i, j) set iff gh_i = gg_j = 1."""
        out = 0
        offs = self.offs
        while gh:
            low = gh & -gh
            i = low.bit_length() - 1
            out |= (gg >> (i + 1)) << offs[i]
            gh ^= low
        return out

    def sym(self, a: int, b: int) -> int:
        """Beta vector a_i b_j + a_j b_i."""
        return self.cross(a, b) ^ self.cross(b, a)

    def correction(self, gg: int, gh: int) -> int:
        """g*h XOR g XOR h, a Frattini element depending only on the gammas."""
        return (gg & gh) | (self.cross(gh, gg) << self.n)

    def mul(self, g: int, h: int) -> int:
        m = self.m
        return g ^ h ^ self.correction(g >> m, h >> m)

    def inv(self, g: int) -> int:
        gm = g >> self.m
        return g ^ gm ^ (self.cross(gm, gm) << self.n)

    def square(self, g: int) -> int:
        gm = g >> self.m
        return gm | (self.cross(gm, gm) << self.n)

    def comm(self, g: int, h: int) -> int:
        return self.sym(g >> self.m, h >> self.m) << self.n

    def conj(self, h: int, g: int) -> int:
        """h^g = g^-1 h g."""
        return h ^ (self.sym(g >> self.m, h >> self.m) << self.n)

    def power(self, g: int, e: int) -> int:
        out = 0
        for _ in range(e % 4):
            out = self.mul(out, g)
        return out

    def ascending(self, gamma: int) -> int:
        """x_{i_1} x_{i_2} ... over the support of gamma, in increasing order."""
        return gamma << self.m

    def sq_poly(self, gamma: int) -> int:
        """P2 vector of the square of an element with the given gamma."""
        return self.square(gamma << self.m)


@lru_cache(maxsize=None)
def layout(n: int) -> Layout:
    if n < 0:
        raise DimensionError("negative basis size")
    offs = []
    acc = 0
    for i in range(n):
        offs.append(acc)
        acc += n - 1 - i
    return Layout(n, tuple(offs))


@dataclass(frozen=True)
class WElement:
    n: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> layout(self.n).width:
            raise DimensionError("packed element too wide")

    @classmethod
    def from_parts(cls, alpha: BitVec, beta: BitVec, gamma: BitVec) -> "WElement":
        n = alpha.length
        L = layout(n)
        if beta.length != L.npairs or gamma.length != n:
            raise DimensionError("inconsistent coordinate lengths")
        return cls(n, L.pack(alpha.bits, beta.bits, gamma.bits))

    @classmethod
    def identity(cls, n: int) -> "WElement":
        return cls(n, 0)

    @classmethod
    def x(cls, n: int, k: int) -> "WElement":
        return cls(n, layout(n).x(k))

    @classmethod
    def t(cls, n: int, k: int) -> "WElement":
        return cls(n, layout(n).t(k))

    @classmethod
    def t2(cls, n: int, i: int, j: int) -> "WElement":
        return cls(n, layout(n).t2(i, j))

    @property
    def layout(self) -> Layout:
        return layout(self.n)

    @property
    def alpha(self) -> BitVec:
        return BitVec(self.n, self.layout.alpha(self.bits))

    @property
    def beta(self) -> BitVec:
        L = self.layout
        return BitVec(L.npairs, L.beta(self.bits))

    @property
    def gamma(self) -> BitVec:
        return BitVec(self.n, self.layout.gamma(self.bits))

    def _check(self, other: "WElement"):
        if self.n != other.n:
            raise DimensionError(f"W({self.n}) vs W({other.n})")

    def __mul__(self, other: "WElement") -> "WElement":
        self._check(other)
        return WElement(self.n, self.layout.mul(self.bits, other.bits))

    def __pow__(self, e: int) -> "WElement":
        return WElement(self.n, self.layout.power(self.bits, e))

    def is_identity(self) -> bool:
        return self.bits == 0


def w_mul(g: WElement, h: WElement) -> WElement:
    return g * h


def w_inv(g: WElement) -> WElement:
    return WElement(g.n, g.layout.inv(g.bits))


def w_square(g: WElement) -> WElement:
    return WElement(g.n, g.layout.square(g.bits))


def w_conj(h: WElement, g: WElement) -> WElement:
    h._check(g)
    return WElement(h.n, h.layout.conj(h.bits, g.bits))


def w_comm(g: WElement, h: WElement) -> WElement:
    g._check(h)
    return WElement(g.n, g.layout.comm(g.bits, h.bits))


def w_order_exp(n: int) -> int:
    return (n * n + 3 * n) // 2


def w_order_count(n: int) -> int:
    if n < 0:
        raise DimensionError("negative basis size")
    if n > 20:
        raise GuardrailError("W(n) order closed form", w_order_exp(n), w_order_exp(20))
    return 1 << w_order_exp(n)


def w_elements(n: int) -> range:
    return range(1 << layout(n).width)


# subgroups -----------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup of W(n) cut out by linear conditions on the packed bits.

    ``kind`` is one of "M", "S", "D", "PHI", "CUSTOM". For CUSTOM,
    ``conditions`` lists functionals (ints over the packed coordinates) that
    must vanish.
    """

    kind: str
    indices: tuple[int, ...] = ()
    conditions: tuple[int, ...] = ()

    @classmethod
    def M(cls, i: int) -> "SubgroupSpec":
        return cls("M", (i,))

    @classmethod
    def S(cls, i: int) -> "SubgroupSpec":
        return cls("S", (i,))

    @classmethod
    def D(cls, i: int, j: int) -> "SubgroupSpec":
        if not i < j:
            raise PreconditionError("D(i, j) requires i < j")
        return cls("D", (i, j))

    @classmethod
    def PHI(cls) -> "SubgroupSpec":
        return cls("PHI")

    @classmethod
    def custom(cls, conditions: Iterable[int]) -> "SubgroupSpec":
        return cls("CUSTOM", (), tuple(conditions))

    def functionals(self, n: int) -> tuple[int, ...]:
        L = layout(n)
        for i in self.indices:
            if not 0 <= i < n:
                raise DimensionError(f"index {i} out of range for n={n}")
        if self.kind == "M":
            (i,) = self.indices
            return (L.x(i),)
        if self.kind == "S":
            (i,) = self.indices
            return (L.t(i), L.x(i))
        if self.kind == "D":
            i, j = self.indices
            return (L.t2(i, j), L.x(i), L.x(j))
        if self.kind == "PHI":
            return tuple(L.x(k) for k in range(n))
        if self.kind == "CUSTOM":
            for c in self.conditions:
                if c < 0 or c >> L.width:
                    raise DimensionError("condition wider than the packed layout")
            return self.conditions
        raise PreconditionError(f"unknown subgroup kind {self.kind!r}")

    def subspace(self, n: int) -> Gf2Subspace:
        width = layout(n).width
        return Gf2Subspace.span(self.functionals(n), width).orthogonal_complement()


def subgroup_member(spec: SubgroupSpec, g: WElement) -> bool:
    return all(not dot(c, g.bits) for c in spec.functionals(g.n))


def _gamma_basis(L: Layout, s: Gf2Subspace) -> list[int]:
    return list(Gf2Subspace.span([L.gamma(r) for r in s.basis], L.n).basis)


def is_subgroup(n: int, s: Gf2Subspace) -> bool:
    """Whether a linear subset of W(n) is closed under multiplication."""
    L = layout(n)
    gb = _gamma_basis(L, s)
    return all(s.contains(L.correction(a, b)) for a in gb for b in gb)


def is_normal(n: int, s: Gf2Subspace) -> bool:
    L = layout(n)
    gb = _gamma_basis(L, s)
    return all(s.contains(L.sym(1 << k, b) << n) for k in range(n) for b in gb)


def _as_subspace(n: int, sub: Union[SubgroupSpec, Gf2Subspace]) -> Gf2Subspace:
    if isinstance(sub, SubgroupSpec):
        return sub.subspace(n)
    if sub.ambient_dim != layout(n).width:
        raise DimensionError("subspace does not live in the packed layout")
    return sub


class CosetReducer:
    """Canonical representatives of g N for a linear normal subgroup N."""

    def __init__(self, n: int, sub: Gf2Subspace):
        self.L = layout(n)
        self.sub = sub
        self._cache: dict[int, Gf2Subspace] = {}

    def direction(self, gamma: int) -> Gf2Subspace:
        d = self._cache.get(gamma)
        if d is None:
            L = self.L
            d = Gf2Subspace.span(
                [r ^ L.correction(gamma, L.gamma(r)) for r in self.sub.basis], L.width
            )
            self._cache[gamma] = d
        return d

    def canon(self, g: int) -> int:
        return self.direction(self.L.gamma(g)).reduce(g)


# small groups ----------------------------------------------------------------

SMALL_CLASSES = ("TRIVIAL", "Z2", "Z4", "Z2xZ2", "Z8", "Z4xZ2", "Z2^3", "D4", "Q8", "OTHER")


@dataclass(frozen=True)
class SmallGroup:
    """A finite group given by its multiplication table over indices 0..N-1.

    Index 0 is the identity. ``labels`` optionally records the element each
    index stands for.
    """

    table: tuple[tuple[int, ...], ...]
    labels: tuple = ()
    cls: str = field(init=False)

    def __post_init__(self):
        check_group_table(self.table)
        object.__setattr__(self, "cls", identify(self.table))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def power(self, a: int, e: int) -> int:
        out = 0
        for _ in range(e):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def inverse(self, a: int) -> int:
        return self.table[a].index(0)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(len(t)) for b in range(a))

    def fingerprint(self) -> tuple[int, bool, int, int]:
        return fingerprint(self.table)

    def d4_witness(self) -> Optional[tuple[int, int]]:
        """(r, s) with r^4 = s^2 = (s r)^2 = 1 generating a group of order 8."""
        if self.order != 8:
            return None
        for r in range(8):
            if self.element_order(r) != 4:
                continue
            cyc = {self.power(r, e) for e in range(4)}
            for s in range(8):
                if s in cyc or self.element_order(s) != 2:
                    continue
                sr = self.table[s][r]
                if self.table[sr][sr] == 0:
                    return r, s
        return None


def check_group_table(table: Sequence[Sequence[int]]) -> None:
    N = len(table)
    if N == 0:
        raise PreconditionError("empty table")
    rng = set(range(N))
    for row in table:
        if len(row) != N or set(row) != rng:
            raise PreconditionError("table rows are not permutations")
    for a in range(N):
        if table[0][a] != a or table[a][0] != a:
            raise PreconditionError("index 0 is not the identity")
    if N > 64:
        return
    for a in range(N):
        ta = table[a]
        for b in range(N):
            tab = ta[b]
            tb = table[b]
            for c in range(N):
                if table[tab][c] != ta[tb[c]]:
                    raise PreconditionError(f"not associative at ({a}, {b}, {c})")


def fingerprint(table: Sequence[Sequence[int]]) -> tuple[int, bool, int, int]:
    N = len(table)
    abelian = all(table[a][b] == table[b][a] for a in range(N) for b in range(a))
    exponent = 1
    involutions = 0
    for a in range(N):
        k, x = 1, a
        while x != 0:
            x = table[x][a]
            k += 1
        exponent = exponent * k // _gcd(exponent, k)
        if k == 2:
            involutions += 1
    return N, abelian, exponent, involutions


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


_FINGERPRINTS = {
    (1, True, 1, 0): "TRIVIAL",
    (2, True, 2, 1): "Z2",
    (4, True, 4, 1): "Z4",
    (4, True, 2, 3): "Z2xZ2",
    (8, True, 8, 1): "Z8",
    (8, True, 4, 3): "Z4xZ2",
    (8, True, 2, 7): "Z2^3",
    (8, False, 4, 5): "D4",
    (8, False, 4, 1): "Q8",
}


def identify(table: Sequence[Sequence[int]]) -> str:
    return _FINGERPRINTS.get(fingerprint(table), "OTHER")


def table_from_elements(
    gens: Sequence, mul: Callable, canon: Callable, identity, limit: int = 1 << 20
) -> tuple[list, dict]:
    """Closure of ``gens`` under ``mul`` with canonical forms, breadth first."""
    one = canon(identity)
    elems = [one]
    index = {one: 0}
    gens = [canon(g) for g in gens]
    k = 0
    while k < len(elems):
        e = elems[k]
        for g in gens:
            p = canon(mul(e, g))
            if p not in index:
                if len(elems) >= limit:
                    raise GuardrailError("group closure", len(elems).bit_length(), limit.bit_length() - 1)
                index[p] = len(elems)
                elems.append(p)
        k += 1
    return elems, index


def small_group_from(elems: Sequence, index: dict, mul: Callable, canon: Callable) -> SmallGroup:
    table = tuple(
        tuple(index[canon(mul(a, b))] for b in elems) for a in elems
    )
    return SmallGroup(table, tuple(elems))


def _generators_of(n: int, H: Gf2Subspace) -> list[int]:
    """A generating set of a linear subgroup: its basis plus a basis of H cap Phi."""
    L = layout(n)
    phi = Gf2Subspace.span([L.t(k) for k in range(n)] + [1 << (n + p) for p in range(L.npairs)], L.width)
    return list(H.basis) + list(H.intersection(phi).basis)


def quotient(
    n: int,
    normal_subgroup: Union[SubgroupSpec, Gf2Subspace],
    over: Union[SubgroupSpec, Gf2Subspace, None] = None,
    max_exp: int = 20,
) -> SmallGroup:
    """H/N as a SmallGroup (order at most 16); H defaults to W(n)."""
    L = layout(n)
    sub = _as_subspace(n, normal_subgroup)
    H = None if over is None else _as_subspace(n, over)
    if not is_subgroup(n, sub):
        raise PreconditionError("linear subset is not closed under multiplication")
    if H is None:
        if not is_normal(n, sub):
            raise PreconditionError("subgroup is not normal")
        gens = [L.x(k) for k in range(n)]
        exp = L.width - sub.dim
    else:
        if not is_subgroup(n, H):
            raise PreconditionError("ambient set is not a subgroup")
        if not sub.issubset(H):
            raise PreconditionError("N is not contained in H")
        hg = _gamma_basis(L, H)
        ng = _gamma_basis(L, sub)
        if not all(sub.contains(L.sym(a, b) << n) for a in hg for b in ng):
            raise PreconditionError("subgroup is not normal in H")
        gens = _generators_of(n, H)
        exp = H.dim - sub.dim
    if exp > max_exp:
        raise GuardrailError("quotient order", exp, max_exp)
    if exp > 4:
        raise GuardrailError("quotient identification", exp, 4)
    red = CosetReducer(n, sub)
    elems, index = table_from_elements(gens, L.mul, red.canon, 0)
    if len(elems) != 1 << exp:
        raise AssertionError("coset enumeration did not reach the expected order")
    return small_group_from(elems, index, L.mul, red.canon)


def quotient_order_exp(n: int, normal_subgroup: Union[SubgroupSpec, Gf2Subspace]) -> int:
    sub = _as_subspace(n, normal_subgroup)
    return layout(n).width - sub.dim


# pairings --------------------------------------------------------------------


def _packed(q) -> int:
    return q if isinstance(q, int) else q.packed


def pairing_phi(g: WElement, q) -> int:
    """<g, q> for g in the Frattini subgroup and q a quadratic polynomial."""
    L = g.layout
    if L.gamma(g.bits):
        raise PreconditionError("element is not in the Frattini subgroup")
    return dot(L.phi(g.bits), _packed(q))


def pairing_p1(g: WElement, q) -> int:
    """<g, q> for a linear polynomial q; depends only on g modulo Frattini."""
    return dot(g.layout.gamma(g.bits), _packed(q))


# homomorphisms out of W(n) ------------------------------------------------------


class UniversalHom:
    """The homomorphism W(n) -> H sending x_k to ``images[k]``.

    H is described by ``mul`` and ``identity``; it must be a C-group (fourth
    powers and commutators with squares trivial) for the result to be a
    homomorphism, which is the case for every target used here.
    """

    def __init__(self, n: int, images: Sequence, mul: Callable, identity, inv: Optional[Callable] = None):
        self.n = n
        self.L = layout(n)
        self.mul = mul
        self.one = identity
        self.images = list(images)
        if len(self.images) != n:
            raise DimensionError("need one image per generator")
        inv = inv or (lambda a: mul(mul(a, a), a))  # a^-1 = a^3 in a C-group
        h = self.images
        self.t_img = [mul(x, x) for x in h]
        self.t2_img = {}
        for i, j in self.L.pairs():
            self.t2_img[(i, j)] = mul(mul(inv(h[i]), inv(h[j])), mul(h[i], h[j]))

    def __call__(self, g: int):
        L, mul = self.L, self.mul
        out = self.one
        for i in bits_of(L.alpha(g)):
            out = mul(out, self.t_img[i])
        beta = L.beta(g)
        if beta:
            for i, j in L.pairs():
                if (beta >> L.pair(i, j)) & 1:
                    out = mul(out, self.t2_img[(i, j)])
        for k in bits_of(L.gamma(g)):
            out = mul(out, self.images[k])
        return out


def check_homomorphism(elements: Iterable, f: Callable, mul_src: Callable, mul_dst: Callable) -> None:
    """Raise NotHomomorphismError unless f(ab) = f(a) f(b) on all given pairs."""
    elements = list(elements)
    for a in elements:
        fa = f(a)
        for b in elements:
            if f(mul_src(a, b)) != mul_dst(fa, f(b)):
                raise NotHomomorphismError(f"f(ab) != f(a)f(b) at ({a}, {b})")


__all__ = [
    "CosetReducer",
    "Layout",
    "SMALL_CLASSES",
    "SmallGroup",
    "SubgroupSpec",
    "UniversalHom",
    "WElement",
    "fingerprint",
    "identify",
    "is_normal",
    "is_subgroup",
    "layout",
    "pairing_p1",
    "pairing_phi",
    "quotient",
    "quotient_order_exp",
    "subgroup_member",
    "w_comm",
    "w_conj",
    "w_elements",
    "w_inv",
    "w_mul",
    "w_order_count",
    "w_square",
]
