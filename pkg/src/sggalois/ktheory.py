"""Degree one and two mod-2 k-theory of a pre-special group.

P1 vectors are linear forms sum c_i z_i (bit i = c_i). P2 vectors are packed
like the Frattini block of W(n): the squares z_i^2 in bits [0, n), the mixed
terms z_i z_j (i < j, lexicographic) above them. The q-polynomial of (a, b) is
the product of the linear forms l(a) l(b).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError
from .gf2 import BitVec, Gf2Matrix, Gf2Subspace, bits_of
from .psg import Elem, Psg, as_int
from .wgroup import layout, num_pairs


def p2_dim(n: int) -> int:
    return n * (n + 1) // 2


@dataclass(frozen=True)
class P1Vector:
    n: int
    coeffs: BitVec

    @property
    def packed(self) -> int:
        return self.coeffs.bits


@dataclass(frozen=True)
class P2Vector:
    n: int
    sq: BitVec
    mixed: BitVec

    @classmethod
    def from_packed(cls, n: int, bits: int) -> "P2Vector":
        return cls(n, BitVec(n, bits & ((1 << n) - 1)), BitVec(num_pairs(n), bits >> n))

    @property
    def packed(self) -> int:
        return self.sq.bits | (self.mixed.bits << self.n)

    def __add__(self, other: "P2Vector") -> "P2Vector":
        if self.n != other.n:
            raise DimensionError("P2 vectors over different bases")
        return P2Vector.from_packed(self.n, self.packed ^ other.packed)

    def terms(self) -> list[str]:
        out = [f"z{i}^2" for i in bits_of(self.sq.bits)]
        L = layout(self.n)
        out += [f"z{i}z{j}" for i, j in L.pairs() if self.mixed[L.pair(i, j)]]
        return out

    def __str__(self) -> str:
        return " + ".join(self.terms()) or "0"


def q_packed(n: int, a: int, b: int) -> int:
    return (a & b) | (layout(n).sym(a, b) << n)


def q_poly(p: Psg, a: Elem, b: Elem) -> P2Vector:
    return P2Vector.from_packed(p.n, q_packed(p.n, as_int(a), as_int(b)))


def relation_pairs(p: Psg) -> list[tuple[int, int]]:
    """The pairs (a, b) with b in D(1, -a) that generate Q."""
    m = p.minus_one
    return [(a, b) for a in p.elements() for b in sorted(p.value_sets[m ^ a])]


@dataclass(frozen=True)
class RelationModule:
    basis_of_Q: Gf2Subspace
    k2_dim: int

    @property
    def n(self) -> int:
        return _n_from_m(self.basis_of_Q.ambient_dim)

    @property
    def dim(self) -> int:
        return self.basis_of_Q.dim

    def contains(self, q) -> bool:
        return self.basis_of_Q.contains(q if isinstance(q, int) else q.packed)

    def basis_polys(self) -> list[P2Vector]:
        return [P2Vector.from_packed(self.n, r) for r in self.basis_of_Q.basis]


def _n_from_m(m: int) -> int:
    n = 0
    while p2_dim(n) < m:
        n += 1
    return n


def relation_module(p: Psg) -> RelationModule:
    n = p.n
    Q = Gf2Subspace.span((q_packed(n, a, b) for a, b in relation_pairs(p)), p2_dim(n))
    return RelationModule(Q, p2_dim(n) - Q.dim)


def k2_product_is_zero(p: Psg, a: Elem, b: Elem, Q: RelationModule | None = None) -> bool:
    """l(a) l(b) = 0 in k2."""
    Q = Q or relation_module(p)
    return Q.basis_of_Q.contains(q_packed(p.n, as_int(a), as_int(b)))


@dataclass(frozen=True)
class KStableReport:
    violations: tuple[tuple[int, int, bool, bool], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def k_stable_check(p: Psg) -> KStableReport:
    """l(a)l(b) = 0 exactly when <a, b> == <1, ab> (i.e. a in V(ab))."""
    Q = relation_module(p)
    bad = []
    for a in p.elements():
        for b in p.elements():
            k2 = Q.basis_of_Q.contains(q_packed(p.n, a, b))
            iso = a in p.value_sets[a ^ b]
            if k2 != iso:
                bad.append((a, b, k2, iso))
    return KStableReport(tuple(bad))


def is_k_stable(p: Psg) -> bool:
    return k_stable_check(p).ok


# base change -------------------------------------------------------------------


@dataclass(frozen=True)
class LinearMap:
    """F2-linear map stored by the images of unit vectors."""

    src_dim: int
    dst_dim: int
    images: tuple[int, ...]

    def __call__(self, v) -> int:
        v = v if isinstance(v, int) else v.packed
        out = 0
        for j in bits_of(v):
            out ^= self.images[j]
        return out

    def compose(self, first: "LinearMap") -> "LinearMap":
        """self after first."""
        if first.dst_dim != self.src_dim:
            raise DimensionError("maps do not compose")
        return LinearMap(first.src_dim, self.dst_dim, tuple(self(x) for x in first.images))

    def image(self, s: Gf2Subspace) -> Gf2Subspace:
        return Gf2Subspace.span((self(r) for r in s.basis), self.dst_dim)

    def is_identity(self) -> bool:
        return self.src_dim == self.dst_dim and all(x == 1 << j for j, x in enumerate(self.images))


def _check_change(basis_change: Gf2Matrix) -> Gf2Matrix:
    if not basis_change.is_invertible():
        raise DimensionError("basis change matrix is singular")
    return basis_change.inverse()


def base_change_m1(basis_change: Gf2Matrix) -> LinearMap:
    """P1(B) -> P1(B'): l_B(a) |-> l_B'(a).

    Rows of ``basis_change`` are the vectors of B' in B-coordinates.
    """
    inv = _check_change(basis_change)
    n = basis_change.ncols
    return LinearMap(n, n, inv.rows)


def base_change_m2(basis_change: Gf2Matrix) -> LinearMap:
    """P2(B) -> P2(B'): the substitution of z_k by l_B'(e_k); q_B(a,b) |-> q_B'(a,b)."""
    inv = _check_change(basis_change)
    n = basis_change.ncols
    L = layout(n)
    r = inv.rows
    imgs = [q_packed(n, r[k], r[k]) for k in range(n)]
    imgs += [q_packed(n, r[i], r[j]) for i, j in L.pairs()]
    return LinearMap(p2_dim(n), p2_dim(n), tuple(imgs))


__all__ = [
    "KStableReport",
    "LinearMap",
    "P1Vector",
    "P2Vector",
    "RelationModule",
    "base_change_m1",
    "base_change_m2",
    "is_k_stable",
    "k2_product_is_zero",
    "k_stable_check",
    "p2_dim",
    "q_packed",
    "q_poly",
    "relation_module",
    "relation_pairs",
]
