"""Finite pre-special groups presented by value sets.

Elements of G = F2^n are ints (bit i is the exponent of basis element i).
The form <a, b> represents x iff x in a V(ab) where V(y) = D(1, y); binary
isometry is derived from that.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, GuardrailError, MalformedPsgError, PreconditionError
from .gf2 import BitVec, Gf2Matrix, Gf2Subspace, dot, from_bitstring, to_bitstring

MAX_ENUM_N = 12
MAX_SUBGROUP_N = 6
MAX_SPECIAL_N = 4
MAX_VALIDATE_N = 8
MAX_SG5_N = 6


@dataclass(frozen=True)
class PsgElement:
    coords: BitVec

    @property
    def bits(self) -> int:
        return self.coords.bits

    def __str__(self) -> str:
        return str(self.coords)


Elem = Union[int, BitVec, PsgElement]


def as_int(x: Elem) -> int:
    if isinstance(x, PsgElement):
        return x.coords.bits
    if isinstance(x, BitVec):
        return x.bits
    return x


@dataclass(frozen=True)
class Character:
    """A homomorphism G -> F2, x |-> coeffs . x."""

    coeffs: BitVec

    def __call__(self, x: Elem) -> int:
        return dot(self.coeffs.bits, as_int(x))

    @property
    def bits(self) -> int:
        return self.coeffs.bits

    def kernel(self) -> Gf2Subspace:
        return Gf2Subspace.span([self.coeffs.bits], self.coeffs.length).orthogonal_complement()

    def __str__(self) -> str:
        return str(self.coeffs)


@dataclass(frozen=True, eq=False)
class Psg:
    n: int
    minus_one: int
    value_sets: tuple[frozenset, ...]
    name: str = "psg"

    def __post_init__(self):
        if self.n < 0:
            raise MalformedPsgError("negative basis size")
        if self.n > MAX_ENUM_N:
            raise GuardrailError("basis size", self.n, MAX_ENUM_N)
        size = 1 << self.n
        if not 0 <= self.minus_one < size:
            raise MalformedPsgError("-1 is not an element of G")
        if len(self.value_sets) != size:
            raise MalformedPsgError(f"expected {size} value sets, got {len(self.value_sets)}")
        for x, vs in enumerate(self.value_sets):
            for y in vs:
                if not (isinstance(y, int) and 0 <= y < size):
                    raise MalformedPsgError(f"V({self.fmt(x)}) contains a foreign element {y!r}")

    # construction ------------------------------------------------------------
    @classmethod
    def from_function(cls, n: int, minus_one: int, vfun, name: str = "psg") -> "Psg":
        return cls(n, minus_one, tuple(frozenset(vfun(x)) for x in range(1 << n)), name)

    @classmethod
    def from_json(cls, doc: Mapping) -> "Psg":
        try:
            n = doc["basis_size"]
            m1 = doc["minus_one"]
            vs = doc["value_sets"]
        except (KeyError, TypeError) as exc:
            raise MalformedPsgError(f"missing field {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise MalformedPsgError("basis_size must be a non-negative integer")
        if n > MAX_ENUM_N:
            raise GuardrailError("basis size", n, MAX_ENUM_N)
        if not isinstance(vs, Mapping):
            raise MalformedPsgError("value_sets must be an object")

        def parse(s) -> int:
            if not isinstance(s, str) or len(s) != n:
                raise MalformedPsgError(f"bad element {s!r} (expected a bitstring of length {n})")
            try:
                return from_bitstring(s)
            except ValueError:
                raise MalformedPsgError(f"bad element {s!r}") from None

        sets: dict[int, frozenset] = {}
        for key, members in vs.items():
            x = parse(key)
            if x in sets:
                raise MalformedPsgError(f"duplicate key {key!r}")
            if not isinstance(members, list):
                raise MalformedPsgError(f"V({key}) must be a list")
            sets[x] = frozenset(parse(y) for y in members)
        missing = [to_bitstring(x, n) for x in range(1 << n) if x not in sets]
        if missing:
            raise MalformedPsgError(f"value_sets missing keys {missing[:4]}")
        return cls(n, parse(m1), tuple(sets[x] for x in range(1 << n)), str(doc.get("name", "psg")))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "basis_size": self.n,
            "minus_one": self.fmt(self.minus_one),
            "value_sets": {
                self.fmt(x): [self.fmt(y) for y in sorted(vs)] for x, vs in enumerate(self.value_sets)
            },
        }

    # basics ----------------------------------------------------------------
    @property
    def size(self) -> int:
        return 1 << self.n

    def elements(self) -> range:
        return range(self.size)

    def fmt(self, x: int) -> str:
        return to_bitstring(x, self.n)

    def element(self, x: Elem) -> PsgElement:
        return PsgElement(BitVec(self.n, as_int(x)))

    def V(self, x: Elem) -> frozenset:
        return self.value_sets[as_int(x)]

    def represents(self, x: Elem, y: Elem) -> bool:
        """y in D(1, x)."""
        return as_int(y) in self.value_sets[as_int(x)]

    def rebase(self, basis: Gf2Matrix, name: Optional[str] = None) -> "Psg":
        """The same group written in a new basis (rows: new basis in current coordinates)."""
        if basis.nrows != self.n or not basis.is_invertible():
            raise DimensionError("basis change must be an invertible n x n matrix")
        inv = basis.inverse()
        new = [inv.left_apply(x) for x in range(self.size)]
        old = [basis.left_apply(c) for c in range(self.size)]
        return Psg(
            self.n,
            new[self.minus_one],
            tuple(frozenset(new[y] for y in self.value_sets[old[c]]) for c in range(self.size)),
            name or self.name,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Psg):
            return NotImplemented
        return (self.n, self.minus_one, self.value_sets) == (other.n, other.minus_one, other.value_sets)

    def __hash__(self) -> int:
        return hash((self.n, self.minus_one, self.value_sets))


# isometry ----------------------------------------------------------------------


def isometry2(p: Psg, a: Elem, b: Elem, c: Elem, d: Elem) -> bool:
    """<a, b> == <c, d>: equal products and c in a V(ab)."""
    a, b, c, d = (as_int(v) for v in (a, b, c, d))
    return a ^ b == c ^ d and (a ^ c) in p.value_sets[a ^ b]


def _iso_array(p: Psg) -> np.ndarray:
    """I[a, b, c] = <a, b> == <c, abc>."""
    N = p.size
    vm = np.zeros((N, N), dtype=bool)
    for x, vs in enumerate(p.value_sets):
        vm[x, list(vs)] = True
    g = np.arange(N)
    a = g[:, None, None]
    b = g[None, :, None]
    c = g[None, None, :]
    return vm[a ^ b, a ^ c]


# validation ----------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[str, ...]
    detail: str = ""

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms_failed(self) -> list[str]:
        return sorted({v.axiom for v in self.violations})

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "checked": list(self.checked),
            "violations": [v.to_json() for v in self.violations],
        }


def validate(p: Psg, require_special: bool = False, max_witnesses: int = 5) -> ValidationReport:
    """Check the value-set invariants and SG0-SG5 (and SG6 on request)."""
    if p.n > MAX_VALIDATE_N:
        raise GuardrailError("validation (basis size)", p.n, MAX_VALIDATE_N)
    rep = ValidationReport()
    f = p.fmt
    G = p.elements()

    def add(axiom, witness, detail=""):
        if sum(v.axiom == axiom for v in rep.violations) < max_witnesses:
            rep.violations.append(Violation(axiom, tuple(f(w) for w in witness), detail))

    rep.checked += ["V-one", "V-self", "V-coset", "V-minus-one"]
    for x in G:
        vs = p.value_sets[x]
        if 0 not in vs:
            add("V-one", (x,), "1 not in V(x)")
        if x not in vs:
            add("V-self", (x,), "x not in V(x)")
        for y in vs:
            if x ^ y not in vs:
                add("V-coset", (x, y), "y in V(x) but xy not in V(x)")
    if len(p.value_sets[p.minus_one]) != p.size:
        missing = min(set(G) - p.value_sets[p.minus_one])
        add("V-minus-one", (missing,), "V(-1) != G")

    # SG0: on forms of product s, <a, sa> ~ <c, sc> iff ac in V(s); this is an
    # equivalence relation iff V(s) contains 1 and is closed under products.
    rep.checked.append("SG0")
    for s in G:
        vs = p.value_sets[s]
        if 0 not in vs:
            add("SG0", (0, s, 0, s), "<1, s> not isometric to itself")
            continue
        bad = next(((u, v) for u in vs for v in vs if u ^ v not in vs), None)
        if bad is not None:
            u, v = bad
            # <1,s> == <u,su> == <uv,suv> but <1,s> != <uv,suv>
            add("SG0", (0, s, u, s ^ u, u ^ v, s ^ u ^ v), "transitivity fails")

    rep.checked.append("SG1")
    for a in G:
        for b in G:
            if not isometry2(p, a, b, b, a):
                add("SG1", (a, b))

    rep.checked.append("SG2")
    m = p.minus_one
    for a in G:
        if not isometry2(p, a, a ^ m, 0, m):
            add("SG2", (a,))

    rep.checked.append("SG3")
    # SG3 holds by construction of isometry2, so there is nothing to search.
    iso = _iso_array(p)
    g = np.arange(p.size)
    A, B, C = g[:, None, None], g[None, :, None], g[None, None, :]

    rep.checked.append("SG4")
    bad = iso & ~iso[A, C ^ m, B ^ m]
    for a, b, c in np.argwhere(bad)[:max_witnesses]:
        add("SG4", (int(a), int(b), int(c), int(a ^ b ^ c)))

    if p.n <= MAX_SG5_N:
        rep.checked.append("SG5")
        for x in g:
            bad = iso & ~iso[A ^ x, B ^ x, C ^ x]
            hit = np.argwhere(bad)
            if len(hit):
                a, b, c = (int(t) for t in hit[0])
                add("SG5", (int(x), a, b, c, a ^ b ^ c))

    if require_special:
        rep.checked.append("SG6")
        for w in _sg6_violations(p, iso, max_witnesses):
            add("SG6", w, "3-form isometry is not transitive")
    return rep


def isometry3_blocks(p: Psg, iso: Optional[np.ndarray] = None) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Ternary isometry split by the product a1 a2 a3.

    Returns, for each product s, the list of triples with that product and a
    boolean matrix R with R[u, v] iff triple u == triple v.
    """
    if p.n > MAX_SPECIAL_N:
        raise GuardrailError("ternary isometry (basis size)", p.n, MAX_SPECIAL_N)
    if iso is None:
        iso = _iso_array(p)
    N = p.size
    g = np.arange(N)
    out = {}
    for s in range(N):
        a1, a2 = np.meshgrid(g, g, indexing="ij")
        a1 = a1.ravel()
        a2 = a2.ravel()
        a3 = a1 ^ a2 ^ s
        trip = np.stack([a1, a2, a3], axis=1)
        A1, B1 = a1[:, None], a1[None, :]
        A2, A3 = a2[:, None], a3[:, None]
        Bb2, Bb3 = a2[None, :], a3[None, :]
        R = np.zeros((len(a1), len(a1)), dtype=bool)
        for x in range(N):
            y = A1 ^ x ^ B1
            R |= iso[A1, x, B1] & iso[A2, A3, x] & iso[Bb2, Bb3, y]
        out[s] = (trip, R)
    return out


def _sg6_violations(p: Psg, iso: np.ndarray, limit: int) -> list[tuple[int, ...]]:
    found = []
    for s, (trip, R) in isometry3_blocks(p, iso).items():
        Ri = R.astype(np.int32)
        RR = (Ri @ Ri) > 0
        bad = np.argwhere(RR & ~R)
        for u, w in bad[:limit]:
            v = int(np.argmax(R[u] & R[:, w]))
            found.append(tuple(int(t) for t in (*trip[u], *trip[v], *trip[w])))
        if len(found) >= limit:
            break
    return found[:limit]


def is_special(p: Psg) -> bool:
    return not _sg6_violations(p, _iso_array(p), 1)


# orderings and saturated subgroups -------------------------------------------------


def is_saturated(p: Psg, sub: Gf2Subspace) -> bool:
    return all(sub.contains(y) for a in sub.elements() for y in p.value_sets[a])


def orderings(p: Psg) -> list[Character]:
    """Characters with chi(-1) = 1 and saturated kernel, sorted by coefficients."""
    out = []
    for c in range(p.size):
        if not dot(c, p.minus_one):
            continue
        ok = all(
            not dot(c, y) for a in p.elements() if not dot(c, a) for y in p.value_sets[a]
        )
        if ok:
            out.append(Character(BitVec(p.n, c)))
    return sorted(out, key=str)


def all_subgroups(n: int) -> list[Gf2Subspace]:
    """Every subgroup of F2^n, as canonical subspaces (n <= 6)."""
    if n > MAX_SUBGROUP_N:
        raise GuardrailError("subgroup enumeration (basis size)", n, MAX_SUBGROUP_N)
    seen = {(): Gf2Subspace.zero(n)}
    frontier = [Gf2Subspace.zero(n)]
    while frontier:
        nxt = []
        for s in frontier:
            for v in range(1, 1 << n):
                if s.contains(v):
                    continue
                t = Gf2Subspace.span(s.basis + (v,), n)
                if t.basis not in seen:
                    seen[t.basis] = t
                    nxt.append(t)
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.dim, s.basis))


def saturated_subgroups(p: Psg) -> list[Gf2Subspace]:
    return [s for s in all_subgroups(p.n) if is_saturated(p, s)]


def is_pythagorean(p: Psg) -> bool:
    """<a, a> == <1, 1> only for a = 1."""
    return all(a == 0 or not isometry2(p, a, a, 0, 0) for a in p.elements())


def is_formally_real(p: Psg) -> bool:
    return bool(orderings(p))


def is_reduced(p: Psg) -> bool:
    return is_pythagorean(p) and p.minus_one != 0


# products and catalog -----------------------------------------------------------


def product(p: Psg, q: Psg, name: Optional[str] = None) -> Psg:
    """Coordinatewise product; p occupies the low coordinates."""
    n = p.n + q.n
    if n > MAX_ENUM_N:
        raise GuardrailError("product basis size", n, MAX_ENUM_N)
    lo = (1 << p.n) - 1

    def vfun(z):
        x, y = z & lo, z >> p.n
        return {u | (v << p.n) for u in p.value_sets[x] for v in q.value_sets[y]}

    return Psg.from_function(
        n, p.minus_one | (q.minus_one << p.n), vfun, name or f"PRODUCT({p.name},{q.name})"
    )


def _trivial() -> Psg:
    return Psg(0, 0, (frozenset({0}),), "TRIVIAL_SG")


def _z2_real() -> Psg:
    return Psg(1, 1, (frozenset({0}), frozenset({0, 1})), "Z2_REAL")


def _f3like() -> Psg:
    return Psg(1, 1, (frozenset({0, 1}), frozenset({0, 1})), "F3LIKE")


def fan(n: int) -> Psg:
    """V(1) = {1}, V(-1) = G, V(x) = {1, x} otherwise; -1 is basis element 0."""
    if n < 1:
        raise PreconditionError("FAN(n) needs n >= 1")
    m1 = 1
    G = set(range(1 << n))

    def vfun(x):
        if x == 0:
            return {0}
        if x == m1:
            return G
        return {0, x}

    return Psg.from_function(n, m1, vfun, "FAN2" if n == 2 else f"FAN({n})")


BASE_CATALOG = {
    "TRIVIAL_SG": _trivial,
    "Z2_REAL": _z2_real,
    "F3LIKE": _f3like,
    "FAN2": lambda: fan(2),
}


def catalog_names() -> list[str]:
    return list(BASE_CATALOG) + ["FAN(n)", "PRODUCT(A,B)"]


def _split_args(s: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            raise KeyError(s)
        cur += ch
    parts.append(cur.strip())
    return parts


def catalog(name: str) -> Psg:
    name = name.strip()
    if name in BASE_CATALOG:
        return BASE_CATALOG[name]()
    m = re.fullmatch(r"FAN\((\d+)\)", name)
    if m:
        return fan(int(m.group(1)))
    m = re.fullmatch(r"PRODUCT\((.*)\)", name)
    if m:
        args = _split_args(m.group(1))
        if len(args) < 2 or not all(args):
            raise KeyError(f"unknown catalog entry {name!r}")
        out = catalog(args[0])
        for a in args[1:]:
            out = product(out, catalog(a))
        return Psg(out.n, out.minus_one, out.value_sets, name)
    raise KeyError(f"unknown catalog entry {name!r}")


# morphisms -------------------------------------------------------------------------


@dataclass(frozen=True)
class PsgMorphism:
    """Linear map source -> target given by an (n_target x n_source) matrix."""

    source: Psg
    target: Psg
    matrix: Gf2Matrix
    preserves_minus_one: bool = True

    def __post_init__(self):
        if self.matrix.nrows != self.target.n or self.matrix.ncols != self.source.n:
            raise DimensionError("matrix shape does not match source and target")

    def __call__(self, x: Elem) -> int:
        return self.matrix.apply(as_int(x))

    def is_injective(self) -> bool:
        return self.matrix.rank() == self.source.n

    def violations(self) -> list[str]:
        out = []
        if self.preserves_minus_one and self(self.source.minus_one) != self.target.minus_one:
            out.append("f(-1) != -1")
        for a in self.source.elements():
            fa = self(a)
            for b in self.source.value_sets[a]:
                if self(b) not in self.target.value_sets[fa]:
                    out.append(
                        f"{self.source.fmt(b)} in V({self.source.fmt(a)}) but image not represented"
                    )
                    break
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def compose(self, first: "PsgMorphism") -> "PsgMorphism":
        """self after first."""
        if first.target != self.source:
            raise DimensionError("morphisms do not compose")
        return PsgMorphism(
            first.source,
            self.target,
            self.matrix @ first.matrix,
            self.preserves_minus_one and first.preserves_minus_one,
        )


def identity_morphism(p: Psg) -> PsgMorphism:
    return PsgMorphism(p, p, Gf2Matrix.identity(p.n))


def coordinate_embedding(p: Psg, q: Psg, positions: Sequence[int]) -> PsgMorphism:
    """Send basis element k of p to basis element positions[k] of q."""
    rows = [0] * q.n
    for k, pos in enumerate(positions):
        rows[pos] |= 1 << k
    return PsgMorphism(p, q, Gf2Matrix(p.n, tuple(rows)))


__all__ = [
    "BASE_CATALOG",
    "Character",
    "Psg",
    "PsgElement",
    "PsgMorphism",
    "ValidationReport",
    "Violation",
    "all_subgroups",
    "as_int",
    "catalog",
    "catalog_names",
    "coordinate_embedding",
    "fan",
    "identity_morphism",
    "is_formally_real",
    "is_pythagorean",
    "is_reduced",
    "is_saturated",
    "is_special",
    "isometry2",
    "isometry3_blocks",
    "orderings",
    "product",
    "saturated_subgroups",
    "validate",
]
