"""Linear algebra over GF(2) on int bitsets.

Coordinate ``i`` of a vector is bit ``i`` of an int. Subspaces are kept in
reduced row echelon form with the pivot of a row at its lowest set bit, so two
subspaces are equal exactly when their basis tuples are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from . import kernels
from .errors import DimensionError


def popcount(x: int) -> int:
    return bin(x).count("1")


def parity(x: int) -> int:
    return popcount(x) & 1


def dot(x: int, y: int) -> int:
    return parity(x & y)


def low_bit(x: int) -> int:
    """Index of the lowest set bit (x must be nonzero)."""
    return (x & -x).bit_length() - 1


def bits_of(x: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def to_bitstring(x: int, length: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(length))


def from_bitstring(s: str) -> int:
    if any(ch not in "01" for ch in s):
        raise ValueError(f"not a bitstring: {s!r}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


@dataclass(frozen=True)
class BitVec:
    length: int
    bits: int

    def __post_init__(self):
        if self.length < 0:
            raise DimensionError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits {self.bits:#x} exceed length {self.length}")

    @classmethod
    def from_list(cls, coords: Sequence[int]) -> "BitVec":
        return cls(len(coords), sum((c & 1) << i for i, c in enumerate(coords)))

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        return cls(len(s), from_bitstring(s))

    @classmethod
    def zero(cls, length: int) -> "BitVec":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, i: int) -> "BitVec":
        return cls(length, 1 << i)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self):
        return (self[i] for i in range(self.length))

    def _check(self, other: "BitVec"):
        if self.length != other.length:
            raise DimensionError(f"length {self.length} vs {other.length}")

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.bits & other.bits)

    def dot(self, other: "BitVec") -> int:
        self._check(other)
        return dot(self.bits, other.bits)

    def weight(self) -> int:
        return popcount(self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def to_list(self) -> list[int]:
        return list(self)

    def __str__(self) -> str:
        return to_bitstring(self.bits, self.length)


VecLike = Union[BitVec, int]


def _raw(v: VecLike, length: Optional[int] = None) -> int:
    if isinstance(v, BitVec):
        if length is not None and v.length != length:
            raise DimensionError(f"length {v.length} vs {length}")
        return v.bits
    if length is not None and (v < 0 or v >> length):
        raise DimensionError(f"vector {v:#x} exceeds length {length}")
    return v


@dataclass(frozen=True)
class Gf2Matrix:
    """Rows stored as ints; ``ncols`` is the common row length."""

    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise DimensionError(f"row {r:#x} exceeds {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Iterable[VecLike], ncols: Optional[int] = None) -> "Gf2Matrix":
        rows = list(rows)
        if ncols is None:
            lengths = {r.length for r in rows if isinstance(r, BitVec)}
            if len(lengths) > 1:
                raise DimensionError(f"rows of unequal length {sorted(lengths)}")
            if lengths:
                ncols = lengths.pop()
            else:
                ncols = max((r.bit_length() for r in rows), default=0)
        return cls(ncols, tuple(_raw(r, ncols) for r in rows))

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "Gf2Matrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls.from_rows([BitVec.from_list(r) for r in rows], ncols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitVec:
        return BitVec(self.ncols, self.rows[i])

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "Gf2Matrix":
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in bits_of(r):
                out[j] |= 1 << i
        return Gf2Matrix(self.nrows, tuple(out))

    def apply(self, x: VecLike) -> int:
        """Matrix-vector product M x (x has ``ncols`` coordinates)."""
        x = _raw(x, self.ncols)
        out = 0
        for i, r in enumerate(self.rows):
            if dot(r, x):
                out |= 1 << i
        return out

    def left_apply(self, y: VecLike) -> int:
        """Row-vector product y M (y has ``nrows`` coordinates)."""
        y = _raw(y, self.nrows)
        out = 0
        for i in bits_of(y):
            out ^= self.rows[i]
        return out

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"{self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        return Gf2Matrix(other.ncols, tuple(other.left_apply(r) for r in self.rows))

    def rank(self) -> int:
        return kernels.rank_rows(list(self.rows), self.ncols)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.ncols

    def inverse(self) -> "Gf2Matrix":
        n = self.ncols
        if self.nrows != n:
            raise DimensionError("inverse of a non-square matrix")
        aug = [r | (1 << (n + i)) for i, r in enumerate(self.rows)]
        red = kernels.rref_rows(aug, 2 * n)
        if len(red) != n or any(low_bit(r) != i for i, r in enumerate(red)):
            raise DimensionError("singular matrix")
        return Gf2Matrix(n, tuple(r >> n for r in red))


@dataclass(frozen=True)
class Gf2Subspace:
    ambient_dim: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[VecLike], ambient_dim: int) -> "Gf2Subspace":
        rows = [_raw(v, ambient_dim) for v in vectors]
        return cls(ambient_dim, tuple(kernels.rref_rows(rows, ambient_dim)))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Gf2Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Gf2Subspace":
        return cls(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(low_bit(r) for r in self.basis)

    def basis_vecs(self) -> list[BitVec]:
        return [BitVec(self.ambient_dim, r) for r in self.basis]

    def reduce(self, v: VecLike) -> int:
        """Normal form of v modulo the subspace (zero on every pivot)."""
        x = _raw(v, self.ambient_dim)
        for r in self.basis:
            if (x >> low_bit(r)) & 1:
                x ^= r
        return x

    def contains(self, v: VecLike) -> bool:
        return self.reduce(v) == 0

    __contains__ = contains

    def orthogonal_complement(self) -> "Gf2Subspace":
        piv = {low_bit(r): r for r in self.basis}
        out = []
        for f in range(self.ambient_dim):
            if f in piv:
                continue
            w = 1 << f
            for p, r in piv.items():
                if (r >> f) & 1:
                    w |= 1 << p
            out.append(w)
        return Gf2Subspace.span(out, self.ambient_dim)

    def __add__(self, other: "Gf2Subspace") -> "Gf2Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("ambient dimensions differ")
        return Gf2Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersection(self, other: "Gf2Subspace") -> "Gf2Subspace":
        a = self.orthogonal_complement() + other.orthogonal_complement()
        return a.orthogonal_complement()

    def issubset(self, other: "Gf2Subspace") -> bool:
        return all(other.contains(r) for r in self.basis)

    def elements(self) -> Iterator[int]:
        """All 2^dim vectors of the subspace (Gray-code order)."""
        x = 0
        yield x
        for k in range(1, 1 << self.dim):
            x ^= self.basis[low_bit(k)]
            yield x

    def quotient_reps(self) -> Iterator[int]:
        """Canonical representatives of the ambient space modulo this subspace."""
        free = [i for i in range(self.ambient_dim) if i not in set(self.pivots)]
        for k in range(1 << len(free)):
            yield sum(1 << free[j] for j in bits_of(k))


def rref(m: Gf2Matrix) -> Gf2Subspace:
    return Gf2Subspace(m.ncols, tuple(kernels.rref_rows(list(m.rows), m.ncols)))


def contains(s: Gf2Subspace, v: VecLike) -> bool:
    return s.contains(v)


def orthogonal_complement(s: Gf2Subspace) -> Gf2Subspace:
    return s.orthogonal_complement()


def nullspace(m: Gf2Matrix) -> Gf2Subspace:
    """{x : M x = 0}."""
    return rref(m).orthogonal_complement()


def solve(m: Gf2Matrix, rhs: VecLike) -> Optional[int]:
    """Some x with M x = rhs, or None when the system is inconsistent."""
    rhs = _raw(rhs, m.nrows)
    n = m.ncols
    aug = [r | (((rhs >> i) & 1) << n) for i, r in enumerate(m.rows)]
    x = 0
    for r in kernels.rref_rows(aug, n + 1):
        p = low_bit(r)
        if p == n:
            return None
        if (r >> n) & 1:
            x |= 1 << p
    return x


def complete_basis(vectors: Sequence[int], n: int) -> list[int]:
    """Extend independent vectors to a basis of GF(2)^n with unit vectors.

    Unit vectors are tried in increasing index order, so the result is
    deterministic.
    """
    out = list(vectors)
    span: dict[int, int] = {}

    def insert(v: int) -> bool:
        while v:
            p = low_bit(v)
            if p not in span:
                span[p] = v
                return True
            v ^= span[p]
        return False

    for v in out:
        if not insert(v):
            raise DimensionError("vectors are linearly dependent")
    for i in range(n):
        if len(out) == n:
            break
        if insert(1 << i):
            out.append(1 << i)
    return out


__all__ = [
    "BitVec",
    "Gf2Matrix",
    "Gf2Subspace",
    "bits_of",
    "complete_basis",
    "contains",
    "dot",
    "from_bitstring",
    "low_bit",
    "nullspace",
    "orthogonal_complement",
    "parity",
    "popcount",
    "rref",
    "solve",
    "to_bitstring",
]
