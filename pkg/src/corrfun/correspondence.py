"""Correspondences between finite sets, stored as bit-packed Boolean matrices.

A correspondence from X to Y is a subset of Y x X.  Row ``y`` of the
incidence is an int whose bit ``x`` is set iff ``(y, x)`` belongs to it, so
composition over the (or, and) semiring is a word-parallel OR of rows.
Elements of every set are the integers ``0 .. n-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import InputError


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Correspondence:
    target_size: int
    source_size: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.target_size:
            raise InputError(
                f"expected {self.target_size} rows, got {len(self.rows)}")
        full = (1 << self.source_size) - 1
        for row in self.rows:
            if row & ~full:
                raise InputError("row has bits beyond the source size")

    @classmethod
    def from_pairs(cls, target_size: int, source_size: int,
                   pairs: Iterable[tuple[int, int]]) -> "Correspondence":
        rows = [0] * target_size
        for y, x in pairs:
            if not (0 <= y < target_size and 0 <= x < source_size):
                raise InputError(f"pair {(y, x)} out of range")
            rows[y] |= 1 << x
        return cls(target_size, source_size, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]],
                    source_size: int | None = None) -> "Correspondence":
        if source_size is None:
            source_size = len(matrix[0]) if matrix else 0
        rows = []
        for line in matrix:
            if len(line) != source_size:
                raise InputError("ragged incidence matrix")
            rows.append(sum(1 << x for x, v in enumerate(line) if v))
        return cls(len(rows), source_size, tuple(rows))

    @classmethod
    def empty(cls, target_size: int, source_size: int) -> "Correspondence":
        return cls(target_size, source_size, (0,) * target_size)

    @classmethod
    def full(cls, target_size: int, source_size: int) -> "Correspondence":
        return cls(target_size, source_size,
                   ((1 << source_size) - 1,) * target_size)

    @classmethod
    def identity(cls, size: int) -> "Correspondence":
        return cls(size, size, tuple(1 << i for i in range(size)))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        y, x = pair
        return bool(self.rows[y] >> x & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(y, x) for y, row in enumerate(self.rows) for x in bits(row)]

    def to_matrix(self) -> list[list[int]]:
        return [[row >> x & 1 for x in range(self.source_size)]
                for row in self.rows]

    def __len__(self) -> int:
        return sum(bin(row).count("1") for row in self.rows)

    def __matmul__(self, other: "Correspondence") -> "Correspondence":
        return compose(self, other)


def compose(s: Correspondence, r: Correspondence) -> Correspondence:
    """``s r``: (z, x) is in the result iff (z, y) in s and (y, x) in r for some y."""
    if s.source_size != r.target_size:
        raise InputError(
            f"cannot compose: s has source size {s.source_size}, "
            f"r has target size {r.target_size}")
    r_rows = r.rows
    out = []
    for row in s.rows:
        acc = 0
        while row:
            low = row & -row
            acc |= r_rows[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return Correspondence(s.target_size, r.source_size, tuple(out))


def opposite(r: Correspondence) -> Correspondence:
    rows = [0] * r.source_size
    for y, row in enumerate(r.rows):
        for x in bits(row):
            rows[x] |= 1 << y
    return Correspondence(r.source_size, r.target_size, tuple(rows))


def delta(perm: Sequence[int]) -> Correspondence:
    """The graph {(perm[x], x)} of a permutation."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise InputError(f"{tuple(perm)} is not a permutation")
    rows = [0] * n
    for x, y in enumerate(perm):
        rows[y] |= 1 << x
    return Correspondence(n, n, tuple(rows))


def gamma_of_map(phi: Sequence[int], lat) -> Correspondence:
    """The correspondence {(x, e) : e <= phi(x)} from Irr(T) to X.

    ``e`` runs over the irreducibles of ``lat`` in their index order.
    """
    embed = lat.irreducible_elements
    rows = []
    for t in phi:
        if not 0 <= t < lat.size:
            raise InputError(f"value {t} is not an element of the lattice")
        rows.append(sum(1 << i for i, e in enumerate(embed) if lat.le(e, t)))
    return Correspondence(len(phi), len(embed), tuple(rows))


def all_relations(n: int) -> Iterator[Correspondence]:
    """Every relation on an n-set, 2**(n*n) of them, in row-major mask order."""
    for rows in product(range(1 << n), repeat=n):
        yield Correspondence(n, n, tuple(rows))


def parse_correspondence(text: str) -> Correspondence:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty correspondence file")
    try:
        y_size, x_size = (int(v) for v in lines[0].split())
    except ValueError:
        raise InputError("first line must be 'Y X'") from None
    body = lines[1:]
    if y_size == 0 and not body:
        return Correspondence.empty(0, x_size)
    if len(body) != y_size:
        raise InputError(f"expected {y_size} rows, found {len(body)}")
    matrix = []
    for line in body:
        if len(line) != x_size or set(line) - {"0", "1"}:
            raise InputError(f"bad row {line!r}")
        matrix.append([c == "1" for c in line])
    return Correspondence.from_matrix(matrix, x_size)


def format_correspondence(r: Correspondence) -> str:
    lines = [f"{r.target_size} {r.source_size}"]
    for row in r.to_matrix():
        lines.append("".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
