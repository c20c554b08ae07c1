"""Finite lattices and the operators built from their join-irreducibles.

Elements are ``0 .. size-1`` listed in a linear extension, so ``0`` is the
bottom and ``size-1`` the top.  Because of that ordering, the join of ``a`` and
``b`` is the lowest-indexed common upper bound and the meet is the
highest-indexed common lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .correspondence import bits
from .errors import InputError, InternalConsistencyError
from .poset import Poset, down_ideals, popcount, validate_poset


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _high(mask: int) -> int:
    return mask.bit_length() - 1


class Lattice:
    """A validated finite lattice.  Construct through :func:`validate_lattice`
    or :func:`lattice_from_sets`."""

    def __init__(self, up: Sequence[int], labels: Sequence | None = None):
        self.size = len(up)
        self.up = tuple(up)
        self.labels = tuple(labels) if labels is not None else tuple(range(self.size))

    def __repr__(self) -> str:
        return f"Lattice(size={self.size})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.up == other.up

    def __hash__(self) -> int:
        return hash(self.up)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.size - 1

    @cached_property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.size
        for a, row in enumerate(self.up):
            for b in bits(row):
                down[b] |= 1 << a
        return tuple(down)

    def le(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.up[a] >> b & 1)

    def join(self, a: int, b: int) -> int:
        return _low(self.up[a] & self.up[b])

    def meet(self, a: int, b: int) -> int:
        return _high(self.down[a] & self.down[b])

    def join_all(self, elements: Iterable[int]) -> int:
        acc = self.full
        for t in elements:
            acc &= self.up[t]
        return _low(acc)

    def meet_all(self, elements: Iterable[int]) -> int:
        acc = self.full
        for t in elements:
            acc &= self.down[t]
        return _high(acc)

    @cached_property
    def join_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.join(a, b) for b in range(self.size)) for a in range(self.size))

    @cached_property
    def meet_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.meet(a, b) for b in range(self.size)) for a in range(self.size))

    def as_poset(self) -> Poset:
        return Poset(self.size, self.up)

    # -- irreducibles and the r / sigma operators -------------------------

    @cached_property
    def r_table(self) -> tuple[int, ...]:
        """r(t): join of the elements strictly below t (0̂ for t = 0̂)."""
        return tuple(self.join_all(bits(self.down[t] & ~(1 << t))) for t in range(self.size))

    @cached_property
    def irreducible_elements(self) -> tuple[int, ...]:
        return tuple(t for t in range(self.size) if self.r_table[t] != t)

    @cached_property
    def irreducible_mask(self) -> int:
        return sum(1 << e for e in self.irreducible_elements)

    @cached_property
    def sigma_table(self) -> tuple[int, ...]:
        """σ(t): meet of the irreducibles strictly above t (1̂ if there are none)."""
        emask = self.irreducible_mask
        return tuple(self.meet_all(bits(self.up[t] & emask & ~(1 << t)))
                     for t in range(self.size))

    @cached_property
    def r_inf_table(self) -> tuple[int, ...]:
        return tuple(_fixpoint(self.r_table, t) for t in range(self.size))

    @cached_property
    def sigma_inf_table(self) -> tuple[int, ...]:
        return tuple(_fixpoint(self.sigma_table, t) for t in range(self.size))

    def label(self, t: int):
        return self.labels[t]


def _fixpoint(step: Sequence[int], t: int) -> int:
    for _ in range(len(step) + 1):
        nxt = step[t]
        if nxt == t:
            return t
        t = nxt
    raise InternalConsistencyError("operator iteration did not stabilise")


def validate_lattice(matrix: Sequence[Sequence[int]] | Poset,
                     labels: Sequence | None = None) -> Lattice:
    """Check that an order matrix is a lattice and index it bottom first.

    If the input order is not already a linear extension the elements are
    renumbered; ``labels`` (default: the input indices) follow them.
    """
    p = matrix if isinstance(matrix, Poset) else validate_poset(matrix)
    n = p.size
    if n == 0:
        raise InputError("not a lattice: the empty poset has no bottom element")
    if labels is None:
        labels = list(range(n))
    elif len(labels) != n:
        raise InputError("one label per element required")
    if any(p.up[a] & ((1 << a) - 1) for a in range(n)):
        order = p.linear_extension
        p = p.relabel(order)
        labels = [labels[v] for v in order]
    down = p.down
    for a in range(n):
        for b in range(a + 1, n):
            common = p.up[a] & p.up[b]
            if not common or p.up[_low(common)] != common:
                raise InputError(
                    f"not a lattice: {labels[a]!r} and {labels[b]!r} have no least upper bound")
            common = down[a] & down[b]
            if not common or down[_high(common)] != common:
                raise InputError(
                    f"not a lattice: {labels[a]!r} and {labels[b]!r} have no greatest lower bound")
    return Lattice(p.up, labels)


def lattice_from_sets(sets: Sequence[int], universe: int | None = None) -> Lattice:
    """Subsets (bitmasks) ordered by inclusion; must be closed enough to form a lattice."""
    order = sorted(set(sets), key=lambda m: (popcount(m), m))
    up = []
    for s in order:
        up.append(sum(1 << j for j, t in enumerate(order) if s & t == s))
    return validate_lattice(Poset(len(order), tuple(up)), order)


def lattice_from_covers(size: int, covers: Sequence[tuple[int, int]],
                        labels: Sequence | None = None) -> Lattice:
    return validate_lattice(Poset.from_covers(size, covers), labels)


def irreducibles(lat: Lattice) -> tuple[Poset, tuple[int, ...]]:
    """The poset (E, R) of join-irreducibles with its embedding into T."""
    emb = lat.irreducible_elements
    up = tuple(sum(1 << j for j, f in enumerate(emb) if lat.le(e, f)) for e in emb)
    return Poset(len(emb), up), emb


def r_infty(lat: Lattice, t: int) -> int:
    return lat.r_inf_table[t]


def sigma_infty(lat: Lattice, t: int) -> int:
    return lat.sigma_inf_table[t]


# -- the subset G ------------------------------------------------------------

@dataclass(frozen=True)
class GData:
    irr: Poset
    embedding: tuple[int, ...]           # index i of E -> element of T
    r_inf: tuple[int, ...]
    sigma_inf: tuple[int, ...]
    lambda_e: tuple[int, ...]
    g_hat: tuple[int, ...]
    g: tuple[int, ...]
    g_sharp: tuple[int, ...]
    g_complement: tuple[int, ...]
    zeta: dict[int, int]                 # t in G -> up-ideal of (E, R) as a mask over E indices

    @cached_property
    def g_mask(self) -> int:
        return sum(1 << t for t in self.g)

    @cached_property
    def e_mask(self) -> int:
        return sum(1 << t for t in self.embedding)


def meet_closure(lat: Lattice, elements: Sequence[int]) -> set[int]:
    """All meets of subsets of ``elements``, the empty meet being the top."""
    found = {lat.top}
    for e in elements:
        found |= {lat.meet(e, s) for s in found}
    return found


def compute_g(lat: Lattice) -> GData:
    """G computed two ways (ΛE ⊔ Ĝ, and E ⊔ G♯), which must agree."""
    poset, emb = irreducibles(lat)
    eset = set(emb)
    r_inf, sig_inf, sig = lat.r_inf_table, lat.sigma_inf_table, lat.sigma_table
    lam = meet_closure(lat, emb)
    g_hat = {r_inf[e] for e in emb if sig[e] == e} - lam
    g_first = lam | g_hat
    g_sharp = {a for a in range(lat.size) if r_inf[sig_inf[a]] == a}
    if g_sharp & eset:
        raise InternalConsistencyError(f"irreducible {g_sharp & eset} satisfies a = r∞σ∞(a)")
    g_second = eset | g_sharp
    if g_first != g_second:
        raise InternalConsistencyError(
            f"two descriptions of G disagree: {sorted(g_first ^ g_second)}")
    g_c = {a for a in range(lat.size)
           if a not in eset and lat.lt(a, r_inf[sig_inf[a]])}
    if g_c | g_first != set(range(lat.size)) or g_c & g_first:
        raise InternalConsistencyError("G and its complement do not partition T")
    zeta = {}
    for t in sorted(g_first):
        if t in eset:
            zeta[t] = sum(1 << i for i, e in enumerate(emb) if lat.le(t, e))
        else:
            s = sig_inf[t]
            zeta[t] = sum(1 << i for i, e in enumerate(emb) if lat.lt(s, e))
    return GData(poset, emb, r_inf, sig_inf, tuple(sorted(lam)), tuple(sorted(g_hat)),
                 tuple(sorted(g_first)), tuple(sorted(g_sharp)), tuple(sorted(g_c)), zeta)


def reduction_sequence(lat: Lattice, a: int, gdata: GData | None = None) -> list[int]:
    """a < σ(a) < ... < σ^r(a) < b with b = r∞σ∞(a), for a outside G."""
    gdata = gdata or compute_g(lat)
    if a not in gdata.g_complement:
        raise InputError(f"{lat.label(a)!r} is not in the complement of G")
    b = gdata.r_inf[gdata.sigma_inf[a]]
    seq = [a]
    cur = a
    while True:
        nxt = lat.sigma_table[cur]
        if lat.le(b, nxt):
            break
        if not lat.irreducible_mask >> nxt & 1:
            raise InternalConsistencyError(f"reduction step {nxt} is not irreducible")
        seq.append(nxt)
        cur = nxt
    seq.append(b)
    return seq


def ideal_lattice_g_size(p: Poset) -> int:
    """|G| for T = I↓(p), working directly on ideals as bitmasks.

    Irreducibles of I↓ are the principal ideals; r drops the unique maximal
    element of an ideal (if there is one); σ intersects the principal ideals
    strictly containing it.
    """
    n = p.size
    full = (1 << n) - 1
    principal = p.down
    strict_down = p.strict_down

    def r(d: int) -> int:
        maxima = [m for m in bits(d) if not any(strict_down[v] >> m & 1 for v in bits(d))]
        return d & ~(1 << maxima[0]) if len(maxima) == 1 else d

    def sigma(d: int) -> int:
        acc = full
        for e in range(n):
            pe = principal[e]
            if pe & d == d and pe != d:
                acc &= pe
        return acc

    def fix(step: Callable[[int], int], d: int) -> int:
        while True:
            nxt = step(d)
            if nxt == d:
                return d
            d = nxt

    sharp = sum(1 for d in down_ideals(p) if fix(r, fix(sigma, d)) == d)
    return n + sharp


# -- distributivity and retractions ------------------------------------------

def _distributive_by_ideals(lat: Lattice) -> bool:
    poset, emb = irreducibles(lat)
    images = {lat.join_all(emb[i] for i in bits(d)) for d in down_ideals(poset)}
    return len(down_ideals(poset)) == lat.size and len(images) == lat.size


def _distributive_by_identity(lat: Lattice) -> bool:
    n = lat.size
    return all(lat.meet(x, lat.join(y, z)) == lat.join(lat.meet(x, y), lat.meet(x, z))
               for x in range(n) for y in range(n) for z in range(n))


def is_distributive(lat: Lattice) -> bool:
    """Whether the join map I↓(Irr T) -> T is a bijection; cross-checked
    against the distributive identity on all triples."""
    by_ideals = _distributive_by_ideals(lat)
    if by_ideals != _distributive_by_identity(lat):
        raise InternalConsistencyError("distributivity criteria disagree")
    return by_ideals


def split_surjection(lat: Lattice, embed: Sequence[int], a_lat: Lattice) -> tuple[int, ...]:
    """A join-preserving retraction T -> A of an injective join-preserving A -> T."""
    if len(embed) != a_lat.size:
        raise InputError("embedding must give one image per element of A")
    if len(set(embed)) != len(embed):
        raise InputError("embedding is not injective")
    for a in range(a_lat.size):
        for b in range(a_lat.size):
            if embed[a_lat.join(a, b)] != lat.join(embed[a], embed[b]):
                raise InputError(f"embedding does not preserve the join of {a} and {b}")
    if not is_distributive(a_lat):
        raise InputError("source lattice is not distributive")
    pi = tuple(a_lat.meet_all(a for a in range(a_lat.size) if lat.le(t, embed[a]))
               for t in range(lat.size))
    if any(pi[embed[a]] != a for a in range(a_lat.size)):
        raise InternalConsistencyError("retraction is not a left inverse")
    for s in range(lat.size):
        for t in range(lat.size):
            if pi[lat.join(s, t)] != a_lat.join(pi[s], pi[t]):
                raise InternalConsistencyError("retraction does not preserve joins")
    return pi


def parse_lattice(text: str) -> Lattice:
    from .poset import parse_poset
    return validate_lattice(parse_poset(text))
