"""Finite posets: validation, ideals, automorphisms, canonical forms, census.

A poset on ``{0..n-1}`` is stored as ``up[a]``, the bitmask of all ``b`` with
``a <= b`` (row ``a`` of the order matrix).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import factorial
from typing import Iterator, Sequence

from .correspondence import bits
from .errors import GuardError, InputError

MAX_ENUMERATION_SIZE = 8


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Poset:
    size: int
    up: tuple[int, ...]

    def le(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.up[a] >> b & 1)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.size
        for a, row in enumerate(self.up):
            for b in bits(row):
                down[b] |= 1 << a
        return tuple(down)

    @cached_property
    def strict_up(self) -> tuple[int, ...]:
        return tuple(row & ~(1 << a) for a, row in enumerate(self.up))

    @cached_property
    def strict_down(self) -> tuple[int, ...]:
        return tuple(row & ~(1 << a) for a, row in enumerate(self.down))

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        # a < b implies a strictly smaller down-set
        return tuple(sorted(range(self.size), key=lambda v: popcount(self.down[v])))

    def opposite(self) -> "Poset":
        return Poset(self.size, self.down)

    def to_matrix(self) -> list[list[int]]:
        return [[row >> b & 1 for b in range(self.size)] for row in self.up]

    def relabel(self, order: Sequence[int]) -> "Poset":
        """The poset whose element ``k`` is ``order[k]`` of this one."""
        pos = {v: k for k, v in enumerate(order)}
        up = []
        for v in order:
            up.append(sum(1 << pos[w] for w in bits(self.up[v])))
        return Poset(self.size, tuple(up))

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for a in range(self.size):
            for b in bits(self.strict_up[a]):
                if not self.strict_up[a] & self.strict_down[b]:
                    out.append((a, b))
        return out

    @classmethod
    def from_covers(cls, size: int, pairs: Sequence[tuple[int, int]]) -> "Poset":
        """Reflexive-transitive closure of ``pairs`` (a, b) meaning a <= b."""
        up = [1 << a for a in range(size)]
        for a, b in pairs:
            up[a] |= 1 << b
        changed = True
        while changed:
            changed = False
            for a in range(size):
                acc = up[a]
                for b in bits(up[a]):
                    acc |= up[b]
                if acc != up[a]:
                    up[a] = acc
                    changed = True
        return validate_poset([[row >> b & 1 for b in range(size)] for row in up])

    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls(n, tuple(((1 << n) - 1) & ~((1 << a) - 1) for a in range(n)))

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(n, tuple(1 << a for a in range(n)))


def validate_poset(matrix: Sequence[Sequence[int]]) -> Poset:
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise InputError("order matrix must be square")
    up = tuple(sum(1 << b for b in range(n) if matrix[a][b]) for a in range(n))
    for a in range(n):
        if not up[a] >> a & 1:
            raise InputError(f"not reflexive: ({a}, {a}) missing")
    for a in range(n):
        for b in bits(up[a]):
            if b != a and up[b] >> a & 1:
                raise InputError(f"not antisymmetric: ({a}, {b}) and ({b}, {a})")
    for a in range(n):
        for b in bits(up[a]):
            missing = up[b] & ~up[a]
            if missing:
                c = next(bits(missing))
                raise InputError(
                    f"not transitive: ({a}, {b}) and ({b}, {c}) but not ({a}, {c})")
    return Poset(n, up)


def _closed_sets(n: int, above: Sequence[int], order: Sequence[int]) -> list[int]:
    """All S with v in S implying above[v] within S.

    ``order`` must list every v after all elements of above[v].
    """
    sets = [0]
    for v in order:
        need = above[v]
        sets += [s | 1 << v for s in sets if s & need == need]
    return sets


def down_ideals(p: Poset) -> list[int]:
    """Lower ideals as bitmasks, sorted by (size, mask)."""
    ideals = _closed_sets(p.size, p.strict_down, p.linear_extension)
    return sorted(ideals, key=lambda m: (popcount(m), m))


def up_ideals(p: Poset) -> list[int]:
    ideals = _closed_sets(p.size, p.strict_up, p.linear_extension[::-1])
    return sorted(ideals, key=lambda m: (popcount(m), m))


def down_ideal_lattice(p: Poset):
    """The lattice of lower ideals under inclusion; labels are the ideal masks."""
    from .lattice import lattice_from_sets
    return lattice_from_sets(down_ideals(p), p.size)


def up_ideal_lattice(p: Poset):
    return down_ideal_lattice(p.opposite())


# -- automorphisms and isomorphisms --------------------------------------------

@dataclass(frozen=True)
class PermGroup:
    degree: int
    elements: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity(self) -> tuple[int, ...]:
        return tuple(range(self.degree))

    @staticmethod
    def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
        """``p`` after ``q``."""
        return tuple(p[i] for i in q)

    @staticmethod
    def inverse(p: Sequence[int]) -> tuple[int, ...]:
        inv = [0] * len(p)
        for i, v in enumerate(p):
            inv[v] = i
        return tuple(inv)

    def is_group(self) -> bool:
        members = set(self.elements)
        if self.identity() not in members or len(members) != len(self.elements):
            return False
        return all(self.compose(a, b) in members and self.inverse(a) in members
                   for a in self.elements for b in self.elements)


def _invariant_colors(p: Poset) -> list[int]:
    """Isomorphism-invariant vertex colors, refined until stable.

    The first key is depth (longest chain below), so listing vertices by
    color gives a linear extension.
    """
    n = p.size
    down, up = p.strict_down, p.strict_up
    depth = [0] * n
    for v in p.linear_extension:
        depth[v] = max((depth[u] + 1 for u in bits(down[v])), default=0)
    height = [0] * n
    for v in reversed(p.linear_extension):
        height[v] = max((height[u] + 1 for u in bits(up[v])), default=0)
    sig = [(depth[v], height[v], popcount(down[v]), popcount(up[v])) for v in range(n)]
    colors = _rank(sig)
    ncolors = len(set(colors))
    while ncolors < n:
        sig = [(colors[v],
                tuple(sorted(colors[u] for u in bits(down[v]))),
                tuple(sorted(colors[u] for u in bits(up[v]))))
               for v in range(n)]
        new = _rank(sig)
        count = len(set(new))
        if count == ncolors:
            break
        colors, ncolors = new, count
    return colors


def _rank(sig: list) -> list[int]:
    table = {s: i for i, s in enumerate(sorted(set(sig)))}
    return [table[s] for s in sig]


def automorphisms(p: Poset) -> PermGroup:
    n = p.size
    colors = _invariant_colors(p)
    up, down = p.up, p.down
    found: list[tuple[int, ...]] = []
    image = [-1] * n

    def extend(v: int, used: int) -> None:
        if v == n:
            found.append(tuple(image))
            return
        for w in range(n):
            if used >> w & 1 or colors[w] != colors[v]:
                continue
            ok = True
            for u in range(v):
                iu = image[u]
                if (up[u] >> v & 1) != (up[iu] >> w & 1) or \
                        (down[u] >> v & 1) != (down[iu] >> w & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                extend(v + 1, used | 1 << w)
        image[v] = -1

    extend(0, 0)
    return PermGroup(n, tuple(sorted(found)))


def find_isomorphism(p: Poset, q: Poset) -> tuple[int, ...] | None:
    """Plain backtracking search for f with a <= b iff f(a) <= f(b)."""
    if p.size != q.size:
        return None
    n = p.size
    if sorted(map(popcount, p.up)) != sorted(map(popcount, q.up)):
        return None
    image = [-1] * n

    def extend(v: int, used: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used >> w & 1:
                continue
            if popcount(p.up[v]) != popcount(q.up[w]):
                continue
            if all(p.le(u, v) == q.le(image[u], w) and p.le(v, u) == q.le(w, image[u])
                   for u in range(v)):
                image[v] = w
                if extend(v + 1, used | 1 << w):
                    return True
        image[v] = -1
        return False

    return tuple(image) if extend(0, 0) else None


@dataclass(frozen=True)
class CanonicalData:
    key: tuple        # (size, code); equal iff isomorphic
    order: tuple[int, ...]
    aut_order: int
    poset: Poset


def canonical_data(p: Poset) -> CanonicalData:
    """Minimal code over invariant-respecting orderings, with |Aut| as a by-product.

    Vertices are placed cell by cell (cells ordered by invariant color).  The
    code of an ordering lists, for each position k, the mask of earlier
    positions strictly below it; the lexicographically least code is found
    level by level, keeping every prefix that ties.  Twins (equal strict up-
    and down-sets) are interchangeable, so only their index order is tried.
    The surviving orderings are exactly the optimal ones up to twin swaps,
    hence |Aut| = survivors * prod(|twin class|!).
    """
    n = p.size
    colors = _invariant_colors(p)
    down = p.strict_down
    twin_prev = [-1] * n
    seen: dict[tuple[int, int], int] = {}
    class_size: dict[tuple[int, int], int] = {}
    for v in range(n):
        k = (down[v], p.strict_up[v])
        if k in seen:
            twin_prev[v] = seen[k]
        seen[k] = v
        class_size[k] = class_size.get(k, 0) + 1
    twin_factor = 1
    for s in class_size.values():
        twin_factor *= factorial(s)

    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colors[v], []).append(v)
    pos_color = sorted(colors)

    prefixes: list[tuple[tuple[int, ...], int]] = [((), 0)]
    code = []
    for k in range(n):
        cands = cells[pos_color[k]]
        best = -1
        nxt: list[tuple[tuple[int, ...], int]] = []
        for order, used in prefixes:
            for v in cands:
                if used >> v & 1:
                    continue
                tp = twin_prev[v]
                if tp >= 0 and not used >> tp & 1:
                    continue
                dv = down[v]
                inc = 0
                for j, u in enumerate(order):
                    if dv >> u & 1:
                        inc |= 1 << j
                if best < 0 or inc < best:
                    best = inc
                    nxt = [(order + (v,), used | 1 << v)]
                elif inc == best:
                    nxt.append((order + (v,), used | 1 << v))
        code.append(best)
        prefixes = nxt
    order = prefixes[0][0]
    return CanonicalData((n, tuple(code)), order, len(prefixes) * twin_factor,
                         p.relabel(order))


def canonical_form(p: Poset) -> Poset:
    return canonical_data(p).poset


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return canonical_data(p).key == canonical_data(q).key


# -- enumeration ---------------------------------------------------------------

def labeled_posets(e: int) -> Iterator[Poset]:
    """All partial orders on {0..e-1}: every antisymmetric strict relation,
    filtered by transitivity."""
    pairs = [(i, j) for i in range(e) for j in range(i + 1, e)]
    for states in product(range(3), repeat=len(pairs)):
        strict = [0] * e
        for (i, j), s in zip(pairs, states):
            if s == 1:
                strict[i] |= 1 << j
            elif s == 2:
                strict[j] |= 1 << i
        if all(strict[j] & ~strict[i] == 0
               for i in range(e) for j in bits(strict[i])):
            yield Poset(e, tuple(strict[i] | 1 << i for i in range(e)))


def _extensions(parent: Poset) -> list[CanonicalData]:
    """Children obtained by adding a new minimal element below an up-ideal."""
    n = parent.size
    out = []
    for ideal in up_ideals(parent):
        child = Poset(n + 1, parent.up + (ideal | 1 << n,))
        out.append(canonical_data(child))
    return out


_CENSUS: dict[int, tuple[tuple[Poset, int], ...]] = {}


def _census(e: int, workers: int) -> tuple[tuple[Poset, int], ...]:
    if e in _CENSUS:
        return _CENSUS[e]
    found: dict[tuple, CanonicalData] = {}
    if e <= 5:
        for p in labeled_posets(e):
            cd = canonical_data(p)
            found.setdefault(cd.key, cd)
    else:
        parents = [p for p, _ in _census(e - 1, workers)]
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=workers) as pool:
                batches = list(pool.map(_extensions, parents, chunksize=16))
        else:
            batches = map(_extensions, parents)
        for batch in batches:
            for cd in batch:
                found.setdefault(cd.key, cd)
    result = tuple((found[k].poset, found[k].aut_order) for k in sorted(found))
    _CENSUS[e] = result
    return result


def enumerate_posets(e: int, workers: int = 1) -> list[tuple[Poset, int]]:
    """One canonical representative per isomorphism class of posets on e
    points, with |Aut|, sorted by canonical code.  Results are cached."""
    if e < 0:
        raise InputError("size must be non-negative")
    if e > MAX_ENUMERATION_SIZE:
        raise GuardError(f"poset enumeration is limited to e <= {MAX_ENUMERATION_SIZE}")
    return list(_census(e, max(1, workers)))


def labeled_count(e: int) -> int:
    """Number of labeled posets, from the census: sum of e!/|Aut|."""
    return sum(factorial(e) // aut for _, aut in enumerate_posets(e))


def parse_poset(text: str) -> Poset:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty poset file")
    try:
        e = int(lines[0])
    except ValueError:
        raise InputError("first line must be the size e") from None
    body = lines[1:]
    if len(body) != e:
        raise InputError(f"expected {e} rows, found {len(body)}")
    matrix = []
    for line in body:
        if len(line) != e or set(line) - {"0", "1"}:
            raise InputError(f"bad row {line!r}")
        matrix.append([c == "1" for c in line])
    return validate_poset(matrix)


def format_poset(p: Poset) -> str:
    rows = ["".join(str(v) for v in row) for row in p.to_matrix()]
    return "\n".join([str(p.size)] + rows) + "\n"
