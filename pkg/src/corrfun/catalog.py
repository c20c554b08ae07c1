"""Named posets and lattices used throughout the tests and the CLI."""

from __future__ import annotations

import re
from itertools import product

from .errors import InputError
from .lattice import Lattice, lattice_from_covers, lattice_from_sets
from .poset import Poset


def _poset(size, covers):
    return Poset.from_covers(size, covers)


POSETS = {
    "empty": lambda: Poset(0, ()),
    "point": lambda: Poset.chain(1),
    "chain2+point": lambda: _poset(3, [(0, 1)]),
    "V": lambda: _poset(3, [(0, 1), (0, 2)]),          # one minimum below two maxima
    "Lambda": lambda: _poset(3, [(0, 2), (1, 2)]),     # two minima below one maximum
    "N": lambda: _poset(4, [(0, 2), (1, 2), (1, 3)]),
}


def builtin_poset(name: str) -> Poset:
    m = re.fullmatch(r"(chain|antichain)(\d+)", name)
    if m:
        k = int(m.group(2))
        return Poset.chain(k) if m.group(1) == "chain" else Poset.antichain(k)
    if name in POSETS:
        return POSETS[name]()
    raise InputError(f"unknown poset {name!r}; known: chainK, antichainK, {', '.join(POSETS)}")


def lozenge() -> Lattice:
    return lattice_from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)],
                               ["0", "a", "b", "1"])


def equality3() -> Lattice:
    """Bottom, three pairwise incomparable atoms, top."""
    return lattice_from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
                               ["0", "a", "b", "c", "1"])


def pentagon() -> Lattice:
    """0 < x < y < 1 and 0 < z < 1."""
    return lattice_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
                               ["0", "x", "y", "z", "1"])


def lattice_c() -> Lattice:
    """0 < c < a, b < 1."""
    return lattice_from_covers(5, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)],
                               ["0", "c", "a", "b", "1"])


def lattice_c_op() -> Lattice:
    """0 < a, b < c < 1."""
    return lattice_from_covers(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)],
                               ["0", "a", "b", "c", "1"])


def product_lattice(m: int, n: int) -> Lattice:
    """Product of a chain with m elements and a chain with n elements."""
    elems = list(product(range(m), range(n)))
    covers = []
    for i, (a, b) in enumerate(elems):
        for j, (c, d) in enumerate(elems):
            if (c, d) in ((a + 1, b), (a, b + 1)):
                covers.append((i, j))
    return lattice_from_covers(len(elems), covers, [f"({a},{b})" for a, b in elems])


def boolean_lattice(k: int) -> Lattice:
    return lattice_from_sets(range(1 << k), k)


def chain_lattice(k: int) -> Lattice:
    return lattice_from_covers(k, [(i, i + 1) for i in range(k - 1)])


LATTICES = {
    "lozenge": lozenge,
    "equality-3": equality3,
    "M3": equality3,
    "diamond": pentagon,
    "D": pentagon,
    "pentagon": pentagon,
    "C": lattice_c,
    "C-op": lattice_c_op,
    "P": lambda: product_lattice(3, 2),
    "boolean-8": lambda: boolean_lattice(3),
}

# the lattices drawn in the worked examples, one name each
EXAMPLE_LATTICES = ("lozenge", "equality-3", "diamond", "C", "C-op", "P", "boolean-8")


def builtin_lattice(name: str) -> Lattice:
    m = re.fullmatch(r"chain(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return chain_lattice(int(m.group(1)))
    if name in LATTICES:
        return LATTICES[name]()
    raise InputError(f"unknown lattice {name!r}; known: chainK, {', '.join(LATTICES)}")
