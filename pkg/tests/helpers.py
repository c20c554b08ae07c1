"""Shared test data: a corpus of small lattices and brute-force references."""

from functools import lru_cache
from itertools import permutations

from corrfun.catalog import EXAMPLE_LATTICES, builtin_lattice
from corrfun.errors import InputError
from corrfun.lattice import validate_lattice
from corrfun.poset import Poset, canonical_data, enumerate_posets


@lru_cache(maxsize=None)
def small_lattices(max_inner: int = 5):
    """Every lattice with at most max_inner + 2 elements, up to isomorphism.

    A finite lattice with at least two elements is a poset with a bottom and
    a top adjoined, so we try every poset of size <= max_inner.
    """
    found = {}
    for k in range(max_inner + 1):
        for p, _ in enumerate_posets(k):
            n = k + 2
            up = [(1 << n) - 1]
            up += [(p.up[i] << 1) | 1 << (n - 1) for i in range(k)]
            up.append(1 << (n - 1))
            try:
                lat = validate_lattice(Poset(n, tuple(up)))
            except InputError:
                continue
            found.setdefault(canonical_data(lat.as_poset()).key, lat)
    return [found[key] for key in sorted(found)]


def example_lattices():
    return [(name, builtin_lattice(name)) for name in EXAMPLE_LATTICES]


def brute_automorphism_count(p):
    return sum(1 for s in permutations(range(p.size))
               if all(p.le(a, b) == p.le(s[a], s[b]) for a in range(p.size) for b in range(p.size)))


def matrix_code(p, perm):
    """Order matrix of p relabelled by perm, flattened to a bit tuple."""
    return tuple(int(p.le(perm[a], perm[b])) for a in range(p.size) for b in range(p.size))


def brute_canonical(p):
    return min(matrix_code(p, perm) for perm in permutations(range(p.size)))
