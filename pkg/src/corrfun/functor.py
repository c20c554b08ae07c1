"""Evaluations of F_T and of the fundamental functor at a finite set X.

A map X -> T is a tuple of element indices of T.  Linear combinations of such
maps are :class:`FormalMapSum` objects with integer coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .correspondence import Correspondence, bits
from .errors import GuardError, InputError, InternalConsistencyError
from .lattice import GData, Lattice, compute_g, reduction_sequence
from .poset import PermGroup

Map = tuple[int, ...]

MAX_TERMS = 10 ** 6


@dataclass
class FormalMapSum:
    """Integer combination of maps from a set of ``domain_size`` points to T."""

    domain_size: int
    terms: dict[Map, int] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {m: c for m, c in self.terms.items() if c}
        if len(self.terms) > MAX_TERMS:
            raise GuardError(f"formal sum exceeds {MAX_TERMS} terms")

    @classmethod
    def of(cls, m: Sequence[int], coeff: int = 1) -> "FormalMapSum":
        return cls(len(m), {tuple(m): coeff})

    @classmethod
    def identity(cls, size: int) -> "FormalMapSum":
        return cls.of(range(size))

    def __eq__(self, other) -> bool:
        return (isinstance(other, FormalMapSum) and self.domain_size == other.domain_size
                and self.terms == other.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{m}" for m, c in sorted(self.terms.items()))
        return f"FormalMapSum({body or '0'})"

    def __add__(self, other: "FormalMapSum") -> "FormalMapSum":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return FormalMapSum(self.domain_size, terms)

    def __neg__(self) -> "FormalMapSum":
        return FormalMapSum(self.domain_size, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "FormalMapSum") -> "FormalMapSum":
        return self + (-other)

    def __mul__(self, k: int) -> "FormalMapSum":
        return FormalMapSum(self.domain_size, {m: k * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.terms)

    def values(self) -> set[int]:
        return {t for m in self.terms for t in m}

    def compose(self, other: "FormalMapSum") -> "FormalMapSum":
        """``self ∘ other`` for self a combination of maps T -> T."""
        terms: dict[Map, int] = {}
        for f, a in self.terms.items():
            for g, b in other.terms.items():
                h = tuple(f[t] for t in g)
                terms[h] = terms.get(h, 0) + a * b
                if len(terms) > MAX_TERMS:
                    raise GuardError(f"formal sum exceeds {MAX_TERMS} terms")
        return FormalMapSum(other.domain_size, terms)


def ft_action(u: Correspondence, phi: Sequence[int], lat: Lattice) -> Map:
    """(Uφ)(y): join of φ(x) over the x related to y (0̂ if there are none)."""
    if u.source_size != len(phi):
        raise InputError(f"correspondence has source size {u.source_size}, map has {len(phi)} points")
    return tuple(lat.join_all(phi[x] for x in bits(row)) for row in u.rows)


def ft_action_sum(u: Correspondence, v: FormalMapSum, lat: Lattice) -> FormalMapSum:
    terms: dict[Map, int] = {}
    for phi, c in v.terms.items():
        img = ft_action(u, phi, lat)
        terms[img] = terms.get(img, 0) + c
    return FormalMapSum(u.target_size, terms)


def bracket_map(seq: Sequence[int], size: int) -> Map:
    """[a_0, ..., a_n]: a_j goes to a_{j+1} for j < n, everything else is fixed."""
    if len(set(seq)) != len(seq):
        raise InputError(f"bracket sequence {tuple(seq)} repeats an element")
    if len(seq) < 2:
        raise InputError("bracket sequence needs at least two elements")
    out = list(range(size))
    for j in range(len(seq) - 1):
        out[seq[j]] = seq[j + 1]
    return tuple(out)


def u_element(lat: Lattice, gdata: GData, a: int) -> FormalMapSum:
    """Alternating sum of the brackets along the reduction sequence of a."""
    seq = reduction_sequence(lat, a, gdata)
    terms = {}
    for j in range(1, len(seq)):
        terms[bracket_map(seq[:j + 1], lat.size)] = (-1) ** (j - 1)
    return FormalMapSum(lat.size, terms)


def u_elements(lat: Lattice, gdata: GData) -> list[FormalMapSum]:
    return [u_element(lat, gdata, a) for a in gdata.g_complement]


def u_total(lat: Lattice, gdata: GData) -> FormalMapSum:
    """u_{a_1} ∘ u_{a_2} ∘ ... over the complement of G in ascending order."""
    total = FormalMapSum.identity(lat.size)
    for u in u_elements(lat, gdata):
        total = total.compose(u)
    return total


def image_mask(m: Sequence[int]) -> int:
    acc = 0
    for t in m:
        acc |= 1 << t
    return acc


def pi_project(v: FormalMapSum, e_mask: int) -> FormalMapSum:
    """Keep the maps whose image contains every element of ``e_mask``."""
    return FormalMapSum(v.domain_size, {
        m: c for m, c in v.terms.items()
        if e_mask & ~image_mask(m) == 0})


@dataclass(frozen=True)
class BasisIndex:
    maps: tuple[Map, ...]
    positions: Mapping[Map, int]

    def __len__(self) -> int:
        return len(self.maps)


def enumerate_basis(lat: Lattice, gdata: GData, x: int) -> BasisIndex:
    """All φ: X -> T with E ⊆ φ(X) ⊆ G, in tuple order."""
    e_mask = gdata.e_mask
    maps = []
    if len(gdata.embedding) <= x:
        for m in product(gdata.g, repeat=x):
            if e_mask & ~image_mask(m) == 0:
                maps.append(m)
    return BasisIndex(tuple(maps), {m: i for i, m in enumerate(maps)})


class Evaluator:
    """Normal forms π(u_T ∘ v) for one lattice, with the u_a precomputed."""

    def __init__(self, lat: Lattice, gdata: GData | None = None, u_override=None):
        self.lat = lat
        self.gdata = gdata or compute_g(lat)
        self.us = u_override if u_override is not None else u_elements(lat, self.gdata)

    def reduce(self, v: FormalMapSum) -> FormalMapSum:
        """u_T ∘ v, applying the innermost u_a first."""
        for u in reversed(self.us):
            v = u.compose(v)
        return v

    def normal_form(self, v: FormalMapSum | Sequence[int], basis: BasisIndex) -> dict[int, int]:
        if not isinstance(v, FormalMapSum):
            v = FormalMapSum.of(v)
        w = pi_project(self.reduce(v), self.gdata.e_mask)
        coords = {}
        for m, c in w.terms.items():
            pos = basis.positions.get(m)
            if pos is None:
                raise InternalConsistencyError(f"normal form left the basis at {m}")
            coords[pos] = c
        return coords


def normal_form(lat: Lattice, v: FormalMapSum | Sequence[int],
                basis: BasisIndex | None = None, gdata: GData | None = None) -> dict[int, int]:
    """Coordinates of π(u_T ∘ v) over the basis B_X."""
    ev = Evaluator(lat, gdata)
    if basis is None:
        x = v.domain_size if isinstance(v, FormalMapSum) else len(v)
        basis = enumerate_basis(lat, ev.gdata, x)
    return ev.normal_form(v, basis)


# -- automorphisms and orbits ------------------------------------------------

def extend_automorphism(lat: Lattice, gdata: GData, perm: Sequence[int]) -> Map:
    """Extend an automorphism of (E, R) to T by t -> join of the images of
    the irreducibles below t."""
    emb = gdata.embedding
    out = []
    for t in range(lat.size):
        out.append(lat.join_all(emb[perm[i]] for i, e in enumerate(emb) if lat.le(e, t)))
    if sorted(out) != list(range(lat.size)) or any(
            lat.le(s, t) != lat.le(out[s], out[t]) for s in range(lat.size) for t in range(lat.size)):
        raise InputError(f"automorphism {tuple(perm)} does not extend to T")
    return tuple(out)


@dataclass(frozen=True)
class OrbitBasis:
    basis: BasisIndex
    group: PermGroup                     # automorphisms of (E, R)
    extended: tuple[Map, ...]            # the same, acting on T
    representatives: tuple[int, ...]     # basis positions, ascending
    orbit_of: tuple[tuple[int, int], ...]  # position -> (rep number, group index) with map = rep·σ

    @property
    def orbit_count(self) -> int:
        return len(self.representatives)


def _inverse(p: Sequence[int]) -> Map:
    return PermGroup.inverse(p)


def orbit_basis(lat: Lattice, gdata: GData, basis: BasisIndex, aut: PermGroup) -> OrbitBasis:
    """Split B_X into orbits of the right action φ·σ = σ⁻¹∘φ; each must be free."""
    extended = tuple(extend_automorphism(lat, gdata, g) for g in aut.elements)
    inverses = [_inverse(s) for s in extended]
    orbit_of: list[tuple[int, int] | None] = [None] * len(basis)
    reps = []
    for pos, phi in enumerate(basis.maps):
        if orbit_of[pos] is not None:
            continue
        k = len(reps)
        reps.append(pos)
        for gi, inv in enumerate(inverses):
            img = tuple(inv[t] for t in phi)
            ipos = basis.positions.get(img)
            if ipos is None:
                raise InternalConsistencyError("automorphism moved a map out of the basis")
            if orbit_of[ipos] is not None:
                raise InputError(f"automorphism action is not free at {phi}")
            orbit_of[ipos] = (k, gi)
    return OrbitBasis(basis, aut, extended, tuple(reps), tuple(orbit_of))


def trivial_rep(aut: PermGroup) -> dict[Map, list[list[Fraction]]]:
    return {g: [[Fraction(1)]] for g in aut.elements}


def sign_rep(aut: PermGroup) -> dict[Map, list[list[Fraction]]]:
    def sign(p):
        s, seen = 1, set()
        for i in range(len(p)):
            if i in seen:
                continue
            j, length = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                length += 1
            s *= -1 if length % 2 == 0 else 1
        return s
    return {g: [[Fraction(sign(g))]] for g in aut.elements}


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def check_representation(aut: PermGroup, vrep: Mapping[Map, list[list[Fraction]]]) -> int:
    """Verify vrep(στ) = vrep(σ)vrep(τ); return dim V."""
    if set(vrep) != set(aut.elements):
        raise InputError("representation must give a matrix for every automorphism")
    dims = {len(m) for m in vrep.values()} | {len(r) for m in vrep.values() for r in m}
    if len(dims) != 1:
        raise InputError("representation matrices must be square of a common size")
    for s in aut.elements:
        for t in aut.elements:
            if _matmul(vrep[s], vrep[t]) != [[Fraction(v) for v in row]
                                             for row in vrep[PermGroup.compose(s, t)]]:
                raise InputError(f"not a homomorphism at ({s}, {t})")
    return dims.pop()


def relation_matrix(u: Correspondence, ob: OrbitBasis, ev: Evaluator,
                    vrep: Mapping[Map, list[list[Fraction]]] | None = None,
                    checked: bool = False) -> list[list[Fraction]]:
    """Matrix of U on the span of rep ⊗ v_j, indexed (rep, j) row-major.

    U·(φ ⊗ v) = π(u_T ∘ Uφ) ⊗ v, and a basis map ψ = rep·σ contributes
    rep ⊗ vrep(σ)v.
    """
    if vrep is None:
        vrep = trivial_rep(ob.group)
        d = 1
    elif checked:
        d = len(next(iter(vrep.values())))
    else:
        d = check_representation(ob.group, vrep)
    elements = ob.group.elements
    size = ob.orbit_count * d
    out = [[Fraction(0)] * size for _ in range(size)]
    for col_rep, pos in enumerate(ob.representatives):
        phi = ob.basis.maps[pos]
        image = ft_action(u, phi, ev.lat)
        for bpos, c in ev.normal_form(image, ob.basis).items():
            k, gi = ob.orbit_of[bpos]
            block = vrep[elements[gi]]
            for i in range(d):
                row = out[k * d + i]
                for j in range(d):
                    if block[i][j]:
                        row[col_rep * d + j] += c * block[i][j]
    return out


@dataclass
class SimpleModule:
    """S_{E,R,V}(X) realised on the orbit basis, with T = I↓(E, R)."""

    lattice: Lattice
    evaluator: Evaluator
    orbits: OrbitBasis
    vrep: dict
    dim_v: int

    @property
    def dimension(self) -> int:
        return self.orbits.orbit_count * self.dim_v

    def matrix(self, u: Correspondence) -> list[list[Fraction]]:
        return relation_matrix(u, self.orbits, self.evaluator, self.vrep, checked=True)


def simple_module(poset, x: int, vrep=None) -> SimpleModule:
    from .poset import automorphisms, down_ideal_lattice
    lat = down_ideal_lattice(poset)
    ev = Evaluator(lat)
    aut = automorphisms(ev.gdata.irr)
    basis = enumerate_basis(lat, ev.gdata, x)
    ob = orbit_basis(lat, ev.gdata, basis, aut)
    if vrep is None:
        vrep = trivial_rep(aut)
    d = check_representation(aut, vrep)
    return SimpleModule(lat, ev, ob, dict(vrep), d)


def matrix_product(a, b):
    if not a:
        return []
    return _matmul(a, b)
