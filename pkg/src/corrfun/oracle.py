"""Brute-force certification of the basis B_X by exact linear algebra.

The kernel of F_T(X) -> 𝕊(X) is the null space of the 0/1 matrix N whose
rows are maps ψ: X -> I↑(E, R), whose columns are maps φ: X -> T, and whose
entry is 1 when φ and ψ are linked.  Everything the normal form claims can be
checked against N directly.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from .correspondence import Correspondence, bits, compose, gamma_of_map
from .errors import GuardError, InputError, InternalConsistencyError, VerificationError
from .functor import Evaluator, FormalMapSum, enumerate_basis, image_mask
from .lattice import GData, Lattice, compute_g
from .poset import up_ideals

DEFAULT_GUARD_CELLS = 10 ** 7
KERNEL_SAMPLE = 4000


@dataclass
class ExactMatrix:
    rows: list[list]
    ncols: int

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        return cls(rows, len(rows[0]) if rows else 0)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def submatrix(self, row_idx: Sequence[int] | None, col_idx: Sequence[int]) -> "ExactMatrix":
        rows = self.rows if row_idx is None else [self.rows[i] for i in row_idx]
        return ExactMatrix([[r[j] for j in col_idx] for r in rows], len(col_idx))


def _integer_rows(rows: list[list]) -> list[list[int]]:
    out = []
    for r in rows:
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in r):
            d = lcm(*(Fraction(v).denominator for v in r))
            r = [int(Fraction(v) * d) for v in r]
        else:
            r = [int(v) for v in r]
        if any(r):
            out.append(r)
    return out


def rank_exact(m: ExactMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination, first-nonzero pivots."""
    rows = _integer_rows(m.rows)
    ncols = m.ncols
    rank, prev, col = 0, 1, 0
    while rows and col < ncols:
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            col += 1
            continue
        p = rows.pop(piv)
        pv = p[col]
        nxt = []
        for r in rows:
            a = r[col]
            if a:
                nr = [0] * ncols
                for j in range(col + 1, ncols):
                    nr[j] = (pv * r[j] - a * p[j]) // prev
            else:
                nr = [0] * ncols
                for j in range(col + 1, ncols):
                    nr[j] = (pv * r[j]) // prev
            if any(nr):
                nxt.append(nr)
        rows, prev = nxt, pv
        rank += 1
        col += 1
    return rank


def rank_naive(m: ExactMatrix) -> int:
    """Row echelon over Fractions; deliberately plain, for cross-checking."""
    rows = [[Fraction(v) for v in r] for r in m.rows]
    rank = 0
    for col in range(m.ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# -- the linking relation ----------------------------------------------------

class LinkContext:
    """Per-lattice data for deciding whether φ: X -> T and ψ: X -> I↑(E, R)
    are linked.  Up-ideals are masks over the indices of E."""

    def __init__(self, lat: Lattice, gdata: GData | None = None):
        self.lat = lat
        self.gdata = gdata or compute_g(lat)
        self.irr = self.gdata.irr
        self.emb = self.gdata.embedding
        self.ideals = up_ideals(self.irr)
        self.ideal_index = {m: i for i, m in enumerate(self.ideals)}
        # irreducibles above each t, as a mask over E indices
        self.above = [sum(1 << i for i, e in enumerate(self.emb) if lat.le(t, e))
                      for t in range(lat.size)]
        self.principal_up = self.irr.up
        self.e_pos = {e: i for i, e in enumerate(self.emb)}

    def linked_e(self, phi: Sequence[int], psi: Sequence[int]) -> bool:
        """φ ≤ ∧ψ, and every e is hit by some x with ψ(x) = [e, ·["""
        if any(s & ~self.above[t] for t, s in zip(phi, psi)):
            return False
        for i, e in enumerate(self.emb):
            want = self.principal_up[i]
            if not any(t == e and s == want for t, s in zip(phi, psi)):
                return False
        return True

    def linked_d(self, phi: Sequence[int], psi: Sequence[int]) -> bool:
        """Γ_ψ^op Γ_φ equals R^op."""
        n = len(self.emb)
        g_phi = gamma_of_map(phi, self.lat)
        rows = [sum(1 << x for x, s in enumerate(psi) if s >> i & 1) for i in range(n)]
        g_psi_op = Correspondence(n, len(psi), tuple(rows))
        r_op = Correspondence(n, n, self.irr.down)
        return compose(g_psi_op, g_phi) == r_op

    def linked_f(self, phi: Sequence[int], psi: Sequence[int]) -> bool:
        """ψ(φ⁻¹(t)) inside [t, ·[ ∩ E for all t, and the union of ψ over
        φ⁻¹(e) is exactly [e, ·[ for e in E."""
        for t, s in zip(phi, psi):
            if s & ~self.above[t]:
                return False
        for i, e in enumerate(self.emb):
            union = 0
            for t, s in zip(phi, psi):
                if t == e:
                    union |= s
            if union != self.principal_up[i]:
                return False
        return True


def linked(ctx: LinkContext, phi: Sequence[int], psi: Sequence[int], debug: bool = False) -> bool:
    result = ctx.linked_e(phi, psi)
    if debug and not (result == ctx.linked_d(phi, psi) == ctx.linked_f(phi, psi)):
        raise InternalConsistencyError(f"linking conditions disagree at φ={phi}, ψ={psi}")
    return result


@dataclass
class NMatrix:
    """N stored by columns: column φ is a bitmask over row positions ψ."""

    ctx: LinkContext
    x: int
    phis: list[tuple[int, ...]]
    columns: dict[tuple[int, ...], int]
    nrows: int

    def row_position(self, psi: Sequence[int]) -> int:
        pos = 0
        for s in psi:
            pos = pos * len(self.ctx.ideals) + self.ctx.ideal_index[s]
        return pos

    def apply(self, v: FormalMapSum) -> dict[int, int]:
        out: dict[int, int] = {}
        for phi, c in v.terms.items():
            for r in bits(self.columns[phi]):
                out[r] = out.get(r, 0) + c
        return {r: c for r, c in out.items() if c}

    def dense(self, cols: Sequence[tuple[int, ...]] | None = None,
              rows: Sequence[int] | None = None) -> ExactMatrix:
        cols = self.phis if cols is None else cols
        masks = [self.columns[c] for c in cols]
        if rows is None:
            used = 0
            for m in masks:
                used |= m
            rows = list(bits(used))  # all-zero rows never affect rank
        return ExactMatrix([[m >> r & 1 for m in masks] for r in rows], len(cols))


def build_n_matrix(lat: Lattice, x: int, guard_cells: int = DEFAULT_GUARD_CELLS,
                   gdata: GData | None = None) -> NMatrix:
    ctx = LinkContext(lat, gdata)
    nrows = len(ctx.ideals) ** x
    ncols = lat.size ** x
    if nrows * ncols > guard_cells:
        raise GuardError(f"N would have {nrows} x {ncols} cells, above the guard {guard_cells}")
    k = len(ctx.ideals)
    allowed = [[s for s in ctx.ideals if not s & ~ctx.above[t]] for t in range(lat.size)]
    phis = list(product(range(lat.size), repeat=x))
    columns = {}
    e_mask = ctx.gdata.e_mask
    for phi in phis:
        col = 0
        if not e_mask & ~image_mask(phi):
            for psi in product(*(allowed[t] for t in phi)):
                if ctx.linked_e(phi, psi):
                    pos = 0
                    for s in psi:
                        pos = pos * k + ctx.ideal_index[s]
                    col |= 1 << pos
        columns[phi] = col
    return NMatrix(ctx, x, phis, columns, nrows)


# -- the verification report --------------------------------------------------

@dataclass
class CheckResult:
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class VerifyReport:
    x: int
    basis_size: int
    checks: dict[str, CheckResult]
    timings: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]

    def raise_if_failed(self) -> None:
        if not self.passed:
            name = self.failures()[0]
            raise VerificationError(f"check {name} failed: {self.checks[name].detail}")

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "basis_size": self.basis_size,
            "passed": self.passed,
            "checks": {k: {"passed": c.passed, **c.detail} for k, c in self.checks.items()},
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
        }

    def to_json(self, timings: bool = True) -> str:
        d = self.to_dict()
        if not timings:
            d.pop("timings")
        return json.dumps(d, sort_keys=True)


def _sample_maps(size: int, x: int, limit: int, seed: int = 0) -> list[tuple[int, ...]]:
    total = size ** x
    if total <= limit:
        return list(product(range(size), repeat=x))
    rng = random.Random(seed)
    return sorted({tuple(rng.randrange(size) for _ in range(x)) for _ in range(limit)})


def verify_basis(lat: Lattice, x: int, guard_cells: int = DEFAULT_GUARD_CELLS,
                 u_override: list[FormalMapSum] | None = None,
                 sample: int = KERNEL_SAMPLE) -> VerifyReport:
    """Run the four checks on B_X against the matrix N.

    ``u_override`` replaces the computed u_a (in the order of G^c), which is
    how a deliberately corrupted element is fed in as a negative control.
    """
    timings = {}
    t0 = time.perf_counter()
    gdata = compute_g(lat)
    ev = Evaluator(lat, gdata, u_override)
    basis = enumerate_basis(lat, gdata, x)
    n = build_n_matrix(lat, x, guard_cells, gdata)
    timings["build"] = time.perf_counter() - t0
    checks: dict[str, CheckResult] = {}
    bsize = len(basis)

    t0 = time.perf_counter()
    r_basis = rank_exact(n.dense(list(basis.maps)))
    checks["basis_independent"] = CheckResult(r_basis == bsize,
                                              {"rank": r_basis, "expected": bsize})
    r_full = rank_exact(n.dense())
    checks["rank_equals_basis"] = CheckResult(r_full == bsize,
                                              {"rank": r_full, "expected": bsize})
    timings["rank"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    kernel = CheckResult(True, {"tested": 0})
    maps = _sample_maps(lat.size, x, sample)
    tested = 0
    for a, u in zip(gdata.g_complement, ev.us):
        for phi in maps:
            v = FormalMapSum.of(phi) - u.compose(FormalMapSum.of(phi))
            tested += 1
            image = n.apply(v)
            if image:
                kernel = CheckResult(False, {"witness": {"a": a, "phi": list(phi)}})
                break
        if not kernel.passed:
            break
    if kernel.passed:
        kernel.detail["tested"] = tested
    checks["kernel_membership"] = kernel
    timings["kernel"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    zeta = gdata.zeta
    injective = len(set(zeta.values())) == len(zeta)
    rows = [n.row_position(tuple(zeta[t] for t in phi)) for phi in basis.maps]
    m = n.dense(list(basis.maps), rows)
    r_m = rank_exact(m) if bsize else 0
    checks["m_invertible"] = CheckResult(injective and r_m == bsize,
                                         {"rank": r_m, "size": bsize, "zeta_injective": injective})
    timings["m"] = time.perf_counter() - t0

    if lat.size == len(n.ctx.ideals):
        checks["n_square"] = CheckResult(n.nrows == len(n.phis),
                                         {"rows": n.nrows, "cols": len(n.phis)})
    return VerifyReport(x, bsize, checks, timings)


def corrupt_u(lat: Lattice, gdata: GData | None = None) -> list[FormalMapSum]:
    """The computed u_a with the leading coefficient of the first one doubled."""
    ev = Evaluator(lat, gdata)
    if not ev.us:
        raise InputError("the complement of G is empty; there is no u_a to corrupt")
    us = list(ev.us)
    first = us[0]
    m = min(first.terms)
    terms = dict(first.terms)
    terms[m] *= 2
    us[0] = FormalMapSum(first.domain_size, terms)
    return us
