"""Closed-form dimensions: fundamental functors, simple modules, the radical."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import InputError, InternalConsistencyError
from .lattice import ideal_lattice_g_size
from .poset import Poset, automorphisms, enumerate_posets


def dim_fundamental(e: int, g: int, x: int) -> int:
    """Count of maps from an x-set to a g-set whose image contains a fixed e-subset."""
    if g < e:
        raise InputError(f"|G| = {g} is smaller than |E| = {e}")
    if e < 0 or x < 0:
        raise InputError("sizes must be non-negative")
    return sum((-1) ** i * comb(e, i) * (g - i) ** x for i in range(e + 1))


@dataclass(frozen=True)
class SimpleModuleDescriptor:
    poset: Poset
    aut_order: int
    g_size: int
    dim_v: int = 1

    def __post_init__(self):
        if self.dim_v < 1:
            raise InputError("dim V must be at least 1")
        if factorial(self.poset.size) % self.aut_order:
            raise InputError("|Aut| must divide |E|!")
        if self.g_size < self.poset.size:
            raise InputError("|G| cannot be smaller than |E|")

    @classmethod
    def of(cls, poset: Poset, dim_v: int = 1) -> "SimpleModuleDescriptor":
        return cls(poset, automorphisms(poset).order, ideal_lattice_g_size(poset), dim_v)


def dim_simple(d: SimpleModuleDescriptor, x: int) -> int:
    e = d.poset.size
    if x < e:
        return 0
    fund = dim_fundamental(e, d.g_size, x)
    if fund % d.aut_order:
        raise InternalConsistencyError(
            f"|Aut| = {d.aut_order} does not divide the fundamental rank {fund}")
    return fund // d.aut_order * d.dim_v


@dataclass(frozen=True)
class TableRow:
    e: int
    poset: Poset
    aut_order: int
    g_size: int
    inner_sum: int
    total: int


def _row(p: Poset, aut: int, n: int) -> TableRow:
    g = ideal_lattice_g_size(p)
    s = dim_fundamental(p.size, g, n)
    if (s * s) % aut:
        raise InternalConsistencyError(f"{s}^2 is not divisible by |Aut| = {aut}")
    return TableRow(p.size, p, aut, g, s, s * s // aut)


def example_table(n: int, workers: int = 1) -> list[TableRow]:
    """One row per isomorphism class of posets with at most n points."""
    rows = []
    for e in range(n + 1):
        for p, aut in enumerate_posets(e, workers):
            rows.append(_row(p, aut, n))
    return rows


def radical_dim(n: int, workers: int = 1) -> int:
    """2^(n²) minus the sum over poset classes of (fundamental rank)² / |Aut|."""
    if n < 0:
        raise InputError("n must be non-negative")
    total = Fraction(0)
    for row in example_table(n, workers):
        total += Fraction(row.inner_sum ** 2, row.aut_order)
    if total.denominator != 1:
        raise InternalConsistencyError(f"semisimple part {total} is not an integer")
    return 2 ** (n * n) - int(total)


def poset_label(p: Poset) -> str:
    """Cover relations as 'a<b' pairs; '-' for no relations, 'empty' for the empty poset."""
    if p.size == 0:
        return "empty"
    covers = p.covers()
    return ",".join(f"{a}<{b}" for a, b in covers) if covers else "-"


TABLE_FIELDS = ("e", "poset", "aut", "g", "sum", "total")


def table_records(rows: list[TableRow]) -> list[dict]:
    return [{"e": r.e, "poset": poset_label(r.poset), "aut": r.aut_order,
             "g": r.g_size, "sum": str(r.inner_sum), "total": str(r.total)}
            for r in rows]


def table_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE_FIELDS, lineterminator="\n")
    w.writeheader()
    for rec in table_records(rows):
        w.writerow(rec)
    return buf.getvalue()


def table_json(rows: list[TableRow]) -> str:
    recs = table_records(rows)
    grand = sum(r.total for r in rows)
    return json.dumps({"rows": recs, "grand_total": str(grand)}, sort_keys=True)
