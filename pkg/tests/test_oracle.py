import random
from fractions import Fraction
from itertools import product

import pytest

from corrfun.catalog import builtin_lattice, chain_lattice, lozenge, pentagon
from corrfun.dimension import dim_fundamental
from corrfun.errors import GuardError, InputError, VerificationError
from corrfun.lattice import compute_g, irreducibles
from corrfun.oracle import (ExactMatrix, LinkContext, build_n_matrix, corrupt_u, linked,
                            rank_exact, rank_naive, verify_basis)
from corrfun.poset import Poset, down_ideal_lattice


def test_rank_basics():
    assert rank_exact(ExactMatrix.of([[1, 0], [0, 1]])) == 2
    assert rank_exact(ExactMatrix.of([[0, 0], [0, 0]])) == 0
    assert rank_exact(ExactMatrix([], 3)) == 0
    assert rank_exact(ExactMatrix.of([[1, 2], [2, 4]])) == 1
    assert rank_exact(ExactMatrix.of([[Fraction(1, 2), 1], [1, 2]])) == 1
    assert rank_exact(ExactMatrix.of([[Fraction(1, 3), 1], [1, Fraction(1, 2)]])) == 2


def test_rank_agrees_with_naive_elimination():
    rng = random.Random(1)
    for _ in range(300):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        m = ExactMatrix.of([[rng.randint(0, 1) for _ in range(c)] for _ in range(r)])
        assert rank_exact(m) == rank_naive(m)


def test_rank_permutation_invariant():
    rng = random.Random(4)
    for _ in range(50):
        rows = [[rng.randint(-2, 2) for _ in range(6)] for _ in range(5)]
        base = rank_exact(ExactMatrix.of(rows))
        rng.shuffle(rows)
        perm = list(range(6))
        rng.shuffle(perm)
        assert rank_exact(ExactMatrix.of([[row[j] for j in perm] for row in rows])) == base


def test_linked_examples():
    lat = lozenge()
    ctx = LinkContext(lat)
    emb = ctx.emb
    # φ is the inclusion of E, ψ sends each e to [e, ·[
    phi = emb
    psi = tuple(ctx.principal_up[i] for i in range(len(emb)))
    assert linked(ctx, phi, psi, debug=True)
    # E not contained in the image: never linked
    for psi in product(ctx.ideals, repeat=2):
        assert not linked(ctx, (emb[0], emb[0]), psi, debug=True)


def _all_conditions_agree(lat, x):
    ctx = LinkContext(lat)
    count = 0
    for phi in product(range(lat.size), repeat=x):
        for psi in product(ctx.ideals, repeat=x):
            e, d, f = ctx.linked_e(phi, psi), ctx.linked_d(phi, psi), ctx.linked_f(phi, psi)
            assert e == d == f, (phi, psi)
            count += e
    return count


def test_linking_conditions_agree_on_lozenge():
    assert _all_conditions_agree(lozenge(), 2) > 0


@pytest.mark.parametrize("name", ["C", "C-op", "diamond", "equality-3"])
def test_linking_conditions_agree_elsewhere(name):
    _all_conditions_agree(builtin_lattice(name), 2)


def test_linking_conditions_agree_at_three_points():
    _all_conditions_agree(chain_lattice(3), 3)
    _all_conditions_agree(builtin_lattice("P"), 2)


@pytest.mark.parametrize("poset, x, expected", [
    (Poset.antichain(2), 2, 2), (Poset.chain(2), 2, 2), (Poset.chain(1), 1, 1),
])
def test_n_ranks(poset, x, expected):
    n = build_n_matrix(down_ideal_lattice(poset), x)
    assert rank_exact(n.dense()) == expected


def test_n_guard():
    with pytest.raises(GuardError):
        build_n_matrix(builtin_lattice("boolean-8"), 4, guard_cells=1000)


def test_n_matrix_entries_are_linked():
    lat = builtin_lattice("C")
    n = build_n_matrix(lat, 2)
    ctx = n.ctx
    for phi in n.phis:
        for psi in product(ctx.ideals, repeat=2):
            hit = n.columns[phi] >> n.row_position(psi) & 1
            assert bool(hit) == ctx.linked_e(phi, psi)


@pytest.mark.parametrize("name, x", [
    ("lozenge", 2), ("lozenge", 3), ("chain3", 2), ("chain3", 3), ("boolean-8", 3),
    ("C", 3), ("C-op", 3), ("P", 3), ("equality-3", 3), ("diamond", 3),
])
def test_verify_instances(name, x):
    lat = builtin_lattice(name)
    report = verify_basis(lat, x)
    assert report.passed, report.to_json()
    g = compute_g(lat)
    assert report.basis_size == dim_fundamental(len(g.embedding), len(g.g), x)


def test_verify_pentagon_irreducibles():
    irr, _ = irreducibles(pentagon())
    report = verify_basis(down_ideal_lattice(irr), 3)
    assert report.passed
    assert "n_square" in report.checks


def test_verify_below_e_is_trivially_consistent():
    report = verify_basis(builtin_lattice("boolean-8"), 2)
    assert report.passed and report.basis_size == 0


def test_corrupted_u_is_caught():
    lat = builtin_lattice("boolean-8")
    report = verify_basis(lat, 3, u_override=corrupt_u(lat))
    assert not report.passed
    assert report.failures() == ["kernel_membership"]
    assert "witness" in report.checks["kernel_membership"].detail
    with pytest.raises(VerificationError):
        report.raise_if_failed()


def test_corrupt_needs_a_complement():
    with pytest.raises(InputError):
        corrupt_u(lozenge())


def test_rank_invariant_under_relabelling_x():
    lat = builtin_lattice("P")
    n = build_n_matrix(lat, 2)
    swapped = [phi[::-1] for phi in n.phis]
    assert rank_exact(n.dense()) == rank_exact(n.dense(swapped))


def test_report_json_is_deterministic():
    lat = lozenge()
    a = verify_basis(lat, 2).to_json(timings=False)
    b = verify_basis(lat, 2).to_json(timings=False)
    assert a == b and "timings" not in a
