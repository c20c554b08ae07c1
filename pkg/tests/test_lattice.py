import pytest

from corrfun.catalog import (EXAMPLE_LATTICES, boolean_lattice, builtin_lattice, chain_lattice,
                             equality3, lattice_c, lozenge, pentagon)
from corrfun.correspondence import bits
from corrfun.errors import InputError
from corrfun.lattice import (compute_g, ideal_lattice_g_size, irreducibles, is_distributive,
                             r_infty, reduction_sequence, sigma_infty, split_surjection,
                             validate_lattice)
from corrfun.poset import Poset, canonical_data, down_ideal_lattice, enumerate_posets, is_isomorphic

from helpers import example_lattices, small_lattices


def corpus():
    return [lat for _, lat in example_lattices()] + small_lattices(6)


def test_validate_lattice():
    chain = validate_lattice(Poset.chain(3))
    assert (chain.bottom, chain.top) == (0, 2)
    with pytest.raises(InputError, match="not a lattice"):
        validate_lattice([[1, 0], [0, 1]])
    with pytest.raises(InputError, match="not a lattice"):
        validate_lattice(Poset(0, ()))
    loz = validate_lattice([[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]])
    assert loz.bottom == 0 and loz.top == 3


def test_validate_lattice_witness_and_relabelling():
    # bottom listed last: elements get renumbered, labels follow
    lat = validate_lattice([[1, 0, 0], [1, 1, 0], [1, 1, 1]], labels=["t", "m", "b"])
    assert [lat.label(t) for t in range(3)] == ["b", "m", "t"]
    # two maximal elements over a common bottom
    with pytest.raises(InputError, match="'x' and 'y'"):
        validate_lattice([[1, 1, 1], [0, 1, 0], [0, 0, 1]], labels=["0", "x", "y"])


def _brute_join(lat, a, b):
    ups = [c for c in range(lat.size) if lat.le(a, c) and lat.le(b, c)]
    least = [c for c in ups if all(lat.le(c, d) for d in ups)]
    return least[0]


def _brute_meet(lat, a, b):
    downs = [c for c in range(lat.size) if lat.le(c, a) and lat.le(c, b)]
    return [c for c in downs if all(lat.le(d, c) for d in downs)][0]


@pytest.mark.parametrize("name", EXAMPLE_LATTICES)
def test_tables_match_bounds_and_laws(name):
    lat = builtin_lattice(name)
    n = range(lat.size)
    for a in n:
        assert lat.le(lat.bottom, a) and lat.le(a, lat.top)
        for b in n:
            j, m = lat.join_table[a][b], lat.meet_table[a][b]
            assert j == _brute_join(lat, a, b) == lat.join_table[b][a]
            assert m == _brute_meet(lat, a, b) == lat.meet_table[b][a]
            assert lat.join(a, lat.meet(a, b)) == a == lat.meet(a, lat.join(a, b))
            for c in n:
                assert lat.join(lat.join(a, b), c) == lat.join(a, lat.join(b, c))
                assert lat.meet(lat.meet(a, b), c) == lat.meet(a, lat.meet(b, c))
        assert lat.join(a, a) == a == lat.meet(a, a)


def test_irreducibles_of_examples():
    irr, emb = irreducibles(chain_lattice(4))
    assert emb == (1, 2, 3) and irr == Poset.chain(3)
    irr, _ = irreducibles(lozenge())
    assert irr == Poset.antichain(2)
    irr, emb = irreducibles(pentagon())
    assert is_isomorphic(irr, Poset.from_covers(3, [(0, 1)]))
    assert sorted(pentagon().label(e) for e in emb) == ["x", "y", "z"]


def test_irreducible_definition_by_lower_covers():
    for lat in corpus():
        for t in range(lat.size):
            below = [s for s in range(lat.size) if lat.lt(s, t)]
            maximal = [s for s in below if not any(lat.lt(s, u) for u in below)]
            assert (t in lat.irreducible_elements) == (t != lat.bottom and len(maximal) == 1)


def test_r_and_sigma_on_three_chain():
    lat = chain_lattice(3)
    assert lat.r_table == (0, 0, 1)
    assert r_infty(lat, 2) == 0 and sigma_infty(lat, 0) == 2
    assert lat.sigma_table[lat.top] == lat.top  # empty meet is the top


def test_r_and_sigma_properties():
    for lat in corpus():
        eset = set(lat.irreducible_elements)
        g = compute_g(lat)
        lam = set(g.lambda_e)
        for t in range(lat.size):
            assert r_infty(lat, t) not in eset
            assert (r_infty(lat, t) == t) == (t not in eset)
            if t in lam - eset:
                assert lat.sigma_table[t] == t == sigma_infty(lat, t)
            for s in range(lat.size):
                if lat.le(s, t):
                    assert lat.le(lat.r_table[s], lat.r_table[t])
                    assert lat.le(lat.sigma_table[s], lat.sigma_table[t])
                    assert lat.le(r_infty(lat, s), r_infty(lat, t))
        for e in eset:
            lo = r_infty(lat, e)
            interval = [t for t in range(lat.size) if lat.le(lo, t) and lat.le(t, e)]
            assert all(lat.le(a, b) or lat.le(b, a) for a in interval for b in interval)
            assert all(t in eset for t in interval if t != lo)
            # r∞(e) is the greatest non-irreducible below e
            below = [t for t in range(lat.size) if lat.le(t, e) and t not in eset]
            assert all(lat.le(t, lo) for t in below)


def test_g_of_examples():
    for m in range(1, 6):
        g = compute_g(chain_lattice(m + 1))
        assert g.g == tuple(range(m + 1)) and g.g_hat == (0,)
    assert len(compute_g(lozenge()).g) == 4
    boolean = boolean_lattice(3)
    g = compute_g(boolean)
    assert sorted(boolean.label(t) for t in g.g) == [0, 1, 2, 4, 7]


def test_g_hat_chains():
    for lat in corpus():
        g = compute_g(lat)
        for t in g.g_hat:
            e = g.sigma_inf[t]
            assert e in g.embedding
            chain = [t]
            while chain[-1] != e:
                chain.append(lat.sigma_table[chain[-1]])
            interval = [s for s in range(lat.size) if lat.le(t, s) and lat.le(s, e)]
            assert sorted(chain) == sorted(interval)
            assert all(lat.lt(a, b) for a, b in zip(chain, chain[1:]))


def test_zeta_injective_and_rho_leq():
    for lat in corpus():
        g = compute_g(lat)
        assert len(set(g.zeta.values())) == len(g.zeta)
        for t in g.g:
            wedge = lat.meet_all(g.embedding[i] for i in bits(g.zeta[t]))
            for s in range(lat.size):
                if not lat.le(s, wedge):
                    continue
                assert lat.le(g.r_inf[s], g.r_inf[t])
                assert lat.le(g.sigma_inf[s], g.sigma_inf[t])
                if not lat.le(s, t):
                    assert t in g.g_hat and t == g.r_inf[s]


def test_choice_of_lattice_does_not_change_g_size():
    assert len(compute_g(boolean_lattice(3)).g) == len(compute_g(equality3()).g) == 5
    assert len(compute_g(lozenge()).g) == len(compute_g(down_ideal_lattice(Poset.antichain(2))).g)
    for lat in small_lattices(6):
        irr, _ = irreducibles(lat)
        assert len(compute_g(lat).g) == ideal_lattice_g_size(irr)


def test_ideal_shortcut_matches_generic_g():
    for e in range(6):
        for p, _ in enumerate_posets(e):
            assert ideal_lattice_g_size(p) == len(compute_g(down_ideal_lattice(p)).g)


def test_reduction_sequences():
    seen_long = 0
    for lat in corpus():
        g = compute_g(lat)
        for a in g.g_complement:
            seq = reduction_sequence(lat, a, g)
            assert seq[0] == a and seq[-1] == g.r_inf[g.sigma_inf[a]]
            assert all(lat.lt(s, t) for s, t in zip(seq, seq[1:]))
            assert all(t in g.embedding for t in seq[1:-1])
            assert seq[-1] in g.g_sharp
            seen_long += len(seq) > 2
    assert seen_long > 0


def test_reduction_sequence_precondition():
    lat = chain_lattice(3)
    assert compute_g(lat).g_complement == ()
    with pytest.raises(InputError):
        reduction_sequence(lat, 1)


def test_product_lattice_sequence():
    lat = builtin_lattice("P")
    g = compute_g(lat)
    assert [lat.label(a) for a in g.g_complement] == ["(1,1)"]
    assert [lat.label(t) for t in reduction_sequence(lat, g.g_complement[0], g)] == ["(1,1)", "(2,1)"]


@pytest.mark.parametrize("name, expected", [
    ("lozenge", True), ("C", True), ("C-op", True), ("P", True),
    ("equality-3", False), ("diamond", False), ("boolean-8", True),
])
def test_distributivity(name, expected):
    assert is_distributive(builtin_lattice(name)) is expected


def test_split_surjection_identity():
    for name in ("lozenge", "C", "P"):
        lat = builtin_lattice(name)
        assert split_surjection(lat, tuple(range(lat.size)), lat) == tuple(range(lat.size))


def _embedding(lat, labels):
    return tuple(lat.labels.index(x) for x in labels)


def test_split_surjection_lozenge_inclusions():
    loz = lozenge()  # 0, a, b, 1
    c = lattice_c()
    pi = split_surjection(c, _embedding(c, ["0", "a", "b", "1"]), loz)
    assert pi[c.labels.index("c")] == loz.bottom
    d = pentagon()
    for atom in ("x", "y"):
        pi = split_surjection(d, _embedding(d, ["0", atom, "z", "1"]), loz)
        assert len(set(pi)) == 4


def test_split_surjection_errors():
    loz, d = lozenge(), pentagon()
    with pytest.raises(InputError, match="injective"):
        split_surjection(d, (0, 1, 1, 4), loz)
    with pytest.raises(InputError, match="join"):
        split_surjection(d, _embedding(d, ["0", "x", "y", "1"]), loz)
    m3 = equality3()
    with pytest.raises(InputError, match="distributive"):
        split_surjection(m3, tuple(range(5)), m3)


def test_g_partitions_t():
    for lat in corpus():
        g = compute_g(lat)
        assert sorted(g.g + g.g_complement) == list(range(lat.size))
        assert set(g.lambda_e).isdisjoint(g.g_hat)
        assert set(g.embedding).isdisjoint(g.g_sharp)


def test_canonical_corpus_is_duplicate_free():
    keys = [canonical_data(lat.as_poset()).key for lat in small_lattices(6)]
    assert len(keys) == len(set(keys)) == 299
