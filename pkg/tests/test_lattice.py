from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhpp import padic
from rhpp.hjcf import generate_Td, tau
from rhpp.lattice import (
    diagonalize,
    direct_sum,
    disc_group,
    extend_by_K,
    is_cyclic_quotient,
    isotropic_subgroups,
    named,
    orthogonal_complement,
    overlattice,
    parse_lattice,
    tau_diagonal,
    tau_gram,
    tau_last_entry_closed,
)


@pytest.mark.parametrize(
    "name,det,rank",
    [("A1", -2, 1), ("A3", -4, 3), ("D4", 4, 4), ("D5", -4, 5), ("E6", 3, 6), ("E7", -2, 7), ("E8", 1, 8), ("H", -1, 2), ("I(1,6)", 1, 7), ("II(1,9)", -1, 10), ("diag(-5)", -5, 1)],
)
def test_named_determinants(name, det, rank):
    L = named(name)
    assert (L.det, L.rank) == (det, rank)


def test_named_properties():
    assert named("E8").is_even and named("E8").is_negative_definite
    assert named("II(1,9)").signature == (1, 9)
    assert not named("I(1,9)").is_even
    with pytest.raises(ValueError):
        named("E9")
    with pytest.raises(ValueError):
        named("II(1,10)")


def test_even_and_odd_unimodular_agree_rationally():
    assert padic.rationally_equivalent(diagonalize(named("II(1,9)")), diagonalize(named("I(1,9)")))
    assert padic.epsilon_p(diagonalize(named("II(1,9)")), 3) == 1


@pytest.mark.parametrize("m", range(1, 31))
def test_epsilon3_odd_unimodular(m):
    assert padic.epsilon_p(diagonalize(named(f"I(1,{m})")), 3) == 1


def test_direct_sum_and_parser():
    L, with_k = parse_lattice("4A1+D5")
    assert not with_k and L.rank == 9 and L.det == -64
    assert L == direct_sum(*[named("A1")] * 4, named("D5"), name="4A1+D5")
    L2, with_k = parse_lattice("3A1+A2+diag(-5)+K")
    assert with_k and L2.rank == 6
    M, _ = parse_lattice("4A1+HJ[3,2,2,2,2,3]")
    assert M.rank == 10 and M.det == 16 * 24
    with pytest.raises(ValueError):
        parse_lattice("+K")


@pytest.mark.parametrize(
    "spec,k_sq,det",
    [("2A1+3diag(-3)", None, -540), ("3A1+2A2", 1, 72), ("6A1", 3, 192), ("3A1+A2+diag(-5)", None, None)],
)
def test_extension_determinants(spec, k_sq, det):
    R, _ = parse_lattice(spec)
    ext = extend_by_K(R, k_sq=k_sq)
    assert not ext.numerically_trivial
    assert ext.det == R.det * ext.ks2
    if det is not None:
        assert abs(ext.det) == abs(det)


def test_numerically_trivial_extension():
    for spec in ("3A1+2A3", "4A1+A5", "4A1+D5"):
        ext = extend_by_K(parse_lattice(spec)[0])
        assert ext.numerically_trivial and ext.ks2 == 0
        with pytest.raises(ValueError):
            ext.det


def test_extension_rejects_indefinite():
    with pytest.raises(ValueError):
        extend_by_K(named("H"))


def _gram_schmidt(g):
    # classical orthogonalization over Q; returns the squared norms of the orthogonal vectors
    n = len(g)
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def ip(u, v):
        return sum(u[i] * g[i][j] * v[j] for i in range(n) for j in range(n))

    out, ortho = [], []
    for v in basis:
        w = list(v)
        for u, nu in zip(ortho, out):
            c = ip(v, u) / nu
            w = [a - c * b for a, b in zip(w, u)]
        ortho.append(w)
        out.append(ip(w, w))
    return out


long_strings = st.lists(st.integers(2, 7), min_size=2, max_size=10)


@given(long_strings)
def test_tau_diagonal_matches_orthogonalization(entries):
    assert tuple(tau_diagonal(entries).coefficients) == tuple(_gram_schmidt(tau_gram(entries).gram))
    # the reordered basis spans the same lattice as the standard tau string
    assert abs(tau_gram(entries).det) == tau(entries).q


def test_tau_diagonal_small_example():
    assert tuple(tau_diagonal([3, 3]).coefficients) == (-3, Fraction(-11, 3), Fraction(-18, 11))
    with pytest.raises(ValueError):
        tau_diagonal([4])


def test_tau_last_entry_closed_form_on_t6():
    from rhpp.hjcf import classify

    for s in generate_Td(6, 10):
        if len(s) < 2:
            continue
        w = classify(s).witness
        assert tau_diagonal(s).coefficients[-1] == tau_last_entry_closed(w.d, w.n, w.a)


def test_disc_group_of_4a1_d5():
    D = disc_group(parse_lattice("4A1+D5")[0])
    assert sorted(D.invariant_factors) == [2, 2, 2, 2, 4]
    assert D.order == 64 and D.min_generators == 5
    assert sorted(D.q_values) == sorted([Fraction(-1, 2)] * 4 + [Fraction(-5, 4)])


def _subgroup(D, gens):
    S = {D.zero()}
    frontier = [D.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = D.add(x, g)
            if y not in S:
                S.add(y)
                frontier.append(y)
    return frozenset(S)


def test_isotropic_subgroups_against_two_generator_oracle():
    D = disc_group(parse_lattice("4A1+D5")[0])
    elems = list(D.elements())
    oracle = set()
    for x, y in combinations_with_replacement(elems, 2):
        S = _subgroup(D, [x, y])
        if len(S) == 4 and all(D.q(s) == 0 for s in S):
            oracle.add(S)
    assert set(isotropic_subgroups(D, 4)) == oracle
    for S in oracle:
        perp = orthogonal_complement(D, S)
        assert perp >= S and len(perp) * len(S) == D.order


def test_cyclic_quotient_detection():
    D = disc_group(named("D5"))
    whole = frozenset(D.elements())
    assert is_cyclic_quotient(D, whole, frozenset([D.zero()]))
    D2 = disc_group(direct_sum(named("A1"), named("A1")))
    assert not is_cyclic_quotient(D2, frozenset(D2.elements()), frozenset([D2.zero()]))


def test_d8_overlattices_are_unimodular():
    D = disc_group(named("D8"))
    subs = isotropic_subgroups(D, 2)
    assert len(subs) == 2
    for A in subs:
        M = overlattice(named("D8"), A)
        assert abs(M.det) == 1 and M.is_even and M.rank == 8


def test_overlattice_rejects_anisotropic():
    D = disc_group(named("A1"))
    with pytest.raises(ValueError):
        overlattice(named("A1"), list(D.elements()))
