from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhpp import linalg
from rhpp.hjcf import (
    HJString,
    classify,
    discrepancies,
    dp_squared_cyclic,
    generate_Td,
    hj_det,
    hj_expand,
    hj_value,
    reverse,
    t_invariant,
    tau,
    td_seed,
    tridiagonal_gram,
)

strings = st.lists(st.integers(2, 9), min_size=1, max_size=12).map(lambda e: HJString(tuple(e)))
long_strings = st.lists(st.integers(2, 9), min_size=2, max_size=12).map(lambda e: HJString(tuple(e)))


def test_determinants_of_seed():
    s = HJString((3, 2, 2, 2, 2, 3))
    assert (s.q, s.q1, s.ql, s.q1l) == (24, 11, 11, 5)
    assert hj_value(s) == Fraction(24, 11)


def test_single_entry_conventions():
    s = HJString((5,))
    assert (s.q, s.q1, s.ql, s.q1l) == (5, 1, 1, 1)
    assert t_invariant(s) == -3


def test_rejects_small_entries():
    with pytest.raises(ValueError):
        HJString((2, 1))
    with pytest.raises(ValueError):
        HJString(())


def test_hj_det_deletions_match_bareiss():
    s = HJString((3, 2, 4, 2, 5))
    gram = tridiagonal_gram(s.entries)
    for deleted in ([], [1], [5], [1, 5], [3], [2, 4]):
        keep = [i for i in range(5) if i + 1 not in deleted]
        sub = [[gram[i][j] for j in keep] for i in keep]
        assert hj_det(s, deleted) == abs(linalg.det_int(sub))


def test_hj_det_bad_index():
    with pytest.raises(ValueError):
        hj_det([2, 3], [3])


@pytest.mark.parametrize("q,q1,expected", [(5, 2, (3, 2)), (5, 4, (2, 2, 2, 2)), (24, 11, (3, 2, 2, 2, 2, 3)), (7, 1, (7,))])
def test_expand(q, q1, expected):
    assert hj_expand(q, q1).entries == expected


@pytest.mark.parametrize("q,q1", [(6, 2), (5, 5), (5, 0)])
def test_expand_rejects(q, q1):
    with pytest.raises(ValueError):
        hj_expand(q, q1)


@given(strings)
def test_expand_roundtrip(s):
    assert hj_expand(s.q, s.q1) == s


def test_tau_example():
    assert tau([3, 3]).entries == (2, 3, 4)
    assert reverse([2, 3, 4]).entries == (4, 3, 2)


@given(strings)
def test_t_invariant_preserved(s):
    t = t_invariant(s)
    assert t_invariant(tau(s)) == t
    assert t_invariant(reverse(s)) == t


@given(long_strings)
def test_determinant_identity(s):
    assert s.q1 * s.ql == s.q1l * s.q + 1


def _solve_with_boundary(s, u=0, v=0):
    # intersection matrix M, right-hand side -(n - 2) with u in the first row and v in the last
    rhs = [Fraction(2 - n) for n in s.entries]
    rhs[0] -= u
    rhs[-1] -= v
    return linalg.solve(tridiagonal_gram(s.entries), rhs)


@given(strings)
def test_discrepancies_match_linear_solve(s):
    assert discrepancies(s) == _solve_with_boundary(s)


@given(long_strings, st.fractions(-3, 3), st.fractions(-3, 3))
def test_discrepancies_boundary_terms(s, u, v):
    assert discrepancies(s, u, v) == _solve_with_boundary(s, u, v)


@given(strings)
def test_cyclic_discrepancies_in_unit_interval(s):
    a = discrepancies(s)
    assert all(0 <= x < 1 for x in a)
    assert a[0] == 1 - Fraction(s.q1 + 1, s.q)


@given(strings)
def test_dp2_matches_discrepancy_sum(s):
    a = discrepancies(s)
    assert dp_squared_cyclic(s) == -sum(ai * (n - 2) for ai, n in zip(a, s.entries))


@pytest.mark.parametrize("s,expected", [([2], 0), ([4], -1), ([3, 2], Fraction(-2, 5))])
def test_dp2_examples(s, expected):
    assert dp_squared_cyclic(s) == expected


def test_classify_examples():
    assert str(classify([2, 2, 2])) == "RDP(A3)"
    c = classify([3, 2, 2, 2, 2, 3])
    assert c.kind == "T" and (c.witness.d, c.witness.n, c.witness.a) == (6, 2, 1)
    assert classify([4]).witness.d == 1
    assert classify([5]).kind == "Other"


@pytest.mark.parametrize("d", range(1, 9))
def test_seed_is_td(d):
    s = td_seed(d)
    c = classify(s)
    assert c.kind == "T" and c.witness.d == d
    assert sum(s.entries) == 3 * len(s) + 2 - d


def test_generate_td_counts_and_closure():
    t6 = generate_Td(6, 12)
    assert len(t6) == 127
    lengths = [len(s) for s in t6]
    assert lengths == sorted(lengths)
    members = set(t6)
    for s in t6:
        assert reverse(s) in members
        if len(s) < 12:
            assert tau(s) in members


def test_generate_td_too_short():
    with pytest.raises(ValueError):
        generate_Td(6, 5)


@settings(max_examples=200)
@given(st.integers(1, 8), st.integers(1, 6), st.integers(1, 6))
def test_td_witness_parametrization(d, n, a):
    # strings of T_d type are exactly the expansions of d n^2 / (d n a - 1)
    if not (n > a and gcd(n, a) == 1):
        return
    q, q1 = d * n * n, d * n * a - 1
    s = hj_expand(q, q1)
    c = classify(s)
    assert c.kind == "T" and (c.witness.d, c.witness.n, c.witness.a) == (d, n, a)


def test_generate_td_order_bound():
    full = generate_Td(6, 16)
    assert generate_Td(6, 16, max_q=400) == [s for s in full if s.q <= 400]
