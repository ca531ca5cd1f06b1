from fractions import Fraction

import pytest

from rhpp import padic
from rhpp.hjcf import tau
from rhpp.lattice import diagonalize, direct_sum, extend_by_K, named, parse_lattice
from rhpp.obstruction import (
    enriques_disc_analysis,
    equal_rank_embed_test,
    finite_index_embed_test,
    is_square,
    square_index_test,
    squarefree_part,
    t6_epsilon_sweep,
)
from rhpp._kernels import eps3_chain


def lat(spec):
    return parse_lattice(spec)[0]


def test_square_helpers():
    assert is_square(0) and is_square(576) and not is_square(540)
    assert squarefree_part(-64) == 1
    assert squarefree_part(540) == 15
    assert squarefree_part(-24 * 16) == 6


@pytest.mark.parametrize("spec", ["4A1+A5", "4A1+HJ[3,2,2,2,2,3]"])
def test_equal_rank_obstructed_at_three(spec):
    v = equal_rank_embed_test(lat(spec))
    assert v.obstructed and v.place == 3
    assert v.result == "Obstructed"


def test_equal_rank_survivors():
    for spec in ("3A1+2A3", "4A1+D5"):
        v = equal_rank_embed_test(lat(spec))
        assert not v.obstructed and v.result == "NotObstructed"


@pytest.mark.parametrize(
    "N",
    [
        named("E8"),
        direct_sum(named("E7"), named("A1")),
        direct_sum(named("E6"), named("A2")),
        direct_sum(named("A1"), named("A1")),
        *[named(f"D{n}") for n in range(4, 12)],
        *[direct_sum(named(f"A{n}"), named(f"diag({-(n + 1)})")) for n in range(1, 10)],
        direct_sum(named("E8"), named("E8")),
    ],
    ids=str,
)
def test_equal_rank_never_blocks_genuine_embeddings(N):
    # each N here sits with finite index in a negative definite odd or even unimodular
    # lattice of the same rank, so N + <1> embeds in I(1, m)
    assert not equal_rank_embed_test(N).obstructed


def test_equal_rank_rejects_indefinite():
    with pytest.raises(ValueError):
        equal_rank_embed_test(named("H"))


def test_epsilon_of_a4_configuration():
    f = diagonalize(lat("3A1+A2+A4"))
    assert padic.epsilon_p(f, 3) == -1
    assert equal_rank_embed_test(lat("3A1+A2+A4")).obstructed


def test_epsilon_h_plus_e8():
    assert padic.epsilon_p(diagonalize(direct_sum(named("H"), named("E8"))), 3) == 1
    assert padic.epsilon_p(diagonalize(named("E8")), 3) == 1


@pytest.mark.parametrize("spec", ["3A1+A2+diag(-5)", "3A1+2A2"])
def test_finite_index_obstructed(spec):
    ext = extend_by_K(lat(spec))
    assert padic.epsilon_p(diagonalize(ext.lattice), 3) == -1
    assert square_index_test(ext).obstructed is False
    v = finite_index_embed_test(ext)
    assert v.obstructed and v.place == 3


def test_square_test_error_path_with_perturbed_k():
    ext = extend_by_K(lat("3A1+2A2"), k_sq=1)
    v = square_index_test(ext)
    assert v.obstructed and abs(v.details["det"]) == 72
    assert finite_index_embed_test(ext).obstructed


@pytest.mark.parametrize("spec,k_sq,det", [("2A1+3diag(-3)", None, 540), ("6A1", 3, 192)])
def test_square_test_failures(spec, k_sq, det):
    v = square_index_test(extend_by_K(lat(spec), k_sq=k_sq))
    assert v.obstructed and v.reason == f"|det| = {det} is not a square"


def test_square_test_rejects_trivial_extension():
    with pytest.raises(ValueError):
        square_index_test(extend_by_K(lat("3A1+2A3")))
    with pytest.raises(ValueError):
        finite_index_embed_test(extend_by_K(lat("3A1+2A3")))


def test_square_equivalence_with_det_product():
    for spec in ("2A1+3diag(-3)", "3A1+A2+diag(-5)", "2A1+2diag(-3)+A2", "3A1+diag(-4)+A3"):
        ext = extend_by_K(lat(spec))
        prod = abs(ext.base.det * ext.ks2)
        expect = prod.denominator == 1 and is_square(int(prod))
        assert square_index_test(ext).obstructed is not expect


def test_t6_seed_signs():
    seed = (3, 2, 2, 2, 2, 3)
    assert eps3_chain(seed) == 1
    assert eps3_chain(tau(seed).entries) == -1


def test_t6_sweep_passes():
    report = t6_epsilon_sweep(12)
    assert report["strings"] == 127 and report["failed"] == 0
    assert report["closure"] == "by induction lemma, step verified computationally"
    assert t6_epsilon_sweep(12, backend="python") == report
    with pytest.raises(ValueError):
        t6_epsilon_sweep(5)


def test_enriques_analysis():
    r = enriques_disc_analysis()
    assert sorted(r["invariant_factors"]) == [2, 2, 2, 2, 4]
    assert r["q_order4_generator"] == Fraction(-5, 4)
    assert r["q_e_sum"] == 0 and r["norm_e_sum"] == -2
    assert r["q_e1_e2"] == -1
    assert r["count"] == 3 and r["all_contain_e_sum"]
    assert r["exclusion_kind"] == "cited-geometric"


def test_verdict_serialization():
    d = equal_rank_embed_test(lat("4A1+A5")).as_dict()
    assert d["result"] == "Obstructed" and d["place"] == 3
    assert "3" in {str(k) for k in d["details"]["places"]}
