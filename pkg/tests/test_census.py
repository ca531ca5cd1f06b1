import json
from fractions import Fraction

import pytest

from rhpp.census import (
    FAMILY,
    GOLDEN_TUPLES,
    CensusConfig,
    enumerate_configs,
    enumerate_tuples,
    e_orb,
    evaluate_case,
    format_table,
    make_case,
    run_census,
    six_point_case,
)
from rhpp.report import dumps
from rhpp.singularity import Dihedral
from rhpp.hjcf import HJString


def _brute_tuples(cap=50):
    out = []

    def rec(prefix, lo, acc):
        if len(prefix) == 5:
            if acc >= 2:
                out.append(tuple(prefix))
            return
        for q in range(lo, cap + 1):
            # entries are sorted: this one and the rest add at most (5 - len) / q
            if acc + Fraction(5 - len(prefix), q) < 2:
                break
            rec(prefix + [q], q, acc + Fraction(1, q))

    rec([], 2, Fraction(0))
    return sorted(out)


def test_tuples_golden():
    assert enumerate_tuples() == GOLDEN_TUPLES


def test_tuples_against_bruteforce():
    brute = _brute_tuples()
    concrete = {t for t in enumerate_tuples() if t[-1] != FAMILY}
    family = [t for t in brute if t[:4] == (2, 2, 2, 2)]
    assert len(family) == 49
    assert set(brute) - set(family) == concrete


def test_excluded_tuple():
    assert sum(Fraction(1, q) for q in (2, 2, 2, 3, 7)) < 2
    assert (2, 2, 2, 3, 7) not in enumerate_tuples()


@pytest.mark.parametrize("orders,value", [((2, 2, 2, 4, 4), 0), ((2,) * 5, Fraction(1, 2)), ((2,) * 6, 0), ((2, 2, 3, 3, 3), 0)])
def test_e_orb(orders, value):
    assert e_orb(orders) == value


def _labels(t, cfg=CensusConfig()):
    return sorted(make_case(t, c).label for c in enumerate_configs(t, cfg))


def test_configs_of_2_2_2_4_4():
    assert _labels((2, 2, 2, 4, 4)) == ["3A1+2A3", "3A1+2diag(-4)", "3A1+A3+diag(-4)"]


def test_configs_of_2_2_3_3_3():
    assert _labels((2, 2, 3, 3, 3)) == ["2A1+2A2+diag(-3)", "2A1+3A2", "2A1+3diag(-3)", "2A1+A2+2diag(-3)"]


def test_config_counts_per_tuple():
    assert len(_labels((2, 2, 2, 3, 5))) == 6
    assert len(_labels((2, 2, 2, 3, 4))) == 4
    assert len(_labels((2, 2, 2, 3, 3))) == 3
    assert len(_labels((2, 2, 2, 3, 6))) == 4


def test_family_includes_dihedral_of_order_12():
    cfg = CensusConfig(max_q=12)
    configs = enumerate_configs((2, 2, 2, 2, 12), cfg)
    assert any(Dihedral(2, HJString((2, 2))) in c for c in configs)


def _evaluate(t, label, cfg=CensusConfig()):
    for c in enumerate_configs(t, cfg):
        case = make_case(t, c)
        if case.label == label:
            return evaluate_case(case, cfg)
    raise LookupError(label)


@pytest.mark.parametrize(
    "t,label,det",
    [
        ((2, 2, 3, 3, 3), "2A1+3diag(-3)", 540),
        ((2, 2, 3, 3, 3), "2A1+A2+2diag(-3)", 396),
        ((2, 2, 3, 3, 3), "2A1+2A2+diag(-3)", 252),
        ((2, 2, 3, 3, 3), "2A1+3A2", 108),
        ((2, 2, 2, 4, 4), "3A1+2diag(-4)", 768),
        ((2, 2, 2, 4, 4), "3A1+A3+diag(-4)", 384),
    ],
)
def test_square_exclusions_with_printed_determinants(t, label, det):
    case = _evaluate(t, label)
    assert case.exclusion == "square_index"
    assert abs(case.filters["square_index"]["details"]["det"]) == det


def test_negative_ks2_exclusion():
    case = _evaluate((2, 2, 2, 3, 6), "3A1+A2+A5")
    assert case.exclusion == "ks2_negative" and case.ks2 == -1 == case.ks2_surface


@pytest.mark.parametrize(
    "t,label,kind",
    [
        ((2, 2, 2, 3, 5), "3A1+A2+diag(-5)", "finite_index_embed"),
        ((2, 2, 2, 3, 5), "3A1+A2+A4", "equal_rank_embed"),
        ((2, 2, 2, 3, 3), "3A1+2A2", "finite_index_embed"),
    ],
)
def test_lattice_exclusions(t, label, kind):
    case = _evaluate(t, label)
    assert case.intermediate and case.exclusion == kind


def test_enriques_configuration_survives():
    case = _evaluate((2, 2, 2, 4, 4), "3A1+2A3")
    assert case.verdict == "Survivor" and case.ks2 == 0
    assert any("Enriques" in a for a in case.annotations)


def test_case_invariants_hold():
    cfg = CensusConfig(max_q=30)
    for t in GOLDEN_TUPLES[1:]:
        for c in enumerate_configs(t, cfg):
            case = make_case(t, c)
            assert case.ks2 == case.ks2_surface - sum(case.dp2_list)
            assert case.e_orb == 3 - sum(1 - Fraction(1, q) for q in t)
            evaluate_case(case, cfg)
            if case.verdict == "Survivor":
                assert all(f.get("result") in ("pass", "NotObstructed") for f in case.filters.values())


def test_six_point_case():
    case = evaluate_case(six_point_case(), CensusConfig())
    assert case.e_orb == 0 and case.ks2 == 3
    assert case.exclusion == "square_index"
    assert abs(case.filters["square_index"]["details"]["det"]) == 192


def test_config_validation():
    with pytest.raises(ValueError):
        CensusConfig(max_q=7)
    with pytest.raises(ValueError):
        CensusConfig(max_len=5)
    with pytest.raises(ValueError):
        CensusConfig(format="xml")


def test_small_report(small_report):
    s = small_report["summary"]
    assert s["golden_ok"], s["golden"]
    assert s["survivors_lattice"] == ["3A1+2A3", "4A1+D5"]
    assert s["survivors_final"] == ["3A1+2A3"]


def test_report_is_deterministic(small_report):
    again = run_census(CensusConfig(max_q=40, max_len=12, sweep_len=8))
    assert dumps(again) == dumps(small_report)
    ids = [c["case_id"] for c in small_report["cases"]]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)


def test_rationals_serialized_as_strings(small_report):
    text = dumps(small_report)
    data = json.loads(text)
    assert all(isinstance(c["ks2"], str) for c in data["cases"])
    assert data["six_point"]["ks2"] == "3"


def test_without_nef():
    r = run_census(CensusConfig(max_q=20, max_len=10, nef=False, sweep_len=8))
    s = r["summary"]
    assert "bmy_window" not in s["exclusions"]
    assert s["golden_ok"]
    # the concrete tuples never relied on the window
    assert "3A1+2A3" in s["survivors_lattice"]


def test_format_table(small_report):
    text = format_table(small_report)
    assert "survivors (final): 3A1+2A3" in text
    assert "golden checks: pass" in text


def test_dihedral_family_exclusions(default_report):
    dihedral = [c for c in default_report["cases"] if c["family"] and c["config"][-1].startswith("D")]
    dihedral = [c for c in dihedral if not c["config"][-1].startswith("diag")]
    assert dihedral
    for c in dihedral:
        if c["config"][-1] == "D5":
            assert c["verdict"] == "Survivor"
        else:
            assert c["exclusion"] == "bmy_window"
