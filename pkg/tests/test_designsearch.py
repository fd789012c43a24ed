"""Design search oracles on the eight-, 36-, and 144-point actions."""

import math

import pytest

from flagsieve.designsearch import (
    DesignRecord,
    hypothesis_filter,
    korbit_designs,
    load_design,
    save_design,
    set_stabilizer,
    stabilizer_search,
    verify_design,
)
from flagsieve.permgroup import PermAction, builtin_action
from flagsieve.sieve import DesignParams

PARAMS_36_SYM = DesignParams(36, 36, 21, 21, 12)
PARAMS_36_QUASI = DesignParams(36, 48, 28, 21, 16)
PARAMS_144 = DesignParams(144, 144, 78, 78, 42)


# -- k-orbit enumeration


def test_korbit_pgl2_7_k4():
    records = korbit_designs(builtin_action("pgl2_7"), 4)
    assert [rec.params.as_tuple() for rec in records] == [
        (8, 28, 14, 4, 6),
        (8, 42, 21, 4, 9),
    ]
    assert all(rec.flag_transitive for rec in records)
    kept = hypothesis_filter(records)
    assert [rec.params.as_tuple() for rec in kept] == [
        (8, 28, 14, 4, 6),
        (8, 42, 21, 4, 9),
    ]


def test_korbit_psl2_7_k4():
    records = korbit_designs(builtin_action("psl2_7"), 4)
    assert [rec.params.as_tuple() for rec in records] == [
        (8, 14, 7, 4, 3),
        (8, 14, 7, 4, 3),
        (8, 42, 21, 4, 9),
    ]
    assert all(rec.flag_transitive for rec in records)
    # the two 14-block orbits have (r, lambda) = 7, so gcd 1 fails the bound
    kept = hypothesis_filter(records)
    assert [rec.params.as_tuple() for rec in kept] == [(8, 42, 21, 4, 9)]


def test_korbit_psl4_2_only_complete():
    records = korbit_designs(builtin_action("psl4_2"), 4)
    assert len(records) == 1
    only = records[0]
    assert only.params.as_tuple() == (8, 70, 35, 4, 15)
    assert only.params.b == math.comb(8, 4)
    assert only.flag_transitive
    assert hypothesis_filter(records) == ()


def test_korbit_block_sets_are_disjoint_partitions():
    records = korbit_designs(builtin_action("psl2_7"), 4)
    all_blocks = [b for rec in records for b in rec.blocks]
    assert len(all_blocks) == len(set(all_blocks)) == 70


def test_korbit_budget_and_range_guards():
    wheel = PermAction(40, [tuple((i + 1) % 40 for i in range(40))], label="c40")
    with pytest.raises(ValueError):
        korbit_designs(wheel, 20)
    with pytest.raises(ValueError):
        korbit_designs(builtin_action("psl2_7"), 1)
    with pytest.raises(ValueError):
        korbit_designs(builtin_action("psl2_7"), 9)


# -- setwise stabilizers


def test_set_stabilizer_orders():
    act = builtin_action("psl2_7")
    records = korbit_designs(act, 4)
    big = records[-1]
    stab, orbit_len = set_stabilizer(act, big.blocks[0])
    assert orbit_len == 42
    assert stab.order() == 4
    # Lagrange on an arbitrary 4-set
    stab2, orbit2 = set_stabilizer(act, {0, 1, 2, 3})
    assert stab2.order() * orbit2 == act.order()


# -- stabilizer search, positive controls


def test_stabilizer_search_recovers_pgl_design():
    act = builtin_action("pgl2_7")
    result = stabilizer_search(act, DesignParams(8, 28, 14, 4, 6))
    assert result.exhaustive
    assert len(result.designs) == 1
    korbit = korbit_designs(act, 4)
    assert result.designs[0].blocks == korbit[0].blocks
    names = [name for name, _ in result.certificate]
    assert "flag-stabilizer-candidates" in names
    assert "candidate-blocks" in names


def test_stabilizer_search_recovers_psl_design_block_route():
    # flag stabilizer is trivial here, exercising the block-stabilizer route
    act = builtin_action("psl2_7")
    result = stabilizer_search(act, DesignParams(8, 42, 21, 4, 9))
    assert result.exhaustive
    assert len(result.designs) == 1
    korbit = korbit_designs(act, 4)
    assert result.designs[0].blocks == korbit[-1].blocks
    names = [name for name, _ in result.certificate]
    assert "block-stabilizer-candidates" in names


def test_stabilizer_search_flag_count_infeasible():
    # 8 * 14 = 112 does not divide 168
    result = stabilizer_search(builtin_action("psl2_7"), DesignParams(8, 28, 14, 4, 6))
    assert result.designs == ()
    assert result.exhaustive
    assert result.certificate[0][0] == "flag-count"


def test_stabilizer_search_degree_mismatch():
    with pytest.raises(ValueError):
        stabilizer_search(builtin_action("psl2_7"), PARAMS_36_SYM)


# -- stabilizer search, 36-point eliminations


@pytest.mark.parametrize(
    "group,params,m,count",
    [
        ("psu3_3_36", PARAMS_36_SYM, 8, 1),
        ("psu3_3_36", PARAMS_36_QUASI, 6, 0),
        ("psu3_3_2_36", PARAMS_36_SYM, 16, 1),
        ("psu3_3_2_36", PARAMS_36_QUASI, 12, 0),
    ],
)
def test_unitary_36_searches(group, params, m, count):
    result = stabilizer_search(builtin_action(group), params)
    assert len(result.designs) == count
    assert result.exhaustive
    detail = dict(result.certificate)
    assert f"|G| / (v*r) = {m}" == detail["flag-stabilizer-order"]
    assert "complete enumeration" in detail["flag-stabilizer-candidates"]
    if count == 0:
        assert "no flag-transitive design" in detail["outcome"]


def test_unitary_36_symmetric_design_is_suborbit_neighborhoods():
    # the unique symmetric design found on 36 points is the orbit of the
    # size-21 suborbit: blocks are the neighborhoods in the rank-4 orbital
    # graph of valency 21, which has constant pair intersection 12
    act = builtin_action("psu3_3_36")
    result = stabilizer_search(act, PARAMS_36_SYM)
    assert len(result.designs) == 1
    design = result.designs[0]
    suborbit = next(
        orb for orb in sorted(act.point_stabilizer(0).orbits(), key=len)
        if len(orb) == 21
    )
    assert frozenset(suborbit) in set(design.blocks)
    report = verify_design(act, design.blocks, expect=PARAMS_36_SYM)
    assert report.ok and report.flag_transitive
    # the extension finds the same design in its own point labelling
    ext_act = builtin_action("psu3_3_2_36")
    ext = stabilizer_search(ext_act, PARAMS_36_SYM)
    assert len(ext.designs) == 1
    ext_suborbit = next(
        orb for orb in ext_act.point_stabilizer(0).orbits() if len(orb) == 21
    )
    assert frozenset(ext_suborbit) in set(ext.designs[0].blocks)


# -- stabilizer search, 144-point eliminations


def test_socle_144_flag_count_kill():
    result = stabilizer_search(builtin_action("psl3_3_144"), PARAMS_144)
    assert result.designs == ()
    assert result.exhaustive
    name, detail = result.certificate[0]
    assert name == "flag-count"
    assert "11232" in detail and "5616" in detail


def test_extension_144_search_empty():
    result = stabilizer_search(builtin_action("psl3_3_2_144"), PARAMS_144)
    assert result.designs == ()
    assert result.exhaustive
    detail = dict(result.certificate)
    assert "144 subgroups of order 78" in detail["block-stabilizer-candidates"]
    assert "1 conjugacy classes" in detail["block-stabilizer-candidates"]
    assert detail["candidate-blocks"] == "tested 5 orbit unions of size 78"


# -- verification


def test_verify_design_accepts_search_output():
    act = builtin_action("pgl2_7")
    rec = korbit_designs(act, 4)[1]
    report = verify_design(act, rec.blocks, expect=rec.params)
    assert report.ok
    assert report.flag_transitive
    assert report.params == rec.params
    assert report.problems == ()


def test_verify_design_rejects_tampering():
    act = builtin_action("pgl2_7")
    rec = korbit_designs(act, 4)[0]
    blocks = list(rec.blocks)
    blocks[0] = frozenset({0, 1, 2, 7})
    report = verify_design(act, blocks)
    assert not report.ok
    assert report.problems


def test_verify_design_flags_parameter_mismatch():
    act = builtin_action("pgl2_7")
    rec = korbit_designs(act, 4)[0]
    report = verify_design(act, rec.blocks, expect=DesignParams(8, 28, 14, 4, 7))
    assert not report.ok
    assert any("differ" in p for p in report.problems)


def test_verify_design_degenerate_inputs():
    act = builtin_action("psl2_7")
    assert not verify_design(act, []).ok
    assert not verify_design(act, [{0, 1, 2}, {0, 1}]).ok


def test_verify_design_rejects_non_invariant_set():
    act = builtin_action("psl2_7")
    blocks = [frozenset({0, 1, 2, 3}), frozenset({4, 5, 6, 7})]
    report = verify_design(act, blocks)
    assert not report.ok


# -- design files


def test_design_file_roundtrip(tmp_path):
    act = builtin_action("psl2_7")
    rec = korbit_designs(act, 4)[-1]
    path = tmp_path / "big.design"
    save_design(str(path), rec)
    group, params, blocks = load_design(str(path))
    assert group == "psl2_7"
    assert params == rec.params
    assert blocks == rec.blocks


def test_design_file_malformed(tmp_path):
    path = tmp_path / "bad.design"
    path.write_text("group psl2_7\n")
    with pytest.raises(ValueError):
        load_design(str(path))
    path.write_text("version 1\ngroup g\nparams 8 14 7 4\nblock 0 1 2 3\n")
    with pytest.raises(ValueError):
        load_design(str(path))
    path.write_text("version 1\ngroup g\nparams 8 14 7 4 3\nblock 0 1 2 3\n")
    with pytest.raises(ValueError):
        load_design(str(path))
