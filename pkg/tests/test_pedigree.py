"""Pedigree ingestion: JSON round-trips, validation rules, loop detection."""

import json

import pytest

from pedrisk.families import counseling_family, looped_family
from pedrisk.pedigree import (
    GeneticTestResult,
    Individual,
    Pedigree,
    PedigreeParseError,
    PedigreeValidationError,
    PhenotypeEvent,
    has_loop,
    load_pedigree,
    pedigree_from_dict,
    serialize_pedigree,
)

TRIO = {
    "individuals": [
        {"id": "dad", "sex": "M"},
        {"id": "mum", "sex": "F", "phenotype": {"kind": "affected", "age": 45}},
        {"id": "kid", "sex": "F", "father": "dad", "mother": "mum", "genotypes": ["00", "01"]},
    ],
    "tests": [{"id": "kid", "result": "negative", "sensitivity": 0.9, "specificity": 0.99}],
}


def test_parse_trio():
    ped = pedigree_from_dict(TRIO)
    assert len(ped) == 3
    assert ped["kid"].father_id == "dad"
    assert ped["mum"].phenotype == PhenotypeEvent("affected", 45.0)
    assert ped["kid"].genotype_constraint == frozenset({"00", "01"})
    assert ped.tests_for("kid")[0].observed == "negative"
    assert ped.founders() == {"dad", "mum"}
    assert "dad" in ped and "nobody" not in ped


def test_serialize_then_parse_is_identity():
    for ped in (pedigree_from_dict(TRIO), looped_family(), counseling_family(5)):
        again = pedigree_from_dict(serialize_pedigree(ped))
        assert again == ped


def test_load_accepts_text_bytes_path_and_stream(tmp_path):
    text = json.dumps(TRIO)
    path = tmp_path / "fam.json"
    path.write_text(text)
    expected = pedigree_from_dict(TRIO)
    assert load_pedigree(text) == expected
    assert load_pedigree(text.encode()) == expected
    assert load_pedigree(path) == expected
    with open(path, "rb") as fh:
        assert load_pedigree(fh) == expected


def test_load_rejects_malformed_json():
    with pytest.raises(PedigreeParseError):
        load_pedigree("{not json")


def test_unknown_keys_are_rejected_everywhere():
    with pytest.raises(PedigreeParseError):
        pedigree_from_dict({"individuals": [], "extra": 1})
    with pytest.raises(PedigreeParseError):
        pedigree_from_dict({"individuals": [{"id": "a", "age": 5}]})
    with pytest.raises(PedigreeParseError):
        pedigree_from_dict(
            {"individuals": [{"id": "a", "phenotype": {"kind": "affected", "age": 5, "x": 1}}]}
        )


def test_duplicate_id_is_rejected():
    with pytest.raises(PedigreeValidationError) as err:
        Pedigree((Individual("a"), Individual("a")))
    assert err.value.rule == "duplicate id"


def test_single_parent_is_rejected():
    with pytest.raises(PedigreeValidationError) as err:
        Pedigree((Individual("a", sex="M"), Individual("b", father_id="a", mother_id=None)))
    assert err.value.rule == "single parent"


def test_unknown_parent_is_rejected():
    with pytest.raises(PedigreeValidationError) as err:
        Pedigree((Individual("b", father_id="x", mother_id="y"),))
    assert err.value.rule == "unknown reference"


def test_parent_sex_is_checked():
    with pytest.raises(PedigreeValidationError) as err:
        Pedigree(
            (
                Individual("a", sex="F"),
                Individual("m", sex="F"),
                Individual("b", father_id="a", mother_id="m"),
            )
        )
    assert err.value.rule == "parent sex"


def test_unknown_sex_is_allowed_for_either_parent():
    ped = Pedigree(
        (
            Individual("a", sex="U"),
            Individual("m", sex="U"),
            Individual("b", father_id="a", mother_id="m"),
        )
    )
    assert ped["b"].father_id == "a"


def test_cyclic_ancestry_is_rejected():
    with pytest.raises(PedigreeValidationError) as err:
        pedigree_from_dict(
            {
                "individuals": [
                    {"id": "a", "sex": "M", "father": "c", "mother": "b"},
                    {"id": "b", "sex": "F"},
                    {"id": "c", "sex": "M", "father": "a", "mother": "b"},
                ]
            }
        )
    assert err.value.rule == "cyclic ancestry"


def test_empty_genotype_constraint_is_rejected():
    with pytest.raises(PedigreeValidationError) as err:
        Pedigree((Individual("a", genotype_constraint=frozenset()),))
    assert err.value.rule == "empty constraint"


def test_twin_groups_need_two_members_with_same_parents():
    base = (
        Individual("f", sex="M"),
        Individual("m", sex="F"),
    )
    with pytest.raises(PedigreeValidationError):
        Pedigree(base + (Individual("a", father_id="f", mother_id="m", twin_group="t"),))
    with pytest.raises(PedigreeValidationError):
        Pedigree(
            base
            + (
                Individual("m2", sex="F"),
                Individual("a", father_id="f", mother_id="m", twin_group="t"),
                Individual("b", father_id="f", mother_id="m2", twin_group="t"),
            )
        )
    ok = Pedigree(
        base
        + (
            Individual("a", father_id="f", mother_id="m", twin_group="t"),
            Individual("b", father_id="f", mother_id="m", twin_group="t"),
        )
    )
    assert ok["a"].twin_group == "t"


def test_test_for_unknown_individual_is_rejected():
    with pytest.raises(PedigreeValidationError):
        Pedigree(
            (Individual("a"),),
            (GeneticTestResult("ghost", "positive", 0.9, 0.9),),
        )


def test_phenotype_validation():
    with pytest.raises(PedigreeParseError):
        PhenotypeEvent("cured", 40.0)
    with pytest.raises(PedigreeParseError):
        PhenotypeEvent("affected", -1.0)


def test_with_phenotype_and_with_constraint_return_new_pedigrees():
    ped = pedigree_from_dict(TRIO)
    censored = ped.with_phenotype("kid", PhenotypeEvent("unaffected", 30.0))
    assert ped["kid"].phenotype is None
    assert censored["kid"].phenotype.age == 30.0
    narrowed = ped.with_constraint("kid", {"00"})
    assert narrowed["kid"].genotype_constraint == frozenset({"00"})
    with pytest.raises(PedigreeValidationError):
        ped.with_phenotype("ghost", None)


def test_loop_detection():
    assert not has_loop(pedigree_from_dict(TRIO))
    assert has_loop(looped_family())
    assert not has_loop(counseling_family(6))
    # Two disconnected trios: still no loop.
    forest = pedigree_from_dict(
        {
            "individuals": [
                {"id": "a", "sex": "M"},
                {"id": "b", "sex": "F"},
                {"id": "c", "father": "a", "mother": "b"},
                {"id": "x", "sex": "M"},
                {"id": "y", "sex": "F"},
                {"id": "z", "father": "x", "mother": "y"},
            ]
        }
    )
    assert not has_loop(forest)


def test_inbreeding_is_a_loop():
    ped = pedigree_from_dict(
        {
            "individuals": [
                {"id": "g1", "sex": "M"},
                {"id": "g2", "sex": "F"},
                {"id": "s", "sex": "M", "father": "g1", "mother": "g2"},
                {"id": "d", "sex": "F", "father": "g1", "mother": "g2"},
                {"id": "k", "father": "s", "mother": "d"},
            ]
        }
    )
    assert has_loop(ped)


def test_counseling_family_stages():
    assert counseling_family(1)["2"].phenotype is None
    assert counseling_family(2)["2"].phenotype.kind == "affected"
    assert counseling_family(5)["3"].phenotype.kind == "unaffected"
    assert counseling_family(6)["3"].phenotype is None
    with pytest.raises(ValueError):
        counseling_family(7)
