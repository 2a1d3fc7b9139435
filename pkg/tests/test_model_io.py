"""Loader strictness, validator completeness, and serialization round-trips."""

from __future__ import annotations

import copy
import difflib
import json

import pytest

from matra.errors import (
    BadFieldError,
    DanglingReference,
    DuplicateIdError,
    MissingFieldError,
    ModelSyntaxError,
    UnknownFieldError,
)
from matra.io import load_model, serialize_model, validate_model


def minimal_doc() -> dict:
    """Smallest model that loads and validates clean (one of everything)."""
    return {
        "matra_version": "1",
        "metadata": {"name": "minimal", "version": "1"},
        "assets": [{"id": "A1", "name": "Database"}],
        "threat_sources": [
            {
                "id": "out",
                "name": "Outsider",
                "category": "individual",
                "subtype": "Outsider",
                "nature": "adversarial",
                "capability": "moderate",
            }
        ],
        "impact_matrix": [
            {"asset": "A1", "dimension": "confidentiality", "source_key": "adversarial", "rating": "high"}
        ],
        "scenarios": [
            {
                "id": "S1",
                "asset": "A1",
                "dimensions": ["confidentiality"],
                "description": "records leaked",
                "impact": "high",
                "in_scope_sources": ["out"],
            }
        ],
        "trees": {
            "objectives": [{"id": "ob1", "name": "Manipulation", "scenario": "S1"}],
            "techniques": [{"id": "te1", "name": "Injection", "objective": "ob1"}],
            "vectors": [
                {
                    "id": "ve1",
                    "name": "crafted input",
                    "technique": "te1",
                    "skill_required": "low",
                    "baseline_residual": "high",
                }
            ],
        },
        "controls": [
            {
                "id": "ctl",
                "name": "Filter",
                "effects": [{"vector": "ve1", "residual_with_control": "low"}],
            }
        ],
        "configurations": [
            {"id": "default", "name": "Default", "enabled_controls": []},
            {"id": "hardened", "name": "Hardened", "enabled_controls": ["ctl"]},
        ],
    }


def load_doc(doc: dict):
    return load_model(json.dumps(doc))


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def test_shipped_dataset_counts(openclaw):
    assert len(openclaw.assets) == 7
    assert len(openclaw.scenarios) == 9
    assert len(openclaw.threat_sources) == 4
    assert openclaw.metadata.name.startswith("OpenClaw")


def test_empty_document_is_a_syntax_error():
    with pytest.raises(ModelSyntaxError):
        load_model(b"")
    with pytest.raises(ModelSyntaxError):
        load_model("   \n ")


def test_malformed_json_reports_position():
    with pytest.raises(ModelSyntaxError) as err:
        load_model('{\n  "matra_version": "1",\n')
    assert err.value.line is not None


def test_dangling_technique_reference():
    doc = minimal_doc()
    doc["trees"]["vectors"][0]["technique"] = "T99"
    with pytest.raises(DanglingReference) as err:
        load_doc(doc)
    assert "T99" in str(err.value)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["scenarios"][0].update(in_scope_sources=["nobody"]),
        lambda d: d["scenarios"][0].update(asset="A9"),
        lambda d: d["impact_matrix"][0].update(asset="A9"),
        lambda d: d["impact_matrix"][0].update(source_key="martian"),
        lambda d: d["controls"][0]["effects"][0].update(vector="ve9"),
        lambda d: d["configurations"][1].update(enabled_controls=["ctl9"]),
        lambda d: d["trees"]["objectives"][0].update(scenario="S9"),
        lambda d: d["trees"]["techniques"][0].update(objective="ob9"),
    ],
)
def test_dangling_references_everywhere(mutate):
    doc = minimal_doc()
    mutate(doc)
    with pytest.raises(DanglingReference):
        load_doc(doc)


@pytest.mark.parametrize(
    "path",
    [
        (),
        ("metadata",),
        ("assets", 0),
        ("threat_sources", 0),
        ("impact_matrix", 0),
        ("scenarios", 0),
        ("trees",),
        ("trees", "objectives", 0),
        ("trees", "techniques", 0),
        ("trees", "vectors", 0),
        ("controls", 0),
        ("controls", 0, "effects", 0),
        ("configurations", 0),
    ],
)
def test_unknown_field_rejected_everywhere(path):
    doc = minimal_doc()
    target = doc
    for step in path:
        target = target[step]
    target["skill_reqired"] = "low"
    with pytest.raises(UnknownFieldError) as err:
        load_doc(doc)
    assert "skill_reqired" in str(err.value)


def test_duplicate_ids_rejected():
    doc = minimal_doc()
    doc["assets"].append({"id": "A1", "name": "Clone"})
    with pytest.raises(DuplicateIdError):
        load_doc(doc)


def test_duplicate_impact_cell_rejected():
    doc = minimal_doc()
    doc["impact_matrix"].append(dict(doc["impact_matrix"][0]))
    with pytest.raises(DuplicateIdError):
        load_doc(doc)


def test_missing_required_field():
    doc = minimal_doc()
    del doc["trees"]["vectors"][0]["baseline_residual"]
    with pytest.raises(MissingFieldError):
        load_doc(doc)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(matra_version="2"),
        lambda d: d["threat_sources"][0].update(capability="medium"),
        lambda d: d["threat_sources"][0].pop("capability"),
        lambda d: d["threat_sources"][0].update(nature="non_adversarial"),
        lambda d: d["scenarios"][0].update(dimensions=[]),
        lambda d: d["scenarios"][0].update(in_scope_sources=[]),
        lambda d: d["impact_matrix"][0].update(rating="none"),
    ],
)
def test_bad_field_values_rejected(mutate):
    doc = minimal_doc()
    mutate(doc)
    with pytest.raises(BadFieldError):
        load_doc(doc)


def test_not_applicable_rating_loads():
    doc = minimal_doc()
    doc["impact_matrix"].append(
        {"asset": "A1", "dimension": "integrity", "source_key": "adversarial", "rating": "n/a"}
    )
    model = load_doc(doc)
    assert model.impact_matrix[1].rating is None


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def codes(report):
    return {f.code for f in report.findings}


def error_codes(report):
    return {f.code for f in report.errors}


def test_shipped_dataset_validates_clean(openclaw):
    report = validate_model(openclaw)
    assert report.ok
    assert report.errors == ()


def test_minimal_doc_validates_clean():
    report = validate_model(load_doc(minimal_doc()))
    assert report.ok


def test_missing_skill_flagged():
    doc = minimal_doc()
    del doc["trees"]["vectors"][0]["skill_required"]
    report = validate_model(load_doc(doc))
    assert "missing-skill" in error_codes(report)


def test_missing_inherent_flagged():
    doc = minimal_doc()
    doc["threat_sources"].append(
        {
            "id": "acc",
            "name": "Accidental",
            "category": "accidental",
            "subtype": "User error",
            "nature": "non_adversarial",
        }
    )
    doc["scenarios"][0]["in_scope_sources"] = ["out", "acc"]
    doc["impact_matrix"].append(
        {"asset": "A1", "dimension": "confidentiality", "source_key": "accidental", "rating": "low"}
    )
    report = validate_model(load_doc(doc))
    assert "missing-inherent" in error_codes(report)


def test_control_raising_residual_flagged():
    doc = minimal_doc()
    doc["trees"]["vectors"][0]["baseline_residual"] = "low"
    doc["controls"][0]["effects"][0]["residual_with_control"] = "high"
    report = validate_model(load_doc(doc))
    assert "control-raises-residual" in error_codes(report)


def test_impact_mismatch_flagged():
    doc = minimal_doc()
    doc["scenarios"][0]["impact"] = "low"
    report = validate_model(load_doc(doc))
    assert "impact-mismatch" in error_codes(report)


def test_no_impact_basis_flagged():
    doc = minimal_doc()
    doc["impact_matrix"][0]["rating"] = "n/a"
    report = validate_model(load_doc(doc))
    assert "no-impact-basis" in error_codes(report)


def test_empty_objective_flagged():
    doc = minimal_doc()
    doc["trees"]["objectives"].append({"id": "ob2", "name": "Hollow", "scenario": "S1"})
    report = validate_model(load_doc(doc))
    assert "empty-objective" in error_codes(report)


def test_empty_technique_flagged():
    doc = minimal_doc()
    doc["trees"]["techniques"].append({"id": "te2", "name": "Hollow", "objective": "ob1"})
    report = validate_model(load_doc(doc))
    assert "empty-technique" in error_codes(report)


def test_uncontrolled_vector_warned():
    doc = minimal_doc()
    doc["controls"][0]["effects"] = []
    doc["configurations"][1]["enabled_controls"] = ["ctl"]
    report = validate_model(load_doc(doc))
    assert report.ok
    assert "uncontrolled-vector" in codes(report)


def test_unused_source_warned():
    doc = minimal_doc()
    doc["threat_sources"].append(
        {
            "id": "idle",
            "name": "Idle group",
            "category": "group",
            "subtype": "Ad hoc",
            "nature": "adversarial",
            "capability": "high",
        }
    )
    report = validate_model(load_doc(doc))
    assert report.ok
    assert "unused-source" in codes(report)


def test_report_serializes():
    report = validate_model(load_doc(minimal_doc()))
    data = json.loads(report.to_json())
    assert data["ok"] is True and data["errors"] == 0
    assert "0 error(s)" in report.human()


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_round_trip_identity_on_shipped_dataset(openclaw):
    again = load_model(serialize_model(openclaw))
    assert again == openclaw
    assert load_model(serialize_model(again)) == again


def test_serialize_is_deterministic(openclaw):
    assert serialize_model(openclaw) == serialize_model(openclaw)


def test_single_value_change_diffs_one_line():
    base = load_doc(minimal_doc())
    changed_doc = minimal_doc()
    changed_doc["trees"]["vectors"][0]["baseline_residual"] = "moderate"
    changed = load_doc(changed_doc)
    diff = [
        line
        for line in difflib.unified_diff(
            serialize_model(base).splitlines(), serialize_model(changed).splitlines(), n=0
        )
        if line.startswith(("-", "+")) and not line.startswith(("---", "+++"))
    ]
    assert len(diff) == 2
    assert all("baseline_residual" in line for line in diff)


def test_round_trip_preserves_order_and_optionals():
    doc = minimal_doc()
    doc["trees"]["vectors"][0]["notes"] = "leaf note"
    doc["trees"]["techniques"][0]["catalog_refs"] = ["CAT-1", "CAT-2"]
    model = load_doc(doc)
    again = load_model(serialize_model(model))
    assert again == model
    assert again.techniques[0].catalog_refs == ("CAT-1", "CAT-2")
    assert again.vectors[0].notes == "leaf note"
