import json

import jsonschema
import pytest

from dorext.report import Report, dump_structured, dump_text

from golden_cases import CASES, GOLDEN

REPORT_SCHEMA = {
    "type": "object",
    "required": ["check", "passed", "details", "failures"],
    "additionalProperties": False,
    "properties": {
        "check": {"type": "string"},
        "passed": {"type": "boolean"},
        "max_degree": {"type": "integer", "minimum": 0},
        "details": {"type": "object"},
        "failures": {"type": "array", "items": {"type": "string"}},
    },
}

DOCUMENT_SCHEMA = {
    "type": "object",
    "required": ["command", "passed", "reports"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "passed": {"type": "boolean"},
        "reports": {"type": "array", "items": REPORT_SCHEMA},
    },
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_documents_match_schema(name):
    doc = json.loads((GOLDEN / f"{name}.txt").read_text(encoding="utf-8"))
    jsonschema.validate(doc, DOCUMENT_SCHEMA)
    assert doc["passed"] == all(r["passed"] for r in doc["reports"])


def test_fail_records_message():
    r = Report("demo", True)
    r.fail("broken")
    assert not r and r.failures == ["broken"]


def test_key_order_is_insertion_order():
    r = Report("demo", True, 2, {"b": 1, "a": [True, None]})
    assert list(json.loads(dump_structured(r))) == ["check", "passed", "max_degree", "details", "failures"]
    assert dump_structured(r) == dump_structured(Report("demo", True, 2, {"b": 1, "a": [True, None]}))
    assert dump_text(r).splitlines()[0] == "demo: PASS (degree <= 2)"
