import json

from lzsweep.fileio import json_text
from lzsweep.validation import run_validation


def test_report_shape_and_seed_independence():
    a, b = run_validation(42), run_validation(7)
    assert a["seed"] == 42 and b["seed"] == 7
    assert [c["name"] for c in a["properties"]] == [c["name"] for c in b["properties"]]
    # the seed changes the random instances, not the outcomes
    assert [c["passed"] for c in a["properties"]] == [c["passed"] for c in b["properties"]]
    assert a["all_passed"] == all(c["passed"] for c in a["properties"])
    assert json.loads(json_text(a)) == a
