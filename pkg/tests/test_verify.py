import json

import pytest

from qkleinian.classify import Fine, canonical_specs
from qkleinian.errors import SchemaError
from qkleinian.verify import SCHEMA_VERSION, VerificationReport, parse_report, run_suite

SPECS = canonical_specs()


@pytest.mark.parametrize("fine", list(Fine), ids=lambda f: f.value)
def test_canonical_forms_pass_their_suite(fine):
    r = run_suite(SPECS[fine], samples=50)
    assert r.status == "pass", [c.to_json() for c in r.checks if c.status == "fail"]
    assert {c.name for c in r.checks} == {"orbit_convergence", "power_limit_kernels", "l2_witnesses",
                                           "recurrence", "density", "dual_convergence", "lambda_invariance"}


def test_polynomial_suite_passes_with_defaults():
    r = run_suite(SPECS[Fine.VERTICAL_TRANSLATION])
    assert r.status == "pass"
    assert r.parameters["max_iter"] == 10_000 and r.parameters["tol"] == 1e-3


def test_starved_budget_fails():
    r = run_suite(SPECS[Fine.VERTICAL_TRANSLATION], max_iter=10)
    assert r.status == "fail"
    assert next(c for c in r.checks if c.name == "orbit_convergence").status == "fail"


def test_report_body_is_deterministic():
    spec = SPECS[Fine.REGULAR_LOXODROMIC]
    a, b = run_suite(spec, seed=7), run_suite(spec, seed=7)
    assert json.dumps(a.body(), sort_keys=True) == json.dumps(b.body(), sort_keys=True)


def test_outcome_does_not_depend_on_seed():
    spec = SPECS[Fine.SCREW]
    assert {run_suite(spec, samples=40, seed=s).status for s in (0, 1, 2 ** 63)} == {"pass"}


def test_report_round_trip_and_version_gate():
    r = run_suite(SPECS[Fine.HOMOTHETY_REAL], samples=20)
    doc = parse_report(r.dumps())
    assert doc["schema_version"] == SCHEMA_VERSION and doc["body"]["status"] == "pass"
    assert set(doc["timing"]) == {c.name for c in r.checks}
    doc["schema_version"] = "qkleinian.report/0"
    with pytest.raises(SchemaError):
        parse_report(json.dumps(doc))
    with pytest.raises(SchemaError):
        parse_report(json.dumps({"schema_version": SCHEMA_VERSION, "body": {}}))


def test_status_aggregates_checks():
    from qkleinian.verify import Check
    ok = VerificationReport({}, {}, {}, {}, [Check("a", "pass"), Check("b", "skipped")])
    bad = VerificationReport({}, {}, {}, {}, [Check("a", "pass"), Check("b", "fail")])
    assert ok.status == "pass" and bad.status == "fail"


def test_non_finite_measurements_serialize():
    from qkleinian.verify import Check
    doc = json.loads(json.dumps(Check("x", "fail", float("inf"), 1.0).to_json()))
    assert doc["measured"] == "inf"
