"""Cross-cutting invariants that tie several layers together."""

import json

from prokit.analysis import lipman_profile, _lipman_condition
from prokit.complexes import cech_homology
from prokit.modules import (
    direct_sum_modules,
    hom_module,
    matlis_dual,
    ring_as_module,
)
from prokit.randgen import random_instance, rng_from_seed
from prokit.rings import zmod
from prokit.tasks import Report, emit_report, parse_spec, run_task


def test_conclusive_entries_reverify():
    # every recorded witness satisfies its defining inclusion when re-checked
    rng = rng_from_seed(314159)
    for _ in range(15):
        R, M, seq = random_instance(rng, k_max=2)
        prof = lipman_profile(M, seq, 2)
        for (i, n), m in prof.entries.items():
            assert m is not None
            cache = {}
            assert _lipman_condition(M, list(seq[: i - 1]), seq[i - 1], n, m, cache)
            if m > n:
                assert not _lipman_condition(M, list(seq[: i - 1]), seq[i - 1], n, m - 1, cache)


def test_hom_of_injective_sums_vanishing():
    # Cech homology of Hom(E^s, E^t) vanishes in positive degrees, s,t <= 2
    for modulus in (6, 8):
        R = zmod(modulus)
        E = matlis_dual(ring_as_module(R))
        E2, _, _ = direct_sum_modules([E, E])
        for s_mod, t_mod in ((E, E2), (E2, E), (E2, E2)):
            H = hom_module(s_mod, t_mod)
            x = R.from_int(2)
            assert cech_homology([x], H, 1).is_zero_module()


def test_emit_empty_report_all_formats():
    report = Report(body={"schema": 1, "tool": "prokit", "version": "0.1.0",
                          "seed": 0, "task": {}, "analysis_kind": "verify",
                          "results": {}, "exit_code": 0})
    doc = json.loads(emit_report(report, "json").decode())
    assert doc["results"] == {}
    csv = emit_report(report, "csv").decode()
    assert csv.splitlines()[0] == "i,n,m,conclusive"
    text = emit_report(report, "text").decode()
    assert "prokit" in text


def test_axioms_task_diagnoses_corrupted_ring():
    # Z/4 with e1*e1 = 3*e1 while the unit claims e1: unit-law failure
    doc = {
        "schema": 1,
        "ring": {"kind": "raw", "orders": [4], "products": [[[3]]], "unit": [1]},
        "analysis": {"kind": "axioms"},
        "seed": 0,
    }
    report = run_task(parse_spec(json.dumps(doc)))
    assert report.exit_code == 1
    failures = report.body["results"]["axioms"]["failures"]
    assert any("unit law" in f for f in failures)


def test_doctests_pass():
    import doctest

    import prokit.intlinalg
    import prokit.rings

    for mod in (prokit.intlinalg, prokit.rings):
        result = doctest.testmod(mod)
        assert result.failed == 0, mod.__name__
