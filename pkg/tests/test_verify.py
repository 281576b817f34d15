import json

import pytest

from cactus_morse import complexes, morse, verify
from cactus_morse.faults import FAULTS, inject_fault


def test_morse_small_corpus():
    rep = verify.verify_morse_dichotomy(2)
    assert rep.passed and rep.stats["instances"] == 2


@pytest.mark.parametrize("name", list(verify.SUITES))
def test_suites_pass(name):
    rep = verify.SUITES[name](3)
    assert rep.status == "pass", rep.table()
    assert rep.counterexamples == [] and rep.witness is None


def test_links_small_corpus():
    rep = verify.verify_links(2)
    assert rep.passed
    assert rep.stats["graphs"] == 3 and rep.stats["thin_graphs"] == 3
    assert "rational homology" in rep.notes[0]


def test_links_parallel_matches_serial():
    assert verify.verify_links(3, jobs=2).to_json() == verify.verify_links(3).to_json()


def test_detection_reports_sharpness():
    rep = verify.verify_detection(6)
    assert rep.passed
    assert rep.stats["graphs"] == 1 + 2 + 5 + 14 + 44 + 149
    assert rep.stats["sharpness_2c_eq_n_without_loop"] > 0
    assert "([([])])" in rep.stats["sharpness_examples"]


def test_homology_records_betti():
    rep = verify.verify_homology(3)
    assert rep.stats["betti[n=3,c=all]"] == [1, 0, 0]
    assert rep.stats["cells[n=2,c=all]"] == [2, 1]


def test_stability_counts():
    rep = verify.verify_stability(3)
    assert rep.passed and rep.stats["maps"] == 3


@pytest.mark.parametrize("fn", [verify.verify_morse_dichotomy, verify.verify_links,
                                verify.verify_detection, verify.verify_homology])
def test_rank_zero_rejected(fn):
    with pytest.raises(ValueError):
        fn(0)


def test_stability_needs_two():
    with pytest.raises(ValueError):
        verify.verify_stability(1)


def test_reports_are_deterministic():
    for name, fn in verify.SUITES.items():
        a, b = fn(3), fn(3)
        assert a.to_json() == b.to_json()
        assert "seconds" not in json.loads(a.to_json())
        assert "seconds" in json.loads(a.to_json(include_timing=True))


def test_report_schema():
    d = json.loads(verify.verify_morse_dichotomy(2).to_json())
    assert set(d) == {"name", "params", "status", "witnesses", "stats", "notes"}


# -- fault injection ------------------------------------------------------------


def test_height_fault_breaks_morse():
    with inject_fault("height"):
        rep = verify.verify_morse_dichotomy(3)
    assert rep.status == "fail"
    w = rep.witness
    assert w == rep.counterexamples[0]
    assert all((w["rank"], w["code"]) <= (x["rank"], x["code"]) for x in rep.counterexamples)
    assert verify.verify_morse_dichotomy(3).passed


def test_height_fault_breaks_links():
    with inject_fault("height"):
        assert not verify.verify_links(3).passed


def test_sign_fault_breaks_homology_and_links():
    with inject_fault("sign"):
        assert complexes.face_sign(1) == 1
        assert not verify.verify_homology(3).passed
        assert not verify.verify_stability(3).passed
        assert not verify.verify_links(3).passed
    assert complexes.face_sign(1) == -1


def test_compatibility_fault_breaks_links():
    with inject_fault("compatibility"):
        rep = verify.verify_links(4)
    assert not rep.passed
    assert {w["check"] for w in rep.counterexamples} & {"sbu_vertex_sphere", "construction_error"}


def test_fault_restored_after_error():
    original = morse.height
    with pytest.raises(RuntimeError):
        with inject_fault("height"):
            raise RuntimeError
    assert morse.height is original


def test_unknown_fault():
    with pytest.raises(ValueError):
        with inject_fault("gravity"):
            pass
    assert set(FAULTS) == {"height", "sign", "compatibility"}
