# test_ledger.py
import pytest

from algebra.cartan_matrix import named, validate
from algebra.flag_cells import DIVERGE, MATCH
from homotopy.groups import TRIVIAL, Z, Countable, DegreeRangeError, HomotopyProfile, cyclic, free, unknown
from homotopy.ledger import (
    CITATIONS,
    CertificateError,
    EnRangeError,
    FibrationRecord,
    FibrationShapeError,
    KmaxCapError,
    OutOfStableRangeError,
    SphereRangeError,
    bott_pi_O,
    countability_certificate,
    countability_propagate,
    en_profile,
    orthogonal_profile,
    pi_orthogonal,
    render_trace,
    sandwich_deduce,
    sphere_profile,
    stable_pi_SO,
)

C2 = cyclic(2)
K_EN_LOW = (TRIVIAL, C2, TRIVIAL, Z, TRIVIAL, TRIVIAL, TRIVIAL)


def test_bott_periodicity():
    assert [bott_pi_O(k) for k in range(8)] == [C2, C2, TRIVIAL, Z, TRIVIAL, TRIVIAL, TRIVIAL, Z]
    assert bott_pi_O(8) == C2
    assert bott_pi_O(15) == Z
    with pytest.raises(DegreeRangeError):
        bott_pi_O(-1)


def test_stable_range_and_exception():
    assert stable_pi_SO(16, 0) == TRIVIAL
    assert stable_pi_SO(16, 3) == Z
    assert stable_pi_SO(16, 14) == TRIVIAL
    with pytest.raises(OutOfStableRangeError):
        stable_pi_SO(16, 15)
    assert pi_orthogonal(16, 15) == free(2)
    assert str(pi_orthogonal(16, 15)) == "Z⊕Z"
    with pytest.raises(OutOfStableRangeError):
        pi_orthogonal(4, 5)


def test_orthogonal_profiles():
    assert orthogonal_profile(16, 6).groups == (C2, C2, TRIVIAL, Z, TRIVIAL, TRIVIAL, TRIVIAL)
    assert orthogonal_profile(16, 6, connected=True).groups == K_EN_LOW
    assert orthogonal_profile(16, 6, connected=True).space_name == "SO(16)"


def test_sphere_profile():
    assert sphere_profile(8, 7).groups == (TRIVIAL,) * 8
    assert sphere_profile(9, 7).unknown_degrees() == []
    with pytest.raises(SphereRangeError):
        sphere_profile(8, 8)
    with pytest.raises(SphereRangeError):
        sphere_profile(1, 0)


def _record(base_groups):
    kmax = len(base_groups) - 1
    fiber = HomotopyProfile("F", K_EN_LOW[:kmax + 1])
    total = HomotopyProfile.from_mapping("E", {}, kmax)
    return FibrationRecord(fiber, total, HomotopyProfile("B", tuple(base_groups)))


def test_sandwich_copies_the_fiber_between_trivial_base_groups():
    record = _record([TRIVIAL] * 5)
    assert [sandwich_deduce(record, k) for k in range(4)] == list(K_EN_LOW[:4])
    with pytest.raises(DegreeRangeError):
        sandwich_deduce(record, 4)


def test_sandwich_gives_unknown_next_to_nontrivial_base():
    record = _record([TRIVIAL, TRIVIAL, Z, TRIVIAL])
    assert sandwich_deduce(record, 0) == TRIVIAL
    assert sandwich_deduce(record, 1).kind == "unknown"
    assert sandwich_deduce(record, 2).kind == "unknown"


def test_fibration_record_needs_shared_depth():
    with pytest.raises(FibrationShapeError):
        FibrationRecord(HomotopyProfile("F", (TRIVIAL,)), HomotopyProfile("E", (TRIVIAL,)),
                        HomotopyProfile("B", (TRIVIAL, TRIVIAL)))


def test_countability_propagation():
    assert countability_propagate(Countable.YES, Countable.YES) == Countable.YES
    assert countability_propagate(Countable.YES, Countable.UNKNOWN) == Countable.UNKNOWN


def test_e8_base_case():
    deduction = en_profile(8, 6)
    assert deduction.profile.groups == K_EN_LOW
    assert deduction.comparisons == []


@pytest.mark.parametrize("n", [9, 10, 11, 12])
def test_en_profile_is_stable_in_n(n):
    deduction = en_profile(n, 6)
    assert deduction.profile.groups == en_profile(8, 6).profile.groups
    assert deduction.profile.space_name == f"K(E{n})"
    assert len(deduction.comparisons) == n - 8


def test_en_comparisons_record_the_dimension_seven_evidence():
    deduction = en_profile(10, 6)
    first, second = (c["result"] for c in deduction.comparisons)
    assert (first["verdict"], first["dimension"]) == (DIVERGE, 7)
    assert (second["verdict"], second["dimension"]) == (MATCH, 7)
    assert any("degree 7 is not claimed" in line.comment for line in deduction.trace)


def test_every_trace_line_cites_a_reason():
    deduction = en_profile(10, 6)
    assert deduction.trace
    for line in deduction.trace:
        assert line.rule and line.citation
        assert line.render().startswith(("DEGREE ", "STEP: "))
    text = render_trace(deduction.trace)
    assert "DEGREE 3: Z BY exact-sandwich CITING" in text


def test_en_profile_guards():
    with pytest.raises(KmaxCapError):
        en_profile(10, 7)
    with pytest.raises(EnRangeError):
        en_profile(7, 6)
    with pytest.raises(DegreeRangeError):
        en_profile(10, -1)


def test_countability_certificate_for_e10():
    profile, trace = countability_certificate(named("E10"), 5)
    assert profile.kmax == 5
    assert all(g.countable == Countable.YES for g in profile.groups)
    assert all(line.citation for line in trace)


@pytest.mark.parametrize("entries", [[[2]], [[2, -2], [-1, 2]], [[2, 0], [0, 2]]])
def test_countability_certificate_preconditions(entries):
    with pytest.raises(CertificateError):
        countability_certificate(validate(entries), 3)


def test_unknown_is_not_trivial():
    assert not unknown().is_trivial


def test_bott_table_matches_the_periodic_pattern():
    expected = {0: C2, 1: C2, 3: Z, 7: Z}
    for k in range(24):
        assert bott_pi_O(k) == expected.get(k % 8, TRIVIAL)
    for k in range(41):
        assert bott_pi_O(k) == bott_pi_O(k + 8)


SAMPLE_GROUPS = [TRIVIAL, Z, C2, free(2), unknown(), unknown(Countable.YES)]


@pytest.mark.parametrize("base_k", SAMPLE_GROUPS)
@pytest.mark.parametrize("base_next", SAMPLE_GROUPS)
@pytest.mark.parametrize("fiber_k", SAMPLE_GROUPS)
def test_sandwich_rule_is_sound(base_k, base_next, fiber_k):
    fiber = HomotopyProfile("F", (fiber_k, TRIVIAL))
    total = HomotopyProfile.from_mapping("E", {}, 1)
    base = HomotopyProfile("B", (base_k, base_next))
    result = sandwich_deduce(FibrationRecord(fiber, total, base), 0)
    if base_k.is_trivial and base_next.is_trivial:
        assert result == fiber_k
    else:
        assert result.kind == "unknown"


def test_sphere_model_is_cited_for_every_base():
    trace = en_profile(9, 6).trace
    spheres = [line for line in trace if line.rule == "sphere-model"]
    assert len(spheres) == 1
    assert spheres[0].citation == CITATIONS["sphere"]
    assert "trivial in degrees 0..7" in spheres[0].comment
    assert "cell evidence reaches dimension 6 only" in spheres[0].comment

    rules = [line.rule for line in trace]
    assert rules.index("sphere-model") < rules.index("exact-sandwich")
    fibration = next(line for line in trace if line.rule == "fibration")
    assert "base is 7-connected" in fibration.comment
    assert "STEP: K(E9)/K(E8) modelled on S^8" in render_trace(trace)


def test_matching_steps_need_no_sphere_caveat():
    spheres = [line for line in en_profile(10, 6).trace if line.rule == "sphere-model"]
    assert len(spheres) == 2
    assert "cell evidence" not in spheres[1].comment
