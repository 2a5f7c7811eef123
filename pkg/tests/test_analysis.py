"""Profiles, bound transfer, criteria, local-global, Cartier checks."""

import pytest

from prokit.errors import NotCovering
from prokit.analysis import (
    bounded_torsion_index,
    cartier_check,
    default_budget,
    gm_profile,
    injective_criterion,
    is_effective_cartier,
    lipman_profile,
    local_global_check,
    power_stability_check,
    regular_then_bounded,
    verify_bound_transfer,
    violating_certificate,
    weak_profile,
)
from prokit.modules import ring_as_module
from prokit.rings import ideal, truncated_two_power, zmod


def test_bounded_torsion_index_z8():
    R = zmod(8)
    M = ring_as_module(R)
    c, chain = bounded_torsion_index(M, R.from_int(2))
    assert c == 3
    assert chain == [2, 4, 8]


def test_bounded_torsion_index_unit():
    R = zmod(8)
    M = ring_as_module(R)
    c, chain = bounded_torsion_index(M, R.from_int(5))
    assert c == 0 and chain == []


def test_bounded_torsion_truncated_family_law():
    R, x, _ = truncated_two_power(3)
    M = ring_as_module(R)
    c, chain = bounded_torsion_index(M, x)
    assert c == 3
    assert chain[-1] == R.order()


def test_lipman_profile_z8():
    R = zmod(8)
    M = ring_as_module(R)
    prof = lipman_profile(M, [R.from_int(2)], 3)
    for n in (1, 2, 3):
        assert prof.entry(1, n) == n + 3


def test_lipman_profile_unit_prefix():
    R, x, one = truncated_two_power(3)
    M = ring_as_module(R)
    prof = lipman_profile(M, [one, x], 2)
    for n in (1, 2):
        assert prof.entry(1, n) == n
        assert prof.entry(2, n) == n


def test_lipman_profile_x_then_unit():
    R, x, one = truncated_two_power(3)
    M = ring_as_module(R)
    prof = lipman_profile(M, [x, one], 2)
    for n in (1, 2):
        assert prof.entry(1, n) == n + 3
        assert prof.entry(2, n) == n


def test_single_element_law_gm_equals_lipman():
    R = zmod(12)
    M = ring_as_module(R)
    for k in (2, 3, 5, 6):
        x = R.from_int(k)
        lip = lipman_profile(M, [x], 3)
        gm = gm_profile(M, [x], 3)
        c, _ = bounded_torsion_index(M, x)
        for n in (1, 2, 3):
            assert lip.entry(1, n) == n + c
            assert gm.entry(1, n) == lip.entry(1, n)


def test_gm_profile_two_elements_conclusive():
    R = zmod(12)
    M = ring_as_module(R)
    prof = gm_profile(M, [R.from_int(3), R.from_int(2)], 3)
    assert prof.all_conclusive()


def test_weak_profile_z8():
    R = zmod(8)
    M = ring_as_module(R)
    prof = weak_profile(M, [R.from_int(2)], 3)
    for n in (1, 2, 3):
        assert prof.entry(1, n) == n + 3


def test_weak_profile_unit_everywhere_n():
    R = zmod(12)
    M = ring_as_module(R)
    prof = weak_profile(M, [R.from_int(7), R.from_int(2)], 2)
    assert prof.all_conclusive()


def test_weak_profile_truncated_family():
    R, x, _ = truncated_two_power(4)
    M = ring_as_module(R)
    prof = weak_profile(M, [x], 1, i_max=1)
    assert prof.entry(1, 1) == 5


def test_validity_upward_closed():
    # if m witnesses level n then any larger m witnesses it too
    from prokit.analysis import _lipman_condition

    R = zmod(12)
    M = ring_as_module(R)
    xs = [R.from_int(2)]
    y = R.from_int(6)
    cache = {}
    hits = [m for m in range(1, 9) if _lipman_condition(M, xs, y, 1, m, cache)]
    assert hits == list(range(hits[0], 9))


def test_violating_certificate_exists_below_witness():
    R = zmod(8)
    M = ring_as_module(R)
    prof = lipman_profile(M, [R.from_int(2)], 2)
    m_min = prof.entry(1, 1)
    for m in range(1, m_min):
        cert = violating_certificate(M, [R.from_int(2)], "lipman", 1, 1, m)
        assert cert is not None
    assert violating_certificate(M, [R.from_int(2)], "lipman", 1, 1, m_min) is None


def test_bound_transfer_single_element():
    R = zmod(8)
    M = ring_as_module(R)
    x = [R.from_int(2)]
    lip = lipman_profile(M, x, 3)
    gm = gm_profile(M, x, 3)
    outcome = verify_bound_transfer(M, x, lip, gm)
    assert outcome.passed


def test_bound_transfer_truncated_mixed():
    R, x, one = truncated_two_power(3)
    M = ring_as_module(R)
    seq = [x, one]
    lip = lipman_profile(M, seq, 3)
    gm = gm_profile(M, seq, 3)
    assert verify_bound_transfer(M, seq, lip, gm).passed


def test_bound_transfer_z12():
    R = zmod(12)
    M = ring_as_module(R)
    seq = [R.from_int(3), R.from_int(2)]
    lip = lipman_profile(M, seq, 3)
    gm = gm_profile(M, seq, 3)
    assert verify_bound_transfer(M, seq, lip, gm).passed


def test_power_stability_z8():
    R = zmod(8)
    M = ring_as_module(R)
    out = power_stability_check(M, [R.from_int(2)], [2])
    assert out.passed
    # the profile of x^2 = 4 has entries n + 2 (annihilator chain of 4)
    rows = dict(((i, n), m) for i, n, m, _ in out.details["powered_rows"])
    assert rows[(1, 1)] == 3


def test_power_stability_identity_exponents():
    R = zmod(12)
    M = ring_as_module(R)
    out = power_stability_check(M, [R.from_int(2)], [1])
    assert out.passed
    assert out.details["base_rows"] == out.details["powered_rows"]


def test_injective_criterion_proregular_z8():
    R = zmod(8)
    M = ring_as_module(R)
    out = injective_criterion(M, [R.from_int(2)], "proregular")
    assert out.passed
    assert out.details["agrees_with_profile"]


def test_injective_criterion_weak_z12():
    R = zmod(12)
    M = ring_as_module(R)
    out = injective_criterion(M, [R.from_int(2), R.from_int(3)], "weak")
    assert out.passed


def test_injective_criterion_unit_sequence():
    R = zmod(12)
    M = ring_as_module(R)
    out = injective_criterion(M, [R.one()], "proregular")
    assert out.passed


def test_regular_then_bounded_unit_regular():
    R = zmod(8)
    M = ring_as_module(R)
    out = regular_then_bounded(M, [R.from_int(3)], R.from_int(2))
    assert out.passed
    assert out.details["regular_positions"] == [True]


def test_regular_then_bounded_empty_prefix():
    R = zmod(8)
    M = ring_as_module(R)
    out = regular_then_bounded(M, [], R.from_int(2))
    assert out.passed
    assert out.details["tail_torsion_index"] == 3


def test_regular_then_bounded_z12():
    R = zmod(12)
    M = ring_as_module(R)
    out = regular_then_bounded(M, [R.from_int(5)], R.from_int(2))
    assert out.passed


def test_regular_then_bounded_reports_failure():
    R = zmod(8)
    M = ring_as_module(R)
    out = regular_then_bounded(M, [R.from_int(2)], R.from_int(2))
    assert not out.passed
    assert out.details.get("hypothesis_failed")


def test_local_global_z6_covering():
    R = zmod(6)
    M = ring_as_module(R)
    out = local_global_check(M, [R.from_int(2)], covering=[R.from_int(3), R.from_int(4)])
    assert out.passed
    assert out.details["diagonal_injective"]
    rows = dict(((i, n), m) for i, n, m, _ in out.details["global_lipman"])
    assert rows[(1, 1)] == 2  # c = 1 in the Z/2 chart, 0 in the Z/3 chart


def test_local_global_unit_covering():
    R = zmod(12)
    M = ring_as_module(R)
    out = local_global_check(M, [R.from_int(2)], covering=[R.one()])
    assert out.passed


def test_local_global_maximal_mode():
    R = zmod(12)
    M = ring_as_module(R)
    out = local_global_check(M, [R.from_int(2)], mode="maximal")
    assert out.passed


def test_local_global_rejects_noncovering():
    R = zmod(6)
    M = ring_as_module(R)
    with pytest.raises(NotCovering):
        local_global_check(M, [R.from_int(2)], covering=[R.from_int(2)])


def test_cartier_prism_fixture():
    R = zmod(12)
    out = cartier_check(R, ideal(R, [R.from_int(3)]), R.from_int(2))
    assert out.passed
    assert out.details["bounded_torsion_index"] == 0
    for i, n, m, conclusive in out.details["profile_rows"]:
        assert conclusive and m == n
    assert out.details["divisible"]


def test_cartier_unit_ideal():
    R = zmod(12)
    out = cartier_check(R, ideal(R, [R.one()]), R.from_int(2))
    assert out.passed
    for i, n, m, conclusive in out.details["profile_rows"]:
        assert conclusive and m == n


def test_cartier_z8_nilpotent():
    # with x inside I the level-m colon is everything, so the minimal
    # witness is m(n) = 2n (frozen from direct enumeration over Z/8)
    R = zmod(8)
    out = cartier_check(R, ideal(R, [R.from_int(2)]), R.from_int(2))
    assert out.passed
    rows = dict(((i, n), m) for i, n, m, _ in out.details["profile_rows"])
    assert rows[(1, 1)] == 2
    assert rows[(1, 2)] == 4
    assert rows[(1, 3)] == 6
    assert out.details["divisible"]


def test_effective_cartier_examples():
    R = zmod(12)
    out = is_effective_cartier(R, ideal(R, [R.one()]), [R.one()])
    assert out.passed
    out2 = is_effective_cartier(R, ideal(R, [R.from_int(2)]), [R.from_int(4), R.from_int(9)])
    assert not out2.passed  # the Z/3 chart sees the zero ideal
    R6 = zmod(6)
    out3 = is_effective_cartier(R6, ideal(R6, [R6.from_int(5)]), [R6.one()])
    assert out3.passed


def test_default_budget_formula():
    R = zmod(8)
    M = ring_as_module(R)
    assert default_budget(M, 1, 3) == 3 + 3 * 2


def test_power_stability_z12_cubed():
    R = zmod(12)
    M = ring_as_module(R)
    out = power_stability_check(M, [R.from_int(2)], [3])
    assert out.passed


def test_effective_cartier_covering_3_4():
    # the chart at 3 sees the image of (2) as a non-unit ideal, so the
    # search finds no non-zerodivisor generator there
    R = zmod(12)
    out = is_effective_cartier(R, ideal(R, [R.from_int(2)]), [R.from_int(3), R.from_int(4)])
    assert not out.passed
    charts = {tuple(c["chart"]): c for c in out.details["charts"]}
    assert charts[(3,)]["passes"] is False
    assert charts[(4,)]["passes"] is True
