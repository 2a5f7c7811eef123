"""Ring constructors, Fitting splits, localization, idempotents, coverings."""

import pytest

from prokit.errors import AxiomViolation, InvalidSpec
from prokit.intlinalg import FinAbGroup, IntMatrix
from prokit.rings import (
    FiniteRing,
    check_ring_axioms,
    fitting_split,
    ideal,
    ideal_power,
    ideal_stabilization,
    is_covering,
    localize,
    nonunits_form_ideal,
    primitive_idempotents,
    product_ring,
    quotient_ring,
    ring_from_raw,
    truncated_polynomial,
    truncated_polynomial_family,
    truncated_two_power,
    zmod,
)


def test_zmod_basics():
    R = zmod(6)
    assert R.order() == 6
    assert R.rank == 1
    assert R.one().coords == (1,)
    assert (R.from_int(4) * R.from_int(5)).coords == (2,)
    assert check_ring_axioms(R) == []


def test_zmod_rejects_small():
    with pytest.raises(InvalidSpec):
        zmod(1)


def test_truncated_two_power_3():
    R, x, one = truncated_two_power(3)
    assert R.additive.invariant_factors == (2, 4, 8)
    assert R.order() == 64
    # x is the image of (2, 2, 2); in the first factor 2 = 0
    assert x.coords == (0, 2, 2)
    assert one == R.one()
    assert check_ring_axioms(R) == []


def test_product_ring_z2_z3():
    R, embed = product_ring([zmod(2), zmod(3)])
    assert R.order() == 6
    u = embed([zmod(2).one(), zmod(3).one()])
    assert u == R.one()
    assert check_ring_axioms(R) == []


def test_corrupted_structure_constants_reported():
    # Z/4 with e1*e1 = 3*e1 while the unit claims e1: unit law must fail
    with pytest.raises(AxiomViolation):
        ring_from_raw([4], [[(3,)]], (1,))
    bad = FiniteRing(FinAbGroup((4,)), [IntMatrix.from_rows([[3]])], (1,), check=False)
    failures = check_ring_axioms(bad)
    assert any("unit law" in f for f in failures)


def test_fitting_split_z12_at_2():
    R = zmod(12)
    c, e = fitting_split(R, R.from_int(2))
    assert c == 2
    assert e == R.from_int(4)
    assert e * e == e


def test_fitting_split_unit():
    R = zmod(12)
    c, e = fitting_split(R, R.from_int(5))
    assert (c, e) == (0, R.one())


def test_fitting_split_nilpotent():
    R = zmod(8)
    c, e = fitting_split(R, R.from_int(2))
    assert c == 3
    assert e.is_zero()


def test_fitting_power_chain_strict():
    # x^{c-1} R strictly contains x^c R when c >= 1
    R = zmod(12)
    x = R.from_int(2)
    c, e = fitting_split(R, x)
    from prokit.rings import _image_span
    from prokit.intlinalg import span_subgroup_order

    orders = [
        span_subgroup_order(R.additive, _image_span(R, x ** n)) for n in range(c + 2)
    ]
    assert orders[c] == orders[c + 1]
    for n in range(c):
        assert orders[n] > orders[n + 1]


def test_localize_z12_at_2():
    R = zmod(12)
    loc = localize(R, R.from_int(2))
    assert loc.ring.order() == 3
    assert loc.idempotent == R.from_int(4)
    fx = loc.localize_element(R.from_int(2))
    assert loc.ring.is_unit(fx)


def test_localize_at_unit_is_iso_copy():
    R = zmod(12)
    loc = localize(R, R.from_int(7))
    assert loc.ring.order() == 12
    assert loc.ring.additive.invariant_factors == (12,)


def test_localize_at_nilpotent_is_zero():
    R = zmod(8)
    loc = localize(R, R.from_int(2))
    assert loc.ring.is_zero_ring()


def test_localize_idempotence():
    # localizing again at the image of f changes nothing
    R = zmod(12)
    f = R.from_int(2)
    loc = localize(R, f)
    loc2 = localize(loc.ring, loc.localize_element(f))
    assert loc2.ring.additive.invariant_factors == loc.ring.additive.invariant_factors
    assert loc2.idempotent == loc.ring.one()


def test_is_covering_examples():
    R = zmod(6)
    ok, coeffs = is_covering(R, [R.from_int(3), R.from_int(4)])
    assert ok
    total = R.zero()
    for a, f in zip(coeffs, [R.from_int(3), R.from_int(4)]):
        total = total + a * f
    assert total == R.one()
    ok, _ = is_covering(R, [R.one()])
    assert ok
    ok, coeffs = is_covering(R, [R.from_int(2)])
    assert not ok and coeffs is None


def test_ideal_stabilization_examples():
    R = zmod(12)
    c, e = ideal_stabilization(ideal(R, [R.from_int(2)]))
    assert (c, e) == (2, R.from_int(4))
    c, e = ideal_stabilization(ideal(R, [R.one()]))
    assert (c, e) == (0, R.one())
    R8 = zmod(8)
    c, e = ideal_stabilization(ideal(R8, [R8.from_int(2)]))
    assert c == 3 and e.is_zero()


def test_ideal_stabilization_invariants():
    R = zmod(12)
    I = ideal(R, [R.from_int(2)])
    c, e = ideal_stabilization(I)
    Ic = ideal_power(I, c)
    assert ideal_power(I, c + 1).span == Ic.span
    for g in Ic.span_elements():
        assert e * g == g


def test_primitive_idempotents_z6():
    R = zmod(6)
    es = primitive_idempotents(R)
    assert sorted(e.coords[0] for e in es) == [3, 4]


def test_primitive_idempotents_z8_local():
    R = zmod(8)
    es = primitive_idempotents(R)
    assert len(es) == 1 and es[0] == R.one()


def test_primitive_idempotents_z12():
    R = zmod(12)
    es = primitive_idempotents(R)
    assert sorted(e.coords[0] for e in es) == [4, 9]
    total = R.zero()
    for e in es:
        total = total + e
    assert total == R.one()
    assert (es[0] * es[1]).is_zero()


def test_primitive_idempotents_product():
    R, _ = product_ring([zmod(4), zmod(9), zmod(5)])
    es = primitive_idempotents(R)
    assert len(es) == 3
    orders = 1
    for e in es:
        loc = localize(R, e)
        assert nonunits_form_ideal(loc.ring)
        orders *= loc.ring.order()
    assert orders == R.order()


def test_primitive_idempotents_same_prime_product():
    # same-characteristic factors exercise the Fitting enumeration
    R, _ = product_ring([zmod(2), zmod(2)])
    assert len(primitive_idempotents(R)) == 2
    R3, _ = product_ring([zmod(3), zmod(3), zmod(3)])
    assert len(primitive_idempotents(R3)) == 3


def test_primitive_idempotents_truncated_two_power():
    # the truncation is a product of local rings Z/2 x Z/4 x Z/8
    R, x, _ = truncated_two_power(3)
    es = primitive_idempotents(R)
    assert len(es) == 3
    orders = sorted(localize(R, e).ring.order() for e in es)
    assert orders == [2, 4, 8]


def test_quotient_ring():
    R = zmod(12)
    Q, project = quotient_ring(R, ideal(R, [R.from_int(4)]))
    assert Q.order() == 4
    assert project(R.from_int(4)).is_zero()
    with pytest.raises(InvalidSpec):
        quotient_ring(R, ideal(R, [R.from_int(5)]))


def test_truncated_polynomial():
    R, t = truncated_polynomial(2, 3)
    assert R.order() == 8
    assert not (t * t).is_zero()
    assert (t * t * t).is_zero()
    with pytest.raises(InvalidSpec):
        truncated_polynomial(4, 2)


def test_truncated_polynomial_family():
    S, x, one = truncated_polynomial_family(2, 3)
    # components F_2[t]/(t^n) for n = 1, 2, 3: orders 2, 4, 8
    assert S.order() == 64
    assert (x ** 3).is_zero()
    assert not (x ** 2).is_zero()


def test_covering_diagonal_injective():
    # covering implies the diagonal into the localizations is injective at R
    R = zmod(6)
    fs = [R.from_int(3), R.from_int(4)]
    ok, _ = is_covering(R, fs)
    assert ok
    locs = [localize(R, f) for f in fs]
    for r in R.elements():
        if all(loc.localize_element(r).is_zero() for loc in locs):
            assert r.is_zero()
