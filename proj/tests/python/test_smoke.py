import math

import pytest

import twobox


def test_catalog_round_trip():
    for name in twobox.catalog_names():
        s = twobox.named(name)
        back = twobox.parse(s.to_tbx())
        assert back.dim == s.dim
        assert back.to_tbx() == s.to_tbx()


def test_verify():
    passed, checks = twobox.verify(twobox.named("TL", {"delta": "3"}))
    assert passed
    assert all(ok for _, ok, _ in checks)
    passed, checks = twobox.verify(twobox.named("TL", {"delta": "1.2"}))
    assert not passed
    assert any(name == "schur_positivity" and not ok for name, ok, _ in checks)


def test_classify_z2subz7():
    s = twobox.named("Z2subZ7")
    assert math.isclose(s.delta ** 2, 7.0)
    v = twobox.classify(s)
    assert v["class"] == 4
    assert twobox.new_part_dimension(s) == 9


def test_classify_each_class():
    assert twobox.classify(twobox.named("Z4"))["class"] == 1
    tl = twobox.named("TL")
    z3 = twobox.named("Z3")
    assert twobox.classify(twobox.free_product(tl, z3))["class"] == 2
    assert twobox.classify(twobox.tensor_product(twobox.named("Z2"), tl))["class"] == 3
    assert twobox.classify(twobox.named("Z5"))["class"] == 0


def test_biprojections_and_iso():
    assert len(twobox.biprojection_traces(twobox.named("Z2xZ2"))) == 5
    z4 = twobox.named("Z4")
    assert twobox.find_isomorphism(z4, twobox.named("Z2xZ2")) is None
    phi = twobox.find_isomorphism(z4, twobox.fourier_dual(z4))
    assert phi is not None and len(phi) == 4


def test_report():
    r = twobox.report(twobox.named("Z2subZ7"))
    assert r["new_part_dimension"] == 9
    assert r["dim_bound"]["bound"] == 25
    assert "new_part_dimension: 9" in twobox.report_text(twobox.named("Z2subZ7"))


def test_errors_carry_codes():
    with pytest.raises(twobox.TwoBoxError) as info:
        twobox.named("Q8")
    assert info.value.code == "UnknownName"
    with pytest.raises(twobox.TwoBoxError) as info:
        twobox.parse("{")
    assert info.value.code == "SyntaxError"
