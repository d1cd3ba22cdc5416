from fractions import Fraction

import pytest

from halfrib.scalars import (
    ExponentError,
    GaussianRational,
    PoleError,
    Scalar,
    eval_numeric,
    field_arith,
    q_power,
    qfactorial,
    qint,
    v_power,
)


def poly(terms, L=1):
    return Scalar(dict(terms), L=L)


def test_q_power_examples():
    assert q_power(Fraction(3, 4), 4) == v_power(3, 4)
    assert q_power(0, 6) == Scalar.one(6)
    assert q_power(Fraction(-3, 2), 4) == v_power(-6, 4)


def test_q_power_needs_integral_exponent():
    with pytest.raises(ExponentError):
        q_power(Fraction(1, 3), 4)


def test_polynomial_division_reduces():
    num = poly({2: 1, 0: -1})
    den = poly({1: 1, 0: -1})
    assert field_arith(num, den, "div") == poly({1: 1, 0: 1})


def test_add_zero_is_identity():
    s = poly({4: 1, -4: 1}, 4)
    assert s + Scalar.zero(4) == s


def test_quantum_two_squared():
    # (q + q^-1)^2 expanded by hand
    two = qint(2, 4)
    assert two * two == q_power(2, 4) + Scalar.const(2, 4) + q_power(-2, 4)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Scalar.one(4) / Scalar.zero(4)


def test_eval_numeric_examples():
    assert eval_numeric(v_power(2, 4), 2) == pytest.approx(4.0)
    assert eval_numeric(qint(2, 4), 1) == pytest.approx(2.0)
    s = poly({8: 1, 0: -1}) / poly({4: 1, 0: -1})
    assert eval_numeric(s, 3) == pytest.approx(82.0)


def test_eval_numeric_pole():
    s = Scalar.one(1) / poly({1: 1, 0: -1})
    with pytest.raises(PoleError):
        eval_numeric(s, 1)


def test_canonical_form_is_structural():
    a = poly({2: 2, 0: -2}) / poly({1: 2, 0: -2})
    b = poly({1: 1, 0: 1})
    assert a == b and hash(a) == hash(b)
    assert a.to_json() == b.to_json()


def test_mixed_root_orders_compare_after_lifting():
    assert q_power(1, 4) == q_power(1, 6)
    assert (v_power(1, 4) * v_power(1, 6)) == q_power(Fraction(5, 12), 12)


def test_gaussian_coefficients():
    i = Scalar.const(GaussianRational(0, 1), 8)
    assert i * i == Scalar.const(-1, 8)
    assert (i * v_power(3, 8)).inverse() * i * v_power(3, 8) == Scalar.one(8)


def test_qfactorial_matches_product():
    assert qfactorial(3, 4) == qint(1, 4) * qint(2, 4) * qint(3, 4)


def test_json_round_trip_and_layout():
    s = (poly({3: 1, -1: Fraction(-2, 3)}, 4) / poly({2: 1, 0: 1}, 4)) * Scalar.const(GaussianRational(1, 2), 4)
    data = s.to_json()
    assert set(data) == {"L", "num", "den"}
    exps = [e for e, _ in data["num"]]
    assert exps == sorted(exps)
    assert all(len(c) == 4 for _, c in data["num"] + data["den"])
    assert Scalar.from_json(data) == s


def test_text_uses_q_when_integral():
    assert (-q_power(1, 4) - q_power(-1, 4)).to_text() == "-q - q^-1"
    assert v_power(3, 4).to_text() == "v^3"
    assert Scalar.one(4).to_text() == "1"
