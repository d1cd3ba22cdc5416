"""Randomized algebraic properties of the exact scalars."""

import cmath
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from halfrib.scalars import GaussianRational, PoleError, Scalar, eval_numeric, q_power

L = 4
coeffs = st.one_of(
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    st.builds(GaussianRational, st.integers(-3, 3), st.integers(-3, 3)),
)
polys = st.dictionaries(st.integers(-6, 6), coeffs, min_size=0, max_size=3)


@st.composite
def scalars(draw):
    num = Scalar(draw(polys), L=L)
    den = Scalar(draw(polys), L=L)
    if not den:
        return num
    return num / den


SAMPLES = [cmath.rect(1.1 + 0.13 * k, 0.7 + 0.9 * k) for k in range(5)]


@settings(max_examples=2500)
@given(scalars(), scalars(), scalars(), scalars())
def test_field_axioms(a, b, c, d):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == Scalar.zero(L)
    if d:
        assert d * d.inverse() == Scalar.one(L)
        assert (a / d) * d == a


def _numeric(s, z):
    try:
        return eval_numeric(s, z)
    except PoleError:
        return None


@settings(max_examples=400)
@given(scalars(), scalars())
def test_structural_equality_agrees_with_sampling(a, b):
    diff = a - b
    values = [_numeric(diff, z) for z in SAMPLES]
    values = [x for x in values if x is not None]
    numerically_zero = all(abs(x) < 1e-7 for x in values)
    assert (not diff) == numerically_zero


quarter = st.integers(-32, 32).map(lambda k: Fraction(k, 4))


@given(quarter, quarter)
def test_q_power_is_additive(r, s):
    assert q_power(r, L) * q_power(s, L) == q_power(r + s, L)


@given(scalars())
def test_json_round_trip(a):
    assert Scalar.from_json(a.to_json()) == a
