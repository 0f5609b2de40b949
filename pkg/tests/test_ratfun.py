import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from truncops.errors import PoleHit, PoleOnCircle
from truncops.ratfun import RationalSymbol

coeff = st.complex_numbers(min_magnitude=0, max_magnitude=3,
                           allow_nan=False, allow_infinity=False)


def test_canonical_zero():
    z = RationalSymbol.zero()
    assert z.is_zero()
    assert list(z.num) == [0]
    assert list(z.den) == [1]


def test_monomials():
    assert RationalSymbol.monomial(3)(0.5) == pytest.approx(0.125)
    assert RationalSymbol.monomial(-2)(0.5) == pytest.approx(4.0)
    assert RationalSymbol.monomial(0, 2.5)(1j) == pytest.approx(2.5)


def test_laurent_roundtrip():
    f = RationalSymbol.from_laurent({-2: 1 + 1j, 0: -0.5, 3: 2.0})
    z = np.exp(0.3j)
    direct = (1 + 1j) * z**-2 - 0.5 + 2.0 * z**3
    assert f(z) == pytest.approx(direct)


def test_denominator_monic():
    f = RationalSymbol([2.0, 4.0], [0.0, 2.0])
    assert f.den[-1] == 1.0
    assert f(2.0) == pytest.approx((2 + 4 * 2) / (2 * 2))


def test_pole_on_circle_rejected():
    with pytest.raises(PoleOnCircle):
        RationalSymbol([1.0], [-1.0, 1.0])   # pole at z=1
    with pytest.raises(PoleOnCircle):
        RationalSymbol([1.0], [0.0])


def test_scalar_eval_guards_pole():
    f = RationalSymbol([1.0], [-0.5, 1.0])  # pole at 0.5 (inside disk is allowed)
    with pytest.raises(PoleHit):
        f(0.5)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=4), st.lists(coeff, min_size=1, max_size=4))
def test_arithmetic_matches_pointwise(a, b):
    f = RationalSymbol.polynomial(a)
    g = RationalSymbol.polynomial(b)
    for z in (0.37 + 0.2j, np.exp(1.1j), -0.8):
        assert (f + g)(z) == pytest.approx(f(z) + g(z), abs=1e-9)
        assert (f * g)(z) == pytest.approx(f(z) * g(z), abs=1e-9)
        assert (f - g)(z) == pytest.approx(f(z) - g(z), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=5))
def test_hat_is_coefficient_conjugation(a):
    f = RationalSymbol.polynomial(a)
    z = np.exp(0.77j)
    assert f.hat()(z) == pytest.approx(np.conj(f(np.conj(z))), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=5))
def test_hat_multiplicative(a):
    f = RationalSymbol.polynomial(a)
    g = RationalSymbol.from_laurent({-1: 2.0, 1: -1j})
    lhs = (f * g).hat()
    rhs = f.hat() * g.hat()
    z = np.exp(0.3j)
    assert lhs(z) == pytest.approx(rhs(z), abs=1e-9)


def test_conj_circle():
    f = RationalSymbol.from_laurent({-2: 1j, 1: 2.0})
    z = np.exp(0.9j)
    assert f.conj_circle()(z) == pytest.approx(np.conj(f(z)))
    # conj on the circle is an involution
    g = f.conj_circle().conj_circle()
    assert g(z) == pytest.approx(f(z))


def test_flip_on_monomials():
    assert RationalSymbol.one().flip()(2.0) == pytest.approx(0.5)          # 1 -> 1/z
    f3 = RationalSymbol.monomial(3).flip()                                 # z^3 -> z^-4
    assert f3(2.0) == pytest.approx(2.0**-4)
    fm2 = RationalSymbol.monomial(-2).flip()                               # z^-2 -> z
    assert fm2(2.0) == pytest.approx(2.0)


def test_flip_involution_pointwise():
    f = RationalSymbol.from_laurent({-1: 1 + 2j, 0: 3, 2: -1j})
    z = np.exp(1.7j)
    assert f.flip().flip()(z) == pytest.approx(f(z))
    # J f(z) = conj(z) f(conj z) on the circle
    assert f.flip()(z) == pytest.approx(np.conj(z) * f(np.conj(z)))


def test_json_roundtrip_and_laurent_shorthand():
    f = RationalSymbol([1.0, 2j], [1.0, 0.0, 0.25])
    g = RationalSymbol.from_json(f.to_json())
    assert np.allclose(f.num, g.num) and np.allclose(f.den, g.den)
    h = RationalSymbol.from_json({"laurent": {"-2": [1.0, 0.0], "0": [0.0, 1.0]}})
    z = np.exp(0.4j)
    assert h(z) == pytest.approx(z**-2 + 1j)


def test_division_recertifies_poles():
    f = RationalSymbol.one()
    g = RationalSymbol([-1.0, 1.0])   # z - 1 vanishes on the circle
    with pytest.raises(PoleOnCircle):
        f / g
