import numpy as np
import pytest

from truncops import ExtendedScalar, blaschke_new, clark_points, monomial_inner
from truncops.errors import (
    NotUnimodular,
    PoleHit,
    ZeroOnOrOutsideCircle,
)


def test_monomial_case():
    u = blaschke_new([0, 0], 1)
    assert u(0.5) == pytest.approx(0.25)
    assert u.degree == 2


def test_single_zero_and_unimodularity():
    u = blaschke_new([0.5], 1)
    assert u(0.5) == pytest.approx(0.0)
    assert abs(u(1j)) == pytest.approx(1.0)


def test_unimodular_on_circle_sampled():
    u = blaschke_new([0.3 + 0.4j], constant=-1)
    theta = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    vals = u(np.exp(1j * theta))
    assert np.max(np.abs(np.abs(vals) - 1.0)) < 1e-10


def test_construction_guards():
    with pytest.raises(ZeroOnOrOutsideCircle):
        blaschke_new([1.0], 1)
    with pytest.raises(ZeroOnOrOutsideCircle):
        blaschke_new([], 1)
    with pytest.raises(NotUnimodular):
        blaschke_new([0.2], 1.5)


def test_evaluate():
    assert monomial_inner(2)(2.0) == pytest.approx(4.0)
    u = blaschke_new([0.5], 1)
    assert u(0.0) == pytest.approx(-0.5)
    with pytest.raises(PoleHit):
        u(2.0)   # the pole sits at 1/conj(0.5)


def test_derivative():
    assert monomial_inner(2).derivative(1.0) == pytest.approx(2.0)
    u = blaschke_new([0.5], 1)
    assert u.derivative(0.0) == pytest.approx(1 - 0.25)   # 1 - |a|^2 at a = 0.5
    # central difference oracle
    u = monomial_inner(2)
    lam, h = 0.3, 1e-6
    fd = (u(lam + h) - u(lam - h)) / (2 * h)
    assert abs(u.derivative(lam) - fd) < 1e-6


def test_derivative_at_zero_of_u_uses_product_rule():
    a = 0.3 + 0.4j
    u = blaschke_new([a, -0.2], np.exp(0.5j))
    h = 1e-6
    fd = (u(a + h) - u(a - h)) / (2 * h)
    assert abs(u.derivative(a) - fd) < 1e-5


def test_hat():
    assert monomial_inner(2).hat() == monomial_inner(2)
    u = blaschke_new([0.5j], 1)
    uh = u.hat()
    assert uh.zeros == (-0.5j,)
    zs = np.exp(1j * np.linspace(0.1, 6.0, 8))
    assert np.max(np.abs(np.conj(uh(np.conj(zs))) - u(zs))) < 1e-12
    assert u.hat().hat() == u
    assert blaschke_new([0.2], 1j).hat().constant == -1j


def test_real_symmetric():
    assert monomial_inner(3).is_real_symmetric()
    assert not blaschke_new([0.5j], 1).is_real_symmetric()
    u = blaschke_new([0.5j, -0.5j], -1)
    assert u.is_real_symmetric()
    zs = np.exp(1j * np.linspace(0.05, 6.1, 16))
    assert np.max(np.abs(u(zs) - u.hat()(zs))) < 1e-12


def test_clark_points_monomial():
    data = clark_points(monomial_inner(2), 1.0)
    pts = sorted(data.points, key=lambda z: z.real)
    assert pts[0] == pytest.approx(-1.0)
    assert pts[1] == pytest.approx(1.0)
    assert data.weights == pytest.approx((0.5, 0.5))
    # constant function quadrature: f = 1 has unit norm in K_{z^2}
    assert sum(w * abs(1.0) ** 2 for w in data.weights) == pytest.approx(1.0)


def test_clark_points_roots_of_unity():
    n = 5
    data = clark_points(monomial_inner(n), 1.0)
    pts = np.array(data.points)
    assert np.max(np.abs(pts**n - 1.0)) < 1e-10
    assert np.allclose(data.weights, 1.0 / n)


def test_clark_orientation_recorded():
    u = blaschke_new([0.3 + 0.4j, -0.5], np.exp(0.7j))
    data = clark_points(u, np.exp(1.3j))
    assert data.orientation() == "u(point) = alpha"
    assert "orientation" in data.to_json()


def test_clark_rejects_interior_alpha():
    with pytest.raises(NotUnimodular):
        clark_points(monomial_inner(2), 0.5)


class TestExtendedScalar:
    def test_variants(self):
        a = ExtendedScalar.finite(2j)
        inf = ExtendedScalar.infinity()
        assert not a.is_infinity and inf.is_infinity
        assert inf.modulus() == np.inf

    def test_reciprocal_conjugate(self):
        a = ExtendedScalar.finite(0.5)
        assert a.reciprocal_conjugate().value == pytest.approx(2.0)
        assert ExtendedScalar.finite(0.0).reciprocal_conjugate().is_infinity
        assert ExtendedScalar.infinity().reciprocal_conjugate().value == 0.0

    def test_isclose(self):
        assert ExtendedScalar.finite(1.0).isclose(ExtendedScalar.finite(1.0 + 1e-10))
        assert ExtendedScalar.infinity().isclose(ExtendedScalar.infinity())
        assert not ExtendedScalar.finite(1.0).isclose(ExtendedScalar.infinity())
