import numpy as np
import pytest

from truncops import (
    OperatorMatrix,
    RationalSymbol,
    blaschke_new,
    boundary_kernel,
    conj_kernel,
    conjugation_C,
    conjugation_U,
    conjugation_U_on,
    embed,
    flip_J,
    inner_product,
    kernel,
    project,
    tm_basis,
)
from truncops.errors import NoConvergence, SpaceMismatch, SymbolNotInClass
from truncops.modelspace import boundary_kernel_symbol, conj_kernel_symbol
from truncops.quadrature import QuadratureSettings


class TestBasis:
    def test_monomial_basis(self, u3):
        b = tm_basis(u3)
        for k, f in enumerate(b.functions):
            assert f(0.7j) == pytest.approx((0.7j) ** k)

    def test_degree_one(self):
        u = blaschke_new([0.5], 1)
        b = tm_basis(u)
        z = 0.3 + 0.1j
        assert b.functions[0](z) == pytest.approx(np.sqrt(0.75) / (1 - 0.5 * z))
        assert inner_product(b.functions[0], b.functions[0]) == pytest.approx(1.0)

    def test_gram_certificate_random_degree5(self, rng):
        zeros = 0.8 * np.sqrt(rng.uniform(size=5)) * np.exp(2j * np.pi * rng.uniform(size=5))
        u = blaschke_new(zeros, np.exp(1j * rng.uniform()))
        assert tm_basis(u).gram_residual < 1e-10

    def test_combine_matches_eval(self, u_generic, rng):
        f = tm_basis(u_generic).random_element(rng)
        sym = f.rep()
        for z in (0.2 + 0.1j, -0.55, np.exp(2.2j)):
            assert sym(z) == pytest.approx(f(z))

    def test_coordinate_norm_is_function_norm(self, u_generic, rng):
        f = tm_basis(u_generic).random_element(rng)
        quad_norm = np.sqrt(inner_product(f.rep(), f.rep()).real)
        assert abs(f.norm() - quad_norm) < 1e-9


class TestInnerProduct:
    def test_orthonormal_monomials(self):
        z1 = RationalSymbol.monomial(1)
        assert inner_product(z1, z1) == pytest.approx(1.0)
        assert inner_product(RationalSymbol.monomial(2),
                             RationalSymbol.monomial(3)) == pytest.approx(0.0)

    def test_geometric_mean_value(self):
        f = RationalSymbol([1.0], [1.0, -0.5])
        assert inner_product(f, RationalSymbol.one()) == pytest.approx(1.0)

    def test_no_convergence_surfaces(self):
        # a pole just off the certificate margin converges too slowly for a
        # small node cap: the engine must hard-error, not silently return
        r = 1.0 + 5e-3
        f = RationalSymbol([1.0], [1.0, -1.0 / r])
        tight = QuadratureSettings(tol=1e-12, start=1024, cap=4096)
        with pytest.raises(NoConvergence):
            inner_product(f, f, settings=tight)


class TestKernels:
    def test_kernel_at_zero(self, u2):
        assert np.allclose(kernel(u2, 0.0).coords, [1.0, 0.0])

    def test_kernel_half(self, u2):
        assert np.allclose(kernel(u2, 0.5).coords, [1.0, 0.5])

    def test_reproducing(self, u_generic, rng):
        f = tm_basis(u_generic).random_element(rng)
        lam = 0.4 - 0.2j
        assert abs(f.inner(kernel(u_generic, lam)) - f(lam)) < 1e-9

    def test_conj_kernel_monomial(self, u2):
        assert np.allclose(conj_kernel(u2, 0.0).coords, [0.0, 1.0], atol=1e-12)
        assert np.allclose(conj_kernel(u2, 0.5).coords, [0.5, 1.0], atol=1e-12)

    def test_conj_kernel_is_conjugation_image(self, u_generic):
        lam = 0.3 + 0.25j
        want = conjugation_C(u_generic).apply(kernel(u_generic, lam))
        got = conj_kernel(u_generic, lam)
        assert np.max(np.abs(want.coords - got.coords)) < 1e-10

    def test_conj_kernel_value_at_center_is_derivative(self, u_generic):
        lam = 0.2 - 0.3j
        sym = conj_kernel_symbol(u_generic, lam)
        assert sym(lam) == pytest.approx(u_generic.derivative(lam))

    def test_boundary_kernel_monomial(self, u2):
        ke = boundary_kernel(u2, 1.0)
        assert np.allclose(ke.coords, [1.0, 1.0])
        assert ke.norm() ** 2 == pytest.approx(2.0)   # equals |u'(1)|

    def test_boundary_relation(self, u_generic):
        eta = np.exp(0.9j)
        ke = boundary_kernel(u_generic, eta)
        kte = project(u_generic, conj_kernel_symbol(u_generic, eta))
        rel = np.conj(u_generic(eta)) * eta * kte.coords
        assert np.max(np.abs(ke.coords - rel)) < 1e-9

    def test_boundary_symbol_matches_coords(self, u_generic):
        eta = np.exp(2.3j)
        el = project(u_generic, boundary_kernel_symbol(u_generic, eta))
        assert np.max(np.abs(el.coords - boundary_kernel(u_generic, eta).coords)) < 1e-10


class TestProjection:
    def test_truncation(self, u2):
        assert project(u2, RationalSymbol.monomial(3)).norm() < 1e-12
        assert project(u2, RationalSymbol.monomial(-1)).norm() < 1e-12
        got = project(u2, RationalSymbol.polynomial([1.0, 1.0, 1.0]))
        assert np.allclose(got.coords, [1.0, 1.0], atol=1e-12)

    def test_idempotent(self, u_generic):
        sym = RationalSymbol.from_laurent({-2: 1j, 0: 0.5, 1: 2.0, 4: -0.7})
        once = project(u_generic, sym)
        twice = project(u_generic, once.rep())
        assert np.max(np.abs(once.coords - twice.coords)) < 1e-10

    def test_embed_certificate(self, u_generic, rng):
        f = tm_basis(u_generic).random_element(rng)
        el = embed(u_generic, f.rep())
        assert np.max(np.abs(el.coords - f.coords)) < 1e-10
        with pytest.raises(SymbolNotInClass):
            embed(u_generic, RationalSymbol.monomial(7))


class TestConjugations:
    def test_natural_conjugation_monomial(self, u2):
        c = conjugation_C(u2)
        x = tm_basis(u2).element([1 + 2j, 3 - 1j])
        assert np.allclose(c.apply(x).coords, [3 + 1j, 1 - 2j])

    def test_involution_and_isometry(self, u_generic, rng):
        c = conjugation_C(u_generic)
        assert np.max(np.abs((c @ c).matrix - np.eye(3))) < 1e-10
        x = tm_basis(u_generic).random_element(rng)
        assert c.apply(x).norm() == pytest.approx(x.norm())

    def test_coefficient_conjugation(self, u2):
        uu = conjugation_U(u2)
        x = tm_basis(u2).element([0.0, 1j])
        assert np.allclose(uu.apply(x).coords, [0.0, -1j])

    def test_hat_kernel_transport(self, u_generic):
        lam = 0.5j * 0.3 + 0.1
        uu = conjugation_U(u_generic)
        got = uu.apply(kernel(u_generic, lam))
        want = kernel(u_generic.hat(), np.conj(lam))
        assert np.max(np.abs(got.coords - want.coords)) < 1e-10

    def test_hat_conj_kernel_transport(self, u_generic):
        lam = 0.5j
        uu = conjugation_U(u_generic)
        got = uu.apply(conj_kernel(u_generic, lam))
        want = conj_kernel(u_generic.hat(), np.conj(lam))
        assert np.max(np.abs(got.coords - want.coords)) < 1e-9

    def test_same_space_conjugation_requires_symmetry(self, u_sym, u_generic):
        m = conjugation_U_on(u_sym)
        assert np.max(np.abs((m @ m).matrix - np.eye(3))) < 1e-10
        with pytest.raises(SymbolNotInClass):
            conjugation_U_on(u_generic)


class TestFlip:
    def test_monomial_images(self):
        assert flip_J(RationalSymbol.one())(2.0) == pytest.approx(0.5)
        assert flip_J(RationalSymbol.monomial(3))(2.0) == pytest.approx(2.0**-4)
        assert flip_J(RationalSymbol.monomial(-2))(2.0) == pytest.approx(2.0)

    def test_pairing_preserved(self):
        f = RationalSymbol.from_laurent({-1: 1j, 2: 0.5})
        g = RationalSymbol.from_laurent({0: 2.0, 1: -1.0})
        assert inner_product(flip_J(f), flip_J(g)) == pytest.approx(
            inner_product(f, g), abs=1e-10)


class TestOperatorMatrix:
    def test_composition_rule_and_flags(self, u2, rng):
        space = tm_basis(u2)
        def anti(mat):
            return OperatorMatrix(mat, space, space, antilinear=True)
        def lin(mat):
            return OperatorMatrix(mat, space, space)
        m1 = anti(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        m2 = anti(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        m3 = lin(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        x = np.array([0.3 - 1j, 0.7 + 0.2j])
        # composition matches sequential application, flags xor
        for a, b in ((m1, m2), (m1, m3), (m3, m1)):
            got = (a @ b).apply(x).coords
            want = a.apply(b.apply(x).coords).coords
            assert np.allclose(got, want)
            assert (a @ b).antilinear == (a.antilinear != b.antilinear)
        # associativity holds exactly
        lhs = ((m1 @ m2) @ m3).matrix
        rhs = (m1 @ (m2 @ m3)).matrix
        assert np.allclose(lhs, rhs)

    def test_antilinear_adjoint_pairing(self, u2, rng):
        space = tm_basis(u2)
        c = OperatorMatrix(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
                           space, space, antilinear=True)
        f = space.random_element(rng)
        g = space.random_element(rng)
        lhs = c.apply(f).inner(g)
        rhs = c.adjoint().apply(g).inner(f)
        assert lhs == pytest.approx(rhs)

    def test_space_mismatch_guard(self, u2, u3):
        a = OperatorMatrix(np.eye(2), tm_basis(u2), tm_basis(u2))
        b = OperatorMatrix(np.eye(3), tm_basis(u3), tm_basis(u3))
        with pytest.raises(SpaceMismatch):
            a @ b

    def test_json_roundtrip(self, u2, u3):
        m = OperatorMatrix(np.arange(6).reshape(3, 2) * (1 + 1j), tm_basis(u2), tm_basis(u3))
        m2 = OperatorMatrix.from_json(m.to_json())
        assert np.allclose(m.matrix, m2.matrix)
        assert m2.domain == m.domain and m2.codomain == m.codomain


def test_hat_multiplicative_on_rationals():
    f = RationalSymbol.from_laurent({-1: 2j, 1: 1.0})
    g = RationalSymbol([1.0, 0.5j], [1.0, 0.0, 0.25])
    z = np.exp(0.61j)
    assert (f * g).hat()(z) == pytest.approx((f.hat() * g.hat())(z))
