import numpy as np
import pytest

from truncops import (
    ExtendedScalar,
    RationalSymbol,
    adjoint_tho_check,
    blaschke_new,
    boundary_kernel,
    clark_perturbation,
    conj_kernel,
    conjugation_C,
    defects,
    functional_calculus,
    kernel,
    project,
    rank_one,
    sedlock_op,
    shift,
    shift_adj,
    spectral_multiplier,
    symmetric_involution,
    tho_matrix,
    tm_basis,
    tto_matrix,
)
from truncops.blaschke import clark_points
from truncops.classify import is_tho
from truncops.errors import NotRealSymmetric, SingularDenominator
from truncops.modelspace import boundary_kernel_symbol


class TestShift:
    def test_monomial(self, u2):
        assert np.allclose(shift(u2).matrix, [[0, 0], [1, 0]], atol=1e-12)

    def test_adjoint_is_difference_quotient(self, u2):
        # S* z = 1
        got = shift_adj(u2).apply(np.array([0.0, 1.0]))
        assert np.allclose(got.coords, [1.0, 0.0], atol=1e-12)

    def test_adjoint_matches_conjugate_transpose(self, u_generic):
        s = shift(u_generic)
        assert np.max(np.abs(shift_adj(u_generic).matrix - s.matrix.conj().T)) < 1e-12

    def test_difference_quotient_columnwise(self, u_generic):
        # (S* f)(z) = (f(z) - f(0))/z checked against rational arithmetic
        space = tm_basis(u_generic)
        sadj = shift_adj(u_generic)
        for k, e in enumerate(space.functions):
            unit = np.zeros(space.dim)
            unit[k] = 1.0
            got = sadj.apply(unit)
            num = np.polynomial.polynomial.polyadd(e.num, -complex(e(0.0)) * e.den)
            dq = RationalSymbol(np.polynomial.polynomial.polydiv(num, [0.0, 1.0])[0],
                                e.den, check_poles=False)
            want = project(u_generic, dq)
            assert np.max(np.abs(got.coords - want.coords)) < 1e-10


class TestDefects:
    def test_monomial(self, u2):
        d1, d2 = defects(u2)
        assert np.allclose(d1.matrix, np.diag([1.0, 0.0]), atol=1e-12)
        assert np.allclose(d2.matrix, np.diag([0.0, 1.0]), atol=1e-12)

    def test_random_algebraic_identities(self, u_generic):
        d1, d2 = defects(u_generic)
        s = shift(u_generic).matrix
        eye = np.eye(3)
        assert np.max(np.abs(d1.matrix - (eye - s @ s.conj().T))) < 1e-10
        assert np.max(np.abs(d2.matrix - (eye - s.conj().T @ s))) < 1e-10


class TestRankOne:
    def test_unit_matrix(self, u2):
        space = tm_basis(u2)
        e0 = space.element([1.0, 0.0])
        assert np.allclose(rank_one(e0, e0).matrix, [[1, 0], [0, 0]])

    def test_kills_orthogonal(self, u2, rng):
        space = tm_basis(u2)
        f = space.random_element(rng)
        g = space.element([1.0, 0.0])
        h = space.element([0.0, 1.0])     # orthogonal to g
        assert rank_one(f, g).apply(h).norm() < 1e-14

    def test_trace(self, u_generic, rng):
        space = tm_basis(u_generic)
        f, g = space.random_element(rng), space.random_element(rng)
        assert np.trace(rank_one(f, g).matrix) == pytest.approx(f.inner(g))


class TestClarkPerturbation:
    def test_alpha_zero(self, u2):
        assert np.allclose(clark_perturbation(u2, 0.0).matrix, shift(u2).matrix)

    def test_monomial_unitary(self, u2):
        sa = clark_perturbation(u2, 1.0)
        assert np.allclose(sa.matrix, [[0, 1], [1, 0]], atol=1e-12)
        assert np.max(np.abs(sa.matrix.conj().T @ sa.matrix - np.eye(2))) < 1e-12

    def test_unimodular_spectrum(self, u_generic):
        sa = clark_perturbation(u_generic, np.exp(0.4j))
        ev = np.linalg.eigvals(sa.matrix)
        assert np.max(np.abs(np.abs(ev) - 1.0)) < 1e-10

    def test_contractive_regime(self, u_generic):
        sa = clark_perturbation(u_generic, 0.3 - 0.2j)
        assert np.linalg.norm(sa.matrix, 2) <= 1.0 + 1e-12
        assert np.max(np.abs(np.linalg.eigvals(sa.matrix))) < 1.0

    def test_singular_denominator(self):
        u = blaschke_new([-0.5], 1.0)          # u(0) = 0.5
        with pytest.raises(SingularDenominator):
            clark_perturbation(u, 2.0)         # 1 - 2*0.5 = 0


class TestToeplitzHankelBuilders:
    def test_toeplitz_entries_monomial(self, u2):
        assert np.allclose(tto_matrix(u2, u2, RationalSymbol.monomial(1)).matrix,
                           [[0, 0], [1, 0]], atol=1e-12)
        assert np.allclose(tto_matrix(u2, u2, RationalSymbol.one()).matrix,
                           np.eye(2), atol=1e-12)
        assert np.allclose(tto_matrix(u2, u2, RationalSymbol.monomial(-1)).matrix,
                           [[0, 1], [0, 0]], atol=1e-12)

    def test_hankel_entries_monomial(self, u2):
        # entry (i, j) equals the (-(i+j+1))-th coefficient of the symbol
        assert np.allclose(tho_matrix(u2, u2, RationalSymbol.monomial(-1)).matrix,
                           [[1, 0], [0, 0]], atol=1e-12)
        assert np.allclose(tho_matrix(u2, u2, RationalSymbol.monomial(-2)).matrix,
                           [[0, 1], [1, 0]], atol=1e-12)
        assert np.allclose(tho_matrix(u2, u2, RationalSymbol.monomial(-3)).matrix,
                           [[0, 0], [0, 1]], atol=1e-12)

    def test_analytic_symbol_gives_zero_hankel(self, u_generic, v_generic):
        sym = RationalSymbol.polynomial([1.0, 2.0, 3j])
        assert np.max(np.abs(tho_matrix(u_generic, v_generic, sym).matrix)) < 1e-12

    def test_hankel_adjoint_law(self, u_generic, v_generic, u2, u3):
        assert adjoint_tho_check(u2, u2, RationalSymbol.monomial(-1))
        assert adjoint_tho_check(u2, u3, RationalSymbol.monomial(-2))
        sym = RationalSymbol.from_laurent({-3: 1j, -1: 0.4, 2: -0.7})
        assert adjoint_tho_check(u_generic, v_generic, sym)
        B = tho_matrix(u2, u2, RationalSymbol.monomial(-1))
        assert np.allclose(B.matrix, B.matrix.conj().T)   # real symbol: self-adjoint

    def test_toeplitz_displacement_structure(self, u_generic, v_generic, rng):
        sym = RationalSymbol.from_laurent(
            {k: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for k in range(-3, 4)})
        A = tto_matrix(u_generic, v_generic, sym)
        disp = (A - shift(v_generic) @ A @ shift_adj(u_generic)).matrix
        # the displacement has rank at most two (kernel directions)
        svals = np.linalg.svd(disp, compute_uv=False)
        assert svals[2:].max(initial=0.0) < 1e-10

    def test_cu_symmetry(self, u_generic):
        sym = RationalSymbol.from_laurent({-2: 1j, 0: 0.3, 1: -0.4})
        A = tto_matrix(u_generic, u_generic, sym)
        c = conjugation_C(u_generic)
        assert np.max(np.abs((c @ A @ c).matrix - A.adjoint().matrix)) < 1e-10


class TestSedlockOp:
    def test_shift_is_class_zero_member(self, u2):
        phi = tm_basis(u2).element([0.0, 1.0])       # the function z
        assert np.allclose(sedlock_op(u2, 0.0, phi).matrix, shift(u2).matrix,
                           atol=1e-12)

    def test_infinity_gives_adjoint_shift(self, u2):
        phi = tm_basis(u2).element([0.0, 1.0])
        got = sedlock_op(u2, ExtendedScalar.infinity(), phi)
        assert np.allclose(got.matrix, shift_adj(u2).matrix, atol=1e-12)

    def test_constant_only(self, u_generic):
        phi = tm_basis(u_generic).element(np.zeros(3))
        got = sedlock_op(u_generic, 0.3 + 0.1j, phi, c=2.5 - 1j)
        assert np.max(np.abs(got.matrix - (2.5 - 1j) * np.eye(3))) < 1e-10

    def test_member_commutes_with_perturbation(self, u_generic, rng):
        a = 0.45 - 0.3j
        A = sedlock_op(u_generic, a, tm_basis(u_generic).random_element(rng), 0.2)
        sa = clark_perturbation(u_generic, a).matrix
        assert np.max(np.abs(A.matrix @ sa - sa @ A.matrix)) < 1e-10


class TestFunctionalCalculus:
    def test_identity_function(self, u_generic):
        got = functional_calculus(u_generic, 0.0, RationalSymbol.monomial(1))
        assert np.max(np.abs(got.matrix - shift(u_generic).matrix)) < 1e-10

    def test_square_matches_matrix_power(self, u3):
        got = functional_calculus(u3, 0.0, RationalSymbol.monomial(2))
        want = np.linalg.matrix_power(shift(u3).matrix, 2)
        assert np.max(np.abs(got.matrix - want)) < 1e-10

    def test_polynomial_matches_power_sum_inside(self, u_generic):
        a = 0.35 + 0.2j
        psi = RationalSymbol.polynomial([0.5, -1j, 0.25])
        got = functional_calculus(u_generic, a, psi)
        sa = clark_perturbation(u_generic, a).matrix
        want = 0.5 * np.eye(3) - 1j * sa + 0.25 * sa @ sa
        assert np.max(np.abs(got.matrix - want)) < 1e-10

    def test_unimodular_constant(self, u_generic):
        got = functional_calculus(u_generic, np.exp(0.7j), RationalSymbol.one())
        assert np.max(np.abs(got.matrix - np.eye(3))) < 1e-10

    def test_outside_commutes_with_adjoint_perturbation(self, u_generic):
        a = 2.2 - 1.1j
        psi = RationalSymbol.polynomial([1.0, 0.5])
        got = functional_calculus(u_generic, a, psi).matrix
        base = clark_perturbation(u_generic, 1.0 / np.conj(a)).matrix.conj().T
        assert np.max(np.abs(got @ base - base @ got)) < 1e-10

    def test_spectral_multiplier_projectors(self, u_sym):
        cdat = clark_points(u_sym, 1.0)
        m = spectral_multiplier(u_sym, cdat, [1.0] * 3)
        assert np.max(np.abs(m.matrix - np.eye(3))) < 1e-10


class TestInvolution:
    def test_monomial(self, u2):
        d = symmetric_involution(u2)
        assert not d.antilinear
        assert np.allclose(d.matrix, [[0, 1], [1, 0]], atol=1e-12)

    def test_matches_hankel_of_conjugated_generator(self, u_sym):
        d = symmetric_involution(u_sym)
        h = tho_matrix(u_sym, u_sym, u_sym.conj_symbol())
        assert np.max(np.abs(d.matrix - h.matrix)) < 1e-9

    def test_involution_and_self_adjoint(self, u_sym):
        d = symmetric_involution(u_sym)
        assert np.max(np.abs((d @ d).matrix - np.eye(3))) < 1e-10
        assert np.max(np.abs(d.matrix - d.adjoint().matrix)) < 1e-10

    def test_requires_real_symmetry(self, u_generic):
        with pytest.raises(NotRealSymmetric):
            symmetric_involution(u_generic)


class TestRankOneOperatorIdentities:
    def test_interior_pair(self, u_generic, v_generic):
        lam = 0.3 - 0.2j
        lhs = rank_one(conj_kernel(v_generic, lam), kernel(u_generic, lam))
        sym = RationalSymbol(
            v_generic.num_coeffs,
            np.polynomial.polynomial.polymul(v_generic.den_coeffs,
                                             np.array([-lam, 1.0])),
            check_poles=False)
        assert np.max(np.abs(lhs.matrix - tto_matrix(u_generic, v_generic, sym).matrix)) < 1e-9

        lhs2 = rank_one(kernel(v_generic, lam), conj_kernel(u_generic, lam))
        sym2 = u_generic.conj_symbol() * RationalSymbol(
            [0.0, 1.0], [1.0, -np.conj(lam)], check_poles=False)
        assert np.max(np.abs(lhs2.matrix - tto_matrix(u_generic, v_generic, sym2).matrix)) < 1e-9

    def test_boundary_pair(self, u_generic, v_generic):
        eta = np.exp(1.2j)
        lhs = rank_one(boundary_kernel(v_generic, eta), boundary_kernel(u_generic, eta))
        sym = (boundary_kernel_symbol(v_generic, eta)
               + boundary_kernel_symbol(u_generic, eta).conj_circle() - 1.0)
        assert np.max(np.abs(lhs.matrix - tto_matrix(u_generic, v_generic, sym).matrix)) < 1e-8

    def test_hankel_memberships(self, u_generic, v_generic):
        lam = 0.25 + 0.3j
        eta = np.exp(0.4j)
        pairs = [
            rank_one(conj_kernel(v_generic, np.conj(lam)), conj_kernel(u_generic, lam)),
            rank_one(kernel(v_generic, np.conj(lam)), kernel(u_generic, lam)),
            rank_one(conj_kernel(v_generic, np.conj(eta)), conj_kernel(u_generic, eta)),
            rank_one(kernel(v_generic, np.conj(eta)), kernel(u_generic, eta)),
        ]
        for op in pairs:
            assert is_tho(op, recover=False).is_member
