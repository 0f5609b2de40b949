"""Finite Blaschke products and the data attached to them.

An inner function here is always a finite Blaschke product
u(z) = c * prod_k (z - a_k) / (1 - conj(a_k) z) with |a_k| < 1 and |c| = 1;
repeated zeros encode multiplicity.  These generate the finite-dimensional
model spaces everything else lives on, every boundary point carries an
angular derivative, and the hat involution u -> conj(u(conj z)) is an exact
coefficient operation on the stored data.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DegenerateSpectrum,
    NotUnimodular,
    PoleHit,
    ZeroOnOrOutsideCircle,
)
from .ratfun import RationalSymbol

ZERO_MARGIN = 1e-9
UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True)
class InnerFunction:
    """A finite Blaschke product: zero tuple (with multiplicity) and a unimodular constant."""

    zeros: tuple
    constant: complex = 1.0 + 0.0j

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        c = complex(self.constant)
        if not zs:
            raise ZeroOnOrOutsideCircle("a Blaschke product here must have degree >= 1")
        for a in zs:
            if abs(a) >= 1.0 - ZERO_MARGIN:
                raise ZeroOnOrOutsideCircle(f"zero {a:g} not strictly inside the disk")
        if abs(abs(c) - 1.0) > UNIMODULAR_TOL:
            raise NotUnimodular(f"|constant| = {abs(c)!r} is not 1")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "constant", c)
        object.__setattr__(self, "_bvals", {})
        # cheap sampled unimodularity guard; exact by construction, this
        # catches corrupted coefficient data early
        sample = self(np.exp(1j * np.linspace(0.3, 6.0, 8)))
        if np.max(np.abs(np.abs(sample) - 1.0)) > 1e-10:
            raise NotUnimodular("product is not unimodular on the circle")

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @cached_property
    def num_coeffs(self) -> np.ndarray:
        return self.constant * npoly.polyfromroots(self.zeros)

    @cached_property
    def den_coeffs(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for a in self.zeros:
            out = npoly.polymul(out, np.array([1.0, -np.conj(a)], dtype=complex))
        return out

    def boundary_values(self, m: int) -> np.ndarray:
        """Values on the m-point circle grid, evaluated factor by factor.

        Factored evaluation keeps full relative accuracy even when zeros
        cluster; the expanded coefficients would lose it there.
        """
        got = self._bvals.get(m)
        if got is None:
            from . import quadrature

            z = quadrature.nodes(m)
            got = np.full(m, self.constant, dtype=complex)
            for a in self.zeros:
                got = got * (z - a) / (1.0 - np.conj(a) * z)
            self._bvals[m] = got
        return got

    def as_symbol(self) -> RationalSymbol:
        return RationalSymbol(self.num_coeffs, self.den_coeffs, check_poles=False,
                              provider=self.boundary_values)

    def conj_symbol(self) -> RationalSymbol:
        """conj(u) on the circle, i.e. 1/u, as an exact rational symbol."""
        return self.as_symbol().conj_circle()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        self._guard_poles(z)
        # factorwise evaluation: each Blaschke factor is well conditioned, so
        # clustered zeros cost only a few ulps (the expanded coefficients do not)
        out = np.full(z.shape, self.constant, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        return out if z.ndim else complex(out)

    def _guard_poles(self, z):
        for a in self.zeros:
            if a != 0 and np.any(np.abs(z - 1.0 / np.conj(a)) < 1e-12):
                raise PoleHit(f"evaluation at pole 1/conj({a:g})")

    def derivative(self, z) -> complex:
        """u'(z); logarithmic-derivative sum away from zeros of u, product rule at them."""
        z = complex(z)
        self._guard_poles(np.asarray(z))
        zs = np.array(self.zeros)
        if np.min(np.abs(z - zs)) > 1e-6:
            log_der = np.sum(1.0 / (z - zs) + np.conj(zs) / (1.0 - np.conj(zs) * z))
            return complex(self(z) * log_der)
        # product rule: only the differentiated factor may vanish
        factors = (z - zs) / (1.0 - np.conj(zs) * z)
        dfactors = (1.0 - np.abs(zs) ** 2) / (1.0 - np.conj(zs) * z) ** 2
        total = 0.0 + 0.0j
        for k in range(len(zs)):
            rest = np.prod(factors[:k]) * np.prod(factors[k + 1:])
            total += dfactors[k] * rest
        return complex(self.constant * total)

    def hat(self) -> "InnerFunction":
        """conj(u(conj z)): conjugate every zero and the constant.  An exact involution."""
        return InnerFunction(tuple(np.conj(a) for a in self.zeros), np.conj(self.constant))

    def is_real_symmetric(self, tol: float = 1e-12) -> bool:
        """True iff u equals its hat: conjugation-closed zero multiset, real constant."""
        if abs(self.constant.imag) > tol:
            return False
        key = sorted(self.zeros, key=lambda a: (a.real, a.imag))
        conj_key = sorted((np.conj(a) for a in self.zeros), key=lambda a: (a.real, a.imag))
        return all(abs(p - q) <= tol for p, q in zip(key, conj_key))

    def __mul__(self, other: "InnerFunction") -> "InnerFunction":
        return InnerFunction(self.zeros + other.zeros, self.constant * other.constant)

    def to_json(self) -> dict:
        return {
            "zeros": [[float(a.real), float(a.imag)] for a in self.zeros],
            "constant": [float(self.constant.real), float(self.constant.imag)],
        }

    @classmethod
    def from_json(cls, obj) -> "InnerFunction":
        zeros = tuple(complex(re, im) for re, im in obj["zeros"])
        cre, cim = obj.get("constant", [1.0, 0.0])
        return cls(zeros, complex(cre, cim))


def blaschke_new(zeros, constant=1.0) -> InnerFunction:
    """Validated construction of a finite Blaschke product."""
    return InnerFunction(tuple(zeros), constant)


def monomial_inner(n: int) -> InnerFunction:
    """u(z) = z**n."""
    return InnerFunction((0.0,) * n, 1.0)


@dataclass(frozen=True)
class ExtendedScalar:
    """A point of the Riemann sphere: a finite complex number or infinity."""

    value: complex | None = None  # None encodes infinity

    INF_DETECTION = 1e8

    @classmethod
    def finite(cls, c) -> "ExtendedScalar":
        return cls(complex(c))

    @classmethod
    def infinity(cls) -> "ExtendedScalar":
        return cls(None)

    @classmethod
    def of(cls, c) -> "ExtendedScalar":
        if isinstance(c, ExtendedScalar):
            return c
        if c is None:
            return cls.infinity()
        return cls.finite(c)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def modulus(self) -> float:
        return np.inf if self.is_infinity else abs(self.value)

    def conjugate(self) -> "ExtendedScalar":
        return self if self.is_infinity else ExtendedScalar(np.conj(self.value))

    def reciprocal(self) -> "ExtendedScalar":
        """1/alpha with 0 <-> infinity."""
        if self.is_infinity:
            return ExtendedScalar.finite(0.0)
        if self.value == 0:
            return ExtendedScalar.infinity()
        return ExtendedScalar.finite(1.0 / self.value)

    def reciprocal_conjugate(self) -> "ExtendedScalar":
        """1/conj(alpha) with 0 <-> infinity; the adjoint's class parameter."""
        return self.conjugate().reciprocal()

    def isclose(self, other: "ExtendedScalar", tol: float = 1e-8) -> bool:
        a, b = self, ExtendedScalar.of(other)
        if a.is_infinity or b.is_infinity:
            big = self.INF_DETECTION
            am = a.modulus()
            bm = b.modulus()
            return am > big and bm > big or (a.is_infinity and b.is_infinity)
        scale = max(1.0, abs(a.value), abs(b.value))
        return abs(a.value - b.value) <= tol * scale

    def __str__(self):
        return "inf" if self.is_infinity else f"{self.value:g}"


@dataclass(frozen=True)
class ClarkData:
    """Spectral data of the unitary rank-one perturbation at |alpha| = 1.

    points are the n distinct unimodular eigenvalues, weights the masses
    1/|u'(point)|, and u_values the boundary values u(point) recorded so the
    empirical orientation u(point) vs alpha is data rather than an assumption.
    """

    alpha: complex
    points: tuple
    weights: tuple
    u_values: tuple

    def orientation(self, tol: float = 1e-8) -> str:
        """Which of u(point) = alpha / conj(alpha) the spectrum satisfies."""
        direct = max(abs(v - self.alpha) for v in self.u_values)
        flipped = max(abs(v - np.conj(self.alpha)) for v in self.u_values)
        if direct < tol:
            return "u(point) = alpha"
        if flipped < tol:
            return "u(point) = conj(alpha)"
        return "mixed"

    def to_json(self) -> dict:
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "points": [[p.real, p.imag] for p in self.points],
            "weights": list(self.weights),
            "orientation": self.orientation(),
        }


def clark_points(u: InnerFunction, alpha) -> ClarkData:
    """Eigenvalues and weights of the unitary perturbation of the compressed shift.

    Computed by eigendecomposition of the n x n unitary matrix (one code
    path; the same matrix certifies unitarity).  Weights are 1/|u'(point)|;
    the quadrature identity sum(w_j |f(point_j)|^2) = ||f||^2 is validated by
    tests, not assumed.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > UNIMODULAR_TOL:
        raise NotUnimodular(f"Clark parameter must be unimodular, got |alpha|={abs(alpha)!r}")
    from .operators import clark_perturbation  # local import: operators builds on this module

    mat = clark_perturbation(u, alpha).matrix
    eigvals = np.linalg.eigvals(mat)
    order = np.argsort(np.mod(np.angle(eigvals), 2.0 * np.pi))
    eigvals = eigvals[order]
    n = u.degree
    if n > 1:
        gaps = np.abs(eigvals[:, None] - eigvals[None, :]) + np.eye(n)
        if np.min(gaps) < 1e-10:
            raise DegenerateSpectrum("two Clark eigenvalues coincide; numerical failure")
    points = tuple(complex(z / abs(z)) for z in eigvals)
    weights = tuple(1.0 / abs(u.derivative(p)) for p in points)
    u_values = tuple(complex(u(p)) for p in points)
    return ClarkData(alpha, points, weights, u_values)
