"""Rational functions with no poles on the unit circle.

This is the symbol class for every operator in the package.  Coefficients
are stored densely in ascending powers of z; the denominator is kept monic.
Laurent polynomials sum(c_k z^k, -N <= k <= M) are represented with
denominator z^N.  Addition, multiplication, hat (coefficient conjugation),
conjugation on the circle and the flip J are exact coefficient operations;
only pairings against other symbols are numeric (see quadrature).

Construction from raw coefficients certifies that no denominator root lies
within 1e-6 of the circle; arithmetic on certified symbols cannot create
new poles, so intermediate results skip the (cubic-cost) root check.
"""

from __future__ import annotations

import json

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import quadrature
from .errors import PoleHit, PoleOnCircle

CIRCLE_POLE_MARGIN = 1e-6


def _as_coeffs(c) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(c, dtype=complex)).ravel()
    if arr.size == 0:
        arr = np.zeros(1, dtype=complex)
    return arr


def _trim(c: np.ndarray) -> np.ndarray:
    """Drop trailing exactly-zero coefficients, keeping at least one entry."""
    n = c.size
    while n > 1 and c[n - 1] == 0:
        n -= 1
    return c[:n]


class RationalSymbol:
    """A quotient of polynomials in z, pole free on the unit circle.

    Boundary values used by the quadrature come from an optional provider
    chain: arithmetic combines the operands' values pointwise, so a product
    of many factors is evaluated factor by factor rather than through its
    expanded coefficients (whose evaluation loses precision wherever
    denominator roots cluster).  The expanded coefficients remain the source
    of truth for exact algebra, certificates and serialization.
    """

    __slots__ = ("num", "den", "_vals", "_provider")

    def __init__(self, num, den=(1.0,), *, check_poles: bool = True, provider=None):
        num = _trim(_as_coeffs(num))
        den = _trim(_as_coeffs(den))
        if den.size == 1 and den[0] == 0:
            raise PoleOnCircle("denominator is identically zero")
        lead = den[-1]
        den = den / lead
        num = num / lead
        if num.size == 1 and num[0] == 0:
            # canonical zero symbol
            den = np.ones(1, dtype=complex)
            provider = None
        if check_poles:
            _certify_den(den)
        num.flags.writeable = False
        den.flags.writeable = False
        self.num = num
        self.den = den
        self._provider = provider
        self._vals: dict[int, np.ndarray] = {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalSymbol":
        return cls([0.0], [1.0], check_poles=False)

    @classmethod
    def one(cls) -> "RationalSymbol":
        return cls([1.0], [1.0], check_poles=False)

    @classmethod
    def constant(cls, c) -> "RationalSymbol":
        return cls([complex(c)], [1.0], check_poles=False)

    @classmethod
    def monomial(cls, k: int, coeff=1.0) -> "RationalSymbol":
        """coeff * z**k for any integer k (negative k puts z**|k| downstairs)."""
        if k >= 0:
            num = np.zeros(k + 1, dtype=complex)
            num[k] = coeff
            return cls(num, [1.0], check_poles=False)
        den = np.zeros(-k + 1, dtype=complex)
        den[-k] = 1.0
        return cls([coeff], den, check_poles=False)

    @classmethod
    def from_laurent(cls, coeffs: dict) -> "RationalSymbol":
        """Build sum(c_k z^k) from a {power: coefficient} mapping."""
        if not coeffs:
            return cls.zero()
        powers = sorted(int(k) for k in coeffs)
        lo = min(powers[0], 0)
        num = np.zeros(powers[-1] - lo + 1, dtype=complex)
        for k, c in coeffs.items():
            num[int(k) - lo] += complex(c)
        den = np.zeros(1 - lo, dtype=complex)
        den[-1] = 1.0
        return cls(num, den, check_poles=False)

    @classmethod
    def polynomial(cls, coeffs) -> "RationalSymbol":
        return cls(coeffs, [1.0], check_poles=False)

    # -- algebra -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalSymbol):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return RationalSymbol.constant(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        num = npoly.polyadd(npoly.polymul(self.num, o.den), npoly.polymul(o.num, self.den))
        return RationalSymbol(num, npoly.polymul(self.den, o.den), check_poles=False,
                              provider=lambda m: self.values_at(m) + o.values_at(m))

    __radd__ = __add__

    def __neg__(self):
        return RationalSymbol(-self.num, self.den, check_poles=False,
                              provider=lambda m: -self.values_at(m))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalSymbol(
            npoly.polymul(self.num, o.num), npoly.polymul(self.den, o.den),
            check_poles=False,
            provider=lambda m: self.values_at(m) * o.values_at(m),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # the incoming numerator becomes a denominator: re-certify
        return RationalSymbol(npoly.polymul(self.num, o.den), npoly.polymul(self.den, o.num),
                              provider=lambda m: self.values_at(m) / o.values_at(m))

    # -- circle involutions --------------------------------------------------

    def _reflected(self, m: int) -> np.ndarray:
        """Values of f(conj z) on the m-grid: the grid is conjugation closed."""
        vals = self.values_at(m)
        idx = (-np.arange(m)) % m
        return vals[idx]

    def hat(self) -> "RationalSymbol":
        """Coefficient conjugation: (hat f)(z) = conj(f(conj(z)))."""
        return RationalSymbol(np.conj(self.num), np.conj(self.den), check_poles=False,
                              provider=lambda m: np.conj(self._reflected(m)))

    def conj_circle(self) -> "RationalSymbol":
        """The function conj(f(z)) restricted to |z| = 1, as a rational function.

        conj(f(z)) = hat(f)(1/z) there; poles move to reciprocal-conjugate
        points, never onto the circle.
        """
        dp = self.num.size - 1
        dq = self.den.size - 1
        num = np.conj(self.num)[::-1].copy()
        den = np.conj(self.den)[::-1].copy()
        if dq >= dp:
            num = npoly.polymul(num, _zpow(dq - dp))
        else:
            den = npoly.polymul(den, _zpow(dp - dq))
        return RationalSymbol(num, den, check_poles=False,
                              provider=lambda m: np.conj(self.values_at(m)))

    def flip(self) -> "RationalSymbol":
        """The flip J: (Jf)(z) = conj(z) f(conj(z)) on the circle, i.e. (1/z) f(1/z).

        On Laurent monomials J(z^k) = z^(-k-1).
        """
        dp = self.num.size - 1
        dq = self.den.size - 1
        num = self.num[::-1].copy()
        den = self.den[::-1].copy()
        shift = dq - dp - 1
        if shift >= 0:
            num = npoly.polymul(num, _zpow(shift))
        else:
            den = npoly.polymul(den, _zpow(-shift))
        return RationalSymbol(
            num, den, check_poles=False,
            provider=lambda m: np.conj(quadrature.nodes(m)) * self._reflected(m))

    # -- evaluation ----------------------------------------------------------

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        nv = npoly.polyval(z, self.num)
        dv = npoly.polyval(z, self.den)
        if z.ndim == 0:
            if abs(dv) < 1e-13 * max(1.0, abs(nv)):
                raise PoleHit(f"symbol evaluated at a pole: z={complex(z):g}")
            return complex(nv / dv)
        return nv / dv

    def values_at(self, m: int) -> np.ndarray:
        """Boundary values on the m-point uniform circle grid (cached).

        Computed through the provider chain when one exists; direct
        evaluation of the stored coefficients is the leaf fallback.
        """
        got = self._vals.get(m)
        if got is None:
            fine = self._vals.get(2 * m)
            if fine is not None:
                got = fine[::2]
            elif self._provider is not None:
                got = np.asarray(self._provider(m), dtype=complex)
            else:
                z = quadrature.nodes(m)
                got = npoly.polyval(z, self.num) / npoly.polyval(z, self.den)
            self._vals[m] = got
        return got

    # -- predicates and export -----------------------------------------------

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.num) <= tol))

    @property
    def num_degree(self) -> int:
        return self.num.size - 1

    @property
    def den_degree(self) -> int:
        return self.den.size - 1

    def __repr__(self):
        return f"RationalSymbol(num={list(self.num)}, den={list(self.den)})"

    def to_json(self) -> dict:
        return {
            "num": [[float(c.real), float(c.imag)] for c in self.num],
            "den": [[float(c.real), float(c.imag)] for c in self.den],
        }

    @classmethod
    def from_json(cls, obj) -> "RationalSymbol":
        """Accept {"num": .., "den": ..} pairs or the {"laurent": {...}} shorthand."""
        if isinstance(obj, str):
            obj = json.loads(obj)
        if "laurent" in obj:
            coeffs = {int(k): complex(v[0], v[1]) for k, v in obj["laurent"].items()}
            return cls.from_laurent(coeffs)
        num = [complex(re, im) for re, im in obj["num"]]
        den = [complex(re, im) for re, im in obj.get("den", [[1.0, 0.0]])]
        return cls(num, den)


def _zpow(k: int) -> np.ndarray:
    out = np.zeros(k + 1, dtype=complex)
    out[k] = 1.0
    return out


def _certify_den(den: np.ndarray):
    if den.size <= 1:
        return
    roots = npoly.polyroots(den)
    if roots.size and np.min(np.abs(np.abs(roots) - 1.0)) < CIRCLE_POLE_MARGIN:
        raise PoleOnCircle(
            f"denominator root within {CIRCLE_POLE_MARGIN:g} of the unit circle"
        )
