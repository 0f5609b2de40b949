"""Adaptive trapezoid quadrature on the unit circle.

All pairings in the package reduce to means of products of rational
functions over uniform grids on the circle.  Integrands are analytic in an
annulus around the circle (denominator roots are certified to stay at least
1e-6 away), so the periodic trapezoid rule converges geometrically; the node
count is doubled until two successive levels agree, and hitting the cap is a
hard error rather than a silent inaccuracy.

The M-point grid is the even-index subset of the 2M-point grid, so each
refinement reuses every previously computed value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence

QUAD_TOL = 1e-12
QUAD_START = 1024
QUAD_CAP = 65536


@dataclass(frozen=True)
class QuadratureSettings:
    tol: float = QUAD_TOL
    start: int = QUAD_START
    cap: int = QUAD_CAP


DEFAULT = QuadratureSettings()

_active: list[QuadratureSettings] = [DEFAULT]


def current() -> QuadratureSettings:
    return _active[-1]


class override:
    """Context manager swapping the default settings (used by the CLI/harness)."""

    def __init__(self, settings: QuadratureSettings):
        self.settings = settings

    def __enter__(self):
        _active.append(self.settings)
        return self.settings

    def __exit__(self, *exc):
        _active.pop()
        return False


_nodes_cache: dict[int, np.ndarray] = {}


class _Stats:
    """Running counters, snapshotted into suite reports."""

    def __init__(self):
        self.pairings = 0
        self.max_nodes = 0

    def record(self, m: int):
        self.pairings += 1
        if m > self.max_nodes:
            self.max_nodes = m

    def snapshot(self) -> dict:
        return {"pairings": self.pairings, "max_nodes": self.max_nodes}

    def reset(self):
        self.pairings = 0
        self.max_nodes = 0


STATS = _Stats()


def nodes(m: int) -> np.ndarray:
    """The m-th roots of unity, exp(2*pi*i*k/m) for k = 0..m-1."""
    got = _nodes_cache.get(m)
    if got is None:
        theta = 2.0 * np.pi * np.arange(m) / m
        got = np.exp(1j * theta)
        got.flags.writeable = False
        _nodes_cache[m] = got
    return got


def _value_matrix(symbols, m: int) -> np.ndarray:
    """Stack boundary values of symbols into an (m, len(symbols)) array."""
    return np.column_stack([s.values_at(m) for s in symbols])


def pairing_matrix(fs, gs, settings: QuadratureSettings | None = None) -> np.ndarray:
    """G[i, j] = (1/2pi) \\int fs[j](e^{it}) conj(gs[i](e^{it})) dt.

    fs and gs are sequences of objects exposing ``values_at(m)``
    (RationalSymbol does).  Adaptive: doubles the node count until the whole
    matrix is stable to ``settings.tol`` in max norm.
    """
    s = settings or current()
    m = s.start
    F2 = _value_matrix(fs, 2 * m)
    G2 = _value_matrix(gs, 2 * m)
    while True:
        full = G2.conj().T @ F2 / (2 * m)
        half = G2[::2].conj().T @ F2[::2] / m
        # the roundoff floor of the mean grows with the integrand magnitude,
        # so the stopping rule is relative to it (never below tol itself)
        scale = max(1.0, float(np.max(np.abs(F2))) * float(np.max(np.abs(G2))))
        if np.max(np.abs(full - half)) < s.tol * scale:
            STATS.record(2 * m)
            return full
        m *= 2
        if 2 * m > s.cap:
            raise NoConvergence(
                f"circle quadrature did not stabilize to {s.tol:g} within {s.cap} nodes"
            )
        F2 = _value_matrix(fs, 2 * m)
        G2 = _value_matrix(gs, 2 * m)


def pairing_vector(f, gs, settings: QuadratureSettings | None = None) -> np.ndarray:
    """Column of pairings <f, gs[i]> as a 1-d array."""
    return pairing_matrix([f], gs, settings)[:, 0]
