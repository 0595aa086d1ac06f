"""Shared quadrature helpers.

Composite Gauss-Legendre panels for smooth integrands, and a phase-aware
node-count heuristic for oscillatory ones.  All routines return plain
``(nodes, weights)`` arrays so callers can vectorize the integrand
evaluation themselves.
"""

import numpy as np


class AccuracyError(RuntimeError):
    """A quadrature or series budget cannot reach the requested target."""


_GL_CACHE = {}


def _gl_ref(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def gl_panels(a, b, n_panels, n_nodes=16):
    """Composite Gauss-Legendre rule on [a, b].

    Returns (x, w) with n_panels * n_nodes nodes.  Exact for polynomials of
    degree 2*n_nodes - 1 on each panel; for analytic integrands the error
    decays geometrically in n_nodes once the panel width resolves the
    integrand's scale of variation.
    """
    xr, wr = _gl_ref(n_nodes)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * xr[None, :]).ravel()
    w = (half[:, None] * wr[None, :]).ravel()
    return x, w


def gl_oscillatory(a, b, max_radians, n_nodes=16, min_panels=1, per_panel=4.0):
    """Gauss-Legendre panels sized so each panel sees few oscillations.

    max_radians is (an upper bound on) the total phase variation of the
    integrand over [a, b]; panels are chosen so each holds at most
    ``per_panel`` radians, which keeps n_nodes-point Gauss accurate to
    near machine precision per panel.
    """
    n_panels = max(min_panels, int(np.ceil(abs(max_radians) / per_panel)))
    return gl_panels(a, b, n_panels, n_nodes)


def trap_periodic(n):
    """Nodes and weights of the n-point trapezoid rule on [0, 2*pi).

    Spectrally accurate for smooth 2*pi-periodic integrands.
    """
    x = np.arange(n) * (2.0 * np.pi / n)
    w = np.full(n, 2.0 * np.pi / n)
    return x, w
