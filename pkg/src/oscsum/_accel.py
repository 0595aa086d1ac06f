"""Optional numba acceleration with a pure-numpy fallback.

Every hot kernel in this module exists twice: an ``@njit`` scalar-loop
version and a vectorized numpy version.  Which one is bound to the public
name is decided once at import time:

- if numba imports cleanly and the environment variable ``OSCSUM_NO_NUMBA``
  is unset (or not ``"1"``), the jitted versions are used;
- otherwise the numpy versions are used.

``USING_NUMBA`` records the decision so callers (and the benchmark script)
can report which path is active.
"""

import math
import os

import numpy as np

_DISABLED = os.environ.get("OSCSUM_NO_NUMBA", "0") == "1"

try:
    if _DISABLED:
        raise ImportError("numba disabled by OSCSUM_NO_NUMBA")
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(pyfunc=None, **kwargs):
        """Null decorator when numba is unavailable or disabled."""

        def wrap(func):
            return func

        return wrap if pyfunc is None else wrap(pyfunc)

    def prange(*args):
        return range(*args)

USING_NUMBA = HAVE_NUMBA and not _DISABLED

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# phase sums:  sum_j w_j * e(phi_j)  with  e(x) = exp(2*pi*i*x)
# ---------------------------------------------------------------------------

@njit(cache=True, fastmath=True)
def _phase_sum_jit(phases, weights):
    re = 0.0
    im = 0.0
    for j in range(phases.shape[0]):
        t = TWO_PI * phases[j]
        re += weights[j] * math.cos(t)
        im += weights[j] * math.sin(t)
    return complex(re, im)


def _phase_sum_np(phases, weights):
    return complex(np.sum(weights * np.exp(2j * np.pi * phases)))


# ---------------------------------------------------------------------------
# Kloosterman sum  S(a,b;c) = sum_{x xbar = 1 mod c} e((a x + b xbar)/c)
# given a precomputed table inv[x] (= x^{-1} mod c, or -1 when x is not a
# unit).  The trig loop dominates; the table is built by the caller.
# ---------------------------------------------------------------------------

@njit(cache=True, fastmath=True)
def _kloosterman_jit(a, b, c, inv):
    re = 0.0
    im = 0.0
    for x in range(c):
        xb = inv[x]
        if xb < 0:
            continue
        t = TWO_PI * ((a * x + b * xb) % c) / c
        re += math.cos(t)
        im += math.sin(t)
    return complex(re, im)


def _kloosterman_np(a, b, c, inv):
    x = np.arange(c, dtype=np.int64)
    unit = inv >= 0
    ph = ((a * x[unit] + b * inv[unit]) % c) / c
    return complex(np.sum(np.exp(2j * np.pi * ph)))


# ---------------------------------------------------------------------------
# twisted double sum  sum_{d in (Z/c)^x} e(d/c) * S(d, m; f)
# expanded as sum_d sum_x e(d/c + (d x + m xbar)/f); inv_c and inv_f mark
# units mod c and give inverses mod f.
# ---------------------------------------------------------------------------

@njit(cache=True, fastmath=True)
def _twisted_sum_jit(c, m, f, inv_c, inv_f):
    re = 0.0
    im = 0.0
    for d in range(c):
        if inv_c[d] < 0:
            continue
        for x in range(f):
            xb = inv_f[x]
            if xb < 0:
                continue
            t = TWO_PI * (float(d) / c + float((d * x + m * xb) % f) / f)
            re += math.cos(t)
            im += math.sin(t)
    return complex(re, im)


def _twisted_sum_np(c, m, f, inv_c, inv_f):
    d = np.arange(c, dtype=np.int64)[inv_c >= 0]
    x = np.arange(f, dtype=np.int64)
    unit = inv_f >= 0
    x = x[unit]
    xb = inv_f[unit]
    ph = d[:, None] / c + ((d[:, None] * x[None, :] + m * xb[None, :]) % f) / f
    return complex(np.sum(np.exp(2j * np.pi * ph)))


# ---------------------------------------------------------------------------
# weighted oscillatory row-sum: out[i] = sum_j w[j] * e(P[i,j]).
# Used by the kernel quadratures where the node grid is shared across many
# evaluation points.
# ---------------------------------------------------------------------------

@njit(cache=True, fastmath=True, parallel=True)
def _phase_rows_jit(P, w):
    n, m = P.shape
    out = np.empty(n, dtype=np.complex128)
    for i in prange(n):
        re = 0.0
        im = 0.0
        for j in range(m):
            t = TWO_PI * P[i, j]
            re += w[j] * math.cos(t)
            im += w[j] * math.sin(t)
        out[i] = complex(re, im)
    return out


def _phase_rows_np(P, w):
    return np.exp(2j * np.pi * P) @ w


if USING_NUMBA:
    phase_sum = _phase_sum_jit
    kloosterman_core = _kloosterman_jit
    twisted_sum_core = _twisted_sum_jit
    phase_rows = _phase_rows_jit
else:
    phase_sum = _phase_sum_np
    kloosterman_core = _kloosterman_np
    twisted_sum_core = _twisted_sum_np
    phase_rows = _phase_rows_np


def inverse_table(c):
    """inv[x] = x^{-1} mod c for units, -1 otherwise, as an int64 array."""
    inv = np.full(c, -1, dtype=np.int64)
    if c == 1:
        # the single residue class is its own inverse
        inv[0] = 0
        return inv
    for x in range(1, c):
        if math.gcd(x, c) == 1:
            inv[x] = pow(x, -1, c)
    return inv
