"""Gamma and Bessel machinery.

Provides
--------
- ``gamma_complex``: complex gamma (thin scipy wrapper, kept as a single
  chokepoint so everything downstream shares one convention)
- ``bessel_jik``: J / I / K Bessel functions of complex order and positive
  (or complex, for J and I) argument, series plus asymptotic switching
- ``airy_pair``: (Ai, Ai') evaluated through Bessel-function identities
- ``olver_bessel_jm``: uniform large-order asymptotic for J_m(m x) built
  from Airy functions, valid across the turning point x = 1
- ``bessel_integral_rep_oracle``: circle-integral representation of J_m,
  used as an independent cross-check of everything else

Conventions
-----------
The order/argument switch between power series and asymptotic expansions
sits at |z| = max(20, 2|order|^2).  K of complex order is computed from the
real-axis integral of exp(-z cosh t) cosh(order*t), truncated where the
exponent has decayed by ~55 e-foldings.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy import special as sp

from .quadrature import gl_panels, trap_periodic


@dataclass(frozen=True)
class EvalConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_terms: int = 400
    quad_points: int = 256


DEFAULT_CFG = EvalConfig()


class OlverRegime(Enum):
    TURNING_POINT = "turning_point"
    NEAR_BELOW = "near_below"
    OSCILLATORY_MODERATE = "oscillatory_moderate"
    OSCILLATORY_FAR = "oscillatory_far"


def gamma_complex(s):
    """Gamma function for complex s (poles at nonpositive integers follow
    scipy's inf/nan convention)."""
    return complex(sp.gamma(complex(s)))


# ---------------------------------------------------------------------------
# J / I / K with complex order
# ---------------------------------------------------------------------------

def _series_ji(order, z, cfg, signed, shift=0.0):
    # sum_k sign^k (z/2)^{order+2k} / (k! Gamma(order+k+1)), sign=-1 for J.
    # shift is subtracted inside the log-space terms, so the returned value
    # is the Bessel function times exp(-shift).
    w = complex(z) / 2.0
    logw = np.log(w)
    n_terms = min(cfg.max_terms, int(3.0 * abs(w) + 0.6 * abs(order) + 40))
    k = np.arange(n_terms)
    logt = (order + 2 * k) * logw - sp.loggamma(k + 1) - sp.loggamma(order + k + 1) - shift
    terms = np.exp(logt)
    if signed:
        terms = terms * ((-1.0) ** k)
    return complex(np.sum(terms))


def bessel_j_scaled(order, z, shift, cfg=None):
    """J_order(z) * exp(-shift), summed in log space.

    Stable when J itself is exponentially large (imaginary order of size t
    makes it ~e^{pi t}) but the shifted value is O(1).  Series only, so the
    argument must sit inside the series radius for the given order.
    """
    cfg = cfg or DEFAULT_CFG
    return _series_ji(complex(order), complex(z), cfg, signed=True, shift=float(shift))


def _hankel_pq(order, z, cfg):
    # a_k(order) = prod_{i<=k} (4 order^2 - (2i-1)^2) / (8 i), accumulated
    # until the terms stop shrinking (asymptotic series).
    s2 = 4.0 * order * order
    term = 1.0 + 0.0j
    p = 1.0 + 0.0j
    q = 0.0 + 0.0j
    prev = np.inf
    for i in range(1, 30):
        term = term * (s2 - (2 * i - 1) ** 2) / (8.0 * i * z)
        if abs(term) >= prev:
            break
        prev = abs(term)
        if i % 2 == 1:
            q += term * (-1.0) ** ((i - 1) // 2)
        else:
            p += term * (-1.0) ** (i // 2)
        if abs(term) < cfg.abs_tol:
            break
    return p, q


def _asymptotic_j(order, z, cfg):
    p, q = _hankel_pq(order, z, cfg)
    w = z - (np.pi / 2) * order - np.pi / 4
    return np.sqrt(2.0 / (np.pi * z)) * (p * np.cos(w) - q * np.sin(w))


def _asymptotic_i(order, z, cfg):
    # leading exponential only; the reflected e^{-z} piece is below 1e-17
    # relative at the switch radius and beyond
    s2 = 4.0 * order * order
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    prev = np.inf
    for i in range(1, 30):
        term = term * -(s2 - (2 * i - 1) ** 2) / (8.0 * i * z)
        if abs(term) >= prev:
            break
        prev = abs(term)
        total += term
        if abs(term) < cfg.abs_tol:
            break
    return np.exp(z) / np.sqrt(2.0 * np.pi * z) * total


def _k_integral(order, z, cfg):
    # K_s(z) = int_0^inf exp(-z cosh t) cosh(s t) dt, Re z > 0.
    # Cut where z(cosh t - 1) - |Re s| t > 55; two passes pin the cut.
    x = np.real(complex(z))
    rs = abs(np.real(complex(order)))
    t_cut = np.arccosh(1.0 + 60.0 / x)
    t_cut = np.arccosh(1.0 + (60.0 + rs * t_cut) / x)
    n_panels = max(16, int(np.ceil(t_cut * (2.0 + 0.5 * abs(np.imag(complex(order)))))))
    t, wq = gl_panels(0.0, t_cut, n_panels, 16)
    vals = np.exp(-z * np.cosh(t)) * np.cosh(order * t)
    return complex(np.sum(wq * vals))


def bessel_jik(kind, order, z, cfg=None):
    """Bessel function of the given kind ("J", "I", or "K").

    order may be complex; z must be positive real for "K" (Re z > 0 is
    accepted) and may be complex with |arg z| < pi for "J" and "I".
    Series below |z| = max(20, 2|order|^2), asymptotics above.
    """
    cfg = cfg or DEFAULT_CFG
    order = complex(order)
    z = complex(z)
    if kind == "K":
        if np.real(z) <= 0:
            raise ValueError("K requires Re z > 0")
        return _k_integral(order, z, cfg)
    if kind not in ("J", "I"):
        raise ValueError("kind must be one of J, I, K")
    if z == 0:
        return complex(1.0) if order == 0 else complex(0.0)
    switch = max(20.0, 2.0 * abs(order) ** 2)
    if kind == "J":
        if abs(z) < switch:
            return _series_ji(order, z, cfg, signed=True)
        return complex(_asymptotic_j(order, z, cfg))
    if abs(z) < switch:
        return _series_ji(order, z, cfg, signed=False)
    return complex(_asymptotic_i(order, z, cfg))


# ---------------------------------------------------------------------------
# Airy pair through Bessel identities
# ---------------------------------------------------------------------------

_AI0 = 3.0 ** (-2.0 / 3.0) / sp.gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / sp.gamma(1.0 / 3.0)


def _airy_series(y, n_terms=40):
    # Maclaurin pair: Ai = c1 f - c2 g with
    # f = sum 3^k (1/3)_k y^{3k}/(3k)!,  g = sum 3^k (2/3)_k y^{3k+1}/(3k+1)!
    k = np.arange(n_terms)
    poch13 = np.exp(sp.gammaln(k + 1.0 / 3.0) - sp.gammaln(1.0 / 3.0))
    poch23 = np.exp(sp.gammaln(k + 2.0 / 3.0) - sp.gammaln(2.0 / 3.0))
    c1 = _AI0
    c2 = -_AIP0
    f = np.sum(3.0 ** k * poch13 * y ** (3 * k) / sp.factorial(3 * k))
    g = np.sum(3.0 ** k * poch23 * y ** (3 * k + 1) / sp.factorial(3 * k + 1))
    kp = k[1:]
    fp = np.sum(3.0 ** kp * poch13[1:] * y ** (3 * kp - 1) / sp.factorial(3 * kp - 1))
    gp = np.sum(3.0 ** k * poch23 * y ** (3 * k) / sp.factorial(3 * k))
    return c1 * f - c2 * g, c1 * fp - c2 * gp


def airy_pair(y, cfg=None):
    """(Ai(y), Ai'(y)) via K Bessel (y > 0) or J Bessel (y < 0) identities.

    A short Maclaurin series bridges |y| <= 0.01 so the y = 0 values are
    exact limits.
    """
    cfg = cfg or DEFAULT_CFG
    y = float(y)
    if abs(y) <= 0.01:
        if y == 0.0:
            return _AI0, _AIP0
        return _airy_series(y)
    xi = (2.0 / 3.0) * abs(y) ** 1.5
    if y > 0:
        ai = (1.0 / np.pi) * np.sqrt(y / 3.0) * bessel_jik("K", 1.0 / 3.0, xi, cfg)
        aip = -(y / (np.pi * np.sqrt(3.0))) * bessel_jik("K", 2.0 / 3.0, xi, cfg)
    else:
        t = -y
        jp = bessel_jik("J", 1.0 / 3.0, xi, cfg)
        jm = bessel_jik("J", -1.0 / 3.0, xi, cfg)
        ai = (np.sqrt(t) / 3.0) * (jp + jm)
        jp2 = bessel_jik("J", 2.0 / 3.0, xi, cfg)
        jm2 = bessel_jik("J", -2.0 / 3.0, xi, cfg)
        aip = (t / 3.0) * (jp2 - jm2)
    return float(np.real(ai)), float(np.real(aip))


# ---------------------------------------------------------------------------
# uniform large-order asymptotics for J_m(m x)
# ---------------------------------------------------------------------------

def _u_polys(n_max):
    # u_{k+1} = (1/2) v^2 (1 - v^2) u_k' + (1/8) int_0^v (1 - 5 t^2) u_k dt,
    # kept as exact Fraction coefficient maps {degree: coeff}
    polys = [{0: Fraction(1)}]
    for _ in range(n_max):
        u = polys[-1]
        nxt = {}
        for d, c in u.items():
            if d > 0:
                dc = c * d
                nxt[d + 1] = nxt.get(d + 1, Fraction(0)) + dc / 2
                nxt[d + 3] = nxt.get(d + 3, Fraction(0)) - dc / 2
            nxt[d + 1] = nxt.get(d + 1, Fraction(0)) + c / Fraction(8 * (d + 1))
            nxt[d + 3] = nxt.get(d + 3, Fraction(0)) - 5 * c / Fraction(8 * (d + 3))
        polys.append({d: c for d, c in nxt.items() if c != 0})
    return polys


_U_POLYS = _u_polys(6)


def u_poly(n):
    """Exact coefficients {degree: Fraction} of the n-th order-expansion
    polynomial (u_0 = 1, u_1 = (3v - 5v^3)/24, ...)."""
    return dict(_U_POLYS[n])


def u_poly_eval(n, v):
    return sum(float(c) * v ** d for d, c in _U_POLYS[n].items())


def _ab_coeffs(n_max):
    # a_0 = b_0 = 1; a_s = prod_{i=0}^{3s-1}(i + 1/2) / (3^{2s} (2s)!),
    # b_s = -(6s+1)/(6s-1) a_s
    a = [Fraction(1)]
    b = [Fraction(1)]
    for s in range(1, n_max + 1):
        num = Fraction(1)
        for i in range(3 * s):
            num *= Fraction(2 * i + 1, 2)
        fact = Fraction(1)
        for i in range(1, 2 * s + 1):
            fact *= i
        a_s = num / (Fraction(3) ** (2 * s) * fact)
        a.append(a_s)
        b.append(-Fraction(6 * s + 1, 6 * s - 1) * a_s)
    return a, b


_A_COEF, _B_COEF = _ab_coeffs(6)


def ab_coeff(s):
    """(a_s, b_s) as exact Fractions."""
    return _A_COEF[s], _B_COEF[s]


def zeta_of_x(x):
    """Turning-point variable: (2/3) zeta^{3/2} = log((1+sqrt(1-x^2))/x)
    - sqrt(1-x^2) for x <= 1, and the arcsec continuation for x > 1.
    Positive for x < 1, zero at x = 1, negative for x > 1."""
    x = float(x)
    if x <= 0:
        raise ValueError("need x > 0")
    d = 1.0 - x
    if abs(d) <= 1e-3:
        # two-term inverse series; cancellation in the closed form costs
        # ~(1-x)^{-3/2} ulps there
        c = 2.0 ** (1.0 / 3.0)
        return c * d + 0.3 * c * d * d
    if x < 1.0:
        w = np.sqrt(1.0 - x * x)
        return (1.5 * (np.log((1.0 + w) / x) - w)) ** (2.0 / 3.0)
    w = np.sqrt(x * x - 1.0)
    return -((1.5 * (w - np.arccos(1.0 / x))) ** (2.0 / 3.0))


def _x_of_zeta(zeta):
    # Newton inversion of zeta_of_x; used only to build the small-|zeta|
    # Chebyshev bridge for the A_s/B_s envelopes.  zeta_of_x is strictly
    # decreasing with d(zeta)/dx = -sqrt(|1-x^2|) / (x sqrt(|zeta|))
    # (limit -2^{1/3} at x = 1).
    c = 2.0 ** (1.0 / 3.0)
    x = 1.0 - zeta / c + 0.3 * zeta * zeta / (c * c)
    for _ in range(60):
        z0 = zeta_of_x(x)
        f = z0 - zeta
        if abs(z0) < 1e-12:
            dzdx = -c
        else:
            dzdx = -np.sqrt(abs(1.0 - x * x)) / (x * np.sqrt(abs(z0)))
        step = f / dzdx
        x -= step
        if abs(step) < 1e-14:
            break
    return x


def _envelope_direct(s_idx, which, zeta):
    # A_s = sum_{j<=2s} b_j zeta^{-3j/2} u_{2s-j}(v)
    # B_s = -zeta^{-1/2} sum_{j<=2s+1} a_j zeta^{-3j/2} u_{2s+1-j}(v)
    # with v = (1 - x^2)^{-1/2}; complex arithmetic handles zeta < 0 and the
    # result is real either way.
    x = _x_of_zeta(zeta)
    v = (1.0 - x * x + 0j) ** (-0.5)
    zc = zeta + 0j
    if which == "A":
        tot = 0j
        for j in range(2 * s_idx + 1):
            tot += complex(_B_COEF[j]) * zc ** (-1.5 * j) * u_poly_eval(2 * s_idx - j, v)
        return tot.real
    tot = 0j
    for j in range(2 * s_idx + 2):
        tot += complex(_A_COEF[j]) * zc ** (-1.5 * j) * u_poly_eval(2 * s_idx + 1 - j, v)
    return (-(zc ** -0.5) * tot).real


_ENVELOPE_FIT = {}


def _envelope(s_idx, which, zeta):
    # the direct formulas cancel catastrophically as zeta -> 0; below
    # |zeta| = 0.06 switch to a cached polynomial fit built from clean
    # samples at 0.06 <= |zeta| <= 0.35 (the envelopes are analytic at 0)
    if abs(zeta) >= 0.06:
        return _envelope_direct(s_idx, which, zeta)
    key = (s_idx, which)
    if key not in _ENVELOPE_FIT:
        zs = np.concatenate([np.linspace(-0.18, -0.06, 16), np.linspace(0.06, 0.18, 16)])
        vals = [_envelope_direct(s_idx, which, z) for z in zs]
        _ENVELOPE_FIT[key] = np.polynomial.chebyshev.Chebyshev.fit(zs, vals, 10, domain=[-0.18, 0.18])
    return float(_ENVELOPE_FIT[key](zeta))


def classify_olver_regime(m, x):
    band = float(m) ** (-2.0 / 3.0)
    if abs(x - 1.0) <= band:
        return OlverRegime.TURNING_POINT
    if x < 1.0:
        return OlverRegime.NEAR_BELOW
    if x <= 2.0:
        return OlverRegime.OSCILLATORY_MODERATE
    return OlverRegime.OSCILLATORY_FAR


def olver_bessel_jm(m, x, k=2, cfg=None):
    """Uniform large-order approximation of J_m(m x), m >= 1, x > 0.

    J_m(m x) ~ (4 zeta / (1-x^2))^{1/4} [ Ai(m^{2/3} zeta) / m^{1/3}
               * sum_{s<=k} A_s(zeta)/m^{2s}
               + Ai'(m^{2/3} zeta) / m^{5/3} * sum_{s<=k-1} B_s(zeta)/m^{2s} ]

    Valid uniformly through the turning point x = 1.  Returns
    (value, regime).
    """
    cfg = cfg or DEFAULT_CFG
    if m < 1:
        raise ValueError("need m >= 1")
    if k > 2:
        raise ValueError("correction order k <= 2 is supported")
    m = float(m)
    x = float(x)
    zeta = zeta_of_x(x)
    d = 1.0 - x
    if abs(d) < 1e-12:
        pref = 2.0 ** (1.0 / 3.0)
    elif abs(d) <= 1e-3:
        c = 2.0 ** (1.0 / 3.0)
        # 4 zeta / (1 - x^2) with the series zeta; avoids 0/0 cancellation
        pref = (4.0 * c * (1.0 + 0.3 * d) / (2.0 - d)) ** 0.25
    else:
        pref = (((4.0 * zeta / (1.0 - x * x)) + 0j) ** 0.25).real
    ai, aip = airy_pair(m ** (2.0 / 3.0) * zeta, cfg)
    asum = sum(_envelope(s, "A", zeta) / m ** (2 * s) for s in range(k + 1))
    bsum = sum(_envelope(s, "B", zeta) / m ** (2 * s) for s in range(k))
    val = pref * (ai / m ** (1.0 / 3.0) * asum + aip / m ** (5.0 / 3.0) * bsum)
    return float(val), classify_olver_regime(m, x)


# ---------------------------------------------------------------------------
# circle-integral oracle for J_m
# ---------------------------------------------------------------------------

def bessel_integral_rep_oracle(m, z, cfg=None):
    """J_m(z) = (1 / (2 pi i^m)) int_0^{2 pi} exp(i z cos phi + i m phi) dphi
    by the trapezoid rule (spectrally accurate; the node count grows with
    |z| and m to stay past the Nyquist point of the integrand)."""
    cfg = cfg or DEFAULT_CFG
    m = int(m)
    z = complex(z)
    n = max(cfg.quad_points, 16 * int(abs(z) + 1) + 8 * abs(m) + 64)
    phi, w = trap_periodic(n)
    vals = np.exp(1j * z * np.cos(phi) + 1j * m * phi)
    return complex(np.sum(w * vals) / (2.0 * np.pi * 1j ** m))
