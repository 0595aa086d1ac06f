"""Spectral test functions and the rank-two kernel averages they weight.

Three layers live here.

1. Archimedean gamma factors for the rank-three form and its rank-two
   twists, the pole-annihilating polynomial p, and the symbol quotient G
   built from them.
2. The localized test-function family: a two-sided Gaussian bump k centered
   at +-T of width M, its polynomial mollification k_nat, and the analytic
   completion h = G * k_nat, together with the smoothed functional-equation
   weight V realized as a truncated vertical contour integral.
3. Spectral averages of the rank-two kernel against h under the Plancherel
   measure: the total mass H, the kernel average H(x) (or H(z) at a complex
   place), and phase-space representations of H(x) as short integrals of a
   Schwartz envelope g against trigonometric-hyperbolic phases.

The envelope g is built once per test-function family as the inverse
Fourier transform of the measure-weighted spectral profile of h, sampled on
a uniform grid and refined spectrally; with that choice the phase-space
representation at a real place is an exact identity, not an asymptotic one,
so the two routes to H(x) check each other at quadrature accuracy.
"""

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import scipy.special as sp
from scipy.interpolate import CubicSpline

from .archkernels import (
    REAL_PLACE,
    ArchPlace,
    SpectralTriple,
    rank2_kernel_complex,
    rank2_kernel_real,
)
from .quadrature import AccuracyError, gl_panels

__all__ = [
    "TestSpec",
    "AFEWeight",
    "TestFunctionValues",
    "gamma_factor",
    "gamma_factor_pair",
    "afe_G",
    "test_function_eval",
    "afe_weight_V",
    "bessel_integral_H0",
    "bessel_integral_H",
    "bessel_integral_rep",
    "schwartz_g",
    "rep_calibration",
]


# ---------------------------------------------------------------------------
# parameter types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestSpec:
    """Parameters of one localized spectral test-function family.

    T is the center and M the width of the Gaussian bump pair; A_prime is
    the (even, positive) mollifier order; u is the symbol offset, whose real
    part eps > 0 also anchors the admissible window T^eps <= M <= T^(1-eps).
    """

    T: float
    M: float
    A_prime: int = 2
    u: complex = 0.1 + 0.0j
    place: ArchPlace = REAL_PLACE

    def __post_init__(self):
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "M", float(self.M))
        object.__setattr__(self, "u", complex(self.u))
        if not self.T > 1.0:
            raise ValueError("T must exceed 1")
        if not self.M > 0.0:
            raise ValueError("M must be positive")
        if self.A_prime <= 0 or self.A_prime % 2 != 0:
            raise ValueError("A_prime must be a positive even integer")
        eps = self.u.real
        if eps <= 0.0:
            raise ValueError("Re u must be positive")
        if abs(self.u.imag) > self.log_norm + 1e-12:
            raise ValueError("|Im u| must not exceed log N(T)")
        if not (self.T ** eps - 1e-9 <= self.M <= self.T ** (1.0 - eps) + 1e-9):
            raise ValueError("M must lie in the window [T^eps, T^(1-eps)]")

    @property
    def eps(self):
        return self.u.real

    @property
    def log_norm(self):
        # log N(T) for the single place: degree * log T
        return self.place.degree * math.log(self.T)


@dataclass(frozen=True)
class AFEWeight:
    """A smoothed functional-equation weight V(.; nu) ready to evaluate.

    nu is the (real) rank-two spectral point of the twist; U truncates the
    vertical contour at |Im u| <= U and defaults to log N(T).
    """

    spec: TestSpec
    mu: SpectralTriple
    nu: float = 0.0
    U: float = None

    def __post_init__(self):
        if self.spec.place != self.mu.place:
            raise ValueError("spec and mu live at different places")
        object.__setattr__(self, "nu", float(self.nu))
        if self.U is None:
            object.__setattr__(self, "U", self.spec.log_norm)
        else:
            object.__setattr__(self, "U", float(self.U))
        if not self.U > 0.0:
            raise ValueError("U must be positive")


TestFunctionValues = namedtuple("TestFunctionValues", "k k_nat p G h")


# ---------------------------------------------------------------------------
# gamma factors and the symbol quotient
# ---------------------------------------------------------------------------

def _lg_triple(s, mu):
    # log of (n pi)^(-3ns/2) Gamma(n(s-mu)/2) Gamma(ns/2) Gamma(n(s+mu)/2)
    n = mu.place.degree
    out = -1.5 * n * s * math.log(n * math.pi)
    for m in mu.components:
        out = out + sp.loggamma(0.5 * n * (s - m))
    return out


def _pole_guard(s, mu, shifts=(0.0,)):
    n = mu.place.degree
    for dv in shifts:
        for m in mu.components:
            z = 0.5 * n * (s + dv - m)
            near = round(z.real)
            if near <= 0 and abs(z - near) < 1e-10:
                raise ValueError("gamma factor pole at s = %r" % (s,))


def gamma_factor(s, mu):
    """The completed-form gamma factor gamma_v(s) for the triple mu.

    Evaluates (n pi)^(-3ns/2) times the product of Gamma(n(s - mu_j)/2) over
    the components (mu, 0, -mu), with n the place degree.  Arguments at a
    pole of any factor raise.
    """
    s = complex(s)
    _pole_guard(s, mu)
    return complex(np.exp(_lg_triple(s, mu)))


def gamma_factor_pair(s, nu, mu):
    """The twisted gamma factor gamma_v(s, nu) = gamma_v(s-i nu) gamma_v(s+i nu)."""
    s = complex(s)
    nu = complex(nu)
    _pole_guard(s - 1j * nu, mu)
    _pole_guard(s + 1j * nu, mu)
    return complex(np.exp(_lg_triple(s - 1j * nu, mu) + _lg_triple(s + 1j * nu, mu)))


def _p_poly(s, nu, mu, a_prime):
    # prod over k < n A'/2 of ((s + 2k/n - mu_j)^2 + nu^2), all three components
    n = mu.place.degree
    out = 1.0
    nu_sq = nu * nu
    for k in range(n * a_prime // 2):
        base = s + 2.0 * k / n
        for m in mu.components:
            out = out * ((base - m) ** 2 + nu_sq)
    return out


def _lg_pair_quotient(u, nu, mu):
    # log gamma_v(1/2 + u, nu) - log gamma_v(1/2, nu); the i nu parts of the
    # power-of-pi prefactor cancel between the +- shifts
    n = mu.place.degree
    tot = -3.0 * n * u * math.log(n * math.pi)
    for m in mu.components:
        for sgn in (1.0, -1.0):
            a = 0.25 * n * (1.0 + 2.0 * (u + 1j * sgn * nu - m))
            b = 0.25 * n * (1.0 + 2.0 * (1j * sgn * nu - m))
            tot = tot + sp.loggamma(a) - sp.loggamma(b)
    return tot


def afe_G(u, nu, mu, a_prime=2):
    """The symbol quotient G_v(u, nu).

    Ratio of the twisted gamma factor at 1/2 + u to its value at 1/2, times
    the even polynomial quotient p(1/2+u) p(1/2-u) / p(1/2)^2.  Equals 1 at
    u = 0 exactly.  Accepts arrays in either argument.
    """
    u = np.asarray(u, dtype=complex)
    nu = np.asarray(nu, dtype=complex)
    gq = np.exp(_lg_pair_quotient(u, nu, mu))
    p0 = _p_poly(0.5, nu, mu, a_prime)
    pq = (_p_poly(0.5 + u, nu, mu, a_prime)
          * _p_poly(0.5 - u, nu, mu, a_prime)) / (p0 * p0)
    out = gq * pq
    if out.ndim == 0:
        return complex(out)
    return out


_STRIP_MARGIN = 9.0 / 32.0


def test_function_eval(spec, nu, mu):
    """All five members of the test-function family at spectral point nu.

    Returns (k, k_nat, p, G, h) with k the two-sided Gaussian bump,
    p = p(1/2, nu), k_nat = k p^2 / T^(6nA'), G the symbol quotient at
    spec.u, and h = G k_nat computed in a grouping that never divides by
    p(1/2, nu) so it stays finite where p has zeros off the real axis.
    nu may be a scalar or an array; it must stay inside the analyticity
    strip |Im nu| <= A' + 9/32.
    """
    if spec.place != mu.place:
        raise ValueError("spec and mu live at different places")
    nu_arr = np.asarray(nu)
    scalar = nu_arr.ndim == 0
    if np.max(np.abs(np.imag(np.asarray(nu_arr, dtype=complex)))) \
            > spec.A_prime + _STRIP_MARGIN + 1e-12:
        raise ValueError("nu outside the analyticity strip |Im nu| <= A' + 9/32")
    n = spec.place.degree
    T, M = spec.T, spec.M
    k = np.exp(-((nu_arr - T) / M) ** 2) + np.exp(-((nu_arr + T) / M) ** 2)
    p0 = _p_poly(0.5, nu_arr, mu, spec.A_prime)
    scale = T ** (6.0 * n * spec.A_prime)
    k_nat = k * p0 * p0 / scale
    gq = np.exp(_lg_pair_quotient(spec.u, np.asarray(nu_arr, dtype=complex), mu))
    pp = (_p_poly(0.5 + spec.u, nu_arr, mu, spec.A_prime)
          * _p_poly(0.5 - spec.u, nu_arr, mu, spec.A_prime))
    G = gq * pp / (p0 * p0)
    h = k * gq * pp / scale
    if scalar:
        k, k_nat, p0 = np.real_if_close(k), np.real_if_close(k_nat), np.real_if_close(p0)
        return TestFunctionValues(
            k.item(), k_nat.item(), p0.item(), complex(G), complex(h))
    return TestFunctionValues(k, k_nat, p0, G, h)


# ---------------------------------------------------------------------------
# the smoothed functional-equation weight V
# ---------------------------------------------------------------------------

def _v_contour(eps, U, y, nu, mu, a_prime):
    # (1/2 pi) int over t in [-U, U] of G(eps+it) e^(u^2) y^(-u) / u dt;
    # panel width resolves both the 1/u peak (scale eps) and the y^(-it) twist
    freq = abs(math.log(y))
    n_pan = max(int(math.ceil(2.0 * U / 0.1)), int(math.ceil(2.0 * U * freq / 4.0))) + 4
    t, wt = gl_panels(-U, U, n_pan)
    u = eps + 1j * t
    vals = afe_G(u, nu, mu, a_prime) * np.exp(u * u) * np.exp(-u * math.log(y)) / u
    return complex(np.sum(wt * vals) / (2.0 * math.pi))


def afe_weight_V(w, y):
    """The functional-equation weight V(y; nu) for the family in w.

    Truncated vertical contour at Re u = eps, |Im u| <= U: the integrand is
    G(u, nu) e^(u^2) y^(-u) / u.  Tends to 1 as y -> 0+ (the u = 0 residue)
    and decays superpolynomially once y passes the cube of the conductor.
    """
    y = float(y)
    if y <= 0.0:
        raise ValueError("y must be positive")
    return _v_contour(w.spec.eps, w.U, y, w.nu, w.mu, w.spec.A_prime)


# ---------------------------------------------------------------------------
# spectral averages of the rank-two kernel
# ---------------------------------------------------------------------------

# the bump pair falls below 1e-12 of its peak past |nu - T| = 5.26 M
_NU_CUT = 5.26
# spectral-average work estimate above which we refuse to grind
_WORK_CAP = 2.0e8


def _check_pair(spec, mu):
    if spec.place != mu.place:
        raise ValueError("spec and mu live at different places")


def _nu_grid(spec, freq, w_arg):
    lo = max(0.0, spec.T - _NU_CUT * spec.M)
    hi = spec.T + _NU_CUT * spec.M
    n_pan = int(math.ceil((hi - lo) * (4.0 / spec.M + freq / 4.0))) + 4
    work = n_pan * 16.0 * (3.2 * w_arg + 2000.0)
    if work > _WORK_CAP:
        raise AccuracyError(
            "spectral average would need about %.1e kernel quadrature nodes; "
            "oscillation budget exceeded" % work)
    return gl_panels(lo, hi, n_pan)


def _plancherel(spec, nodes):
    if spec.place.degree == 1:
        return nodes * np.tanh(np.pi * nodes)
    return nodes * nodes


def bessel_integral_H0(spec, mu):
    """Total Plancherel mass H of the test function h.

    Integrates h against nu tanh(pi nu) d nu (real place) or nu^2 d nu
    (complex place) over the full spectral line.  Real-valued whenever
    spec.u is real; a genuinely complex value is returned as such.
    """
    _check_pair(spec, mu)
    nodes, wts = _nu_grid(spec, 0.0, 0.0)
    h = test_function_eval(spec, nodes, mu).h
    val = 2.0 * complex(np.sum(wts * h * _plancherel(spec, nodes)))
    if abs(val.imag) <= 1e-9 * abs(val.real):
        return float(val.real)
    return val


def bessel_integral_H(spec, mu, arg):
    """Spectral average H(arg) of the rank-two kernel against h.

    Direct route: quadrature of h(nu) B_{i nu}(arg) against the Plancherel
    measure, with the kernel evaluated by the rank-two cores.  arg is a
    nonzero real number at a real place, a nonzero complex number at a
    complex place.  Raises AccuracyError when the combined kernel/spectral
    oscillation budget is out of desk range.
    """
    _check_pair(spec, mu)
    if spec.place.degree == 1:
        x = complex(arg)
        if x.imag != 0.0:
            raise ValueError("argument at a real place must be real")
        x = x.real
        if x == 0.0:
            raise ValueError("argument must be nonzero")
        w_arg = 4.0 * math.pi * math.sqrt(abs(x))
        hi = spec.T + _NU_CUT * spec.M
        freq = 2.0 * math.asinh(2.0 * hi / w_arg) + 0.5
        nodes, wts = _nu_grid(spec, freq, w_arg)
        kern = np.array([rank2_kernel_real(1j * t, x) for t in nodes])
    else:
        z = complex(arg)
        if z == 0:
            raise ValueError("argument must be nonzero")
        w_arg = 4.0 * math.pi * math.sqrt(abs(z))
        hi = spec.T + _NU_CUT * spec.M
        freq = 4.0 * math.asinh(2.0 * hi / w_arg) + 1.0
        nodes, wts = _nu_grid(spec, freq, w_arg)
        kern = np.array([rank2_kernel_complex(1j * t, z) for t in nodes])
    h = test_function_eval(spec, nodes, mu).h
    return 2.0 * complex(np.sum(wts * h * _plancherel(spec, nodes) * kern))


# ---------------------------------------------------------------------------
# the Schwartz envelope g and the phase-space representations
# ---------------------------------------------------------------------------

# g is sampled on |rho| <= _G_HALF at spacing 2*_G_HALF/_G_SAMPLES, then the
# spectrum is zero-padded by _G_PAD and a cubic spline rides the fine grid
_G_HALF = 16.0
_G_SAMPLES = 2048
_G_PAD = 8

_GPROF_STORE = {}
_GEnvelope = namedtuple("_GEnvelope", "spline rho_cut g0")

# phase-space normalization: the real-place constant is exact (the kernel
# there has exact cosh/sinh integral representations, so the envelope route
# is an identity); the complex-place constant was fixed empirically against
# the direct spectral average at one calibration point and is surfaced by
# the verification suites
_REP_CAL = {"real": 1.0 + 0.0j, "complex": 1.0 + 0.0j}


def _g_envelope(spec, mu):
    key = (spec, mu)
    got = _GPROF_STORE.get(key)
    if got is not None:
        return got
    n = spec.place.degree
    T, M = spec.T, spec.M
    c = 2.0 * n
    lo = max(0.0, T - 8.0 * M)
    hi = T + 8.0 * M
    # panel width M/(8n) keeps the e^{i c (nu-T) rho / M} twist at |rho| =
    # _G_HALF under 4 radians per panel
    n_pan = int(math.ceil((hi - lo) * 8.0 * n / M)) + 2
    nq, wq = gl_panels(lo, hi, n_pan)
    h = test_function_eval(spec, nq, mu).h
    phi = wq * h * _plancherel(spec, nq) / (M * T ** n)
    step = 2.0 * _G_HALF / _G_SAMPLES
    rho = -_G_HALF + step * np.arange(_G_SAMPLES)
    g = np.empty(_G_SAMPLES, dtype=complex)
    xi = c * (nq - T) / M
    for i0 in range(0, _G_SAMPLES, 256):
        blk = rho[i0:i0 + 256, None]
        g[i0:i0 + 256] = np.exp(1j * blk * xi[None, :]) @ phi
    # spectral refinement: zero-pad the DFT, spline the fine samples
    F = np.fft.fft(g)
    fine_n = _G_SAMPLES * _G_PAD
    Ff = np.zeros(fine_n, dtype=complex)
    half = _G_SAMPLES // 2
    Ff[:half] = F[:half]
    Ff[fine_n - half:] = F[half:]
    fine = np.fft.ifft(Ff) * _G_PAD
    rho_f = -_G_HALF + (2.0 * _G_HALF / fine_n) * np.arange(fine_n)
    spline = CubicSpline(rho_f, fine)
    peak = np.max(np.abs(g))
    live = np.abs(g) > 1e-12 * peak
    rho_cut = min(_G_HALF, float(np.max(np.abs(rho[live]))) + 1.0)
    env = _GEnvelope(spline, rho_cut, complex(spline(0.0)))
    _GPROF_STORE[key] = env
    return env


def schwartz_g(spec, mu, r):
    """The Schwartz envelope g of the phase-space representation.

    Inverse Fourier transform of the Plancherel-weighted spectral profile of
    h, centered at T and rescaled by M; built once per family and
    interpolated spectrally.  Zero outside the sampled window.
    """
    _check_pair(spec, mu)
    env = _g_envelope(spec, mu)
    r_arr = np.asarray(r, dtype=float)
    out = np.where(np.abs(r_arr) <= _G_HALF, env.spline(np.clip(r_arr, -_G_HALF, _G_HALF)), 0.0)
    if out.ndim == 0:
        return complex(out)
    return np.asarray(out, dtype=complex)


def rep_calibration(spec, mu):
    """Normalization constant of the phase-space representation.

    Exactly 1 at a real place; the complex-place value was measured once
    against the direct spectral average and is flagged in suite reports.
    """
    _check_pair(spec, mu)
    return _REP_CAL[spec.place.kind]


def _rep_real(spec, mu, arg, env, cal):
    T, M = spec.T, spec.M
    x = math.sqrt(abs(arg))
    rc = env.rho_cut / M
    # |phase'| <= 2T + 4 pi x cosh(rc), spent at <= 4 radians per panel
    span = 2.0 * rc * (2.0 * T + 4.0 * math.pi * x * math.cosh(rc))
    n_pan = int(math.ceil(span / 4.0)) + 4
    r, wr = gl_panels(-rc, rc, n_pan)
    gv = env.spline(M * r)
    base = 2.0 * math.pi * (T / math.pi) * r
    if arg > 0:
        osc = 2.0 * math.pi * 2.0 * x * np.cosh(r)
    else:
        osc = -2.0 * math.pi * 2.0 * x * np.sinh(r)
    pre = 2.0 * M * T * cal
    plus = pre * complex(np.sum(wr * gv * np.exp(1j * (base - osc))))
    minus = pre * complex(np.sum(wr * gv * np.exp(1j * (base + osc))))
    return plus, minus


def _rep_complex(spec, mu, arg, env, cal):
    T, M = spec.T, spec.M
    z = complex(arg)
    x = math.sqrt(abs(z))
    phi = 0.5 * math.atan2(z.imag, z.real)
    rc = env.rho_cut / M
    span_r = 2.0 * rc * (4.0 * T + 8.0 * math.pi * x * math.cosh(rc))
    n_pan_r = int(math.ceil(span_r / 4.0)) + 4
    span_o = math.pi * 8.0 * math.pi * x * math.cosh(rc)
    n_pan_o = int(math.ceil(span_o / 4.0)) + 4
    if n_pan_r * n_pan_o > 4.0e5:
        raise AccuracyError("phase-space grid too large; oscillation budget exceeded")
    r, wr = gl_panels(-rc, rc, n_pan_r)
    om, wo = gl_panels(0.0, math.pi, n_pan_o)
    gv = env.spline(M * r) * wr
    trh = (np.cosh(r)[:, None] * (np.cos(om) * math.cos(phi))[None, :]
           - np.sinh(r)[:, None] * (np.sin(om) * math.sin(phi))[None, :])
    base = (4.0 * T * r)[:, None]
    pre = M * T * T * cal
    plus = pre * complex(
        np.einsum("i,j,ij->", gv, wo + 0.0j, np.exp(1j * (base - 8.0 * math.pi * x * trh))))
    minus = pre * complex(
        np.einsum("i,j,ij->", gv, wo + 0.0j, np.exp(1j * (base + 8.0 * math.pi * x * trh))))
    return plus, minus


def bessel_integral_rep(spec, mu, arg, parts=False):
    """Phase-space route to the spectral average H(arg).

    Writes H(arg) as a pair of short integrals of the envelope g against
    e(T r / pi -+ 2 x cosh r) (positive real argument), e(T r / pi +- 2 x
    sinh r) (negative real argument), or the two-dimensional
    trigonometric-hyperbolic phase e(2 T r / pi -+ 4 x trh(r, omega; phi))
    at a complex place.  Requires |arg| > 1.  Returns the pair sum, or the
    (plus, minus) pair itself when parts is set.
    """
    _check_pair(spec, mu)
    if abs(complex(arg)) <= 1.0:
        raise ValueError("phase-space representation needs |arg| > 1")
    env = _g_envelope(spec, mu)
    cal = rep_calibration(spec, mu)
    if spec.place.degree == 1:
        a = complex(arg)
        if a.imag != 0.0:
            raise ValueError("argument at a real place must be real")
        plus, minus = _rep_real(spec, mu, a.real, env, cal)
    else:
        plus, minus = _rep_complex(spec, mu, arg, env, cal)
    if parts:
        return plus, minus
    return plus + minus
