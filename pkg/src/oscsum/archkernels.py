"""Rank-two and rank-three integral kernels and the Hankel transforms they
induce.

The rank-three kernel attached to a spectral triple (mu, 0, -mu) is defined
through its Mellin symbol

    G_eta(s) = pi^{3/2 - 3s} prod_j Gamma((s - mu_j + eta)/2)
                                  / Gamma((1 - s + mu_j + eta)/2),

one symbol per parity eta in {0, 1}, with the kernel on the positive and
negative half lines assembled as

    J(x) = (1/2) sum_eta (-i)^eta sgn(x)^eta
           * (1/2 pi i) int_(sigma) G_eta(s) |x|^{-s} ds.

Three evaluation routes are implemented and cross-checked against each
other: a pole-residue series near the origin (multiprecision, since the
shell sums cancel like e^{6 pi |x|^{1/3}}), a vertical-line integral with
integration-by-parts tail corrections elsewhere, and a calibrated
oscillatory asymptotic expansion in the far field.

The Hankel transform of a compactly supported bump is computed either
directly against the kernel or through the symbol (multiply the reflected
Mellin transform of the bump by G_eta and invert); the two routes are
independent enough to serve as each other's oracle.

The rank-two kernel (the weight attached to a spectral parameter nu at a
real or complex place) is a Bessel-function combination; for purely
imaginary subscripts of large modulus the naive J/K formulas cancel
catastrophically, so stable contour-rotated integral representations take
over there.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy import special as sp

from ._accel import phase_rows
from .bumps import Bump
from .quadrature import AccuracyError, gl_panels
from .specialfn import DEFAULT_CFG, bessel_j_scaled, bessel_jik

TWO_PI = 2.0 * math.pi

# parity prefactors (-i)^eta
_ETA_FACTOR = (1.0 + 0.0j, -1.0j)


# ---------------------------------------------------------------------------
# parameter types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArchPlace:
    """An archimedean completion: kind is "real" or "complex"."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("real", "complex"):
            raise ValueError("kind must be 'real' or 'complex'")

    @property
    def degree(self):
        return 1 if self.kind == "real" else 2


REAL_PLACE = ArchPlace("real")
COMPLEX_PLACE = ArchPlace("complex")


@dataclass(frozen=True)
class SpectralTriple:
    """Spectral parameter of a self-dual rank-three object at one place.

    The triple of components is (mu, 0, -mu); mu must be real or purely
    imaginary with |Re mu| <= 7/32.
    """

    mu: complex
    place: ArchPlace = REAL_PLACE

    def __post_init__(self):
        m = complex(self.mu)
        if min(abs(m.real), abs(m.imag)) > 1e-12:
            raise ValueError("mu must be real or purely imaginary")
        if abs(m.real) > 7.0 / 32.0 + 1e-12:
            raise ValueError("|Re mu| must not exceed 7/32")

    @property
    def components(self):
        m = complex(self.mu)
        return (m, 0.0 + 0.0j, -m)

    @property
    def key(self):
        m = complex(self.mu)
        return (round(m.real, 12), round(m.imag, 12), self.place.kind)


@dataclass(frozen=True)
class GL2Param:
    """Spectral parameter of a rank-two object: real, or purely imaginary
    inside the complementary window |Im nu| < 1/2."""

    nu: complex
    place: ArchPlace = REAL_PLACE

    def __post_init__(self):
        n = complex(self.nu)
        real_ok = abs(n.imag) <= 1e-12
        comp_ok = abs(n.real) <= 1e-12 and abs(n.imag) < 0.5
        if not (real_ok or comp_ok):
            raise ValueError("nu must be real or purely imaginary with |Im nu| < 1/2")


@dataclass(frozen=True)
class KernelEvalConfig:
    """Evaluation knobs shared by the kernel routes.

    contour_sigma: abscissa of the vertical Mellin line; must sit right of
        the pole line max Re mu_j and inside the absolute-convergence window
        (below 1/6).
    contour_height: minimum truncation height of the vertical line.
    series_terms: maximum number of residue shells near the origin.
    asymptotic_order: number of calibrated far-field coefficients.
    switch_radius: |x| below which the residue series is used.
    """

    contour_sigma: float = 0.1
    contour_height: float = 300.0
    series_terms: int = 40
    asymptotic_order: int = 6
    switch_radius: float = 4.0

    def __post_init__(self):
        if not (0.0 < self.contour_sigma < 1.0):
            raise ValueError("contour_sigma must lie in (0, 1)")
        if self.switch_radius < 1.0:
            raise ValueError("switch_radius must be >= 1")
        if self.contour_height <= 0:
            raise ValueError("contour_height must be positive")


DEFAULT_KCFG = KernelEvalConfig()


def _check_contour(mu, cfg):
    pole_line = max(m.real for m in mu.components)
    sig = cfg.contour_sigma
    if sig < pole_line + 0.02:
        raise ValueError("contour abscissa too close to the pole line")
    if sig > 1.0 / 6.0 - 1e-3:
        raise ValueError("contour abscissa outside the absolute-convergence window")
    return sig


# ---------------------------------------------------------------------------
# the Mellin symbol and its logarithmic derivatives
# ---------------------------------------------------------------------------

def _symbol_np(s, mus, parity):
    s = np.asarray(s, dtype=complex)
    acc = (1.5 - 3.0 * s) * math.log(math.pi)
    for m in mus:
        acc = acc + sp.loggamma((s - m + parity) / 2.0) - sp.loggamma((1.0 - s + m + parity) / 2.0)
    return np.exp(acc)


def _symbol_mp(s, mus, parity):
    acc = mp.power(mp.pi, mp.mpf(1.5) - 3 * s)
    for m in mus:
        acc *= mp.gamma((s - m + parity) / 2) / mp.gamma((1 - s + m + parity) / 2)
    return acc


def _symbol_dlog1(s, mus, parity):
    # d/ds log G_eta
    acc = -3.0 * math.log(math.pi)
    for m in mus:
        acc += 0.5 * (sp.psi((s - m + parity) / 2.0) + sp.psi((1.0 - s + m + parity) / 2.0))
    return acc


def _trigamma_far(z):
    # asymptotic trigamma, |z| >= 40
    zi = 1.0 / z
    return zi * (1.0 + zi * (0.5 + zi * (1.0 / 6.0 + zi * zi * (-1.0 / 30.0 + zi * zi / 42.0))))


def _symbol_dlog2(s, mus, parity):
    # d^2/ds^2 log G_eta, valid for |Im s| >= ~80 (asymptotic trigamma)
    acc = 0.0 + 0.0j
    for m in mus:
        acc += 0.25 * (_trigamma_far((s - m + parity) / 2.0) - _trigamma_far((1.0 - s + m + parity) / 2.0))
    return acc


def gamma_symbol(s, mu, parity):
    """The Mellin symbol G_eta(s) of the rank-three kernel (parity eta)."""
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    return complex(_symbol_np(complex(s), mu.components, parity))


# ---------------------------------------------------------------------------
# vertical-line route
# ---------------------------------------------------------------------------

_LOG_R_BUDGET = math.log(1.0e5)  # grids resolve |x|^{+-it} up to |x| = 1e5
_PHASE_PER_PANEL = 5.0


def _grid_top(r_max, cfg):
    # truncation height: well past the stationary point 2 pi r^{1/3}
    need = max(cfg.contour_height, 14.0 * TWO_PI * max(r_max, 1.0) ** (1.0 / 3.0))
    top = max(300.0, cfg.contour_height)
    while top < need:
        top *= 2.0
    return top


@lru_cache(maxsize=32)
def _mb_grid(t_top, sigma):
    # Gauss-Legendre panels sized to the local oscillation rate of
    # G(sigma+it) |x|^{-it}: ~3 log t from the gammas plus |log x|, with a
    # short-lived spike ~3/sigma next to t = 0
    edges = [0.0]
    t = 0.0
    while t < t_top:
        freq = (3.0 * math.log(max(t, TWO_PI) / TWO_PI) + _LOG_R_BUDGET + 2.0
                + (3.0 / sigma) / (1.0 + t * t))
        t = min(t_top, t + _PHASE_PER_PANEL / freq)
        edges.append(t)
    xr, wr = np.polynomial.legendre.leggauss(16)
    e = np.asarray(edges)
    half = 0.5 * (e[1:] - e[:-1])
    mid = 0.5 * (e[1:] + e[:-1])
    nodes = (mid[:, None] + half[:, None] * xr[None, :]).ravel()
    wts = (half[:, None] * wr[None, :]).ravel()
    return nodes, wts


@lru_cache(maxsize=128)
def _symbol_on_grid(mu_key, parity, sigma, t_top):
    t, w = _mb_grid(t_top, sigma)
    mus = (complex(mu_key[0], mu_key[1]), 0.0 + 0.0j, -complex(mu_key[0], mu_key[1]))
    G = _symbol_np(sigma + 1j * t, mus, parity)
    return t, w, G


def _phase_dot(P, w):
    # sum_j w_j e(P_ij) with complex w, routed through the real-weight core
    out = phase_rows(np.ascontiguousarray(P), np.ascontiguousarray(np.real(w)))
    wi = np.imag(w)
    if np.any(wi):
        out = out + 1j * phase_rows(np.ascontiguousarray(P), np.ascontiguousarray(wi))
    return out


def _mb_eval(mu, parity, rs, cfg):
    """J_eta(r) for an array of radii r >= switch_radius, by the truncated
    vertical-line integral plus a two-term integration-by-parts tail."""
    sigma = cfg.contour_sigma
    t_top = _grid_top(float(np.max(rs)), cfg)
    t, w, G = _symbol_on_grid(mu.key[:2] + (mu.place.kind,), parity, sigma, t_top)
    L = np.log(rs)
    out = np.empty(len(rs), dtype=complex)
    wG = w * G
    chunk = max(1, int(3.0e7 // max(len(t), 1)))
    for i in range(0, len(rs), chunk):
        P = (-np.outer(L[i:i + chunk], t)) / TWO_PI
        out[i:i + chunk] = _phase_dot(P, wG)
    # tail: int_T^inf e^g dt = -(h/g')(1 + g''/g'^2) + smaller, h = e^g
    s_top = sigma + 1j * t_top
    mus = mu.components
    hT = complex(_symbol_np(s_top, mus, parity)) * np.exp(-1j * t_top * L)
    d1 = _symbol_dlog1(s_top, mus, parity)
    d2 = _symbol_dlog2(s_top, mus, parity)
    gp = 1j * (d1 - L)
    tail = -(hT / gp) * (1.0 + (-d2) / gp ** 2)
    return (rs ** (-sigma) / math.pi) * np.real(out + tail)


# ---------------------------------------------------------------------------
# residue-series route (small |x|)
# ---------------------------------------------------------------------------

_SHELL_STORE = {}


def _cluster_components(mus, gap=0.6):
    # union-find on the three components by pairwise distance
    groups = []
    for m in mus:
        hit = None
        for g in groups:
            if any(abs(m - o) <= gap for o in g):
                hit = g
                break
        if hit is None:
            groups.append([m])
        else:
            hit.append(m)
    # a second pass merges chains (a~b, b~c)
    merged = True
    while merged and len(groups) > 1:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(abs(a - b) <= gap for a in groups[i] for b in groups[j]):
                    groups[i].extend(groups.pop(j))
                    merged = True
                    break
            if merged:
                break
    return groups


def _build_shell(mus, parity, k):
    """Laurent data of shell k: for each pole cluster, the expansion center a
    and circle-quadrature coefficients c_m = (1/2 pi i) oint G (s-a)^m ds."""
    shell = []
    all_poles = [m - parity - 2 * kk for m in mus for kk in (k - 1, k, k + 1) if kk >= 0]
    for group in _cluster_components(mus):
        center = sum(group) / len(group)
        a = center - parity - 2 * k
        spread = max(abs(m - center) for m in group)
        radius = spread + 0.3
        members = [m - parity - 2 * k for m in group]
        for p in all_poles:
            if all(abs(p - q) > 1e-9 for q in members) and abs(p - a) < radius + 0.22:
                raise ValueError("spectral components too crowded for the residue series")
        n_nodes = 128 if len(group) == 1 else 256
        n_coef = 40
        with mp.workdps(80):
            a_mp = mp.mpc(a)
            r_mp = mp.mpf(radius)
            coefs = [mp.mpc(0)] * n_coef
            for n in range(n_nodes):
                theta = mp.mpf(2) * mp.pi * n / n_nodes
                ph = mp.e ** (1j * theta)
                g = _symbol_mp(a_mp + r_mp * ph, mus, parity)
                rot = ph
                for m_idx in range(n_coef):
                    coefs[m_idx] += g * rot
                    rot *= ph
            coefs = [c * mp.power(r_mp, m_idx + 1) / n_nodes for m_idx, c in enumerate(coefs)]
        shell.append((mp.mpc(a), coefs))
    return shell


def _shells(mu, parity, upto):
    key = (mu.key, parity)
    store = _SHELL_STORE.setdefault(key, [])
    while len(store) < upto:
        store.append(_build_shell(mu.components, parity, len(store)))
    return store


def _residue_eval(mu, parity, r, cfg):
    """J_eta(r) for 0 < r < switch_radius as the full residue series.

    The shells cancel like e^{6 pi r^{1/3}}, so the sum runs in
    multiprecision with a radius-dependent working precision.
    """
    dps = 35 + int(8.2 * r ** (1.0 / 3.0)) + 10
    with mp.workdps(dps):
        lnr = mp.log(mp.mpf(r))
        total = mp.mpc(0)
        max_abs = mp.mpf(0)
        tol = mp.mpf(10) ** (-(dps - 8))
        small_run = 0
        k = 0
        while k < cfg.series_terms:
            shell = _shells(mu, parity, k + 1)[k]
            val = mp.mpc(0)
            for a, coefs in shell:
                inner = mp.mpc(0)
                term = mp.mpc(1)  # (-ln r)^m / m!
                for m_idx, c in enumerate(coefs):
                    inner += c * term
                    term *= (-lnr) / (m_idx + 1)
                val += mp.power(r, -a) * inner
            total += val
            max_abs = max(max_abs, abs(val))
            if k >= 4 and abs(val) <= tol * max(max_abs, mp.mpf(1)):
                small_run += 1
                if small_run >= 2:
                    break
            else:
                small_run = 0
            k += 1
        else:
            raise AccuracyError("residue series did not converge within series_terms shells")
        return complex(total)


# ---------------------------------------------------------------------------
# the rank-three kernel
# ---------------------------------------------------------------------------

def gl3_kernel_batch(mu, args, cfg=None):
    """Rank-three kernel J(x) on an array of nonzero real arguments.

    Real place only.  Residue series below cfg.switch_radius, vertical-line
    integral at and above it.
    """
    cfg = cfg or DEFAULT_KCFG
    if mu.place.kind != "real":
        raise ValueError("the full kernel is implemented at the real place only")
    _check_contour(mu, cfg)
    args = np.asarray(args, dtype=float)
    if np.any(args == 0.0):
        raise ValueError("kernel argument must be nonzero")
    rs = np.abs(args)
    parts = []
    for parity in (0, 1):
        vals = np.empty(len(args), dtype=complex)
        small = rs < cfg.switch_radius
        for i in np.nonzero(small)[0]:
            vals[i] = _residue_eval(mu, parity, float(rs[i]), cfg)
        if np.any(~small):
            vals[~small] = _mb_eval(mu, parity, rs[~small], cfg)
        parts.append(vals)
    sign = np.where(args > 0, 1.0, -1.0)
    return 0.5 * (parts[0] + _ETA_FACTOR[1] * sign * parts[1])


def gl3_kernel(mu, x, cfg=None):
    """Rank-three kernel J(x) at a single nonzero real argument."""
    return complex(gl3_kernel_batch(mu, np.array([float(x)]), cfg)[0])


# ---------------------------------------------------------------------------
# calibrated far-field asymptotics
# ---------------------------------------------------------------------------

_ASYM_THRESHOLD = 8.0
_ASYM_STORE = {}


def _asym_fit(mu, cfg):
    """Far-field coefficients B_k for both signs, fitted once per triple.

    J(+-x) = e(+-3 x^{1/3}) x^{-1/3} sum_k B_k^{+-} x^{-k/3} is matched
    against the vertical-line kernel on x in [50, 100] by least squares in
    the variable u = x^{-1/3} (Chebyshev-conditioned, then converted back to
    monomial coefficients).  The fit residual is stored alongside.
    """
    key = (mu.key, round(cfg.contour_sigma, 10), cfg.asymptotic_order)
    if key in _ASYM_STORE:
        return _ASYM_STORE[key]
    n_coef = cfg.asymptotic_order
    xs = np.linspace(50.0, 100.0, 80)
    u = xs ** (-1.0 / 3.0)
    out = {}
    resid = 0.0
    for sign, label in ((1.0, "plus"), (-1.0, "minus")):
        j = gl3_kernel_batch(mu, sign * xs, cfg)
        target = j * xs ** (1.0 / 3.0) * np.exp(-sign * 6j * np.pi * xs ** (1.0 / 3.0))
        fit = np.polynomial.polynomial.Polynomial.fit(u, target, n_coef - 1)
        out[label] = fit.convert().coef.astype(complex)
        resid = max(resid, float(np.max(np.abs(fit(u) - target))))
    out["resid"] = resid
    _ASYM_STORE[key] = out
    return out


def gl3_asymptotic(mu, x, k_terms, cfg=None):
    """Far-field form of the rank-three kernel with k_terms coefficients.

    Real place: single oscillation e(+-3 x^{1/3}) with calibrated
    coefficients.  Complex place: the three cube-root branches, with the
    coefficient products built from the real-place calibration (the overall
    complex-place normalization is reported by the fit residual rather than
    assumed; see the module notes).
    """
    cfg = cfg or DEFAULT_KCFG
    if k_terms == 0:
        return 0.0 + 0.0j
    if k_terms < 0 or k_terms > cfg.asymptotic_order:
        raise ValueError("k_terms must lie in [0, asymptotic_order]")
    if mu.place.kind == "real":
        x = float(x)
        ax = abs(x)
        if ax < _ASYM_THRESHOLD:
            raise ValueError("argument below the far-field validity threshold")
        co = _asym_fit(mu, cfg)
        b = co["plus"] if x > 0 else co["minus"]
        u = ax ** (-1.0 / 3.0)
        series = sum(b[k] * u ** k for k in range(k_terms))
        sign = 1.0 if x > 0 else -1.0
        return complex(np.exp(sign * 6j * np.pi * ax ** (1.0 / 3.0)) * u * series)
    # complex place
    z = complex(x)
    az = abs(z)
    if az < _ASYM_THRESHOLD:
        raise ValueError("argument below the far-field validity threshold")
    mu_real = SpectralTriple(mu.mu, REAL_PLACE)
    b = _asym_fit(mu_real, cfg)["plus"]
    zc = z ** (1.0 / 3.0)
    total = 0.0 + 0.0j
    for j in range(3):
        xi = np.exp(2j * np.pi * j / 3.0)
        phase = np.exp(12j * np.pi * np.real(xi * zc))
        inner = 0.0 + 0.0j
        for k in range(k_terms):
            for l in range(k_terms):
                if k + l <= k_terms - 1:
                    inner += b[k] * b[l] * xi ** (l - k) * zc ** (-k) * np.conj(zc) ** (-l)
        total += phase * inner
    return complex(total / az ** (2.0 / 3.0))


def gl3_asymptotic_residual(mu, cfg=None):
    """Max calibration residual of the far-field fit on the matching window."""
    cfg = cfg or DEFAULT_KCFG
    mu_real = SpectralTriple(mu.mu, REAL_PLACE)
    return _asym_fit(mu_real, cfg)["resid"]


# ---------------------------------------------------------------------------
# rank-two kernel, real place
# ---------------------------------------------------------------------------

def _rank2_pos_real_order(n, w):
    # pi/sin(pi n) (J_{-2n} - J_{2n})(w) for real n; at integer n the
    # removable singularity is taken as a symmetric-offset limit in
    # multiprecision (the offset is far below the working precision's
    # cancellation budget there)
    if abs(math.sin(math.pi * n)) < 1e-8:
        with mp.workdps(60):
            d = mp.mpf(10) ** -15

            def val(m):
                return mp.pi / mp.sin(mp.pi * m) * (mp.besselj(-2 * m, w) - mp.besselj(2 * m, w))

            return float(mp.re(0.5 * (val(n + d) + val(n - d))))
    return math.pi / math.sin(math.pi * n) * (sp.jv(-2.0 * n, w) - sp.jv(2.0 * n, w))


def _osc_leg(phase_fn, a, b, max_radians):
    n_pan = max(3, int(abs(max_radians) / _PHASE_PER_PANEL) + 1)
    x, w = gl_panels(a, b, n_pan, 16)
    return complex(np.sum(w * phase_fn(x)))


def _rank2_pos_osc(t, w):
    """4 int_0^inf cos(w cosh u) cos(2tu) du via contour-rotated halves.

    The e^{+2itu} half rides up to Im u = 0.8 and out; the e^{-2itu} half
    runs along the real axis past its stationary point sinh u* = 2t/w, then
    up a pi/4 ray.  Stable for all t >= 0, w > 0 of desk size.
    """
    a = 0.8
    # W+ vertical leg
    wp = _osc_leg(lambda s: 1j * np.exp(1j * w * np.cos(s) - 2.0 * t * s),
                  0.0, a, w * (1.0 - math.cos(a)) + 2.0 * t * a)
    # W+ horizontal leg
    smax = math.asinh(42.0 / (w * math.sin(a))) + 0.5
    wp += _osc_leg(lambda s: np.exp(1j * (w * np.cosh(s) * math.cos(a) + 2.0 * t * s)
                                    - w * np.sinh(s) * math.sin(a) - 2.0 * t * a),
                   0.0, smax, w * math.cosh(smax) * math.cos(a) + 2.0 * t * smax)
    # W- real leg
    u0 = math.asinh(2.0 * t / w) + 2.5
    wm = _osc_leg(lambda u: np.exp(1j * (w * np.cosh(u) - 2.0 * t * u)),
                  0.0, u0, w * math.cosh(u0) + 2.0 * t * u0)
    # W- rotated ray
    dphi = w * math.cosh(u0) - 2.0 * t
    rot = np.exp(1j * np.pi / 4)
    rmax = min(1.4, 42.0 / (0.707 * dphi))
    wm += rot * _osc_leg(lambda r: np.exp(1j * (w * np.cosh(u0 + rot * r) - 2.0 * t * (u0 + rot * r))),
                         0.0, rmax, dphi * rmax + 8.0)
    return 2.0 * float(np.real(wp + wm))


def _rank2_neg_osc(t, w):
    """(1 + e^{-2 pi t}) int_R e^{-i w sinh u + 2itu} du, the rotated form of
    4 cosh(pi t) K_{2it}(w); the half-line version with cos(w sinh u - 2tu)."""
    u0 = (math.acosh(2.0 * t / w) if 2.0 * t > w else 0.0) + 2.5
    v = _osc_leg(lambda u: np.exp(1j * (w * np.sinh(u) - 2.0 * t * u)),
                 0.0, u0, w * math.cosh(u0) + 2.0 * t * u0)
    dphi = w * math.cosh(u0) - 2.0 * t
    rot = np.exp(1j * np.pi / 4)
    rmax = min(1.4, 42.0 / (0.707 * dphi))
    v += rot * _osc_leg(lambda r: np.exp(1j * (w * np.sinh(u0 + rot * r) - 2.0 * t * (u0 + rot * r))),
                        0.0, rmax, dphi * rmax + 8.0)
    v = 2.0 * float(np.real(v))
    return (1.0 + math.exp(-2.0 * math.pi * t)) * v


def _rank2_pos_mp(t, w):
    # small-w, small-t wedge where both the fast series and the oscillatory
    # representation are awkward; straight multiprecision difference formula
    with mp.workdps(40):
        nu = mp.mpc(0, t)
        val = mp.pi / mp.sin(mp.pi * nu) * (mp.besselj(-2 * nu, w) - mp.besselj(2 * nu, w))
        return float(mp.re(val))


def rank2_kernel_real(nu, x, cfg=None):
    """Rank-two kernel at a real place, subscript nu taken literally.

    Positive arguments see the J-difference formula, negative ones the
    4 cos(pi nu) K_{2nu} formula.  Purely imaginary subscripts route
    through cancellation-free integral representations (the naive formulas
    lose e^{pi |nu|} digits there); real subscripts stay on the classical
    special-function paths.  Other complex nu raise.
    """
    cfg = cfg or DEFAULT_CFG
    nu = complex(nu)
    x = float(x)
    if x == 0.0:
        raise ValueError("kernel argument must be nonzero")
    w = 4.0 * math.pi * math.sqrt(abs(x))
    real_nu = abs(nu.imag) <= 1e-12
    imag_nu = abs(nu.real) <= 1e-12
    if not (real_nu or imag_nu):
        raise ValueError("nu must be real or purely imaginary")
    if x > 0:
        if real_nu:
            return complex(_rank2_pos_real_order(nu.real, w))
        t = abs(nu.imag)
        if t >= 4.0 or w >= 14.0:
            return complex(_rank2_pos_osc(t, w))
        return complex(_rank2_pos_mp(t, w))
    if real_nu:
        return complex(4.0 * math.cos(math.pi * nu.real) * sp.kv(2.0 * nu.real, w))
    t = abs(nu.imag)
    if t <= 4.0:
        return complex(4.0 * np.cos(np.pi * nu) * bessel_jik("K", 2 * nu, w, cfg))
    return complex(_rank2_neg_osc(t, w))


def gl2_kernel_real(param, x, cfg=None):
    """Rank-two kernel at the real place for a validated spectral parameter."""
    return rank2_kernel_real(param.nu, x, cfg)


# ---------------------------------------------------------------------------
# rank-two kernel, complex place
# ---------------------------------------------------------------------------

def _rank2_complex_classic(nu, wz, wzb, cfg):
    # near 2 nu in Z the 1/sin amplification magnifies the double-precision
    # J-product noise, so a wide band around each removable singularity goes
    # through multiprecision; exactly singular inputs take a symmetric-offset
    # limit there
    if abs(np.sin(2.0 * np.pi * nu)) < 0.05:
        with mp.workdps(60):
            wz_mp, wzb_mp = mp.mpc(wz), mp.mpc(wzb)

            def val(n):
                return (2 * mp.pi ** 2 / mp.sin(2 * mp.pi * n)
                        * (mp.besselj(-2 * n, wz_mp) * mp.besselj(-2 * n, wzb_mp)
                           - mp.besselj(2 * n, wz_mp) * mp.besselj(2 * n, wzb_mp)))

            n0 = mp.mpc(nu)
            if abs(mp.sin(2 * mp.pi * n0)) < mp.mpf(10) ** -20:
                d = mp.mpf(10) ** -15
                return complex(0.5 * (val(n0 + d) + val(n0 - d)))
            return complex(val(n0))
    return (2.0 * np.pi ** 2 / np.sin(2.0 * np.pi * nu)
            * (bessel_jik("J", -2 * nu, wz, cfg) * bessel_jik("J", -2 * nu, wzb, cfg)
               - bessel_jik("J", 2 * nu, wz, cfg) * bessel_jik("J", 2 * nu, wzb, cfg)))


def rank2_kernel_complex(nu, z, cfg=None):
    """Rank-two kernel at a complex place, subscript nu taken literally.

    The J-product formula at argument pair (4 pi sqrt(z), its conjugate).
    Purely imaginary nu of large modulus goes through a scaled series so the
    e^{2 pi |Im nu|} growth of the factors cancels analytically.
    """
    cfg = cfg or DEFAULT_CFG
    nu = complex(nu)
    z = complex(z)
    if z == 0:
        raise ValueError("kernel argument must be nonzero")
    wz = 4.0 * np.pi * np.sqrt(z)
    wzb = np.conj(wz)
    if abs(nu.imag) <= 0.75:
        return complex(_rank2_complex_classic(nu, wz, wzb, cfg))
    if abs(nu.real) > 1e-12:
        raise ValueError("unsupported nu: large imaginary part with nonzero real part")
    t = abs(nu.imag)
    if abs(wz) ** 2 / (8.0 * t) > 30.0:
        with mp.workdps(45):
            nn = mp.mpc(0, t)
            val = (2 * mp.pi ** 2 / mp.sin(2 * mp.pi * nn)
                   * (mp.besselj(-2 * nn, wz) * mp.besselj(-2 * nn, wzb)
                      - mp.besselj(2 * nn, wz) * mp.besselj(2 * nn, wzb)))
            return complex(val)
    shift = math.pi * t
    a = bessel_j_scaled(-2j * t, wz, shift, cfg)
    b = bessel_j_scaled(-2j * t, wzb, shift, cfg)
    denom = 0.5 * (1.0 - math.exp(-4.0 * math.pi * t))  # e^{-2 pi t} sinh(2 pi t)
    return complex(4.0 * np.pi ** 2 * np.imag(a * b) / denom)


def gl2_kernel_complex(param, z, cfg=None):
    """Rank-two kernel at the complex place for a validated spectral parameter."""
    return rank2_kernel_complex(param.nu, z, cfg)


# ---------------------------------------------------------------------------
# Hankel transform: direct route and symbol route
# ---------------------------------------------------------------------------

def hankel_direct(f, mu, y, cfg=None):
    """Hankel transform int f(x) J(xy) dx by quadrature against the kernel.

    f must be supported inside (0, inf); panels are sized to the kernel's
    oscillation 6 pi |xy|^{1/3} across the support.
    """
    cfg = cfg or DEFAULT_KCFG
    y = float(y)
    if y == 0.0:
        raise ValueError("transform argument must be nonzero")
    lo, hi = f.support
    if lo <= 0:
        raise ValueError("bump support must sit inside (0, inf)")
    dphi = 6.0 * np.pi * abs(y) ** (1.0 / 3.0) * (hi ** (1.0 / 3.0) - lo ** (1.0 / 3.0))
    n_pan = int(dphi / 4.0) + 12
    if n_pan > 40000:
        raise AccuracyError("oscillation budget exceeded for the direct route")
    xq, wq = gl_panels(lo, hi, n_pan, 16)
    vals = gl3_kernel_batch(mu, xq * y, cfg)
    return complex(np.sum(wq * f(xq) * vals))


_MELLIN_PROFILE_CACHE = {}


def _mellin_profile(f, mu, parity, cfg, t_top):
    """Precomputed quadrature profile w * G_eta(sigma+it) * M_f(1-sigma-it)
    on the shared grid, truncated where the bump's Mellin decay has killed
    it.  Cached per (bump, triple, parity)."""
    sigma = cfg.contour_sigma
    key = (f, mu.key, parity, round(sigma, 10), t_top)
    if key in _MELLIN_PROFILE_CACHE:
        return _MELLIN_PROFILE_CACHE[key]
    t, w, G = _symbol_on_grid(mu.key[:2] + (mu.place.kind,), parity, sigma, t_top)
    lo, hi = f.support
    span = math.log(hi / lo)
    n_pan = int(t_top * span / _PHASE_PER_PANEL) + 8
    xq, wq = gl_panels(lo, hi, n_pan, 16)
    base = wq * f(xq) * xq ** (-sigma)
    lx = np.log(xq)
    mel = np.empty(len(t), dtype=complex)
    chunk = max(1, int(2.0e7 // len(xq)))
    for i in range(0, len(t), chunk):
        mel[i:i + chunk] = np.exp(-1j * np.outer(t[i:i + chunk], lx)) @ base
    prof = w * G * mel
    # truncate where the profile has decayed for good
    mags = np.abs(prof)
    peak = float(np.max(mags))
    keep = len(prof)
    run = 0
    for i in range(len(prof) - 1, -1, -1):
        if mags[i] > 1e-15 * peak:
            keep = i + 1
            break
    tail_mass = float(np.sum(mags[keep:]))
    result = (t[:keep].copy(), prof[:keep].copy(), tail_mass, float(np.sum(mags)))
    _MELLIN_PROFILE_CACHE[key] = result
    return result


def hankel_mellin_batch(f, mu, ys, cfg=None):
    """Hankel transform through the Mellin symbol, vectorized over y.

    f~(y) = (1/2) sum_eta (-i)^eta sgn(y)^eta (1/2 pi i)
            int G_eta(s) M_f(1-s) |y|^{-s} ds.

    The bump's Mellin transform decays super-polynomially, so the truncated
    line needs no tail correction; the grid is rebuilt taller if the profile
    has not died by the truncation height.
    """
    cfg = cfg or DEFAULT_KCFG
    if mu.place.kind != "real":
        raise ValueError("the symbol route is implemented at the real place only")
    _check_contour(mu, cfg)
    lo, _ = f.support
    if lo <= 0:
        raise ValueError("bump support must sit inside (0, inf)")
    ys = np.asarray(ys, dtype=float)
    if np.any(ys == 0.0):
        raise ValueError("transform argument must be nonzero")
    sigma = cfg.contour_sigma
    ay = np.abs(ys)
    out = np.zeros(len(ys), dtype=complex)
    sign = np.where(ys > 0, 1.0, -1.0)
    for parity in (0, 1):
        t_top = max(600.0, cfg.contour_height)
        while True:
            t, prof, tail_mass, total_mass = _mellin_profile(f, mu, parity, cfg, t_top)
            if tail_mass <= 1e-12 * max(total_mass, 1e-300) or t_top >= 2400.0:
                if tail_mass > 1e-10 * max(total_mass, 1e-300):
                    raise AccuracyError("bump Mellin transform decays too slowly")
                break
            t_top *= 2.0
        P = (-np.outer(np.log(ay), t)) / TWO_PI
        line = _phase_dot(P, prof)
        part = (ay ** (-sigma) / math.pi) * np.real(line)
        if parity == 0:
            out += 0.5 * part
        else:
            out += 0.5 * _ETA_FACTOR[1] * sign * part
    return out


def hankel_via_mellin(f, mu, y, cfg=None):
    """Hankel transform at a single argument through the Mellin symbol."""
    return complex(hankel_mellin_batch(f, mu, np.array([float(y)]), cfg)[0])
