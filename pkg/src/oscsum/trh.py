"""Trigonometric-hyperbolic phase functions.

The basic object is

    trh(r, omega; phi) = cosh(r) cos(omega) cos(phi) - sinh(r) sin(omega) sin(phi)
                       = rho(r, omega) * cos(phi + theta(r, omega))

with   rho   = sqrt(sinh^2 r + cos^2 omega)
       theta = atan2(sinh r sin omega, cosh r cos omega),

together with its "squared" companion

    trh_nat(r, omega) = rho_nat * exp(i theta_nat)
    rho_nat   = (cosh 2r - cos 2omega) / (cosh 2r + cos 2omega)
    theta_nat = 2 atan2(sin 2omega, sinh 2r)

whose modulus-argument pair satisfies log rho_nat + i theta_nat holomorphic
in r + i omega (Cauchy-Riemann pairs below).  theta_nat is the branch with
tan(theta_nat / 2) = sin 2omega / sinh 2r that is continuous in r on
sinh 2r > 0 and satisfies theta_nat(r, 0) = 0 for r > 0; note the doubled
atan2, not atan2 of half-angle pieces.

All first and second derivatives are closed forms in sinh/cosh/sin/cos of
2r and 2omega; trh_derivatives returns the full set so finite-difference
audits can check every one.

Singular set: rho vanishes only at (r, omega) = (0, pi/2) mod symmetry;
rho_nat/theta_nat degenerate where sinh 2r = sin 2omega = 0.  Both
evaluators raise (guard 1e-8 on the relevant squared modulus) instead of
returning garbage.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class TrhPoint:
    """Validated parameter triple: omega in [0, pi), phi in [0, 2 pi),
    (r, omega) != (0, pi/2)."""

    r: float
    omega: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.omega < math.pi):
            raise ValueError("omega must lie in [0, pi)")
        if not (0.0 <= self.phi < 2.0 * math.pi):
            raise ValueError("phi must lie in [0, 2 pi)")
        if math.sinh(self.r) ** 2 + math.cos(self.omega) ** 2 < 1e-8:
            raise ValueError("(r, omega) too close to the singular point (0, pi/2)")


class TrhResult(NamedTuple):
    trh: float
    rho: float
    theta: float


class TrhNatResult(NamedTuple):
    rho_nat: float
    theta_nat: float
    trh_nat: complex


def trh_eval(r, omega, phi):
    """(trh, rho, theta) at the given point.

    Maintains the factorization postcondition
    |trh - rho cos(phi + theta)| <= 1e-12 * max(1, rho) internally.
    """
    r, omega, phi = float(r), float(omega), float(phi)
    sh, ch = math.sinh(r), math.cosh(r)
    so, co = math.sin(omega), math.cos(omega)
    rho_sq = sh * sh + co * co
    if rho_sq < 1e-8:
        raise ValueError("rho vanishes: (r, omega) at/near (0, pi/2)")
    rho = math.sqrt(rho_sq)
    theta = math.atan2(sh * so, ch * co)
    val = ch * co * math.cos(phi) - sh * so * math.sin(phi)
    recomposed = rho * math.cos(phi + theta)
    assert abs(val - recomposed) <= 1e-12 * max(1.0, rho)
    return TrhResult(val, rho, theta)


def trh_nat_eval(r, omega):
    """(rho_nat, theta_nat, trh_nat) at the given point.

    Raises where sinh 2r and sin 2omega both vanish (the modulus-argument
    decomposition degenerates there).
    """
    r, omega = float(r), float(omega)
    s2r, c2r = math.sinh(2 * r), math.cosh(2 * r)
    s2o, c2o = math.sin(2 * omega), math.cos(2 * omega)
    if s2r * s2r + s2o * s2o < 1e-8:
        raise ValueError("degenerate point: sinh 2r = sin 2omega = 0")
    rho_nat = (c2r - c2o) / (c2r + c2o)
    theta_nat = 2.0 * math.atan2(s2o, s2r)
    return TrhNatResult(rho_nat, theta_nat, rho_nat * complex(math.cos(theta_nat), math.sin(theta_nat)))


@dataclass(frozen=True)
class TrhDerivatives:
    """Closed-form first and second derivatives at (r, omega).

    theta_r/theta_omega are for the plain theta; the *_nat fields belong to
    (log rho_nat, theta_nat).  The pairs satisfy
        dlogrho_nat_dr     =  dtheta_nat_domega
        dtheta_nat_dr      = -dlogrho_nat_domega
        d2logrho_nat_dr2   = -d2logrho_nat_domega2
        d2theta_nat_dr2    = -d2theta_nat_domega2
    exactly (Cauchy-Riemann / harmonicity).
    """

    rho: float
    theta: float
    rho_nat: float
    theta_nat: float
    drho_dr: float
    drho_domega: float
    dtheta_dr: float
    dtheta_domega: float
    dlogrho_nat_dr: float
    dlogrho_nat_domega: float
    dtheta_nat_dr: float
    dtheta_nat_domega: float
    d2logrho_nat_dr2: float
    d2logrho_nat_domega2: float
    d2logrho_nat_drdomega: float
    d2theta_nat_dr2: float
    d2theta_nat_domega2: float
    d2theta_nat_drdomega: float


def trh_derivatives(r, omega):
    """All closed-form derivatives of (rho, theta) and
    (log rho_nat, theta_nat) at (r, omega)."""
    r, omega = float(r), float(omega)
    sh, ch = math.sinh(r), math.cosh(r)
    so, co = math.sin(omega), math.cos(omega)
    s2r, c2r = math.sinh(2 * r), math.cosh(2 * r)
    s2o, c2o = math.sin(2 * omega), math.cos(2 * omega)
    rho_sq = sh * sh + co * co
    if rho_sq < 1e-8:
        raise ValueError("rho vanishes: (r, omega) at/near (0, pi/2)")
    den = s2r * s2r + s2o * s2o
    if den < 1e-8:
        raise ValueError("degenerate point: sinh 2r = sin 2omega = 0")

    rho = math.sqrt(rho_sq)
    theta = math.atan2(sh * so, ch * co)
    rho_nat = (c2r - c2o) / (c2r + c2o)
    theta_nat = 2.0 * math.atan2(s2o, s2r)

    two_rho_sq = c2r + c2o  # = 2 rho^2

    lr = 4.0 * s2r * c2o / den
    lo = 4.0 * c2r * s2o / den
    lrr = -8.0 * c2r * c2o * (s2r * s2r - s2o * s2o) / den ** 2
    trr = 8.0 * s2r * s2o * (c2r * c2r + c2o * c2o) / den ** 2

    return TrhDerivatives(
        rho=rho,
        theta=theta,
        rho_nat=rho_nat,
        theta_nat=theta_nat,
        drho_dr=s2r / (2.0 * rho),
        drho_domega=-s2o / (2.0 * rho),
        dtheta_dr=s2o / two_rho_sq,
        dtheta_domega=s2r / two_rho_sq,
        dlogrho_nat_dr=lr,
        dlogrho_nat_domega=lo,
        dtheta_nat_dr=-lo,
        dtheta_nat_domega=lr,
        d2logrho_nat_dr2=lrr,
        d2logrho_nat_domega2=-lrr,
        d2logrho_nat_drdomega=-trr,
        d2theta_nat_dr2=trr,
        d2theta_nat_domega2=-trr,
        d2theta_nat_drdomega=lrr,
    )
