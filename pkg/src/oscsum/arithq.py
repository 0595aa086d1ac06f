"""Arithmetic over the rationals: multiplicative functions, ternary divisor
coefficients, Kloosterman and Gauss sums, and a twisted exponential sum with
a brute-force route and a closed form.

Conventions: all exponentials are e(x) = exp(2 pi i x) with positive sign;
the archimedean additive character used downstream is e(-x), and that sign
is tracked once in the Voronoi module rather than here.
"""

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from sympy import factorint
from sympy.ntheory.residue_ntheory import primitive_root

from ._accel import inverse_table, kloosterman_core, twisted_sum_core


# ---------------------------------------------------------------------------
# multiplicative basics
# ---------------------------------------------------------------------------

def mobius(n):
    if n < 1:
        raise ValueError("need n >= 1")
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def euler_phi(n):
    if n < 1:
        raise ValueError("need n >= 1")
    out = n
    for p in factorint(n):
        out = out // p * (p - 1)
    return out


def d3(n):
    """Ternary divisor function: number of ordered triples a*b*c = n."""
    if n < 1:
        raise ValueError("need n >= 1")
    out = 1
    for _, e in factorint(n).items():
        out *= (e + 1) * (e + 2) // 2
    return out


def divisors(n):
    ds = [1]
    for p, e in factorint(n).items():
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def eta(n, s):
    """Balanced divisor sum: sum_{d | n} (n / d^2)^(s - 1/2)."""
    return complex(sum(complex(n / d ** 2) ** complex(s - 0.5) for d in divisors(n)))


class MultiplicativeBasics(NamedTuple):
    mu: int
    phi: int
    d3: int
    eta: object  # s -> complex


def multiplicative_basics(n):
    """(mu(n), phi(n), d3(n), eta(n, .)) in one factorization pass."""
    return MultiplicativeBasics(mobius(n), euler_phi(n), d3(n), lambda s: eta(n, s))


# ---------------------------------------------------------------------------
# rank-3 coefficients, ternary-divisor model
# ---------------------------------------------------------------------------

def coeff_A(n1, n2):
    """Double-indexed coefficients A(n1, n2) of the ternary-divisor model:
    A(n, 1) = A(1, n) = d3(n), extended by
    A(m, n) = sum_{d | gcd(m, n)} mu(d) d3(m/d) d3(n/d)
    (the Mobius inversion of A(m,1) A(1,n) = sum_{d | gcd} A(m/d, n/d))."""
    if n1 < 1 or n2 < 1:
        raise ValueError("need positive indices")
    g = math.gcd(n1, n2)
    return sum(mobius(d) * d3(n1 // d) * d3(n2 // d) for d in divisors(g))


@dataclass
class CoeffTable:
    """All A(n1, n2) with n1^2 n2 <= X."""

    X: float
    entries: dict = field(default_factory=dict)

    def __call__(self, n1, n2):
        return self.entries[(n1, n2)]

    def to_csv(self, stream_or_path):
        def write(fh):
            w = csv.writer(fh)
            w.writerow(["n1", "n2", "A"])
            for (n1, n2), v in sorted(self.entries.items()):
                w.writerow([n1, n2, v])

        if hasattr(stream_or_path, "write"):
            write(stream_or_path)
        else:
            with open(stream_or_path, "w", newline="") as fh:
                write(fh)

    def sum_abs_sq_over_x(self):
        return sum(v * v for v in self.entries.values()) / self.X


def d3_table(X):
    """CoeffTable of the ternary-divisor model up to n1^2 n2 <= X."""
    X = float(X)
    entries = {}
    n1 = 1
    while n1 * n1 <= X:
        n2_max = int(X / (n1 * n1))
        for n2 in range(1, n2_max + 1):
            entries[(n1, n2)] = coeff_A(n1, n2)
        n1 += 1
    return CoeffTable(X=X, entries=entries)


# ---------------------------------------------------------------------------
# Kloosterman sums
# ---------------------------------------------------------------------------

@lru_cache(maxsize=2048)
def _inv_table_cached(c):
    return inverse_table(c)


def kloosterman_s(a, b, c):
    """S(a, b; c) = sum over units x mod c of e((a x + b x^{-1})/c).

    Always real; S(a, b; c) = S(b, a; c)."""
    if c < 1:
        raise ValueError("need c >= 1")
    a, b = a % c, b % c
    if c == 1:
        return complex(1.0)
    return kloosterman_core(a, b, c, _inv_table_cached(c))


def kl_local(alpha, beta, q, b):
    """Local Kloosterman sum at the finite places dividing b, modulus q.

    b names the completion carrying the additive character; the sum runs
    over units in (1/q)Z/Z at those places, which over the rationals
    requires every prime of q to divide b and collapses the value to the
    classical S(alpha, beta; q).  q = 1 gives the empty-product value 1.
    """
    if q < 1 or b < 1:
        raise ValueError("need positive modulus")
    if q == 1:
        return complex(1.0)
    rad = 1
    for p in factorint(q):
        rad *= p
    if b % rad != 0:
        raise ValueError("character support does not cover the modulus")
    return kloosterman_s(alpha, beta, q)


def weil_ratio(a, b, c):
    """|S(a,b;c)| divided by its square-root cap d(c) (a,b,c)^{1/2} c^{1/2}."""
    s = abs(kloosterman_s(a, b, c))
    g = math.gcd(math.gcd(a, b) if (a or b) else c, c)
    g = g if g > 0 else c
    cap = len(divisors(c)) * math.sqrt(g) * math.sqrt(c)
    return s / cap


# ---------------------------------------------------------------------------
# Dirichlet characters and Gauss sums
# ---------------------------------------------------------------------------

def _unit_group_generators(n):
    """Generators (lifted mod n) and their orders for (Z/n)^*."""
    gens = []
    for p, e in factorint(n).items():
        pe = p ** e
        rest = n // pe
        # CRT lift: g at the p-part, 1 elsewhere
        def lift(g):
            if rest == 1:
                return g % n
            inv = pow(pe, -1, rest)
            return (g * rest * pow(rest, -1, pe) + 1 * pe * inv) % n

        if p == 2:
            if e == 1:
                continue
            if e == 2:
                gens.append((lift(3), 2))
            else:
                gens.append((lift(pe - 1), 2))
                gens.append((lift(5), 2 ** (e - 2)))
        else:
            g = primitive_root(pe)
            gens.append((lift(g), euler_phi(pe)))
    return gens


@dataclass(frozen=True)
class DirichletChar:
    """A Dirichlet character mod n, stored as its full value table."""

    modulus: int
    exponents: tuple  # k_i against the stored generator list
    values: tuple  # complex values at 0..n-1 (0 on non-units)

    def __call__(self, x):
        return self.values[x % self.modulus]

    @property
    def is_trivial(self):
        return all(k == 0 for k in self.exponents)

    def conjugate(self):
        return DirichletChar(
            self.modulus,
            self.exponents,
            tuple(np.conj(v) for v in self.values),
        )

    @property
    def conductor(self):
        n = self.modulus
        for f in divisors(n):
            ok = True
            for x in range(1, n):
                if math.gcd(x, n) == 1 and x % f == 1 % f and abs(self(x) - 1) > 1e-10:
                    ok = False
                    break
            if ok:
                return f
        return n

    @property
    def is_primitive(self):
        return self.conductor == self.modulus

    @property
    def parity(self):
        """chi(-1), +1 or -1."""
        return int(round(self(self.modulus - 1).real)) if self.modulus > 1 else 1


def characters_mod(n):
    """All phi(n) Dirichlet characters mod n."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        return [DirichletChar(1, (), (1 + 0j,))]
    gens = _unit_group_generators(n)
    # enumerate the unit group once, recording exponent tuples
    log = {1 % n: tuple(0 for _ in gens)}
    frontier = [1 % n]
    for i, (g, order) in enumerate(gens):
        current = list(log.items())
        for x, ex in current:
            acc = x
            for k in range(1, order):
                acc = (acc * g) % n
                ex2 = list(ex)
                ex2[i] = k
                log[acc] = tuple(ex2)
    orders = [order for _, order in gens]
    chars = []

    def rec(idx, chosen):
        if idx == len(orders):
            vals = np.zeros(n, dtype=complex)
            for x, ex in log.items():
                ph = sum(k * e / o for k, e, o in zip(chosen, ex, orders))
                vals[x] = np.exp(2j * np.pi * ph)
            chars.append(DirichletChar(n, tuple(chosen), tuple(vals)))
            return
        for k in range(orders[idx]):
            rec(idx + 1, chosen + [k])

    rec(0, [])
    return chars


def gauss_tau(chi):
    """tau(chi) = sum_{x mod n} chi(x) e(x/n)."""
    n = chi.modulus
    x = np.arange(n)
    vals = np.array([chi(int(t)) for t in x])
    return complex(np.sum(vals * np.exp(2j * np.pi * x / n)))


# ---------------------------------------------------------------------------
# twisted exponential sum: brute force and closed form
# ---------------------------------------------------------------------------

class ExpSumResult(NamedTuple):
    brute: complex
    closed: complex
    abs_err: float


def _exp_sum_params(c, delta, n1):
    g = math.gcd(c, delta)
    c1 = c // g
    delta1 = delta // g
    if c1 % n1 != 0:
        raise ValueError("n1 must divide c1 = c / gcd(c, delta)")
    f1 = c1 // n1
    return c1, delta1, f1


def exp_sum_brute(c, delta, n2, n1):
    """sum over units d mod c of e(d/c) S(d, bar(delta1) n2; f1),
    where c1 = c/gcd(c,delta), delta1 = delta/gcd(c,delta), f1 = c1/n1."""
    _, delta1, f1 = _exp_sum_params(c, delta, n1)
    if c == 1:
        return complex(1.0)
    m = (pow(delta1, -1, f1) * n2) % f1 if f1 > 1 else 0
    return twisted_sum_core(c, m, f1, _inv_table_cached(c), _inv_table_cached(f1))


def _exactly_dividing_part(n):
    """Product of the primes exactly dividing n (p | n, p^2 does not)."""
    out = 1
    for p, e in factorint(n).items():
        if e == 1:
            out *= p
    return out


def exp_sum_closed(c, delta, n2, n1):
    """Closed form for exp_sum_brute:

    e(-bar(delta1) (c/f1) n2 / f1) * sum over c2 | f1, f2 | squarefree part
    of f1 with (c2, c/f1) = (c2, f2) = 1 and f1 | c2 f2 n2, of
    (f1/f2) mu(c/c2) mu(f2) e(bar(delta1) bar(c2) (c/f1) n2' / f2),
    n2' = c2 f2 n2 / f1.

    The "squarefree part" here is the product of primes exactly dividing f1
    (pinned against the brute-force route; see the module tests).
    """
    _, delta1, f1 = _exp_sum_params(c, delta, n1)
    if c == 1:
        return complex(1.0)
    cf = c // f1
    db = pow(delta1, -1, f1) if f1 > 1 else 0
    total = 0j
    sf = _exactly_dividing_part(f1)
    for c2 in divisors(f1):
        if math.gcd(c2, cf) != 1:
            continue
        mu_cc2 = mobius(c // c2) if (c % c2 == 0) else 0
        if mu_cc2 == 0:
            continue
        for f2 in divisors(sf):
            if math.gcd(c2, f2) != 1:
                continue
            if (c2 * f2 * n2) % f1 != 0:
                continue
            n2p = c2 * f2 * n2 // f1
            mu_f2 = mobius(f2)
            if f2 == 1:
                phase = 1.0 + 0j
            else:
                c2bar = pow(c2 % f2, -1, f2) if math.gcd(c2, f2) == 1 else None
                phase = np.exp(2j * np.pi * ((db % f2) * c2bar * cf * n2p % f2) / f2)
            total += (f1 // f2) * mu_cc2 * mu_f2 * phase
    if f1 > 1:
        pref = np.exp(-2j * np.pi * ((db * cf * n2) % f1) / f1)
    else:
        pref = 1.0 + 0j
    return complex(pref * total)


def exp_sum_T(c, delta, n2, n1):
    """Both routes and their absolute difference."""
    b = exp_sum_brute(c, delta, n2, n1)
    cl = exp_sum_closed(c, delta, n2, n1)
    return ExpSumResult(b, cl, abs(b - cl))
