"""Fourier transform of the canonical self-similar measure on E_u.

The canonical measure is the weak limit of uniform measures on b^(-n) V_n;
its transform is the infinite product

    mu_hat(t) = prod_{j>=1} C(b^(-j) t),
    C(t) = D_r1(t) D_r2(u t) / (r1 r2),
    D_r(t) = 1 + e^(it) + ... + e^(i(r-1)t),

with r1, r2 the alphabet sizes (r1 = r2 = 2 in the quarter-base model, where
|C(t)| = |cos(t/2) cos(ut/2)|).  Products are accumulated in log magnitude
plus phase so deep truncations cannot underflow, and probe arguments that
are rational multiples of pi are reduced modulo 2 pi in exact integer
arithmetic: head factors come out exactly 1 and vanishing factors are
detected symbolically, never by float comparison.

Truncating after J factors leaves a certified relative error: each skipped
factor differs from 1 by at most ((r1-1) + (r2-1)u) |b^(-j) t| / 2, so the
reported tail_bound = expm1(sum of those) dominates |reported - true|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .digits import BASE4, DigitSystem, Irrational, Param, as_fraction
from .lattice import pair_contributions

_GOLDEN = 0.6180339887498949


@dataclass(frozen=True)
class FourierEvaluation:
    t: float
    truncation: int
    value: complex
    abs_value: float
    tail_bound: float


def _u_float(u: Param) -> float:
    if isinstance(u, Irrational):
        return u.value
    return float(as_fraction(u))


def _tail_coefficient(system: DigitSystem, u_val: float) -> float:
    r1 = len(system.alpha_digits)
    r2 = len(system.beta_digits)
    return ((r1 - 1) + (r2 - 1) * u_val) / (2 * (system.base - 1))


def _truncation_level(system: DigitSystem, u_val: float, t_abs: float, tolerance: float) -> tuple[int, float]:
    """Smallest J with certified tail error expm1(C |t| b^-J) <= tolerance."""
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    if t_abs == 0.0:
        return 0, 0.0
    coef = _tail_coefficient(system, u_val)
    target = math.log1p(tolerance)
    b = system.base
    J = max(1, math.ceil(math.log(coef * t_abs / target, b))) if coef * t_abs > target else 1
    while J < 1024:
        s = coef * t_abs * b**-J
        if math.expm1(s) <= tolerance:
            return J, math.expm1(s)
        J += 1
    raise ValueError(f"cannot certify tolerance {tolerance} at |t|={t_abs}")


def _dirichlet_float(r: int, x: float) -> complex:
    """D_r(x) / r as a phasor sum."""
    return sum(cmath.exp(1j * m * x) for m in range(r)) / r


def _dirichlet_exact_pi(r: int, f: Fraction):
    """D_r(f*pi) / r with the phase reduced mod 2 exactly.

    Returns (is_zero, value).  Zero happens iff r*f is an even integer while
    f is not, i.e. the phasors are r-th roots of unity summing to 0.
    """
    f = f % 2
    if f == 0:
        return False, complex(1.0, 0.0)
    if (r * f) % 2 == 0:
        return True, complex(0.0, 0.0)
    total = 0j
    for m in range(r):
        g = (m * f) % 2
        total += cmath.exp(1j * (math.pi * float(g)))
    return False, total / r


def _assemble(t_float, J, log_abs, phase, zero, tail_bound) -> FourierEvaluation:
    if zero:
        return FourierEvaluation(t_float, J, 0j, 0.0, tail_bound)
    mag = math.exp(log_abs)
    return FourierEvaluation(t_float, J, cmath.rect(mag, phase), mag, tail_bound)


def mu_hat(system: DigitSystem, u: Param, t: float, tolerance: float = 1e-9) -> FourierEvaluation:
    """Evaluate mu_hat at a real t by the truncated factor product."""
    u_val = _u_float(u)
    if u_val <= 0:
        raise ValueError(f"parameter must be positive, got {u_val}")
    r1 = len(system.alpha_digits)
    r2 = len(system.beta_digits)
    J, tail = _truncation_level(system, u_val, abs(t), tolerance)
    log_abs = 0.0
    phase = 0.0
    zero = False
    x = float(t)
    for _ in range(J):
        x /= system.base
        factor = _dirichlet_float(r1, x) * _dirichlet_float(r2, u_val * x)
        mag = abs(factor)
        if mag == 0.0:
            zero = True
            break
        log_abs += math.log(mag)
        phase += cmath.phase(factor)
    return _assemble(float(t), J, log_abs, phase, zero, tail)


def mu_hat_at_pi_multiple(
    system: DigitSystem, u: Param, multiple, tolerance: float = 1e-9
) -> FourierEvaluation:
    """Evaluate mu_hat at t = multiple * pi with exact phase reduction.

    multiple may be an int or Fraction; u must be rational.  Factor
    arguments b^(-j) * multiple stay exact Fractions, so integer heads give
    factors of exactly 1 and zero factors are detected symbolically.
    """
    uf = as_fraction(u)
    if uf <= 0:
        raise ValueError(f"parameter must be positive, got {uf}")
    m = Fraction(multiple)
    r1 = len(system.alpha_digits)
    r2 = len(system.beta_digits)
    t_abs = abs(float(m)) * math.pi
    J, tail = _truncation_level(system, float(uf), t_abs, tolerance)
    log_abs = 0.0
    phase = 0.0
    zero = False
    f = m
    for _ in range(J):
        f = f / system.base
        z1, v1 = _dirichlet_exact_pi(r1, f)
        z2, v2 = _dirichlet_exact_pi(r2, uf * f)
        if z1 or z2:
            zero = True
            break
        factor = v1 * v2
        log_abs += math.log(abs(factor))
        phase += cmath.phase(factor)
    return _assemble(float(m) * math.pi, J, log_abs, phase, zero, tail)


@dataclass
class LimsupProbe:
    """Values of |mu_hat| along the probe sequence t = 2 q b^n pi."""

    multiples: list[int]
    values: list[float]
    tolerance: float

    @property
    def bounded_away_from_zero(self) -> bool:
        return min(self.values) > 10 * self.tolerance


def limsup_probe(
    u: Param, n_range, tolerance: float = 1e-9, system: DigitSystem = BASE4
) -> LimsupProbe:
    """Probe |mu_hat(2 q b^n pi)| for n in n_range.

    For rational u the head factors are exactly 1, so the values are
    constant in n; on the doubly-odd branch they stay away from 0, while an
    even star digit plants an exactly-vanishing factor.
    """
    uf = as_fraction(u)
    ns = list(n_range)
    if not ns:
        raise ValueError("empty probe range")
    multiples = [2 * uf.denominator * system.base**n for n in ns]
    values = [
        mu_hat_at_pi_multiple(system, uf, mult, tolerance).abs_value for mult in multiples
    ]
    return LimsupProbe(multiples, values, tolerance)


@dataclass(frozen=True)
class BandSupremum:
    band: int
    t_at_max: float
    sup_abs: float


def decay_scan(
    system: DigitSystem,
    u: Param,
    band_count: int,
    samples_per_band: int = 256,
    tolerance: float = 1e-9,
    seed: int = 0,
) -> list[BandSupremum]:
    """Max of |mu_hat| over golden-ratio samples of the bands [b^k, b^(k+1)].

    Bands run k = 2 .. band_count+1.  Sampling is low-discrepancy (Kronecker
    sequence offset by the seed), hence reproducible.  For rational u every
    probe point 2 q b^n pi falling inside a band joins the sample so the
    non-decaying branch keeps its witness in each band.
    """
    if band_count < 2:
        raise ValueError(f"need at least 2 bands, got {band_count}")
    if samples_per_band < 1:
        raise ValueError(f"need at least 1 sample per band, got {samples_per_band}")
    u_val = _u_float(u)
    b = system.base
    offset = (seed * _GOLDEN * _GOLDEN) % 1.0
    out = []
    for k in range(2, band_count + 2):
        lo = float(b) ** k
        best = (0.0, lo)
        for i in range(samples_per_band):
            t = lo * (1.0 + (b - 1) * ((offset + i * _GOLDEN) % 1.0))
            val = mu_hat(system, u, t, tolerance).abs_value
            if val > best[0]:
                best = (val, t)
        if not isinstance(u, Irrational):
            uf = as_fraction(u)
            step = 2 * uf.denominator * math.pi
            n = 0
            while step * b**n < lo * b:
                t = step * b**n
                if t >= lo:
                    ev = mu_hat_at_pi_multiple(system, uf, 2 * uf.denominator * b**n, tolerance)
                    if ev.abs_value > best[0]:
                        best = (ev.abs_value, ev.t)
                n += 1
        out.append(BandSupremum(k, best[1], best[0]))
    return out
