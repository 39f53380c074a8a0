"""Radix digit systems underlying the Cantor sumset families E + u*E'.

A digit system fixes a base b and two digit alphabets.  The first Cantor
factor draws its base-b digits from the alpha alphabet, the second from the
beta alphabet, and the family is parameterized by u > 0:

    E_u = { sum_{j>=1} (eps_j + u*eps'_j) b^(-j),  eps_j in alpha, eps'_j in beta }

Three families are supported:

* ``base4``      b = 4, both alphabets {0, 1}
* ``square(r)``  b = r^2, both alphabets {0, ..., r-1}, r prime
* ``mixed(r,s)`` b = r*s, alphabets {0, ..., r-1} and {0, ..., s-1}, r != s prime

All arithmetic on digits, numerators and denominators is exact (Python ints
and fractions.Fraction); nothing here can silently overflow.  Irrational
parameters are represented by the :class:`Irrational` tag so that no branch
decision ever rests on float equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union


def is_prime(n: int) -> bool:
    """Trial-division primality, fine for the small r, s used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Irrational:
    """Parameter tagged as irrational, carried as a float approximation.

    The tag, not the float, drives every classification branch: any float is
    rational, so numeric tests could never distinguish the irrational case.
    """

    value: float

    def __post_init__(self):
        v = self.value
        if not (v > 0) or v != v or v in (float("inf"),):
            raise ValueError(f"irrational parameter must be a finite positive float, got {v!r}")


@dataclass(frozen=True)
class DigitSystem:
    """Base and digit alphabets of one sumset family."""

    base: int
    alpha_digits: tuple[int, ...]
    beta_digits: tuple[int, ...]
    label: str

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        for name, digits in (("alpha", self.alpha_digits), ("beta", self.beta_digits)):
            if not digits:
                raise ValueError(f"{name} alphabet is empty")
            if list(digits) != sorted(set(digits)):
                raise ValueError(f"{name} alphabet must be sorted and duplicate-free: {digits}")
            if digits[0] != 0:
                raise ValueError(f"{name} alphabet must contain 0: {digits}")
            if any(d < 0 or d >= self.base for d in digits):
                raise ValueError(f"{name} digits must lie in [0, {self.base}): {digits}")

    @property
    def max_alpha(self) -> int:
        return self.alpha_digits[-1]

    @property
    def max_beta(self) -> int:
        return self.beta_digits[-1]

    @property
    def alphabet_size(self) -> int:
        """Number of digit pairs per position; |V_n| counted with multiplicity is this to the n."""
        return len(self.alpha_digits) * len(self.beta_digits)

    @property
    def section_multiplier(self) -> int:
        """Homothety ratio c of the second Cantor factor (E' = c*E_beta + i).

        Chosen so the two factors tile: E_alpha + c*E_beta = [0, 1].  Equals
        the alpha alphabet size in every supported family (2, r, r).
        """
        return len(self.alpha_digits)

    @property
    def symmetric(self) -> bool:
        """True when both factors use the same alphabet, so E_{1/u} = (1/u) E_u."""
        return self.alpha_digits == self.beta_digits


def base4_model() -> DigitSystem:
    """The quarter-base model: digits {0,1} against {0,1}."""
    return DigitSystem(4, (0, 1), (0, 1), "Base4Model")


def square_system(r: int) -> DigitSystem:
    """Base r^2 with both alphabets {0..r-1}; r must be prime."""
    if not is_prime(r):
        raise ValueError(f"square system requires a prime r, got {r}")
    digits = tuple(range(r))
    return DigitSystem(r * r, digits, digits, f"Square({r})")


def mixed_system(r: int, s: int) -> DigitSystem:
    """Base r*s with alphabets {0..r-1} and {0..s-1}; r != s, both prime."""
    if r == s:
        raise ValueError(f"mixed system requires distinct primes, got r = s = {r}")
    if not is_prime(r) or not is_prime(s):
        raise ValueError(f"mixed system requires primes, got r={r}, s={s}")
    return DigitSystem(r * s, tuple(range(r)), tuple(range(s)), f"Mixed({r},{s})")


BASE4 = base4_model()


def star(n: int, base: int = 4) -> tuple[int, int]:
    """First nonzero base-b digit of n, read from the least significant end.

    Returns (j_star, n_star) where base**j_star is the largest power of the
    base dividing n and n_star = (n // base**j_star) % base.  Always
    1 <= n_star <= base - 1.
    """
    if n <= 0:
        raise ValueError(f"star digit undefined for n = {n}; need n >= 1")
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    j = 0
    while n % base == 0:
        n //= base
        j += 1
    return j, n % base


@dataclass(frozen=True)
class RationalParam:
    """Reduced rational parameter p/q with its leading base-b digit data."""

    p: int
    q: int
    base: int
    p_star: int
    q_star: int
    j_star_p: int
    j_star_q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


def make_rational(p: int, q: int, base: int = 4) -> RationalParam:
    """Reduce p/q and attach the first-nonzero-digit data in the given base.

    For base 4 the reduced fraction always lands in exactly one of the two
    classes (p_star and q_star both odd) xor (p_star + q_star odd); this is
    checked as a postcondition.
    """
    if p <= 0 or q <= 0:
        raise ValueError(f"rational parameter needs positive p and q, got {p}/{q}")
    g = gcd(p, q)
    p, q = p // g, q // g
    jp, ps = star(p, base)
    jq, qs = star(q, base)
    param = RationalParam(p, q, base, ps, qs, jp, jq)
    if base == 4:
        both_odd = ps % 2 == 1 and qs % 2 == 1
        sum_odd = (ps + qs) % 2 == 1
        assert both_odd != sum_odd, f"digit dichotomy violated for {p}/{q}: p*={ps}, q*={qs}"
    return param


Param = Union[Fraction, int, RationalParam, Irrational]


def as_fraction(u: Param) -> Fraction:
    """Exact value of a rational parameter; rejects floats and Irrational tags."""
    if isinstance(u, RationalParam):
        return u.value
    if isinstance(u, (Fraction, int)):
        return Fraction(u)
    if isinstance(u, Irrational):
        raise TypeError("parameter is tagged Irrational; exact rational arithmetic unavailable")
    raise TypeError(
        f"unsupported parameter type {type(u).__name__}; pass Fraction/int, "
        "RationalParam, or wrap a float in Irrational"
    )


def hull(system: DigitSystem, u: Param) -> tuple:
    """Convex support [0, (max_alpha + u*max_beta) / (base-1)] of E_u.

    Exact Fraction endpoints for rational u, float endpoints for an
    Irrational tag.  The geometric series sum_{j>=1} b^(-j) = 1/(b-1) scales
    the extreme digits.
    """
    if isinstance(u, Irrational):
        uu = u.value
        if uu <= 0:
            raise ValueError(f"parameter must be positive, got {uu}")
        return (0.0, (system.max_alpha + uu * system.max_beta) / (system.base - 1))
    uf = as_fraction(u)
    if uf <= 0:
        raise ValueError(f"parameter must be positive, got {uf}")
    return (Fraction(0), (system.max_alpha + uf * system.max_beta) / (system.base - 1))


@dataclass(frozen=True)
class NormalizedParam:
    """Record of the normalization applied to u before classification."""

    original: Fraction
    normalized: Fraction
    stripped_powers_p: int
    stripped_powers_q: int
    inverted: bool


def normalize_parameter(u: Param, system: DigitSystem = BASE4) -> NormalizedParam:
    """Strip base-power factors from p and q, then invert into (0, 1].

    Multiplying u by the base or its inverse never changes which branch of
    the dichotomy applies, and for symmetric systems neither does u -> 1/u
    (E_{1/u} = (1/u) E_u).  The returned record keeps the original value so
    results can be reported against it.  Inversion is skipped for
    asymmetric (mixed) systems, where the two alphabets play different roles.
    """
    uf = as_fraction(u)
    if uf <= 0:
        raise ValueError(f"parameter must be positive, got {uf}")
    b = system.base
    jp, _ = star(uf.numerator, b) if uf.numerator > 0 else (0, 0)
    jq, _ = star(uf.denominator, b)
    p = uf.numerator // b**jp
    q = uf.denominator // b**jq
    inverted = False
    if system.symmetric and p > q:
        p, q = q, p
        inverted = True
    return NormalizedParam(uf, Fraction(p, q), jp, jq, inverted)
