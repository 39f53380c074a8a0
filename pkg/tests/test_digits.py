"""Digit utilities: star digits, rational params, hulls, normalization."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorsum.digits import (
    BASE4,
    DigitSystem,
    Irrational,
    as_fraction,
    base4_model,
    hull,
    is_prime,
    make_rational,
    mixed_system,
    normalize_parameter,
    square_system,
    star,
)


def star_oracle(n, base):
    """Independent star computation via the full digit expansion."""
    digits = []
    while n:
        digits.append(n % base)
        n //= base
    j = next(i for i, d in enumerate(digits) if d != 0)
    return j, digits[j]


@pytest.mark.parametrize(
    "n,base,expected",
    [
        (1, 4, (0, 1)),
        (8, 4, (1, 2)),  # 8 = "20" base 4
        (48, 4, (2, 3)),  # 48 = "300" base 4
        (3, 9, (0, 3)),
        (18, 6, (1, 3)),
    ],
)
def test_star_examples(n, base, expected):
    assert star(n, base) == expected
    assert star_oracle(n, base) == expected


def test_star_rejects_zero():
    with pytest.raises(ValueError):
        star(0, 4)


@given(st.integers(1, 10**9), st.integers(2, 16))
def test_star_matches_expansion_oracle(n, base):
    assert star(n, base) == star_oracle(n, base)


@given(st.integers(1, 10**9), st.integers(2, 16))
def test_star_shift_property(n, base):
    j, ns = star(n, base)
    assert star(n * base, base) == (j + 1, ns)
    assert 1 <= ns <= base - 1


@pytest.mark.parametrize(
    "p,q,expect",
    [
        (2, 4, (1, 2, 1, 2)),
        (1, 3, (1, 3, 1, 3)),
        (2, 3, (2, 3, 2, 3)),
        (48, 9, (16, 3, 1, 3)),  # 16 = "100" base 4
    ],
)
def test_make_rational_examples(p, q, expect):
    r = make_rational(p, q, 4)
    assert (r.p, r.q, r.p_star, r.q_star) == expect


def test_make_rational_rejects_nonpositive():
    with pytest.raises(ValueError):
        make_rational(0, 3, 4)
    with pytest.raises(ValueError):
        make_rational(3, 0, 4)


def test_dichotomy_exhaustive_small():
    # reduced fractions never have p_star and q_star both even in base 4
    for p in range(1, 301):
        for q in range(1, 301):
            if math.gcd(p, q) != 1:
                continue
            r = make_rational(p, q, 4)
            both_odd = r.p_star % 2 == 1 and r.q_star % 2 == 1
            sum_odd = (r.p_star + r.q_star) % 2 == 1
            assert both_odd != sum_odd


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_dichotomy_random_large(p, q):
    g = math.gcd(p, q)
    r = make_rational(p // g, q // g, 4)
    assert not (r.p_star % 2 == 0 and r.q_star % 2 == 0)


def test_hull_examples():
    assert hull(BASE4, 1) == (0, Fraction(2, 3))
    assert hull(BASE4, 2) == (0, Fraction(1))
    assert hull(square_system(3), 1) == (0, Fraction(1, 2))


def test_hull_exact_types():
    lo, hi = hull(BASE4, Fraction(1, 3))
    assert isinstance(lo, Fraction) and isinstance(hi, Fraction)
    assert hi == Fraction(4, 9)


def test_hull_irrational_floats():
    lo, hi = hull(BASE4, Irrational(math.sqrt(2)))
    assert isinstance(hi, float)
    assert hi == pytest.approx((1 + math.sqrt(2)) / 3)


def test_hull_rejects_bare_float():
    with pytest.raises(TypeError):
        hull(BASE4, 0.5)


@given(st.fractions(min_value=Fraction(1, 60), max_value=60))
def test_hull_inversion_scaling(u):
    # E_{1/u} = (1/u) E_u for the symmetric model, so hulls scale the same way
    _, hi_u = hull(BASE4, u)
    _, hi_inv = hull(BASE4, 1 / u)
    assert hi_inv == hi_u / u


def test_system_factories_validate():
    with pytest.raises(ValueError):
        square_system(4)  # not prime
    with pytest.raises(ValueError):
        mixed_system(3, 3)  # must differ
    with pytest.raises(ValueError):
        mixed_system(2, 4)
    sys23 = mixed_system(2, 3)
    assert sys23.base == 6
    assert sys23.alpha_digits == (0, 1) and sys23.beta_digits == (0, 1, 2)
    assert not sys23.symmetric
    assert base4_model().symmetric


def test_digit_system_invariants():
    with pytest.raises(ValueError):
        DigitSystem(4, (0, 4), (0, 1), "bad")  # digit >= base
    with pytest.raises(ValueError):
        DigitSystem(4, (1, 2), (0, 1), "bad")  # missing zero
    with pytest.raises(ValueError):
        DigitSystem(4, (0, 1, 1), (0, 1), "bad")  # duplicate


def test_irrational_tag_validation():
    with pytest.raises(ValueError):
        Irrational(-1.0)
    with pytest.raises(ValueError):
        Irrational(float("nan"))
    with pytest.raises(TypeError):
        as_fraction(Irrational(1.5))


def test_is_prime_small():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_normalize_strips_base_powers():
    norm = normalize_parameter(Fraction(4, 3))
    assert norm.normalized == Fraction(1, 3)
    assert norm.stripped_powers_p == 1 and not norm.inverted
    norm = normalize_parameter(Fraction(8, 5))
    assert norm.normalized == Fraction(2, 5)  # 8 = 4 * 2
    norm = normalize_parameter(Fraction(1, 48))
    assert norm.normalized == Fraction(1, 3)  # 48 = 16 * 3, then invert? 1/3 <= 1 already
    assert norm.stripped_powers_q == 2


def test_normalize_inverts_into_unit_interval():
    norm = normalize_parameter(Fraction(3, 1))
    assert norm.normalized == Fraction(1, 3) and norm.inverted
    # mixed systems are asymmetric: no inversion
    norm = normalize_parameter(Fraction(5, 1), mixed_system(2, 3))
    assert norm.normalized == Fraction(5, 1) and not norm.inverted


@given(st.fractions(min_value=Fraction(1, 100), max_value=100))
@settings(max_examples=200)
def test_normalize_idempotent_and_unit(u):
    norm = normalize_parameter(u)
    assert 0 < norm.normalized <= 1
    again = normalize_parameter(norm.normalized)
    assert again.normalized == norm.normalized
