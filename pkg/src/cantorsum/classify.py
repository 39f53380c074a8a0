"""Decision procedures for the measure/dimension trichotomy of E_u.

Rational parameters split by the leading base-b digits of the reduced
numerator and denominator; irrational parameters are a branch of their own,
decided purely by the Irrational tag.  For the quarter-base model:

* p* + q* odd   -> E_u contains an interval and is the closure of its
                   interior (IntervalCase; the canonical measure is
                   absolutely continuous with bounded density),
* p*, q* odd    -> E_u is Lebesgue-null with box dimension < 1
                   (SingularThinCase; the lattice V_n develops a multiple
                   point, which this module reports as a witness),
* irrational u  -> E_u is Lebesgue-null (IrrationalCase).

The square(r) and mixed(r,s) families use divisibility of p*, q* by r and s
instead of parity.  The multidimensional product family delegates to the
one-dimensional test with the dimension bound scaled by d.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, log

from .digits import (
    BASE4,
    DigitSystem,
    Irrational,
    NormalizedParam,
    Param,
    RationalParam,
    as_fraction,
    is_prime,
    make_rational,
    mixed_system,
    normalize_parameter,
    square_system,
)
from .lattice import DEFAULT_CAPS, EnumerationCaps, first_collision


class Branch(Enum):
    INTERVAL = "IntervalCase"
    SINGULAR_THIN = "SingularThinCase"
    IRRATIONAL = "IrrationalCase"


class KenyonBranch(Enum):
    POSITIVE_MEASURE = "PositiveMeasure"
    THIN_DIMENSION = "ThinDimension"


@dataclass(frozen=True)
class Witnesses:
    """Computable evidence for the singular branch."""

    n0: int
    nu: int
    dim_upper_bound: float


@dataclass(frozen=True)
class Classification:
    branch: Branch
    theorem: str
    base: int
    u_input: Param
    normalization: NormalizedParam | None
    witnesses: Witnesses | None
    dimension: int = 1

    @property
    def normalized_u(self) -> Fraction | None:
        return self.normalization.normalized if self.normalization else None

    def to_json_dict(self) -> dict:
        if isinstance(self.u_input, Irrational):
            u_str = repr(self.u_input.value)
        else:
            uf = as_fraction(self.u_input)
            u_str = f"{uf.numerator}/{uf.denominator}"
        out = {
            "u": u_str,
            "base": str(self.base),
            "branch": self.branch.value,
            "theorem": self.theorem,
            "n0": str(self.witnesses.n0) if self.witnesses else None,
            "nu": str(self.witnesses.nu) if self.witnesses else None,
            "dimUpperBound": self.witnesses.dim_upper_bound if self.witnesses else None,
            "normalizedU": str(self.normalized_u) if self.normalized_u is not None else None,
        }
        return out


def _rational_branch(system: DigitSystem, norm: NormalizedParam) -> tuple[Branch, RationalParam]:
    ur = make_rational(norm.normalized.numerator, norm.normalized.denominator, system.base)
    if system.base == 4 or system.label.startswith("Square"):
        r = system.section_multiplier  # 2 for base4; both cases test divisibility by r
        interval = ur.p_star % r == 0 or ur.q_star % r == 0
    elif system.label.startswith("Mixed"):
        r = len(system.alpha_digits)
        s = len(system.beta_digits)
        interval = ur.p_star % r == 0 or ur.q_star % s == 0
    else:
        raise ValueError(f"no classification rule for digit system {system.label}")
    return (Branch.INTERVAL if interval else Branch.SINGULAR_THIN), ur


def _classify_in_system(
    system: DigitSystem,
    u: Param,
    theorem: str,
    witness_nmax: int,
    caps: EnumerationCaps,
) -> Classification:
    if isinstance(u, Irrational):
        return Classification(Branch.IRRATIONAL, theorem, system.base, u, None, None)
    norm = normalize_parameter(u, system)
    branch, ur = _rational_branch(system, norm)
    witnesses = None
    if branch is Branch.SINGULAR_THIN and witness_nmax >= 1:
        report = first_collision(system, ur, witness_nmax, caps)
        if report.found:
            witnesses = Witnesses(report.first_level, report.nu, report.dim_upper_bound())
    return Classification(branch, theorem, system.base, u, norm, witnesses)


def classify_base4(
    u: Param, witness_nmax: int = 10, caps: EnumerationCaps = DEFAULT_CAPS
) -> Classification:
    """Classify E_u in the quarter-base model.

    Interval branch when p* + q* is odd, singular-thin branch (with a
    collision witness when one is found by witness_nmax) when p* and q* are
    both odd, irrational branch on the tag.
    """
    return _classify_in_system(BASE4, u, "base4", witness_nmax, caps)


def classify_square(
    r: int, u: Param, witness_nmax: int = 8, caps: EnumerationCaps = DEFAULT_CAPS
) -> Classification:
    """Classify E_u in base r^2 with alphabets {0..r-1}; singular iff r divides neither star digit."""
    system = square_system(r)
    return _classify_in_system(system, u, f"square({r})", witness_nmax, caps)


def classify_mixed(
    r: int, s: int, u: Param, witness_nmax: int = 8, caps: EnumerationCaps = DEFAULT_CAPS
) -> Classification:
    """Classify E_u in base r*s; singular iff r does not divide p* and s does not divide q*."""
    system = mixed_system(r, s)
    return _classify_in_system(system, u, f"mixed({r},{s})", witness_nmax, caps)


def classify_kenyon(p: int, q: int) -> KenyonBranch:
    """Positive measure for the base-3 digit set {0, 1, p/q} iff p + q == 0 mod 3.

    The rule applies to the reduced fraction, so p/q is reduced first.
    """
    if p <= 0 or q <= 0:
        raise ValueError(f"need positive p, q; got {p}, {q}")
    g = gcd(p, q)
    p, q = p // g, q // g
    return KenyonBranch.POSITIVE_MEASURE if (p + q) % 3 == 0 else KenyonBranch.THIN_DIMENSION


def classify_multidim(
    d: int, u: Param, witness_nmax: int = 10, caps: EnumerationCaps = DEFAULT_CAPS
) -> Classification:
    """Classify the d-fold product family F_u = (E_u)^d.

    The branch agrees with the one-dimensional case; the covering bound
    scales to dim F_u <= d * dim E_u < d on the singular branch.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    base = classify_base4(u, witness_nmax, caps)
    witnesses = base.witnesses
    if witnesses is not None:
        witnesses = Witnesses(witnesses.n0, witnesses.nu, d * witnesses.dim_upper_bound)
    return Classification(
        base.branch, f"multidim({d},base4)", base.base, u, base.normalization, witnesses, dimension=d
    )


@dataclass(frozen=True)
class SectionParam:
    """Height h of a horizontal section and the induced sumset parameter u.

    B_h = (1-h) E_u + i h with u = c*h/(1-h), c the system's section
    multiplier.
    """

    h: object
    u: object


def section_to_u(h, system: DigitSystem = BASE4) -> SectionParam:
    """Map section height h in (0,1) to the sumset parameter u = c*h/(1-h)."""
    c = system.section_multiplier
    if isinstance(h, Irrational):
        if not 0 < h.value < 1:
            raise ValueError(f"section height must lie in (0,1), got {h.value}")
        return SectionParam(h, Irrational(c * h.value / (1 - h.value)))
    hf = Fraction(h)
    if not 0 < hf < 1:
        raise ValueError(f"section height must lie in (0,1), got {hf}")
    return SectionParam(hf, c * hf / (1 - hf))


def u_to_section(u, system: DigitSystem = BASE4) -> SectionParam:
    """Inverse map: h = u/(u + c)."""
    c = system.section_multiplier
    if isinstance(u, Irrational):
        if u.value <= 0:
            raise ValueError(f"parameter must be positive, got {u.value}")
        return SectionParam(Irrational(u.value / (u.value + c)), u)
    uf = as_fraction(u)
    if uf <= 0:
        raise ValueError(f"parameter must be positive, got {uf}")
    return SectionParam(uf / (uf + c), uf)


def section_invariance(h) -> bool:
    """Branch equality of the sections at h and 4h/(3h+1).

    The substitution multiplies u by 4, which never changes the branch.
    """
    hf = Fraction(h)
    if not 0 < hf < 1:
        raise ValueError(f"section height must lie in (0,1), got {hf}")
    h2 = 4 * hf / (3 * hf + 1)
    b1 = classify_base4(section_to_u(hf).u, witness_nmax=0).branch
    b2 = classify_base4(section_to_u(h2).u, witness_nmax=0).branch
    return b1 == b2
