"""Interval covers of E_u, exact union measures, and box-dimension estimates.

The self-affine identity b^n E_u = V_n + E_u makes the depth-n cover exactly
computable: E_u is covered by the translates b^(-n) (v + hull) over the
distinct values v of V_n.  All translates share one width, so after sorting
the union measure is width + sum(min(gap, width)) over consecutive gaps;
with rational u every quantity is an integer in units of 1/(q (b-1) b^n) and
the result is an exact Fraction.  For irrational u the cover uses float
endpoints widened by 2^-40 per side so the reported measure is a certified
upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import log

import numpy as np

from .classify import Branch, classify_base4, classify_mixed, classify_square
from .digits import BASE4, DigitSystem, Irrational, Param, as_fraction, hull
from .lattice import (
    DEFAULT_CAPS,
    EnumerationCaps,
    _as_array,
    _key_dtype,
    distinct_lattice_levels,
    pair_contributions,
)

_FLOAT_SLACK = 2.0**-40


@dataclass
class CoverEstimate:
    """Depth-n cover summary: distinct count, union measure, dimension estimate."""

    level: int
    distinct_count: int
    union_measure: Fraction | float
    box_dim_estimate: float
    intervals: list[tuple[Fraction, Fraction]] | None = None

    @property
    def union_measure_float(self) -> float:
        return float(self.union_measure)


def _union_length_scaled(positions, width):
    """Union length of equal-width intervals at sorted integer positions."""
    if len(positions) == 1:
        return width
    gaps = np.diff(positions)
    if gaps.dtype == object:
        clipped = sum(min(int(g), width) for g in gaps)
    else:
        clipped = int(np.minimum(gaps, width).sum())
    return clipped + width


def _merged_intervals_scaled(positions, width):
    merged = []
    lo = hi = None
    for pos in positions:
        pos = int(pos)
        if hi is not None and pos <= hi:
            hi = max(hi, pos + width)
        else:
            if hi is not None:
                merged.append((lo, hi))
            lo, hi = pos, pos + width
    merged.append((lo, hi))
    return merged


def _scaled_positions(keys, b):
    """keys * (b-1), upcast to arbitrary precision if int64 could overflow."""
    if keys.dtype == np.int64 and len(keys) and (b - 1) * int(keys[-1]) >= 2**62:
        keys = keys.astype(object)
    return keys * (b - 1)


def _rational_cover(system, u, n, keep_intervals, caps):
    contribs, ur = pair_contributions(system, u)
    b = system.base
    keys = None
    for _, ks in distinct_lattice_levels(contribs, b, n, caps):
        keys = ks
    # interval of one translate, in units of 1/(q (b-1) b^n): [ (b-1)k, (b-1)k + W ]
    width = ur.q * system.max_alpha + ur.p * system.max_beta
    positions = _scaled_positions(keys, b)
    denom = ur.q * (b - 1) * b**n
    measure = Fraction(_union_length_scaled(positions, width), denom)
    intervals = None
    if keep_intervals:
        intervals = [
            (Fraction(lo, denom), Fraction(hi, denom))
            for lo, hi in _merged_intervals_scaled(positions, width)
        ]
    return len(keys), measure, intervals


def _irrational_cover(system, u_value, n, caps):
    caps.check(n, "materialize")
    b = system.base
    level_values = np.array(
        sorted(a + u_value * bd for a in system.alpha_digits for bd in system.beta_digits),
        dtype=np.float64,
    )
    values = np.array([0.0])
    scale = 1.0
    for _ in range(n):
        values = np.unique((values[:, None] + scale * level_values[None, :]).ravel())
        scale *= b
    hull_hi = (system.max_alpha + u_value * system.max_beta) / (b - 1)
    positions = values / float(b) ** n
    width = hull_hi / float(b) ** n + 2 * _FLOAT_SLACK
    if len(positions) == 1:
        measure = width
    else:
        measure = float(np.minimum(np.diff(positions), width).sum()) + width
    return len(values), measure


def cover_at_depth(
    system: DigitSystem,
    u: Param,
    n: int,
    keep_intervals: bool = False,
    caps: EnumerationCaps = DEFAULT_CAPS,
) -> CoverEstimate:
    """Cover E_u by the b^(-n)-scale translates of its hull along V_n.

    Exact rational union measure for rational u; certified float upper bound
    (each interval widened by 2^-40 per side) for an Irrational tag.
    """
    if n < 1:
        raise ValueError(f"depth must be >= 1, got {n}")
    if isinstance(u, Irrational):
        nu, measure = _irrational_cover(system, u.value, n, caps)
        intervals = None
    else:
        nu, measure, intervals = _rational_cover(system, u, n, keep_intervals, caps)
    dim = log(nu) / (n * log(system.base)) if nu > 1 else 0.0
    return CoverEstimate(n, nu, measure, dim, intervals)


def dim_upper_bound_from_collision(n0: int, nu: int, base: int) -> float:
    """Covering bound log(nu) / (n0 log base) from a level-n0 collision.

    nu^m translates of scale base^(-m*n0) cover the set for every m, so the
    box (hence Hausdorff) dimension is at most this value, strictly below 1.
    Requires an actual collision: nu < base**n0.
    """
    if n0 < 1:
        raise ValueError(f"collision level must be >= 1, got {n0}")
    if nu < 1:
        raise ValueError(f"cardinality must be >= 1, got {nu}")
    if nu >= base**n0:
        raise ValueError(
            f"nu={nu} >= {base}^{n0}: no collision at this level, so no dimension bound"
        )
    return log(nu) / (n0 * log(base))


def box_dim_series(
    system: DigitSystem, u: Param, n_max: int, caps: EnumerationCaps = DEFAULT_CAPS
) -> list[CoverEstimate]:
    """Cover estimates for n = 1..n_max; diagnostics for the dichotomy branches."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if isinstance(u, Irrational):
        return [cover_at_depth(system, u, n, caps=caps) for n in range(1, n_max + 1)]
    contribs, ur = pair_contributions(system, u)
    b = system.base
    width = ur.q * system.max_alpha + ur.p * system.max_beta
    out = []
    for n, keys in distinct_lattice_levels(contribs, b, n_max, caps):
        positions = _scaled_positions(keys, b)
        denom = ur.q * (b - 1) * b**n
        measure = Fraction(_union_length_scaled(positions, width), denom)
        nu = len(keys)
        dim = log(nu) / (n * log(b)) if nu > 1 else 0.0
        out.append(CoverEstimate(n, nu, measure, dim))
    return out


@dataclass(frozen=True)
class ProgressionWitness:
    """Heuristic arithmetic-progression structure found in the key sets.

    alpha is the common difference in value units (key difference / q);
    offsets are run-start residues modulo the key-unit difference.  This is
    recorded desk-scale evidence, not a verified decomposition of the full
    lattice union.
    """

    alpha: Fraction
    alpha_key: int
    offsets: tuple[int, ...]


def _run_differences(sorted_keys, min_len=3):
    """Common differences of maximal >= min_len runs in a sorted integer array."""
    diffs = np.diff(sorted_keys)
    found = set()
    run_len = 1
    for i in range(len(diffs)):
        if i > 0 and diffs[i] == diffs[i - 1]:
            run_len += 1
        else:
            run_len = 1
        if run_len >= min_len - 1:
            found.add(int(diffs[i]))
    return found


def progression_scan(
    system: DigitSystem, u: Param, n_max: int, caps: EnumerationCaps = DEFAULT_CAPS
) -> ProgressionWitness | None:
    """Scan the interval-branch key sets for arithmetic-progression structure.

    Restricts each level to its saturated core [0, min_contribution * b^n),
    where the level set and the full lattice union agree, decomposes the
    core into maximal constant-difference runs, and returns the smallest
    difference supported by runs at every level.  None means inconclusive.
    Only the interval branch is eligible; the singular branch is rejected.
    """
    if system is BASE4 or system.base == 4:
        cls = classify_base4(u, witness_nmax=0)
    elif system.label.startswith("Square"):
        cls = classify_square(len(system.alpha_digits), u, witness_nmax=0)
    else:
        cls = classify_mixed(len(system.alpha_digits), len(system.beta_digits), u, witness_nmax=0)
    if cls.branch is not Branch.INTERVAL:
        raise ValueError(f"progression scan applies to the interval branch only, got {cls.branch.value}")
    contribs, ur = pair_contributions(system, u)
    min_nonzero = min(c for c in contribs if c > 0)
    b = system.base
    candidates = None
    deepest_core = None
    contributing = 0
    for n, keys in distinct_lattice_levels(contribs, b, n_max, caps):
        window = min_nonzero * b**n
        core = keys[keys < window] if keys.dtype != object else keys[np.array([int(k) < window for k in keys])]
        if len(core) < 4:
            continue
        level_diffs = _run_differences(core)
        if not level_diffs:
            # too shallow to contain a 3-term run; no evidence either way
            continue
        contributing += 1
        candidates = level_diffs if candidates is None else candidates & level_diffs
        deepest_core = core
    if not candidates or contributing < 2 or deepest_core is None:
        return None
    alpha_key = min(candidates)
    core = [int(k) for k in deepest_core]
    offsets = sorted({k % alpha_key for k in core})
    if len(offsets) > 64:
        return None
    return ProgressionWitness(Fraction(alpha_key, ur.q), alpha_key, tuple(offsets))
