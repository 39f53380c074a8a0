"""Exact enumeration of the digit-value lattices V_n of a sumset family.

For rational u = p/q the level-n lattice is the multiset

    V_n = { sum_{k=0}^{n-1} (eps_k + u*eps'_k) b^k },   eps in alpha, eps' in beta,

and two digit choices land on the same point exactly when the integer keys

    key = q*A + p*B,   A = sum eps_k b^k,   B = sum eps'_k b^k

coincide.  Working with these canonical integer keys removes every
floating-point hazard from collision detection; a "multiple point" of V_n is
a duplicated key.

Enumeration is an iterated sumset over digit positions.  Each step convolves
the current (keys, counts) arrays with the level-1 contributions, then
canonically merges duplicates, so memory scales with the number of distinct
keys rather than with the full alphabet_size**n multiset.  Keys live in
int64 when a precomputed exact bound allows it and fall back to
arbitrary-precision Python ints (object dtype) otherwise, so results never
silently overflow.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .digits import BASE4, DigitSystem, Param, RationalParam, as_fraction, make_rational

_INT64_SAFE = 2**62


class ResourceCapError(RuntimeError):
    """Raised when a request exceeds a configured enumeration cap."""


@dataclass(frozen=True)
class EnumerationCaps:
    """Resource limits for lattice enumeration.

    materialize_max bounds levels where the full multiset (keys + counts +
    witnesses) is built; distinct_max bounds distinct-count-only scans.
    Caps are configuration, not constants: pass a custom instance to raise
    them on hardware that can take it.
    """

    materialize_max: int = 12
    distinct_max: int = 15
    raster_budget: int = 1 << 28

    def check(self, n: int, mode: str) -> None:
        limit = self.materialize_max if mode == "materialize" else self.distinct_max
        if n > limit:
            raise ResourceCapError(
                f"level n={n} exceeds the {mode} cap of {limit}; "
                f"pass EnumerationCaps({'materialize_max' if mode == 'materialize' else 'distinct_max'}"
                f"={n}) to override"
            )


DEFAULT_CAPS = EnumerationCaps()


def _coerce_rational(system: DigitSystem, u: Param) -> RationalParam:
    if isinstance(u, RationalParam):
        if u.base != system.base:
            u = make_rational(u.p, u.q, system.base)
        return u
    uf = as_fraction(u)
    return make_rational(uf.numerator, uf.denominator, system.base)


def pair_contributions(system: DigitSystem, u: Param) -> tuple[list[int], RationalParam]:
    """Level-1 key multiset [q*a + p*b for (a, b) in alpha x beta], beta-major order."""
    ur = _coerce_rational(system, u)
    contribs = [ur.q * a + ur.p * b for a in system.alpha_digits for b in system.beta_digits]
    return contribs, ur


def _key_dtype(contribs, base, n):
    bound = max(contribs) * (base**n - 1) // (base - 1)
    return np.int64 if bound < _INT64_SAFE else object


def _as_array(values, dtype):
    if dtype is object:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [int(v) for v in values]
        return arr
    return np.asarray(values, dtype=dtype)


def _merge_counted(values: np.ndarray, counts: np.ndarray):
    """Sort values and sum counts of duplicates; exact for int64 and object dtypes."""
    order = np.argsort(values, kind="stable")
    values = values[order]
    counts = counts[order]
    if len(values) == 0:
        return values, counts
    boundary = np.empty(len(values), dtype=bool)
    boundary[0] = True
    boundary[1:] = values[1:] != values[:-1]
    starts = np.flatnonzero(boundary)
    summed = np.add.reduceat(counts, starts)
    return values[boundary], summed


def counted_lattice_levels(contribs, base, n_max, caps=DEFAULT_CAPS):
    """Yield (n, keys, counts) for n = 1..n_max; keys sorted distinct, counts exact."""
    caps.check(n_max, "materialize")
    dtype = _key_dtype(contribs, base, n_max)
    m = len(contribs)
    count_dtype = np.int64 if m**n_max < _INT64_SAFE else object
    shifts = _as_array(sorted(contribs), dtype)
    keys = _as_array([0], dtype)
    counts = _as_array([1], count_dtype) if count_dtype is object else np.asarray([1], dtype=count_dtype)
    scale = 1
    for n in range(1, n_max + 1):
        shifted = keys[:, None] + _as_array([int(s) * scale for s in shifts], dtype)[None, :]
        new_counts = np.repeat(counts, m)
        keys, counts = _merge_counted(shifted.ravel(), new_counts)
        scale *= base
        yield n, keys, counts


def distinct_lattice_levels(contribs, base, n_max, caps=DEFAULT_CAPS):
    """Yield (n, keys) with keys sorted distinct; lighter than the counted walk."""
    caps.check(n_max, "distinct")
    dtype = _key_dtype(contribs, base, n_max)
    keys = _as_array([0], dtype)
    scale = 1
    distinct_shifts = sorted(set(contribs))
    for n in range(1, n_max + 1):
        shifted = keys[:, None] + _as_array([s * scale for s in distinct_shifts], dtype)[None, :]
        keys = np.unique(shifted.ravel())
        scale *= base
        yield n, keys


@dataclass
class VnMultiset:
    """Distinct keys of V_n with exact multiplicities."""

    level: int
    keys: np.ndarray
    counts: np.ndarray
    total: int

    @property
    def nu(self) -> int:
        return len(self.keys)

    @property
    def has_collision(self) -> bool:
        return self.nu < self.total

    def multiplicity_histogram(self) -> dict[int, int]:
        mult, freq = np.unique(self.counts, return_counts=True)
        return {int(m): int(f) for m, f in zip(mult, freq)}

    def duplicated_keys(self) -> list[int]:
        return [int(k) for k in self.keys[self.counts >= 2]]


def enumerate_vn(system: DigitSystem, u: Param, n: int, caps: EnumerationCaps = DEFAULT_CAPS) -> VnMultiset:
    """Full key multiset of V_n for rational u; total is alphabet_size**n exactly."""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    contribs, ur = pair_contributions(system, u)
    result = None
    for level, keys, counts in counted_lattice_levels(contribs, system.base, n, caps):
        if level == n:
            result = VnMultiset(n, keys, counts, system.alphabet_size**n)
    assert result is not None
    total_check = int(result.counts.sum())
    assert total_check == result.total, f"multiset total {total_check} != {result.total}"
    return result


def distinct_key_count(system: DigitSystem, u: Param, n: int, caps: EnumerationCaps = DEFAULT_CAPS) -> int:
    """nu_n alone, via the distinct-only walk (cheaper cap than materializing)."""
    contribs, _ = pair_contributions(system, u)
    nu = 0
    for _, keys in distinct_lattice_levels(contribs, system.base, n, caps):
        nu = len(keys)
    return nu


@dataclass(frozen=True)
class LatticePoint:
    """One digit choice: A from the alpha factor, B from the beta factor."""

    A: int
    B: int
    level: int

    def value(self, u: Fraction) -> Fraction:
        return self.A + Fraction(u) * self.B

    def key(self, p: int, q: int) -> int:
        return q * self.A + p * self.B


def _digit_ok(value: int, base: int, digits: tuple[int, ...]) -> bool:
    allowed = set(digits)
    while value:
        if value % base not in allowed:
            return False
        value //= base
    return True


def digit_pair_solutions(system: DigitSystem, ur: RationalParam, key: int, n: int, limit: int = 2):
    """Digit-choice pairs (A, B) at level n with q*A + p*B == key.

    Depth-first over digit positions, most significant first, pruning
    branches whose remaining contribution range cannot reach the target.
    Used to reconstruct collision witnesses without materializing points.
    """
    base = system.base
    pairs = [(a, b, ur.q * a + ur.p * b) for a in system.alpha_digits for b in system.beta_digits]
    max_contrib = max(c for _, _, c in pairs)
    # max_tail[k] = largest key mass positions 0..k-1 can still add
    max_tail = [0] * (n + 1)
    for k in range(1, n + 1):
        max_tail[k] = max_tail[k - 1] + max_contrib * base ** (k - 1)

    found = []

    def descend(pos, remaining, A, B):
        if len(found) >= limit:
            return
        if pos < 0:
            if remaining == 0:
                found.append(LatticePoint(A, B, n))
            return
        weight = base**pos
        for a, b, c in pairs:
            rest = remaining - c * weight
            if rest < 0 or rest > max_tail[pos]:
                continue
            descend(pos - 1, rest, A + a * weight, B + b * weight)

    descend(n - 1, key, 0, 0)
    return found


@dataclass
class CollisionReport:
    """Outcome of a first-collision scan over levels 1..scanned_max."""

    found: bool
    scanned_max: int
    u: RationalParam
    base: int
    first_level: int | None = None
    witness: tuple[LatticePoint, LatticePoint] | None = None
    nu: int | None = None
    multiplicity_histogram: dict[int, int] = field(default_factory=dict)

    def dim_upper_bound(self) -> float | None:
        if not self.found:
            return None
        return float(np.log(self.nu) / (self.first_level * np.log(self.base)))

    def to_json_dict(self) -> dict:
        out = {
            "u": str(self.u),
            "base": str(self.base),
            "found": self.found,
            "scanned_max": str(self.scanned_max),
        }
        if self.found:
            a, b = self.witness
            out["level"] = str(self.first_level)
            out["nu"] = str(self.nu)
            out["collisions"] = [
                {
                    "A": str(a.A),
                    "B": str(a.B),
                    "A2": str(b.A),
                    "B2": str(b.B),
                    "key": str(a.key(self.u.p, self.u.q)),
                }
            ]
            out["multiplicity_histogram"] = {
                str(k): str(v) for k, v in sorted(self.multiplicity_histogram.items())
            }
        return out


def first_collision(
    system: DigitSystem, u: Param, n_max: int, caps: EnumerationCaps = DEFAULT_CAPS
) -> CollisionReport:
    """Scan levels in increasing order for the first duplicated key.

    Collisions persist level to level (V_{n+1} contains a shifted copy of
    V_n), so the first level with nu < alphabet_size**n is the global first.
    found=False means inconclusive up to n_max, never a proof of simplicity.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    contribs, ur = pair_contributions(system, u)
    total = 1
    for n, keys, counts in counted_lattice_levels(contribs, system.base, n_max, caps):
        total *= system.alphabet_size
        nu = len(keys)
        if nu < total:
            dup = int(keys[np.flatnonzero(counts >= 2)[0]])
            witnesses = digit_pair_solutions(system, ur, dup, n, limit=2)
            assert len(witnesses) == 2, f"duplicated key {dup} must have >= 2 digit solutions"
            assert nu < total, "collision invariant"
            mult, freq = np.unique(counts, return_counts=True)
            hist = {int(m): int(f) for m, f in zip(mult, freq)}
            return CollisionReport(
                found=True,
                scanned_max=n,
                u=ur,
                base=system.base,
                first_level=n,
                witness=(witnesses[0], witnesses[1]),
                nu=nu,
                multiplicity_histogram=hist,
            )
    return CollisionReport(found=False, scanned_max=n_max, u=ur, base=system.base)


def _value_multiset_by_tuples(system: DigitSystem, u: Fraction, n: int, weights) -> Counter:
    """Brute-force value multiset over all digit tuples with given position weights."""
    level_values = [a + u * b for a in system.alpha_digits for b in system.beta_digits]
    out = Counter()
    for combo in product(level_values, repeat=n):
        out[sum(c * w for c, w in zip(combo, weights))] += 1
    return out


def vn_equivalent_forms(system: DigitSystem, u: Param, n: int) -> bool:
    """Self-check that three constructions of V_n agree as exact multisets.

    (1) iterated sumset D + b*D + ... + b^(n-1)*D of the level-1 value set,
    (2) direct tuples sum a_j b^(n-j), (3) direct tuples sum a_k b^k.
    Oracle scale: alphabet_size**n values held in memory as Fractions.
    """
    if n > 8:
        raise ValueError(f"equivalent-forms check is oracle-scale; n={n} > 8")
    uf = as_fraction(u)
    b = system.base
    level_values = [a + uf * bd for a in system.alpha_digits for bd in system.beta_digits]
    iterated = Counter({Fraction(0): 1})
    for k in range(n):
        nxt = Counter()
        for v, c in iterated.items():
            for d in level_values:
                nxt[v + d * b**k] += c
        iterated = nxt
    descending = _value_multiset_by_tuples(system, uf, n, [b ** (n - j) for j in range(1, n + 1)])
    ascending = _value_multiset_by_tuples(system, uf, n, [b**k for k in range(n)])
    return iterated == descending == ascending


def self_affine_step(system: DigitSystem, u: Param, n: int) -> bool:
    """Check V_{n+1} = V_n + b^n * V_1 as exact key multisets.

    The left side is enumerated directly from digit tuples, the right by
    convolving independently enumerated levels, so agreement exercises the
    self-affine scaling identity rather than the enumerator's own recursion.
    """
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    if n + 1 > 8:
        raise ValueError(f"self-affine check is oracle-scale; n+1={n + 1} > 8")
    contribs, ur = pair_contributions(system, u)
    b = system.base
    direct = Counter()
    for combo in product(contribs, repeat=n + 1):
        direct[sum(c * b**k for k, c in enumerate(combo))] += 1
    v_n = Counter()
    for combo in product(contribs, repeat=n):
        v_n[sum(c * b**k for k, c in enumerate(combo))] += 1
    convolved = Counter()
    for v, cv in v_n.items():
        for d in contribs:
            convolved[v + d * b**n] += cv
    return direct == convolved


def kenyon_first_collision(p: int, q: int, n_max: int, caps: EnumerationCaps = DEFAULT_CAPS):
    """First collision level of the base-3 lattice with digit keys {0, q, p}.

    This is the digit lattice of the projected sieve set with digits
    {0, 1, u}, u = p/q, scaled by q.  Returns (level, nu) or (None, nu_at_nmax).
    """
    from math import gcd

    g = gcd(p, q)
    p, q = p // g, q // g
    contribs = [0, q, p]
    total = 1
    nu = 1
    for n, keys in distinct_lattice_levels(contribs, 3, n_max, caps):
        total *= 3
        nu = len(keys)
        if nu < total:
            return n, nu
    return None, nu
