"""The planar segment union B, its horizontal sections, and rasterization.

B is the union of the segments joining the base Cantor set E (on y = 0) to
its scaled copy E' = c*E_beta + i (on y = 1).  The section at height h is

    B_h = (1-h) E_u + i h,    u = c h / (1-h),

so every pixel row of a raster is an exactly computable interval cover: the
image is built row by row from section covers, never by sampling segments.
Cover depth is tied to the resolution (b^-depth <= 1/width) so each cover
interval spans at most about one pixel and the occupied fraction is a
certified upper bound on the area at that resolution.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cover import cover_at_depth
from .digits import BASE4, DigitSystem, hull
from .lattice import DEFAULT_CAPS, EnumerationCaps, ResourceCapError, distinct_lattice_levels


@dataclass(frozen=True)
class DirectionRange:
    """Exact horizontal-displacement interval of the segments, plus slope bounds.

    Every segment has height 1; lo/hi bound Re(z' - z) and the slopes of the
    extreme segments are 1/lo and 1/hi (a displacement of 0 is vertical).
    """

    lo: Fraction
    hi: Fraction
    slope_negative: Fraction
    slope_positive: Fraction


def direction_range(system: DigitSystem = BASE4) -> DirectionRange:
    """Horizontal displacements Re(z' - z) over z in E, z' in E'.

    The displacement sum telescopes digitwise, so the extremes come from the
    extreme digits: [-max_alpha, c*max_beta] / (base - 1).
    """
    b = system.base
    c = system.section_multiplier
    lo = Fraction(-system.max_alpha, b - 1)
    hi = Fraction(c * system.max_beta, b - 1)
    return DirectionRange(lo, hi, 1 / lo, 1 / hi)


def monte_carlo_direction_extremes(
    system: DigitSystem = BASE4, samples: int = 100_000, depth: int = 24, seed: int = 7
) -> tuple[float, float]:
    """Sampled min/max of Re(z' - z) over random digit sequences."""
    rng = np.random.default_rng(seed)
    alpha = np.asarray(system.alpha_digits, dtype=np.float64)
    beta = np.asarray(system.beta_digits, dtype=np.float64)
    c = system.section_multiplier
    weights = float(system.base) ** -np.arange(1, depth + 1)
    a_draw = alpha[rng.integers(0, len(alpha), size=(samples, depth))]
    b_draw = beta[rng.integers(0, len(beta), size=(samples, depth))]
    dx = (c * b_draw - a_draw) @ weights
    return float(dx.min()), float(dx.max())


@dataclass
class SectionLine:
    """Depth-n interval cover of the section B_h."""

    h: Fraction
    u: Fraction | None
    depth: int
    intervals: list[tuple[Fraction, Fraction]]

    @property
    def union_measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))


def _factor_cover(digits, base, scale, depth, caps):
    """Merged cover of scale * { digit expansions }, exact endpoints."""
    keys = None
    for _, ks in distinct_lattice_levels(list(digits), base, depth, caps):
        keys = ks
    width = digits[-1]  # max digit; hull height is width/(base-1)
    denom = (base - 1) * base**depth
    merged = []
    lo = hi = None
    for k in keys:
        a = (base - 1) * int(k)
        bnd = a + width
        if hi is not None and a <= hi:
            hi = max(hi, bnd)
        else:
            if hi is not None:
                merged.append((lo, hi))
            lo, hi = a, bnd
    merged.append((lo, hi))
    return [(scale * Fraction(a, denom), scale * Fraction(b_, denom)) for a, b_ in merged]


def section_cover(
    h, depth: int, system: DigitSystem = BASE4, caps: EnumerationCaps = DEFAULT_CAPS
) -> SectionLine:
    """Exact depth-n cover of B_h; endpoints h = 0, 1 give E and E' themselves."""
    hf = Fraction(h)
    if not 0 <= hf <= 1:
        raise ValueError(f"section height must lie in [0,1], got {hf}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if hf == 0:
        return SectionLine(hf, None, depth, _factor_cover(system.alpha_digits, system.base, Fraction(1), depth, caps))
    if hf == 1:
        c = system.section_multiplier
        return SectionLine(hf, None, depth, _factor_cover(system.beta_digits, system.base, Fraction(c), depth, caps))
    u = system.section_multiplier * hf / (1 - hf)
    est = cover_at_depth(system, u, depth, keep_intervals=True, caps=caps)
    scale = 1 - hf
    return SectionLine(hf, u, depth, [(scale * lo, scale * hi) for lo, hi in est.intervals])


@dataclass
class RasterImage:
    """Occupancy bitmap of B; row index 0 is the h = 0 section."""

    width: int
    height: int
    depth: int
    occupied: np.ndarray

    @property
    def occupied_fraction(self) -> float:
        return float(self.occupied.sum()) / (self.width * self.height)

    def to_pgm(self) -> bytes:
        """Binary 8-bit PGM, white = occupied, top row = h = 1."""
        header = f"P5\n{self.width} {self.height}\n255\n".encode()
        img = np.where(self.occupied[::-1], np.uint8(255), np.uint8(0))
        return header + img.tobytes()


def _row_config(system: DigitSystem, resolution: int, depth: int):
    xmax = max(
        Fraction(system.max_alpha, system.base - 1),
        Fraction(system.section_multiplier * system.max_beta, system.base - 1),
    )
    return (
        resolution,
        depth,
        system.base,
        tuple(system.alpha_digits),
        tuple(system.beta_digits),
        system.section_multiplier,
        xmax.numerator,
        xmax.denominator,
    )


def _mark_cols(row, positions, width, num, den, n_cols):
    """Mark pixel columns hit by intervals [num*pos/den, num*(pos+width)/den]."""
    if len(positions) == 0:
        return
    if positions.dtype == np.int64 and (int(positions[-1]) + width) * num < 2**62:
        lo_cols = (positions * num) // den
        hi_cols = ((positions + width) * num) // den
    else:
        lo_cols = np.array([int(p) * num // den for p in positions], dtype=np.int64)
        hi_cols = np.array([(int(p) + width) * num // den for p in positions], dtype=np.int64)
    lo_cols = np.clip(lo_cols, 0, n_cols - 1)
    hi_cols = np.clip(hi_cols, 0, n_cols - 1)
    span = int((hi_cols - lo_cols).max())
    if span <= 8:
        for off in range(span + 1):
            row[np.minimum(lo_cols + off, hi_cols)] = True
    else:
        for a, b_ in zip(lo_cols.tolist(), hi_cols.tolist()):
            row[a : b_ + 1] = True


def _render_row(cfg, i) -> np.ndarray:
    resolution, depth, base, alpha, beta, c, xn, xd = cfg
    row = np.zeros(resolution, dtype=bool)
    hden = resolution - 1
    caps = EnumerationCaps(materialize_max=depth, distinct_max=depth)
    if i == 0:
        contribs = list(alpha)
        width = alpha[-1]
        q = 1
        sn, sd = 1, 1
    elif i == hden:
        contribs = [c * d for d in beta]
        width = c * beta[-1]
        q = 1
        sn, sd = 1, 1
    else:
        u = Fraction(c * i, hden - i)
        p, q = u.numerator, u.denominator
        contribs = [q * a + p * b_ for a in alpha for b_ in beta]
        width = q * alpha[-1] + p * beta[-1]
        s = Fraction(hden - i, hden)  # 1 - h
        sn, sd = s.numerator, s.denominator
    keys = None
    for _, ks in distinct_lattice_levels(contribs, base, depth, caps):
        keys = ks
    if keys.dtype == np.int64 and (base - 1) * int(keys[-1]) >= 2**62:
        keys = keys.astype(object)
    positions = keys * (base - 1)
    # x = sn*pos / (sd * q*(base-1)*base^depth); col = floor(x * resolution * xd / xn)
    num = sn * resolution * xd
    den = sd * q * (base - 1) * base**depth * xn
    _mark_cols(row, positions, width, num, den, resolution)
    return row


def raster_b(
    system: DigitSystem = BASE4,
    resolution: int = 256,
    depth: int | None = None,
    caps: EnumerationCaps = DEFAULT_CAPS,
    threads: int = 1,
) -> RasterImage:
    """Rasterize B row by row via its section covers.

    depth defaults to the smallest d with base**d >= resolution, making each
    cover interval at most about one pixel wide.  Resource use grows like
    resolution * alphabet_size**depth and is guarded by caps.raster_budget.
    """
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16, got {resolution}")
    if depth is None:
        depth = 1
        while system.base**depth < resolution:
            depth += 1
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    cost = resolution * system.alphabet_size**depth
    if cost > caps.raster_budget:
        raise ResourceCapError(
            f"raster cost resolution*alphabet^depth = {cost} exceeds budget {caps.raster_budget}; "
            "lower the resolution/depth or raise EnumerationCaps.raster_budget"
        )
    cfg = _row_config(system, resolution, depth)
    occupied = np.zeros((resolution, resolution), dtype=bool)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = pool.map(_render_row_star, [(cfg, i) for i in range(resolution)], chunksize=32)
            for i, row in enumerate(rows):
                occupied[i] = row
    else:
        for i in range(resolution):
            occupied[i] = _render_row(cfg, i)
    return RasterImage(resolution, resolution, depth, occupied)


def _render_row_star(args):
    return _render_row(*args)
