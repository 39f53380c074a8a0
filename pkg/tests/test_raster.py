"""Direction geometry, section covers, and the raster of B."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorsum.cover import cover_at_depth
from cantorsum.digits import BASE4, mixed_system, square_system
from cantorsum.lattice import ResourceCapError
from cantorsum.raster import (
    direction_range,
    monte_carlo_direction_extremes,
    raster_b,
    section_cover,
)

F = Fraction


def test_direction_range_base4():
    dr = direction_range(BASE4)
    assert (dr.lo, dr.hi) == (F(-1, 3), F(2, 3))
    assert (dr.slope_negative, dr.slope_positive) == (F(-3), F(3, 2))


def test_direction_range_square3():
    dr = direction_range(square_system(3))
    assert (dr.lo, dr.hi) == (F(-1, 4), F(3, 4))


def test_direction_range_mixed():
    dr = direction_range(mixed_system(2, 3))
    # E^2 against 2*E^3 + i in base 6: [-1/5, 2*2/5]
    assert (dr.lo, dr.hi) == (F(-1, 5), F(4, 5))


def test_monte_carlo_extremes_inside_and_tight():
    dr = direction_range(BASE4)
    lo, hi = monte_carlo_direction_extremes(BASE4, samples=1_000_000)
    assert float(dr.lo) <= lo <= float(dr.lo) + 1e-3
    assert float(dr.hi) - 1e-3 <= hi <= float(dr.hi)


@given(
    st.lists(st.integers(0, 1), min_size=1, max_size=10),
    st.lists(st.integers(0, 1), min_size=1, max_size=10),
)
@settings(max_examples=100)
def test_sampled_segments_stay_in_exact_range(eps, epsp):
    # finite digit choices give exact displacements inside the exact interval
    dr = direction_range(BASE4)
    z = sum(F(d, 4 ** (j + 1)) for j, d in enumerate(eps))
    zp = sum(F(2 * d, 4 ** (j + 1)) for j, d in enumerate(epsp))
    assert dr.lo <= zp - z <= dr.hi


def test_section_cover_h0_is_cantor_cover():
    line = section_cover(0, 3)
    assert line.u is None
    assert len(line.intervals) == 8
    assert all(hi - lo == F(1, 3 * 64) for lo, hi in line.intervals)
    # oracle: intervals from the 8 depth-3 digit prefixes of E
    starts = sorted(
        sum(F(d, 4 ** (j + 1)) for j, d in enumerate(eps)) for eps in product((0, 1), repeat=3)
    )
    assert [lo for lo, _ in line.intervals] == starts


def test_section_cover_h1_is_scaled_copy():
    line = section_cover(1, 3)
    base = section_cover(0, 3)
    assert [(2 * lo, 2 * hi) for lo, hi in base.intervals] == line.intervals


def test_section_cover_interior_examples():
    line = section_cover(F(1, 2), 6)
    assert line.u == 2
    assert line.intervals == [(F(0), F(1, 2))]
    line = section_cover(F(1, 3), 6)
    assert line.u == 1
    expected = F(2, 3) * cover_at_depth(BASE4, 1, 6).union_measure
    assert line.union_measure == expected


def test_section_cover_validation():
    with pytest.raises(ValueError):
        section_cover(F(3, 2), 3)
    with pytest.raises(ValueError):
        section_cover(F(1, 2), 0)


def test_raster_validation():
    with pytest.raises(ValueError):
        raster_b(resolution=8)
    with pytest.raises(ResourceCapError):
        raster_b(resolution=4096, depth=12)


def test_raster_depth_rule():
    assert raster_b(resolution=256).depth == 4
    assert raster_b(resolution=64).depth == 3


def test_raster_fraction_decreases_with_resolution():
    fractions = [raster_b(resolution=r).occupied_fraction for r in (64, 128, 256)]
    assert fractions[2] < fractions[1] < fractions[0]


def test_raster_middle_row_is_full_interval():
    img = raster_b(resolution=257)
    row = img.occupied[128]  # h = 1/2, section [0, 1/2] of x-extent [0, 2/3]
    boundary = int(F(1, 2) / F(2, 3) * 257)
    assert row[:boundary].all()
    assert not row[boundary + 2 :].any()


def test_raster_bottom_row_is_cantor_like():
    img = raster_b(resolution=256)
    row = img.occupied[0]
    # E fills [0, 1/3] of the x-extent [0, 2/3] only fractally: half the
    # columns of the left half, none of the right half
    assert not row[200:].any()
    assert 0 < int(row.sum()) < 128


def test_raster_deterministic_across_threads():
    a = raster_b(resolution=64, threads=1)
    b = raster_b(resolution=64, threads=2)
    assert np.array_equal(a.occupied, b.occupied)


def test_pgm_format():
    img = raster_b(resolution=64)
    pgm = img.to_pgm()
    header = b"P5\n64 64\n255\n"
    assert pgm.startswith(header)
    assert len(pgm) == len(header) + 64 * 64
    payload = np.frombuffer(pgm[len(header) :], dtype=np.uint8).reshape(64, 64)
    assert set(np.unique(payload)) <= {0, 255}
    # top image row is the h = 1 section (E'), bottom is E
    assert np.array_equal(payload[0] == 255, img.occupied[-1])
    assert np.array_equal(payload[-1] == 255, img.occupied[0])
