"""Built-in example checks runnable as `cantorsum selftest`.

Each check is a small worked example with an independently known answer
(hand-computed digit expansions, brute-force enumerations, closed-form
measures).  The CLI runs them all and prints one ok/FAIL line per check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, isclose, log

from . import classify, cover, digits, fourier, lattice, raster

F = Fraction
LOG34 = log(3) / log(4)


def _assert(cond, msg=""):
    if not cond:
        raise AssertionError(msg)


def check_star_single_digit():
    _assert(digits.star(1, 4) == (0, 1))


def check_star_shifted_digit():
    _assert(digits.star(8, 4) == (1, 2))  # 8 = "20" in base 4


def check_star_double_shift():
    _assert(digits.star(48, 4) == (2, 3))  # 48 = "300" in base 4


def check_rational_reduction():
    r = digits.make_rational(2, 4, 4)
    _assert((r.p, r.q, r.p_star, r.q_star) == (1, 2, 1, 2), r)


def check_rational_both_odd():
    r = digits.make_rational(1, 3, 4)
    _assert((r.p_star, r.q_star) == (1, 3), r)


def check_rational_sum_odd():
    r = digits.make_rational(2, 3, 4)
    _assert((r.p_star, r.q_star) == (2, 3), r)


def check_hull_u1():
    _assert(digits.hull(digits.BASE4, 1) == (0, F(2, 3)))


def check_hull_u2():
    _assert(digits.hull(digits.BASE4, 2) == (0, 1))


def check_hull_square3():
    _assert(digits.hull(digits.square_system(3), 1) == (0, F(1, 2)))


def check_level1_keys_u1():
    ms = lattice.enumerate_vn(digits.BASE4, 1, 1)
    _assert(ms.nu == 3 and list(ms.keys) == [0, 1, 2] and list(ms.counts) == [1, 2, 1])


def check_level1_keys_u2():
    ms = lattice.enumerate_vn(digits.BASE4, 2, 1)
    _assert(ms.nu == 4 and list(ms.keys) == [0, 1, 2, 3])


def check_level2_collisions_u_third():
    ms = lattice.enumerate_vn(digits.BASE4, F(1, 3), 2)
    _assert(ms.nu == 14 and ms.duplicated_keys() == [4, 16], (ms.nu, ms.duplicated_keys()))


def check_first_collision_u1():
    rep = lattice.first_collision(digits.BASE4, 1, 4)
    _assert(rep.found and rep.first_level == 1 and rep.nu == 3)


def check_first_collision_u_third():
    rep = lattice.first_collision(digits.BASE4, F(1, 3), 6)
    _assert(rep.found and rep.first_level == 2 and rep.nu == 14)
    a, b = rep.witness
    _assert((a.A, a.B) != (b.A, b.B) and 3 * a.A + a.B == 3 * b.A + b.B)


def check_no_collision_u_two_thirds():
    rep = lattice.first_collision(digits.BASE4, F(2, 3), 6)
    _assert(not rep.found and rep.scanned_max == 6)


def check_equivalent_forms():
    _assert(lattice.vn_equivalent_forms(digits.BASE4, 1, 2))
    _assert(lattice.vn_equivalent_forms(digits.BASE4, F(1, 3), 3))
    _assert(lattice.vn_equivalent_forms(digits.mixed_system(2, 3), F(1, 5), 2))


def check_self_affine_step():
    _assert(lattice.self_affine_step(digits.BASE4, 1, 1))
    _assert(lattice.self_affine_step(digits.BASE4, F(1, 3), 2))
    _assert(lattice.self_affine_step(digits.square_system(3), F(1, 2), 1))


def check_classify_interval_u2():
    _assert(classify.classify_base4(2).branch is classify.Branch.INTERVAL)


def check_classify_singular_u1():
    c = classify.classify_base4(1)
    _assert(c.branch is classify.Branch.SINGULAR_THIN)
    _assert(isclose(c.witnesses.dim_upper_bound, LOG34, rel_tol=0, abs_tol=1e-12))


def check_classify_interval_u_half():
    _assert(classify.classify_base4(F(1, 2)).branch is classify.Branch.INTERVAL)


def check_square3_branches():
    _assert(classify.classify_square(3, F(1, 3)).branch is classify.Branch.INTERVAL)
    _assert(classify.classify_square(3, 1).branch is classify.Branch.SINGULAR_THIN)


def check_square2_matches_base4():
    for p in range(1, 51):
        for q in range(1, 51):
            if gcd(p, q) != 1:
                continue
            u = F(p, q)
            b4 = classify.classify_base4(u, witness_nmax=0).branch
            sq = classify.classify_square(2, u, witness_nmax=0).branch
            _assert(b4 == sq, f"u={u}: {b4} vs {sq}")


def check_mixed_branches():
    _assert(classify.classify_mixed(2, 3, F(1, 2)).branch is classify.Branch.SINGULAR_THIN)
    _assert(classify.classify_mixed(2, 3, 2).branch is classify.Branch.INTERVAL)
    irr = classify.classify_mixed(2, 3, digits.Irrational(math.sqrt(2)))
    _assert(irr.branch is classify.Branch.IRRATIONAL)


def check_kenyon_rule():
    _assert(classify.classify_kenyon(1, 2) is classify.KenyonBranch.POSITIVE_MEASURE)
    _assert(classify.classify_kenyon(1, 1) is classify.KenyonBranch.THIN_DIMENSION)
    _assert(classify.classify_kenyon(2, 7) is classify.KenyonBranch.POSITIVE_MEASURE)


def check_multidim_delegation():
    c2 = classify.classify_multidim(2, 1)
    _assert(c2.branch is classify.Branch.SINGULAR_THIN)
    _assert(isclose(c2.witnesses.dim_upper_bound, 2 * LOG34, abs_tol=1e-12))
    _assert(classify.classify_multidim(3, 2).branch is classify.Branch.INTERVAL)
    irr = classify.classify_multidim(2, digits.Irrational(math.e))
    _assert(irr.branch is classify.Branch.IRRATIONAL)


def check_section_maps():
    _assert(classify.section_to_u(F(1, 3)).u == 1)
    _assert(classify.u_to_section(2).h == F(1, 2))
    import random

    rng = random.Random(20240811)
    for _ in range(1000):
        q = rng.randrange(2, 1000)
        p = rng.randrange(1, q)
        h = F(p, q)
        _assert(classify.u_to_section(classify.section_to_u(h).u).h == h)


def check_section_invariance_sweep():
    for q in range(2, 41):
        for p in range(1, q):
            if gcd(p, q) == 1:
                _assert(classify.section_invariance(F(p, q)), f"h={p}/{q}")


def check_cover_exact_measures():
    _assert(cover.cover_at_depth(digits.BASE4, 2, 6).union_measure == 1)
    _assert(cover.cover_at_depth(digits.BASE4, F(1, 2), 6).union_measure == F(1, 2))
    _assert(cover.cover_at_depth(digits.BASE4, 1, 6).union_measure == F(3, 4) ** 6 * F(2, 3))


def check_dim_bound_values():
    _assert(isclose(cover.dim_upper_bound_from_collision(1, 3, 4), LOG34, abs_tol=1e-12))
    _assert(isclose(cover.dim_upper_bound_from_collision(2, 14, 4), log(14) / (2 * log(4)), abs_tol=1e-12))
    try:
        cover.dim_upper_bound_from_collision(1, 4, 4)
    except ValueError:
        pass
    else:
        raise AssertionError("nu = base**n0 must be rejected")


def check_box_dim_series():
    for est in cover.box_dim_series(digits.BASE4, 1, 8):
        _assert(isclose(est.box_dim_estimate, LOG34, abs_tol=1e-12), est)
        _assert(est.distinct_count == 3**est.level)
    for est in cover.box_dim_series(digits.BASE4, 2, 8):
        _assert(est.box_dim_estimate == 1.0 and est.union_measure == 1)
    series = cover.box_dim_series(digits.BASE4, digits.Irrational(math.sqrt(2)), 10)
    measures = [e.union_measure for e in series[1:]]
    _assert(all(b < a for a, b in zip(measures, measures[1:])), measures)


def check_progression_scan():
    w = cover.progression_scan(digits.BASE4, 2, 5)
    _assert(w is not None and w.alpha == 1 and w.offsets == (0,), w)
    try:
        cover.progression_scan(digits.BASE4, 1, 5)
    except ValueError:
        pass
    else:
        raise AssertionError("singular branch must be rejected")
    w23 = cover.progression_scan(digits.BASE4, F(2, 3), 5)
    _assert(w23 is not None and w23.alpha > 0, w23)


def check_mu_hat_at_zero():
    ev = fourier.mu_hat(digits.BASE4, 1, 0.0)
    _assert(ev.value == 1 and ev.tail_bound == 0.0)


def check_mu_hat_probe_constancy():
    a = fourier.mu_hat(digits.BASE4, 1, 2 * 4**3 * math.pi, tolerance=1e-10)
    b = fourier.mu_hat(digits.BASE4, 1, 2 * 4**4 * math.pi, tolerance=1e-10)
    _assert(a.truncation >= 20 and abs(a.abs_value - b.abs_value) < 1e-9, (a, b))


def check_mu_hat_vanishing_u2():
    for n in range(2, 5):
        ev = fourier.mu_hat_at_pi_multiple(digits.BASE4, 2, 2 * 4**n)
        _assert(ev.abs_value == 0.0, ev)


def check_limsup_probes():
    pr = fourier.limsup_probe(F(1, 3), range(2, 7))
    _assert(pr.bounded_away_from_zero)
    _assert(max(pr.values) - min(pr.values) < 2e-9, pr.values)
    pr1 = fourier.limsup_probe(1, range(2, 7))
    _assert(pr1.bounded_away_from_zero and max(pr1.values) - min(pr1.values) < 2e-9)
    pr2 = fourier.limsup_probe(2, range(2, 7))
    _assert(max(pr2.values) < 1e-9, pr2.values)


def check_decay_bands():
    bands = fourier.decay_scan(digits.BASE4, 2, 5, samples_per_band=128)
    sups = [b.sup_abs for b in bands]
    _assert(all(b < a for a, b in zip(sups, sups[1:])), sups)
    bands1 = fourier.decay_scan(digits.BASE4, 1, 5, samples_per_band=128)
    _assert(min(b.sup_abs for b in bands1) > 0.4, bands1)


def check_direction_ranges():
    dr = raster.direction_range(digits.BASE4)
    _assert((dr.lo, dr.hi) == (F(-1, 3), F(2, 3)))
    _assert((dr.slope_negative, dr.slope_positive) == (-3, F(3, 2)))
    dr9 = raster.direction_range(digits.square_system(3))
    _assert((dr9.lo, dr9.hi) == (F(-1, 4), F(3, 4)))
    lo, hi = raster.monte_carlo_direction_extremes(digits.BASE4, samples=1_000_000)
    _assert(float(dr.lo) <= lo < float(dr.lo) + 1e-3, lo)
    _assert(float(dr.hi) - 1e-3 < hi <= float(dr.hi), hi)


def check_section_cover_endpoints():
    s0 = raster.section_cover(0, 3)
    _assert(len(s0.intervals) == 8)
    _assert(all(hi - lo == F(1, 3) * F(1, 64) for lo, hi in s0.intervals))
    s_half = raster.section_cover(F(1, 2), 6)
    _assert(s_half.union_measure == F(1, 2) and s_half.intervals[0][0] == 0)
    s_third = raster.section_cover(F(1, 3), 6)
    expect = F(2, 3) * cover.cover_at_depth(digits.BASE4, 1, 6).union_measure
    _assert(s_third.union_measure == expect)


def check_raster_fraction_decreases():
    f512 = raster.raster_b(resolution=512).occupied_fraction
    f1024 = raster.raster_b(resolution=1024).occupied_fraction
    _assert(f1024 < f512, (f512, f1024))


def check_raster_middle_row():
    img = raster.raster_b(resolution=257)
    row = img.occupied[128]
    filled = int((F(1, 2) / F(2, 3)) * 257)
    _assert(row[: filled + 1].all(), "row h=1/2 must cover [0, 1/2]")


def check_raster_resolution_floor():
    try:
        raster.raster_b(resolution=8)
    except ValueError:
        pass
    else:
        raise AssertionError("resolution 8 must be rejected")


CHECKS = [(name[len("check_"):].replace("_", " "), fn) for name, fn in sorted(globals().items()) if name.startswith("check_")]


def run_selftest(out=print) -> int:
    """Run every check; returns the number of failures."""
    failures = 0
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:
            failures += 1
            out(f"FAIL  {name}: {exc!r}")
        else:
            out(f"ok    {name}")
    out(f"{len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    return failures
