"""Command-line surface: classification, enumeration, covers, Fourier probes, rasters, sweeps.

Exact rationals are written "p/q" on the command line; a decimal value is
only accepted together with --irrational, because a bare float is an
ambiguous parameter (every float is rational).  Exit codes: 0 success,
1 usage error, 2 resource-cap error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .classify import (
    Branch,
    classify_base4,
    classify_kenyon,
    classify_mixed,
    classify_multidim,
    classify_square,
)
from .cover import box_dim_series
from .digits import BASE4, DigitSystem, Irrational, mixed_system, square_system
from .fourier import decay_scan, limsup_probe, mu_hat, mu_hat_at_pi_multiple
from .lattice import (
    DEFAULT_CAPS,
    EnumerationCaps,
    ResourceCapError,
    digit_pair_solutions,
    enumerate_vn,
    first_collision,
    pair_contributions,
)
from .raster import raster_b
from .selftest import run_selftest


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    """Parsed invocation: what to run and where to put the output."""

    command: str
    system: DigitSystem = field(default_factory=lambda: BASE4)
    u: Fraction | Irrational | None = None
    n: int | None = None
    n_max: int | None = None
    tolerance: float = 1e-9
    out: str | None = None
    threads: int = 1
    seed: int = 0
    caps: EnumerationCaps = field(default_factory=lambda: DEFAULT_CAPS)


def parse_u(text: str, irrational: bool):
    """Exact "p/q" or integer; decimals demand the --irrational flag."""
    text = text.strip()
    if irrational:
        try:
            val = float(text)
        except ValueError:
            raise UsageError(f"cannot read irrational parameter {text!r} as a float")
        if not val > 0:
            raise UsageError(f"parameter must be positive, got {text!r}")
        return Irrational(val)
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            p, q = int(num), int(den)
        except ValueError:
            raise UsageError(f"malformed rational {text!r}; expected p/q with integers")
        if p <= 0 or q <= 0:
            raise UsageError(f"parameter must be positive, got {text!r}")
        return Fraction(p, q)
    try:
        p = int(text)
    except ValueError:
        raise UsageError(
            f"ambiguous parameter {text!r}: write an exact rational as p/q, "
            "or pass --irrational to mean a float"
        )
    if p <= 0:
        raise UsageError(f"parameter must be positive, got {text!r}")
    return Fraction(p)


def parse_system(text: str) -> DigitSystem:
    parts = text.split(":")
    try:
        if parts[0] == "base4" and len(parts) == 1:
            return BASE4
        if parts[0] == "square" and len(parts) == 2:
            return square_system(int(parts[1]))
        if parts[0] == "mixed" and len(parts) == 3:
            return mixed_system(int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise UsageError(f"bad system {text!r}: {exc}")
    raise UsageError(f"unknown system {text!r}; expected base4, square:R, or mixed:R:S")


def _emit(cfg: RunConfig, payload: str | bytes):
    if cfg.out:
        mode = "wb" if isinstance(payload, bytes) else "w"
        with open(cfg.out, mode) as fh:
            fh.write(payload)
    else:
        if isinstance(payload, bytes):
            sys.stdout.buffer.write(payload)
        else:
            sys.stdout.write(payload)


def _frac_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def cmd_classify(cfg: RunConfig, family: str, witness_nmax: int) -> int:
    u = cfg.u
    if family == "base4":
        result = classify_base4(u, witness_nmax, cfg.caps)
    elif family.startswith("square"):
        result = classify_square(int(family.split(":")[1]), u, witness_nmax, cfg.caps)
    elif family.startswith("mixed"):
        _, r, s = family.split(":")
        result = classify_mixed(int(r), int(s), u, witness_nmax, cfg.caps)
    elif family.startswith("multidim"):
        result = classify_multidim(int(family.split(":")[1]), u, witness_nmax, cfg.caps)
    elif family == "kenyon":
        if isinstance(u, Irrational):
            raise UsageError("the digit-set family rule applies to rational u only")
        branch = classify_kenyon(u.numerator, u.denominator)
        _emit(cfg, json.dumps({"u": _frac_str(u), "branch": branch.value, "rule": "p+q mod 3"}, indent=2) + "\n")
        return 0
    else:
        raise UsageError(f"unknown family {family!r}")
    _emit(cfg, json.dumps(result.to_json_dict(), indent=2) + "\n")
    return 0


def cmd_vn(cfg: RunConfig, max_collisions: int) -> int:
    ms = enumerate_vn(cfg.system, cfg.u, cfg.n, cfg.caps)
    contribs, ur = pair_contributions(cfg.system, cfg.u)
    collisions = []
    for key in ms.duplicated_keys()[:max_collisions]:
        a, b = digit_pair_solutions(cfg.system, ur, key, cfg.n, limit=2)[:2]
        collisions.append(
            {"A": str(a.A), "B": str(a.B), "A2": str(b.A), "B2": str(b.B), "key": str(key)}
        )
    payload = {
        "u": str(ur),
        "base": str(cfg.system.base),
        "level": str(cfg.n),
        "nu": str(ms.nu),
        "collisions": collisions,
    }
    _emit(cfg, json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_collide(cfg: RunConfig) -> int:
    report = first_collision(cfg.system, cfg.u, cfg.n_max, cfg.caps)
    _emit(cfg, json.dumps(report.to_json_dict(), indent=2) + "\n")
    return 0


def cmd_cover(cfg: RunConfig) -> int:
    series = box_dim_series(cfg.system, cfg.u, cfg.n_max, cfg.caps)
    lines = ["n,nu_n,union_measure,union_measure_float,boxdim"]
    for est in series:
        exact = _frac_str(est.union_measure) if isinstance(est.union_measure, Fraction) else ""
        lines.append(
            f"{est.level},{est.distinct_count},{exact},{est.union_measure_float!r},{est.box_dim_estimate!r}"
        )
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_fourier(cfg: RunConfig, t: float | None, probe: str | None, bands: int | None, samples: int) -> int:
    lines = ["t,J,abs_value,tail_bound"]

    def row(ev):
        lines.append(f"{ev.t!r},{ev.truncation},{ev.abs_value!r},{ev.tail_bound!r}")

    if t is not None:
        row(mu_hat(cfg.system, cfg.u, t, cfg.tolerance))
    elif probe is not None:
        lo, _, hi = probe.partition(":")
        try:
            ns = range(int(lo), int(hi) + 1)
        except ValueError:
            raise UsageError(f"bad probe range {probe!r}; expected LO:HI")
        if isinstance(cfg.u, Irrational):
            raise UsageError("the probe sequence needs a rational u")
        for n in ns:
            mult = 2 * cfg.u.denominator * cfg.system.base**n
            row(mu_hat_at_pi_multiple(cfg.system, cfg.u, mult, cfg.tolerance))
    elif bands is not None:
        for sup in decay_scan(cfg.system, cfg.u, bands, samples, cfg.tolerance, cfg.seed):
            row(mu_hat(cfg.system, cfg.u, sup.t_at_max, cfg.tolerance))
    else:
        raise UsageError("fourier needs one of --t, --probe, or --bands")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_raster(cfg: RunConfig, resolution: int, depth: int | None, pgm_out: str | None) -> int:
    img = raster_b(cfg.system, resolution, depth, cfg.caps, cfg.threads)
    if pgm_out:
        with open(pgm_out, "wb") as fh:
            fh.write(img.to_pgm())
    _emit(cfg, f"resolution,depth,occupied_fraction\n{img.width},{img.depth},{img.occupied_fraction!r}\n")
    return 0


def _sweep_one(args):
    p, q, n_interval, n_singular = args
    cls = classify_base4(Fraction(p, q), witness_nmax=0)
    scan_to = n_singular if cls.branch is Branch.SINGULAR_THIN else n_interval
    report = first_collision(BASE4, Fraction(p, q), scan_to)
    coherent = report.found == (cls.branch is Branch.SINGULAR_THIN)
    n0 = report.first_level if report.found else ""
    nu = report.nu if report.found else ""
    return f"{p},{q},{cls.branch.value},{n0},{nu},{str(coherent).lower()}"


def cmd_sweep(cfg: RunConfig, p_max: int, q_max: int, collision_nmax: int) -> int:
    tasks = [
        (p, q, cfg.n_max, collision_nmax)
        for p in range(1, p_max + 1)
        for q in range(1, q_max + 1)
        if gcd(p, q) == 1
    ]
    lines = ["p,q,branch,n0,nu,coherent"]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            lines.extend(pool.map(_sweep_one, tasks, chunksize=16))
    else:
        lines.extend(_sweep_one(t) for t in tasks)
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="cantorsum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, with_u=True):
        sp.add_argument("--system", default="base4", help="base4 | square:R | mixed:R:S")
        if with_u:
            sp.add_argument("--u", required=True, help='exact rational "p/q" (or integer)')
            sp.add_argument("--irrational", action="store_true", help="treat --u as an irrational float")
        sp.add_argument("-o", "--out", default=None, help="output path (default stdout)")
        sp.add_argument("--materialize-cap", type=int, default=DEFAULT_CAPS.materialize_max)
        sp.add_argument("--distinct-cap", type=int, default=DEFAULT_CAPS.distinct_max)

    sp = sub.add_parser("classify", help="measure/dimension branch of E_u")
    common(sp)
    sp.add_argument("--family", default="base4", help="base4 | square:R | mixed:R:S | multidim:D | kenyon")
    sp.add_argument("--witness-nmax", type=int, default=10)

    sp = sub.add_parser("vn", help="level-n lattice multiset summary")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-collisions", type=int, default=16)

    sp = sub.add_parser("collide", help="first collision level scan")
    common(sp)
    sp.add_argument("--nmax", type=int, required=True)

    sp = sub.add_parser("cover", help="depth series of cover measures (CSV)")
    common(sp)
    sp.add_argument("--nmax", type=int, required=True)

    sp = sub.add_parser("fourier", help="evaluate |mu_hat| (CSV)")
    common(sp)
    sp.add_argument("--t", type=float, default=None)
    sp.add_argument("--probe", default=None, help="probe exponent range LO:HI")
    sp.add_argument("--bands", type=int, default=None)
    sp.add_argument("--samples", type=int, default=256)
    sp.add_argument("--tolerance", type=float, default=1e-9)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("raster", help="rasterize B (PGM + CSV)")
    common(sp, with_u=False)
    sp.add_argument("--resolution", type=int, default=256)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--pgm", default=None, help="write the image here")
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("sweep", help="dichotomy vs collision sweep over p/q (CSV)")
    common(sp, with_u=False)
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--qmax", type=int, required=True)
    sp.add_argument("--nmax", type=int, default=6, help="collision-free check depth for the interval branch")
    sp.add_argument("--collision-nmax", type=int, default=8)
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("selftest", help="run the built-in example checks")

    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "selftest":
        return 1 if run_selftest() else 0
    caps = EnumerationCaps(
        materialize_max=getattr(args, "materialize_cap", DEFAULT_CAPS.materialize_max),
        distinct_max=getattr(args, "distinct_cap", DEFAULT_CAPS.distinct_max),
    )
    cfg = RunConfig(
        command=args.command,
        system=parse_system(args.system),
        u=parse_u(args.u, getattr(args, "irrational", False)) if hasattr(args, "u") else None,
        n=getattr(args, "n", None),
        n_max=getattr(args, "nmax", None),
        tolerance=getattr(args, "tolerance", 1e-9),
        out=args.out,
        threads=getattr(args, "threads", 1),
        seed=getattr(args, "seed", 0),
        caps=caps,
    )
    if args.command == "classify":
        return cmd_classify(cfg, args.family, args.witness_nmax)
    if args.command == "vn":
        return cmd_vn(cfg, args.max_collisions)
    if args.command == "collide":
        return cmd_collide(cfg)
    if args.command == "cover":
        return cmd_cover(cfg)
    if args.command == "fourier":
        return cmd_fourier(cfg, args.t, args.probe, args.bands, args.samples)
    if args.command == "raster":
        return cmd_raster(cfg, args.resolution, args.depth, args.pgm)
    if args.command == "sweep":
        return cmd_sweep(cfg, args.pmax, args.qmax, args.collision_nmax)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    try:
        code = run(sys.argv[1:] if argv is None else argv)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
