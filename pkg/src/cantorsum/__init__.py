"""Exact-arithmetic toolkit for Cantor sumsets E + u*E' and the Besicovitch set built on them."""

from .classify import (
    Branch,
    Classification,
    KenyonBranch,
    SectionParam,
    classify_base4,
    classify_kenyon,
    classify_mixed,
    classify_multidim,
    classify_square,
    section_invariance,
    section_to_u,
    u_to_section,
)
from .cover import (
    CoverEstimate,
    ProgressionWitness,
    box_dim_series,
    cover_at_depth,
    dim_upper_bound_from_collision,
    progression_scan,
)
from .digits import (
    BASE4,
    DigitSystem,
    Irrational,
    RationalParam,
    base4_model,
    hull,
    is_prime,
    make_rational,
    mixed_system,
    normalize_parameter,
    square_system,
    star,
)
from .fourier import (
    BandSupremum,
    FourierEvaluation,
    LimsupProbe,
    decay_scan,
    limsup_probe,
    mu_hat,
    mu_hat_at_pi_multiple,
)
from .lattice import (
    CollisionReport,
    EnumerationCaps,
    LatticePoint,
    ResourceCapError,
    VnMultiset,
    enumerate_vn,
    first_collision,
    kenyon_first_collision,
    self_affine_step,
    vn_equivalent_forms,
)
from .raster import (
    DirectionRange,
    RasterImage,
    SectionLine,
    direction_range,
    monte_carlo_direction_extremes,
    raster_b,
    section_cover,
)

__version__ = "0.1.0"
