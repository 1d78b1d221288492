"""Exact sampling of real-valued and path-valued random variables from fair bits.

Everything is driven by a :class:`BitStream` of fair coin flips and returns
outward-rounded dyadic enclosures:

* :func:`sample_real` draws from a distribution through its semi-inverse
  CDFs (uniform, Gaussian, Cantor, Dirac, tabulated);
* :func:`push_bits` realizes any measure on Cantor space given by cylinder
  weights;
* :func:`sample_path` produces Brownian grid paths with a certified Lévy
  modulus of continuity, and :func:`compute_c` recovers the modulus
  parameter from a path.
"""

__version__ = "0.1.0"

from .bitsource import BitStream, EntropyError, rho_b_enclosure, word
from .cantor_realizer import (
    CylinderWeights,
    Realizer,
    StallError,
    interval_partition,
    load_weights_json,
    push_bits,
)
from .dyadic import (
    DomainError,
    Dyadic,
    DyadicInterval,
    Ordering,
    UndecidedComparison,
    compare_strict,
    precision_ladder,
)
from .measures import (
    LazySample,
    PrecisionExhausted,
    RealSample,
    SemiInverseCDF,
    ValidationError,
    cdf_from_table,
    load_table_csv,
    make_cantor,
    make_dirac,
    make_gaussian,
    make_uniform,
    sample_real,
)
from .wiener import (
    CEstimate,
    LevyModulus,
    LevyTangentModulus,
    ModulusFamily,
    WienerPath,
    binary_moc,
    compute_c,
    default_cdist,
    family,
    levy_omega,
    sample_c,
    sample_path,
)

__all__ = [
    "BitStream", "EntropyError", "rho_b_enclosure", "word",
    "CylinderWeights", "Realizer", "StallError", "interval_partition", "load_weights_json",
    "push_bits",
    "DomainError", "Dyadic", "DyadicInterval", "Ordering", "UndecidedComparison",
    "compare_strict", "precision_ladder",
    "LazySample", "PrecisionExhausted", "RealSample", "SemiInverseCDF", "ValidationError",
    "cdf_from_table", "load_table_csv", "make_cantor", "make_dirac", "make_gaussian",
    "make_uniform", "sample_real",
    "CEstimate", "LevyModulus", "LevyTangentModulus", "ModulusFamily", "WienerPath",
    "binary_moc", "compute_c", "default_cdist", "family", "levy_omega", "sample_c",
    "sample_path",
]
