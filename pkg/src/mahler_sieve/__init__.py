"""Exact experiments on the fractional parts of x(3/2)^n for integer x."""
from .census import CensusReport, SurvivalRecord, census, predicted_depth, survival_depth, two_adic_valuation
from .errors import CertificationError, HorizonExceeded, ResourceError
from .orbit import ActionKind, FracPart, action, frac_part, orbit_diameter, orbit_prefix, pow3_mod_pow2
from .refine import IntervalSet, measure, refine
from .sieve import (
    ResidueSet,
    class_invariance_check,
    compute_Xn,
    compute_Yn,
    density,
    intersect_prefix,
    lift,
    membership,
    read_cache,
    write_cache,
)
from .tijdeman import BetaParam, TijdemanRun, construct, verify_run

__version__ = "0.1.0"
