"""Arnol'd tongues of standard-like circle map families: certified tongue
boundaries, pinch-point enumeration and certification, conjugacies at exact
pinches, and root-separating perturbations, all in exact rational arithmetic
where the forcing is piecewise linear."""

from .numeric import (FactoredPolynomial, LemmaShapeError, Rational,
                      RationalInterval, rat, rat_str, rational_unit_root,
                      refine_root, unique_root, is_plausible_shape)
from .forcing import (AmbiguousReductionError, ConstantForcingError,
                      EmptyCellError, GeneralPLForcing, ReducedPLForcing,
                      SineForcing, discretize, normalize_standard_like,
                      parse_forcing, reduce_general_pl, shift_translate,
                      triangle_forcing, validate_reduced)
from .pl_engine import (BreakType, OrbitHitsBreakpointError, PLMap,
                        PieceBudgetError, pl_from_family)
from .circle_map import (FamilyPoint, UnresolvedError, Verdict,
                         mode_lock_test, rotation_estimate)
from .tongue_scan import (TongueRecord, left_boundary, pinch_candidates,
                          right_boundary, scan_tongues)
from .pinch import (Configuration, JOutOfRangeError, NotExactPinchError,
                    NotPinchError, PinchCertificate, PinchPoint, StepDensity,
                    build_conjugacy, certify_pinch, enumerate_pinches,
                    extract_configuration, find_exact_pinches,
                    induced_polynomials, invariant_density, itinerary_census,
                    k2_forcing, pinch_b, pinch_count, pinch_omega, pinch_poly,
                    rational_pinch_family, solve_periodic_omega, verify_pinch)
from .perturb import (BudgetExhaustedError, G_eval, IndexMultiset,
                      PlausibleSet, TooManySetsError, enumerate_plausible,
                      jacobian, perturb_length_ratio, separate_roots)

__version__ = "0.1.0"
