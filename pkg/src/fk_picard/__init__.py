"""Exact finite-field verification toolkit for split-Jacobian curve
families and torsion anti-isometry classification."""

__version__ = "0.1.0"

from .errors import (BudgetExceededError, FieldMismatchError,
                     InconsistentLedgerError, InputError,
                     PointNotOnCurveError, SingularCurveError)
from .field import (Field, FieldElement, PrimeModulus, build_extension,
                    is_prime, is_square, legendre_symbol, sqrt)
from .curves import (CurveModel, FactoredCubic, FiniteSubgroup, INFINITY,
                     Isomorphism, Legendre, Point, QuarticGenus1, ShortW,
                     base_change, count_points, group_law, isomorphisms,
                     j_invariant, minimal_torsion_field, negate, on_curve,
                     point_order, quadratic_twist, scalar_mul,
                     subgroups_of_order, torsion_basis, velu_isogeny)
from .pairing import (AntiIsometry, TorsionBasis, apply_anti_isometry,
                      basis_over, coords_in_basis, is_anti_isometry,
                      make_anti_isometry, make_torsion_basis,
                      normalize_bases, weil_pairing)
