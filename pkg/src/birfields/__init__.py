"""Exact symbolic toolkit for birational integrability of rational vector
fields on rational surfaces, with Lie-algebra classification machinery."""

from .bipoly import BiPoly, BiRat, normalize
from .catalog import builtin_catalog
from .errors import *  # noqa: F401,F403
from .fields import (BirationalMap, Divisor, VectorField, first_integral_check,
                     lie_bracket, membership, polar_divisor,
                     polar_tangency_check, pullback, pushforward,
                     wedge_collinear)
from .integrability import (IntegrabilityReport, VerticalQuadratic,
                            adapt_to_fibration, extract_quadratic,
                            integrability_test, product_flow, vertical_flow)
from .lie import (AlgebraPresentation, KillingReport, TwoDimLabel,
                  TwoDimResult, classify_2dim, derived_series, killing_report,
                  structure_constants, verify_sl2_triple)
from .linsolve import coeff_match_solve
from .normal_forms import (ClassificationResult, NormalFormLabel, classify_p2,
                           hgamma_relate, normal_form_field,
                           normalize_in_borel, phi_inv, phi_iso,
                           reduce_to_TLJH)
from .parse import parse_expr, parse_field, parse_map, print_field, print_map
from .scalars import FieldContext, PLAIN_CONTEXT, Scalar, extend_by_sqrt
from .sl2 import Sl2Verdict, sl2_complete
from .surfaces import F0, P2, SurfaceModel
from .symflow import FlowExpr, SymExpr
from .unipoly import UniPoly, UniRat

__version__ = "0.1.0"
