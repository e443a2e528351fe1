"""Drinfeld modules over F_q(t): torsion, Tate uniformization, ramification breaks and their bounds."""

from .bounds import (
    BoundReport,
    CertificationProfile,
    certify,
    cprime,
    gardeyn_different_bound,
    mythm_break_bound,
    mythm_e_bound,
    obvious_e_bound,
    prop1_break_bound,
    prop2_leading_bound,
    tame_basechange_break_bound,
)
from .drinfeld import DrinfeldModule, ReductionData, TorsionPolynomial, phi_of, stable_model, torsion_poly, torsion_valuation_bounds
from .errors import DKFError, InconsistencyError, IrrationalRepresentativeError, ParseError, PrecisionError, ResourceLimitError
from .fields import FiniteField, fq_context, fq_from_order, prime_field
from .lattice import AmbientLattice, NormValue, SuccessiveMinima, covolume, gardeyn_norm, is_smb, last_minimum_bound, reduce_basis, successive_minima
from .local import LocalElem, NewtonPolygon, complete, local_eval_additive, newton_polygon, roots_in_completion, valuation
from .ore import OrePoly
from .parsing import parse_field_element, parse_fq_header, parse_ore, parse_poly, parse_rational
from .polynomials import PolyA, PrimePlace, RationalFn, count_irreducibles, enumerate_irreducibles, factor, is_irreducible, tame_lcm_d
from .ramification import BreakReport, Filtration, GaloisPresentation, HerbrandFn, break_report, carlitz_local, ext_valuation, herbrand_phi, herbrand_psi, lower_filtration, maximal_break
from .tate import ExpSeries, TateDatum, covolume_of_phi, exp_series, functional_equation_defect, lattice_points, product_formula_check, reconstruct_phi

__version__ = "0.1.0"


def ore_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    """Product in the twisted polynomial ring (tau c = c^q tau)."""
    return f.mul(g)
