"""Exact symbolic mKdV/KdV hierarchies of type A_{N-1}^(1)."""

from soliton.cartan import CartanData, cartan_data, exponent_sequence, parse_algebra, sl
from soliton.diffpoly import (DiffPoly, EvolutionaryDerivation, NotTotalDerivative,
                              commutator)
from soliton.loopalg import (LoopElement, NotInImage, bracket, gamma_vectors, inner_product,
                             inv_ad_pm1, p_element, split)
from soliton.recursion import mkdv_flow, solve_canonical, verify_zero_curvature
from soliton.dressing import conjugated_generator, dressing_operator, kdv_variable
from soliton.reduction import gauge_to_canonical, kdv_flow, miura, screening_field
from soliton.toda import (LocalFunctional, TodaElement, find_integrals, poisson_bracket,
                          screening_apply, toda_dz, verify_hamiltonian, xi_field,
                          xi_field_weighted)

__version__ = "0.1.0"
