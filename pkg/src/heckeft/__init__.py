"""heckeft: exact arithmetic for Drinfeld modular forms over F_q[t].

Goss polynomials, u-expansions of rank-2 forms, the Hecke action on those
expansions, explicit coset representatives, and the full double-coset
Hecke algebra with its multiplicativity and structure identities.
"""

from .fq import FqContext, context_for_q
from .polyring import PolyA, RationalFunction, is_irreducible
from .laurent import LaurentSeries, laurent_from_product
from .lattice import (IndexType, LatticeMatrix, a_index, elementary_divisors,
                      enumerate_sublattices, hermite_normal_form)
from .hecke import (HeckeElement, FormalPoly, express_in_generators, multiply,
                    multiplicity, psi_map, q_binomial, script_t,
                    script_t_prime_power, t_generator)
from .cosets import CosetRep, classify, enumerate_reps, verify_partition
from .goss import (ExpCoeffs, FiniteLattice, GossTable, XPoly,
                   brute_force_power_sum, finite_lattice_exponential,
                   goss_for_finite_lattice, goss_polynomials, lattice_log,
                   power_sum_matches_goss, rescale_lattice_goss)
from .expansion import (ExpansionContext, HeckePrime, USeries,
                        eigen_report, eigenvalue_of, lattice_series_inversion)

__version__ = "0.1.0"

__all__ = [
    "FqContext", "context_for_q", "PolyA", "RationalFunction", "is_irreducible",
    "LaurentSeries", "laurent_from_product", "IndexType", "LatticeMatrix",
    "a_index", "elementary_divisors", "enumerate_sublattices",
    "hermite_normal_form", "HeckeElement", "FormalPoly",
    "express_in_generators", "multiply", "multiplicity", "psi_map",
    "q_binomial", "script_t", "script_t_prime_power", "t_generator",
    "CosetRep", "classify", "enumerate_reps", "verify_partition", "ExpCoeffs",
    "FiniteLattice", "GossTable", "XPoly", "brute_force_power_sum",
    "finite_lattice_exponential", "goss_for_finite_lattice",
    "goss_polynomials", "lattice_log", "power_sum_matches_goss",
    "rescale_lattice_goss", "ExpansionContext", "HeckePrime", "USeries",
    "eigen_report", "eigenvalue_of", "lattice_series_inversion",
]
