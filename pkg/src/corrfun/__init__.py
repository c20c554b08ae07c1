"""Simple modules of the algebra of binary relations on a finite set.

Correspondences, posets and lattices; the subset G of a lattice and the
elements u_a; bases and representation matrices of simple modules; dimension
and radical formulas; and an exact-rank oracle that re-derives the bases.
"""

from .correspondence import Correspondence, compose, delta, gamma_of_map, opposite
from .dimension import (SimpleModuleDescriptor, dim_fundamental, dim_simple, example_table,
                        radical_dim)
from .errors import CorrfunError, GuardError, InputError, InternalConsistencyError, VerificationError
from .functor import (FormalMapSum, bracket_map, enumerate_basis, ft_action, normal_form,
                      orbit_basis, pi_project, relation_matrix, simple_module, u_element, u_total)
from .lattice import (GData, Lattice, compute_g, irreducibles, is_distributive, r_infty,
                      reduction_sequence, sigma_infty, split_surjection, validate_lattice)
from .oracle import build_n_matrix, linked, rank_exact, verify_basis
from .poset import (PermGroup, Poset, automorphisms, canonical_form, down_ideal_lattice,
                    enumerate_posets, up_ideal_lattice, validate_poset)

__all__ = [
    "Correspondence", "compose", "delta", "gamma_of_map", "opposite", "SimpleModuleDescriptor",
    "dim_fundamental", "dim_simple", "example_table", "radical_dim", "CorrfunError",
    "GuardError", "InputError", "InternalConsistencyError", "VerificationError",
    "FormalMapSum", "bracket_map", "enumerate_basis", "ft_action", "normal_form",
    "orbit_basis", "pi_project", "relation_matrix", "simple_module", "u_element", "u_total",
    "GData", "Lattice", "compute_g", "irreducibles", "is_distributive", "r_infty",
    "reduction_sequence", "sigma_infty", "split_surjection", "validate_lattice",
    "build_n_matrix", "linked", "rank_exact", "verify_basis", "PermGroup", "Poset",
    "automorphisms", "canonical_form", "down_ideal_lattice", "enumerate_posets",
    "up_ideal_lattice", "validate_poset",
]
