"""Filtered derived categories of quiver representations and realization functors.

Everything is exact: scalars are Fractions, and isomorphism and Hom-dimension
questions are decided by linear algebra over the rationals.
"""
from .exactla import Mat, Subspace, rank, rref, solve
from .quiverrep import Quiver, Rep, RepMor, TorsionPair, hom_dim, projective, standard_resolution
from .complexes import (
    ChainMap,
    Complex,
    DerivedMor,
    cellular_replacement,
    cohomology,
    cone,
    derived_hom_basis,
    derived_hom_dim,
    find_iso,
    is_qis,
    shift,
)
from .fcat import (
    FilteredComplex,
    FilteredMap,
    SubcatPredicate,
    check_f_axioms,
    check_omega_props,
    filt_shift_s,
    gr,
    iota,
    omega,
    sigma,
)
from .tstruct import TStructureSpec, cohomology_t, heart_contains, truncate_t
from .realization import (
    HeartComplex,
    decompose_to_heart_complex,
    eta,
    eta_inverse,
    eta_round_trip,
    functoriality_square,
    real_functor,
    real_on_maps,
    verify_equivalence,
)

__version__ = "0.1.0"
