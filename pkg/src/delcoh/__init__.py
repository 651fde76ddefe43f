"""Exact relative Deligne cohomology and relative differential characters on simplicial maps."""

from .characters import (
    CharacterRep,
    RelCharacterRep,
    act_on_II,
    characters_equal,
    embed_I_to_II,
    in_lambda_omega,
    make_character,
    make_relative,
    phi_f,
    rel_holonomy,
    same_type_III,
    same_type_IV,
    trivialization_kind,
)
from .cone import ConeComplex, connecting_hom, relative_cohomology, verify_les
from .core_algebra import FGAbelianGroup, IntMatrix, smith_normal_form
from .sequences import (
    hbar_denominator_member,
    hbar_numerator_member,
    sample_character,
    verify_les4,
    verify_mixed_les,
    verify_thm_diagram,
)
from .simplicial import RelativeCycle, SimplicialComplex, SimplicialMap, cohomology

__version__ = "0.1.0"
