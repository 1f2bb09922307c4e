"""Finite-semigroup core: representation, closure, constructions, groups."""

from .constructions import (
    ActionPair,
    AugmentedSemigroup,
    Kind,
    PointedSemigroup,
    Side,
    WreathProduct,
    adjoin,
    augment,
    direct_product,
    flat_division,
    flat_embed,
    formal_flat,
    subset_actions,
    tilde,
    triple_product,
    with_identity,
    wreath_product,
    zero_adjunction_witness,
)
from .groups import (
    composition_factors,
    cyclic_subgroups,
    is_normal,
    is_simple,
    kk_embed,
    normal_subgroups,
    quotient,
    subgroups,
)
from .homs import Division, FreeHom, SgHom, Verdict, free_hom, is_division_witness
from .semigroup import (
    CLOSURE_CAP,
    Closure,
    Semigroup,
    SubsetOfS,
    closure,
    cyclic_info,
    generated_mask,
    idempotent_power,
    index_period,
    is_aperiodic,
    local_group,
    maximal_subgroup,
    minimal_ideal,
    opposite,
    restrict,
    subsemigroup,
)
