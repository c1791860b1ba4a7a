"""c-maps between finite abelian p-groups and central automorphisms of p-groups."""

from .abelian import (
    AbelianShape,
    GroupElement,
    Homomorphism,
    Subgroup,
    hom_basis,
    hom_compose,
    hom_enumerate,
    hom_validate,
)
from .cmap import (
    CMapProfile,
    CMapVerdict,
    classify,
    is_cmap_basis,
    is_cmap_definition,
    is_cmap_structural,
    is_trivial_cmap,
    lemma_suite,
    profile,
)
from .pgroup import (
    CayleyGroup,
    Verdict,
    autc_is_abelian_oracle,
    central_automorphisms,
    lambda_map,
    validate_group,
    verdict,
)
from .catalog import build, ingest, ingest_lambda_problem, parse_recipe

__version__ = "0.1.0"
