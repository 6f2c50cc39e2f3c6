"""Density of k-th power maps on concrete Lie groups.

Decides whether g -> g^k has dense image using Cartan subgroup component
groups, and cross-validates the verdicts numerically with a certified matrix
k-th-root solver and Monte Carlo sampling.
"""

from .abelian import FGAbelian, smith_normal_form
from .cartan import (
    CartanClass,
    cartan_subalgebra_from_regular,
    centralizer_components,
    cover_cartan_classes,
    enumerate_cartan_classes,
    pk_image_components,
)
from .density import (
    CompositeGroup,
    DensityVerdict,
    SimpleCaseDescriptor,
    density_verdict,
    full_rank_inheritance_check,
    levi_reduce,
    linear_weakexp_via_p2,
    pk_surjective_on_fg_abelian,
    shipped_full_rank_pairs,
    simple_case_verdict,
    weakly_exponential,
)
from .groups import (
    GroupDescriptor,
    GroupElement,
    catalog_descriptors,
    descriptor_algebra,
    descriptor_rank,
    membership_residual,
    parse_descriptor,
    sample_element,
)
from .liealg import LieAlgebraBasis, algebra_rank, nilspace
from .regularity import (
    RegularityReport,
    check_root_regularity_equivalence,
    is_pk_regular,
    is_regular,
)
from .roots import RootCertificate, kth_roots, monte_carlo_density, root_search

__version__ = "0.1.0"
