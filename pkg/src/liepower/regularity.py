"""Regular elements, P_k-regular elements, and the root/regularity equivalence check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups
from .liealg import IllConditioned

__all__ = [
    "RegularityReport",
    "BoundaryAmbiguity",
    "is_regular",
    "is_pk_regular",
    "check_root_regularity_equivalence",
    "UNIT_ROOT_WINDOW",
    "UNIT_ROOT_IDENTITY_WINDOW",
]

UNIT_ROOT_WINDOW = 1e-8
UNIT_ROOT_IDENTITY_WINDOW = 1e-12


class BoundaryAmbiguity(Exception):
    """An Ad-eigenvalue sits near a nontrivial k-th root of unity without
    matching it decisively; the caller should perturb or discard the sample."""


@dataclass(frozen=True)
class RegularityReport:
    nilspace_dim: int
    rank: int
    is_regular: bool
    eigenvalues_of_Ad: np.ndarray


def _unit_cluster_dim(eigs: np.ndarray, sigma_max: float) -> int:
    """Dimension of the generalized eigenspace of Ad at eigenvalue 1.

    Counts eigenvalues inside a window around 1 that scales with the
    conditioning of Ad (eigenvalue errors grow like eps * sigma_max); an
    eigenvalue in the surrounding ambiguity band is undecidable and raises
    IllConditioned.  This equals dim N(Ad - 1): the nilspace is the
    generalized 1-eigenspace, and counting eigenvalue multiplicity is far
    more robust than SVD rank cuts once the spectrum spans many decades.
    """
    window = max(1e-9, 1e-14 * sigma_max)
    if window > 0.1:
        # the cluster window would swallow eigenvalues at unit distance
        # (e.g. Ad-eigenvalue 0); no decision is possible at this conditioning
        raise IllConditioned(
            f"sigma_max(Ad) = {sigma_max:.2e} leaves no usable window around 1"
        )
    d = np.abs(eigs - 1.0)
    inside = int(np.sum(d < window))
    band = np.sum((d >= window) & (d < 10 * window))
    if band:
        raise IllConditioned(
            f"{band} Ad-eigenvalue(s) in the ambiguity band around 1 "
            f"(window {window:.2e})"
        )
    return inside


def is_regular(g: groups.GroupElement) -> RegularityReport:
    """Whether the nilspace of Ad_g - 1 has the minimal possible dimension.

    The minimum over the group is the rank of the algebra, computed once per
    descriptor and cached.
    """
    L = groups.descriptor_algebra(g.descriptor)
    rank = groups.descriptor_rank(g.descriptor)
    ad = L.Ad_matrix(g.matrix).matrix
    eigs = np.linalg.eigvals(ad)
    dim = _unit_cluster_dim(eigs, np.linalg.norm(ad, 2))
    return RegularityReport(
        nilspace_dim=dim,
        rank=rank,
        is_regular=(dim == rank),
        eigenvalues_of_Ad=eigs,
    )


def is_pk_regular(g: groups.GroupElement, k: int) -> bool:
    """True iff no eigenvalue a of Ad_g has a^k = 1 with a != 1.

    A definite hit (eigenvalue within 1e-12 of a nontrivial k-th root of
    unity, or |a^k - 1| < 1e-8 with |a - 1| >= 1e-8) decides False.  An
    eigenvalue inside the 1e-8 window around a nontrivial root of unity but
    not matching to 1e-12 is undecidable at this precision and raises
    BoundaryAmbiguity, unless another eigenvalue already decided False.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return True
    L = groups.descriptor_algebra(g.descriptor)
    eigs = np.linalg.eigvals(L.Ad_matrix(g.matrix).matrix)
    omegas = np.exp(2j * np.pi * np.arange(1, k) / k)
    definite = False
    ambiguous = False
    for a in eigs:
        d = np.abs(a - omegas).min()
        if d < UNIT_ROOT_IDENTITY_WINDOW:
            definite = True
        elif d < UNIT_ROOT_WINDOW:
            ambiguous = True
        elif abs(a**k - 1.0) < UNIT_ROOT_WINDOW and abs(a - 1.0) >= UNIT_ROOT_WINDOW:
            definite = True
    if definite:
        return False
    if ambiguous:
        raise BoundaryAmbiguity(
            f"an Ad-eigenvalue is within {UNIT_ROOT_WINDOW:g} of a nontrivial "
            f"{k}-th root of unity but does not match it to "
            f"{UNIT_ROOT_IDENTITY_WINDOW:g}"
        )
    return True


def check_root_regularity_equivalence(h: groups.GroupElement, k: int) -> bool:
    """With g = h^k: does [g regular] == [h regular and h P_k-regular] hold?

    Used as a property-test oracle; expected to hold on every sample.
    IllConditioned or BoundaryAmbiguity propagate so the caller can discard.
    """
    g = groups.GroupElement(
        matrix=np.linalg.matrix_power(h.matrix, k), descriptor=h.descriptor
    )
    lhs = is_regular(g).is_regular
    rhs = is_regular(h).is_regular and is_pk_regular(h, k)
    return lhs == rhs
