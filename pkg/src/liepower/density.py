"""The density decision engine for k-th power maps.

A power map has dense image exactly when multiplication by k is onto the
component group of every Cartan subgroup.  Matrix descriptors get their
component groups computed; covers/quotients of PSL(2,R) and the simple-group
case table are handled symbolically.  Verdicts the shipped rules cannot
settle come back Undecided rather than extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cartan, groups
from .abelian import FGAbelian
from .groups import GroupDescriptor
from .liealg import nilspace

__all__ = [
    "DensityVerdict",
    "Witness",
    "SimpleCaseDescriptor",
    "CompositeGroup",
    "FullRankPair",
    "UnsupportedGroup",
    "InvalidCase",
    "NotLinear",
    "NotFullRank",
    "TheoryConsistencyError",
    "pk_surjective_on_fg_abelian",
    "density_verdict",
    "simple_case_verdict",
    "weakly_exponential",
    "linear_weakexp_via_p2",
    "levi_reduce",
    "full_rank_inheritance_check",
    "verify_witness",
    "shipped_full_rank_pairs",
]

DENSE = "Dense"
NOT_DENSE = "NotDense"
UNDECIDED = "Undecided"


class UnsupportedGroup(Exception):
    """Descriptor outside what the decision engine supports."""


class InvalidCase(Exception):
    """Malformed simple-group case descriptor."""


class NotLinear(Exception):
    """The square-map criterion for weak exponentiality needs a linear group."""


class NotFullRank(Exception):
    """The subgroup's algebra does not contain a Cartan subalgebra of the group."""


class TheoryConsistencyError(Exception):
    """Two rules that must agree disagreed; this is the loudest possible bug."""


@dataclass(frozen=True)
class Witness:
    """A component-group element with no k-th preimage."""

    class_label: str
    component_group: FGAbelian
    element: tuple

    def render(self) -> str:
        return (
            f"{self.class_label}:component_group={self.component_group}"
            f":element={self.element}"
        )


@dataclass(frozen=True)
class DensityVerdict:
    status: str
    rule: str
    witness: Witness = None
    reason: str = ""

    @property
    def is_dense(self) -> bool:
        return self.status == DENSE


def pk_surjective_on_fg_abelian(A: FGAbelian, k: int) -> bool:
    """Multiplication by k is onto iff the group is torsion with all invariant
    factors coprime to k (and always for k = 1)."""
    return A.multiplication_by_k_surjective(k)


def verify_witness(verdict: DensityVerdict, k: int) -> bool:
    """Check that a NotDense witness element really has no k-th preimage."""
    if verdict.status != NOT_DENSE:
        raise ValueError("only NotDense verdicts carry witnesses")
    w = verdict.witness
    if w is None:
        return False
    return not w.component_group.in_image_of_multiplication(k, w.element)


def _verdict_from_classes(classes, k: int, rule: str) -> DensityVerdict:
    for c in classes:
        A = c.component_group
        if not pk_surjective_on_fg_abelian(A, k):
            return DensityVerdict(
                status=NOT_DENSE,
                rule=rule,
                witness=Witness(
                    class_label=c.label,
                    component_group=A,
                    element=A.element_outside_image(k),
                ),
            )
    return DensityVerdict(status=DENSE, rule=rule)


def density_verdict(G, k: int) -> DensityVerdict:
    """Decide density of the k-th power map on a catalog group.

    Matrix path: surjectivity of multiplication-by-k on the component group
    of every Cartan class.  Cover path: the deck group sits inside the split
    Cartan subgroup's component group.  Composite descriptors reduce to
    their semisimple part first.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if isinstance(G, CompositeGroup):
        inner = density_verdict(levi_reduce(G), k)
        return DensityVerdict(
            status=inner.status, rule="levi-reduction",
            witness=inner.witness, reason=inner.reason,
        )
    if not isinstance(G, GroupDescriptor):
        raise UnsupportedGroup(f"unsupported group object {G!r}")
    if G.is_cover:
        rule = "cover-free-center" if G.kernel_index == 0 else "cover-center-quotient"
        return _verdict_from_classes(cartan.cover_cartan_classes(G), k, rule)
    if G.is_matrix:
        return _verdict_from_classes(
            cartan.enumerate_cartan_classes(G), k, "cartan-components"
        )
    raise UnsupportedGroup(f"unsupported descriptor {G!r}")


# ---------------------------------------------------------------------------
# simple-group case rules
# ---------------------------------------------------------------------------

_CASE3_GAP_REASON = (
    "k is odd and divisible by 3: the number of connected components of the "
    "relevant Cartan subgroups is not settled by the shipped case rules"
)


@dataclass(frozen=True)
class SimpleCaseDescriptor:
    """A simple-group row of the case table.

    n is the cyclic invariant of cases 2a/2b; kernel_index m picks the
    subgroup generated by m in a cyclic fundamental group (case 5, 0 = trivial
    subgroup); f_two_rank is the rank of the 2-group F of adjoint Cartan
    components (case 5).
    """

    case_tag: str
    fundamental_group: FGAbelian
    n: int = None
    kernel_index: int = 0
    f_two_rank: int = 0

    def __post_init__(self):
        pi1 = self.fundamental_group
        if self.case_tag == "1":
            ok = pi1.free_rank == 0 and pi1.torsion in ((2,), (2, 2))
            if not ok:
                raise InvalidCase("case 1 needs pi_1 = Z/2 or the noncyclic group of order 4")
        elif self.case_tag in ("2a", "2b"):
            if pi1 != FGAbelian(1, ()):
                raise InvalidCase("cases 2a/2b need infinite cyclic pi_1")
            if self.n is None or self.n < 1:
                raise InvalidCase("cases 2a/2b need the cyclic invariant n >= 1")
        elif self.case_tag == "3":
            if pi1 != FGAbelian(0, (6,)):
                raise InvalidCase("case 3 has pi_1 = Z/6")
        elif self.case_tag == "4":
            if pi1.free_rank != 0 or pi1.torsion not in ((4,), (8,)):
                raise InvalidCase("case 4 needs pi_1 = Z/4 or Z/8")
        elif self.case_tag == "5":
            if self.kernel_index < 0 or self.f_two_rank < 0:
                raise InvalidCase("case 5 parameters must be nonnegative")
        else:
            raise InvalidCase(f"unknown case tag {self.case_tag!r}")

    def center_mod_kernel(self) -> FGAbelian:
        """pi_1 / <m * generator> for a cyclic fundamental group (case 5)."""
        pi1 = self.fundamental_group
        if pi1.free_rank + len(pi1.torsion) != 1 and not pi1.is_trivial:
            raise InvalidCase("case 5 kernels are supported in cyclic fundamental groups")
        if pi1.is_trivial:
            return pi1
        relations = []
        if pi1.torsion:
            relations.append([pi1.torsion[0]])
        if self.kernel_index:
            relations.append([self.kernel_index])
        return FGAbelian.from_presentation(1, relations)


def _shadow_witness(label: str, A: FGAbelian, k: int) -> Witness:
    return Witness(class_label=label, component_group=A,
                   element=A.element_outside_image(k))


def simple_case_verdict(d: SimpleCaseDescriptor, k: int) -> DensityVerdict:
    """Density verdicts for the simple-group cases of the classification table.

    Case 1: dense iff k odd.  Case 2a: dense iff gcd(k, n) = 1.  Case 2b:
    dense iff k odd and gcd(k, n) = 1.  Case 3: dense for k odd and coprime
    to 3, not dense for even k, otherwise undecided.  Case 4: dense iff k
    odd.  Case 5: not dense for even k with nontrivial F, else dense iff
    multiplication by k is onto pi_1/kernel.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tag = d.case_tag
    rule = f"case{tag}"
    pi1 = d.fundamental_group
    odd = k % 2 == 1
    if tag == "1":
        if odd:
            return DensityVerdict(DENSE, rule)
        return DensityVerdict(NOT_DENSE, rule, _shadow_witness("pi1", pi1, k))
    if tag == "2a":
        A = FGAbelian.from_presentation(1, [[d.n]])
        if pk_surjective_on_fg_abelian(A, k):
            return DensityVerdict(DENSE, rule)
        return DensityVerdict(NOT_DENSE, rule,
                              _shadow_witness("cover-components", A, k))
    if tag == "2b":
        if not odd:
            # the adjoint Cartan subgroup is disconnected: a two-torsion
            # component survives in the cover and k even misses it
            return DensityVerdict(NOT_DENSE, rule,
                                  _shadow_witness("adjoint-components", FGAbelian(0, (2,)), k))
        A = FGAbelian.from_presentation(1, [[d.n]])
        if pk_surjective_on_fg_abelian(A, k):
            return DensityVerdict(DENSE, rule)
        return DensityVerdict(NOT_DENSE, rule,
                              _shadow_witness("cover-kernel", A, k))
    if tag == "3":
        if not odd:
            return DensityVerdict(NOT_DENSE, rule,
                                  _shadow_witness("adjoint-components", FGAbelian(0, (2,)), k))
        if k % 3 != 0:
            return DensityVerdict(DENSE, rule)
        return DensityVerdict(UNDECIDED, rule, reason=_CASE3_GAP_REASON)
    if tag == "4":
        if odd:
            return DensityVerdict(DENSE, rule)
        return DensityVerdict(NOT_DENSE, rule, _shadow_witness("pi1", pi1, k))
    if tag == "5":
        if not odd and d.f_two_rank > 0:
            return DensityVerdict(
                NOT_DENSE, rule,
                _shadow_witness("component-two-group",
                                FGAbelian(0, (2,) * d.f_two_rank), k))
        A = d.center_mod_kernel()
        if pk_surjective_on_fg_abelian(A, k):
            return DensityVerdict(DENSE, rule)
        return DensityVerdict(NOT_DENSE, rule,
                              _shadow_witness("center-mod-kernel", A, k))
    raise InvalidCase(tag)


# ---------------------------------------------------------------------------
# weak exponentiality, Levi reduction, full-rank inheritance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeakExponentiality:
    value: bool
    trace: tuple  # one line per Cartan class


def weakly_exponential(G: GroupDescriptor) -> WeakExponentiality:
    """True iff every Cartan class has a connected Cartan subgroup.

    Cross-checked against density of P_k for k = 2..12: weak exponentiality
    must imply all of them; disagreement aborts with a diagnostic.
    """
    if isinstance(G, CompositeGroup):
        inner = weakly_exponential(levi_reduce(G))
        return WeakExponentiality(inner.value, inner.trace + ("levi-reduction",))
    if G.is_cover:
        classes = cartan.cover_cartan_classes(G)
    elif G.is_matrix:
        classes = cartan.enumerate_cartan_classes(G)
    else:
        raise UnsupportedGroup(f"unsupported descriptor {G!r}")
    trace = tuple(
        f"{c.label}: component group {c.component_group}" for c in classes
    )
    value = all(c.component_group.is_trivial for c in classes)
    if value:
        for k in range(2, 13):
            if not density_verdict(G, k).is_dense:
                raise TheoryConsistencyError(
                    f"{G.render()}: connected Cartan subgroups but P_{k} not dense"
                )
    return WeakExponentiality(value=value, trace=trace)


def linear_weakexp_via_p2(G: GroupDescriptor) -> bool:
    """For linear groups, weak exponentiality is the same as dense squares.

    Cover descriptors are rejected: the triple-cover quotient
    quotient(universal(PSL(2,R)),3) has dense squares yet a disconnected
    Cartan subgroup, so the square-map criterion fails off linear groups.
    """
    if not (isinstance(G, GroupDescriptor) and G.is_matrix):
        raise NotLinear(
            "the square-map criterion needs a linear group: "
            "quotient(universal(PSL(2,R)),3) has dense squares but is not "
            "weakly exponential"
        )
    via_p2 = density_verdict(G, 2).is_dense
    direct = weakly_exponential(G).value
    if via_p2 != direct:
        raise TheoryConsistencyError(
            f"{G.render()}: square-map criterion ({via_p2}) disagrees with "
            f"connected-Cartan criterion ({direct})"
        )
    return via_p2


@dataclass(frozen=True)
class CompositeGroup:
    """A semisimple catalog group extended by a d-dimensional solvable radical."""

    semisimple: GroupDescriptor
    radical_dim: int

    def render(self) -> str:
        return f"{self.semisimple.render()} x R^{self.radical_dim}"


def levi_reduce(G_with_radical: CompositeGroup) -> GroupDescriptor:
    """Project away the radical; density only depends on the quotient."""
    if G_with_radical.radical_dim < 0:
        raise ValueError("radical dimension must be nonnegative")
    return G_with_radical.semisimple


@dataclass(frozen=True)
class FullRankPair:
    """A shipped (group, connected full-rank subgroup) pair.

    The subgroup is described by a basis of a Cartan subalgebra of the big
    group lying inside the subgroup's algebra, plus the component groups of
    the subgroup's own Cartan classes (reviewed data).  zg_ta pairs are
    centralizers Z_G(t_a), where density transfers in both directions.
    """

    group: GroupDescriptor
    subgroup_name: str
    cartan_basis: np.ndarray = field(repr=False)
    subgroup_components: tuple
    zg_ta: bool = False

    def subgroup_dense(self, k: int) -> bool:
        return all(pk_surjective_on_fg_abelian(A, k) for A in self.subgroup_components)


def shipped_full_rank_pairs():
    """The reviewed full-rank pairs exercised by the inheritance checks."""
    sl3 = groups.parse_descriptor("SL(3,R)")
    sl2c = groups.parse_descriptor("SL(2,C)")
    sl2 = groups.parse_descriptor("SL(2,R)")
    su21 = groups.parse_descriptor("SU(2,1)")
    so41 = groups.parse_descriptor("SO+(4,1)")

    def diag3(a, b, c):
        return np.diag([float(a), float(b), float(c)])

    pairs = []
    # block subgroup of unit-determinant (1+2) matrices, identity component:
    # its split Cartan keeps one sign component, its rotation class is connected
    pairs.append(FullRankPair(
        group=sl3,
        subgroup_name="S(GL(1)xGL(2))+",
        cartan_basis=np.array([diag3(1, -1, 0), diag3(0, 1, -1)]),
        subgroup_components=(FGAbelian(0, (2,)), FGAbelian()),
    ))
    # diagonal torus of SL(2,C): connected abelian, divisible
    pairs.append(FullRankPair(
        group=sl2c,
        subgroup_name="diagonal-torus",
        cartan_basis=np.array([
            np.diag([1.0 + 0j, -1.0 + 0j]),
            np.diag([1j, -1j]),
        ]),
        subgroup_components=(FGAbelian(),),
    ))
    # positive split torus of SL(2,R): a line, divisible
    pairs.append(FullRankPair(
        group=sl2,
        subgroup_name="positive-split-torus",
        cartan_basis=np.array([np.diag([1.0, -1.0])]),
        subgroup_components=(FGAbelian(),),
    ))
    # Z_G(t_a) in SU(2,1): centralizer of the compact part of the noncompact
    # Cartan; both of its Cartan classes are connected
    X = np.zeros((3, 3), dtype=complex)
    X[0, 2] = X[2, 0] = 1.0
    T = np.diag([1j, -2j, 1j])
    pairs.append(FullRankPair(
        group=su21,
        subgroup_name="Z_G(t_a)",
        cartan_basis=np.array([X, T]),
        subgroup_components=(FGAbelian(), FGAbelian()),
        zg_ta=True,
    ))
    # Z_G(t_a) in SO+(4,1) = SO(2) x SO+(2,1): all classes connected
    R01 = np.zeros((5, 5))
    R01[0, 1], R01[1, 0] = 1.0, -1.0
    B34 = np.zeros((5, 5))
    B34[3, 4] = B34[4, 3] = 1.0
    pairs.append(FullRankPair(
        group=so41,
        subgroup_name="Z_G(t_a)",
        cartan_basis=np.array([R01, B34]),
        subgroup_components=(FGAbelian(), FGAbelian()),
        zg_ta=True,
    ))
    return tuple(pairs)


def full_rank_inheritance_check(G: GroupDescriptor, A: FullRankPair, k: int) -> bool:
    """Does Dense(G,k) imply Dense(A,k)?  (And conversely for Z_G(t_a) pairs.)

    Raises NotFullRank when the pair's subalgebra is not a Cartan subalgebra
    of the big group (generic element not regular or wrong dimension).
    """
    if A.group != G:
        raise ValueError("pair does not belong to this group")
    L = groups.descriptor_algebra(G)
    rank = groups.descriptor_rank(G)
    if len(A.cartan_basis) != rank:
        raise NotFullRank(
            f"subgroup Cartan candidate has dimension {len(A.cartan_basis)}, "
            f"rank is {rank}"
        )
    rng = np.random.default_rng(5)
    coeff = rng.standard_normal(rank)
    X0 = np.tensordot(coeff, A.cartan_basis, axes=(0, 0))
    ad = L.ad_matrix(L.coefficients_of(X0)).matrix
    dim, _ = nilspace(ad)
    if dim != rank:
        raise NotFullRank(
            f"generic element of the candidate subalgebra is not regular "
            f"(nilspace {dim} != rank {rank})"
        )
    dense_G = density_verdict(G, k).is_dense
    dense_A = A.subgroup_dense(k)
    holds = (not dense_G) or dense_A
    if A.zg_ta:
        holds = holds and ((not dense_A) or dense_G)
    return holds
