import numpy as np
import pytest

from liepower import groups, regularity
from liepower.groups import GroupElement, parse_descriptor, sample_element
from liepower.liealg import IllConditioned
from liepower.regularity import (
    BoundaryAmbiguity,
    check_root_regularity_equivalence,
    is_pk_regular,
    is_regular,
)

SL2 = parse_descriptor("SL(2,R)")


def rot(th):
    return np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])


class TestIsRegular:
    def test_identity_not_regular(self):
        r = is_regular(GroupElement(np.eye(2), SL2))
        assert r.nilspace_dim == 3 and r.rank == 1 and not r.is_regular

    def test_split_diagonal_regular(self):
        r = is_regular(GroupElement(np.diag([2.0, 0.5]), SL2))
        assert r.nilspace_dim == 1 and r.is_regular

    def test_minus_identity_not_regular(self):
        assert not is_regular(GroupElement(-np.eye(2), SL2)).is_regular

    def test_eigenvalue_list_conjugation_closed(self):
        g = sample_element(SL2, 5)
        eigs = is_regular(g).eigenvalues_of_Ad
        assert len(eigs) == 3
        for w in eigs:
            assert min(abs(np.conj(w) - z) for z in eigs) < 1e-8

    def test_conjugation_invariance(self):
        d = parse_descriptor("SL(3,R)")
        rng = np.random.default_rng(8)
        for i in range(20):
            g = sample_element(d, (21, i))
            x = sample_element(d, (22, i)).matrix
            conj = GroupElement(x @ g.matrix @ np.linalg.inv(x), d)
            try:
                a = is_regular(g).is_regular
                b = is_regular(conj).is_regular
            except IllConditioned:
                continue
            assert a == b


class TestIsPkRegular:
    def test_k1_always_true(self):
        for seed in range(10):
            g = sample_element(SL2, seed)
            assert is_pk_regular(g, 1)

    def test_quarter_rotation_not_p2_regular(self):
        g = GroupElement(rot(np.pi / 2), SL2)
        assert not is_pk_regular(g, 2)

    def test_split_always_pk_regular(self):
        g = GroupElement(np.diag([2.0, 0.5]), SL2)
        for k in range(1, 13):
            assert is_pk_regular(g, k)

    def test_boundary_ambiguity_raised(self):
        g = GroupElement(rot(np.pi / 2 + 1e-10), SL2)
        with pytest.raises(BoundaryAmbiguity):
            is_pk_regular(g, 2)

    def test_definite_false_beats_ambiguity(self):
        # one eigenvalue dead on a nontrivial root of unity decides False even
        # when the numbers are ugly elsewhere
        g = GroupElement(rot(np.pi / 2), SL2)
        assert is_pk_regular(g, 4) is False

    def test_product_implication(self):
        # pk-regular for km implies pk-regular for k and for m
        rng_cases = [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)]
        for seed in range(40):
            g = sample_element(SL2, (31, seed))
            for k, m in rng_cases:
                try:
                    if is_pk_regular(g, k * m):
                        assert is_pk_regular(g, k)
                        assert is_pk_regular(g, m)
                except BoundaryAmbiguity:
                    continue


class TestEquivalence:
    def test_rotation_by_pi_over_4(self):
        h = GroupElement(rot(np.pi / 4), SL2)
        assert check_root_regularity_equivalence(h, 2)
        g = GroupElement(rot(np.pi / 2), SL2)
        assert is_regular(g).is_regular
        assert is_regular(h).is_regular and is_pk_regular(h, 2)

    def test_rotation_by_pi_over_2_consistent_false(self):
        h = GroupElement(rot(np.pi / 2), SL2)
        assert check_root_regularity_equivalence(h, 2)
        assert not is_regular(GroupElement(-np.eye(2), SL2)).is_regular
        assert not is_pk_regular(h, 2)

    def test_identity_case(self):
        h = GroupElement(np.eye(2), SL2)
        for k in (2, 3, 5):
            assert check_root_regularity_equivalence(h, k)

    def test_batch_all_groups(self):
        total = discards = 0
        for gi, name in enumerate(["SL(2,R)", "SL(3,R)", "SU(2,1)"]):
            d = parse_descriptor(name)
            for k in (2, 3, 4):
                for i in range(60):
                    h = sample_element(d, (41, gi, k, i))
                    total += 1
                    try:
                        assert check_root_regularity_equivalence(h, k), (name, k, i)
                    except (IllConditioned, BoundaryAmbiguity):
                        discards += 1
        assert discards / total < 0.05
