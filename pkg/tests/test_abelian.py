import random
from math import gcd

import pytest

from liepower.abelian import FGAbelian, smith_normal_form


def matmul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def int_det(M):
    # Bareiss fraction-free elimination
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


class TestSmithNormalForm:
    def test_known_example(self):
        D, U, V = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        assert [D[i][i] for i in range(3)] == [2, 2, 156]

    def test_randomized_properties(self):
        random.seed(3)
        for _ in range(200):
            r = random.randint(1, 4)
            c = random.randint(1, 4)
            A = [[random.randint(-9, 9) for _ in range(c)] for _ in range(r)]
            D, U, V = smith_normal_form(A)
            assert matmul(matmul(U, A), V) == D
            assert abs(int_det(U)) == 1
            assert abs(int_det(V)) == 1
            diag = [D[i][i] for i in range(min(r, c))]
            assert all(D[i][j] == 0 for i in range(r) for j in range(c) if i != j)
            assert all(d >= 0 for d in diag)
            nz = [d for d in diag if d]
            for a, b in zip(nz, nz[1:]):
                assert b % a == 0


class TestFGAbelian:
    def test_canonical_form(self):
        assert FGAbelian.from_cyclic_orders([6, 4]).torsion == (2, 12)
        assert FGAbelian.from_cyclic_orders([2, 3]).torsion == (6,)
        assert FGAbelian.from_cyclic_orders([0, 0, 2]).free_rank == 2

    def test_bad_chain_rejected(self):
        with pytest.raises(ValueError):
            FGAbelian(0, (4, 2))

    def test_presentation(self):
        assert FGAbelian.from_presentation(1, [[3]]) == FGAbelian(0, (3,))
        assert FGAbelian.from_presentation(2, [[2, 0]]) == FGAbelian(1, (2,))
        assert FGAbelian.from_presentation(1, []) == FGAbelian(1, ())
        assert FGAbelian.from_presentation(1, [[6], [4]]) == FGAbelian(0, (2,))

    def test_surjectivity_rule(self):
        assert FGAbelian().multiplication_by_k_surjective(7)
        Z2 = FGAbelian(0, (2,))
        assert not Z2.multiplication_by_k_surjective(2)
        assert Z2.multiplication_by_k_surjective(3)
        Z = FGAbelian(1, ())
        assert not Z.multiplication_by_k_surjective(2)
        assert Z.multiplication_by_k_surjective(1)

    def test_witness_identification(self):
        Z = FGAbelian(1, ())
        w = Z.element_outside_image(5)
        assert w == (1,)
        assert not Z.in_image_of_multiplication(5, w)
        A = FGAbelian(0, (2, 4))
        w = A.element_outside_image(2)
        assert w is not None and w not in A.image_of_multiplication(2)
        assert A.element_outside_image(3) is None

    def test_in_image_matches_enumeration(self):
        for tors in [(2,), (3,), (2, 4), (2, 2, 2), (6,), (12,)]:
            A = FGAbelian(0, tors)
            for k in range(1, 13):
                image = A.image_of_multiplication(k)
                for x in A.elements():
                    assert A.in_image_of_multiplication(k, x) == (x in image)

    def test_str(self):
        assert str(FGAbelian()) == "trivial"
        assert str(FGAbelian(1, (2,))) == "Z x Z/2"
