"""Finitely generated abelian groups in invariant-factor form, via Smith normal form.

All integer work is exact (python ints); matrices are small lists of lists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

__all__ = ["smith_normal_form", "FGAbelian"]


def _eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """Smith normal form of an integer matrix.

    Returns (D, U, V) with U A V = D, U and V unimodular, D diagonal with
    nonnegative entries d_1 | d_2 | ... .
    """
    A = [[int(x) for x in row] for row in A]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = _eye(rows)
    V = _eye(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def row_plus(dst, src, q):
        for c in range(cols):
            A[dst][c] += q * A[src][c]
        for c in range(rows):
            U[dst][c] += q * U[src][c]

    def col_plus(dst, src, q):
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(rows, cols):
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < best):
                    best = abs(A[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        while True:
            # move the smallest remaining entry to the pivot position
            if pivot != (t, t):
                if pivot[0] != t:
                    swap_rows(t, pivot[0])
                if pivot[1] != t:
                    swap_cols(t, pivot[1])
            # clear the pivot column and row by division with remainder
            for i in range(t + 1, rows):
                if A[i][t] != 0:
                    row_plus(i, t, -(A[i][t] // A[t][t]))
            for j in range(t + 1, cols):
                if A[t][j] != 0:
                    col_plus(j, t, -(A[t][j] // A[t][t]))
            leftover = [(i, t) for i in range(t + 1, rows) if A[i][t] != 0]
            leftover += [(t, j) for j in range(t + 1, cols) if A[t][j] != 0]
            if leftover:
                # remainders are smaller than the pivot: recurse on the smallest
                pivot = min(leftover, key=lambda ij: abs(A[ij[0]][ij[1]]))
                continue
            # divisibility: the pivot must divide the whole remaining block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % A[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_plus(t, bad, 1)
            pivot = (t, t)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


@dataclass(frozen=True)
class FGAbelian:
    """Z^r x Z/n_1 x ... x Z/n_t with invariant factors n_1 | n_2 | ... , n_i >= 2."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        tors = tuple(int(n) for n in self.torsion)
        if any(n < 2 for n in tors):
            raise ValueError("invariant factors must be >= 2")
        for a, b in zip(tors, tors[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors must divide in sequence: {tors}")
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_cyclic_orders(cls, orders) -> "FGAbelian":
        """Canonicalize a direct sum of cyclic groups Z/o (o = 0 meaning Z)."""
        orders = [int(o) for o in orders]
        free = sum(1 for o in orders if o == 0)
        tors = [o for o in orders if o > 1]
        if not tors:
            return cls(free, ())
        diag = [[tors[i] if i == j else 0 for j in range(len(tors))]
                for i in range(len(tors))]
        D, _, _ = smith_normal_form(diag)
        inv = [D[i][i] for i in range(len(tors)) if D[i][i] > 1]
        return cls(free, tuple(inv))

    @classmethod
    def from_presentation(cls, n_generators: int, relations) -> "FGAbelian":
        """Z^n modulo the subgroup generated by integer relation rows."""
        rels = [list(map(int, r)) for r in relations]
        if not rels:
            return cls(n_generators, ())
        if any(len(r) != n_generators for r in rels):
            raise ValueError("relation rows must have one entry per generator")
        D, _, _ = smith_normal_form(rels)
        diag = [D[i][i] for i in range(min(len(rels), n_generators))]
        rank = sum(1 for d in diag if d != 0)
        tors = [d for d in diag if d > 1]
        return cls(n_generators - rank, tuple(tors))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        """Group order; raises for infinite groups."""
        if not self.is_finite:
            raise ValueError("group is infinite")
        out = 1
        for n in self.torsion:
            out *= n
        return out

    def elements(self):
        """All elements of a finite group as coordinate tuples."""
        if not self.is_finite:
            raise ValueError("group is infinite")
        return list(itertools.product(*(range(n) for n in self.torsion)))

    def scale(self, k: int, x):
        """k * x in coordinates (free coordinates first, then torsion)."""
        free = tuple(k * v for v in x[: self.free_rank])
        tors = tuple((k * v) % n for v, n in zip(x[self.free_rank:], self.torsion))
        return free + tors

    def add(self, x, y):
        free = tuple(a + b for a, b in zip(x[: self.free_rank], y[: self.free_rank]))
        tors = tuple((a + b) % n for a, b, n in
                     zip(x[self.free_rank:], y[self.free_rank:], self.torsion))
        return free + tors

    def multiplication_by_k_surjective(self, k: int) -> bool:
        """Whether x -> k*x is onto (k = 1 is always onto)."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if k == 1:
            return True
        return self.free_rank == 0 and all(gcd(k, n) == 1 for n in self.torsion)

    def image_of_multiplication(self, k: int):
        """Brute-force image of x -> k*x for a finite group, as a set of tuples."""
        return {self.scale(k, x) for x in self.elements()}

    def in_image_of_multiplication(self, k: int, x) -> bool:
        """Whether x has a k-th preimage: exact arithmetic, no enumeration.

        On Z the image is kZ; on Z/n it is the subgroup generated by gcd(k, n).
        """
        free = x[: self.free_rank]
        tors = x[self.free_rank:]
        if any(v % k != 0 for v in free):
            return False
        return all(v % gcd(k, n) == 0 for v, n in zip(tors, self.torsion))

    def element_outside_image(self, k: int):
        """Some element with no k-th preimage, or None when k*A = A.

        For a free summand the first generator works for every k >= 2; for the
        torsion part the witness is found by brute force.
        """
        if self.multiplication_by_k_surjective(k):
            return None
        if self.free_rank > 0 and k >= 2:
            return (1,) + (0,) * (self.free_rank - 1 + len(self.torsion))
        image = self.image_of_multiplication(k)
        for x in self.elements():
            if x not in image:
                return (0,) * self.free_rank + x
        return None

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{n}" for n in self.torsion]
        return " x ".join(parts) if parts else "trivial"
