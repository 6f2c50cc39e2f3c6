#!/usr/bin/env python3
"""Regenerate src/liepower/data/cartan_classes.txt.

Builds one exact-rational seed element per Cartan conjugacy class of the
SU/SO+/Sp/PSL catalog groups, pushes each seed through the full completion
pipeline (regularity, subalgebra extraction, component enumeration), asserts
the component group and signature against the reviewed expectations below,
and only then writes the table.  SL(n,R)/SL(n,C) classes are generated
programmatically inside the package and are not table rows.
"""

import pathlib
import sys
from fractions import Fraction as F

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from liepower import cartan, groups

# complex numbers as (re, im) pairs of Fractions
ZERO = (F(0), F(0))
ONE = (F(1), F(0))


def c_(re, im=0):
    return (F(re), F(im))


def cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def conj(a):
    return (a[0], -a[1])


def eye(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(A, B):
    n, m = len(A), len(B[0])
    out = [[ZERO] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            acc = ZERO
            for t in range(len(B)):
                acc = cadd(acc, cmul(A[i][t], B[t][j]))
            out[i][j] = acc
    return out


def kron(A, B):
    n, m = len(A), len(B)
    out = [[ZERO] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    out[i * m + k][j * m + l] = cmul(A[i][j], B[k][l])
    return out


def to_float(M):
    return np.array([[complex(e[0], e[1]) for e in row] for row in M])


def entry_str(e):
    return f"{e[0]}:{e[1]}"


ROT_PARAMS = [(F(3, 5), F(4, 5)), (F(5, 13), F(12, 13))]
BOOST_PARAMS = [(F(5, 4), F(3, 4)), (F(13, 12), F(5, 12))]


def rot_block(M, i, j, u):
    c, s = u
    M[i][i], M[i][j] = c_(c), c_(-s)
    M[j][i], M[j][j] = c_(s), c_(c)


def boost_block(M, i, j, h):
    ch, sh = h
    M[i][i], M[i][j] = c_(ch), c_(sh)
    M[j][i], M[j][j] = c_(sh), c_(ch)


def quad_matrix(flip):
    """The 4x4 complex-quadruple seed on a (+,+,-,-) block.

    Realizes the action m -> g1 m g2^T on 2x2 matrices, which preserves det;
    the basis change S maps det to the diagonal (+,+,-,-) form.
    """
    g_split = [[c_(2), ZERO], [ZERO, c_(F(1, 2))]]
    g_rot = [[c_(F(3, 5)), c_(F(-4, 5))], [c_(F(4, 5)), c_(F(3, 5))]]
    g1, g2 = (g_rot, g_split) if flip else (g_split, g_rot)
    K = kron(g1, g2)
    S_cols = [
        [1, 0, 0, 1],   # E11 + E22, det +1
        [0, 1, -1, 0],  # E12 - E21, det +1
        [1, 0, 0, -1],  # E11 - E22, det -1
        [0, 1, 1, 0],   # E12 + E21, det -1
    ]
    S = [[c_(S_cols[j][i]) for j in range(4)] for i in range(4)]
    Sinv = [[c_(F(S_cols[i][j], 2)) for j in range(4)] for i in range(4)]
    return matmul(Sinv, matmul(K, S))


def embed(M, n, axes, block):
    for bi, i in enumerate(axes):
        for bj, j in enumerate(axes):
            M[i][j] = block[bi][bj]
            if bi == bj:
                continue
    for bi, i in enumerate(axes):
        M[i][i] = block[bi][bi]


def so_class_tuples(p, q):
    """All (quads, boosts, p-rotations, q-rotations) Cartan types of so(p,q)."""
    rank = (p + q) // 2
    out = []
    for c in range(rank // 2 + 1):
        for b in range(rank + 1):
            for rp in range(rank + 1):
                for rq in range(rank + 1):
                    if 2 * c + b + rp + rq != rank:
                        continue
                    if 2 * c + b + 2 * rp > p or 2 * c + b + 2 * rq > q:
                        continue
                    out.append((c, b, rp, rq))
    return out


def so_label(c, b, rp, rq, rank):
    if c > 0:
        return "quad"
    if b == rank and rp + rq == 0 and b > 0:
        return "split"
    if b == 0:
        return "compact"
    return "mixed"


def so_seed(p, q, c, b, rp, rq):
    n = p + q
    M = eye(n)
    p_free = list(range(p))
    q_free = list(range(p, n))
    for _ in range(c):
        axes = [p_free.pop(0), p_free.pop(0), q_free.pop(0), q_free.pop(0)]
        embed(M, n, axes, quad_matrix(flip=False))
    for t in range(b):
        boost_block(M, p_free.pop(0), q_free.pop(0), BOOST_PARAMS[t])
    rot_idx = 0
    for _ in range(rp):
        rot_block(M, p_free.pop(0), p_free.pop(0), ROT_PARAMS[rot_idx])
        rot_idx += 1
    for _ in range(rq):
        rot_block(M, q_free.pop(0), q_free.pop(0), ROT_PARAMS[rot_idx])
        rot_idx += 1
    return M


def su_diag_units(units):
    n = len(units) + 1
    M = eye(n)
    prod = ONE
    for i, u in enumerate(units):
        M[i][i] = u
        prod = cmul(prod, u)
    M[n - 1][n - 1] = conj(prod)
    return M


def build_rows():
    u1 = c_(F(3, 5), F(4, 5))
    u2 = c_(F(5, 13), F(12, 13))
    rows = []  # (desc_text, label, expected_factors, seed_matrix)

    # SO+(p,q), 2 <= p+q <= 5, all orderings
    for total in range(2, 6):
        for p in range(total, -1, -1):
            q = total - p
            rank = total // 2
            desc_text = f"SO+({p},{q})"
            labels_seen = set()
            for (c, b, rp, rq) in so_class_tuples(p, q):
                label = so_label(c, b, rp, rq, rank)
                variants = [(label, False)]
                if c > 0 and p == 2 and q == 2:
                    # so(2,2) is not simple: the two quad chiralities are
                    # non-conjugate (no fifth axis to absorb a reflection)
                    variants = [("quad-a", False), ("quad-b", True)]
                for lab, flip in variants:
                    assert lab not in labels_seen, (desc_text, lab)
                    labels_seen.add(lab)
                    M = so_seed(p, q, c, b, rp, rq)
                    if flip:
                        M = eye(total)
                        p_free = list(range(p))
                        q_free = list(range(p, total))
                        axes = [p_free.pop(0), p_free.pop(0),
                                q_free.pop(0), q_free.pop(0)]
                        embed(M, total, axes, quad_matrix(flip=True))
                    expected = (2,) * max(b - 1, 0)
                    expected_sig = (rp + rq + c, b + c, rp + rq + 2 * c)
                    rows.append((desc_text, lab, expected_sig, expected, M))

    # SU(p,q), 2 <= p+q <= 3, all orderings
    su_specs = {
        "SU(2,0)": [("compact", (1, 0, 0), (), su_diag_units([u1]))],
        "SU(0,2)": [("compact", (1, 0, 0), (), su_diag_units([u1]))],
        "SU(3,0)": [("compact", (2, 0, 0), (), su_diag_units([u1, u2]))],
        "SU(0,3)": [("compact", (2, 0, 0), (), su_diag_units([u1, u2]))],
    }
    split11 = eye(2)
    boost_block(split11, 0, 1, BOOST_PARAMS[0])
    su_specs["SU(1,1)"] = [
        ("compact", (1, 0, 0), (), su_diag_units([u1])),
        ("split", (0, 1, 0), (2,), split11),
    ]
    b21 = eye(3)
    boost_block(b21, 0, 2, BOOST_PARAMS[0])
    t21 = [[u1 if i == j == 0 else (cmul(conj(u1), conj(u1)) if i == j == 1 else
            (u1 if i == j == 2 else ZERO)) for j in range(3)] for i in range(3)]
    su_specs["SU(2,1)"] = [
        ("compact", (2, 0, 0), (), su_diag_units([u1, u2])),
        ("noncompact", (1, 1, 0), (), matmul(b21, t21)),
    ]
    b12 = eye(3)
    boost_block(b12, 0, 1, BOOST_PARAMS[0])
    t12 = [[u1 if i == j in (0, 1) else (cmul(conj(u1), conj(u1)) if i == j == 2 else ZERO)
            for j in range(3)] for i in range(3)]
    su_specs["SU(1,2)"] = [
        ("compact", (2, 0, 0), (), su_diag_units([u1, u2])),
        ("noncompact", (1, 1, 0), (), matmul(b12, t12)),
    ]
    for desc_text, classes in su_specs.items():
        for label, sig, expected, M in classes:
            rows.append((desc_text, label, sig, expected, M))

    # Sp(2,R) and PSL(2,R)
    sp_split = [[c_(2), ZERO], [ZERO, c_(F(1, 2))]]
    sp_rot = [[c_(F(3, 5)), c_(F(-4, 5))], [c_(F(4, 5)), c_(F(3, 5))]]
    rows.append(("Sp(2,R)", "split", (0, 1, 0), (2,), sp_split))
    rows.append(("Sp(2,R)", "compact", (1, 0, 1), (), sp_rot))
    psl_split = eye(3)
    boost_block(psl_split, 0, 2, BOOST_PARAMS[0])
    psl_rot = eye(3)
    rot_block(psl_rot, 0, 1, ROT_PARAMS[0])
    rows.append(("PSL(2,R)", "split", (0, 1, 0), (), psl_split))
    rows.append(("PSL(2,R)", "compact", (1, 0, 1), (), psl_rot))
    return rows


def main():
    rows = build_rows()
    lines = [
        "# Cartan class table: one row per conjugacy class of Cartan subgroups.",
        "# descriptor | label | signature (compact,split,pairs) | component invariant factors | seed matrix",
        "# seed entries are exact rationals re:im, rows separated by ';'",
    ]
    for desc_text, label, expected_sig, expected, M in rows:
        desc = groups.parse_descriptor(desc_text)
        seed = to_float(M)
        if np.abs(seed.imag).max() == 0.0:
            seed = seed.real
        res = groups.membership_residual(seed, desc)
        assert res < 1e-12, (desc_text, label, res)
        g = groups.GroupElement(matrix=seed, descriptor=desc)
        partial = cartan.cartan_subalgebra_from_regular(g)
        partial.label = label
        done = cartan.centralizer_components(partial, desc)
        assert done.component_group.torsion == expected, (
            desc_text, label, done.component_group, expected)
        assert done.component_group.free_rank == 0
        assert done.signature == expected_sig, (desc_text, label, done.signature, expected_sig)
        sig = ",".join(str(x) for x in done.signature)
        fac = ",".join(str(x) for x in expected) if expected else "-"
        seed_text = ";".join(
            ",".join(entry_str(e) for e in row) for row in M
        )
        lines.append(f"{desc_text} | {label} | {sig} | {fac} | {seed_text}")
        print(f"ok {desc_text:10s} {label:10s} sig={done.signature} "
              f"components={done.component_group}")
    out = pathlib.Path(__file__).resolve().parents[1] / "src/liepower/data/cartan_classes.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
