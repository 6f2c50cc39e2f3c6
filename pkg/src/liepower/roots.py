"""Certified k-th roots in matrix groups and the Monte Carlo density verifier.

Any k-th root of a matrix with distinct eigenvalues commutes with it and is
therefore diagonal in the same eigenbasis, so root existence reduces to an
exhaustive search over eigenvalue root assignments: per-line real roots on
real eigenlines, conjugate pairs of roots on conjugate eigenline pairs.  A
NoRoot outcome is a decision for such inputs, not a heuristic; anything
numerically marginal comes back Inconclusive instead of wrong.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import groups
from .groups import GroupDescriptor, GroupElement

__all__ = [
    "RootCertificate",
    "MonteCarloReport",
    "kth_roots",
    "monte_carlo_density",
    "root_search",
]

ROOTS_FOUND = "roots"
NO_ROOT = "no-root"
INCONCLUSIVE = "inconclusive"

DISTINCT_EIG_TOL = 1e-7
ROOT_RESIDUAL_TOL = 1e-8
MEMBERSHIP_TOL = 1e-8
GRAY_ZONE = 1e-5
DET_PREFILTER = 0.25


@dataclass(frozen=True)
class RootCertificate:
    outcome: str                      # "roots" | "no-root" | "inconclusive"
    roots: tuple = ()                 # matrices h with h^k = g, in the group
    obstruction: str = ""             # for no-root: the eigenvalue conflict
    reason: str = ""                  # for inconclusive

    @property
    def found(self) -> bool:
        return self.outcome == ROOTS_FOUND


@dataclass(frozen=True)
class MonteCarloReport:
    group: str
    k: int
    samples: int
    certified_rootless_fraction: float
    root_found_fraction: float
    inconclusive_fraction: float
    rootless_count: int
    root_count: int
    inconclusive_count: int


def _newton_step(L, desc, target, h, k):
    """One Newton update h <- exp(d) h for h^k = target, d in the algebra."""
    hk = np.linalg.matrix_power(h, k)
    R = target - hk
    powers = [np.linalg.matrix_power(h, i) for i in range(k + 1)]
    cols = []
    for b in L.basis:
        M = sum(powers[i] @ b @ powers[k - i] for i in range(k))
        cols.append(np.concatenate([M.real.ravel(), M.imag.ravel()]))
    A = np.array(cols).T
    rhs = np.concatenate([R.real.ravel(), R.imag.ravel()])
    coeff, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    step = np.linalg.norm(coeff)
    if step > 3.0:
        coeff *= 3.0 / step
    h = scipy.linalg.expm(L.matrix_of(coeff)) @ h
    if not desc.is_complex_entries:
        h = h.real
    return h


def _project_to_group(desc, h):
    """First-order projection onto the group: exact det scaling, form correction."""
    n = desc.matrix_size
    det = np.linalg.det(h)
    if abs(det) > 0.5:
        h = h / det ** (1.0 / n)
    J = groups.defining_form(desc)
    if J is not None:
        Jinv = np.linalg.inv(J)
        if desc.family == "SU":
            E = h.conj().T @ J @ h - J
        else:
            E = h.T @ J @ h - J
        h = h @ (np.eye(n) - 0.5 * (Jinv @ E))
    if not desc.is_complex_entries:
        h = h.real
    return h


def _polish_root(desc, target, h, k, iters=3):
    """Drive an approximate root to machine precision without leaving the group.

    Newton steps move along the algebra, so membership is preserved to first
    order; alternating with the group projection contracts both residuals.
    """
    L = groups.descriptor_algebra(desc)
    gnorm = max(np.linalg.norm(target), 1.0)
    for _ in range(iters):
        h = _project_to_group(desc, h)
        if np.linalg.norm(np.linalg.matrix_power(h, k) - target) / gnorm < 1e-13:
            continue
        h = _newton_step(L, desc, target, h, k)
    return _project_to_group(desc, h)


def _real_kth_roots(lam: float, k: int):
    mag = abs(lam) ** (1.0 / k)
    if lam > 0:
        return [mag, -mag] if k % 2 == 0 else [mag]
    return [] if k % 2 == 0 else [-mag]


def _complex_kth_roots(lam: complex, k: int):
    mag = abs(lam) ** (1.0 / k)
    base = np.angle(lam) / k
    return [mag * np.exp(1j * (base + 2.0 * np.pi * j / k)) for j in range(k)]


def kth_roots(g: GroupElement, k: int) -> RootCertificate:
    """All k-th roots of g within its group, or a proof none exists.

    Certified only for regular semisimple g (distinct eigenvalues of the
    defining matrix); anything else returns Inconclusive.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    desc = g.descriptor
    mat = np.asarray(g.matrix)
    n = desc.matrix_size
    w, V = np.linalg.eig(mat)
    scale = max(np.abs(w).max(), 1.0)
    gaps = [abs(w[i] - w[j]) for i in range(n) for j in range(i + 1, n)]
    if gaps and min(gaps) < DISTINCT_EIG_TOL * scale:
        return RootCertificate(
            outcome=INCONCLUSIVE,
            reason=f"not regular semisimple: eigenvalue gap {min(gaps):.2e}",
        )
    if np.abs(w).min() < 1e-9 * np.linalg.norm(mat, 2):
        # eigenvalues this far below the matrix scale carry no reliable
        # digits, and a certificate must never be wrong
        return RootCertificate(
            outcome=INCONCLUSIVE,
            reason="eigenvalue dynamic range exceeds reliable resolution",
        )
    if np.linalg.cond(V) > 1e8:
        return RootCertificate(
            outcome=INCONCLUSIVE, reason="ill-conditioned eigenbasis"
        )
    Vinv = np.linalg.inv(V)
    complex_entries = desc.is_complex_entries

    # per line-group root choices; each choice records (per-line roots, det factor)
    line_groups = []       # list of lists of line indices
    group_choices = []     # list of lists of per-line value tuples
    blocked = None
    if complex_entries:
        for i in range(n):
            line_groups.append([i])
            group_choices.append([(mu,) for mu in _complex_kth_roots(w[i], k)])
    else:
        singles = [i for i in range(n) if abs(w[i].imag) <= 1e-9 * scale]
        used = set(singles)
        pairs = []
        for i in range(n):
            if i in used or w[i].imag < 0:
                continue
            partner = next(
                (j for j in range(n)
                 if j not in used and j != i
                 and abs(w[j] - np.conj(w[i])) < 1e-6 * scale),
                None,
            )
            if partner is None:
                return RootCertificate(
                    outcome=INCONCLUSIVE, reason="unpaired complex eigenvalue"
                )
            pairs.append((i, partner))
            used.update((i, partner))
        for i in singles:
            roots = _real_kth_roots(w[i].real, k)
            if not roots:
                blocked = (
                    f"negative real eigenvalue {w[i].real:.6g} admits no real "
                    f"{k}-th root (k even), and a complex root pair cannot "
                    f"span two distinct real eigenlines"
                )
            line_groups.append([i])
            group_choices.append([(mu,) for mu in roots])
        for i, j in pairs:
            line_groups.append([i, j])
            group_choices.append(
                [(mu, np.conj(mu)) for mu in _complex_kth_roots(w[i], k)]
            )
    if any(len(ch) == 0 for ch in group_choices):
        return RootCertificate(outcome=NO_ROOT, obstruction=blocked or
                               "an eigenline admits no root assignment")

    # determinant prefilter over the full assignment grid
    det_factors = [np.array([np.prod(choice) for choice in ch])
                   for ch in group_choices]
    total = det_factors[0]
    for f in det_factors[1:]:
        total = np.multiply.outer(total, f)
    flat = np.abs(total.ravel() - 1.0)
    candidate_idx = np.nonzero(flat < DET_PREFILTER)[0]

    shape = tuple(len(ch) for ch in group_choices)
    roots_found = []
    marginal = False
    gnorm = max(np.linalg.norm(mat), 1.0)
    for flat_idx in candidate_idx:
        sel = np.unravel_index(flat_idx, shape)
        mu = np.empty(n, dtype=complex)
        for lines, choices, c in zip(line_groups, group_choices, sel):
            for line, value in zip(lines, choices[c]):
                mu[line] = value
        h = V @ (mu[:, None] * Vinv)
        if not complex_entries:
            if np.abs(h.imag).max() > 1e-7 * max(np.abs(h).max(), 1.0):
                continue
            h = h.real
        if np.linalg.norm(np.linalg.matrix_power(h, k) - mat) / gnorm < 1e-3:
            h = _polish_root(desc, mat, h, k)
        res_pow = np.linalg.norm(np.linalg.matrix_power(h, k) - mat) / gnorm
        res_mem = groups.membership_residual(h, desc)
        if res_pow < ROOT_RESIDUAL_TOL and res_mem < MEMBERSHIP_TOL:
            if all(np.linalg.norm(h - r) > 1e-6 * gnorm for r in roots_found):
                roots_found.append(h)
        elif res_pow < GRAY_ZONE and res_mem < GRAY_ZONE:
            marginal = True
    if roots_found:
        return RootCertificate(outcome=ROOTS_FOUND, roots=tuple(roots_found))
    if marginal:
        return RootCertificate(
            outcome=INCONCLUSIVE,
            reason="candidate assignments sit in the numerical gray zone",
        )
    if blocked is not None:
        return RootCertificate(outcome=NO_ROOT, obstruction=blocked)
    eig_text = ", ".join(f"{z:.6g}" for z in w)
    return RootCertificate(
        outcome=NO_ROOT,
        obstruction=(
            f"no {k}-th root assignment of the eigenvalues [{eig_text}] "
            f"satisfies realness and the group constraints"
        ),
    )


def _sample_regular_semisimple(desc: GroupDescriptor, seed_tuple) -> GroupElement:
    """Sample until the defining matrix has decisively distinct eigenvalues."""
    for attempt in range(64):
        g = groups.sample_element(desc, seed_tuple + (attempt,))
        w = np.linalg.eigvals(g.matrix)
        scale = max(np.abs(w).max(), 1.0)
        n = len(w)
        gaps = [abs(w[i] - w[j]) for i in range(n) for j in range(i + 1, n)]
        if not gaps or min(gaps) > 10 * DISTINCT_EIG_TOL * scale:
            return g
    raise RuntimeError("could not sample a regular semisimple element")


def monte_carlo_density(G: GroupDescriptor, k: int, samples: int, rng_seed) -> MonteCarloReport:
    """Fraction of regular semisimple samples with/without certified k-th roots.

    Contract with the decision engine: a Dense verdict forces the certified
    rootless fraction to zero (a single NoRoot certificate is a disproof); a
    NotDense verdict forces it positive once the sample size is adequate,
    because the rootless components carry positive sampling mass.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not G.is_matrix:
        raise groups.NoMatrixModel(f"{G.render()} has no matrix model")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rootless = found = inconclusive = 0
    if k == 1:
        return MonteCarloReport(
            group=G.render(), k=1, samples=samples,
            certified_rootless_fraction=0.0, root_found_fraction=1.0,
            inconclusive_fraction=0.0, rootless_count=0,
            root_count=samples, inconclusive_count=0,
        )
    for i in range(samples):
        g = _sample_regular_semisimple(G, (rng_seed, i))
        cert = kth_roots(g, k)
        if cert.outcome == ROOTS_FOUND:
            found += 1
        elif cert.outcome == NO_ROOT:
            rootless += 1
        else:
            inconclusive += 1
    return MonteCarloReport(
        group=G.render(), k=k, samples=samples,
        certified_rootless_fraction=rootless / samples,
        root_found_fraction=found / samples,
        inconclusive_fraction=inconclusive / samples,
        rootless_count=rootless, root_count=found,
        inconclusive_count=inconclusive,
    )


def root_search(g: GroupElement, k: int, restarts: int = 50, rng_seed=0,
                iters: int = 20) -> np.ndarray | None:
    """Multiplicative perturbation-and-project root search.

    From random group starting points, Newton-iterate h <- exp(d) h with d
    solving the linearized h^k = g in the algebra.  Used to hunt for
    counterexamples to NoRoot certificates; returns a verified root or None.
    """
    desc = g.descriptor
    L = groups.descriptor_algebra(desc)
    mat = np.asarray(g.matrix)
    gnorm = max(np.linalg.norm(mat), 1.0)
    n = desc.matrix_size
    for trial in range(restarts):
        rng = np.random.default_rng((rng_seed, trial))
        h = scipy.linalg.expm(L.matrix_of(rng.standard_normal(L.dim)))
        h = h @ scipy.linalg.expm(L.matrix_of(rng.standard_normal(L.dim)))
        for _ in range(iters):
            if np.linalg.norm(np.linalg.matrix_power(h, k) - mat) / gnorm < ROOT_RESIDUAL_TOL:
                break
            h = _newton_step(L, desc, mat, h, k)
        if np.linalg.norm(np.linalg.matrix_power(h, k) - mat) / gnorm < 1e-4:
            h = _polish_root(desc, mat, h, k)
        hk = np.linalg.matrix_power(h, k)
        if (np.linalg.norm(mat - hk) / gnorm < ROOT_RESIDUAL_TOL
                and groups.membership_residual(h, desc) < MEMBERSHIP_TOL):
            return h
    return None
