"""Real matrix Lie algebras: bases, brackets, adjoint operators, nilspaces, rank.

An algebra is given by a list of (possibly complex) square matrices that are
linearly independent over the reals; all coefficient vectors are real.
Complex algebras are handled by realification, i.e. the basis simply contains
both X and iX and the dimension doubles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import global_tol

__all__ = [
    "LieAlgebraBasis",
    "AdjointOperator",
    "ConjugationEscapesAlgebra",
    "IllConditioned",
    "nilspace",
    "algebra_rank",
]


class ConjugationEscapesAlgebra(Exception):
    """g X g^-1 left the span of the basis: g does not normalize the algebra."""


class IllConditioned(Exception):
    """Singular values cluster at the rank threshold; the dimension is unreliable."""


def _vectorize(mats: np.ndarray) -> np.ndarray:
    """Stack real and imaginary parts of a batch of matrices into real columns."""
    flat = mats.reshape(mats.shape[0], -1)
    return np.hstack([flat.real, flat.imag]).T


@dataclass(frozen=True)
class AdjointOperator:
    """A dim x dim real matrix for Ad_g or ad_X in a fixed algebra basis."""

    matrix: np.ndarray
    source: str  # "group" | "algebra"


@dataclass(frozen=True)
class LieAlgebraBasis:
    """A finite-dimensional real Lie algebra of matrices with derived structure constants."""

    dim: int
    basis: np.ndarray                 # shape (dim, n, n), real or complex
    structure_constants: np.ndarray   # c[i,j,l], real, [X_i, X_j] = sum_l c[i,j,l] X_l
    name: str = ""
    _expand_pinv: np.ndarray = field(repr=False, default=None)
    _vec_basis: np.ndarray = field(repr=False, default=None)

    @classmethod
    def from_matrices(cls, mats, name: str = "", tol: float = None) -> "LieAlgebraBasis":
        """Build the algebra from basis matrices, computing structure constants.

        Raises ValueError if the matrices are linearly dependent or the span
        is not closed under the commutator to tolerance.
        """
        tol = global_tol() if tol is None else tol
        basis = np.asarray(mats)
        if np.iscomplexobj(basis) and np.abs(basis.imag).max() == 0.0:
            basis = basis.real.copy()
        dim = basis.shape[0]
        V = _vectorize(basis)  # (2n^2 or n^2, dim)
        sv = np.linalg.svd(V, compute_uv=False)
        if sv[-1] < 1e-12 * sv[0]:
            raise ValueError("basis matrices are linearly dependent")
        pinv = np.linalg.pinv(V)
        cs = np.empty((dim, dim, dim))
        scale = max(np.abs(basis).max(), 1.0)
        for i in range(dim):
            for j in range(dim):
                comm = basis[i] @ basis[j] - basis[j] @ basis[i]
                vec = np.concatenate([comm.real.ravel(), comm.imag.ravel()])
                coeff = pinv @ vec
                resid = np.linalg.norm(V @ coeff - vec)
                if resid > 1e-9 * scale * scale:
                    raise ValueError(
                        f"bracket [X_{i}, X_{j}] escapes the span (residual {resid:.2e})"
                    )
                cs[i, j] = coeff
        obj = cls(dim=dim, basis=basis, structure_constants=cs, name=name)
        object.__setattr__(obj, "_expand_pinv", pinv)
        object.__setattr__(obj, "_vec_basis", V)
        return obj

    def matrix_of(self, coeffs: np.ndarray) -> np.ndarray:
        """Realize a coefficient vector as a matrix."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.dim,):
            raise ValueError(f"expected coefficient vector of length {self.dim}")
        return np.tensordot(coeffs, self.basis, axes=(0, 0))

    def coefficients_of(self, mat: np.ndarray, tol: float = None) -> np.ndarray:
        """Expand a matrix in the basis; raises ValueError if it is not in the span."""
        tol = global_tol() if tol is None else tol
        vec = np.concatenate([np.asarray(mat).real.ravel(),
                              np.asarray(mat, dtype=complex).imag.ravel()])
        coeffs = self._expand_pinv @ vec
        resid = np.linalg.norm(self._vec_basis @ coeffs - vec)
        norm = max(np.linalg.norm(vec), 1.0)
        if resid > max(tol, 1e-9) * 100 * norm:
            raise ValueError(f"matrix not in the span of the basis (residual {resid:.2e})")
        return coeffs

    def jacobi_residual(self) -> float:
        """Max residual of the Jacobi identity over all basis triples."""
        c = self.structure_constants
        # sum over cyclic permutations of [X_i,[X_j,X_l]] in coefficient form
        t = np.einsum("jlm,imr->ijlr", c, c)
        cyc = t + np.einsum("ijlr->jlir", t) + np.einsum("ijlr->lijr", t)
        return float(np.abs(cyc).max())

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[x, y] in coefficient form."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise ValueError(f"coefficient vectors must have length {self.dim}")
        return np.einsum("i,j,ijl->l", x, y, self.structure_constants)

    def ad_matrix(self, x: np.ndarray) -> AdjointOperator:
        """ad_x as an operator on coefficients; column j is bracket(x, e_j)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"coefficient vector must have length {self.dim}")
        mat = np.einsum("i,ijl->lj", x, self.structure_constants)
        return AdjointOperator(matrix=mat, source="algebra")

    def Ad_matrix(self, g: np.ndarray, tol: float = None) -> AdjointOperator:
        """Ad_g on coefficients; column j expands g X_j g^-1 in the basis.

        Raises ConjugationEscapesAlgebra when g does not normalize the span.
        """
        tol = global_tol() if tol is None else tol
        g = np.asarray(g)
        try:
            ginv = np.linalg.inv(g)
        except np.linalg.LinAlgError as exc:
            raise IllConditioned(f"group element is numerically singular: {exc}")
        if not np.all(np.isfinite(ginv)) or np.linalg.cond(g) > 1e14:
            raise IllConditioned("group element too ill-conditioned for Ad")
        cols = np.empty((self.dim, self.dim))
        for j in range(self.dim):
            conj = g @ self.basis[j] @ ginv
            vec = np.concatenate([conj.real.ravel(),
                                  np.asarray(conj, dtype=complex).imag.ravel()])
            coeff = self._expand_pinv @ vec
            resid = np.linalg.norm(self._vec_basis @ coeff - vec)
            norm = max(np.linalg.norm(vec), 1.0)
            if resid > max(tol, 1e-9) * 1e3 * norm:
                if np.linalg.cond(g) > 1e8:
                    raise IllConditioned(
                        "conjugation residual is dominated by the conditioning "
                        f"of g (residual {resid:.2e})"
                    )
                raise ConjugationEscapesAlgebra(
                    f"conjugation by g escapes the algebra (residual {resid:.2e})"
                )
            cols[:, j] = coeff
        return AdjointOperator(matrix=cols, source="group")


# Conservative bound on the relative numerical noise of the operators fed to
# nilspace (adjoint construction, expansion least squares, SVD): singular
# values below NOISE_FLOOR_REL * sigma_max carry no reliable digits.
NOISE_FLOOR_REL = 1e-12


def _kernel_rows(M: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal rows spanning ker(M), with a gap check at the rank cut.

    The zero window is tol on the unit scale (the operators here are
    Ad_g - 1 or ad_X for O(1) inputs, so 1 is their natural scale), widened
    to the conditioning noise floor when sigma_max is large: for wildly
    hyperbolic elements the junk singular values of true kernel directions
    scale with sigma_max and a purely relative or purely absolute cutoff
    misclassifies them.
    """
    _, s, Vt = np.linalg.svd(M)
    cut = max(tol, NOISE_FLOOR_REL * s[0]) if len(s) else 0.0
    kept = int(np.sum(s > cut))
    dropped = len(s) - kept
    if kept and dropped:
        gap = s[kept - 1] / max(s[kept], np.finfo(float).tiny)
        if gap < 10.0:
            raise IllConditioned(
                f"singular values cluster at the threshold (gap {gap:.2f})"
            )
        first_dropped = s[kept]
        if first_dropped > 100 * tol:
            # dropped only because the noise floor inflated the cut: the
            # direction cannot be resolved as zero or nonzero, so abstain
            raise IllConditioned(
                f"singular value {first_dropped:.2e} lies inside the noise floor"
            )
    return Vt[kept:]


def nilspace(T: np.ndarray, tol: float = None):
    """Generalized kernel N(T) = ker(T^dim), grown by iterated kernel preimages.

    Returns (dimension, basis) where basis rows span N(T).  Each step takes
    the kernel of (I - P_j) T where P_j projects onto the space found so far,
    i.e. the preimage of the current space; the chain stabilizes at N(T).
    Powering T up front would be one SVD but is numerically wrong past
    dimension ~10: genuinely nonzero singular values fall below any fixed
    relative cutoff once raised to the dim-th power.  Every per-step rank
    decision demands a factor-10 gap between the last kept and first dropped
    singular value; a blurred gap raises IllConditioned rather than
    returning an unreliable dimension.
    """
    tol = global_tol() if tol is None else tol
    T = np.asarray(T)
    if np.iscomplexobj(T):
        if np.abs(T.imag).max() > 1e-12 * max(np.abs(T).max(), 1.0):
            raise ValueError("operator must be real")
        T = T.real
    T = T.astype(float)
    n = T.shape[0]
    if T.shape != (n, n):
        raise ValueError("operator must be square")
    scale = np.linalg.norm(T, 2)
    if scale <= tol:
        # indistinguishable from the zero operator at this tolerance
        return n, np.eye(n)
    basis = np.zeros((0, n))
    for _ in range(n):
        M = T - basis.T @ (basis @ T) if len(basis) else T
        rows = _kernel_rows(M, tol)
        if len(rows) == len(basis):
            break
        basis = rows
    return len(basis), basis


def algebra_rank(L: LieAlgebraBasis, trials: int = 8, rng_seed: int = 0) -> int:
    """Rank of the algebra: min nilspace dimension of ad_X over random Gaussian X.

    The minimum over generic samples equals the rank with probability -> 1 in
    the trial count; nilspace dimension never undershoots the rank, so the
    result is an upper bound certified by repeat agreement.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    best = L.dim
    for _ in range(trials):
        x = rng.standard_normal(L.dim)
        try:
            d, _ = nilspace(L.ad_matrix(x).matrix)
        except IllConditioned:
            continue
        best = min(best, d)
    return best
