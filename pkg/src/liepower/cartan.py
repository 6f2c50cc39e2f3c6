"""Cartan subalgebras and subgroups of the catalog matrix groups.

A Cartan subalgebra is realized as the nilspace of Ad_g - 1 at a regular
element g; the attached Cartan subgroup is the centralizer of that
subalgebra, whose block structure over the eigenlines of a generic
subalgebra element is 1x1 real or 2x2 rotation-scaling throughout the
catalog.  Connected components are enumerated by sign patterns on the
eigenlines, filtered by group membership, and merged when the pattern is
reachable by exponentiating a subalgebra element.
"""

from __future__ import annotations

import functools
import importlib.resources
import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
import scipy.linalg

from . import groups, regularity
from .abelian import FGAbelian
from .groups import GroupDescriptor, GroupElement, UnsupportedFamily

__all__ = [
    "CartanClass",
    "NotRegular",
    "NonAbelianNilspace",
    "UnsupportedShape",
    "ComponentConsistencyError",
    "cartan_subalgebra_from_regular",
    "centralizer_components",
    "pk_image_components",
    "enumerate_cartan_classes",
    "cover_cartan_classes",
]

GENERIC_TRIES = 12
CANDIDATE_MEMBERSHIP_TOL = 1e-6
CONNECTIVITY_RESIDUAL_TOL = 1e-6
CONNECTIVITY_BOX = 3


class NotRegular(Exception):
    """The element is not regular, so its nilspace is not a Cartan subalgebra."""


class NonAbelianNilspace(Exception):
    """The computed nilspace fails to be abelian to tolerance: numerical failure."""


class UnsupportedShape(Exception):
    """The centralizer has a block of size >= 3, outside catalog guarantees."""


class ComponentConsistencyError(Exception):
    """Internal self-check failure in component labeling; aborts loudly."""


@dataclass(eq=False)
class CartanClass:
    """One conjugacy class of Cartan subgroups.

    signature = (compact_dim, split_dim, complex_pairs): dimensions of the
    purely-imaginary and purely-real eigenvalue directions of the subalgebra
    and the number of complex-conjugate eigenvalue pairs of a generic
    subalgebra element in the defining representation.
    """

    descriptor: GroupDescriptor
    label: str
    source: str                      # "computed" | "catalog"
    subalgebra_basis: np.ndarray = None    # (r, n, n) matrices spanning the subalgebra
    signature: tuple = None
    component_group: FGAbelian = None
    component_reps: np.ndarray = None      # (#components, n, n), identity first
    rep_labels: tuple = None               # sign strings over the sign-invariant lines
    _eigvecs: np.ndarray = None
    _eigvecs_inv: np.ndarray = None
    _zeta: np.ndarray = None               # (r, n) eigenvalues of the basis on the lines
    _sign_lines: tuple = None

    @property
    def is_symbolic(self) -> bool:
        return self.subalgebra_basis is None

    @property
    def rank_dim(self) -> int:
        return len(self.subalgebra_basis)

    def component_label_of(self, mat: np.ndarray) -> str:
        """Sign-invariant label of the component containing a centralizer element."""
        D = self._eigvecs_inv @ mat @ self._eigvecs
        off = D - np.diag(np.diag(D))
        scale = max(np.abs(np.diag(D)).max(), 1.0)
        if np.abs(off).max() > 1e-6 * scale:
            raise ComponentConsistencyError(
                "element does not centralize the subalgebra (off-diagonal residual "
                f"{np.abs(off).max():.2e})"
            )
        mu = np.diag(D)
        chars = []
        for i in self._sign_lines:
            if abs(mu[i].imag) > 1e-6 * (abs(mu[i]) + 1e-30):
                raise ComponentConsistencyError(
                    f"non-real scalar {mu[i]:.3e} on a sign-invariant line"
                )
            chars.append("+" if mu[i].real > 0 else "-")
        return "".join(chars)

    def random_element(self, rng, component: int = 0, spread: float = 0.6) -> np.ndarray:
        """A random element of the Cartan subgroup in the given component."""
        z = spread * rng.standard_normal(self.rank_dim)
        x = np.tensordot(z, self.subalgebra_basis, axes=(0, 0))
        return self.component_reps[component] @ scipy.linalg.expm(x)


def cartan_subalgebra_from_regular(g: GroupElement) -> CartanClass:
    """The Cartan subalgebra through a regular element: nilspace of Ad_g - 1.

    Returns a partial class (subalgebra only); completion happens in
    centralizer_components.  The span is verified abelian.
    """
    L = groups.descriptor_algebra(g.descriptor)
    report = regularity.is_regular(g)
    if not report.is_regular:
        raise NotRegular(
            f"nilspace dimension {report.nilspace_dim} exceeds rank {report.rank}"
        )
    from .liealg import nilspace

    _, rows = nilspace(L.Ad_matrix(g.matrix).matrix - np.eye(L.dim))
    mats = np.array([L.matrix_of(row) for row in rows])
    scale = max(np.abs(mats).max(), 1.0)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            if np.abs(comm).max() > 1e-7 * scale * scale:
                raise NonAbelianNilspace(
                    f"bracket residual {np.abs(comm).max():.2e} between basis "
                    f"elements {i} and {j}"
                )
    return CartanClass(
        descriptor=g.descriptor,
        label="computed",
        source="computed",
        subalgebra_basis=mats,
    )


def _generic_element(S: np.ndarray):
    """A generic combination of the subalgebra basis with separated eigenvalues."""
    r, n, _ = S.shape
    for seed in range(GENERIC_TRIES):
        rng = np.random.default_rng(1000 + seed)
        coeff = rng.standard_normal(r)
        X0 = np.tensordot(coeff, S, axes=(0, 0))
        w, V = np.linalg.eig(X0)
        scale = max(np.abs(w).max(), 1.0)
        gaps = [
            abs(w[i] - w[j]) for i in range(n) for j in range(i + 1, n)
        ]
        if gaps and min(gaps) < 1e-4 * scale:
            continue
        # imaginary parts must be decisively zero or nonzero
        if any(1e-9 * scale < abs(im) < 1e-5 * scale for im in w.imag):
            continue
        return X0, w, V
    raise UnsupportedShape(
        "no generic subalgebra element with simple spectrum was found; "
        "the centralizer has blocks of size >= 2 beyond rotation-scaling"
    )


def _line_structure(w: np.ndarray, complex_entries: bool):
    """Partition eigenlines into singles and conjugate pairs (real groups)."""
    n = len(w)
    scale = max(np.abs(w).max(), 1.0)
    if complex_entries:
        return [i for i in range(n)], []
    singles = [i for i in range(n) if abs(w[i].imag) <= 1e-9 * scale]
    used = set(singles)
    pairs = []
    for i in range(n):
        if i in used or w[i].imag < 0:
            continue
        partner = None
        for j in range(n):
            if j != i and j not in used and abs(w[j] - np.conj(w[i])) < 1e-6 * scale:
                partner = j
                break
        if partner is None:
            raise UnsupportedShape("unpaired complex eigenvalue of a real matrix")
        pairs.append((i, partner))
        used.update((i, partner))
    return singles, pairs


def _real_jordan_columns(V: np.ndarray, singles, pairs):
    """Real basis columns per line-group: one per single, two per pair."""
    cols = []
    layout = []  # (kind, column indices)
    for i in singles:
        v = V[:, i]
        phase = v[np.argmax(np.abs(v))]
        v = v * np.conj(phase) / abs(phase)
        if np.abs(v.imag).max() > 1e-6:
            raise UnsupportedShape("eigenvector of a real eigenvalue is not real")
        layout.append(("single", [len(cols)]))
        cols.append(v.real)
    for i, j in pairs:
        v = V[:, i]
        layout.append(("pair", [len(cols), len(cols) + 1]))
        cols.append(np.sqrt(2) * v.real)
        cols.append(np.sqrt(2) * v.imag)
    B = np.array(cols).T
    return B, layout


def _connected_to_identity(zeta: np.ndarray, delta: np.ndarray) -> bool:
    """Whether the -1 pattern delta is exp-reachable inside the subalgebra.

    Solves eigenvalues(Z) = i*pi*(delta + 2m) for Z in the subalgebra over an
    integer offset box; catalog eigenvalue lattices keep the needed offsets
    within the box.
    """
    r, n = zeta.shape
    A = np.vstack([zeta.T.real, zeta.T.imag])  # (2n, r)
    pinvA = np.linalg.pinv(A)
    ms = np.array(
        list(itertools.product(range(-CONNECTIVITY_BOX, CONNECTIVITY_BOX + 1), repeat=n))
    ).T  # (n, M)
    rhs = np.zeros((2 * n, ms.shape[1]))
    rhs[n:, :] = np.pi * (delta[:, None] + 2 * ms)
    resid = A @ (pinvA @ rhs) - rhs
    best = np.abs(resid).max(axis=0)
    return bool((best < CONNECTIVITY_RESIDUAL_TOL).any())


def centralizer_components(c: CartanClass, G: GroupDescriptor) -> CartanClass:
    """Complete a partial class: centralizer block structure, components, labels."""
    if not G.is_matrix:
        raise UnsupportedFamily("component analysis needs a matrix descriptor")
    S = c.subalgebra_basis
    r, n, _ = S.shape
    X0, w, V = _generic_element(S)
    Vinv = np.linalg.inv(V)

    # eigenvalues of each basis element on the eigenlines of X0
    zeta = np.empty((r, n), dtype=complex)
    for j, Sj in enumerate(S):
        D = Vinv @ Sj @ V
        off = np.abs(D - np.diag(np.diag(D))).max()
        if off > 1e-6 * max(np.abs(D).max(), 1.0):
            raise NonAbelianNilspace(
                f"subalgebra element {j} is not diagonal on the joint eigenlines "
                f"(residual {off:.2e})"
            )
        zeta[j] = np.diag(D)

    complex_entries = G.is_complex_entries
    if complex_entries:
        singles, pairs = list(range(n)), []
        B, Binv = V, Vinv
    else:
        singles, pairs = _line_structure(w, complex_entries=False)
        B, _ = _real_jordan_columns(V, singles, pairs)
        Binv = np.linalg.inv(B)

    # enumerate sign patterns per line-group and filter by group membership
    groups_of_lines = [[i] for i in singles] + [list(p) for p in pairs]
    candidates = {}
    for signs in itertools.product((1, -1), repeat=len(groups_of_lines)):
        line_sign = np.ones(n)
        for s, lines in zip(signs, groups_of_lines):
            for i in lines:
                line_sign[i] = s
        if complex_entries:
            tau = (V * line_sign) @ Vinv
        else:
            diag = []
            for s, lines in zip(signs, groups_of_lines):
                diag.extend([s] * len(lines))
            tau = (B * np.array(diag)) @ Binv
            tau = tau.real
        if groups.membership_residual(tau, G) < CANDIDATE_MEMBERSHIP_TOL:
            candidates[signs] = tau

    # connectivity: which surviving patterns are exp-reachable
    connected = set()
    for signs in candidates:
        delta = np.zeros(n)
        for s, lines in zip(signs, groups_of_lines):
            if s < 0:
                for i in lines:
                    delta[i] = 1.0
        if _connected_to_identity(zeta, delta):
            connected.add(signs)
    identity_pattern = tuple([1] * len(groups_of_lines))
    if identity_pattern not in connected:
        raise ComponentConsistencyError("identity pattern not recognized as connected")

    def product_pattern(a, b):
        return tuple(x * y for x, y in zip(a, b))

    for a in connected:
        for b in connected:
            if product_pattern(a, b) in candidates and product_pattern(a, b) not in connected:
                raise ComponentConsistencyError(
                    "exp-reachable patterns do not form a subgroup; "
                    "widen the connectivity search box"
                )

    # coset decomposition of the candidate pattern group by the connected ones
    remaining = sorted(candidates, key=lambda p: (p.count(-1), p))
    rep_patterns = []
    covered = set()
    for p in remaining:
        if p in covered:
            continue
        rep_patterns.append(p)
        covered.update(product_pattern(p, s) for s in connected)
    if len(candidates) % len(connected) != 0 or covered != set(candidates):
        raise ComponentConsistencyError("coset decomposition of sign patterns failed")
    ncomp = len(rep_patterns)
    j2 = ncomp.bit_length() - 1
    if 2**j2 != ncomp:
        raise ComponentConsistencyError(f"component count {ncomp} is not a power of 2")
    component_group = FGAbelian(0, (2,) * j2)

    reps = [np.eye(n, dtype=complex if complex_entries else float)]
    for p in rep_patterns:
        if p == identity_pattern:
            continue
        reps.append(candidates[p])
    reps = np.array(reps)

    # sign-invariant lines: where every subalgebra eigenvalue is real
    zscale = max(np.abs(zeta).max(), 1.0)
    sign_lines = tuple(
        i for i in singles if np.abs(zeta[:, i].imag).max() < 1e-7 * zscale
    )

    # signature from the eigenvalue image of the subalgebra
    def nullity(Mreal):
        s = np.linalg.svd(Mreal, compute_uv=False)
        scale = max(s[0], 1.0) if len(s) else 1.0
        return int(np.sum(s < 1e-9 * scale)) + max(0, Mreal.shape[1] - len(s))

    split_dim = nullity(zeta.T.imag)    # directions with all-real eigenvalues
    compact_dim = nullity(zeta.T.real)  # directions with all-imaginary eigenvalues
    signature = (compact_dim, split_dim, len(pairs))

    completed = replace(
        c,
        signature=signature,
        component_group=component_group,
        component_reps=reps,
    )
    completed._eigvecs = V
    completed._eigvecs_inv = Vinv
    completed._zeta = zeta
    completed._sign_lines = sign_lines
    labels = tuple(completed.component_label_of(rep) for rep in reps)
    if len(set(labels)) != len(labels):
        raise ComponentConsistencyError(
            f"component representatives share a sign-invariant label: {labels}"
        )
    completed.rep_labels = labels
    return completed


def pk_image_components(c: CartanClass, k: int, samples: int = 25, rng_seed: int = 7):
    """Set of component labels hit by the k-th power map on the Cartan subgroup.

    The image of multiplication-by-k on the component group is a union of
    components; the returned boolean records the sampled self-check that
    k-th powers land only in the predicted components.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if c.component_reps is None:
        raise ValueError("class has no component representatives")
    if not c.component_group.is_finite:
        raise ValueError("component group must be finite")

    def label_power(label, k):
        return "".join("+" if (ch == "-" and k % 2 == 0) or ch == "+" else "-"
                       for ch in label)

    image = frozenset(label_power(lab, k) for lab in c.rep_labels)
    rng = np.random.default_rng(rng_seed)
    for idx, lab in enumerate(c.rep_labels):
        predicted = label_power(lab, k)
        for _ in range(samples):
            g = c.random_element(rng, component=idx)
            gk = np.linalg.matrix_power(g, k)
            got = c.component_label_of(gk)
            if got != predicted or got not in image:
                raise ComponentConsistencyError(
                    f"sampled {k}-th power landed in component {got!r}, "
                    f"predicted {predicted!r}: component labeling bug"
                )
    return image, True


# ---------------------------------------------------------------------------
# catalog class enumeration
# ---------------------------------------------------------------------------

def _rot(c, s):
    return np.array([[c, -s], [s, c]])


def _sl_seed(n: int, m: int) -> np.ndarray:
    """Seed with m rotation-scaling blocks and n-2m distinct positive reals."""
    units = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13))]
    reals = [Fraction(2), Fraction(3), Fraction(5), Fraction(7)]
    nreal = n - 2 * m
    if nreal == 0:
        moduli = [Fraction(1)] if m == 1 else [Fraction(2), Fraction(1, 2)]
    else:
        moduli = [Fraction(2), Fraction(1, 2)][:m]
    blocks = []
    det = Fraction(1)
    for t in range(m):
        r = moduli[t]
        c, s = units[t]
        blocks.append(np.array([[float(r * c), float(-r * s)], [float(r * s), float(r * c)]]))
        det *= r * r
    for t in range(nreal - 1):
        blocks.append(np.array([[float(reals[t])]]))
        det *= reals[t]
    if nreal >= 1:
        blocks.append(np.array([[float(1 / det)]]))
    out = np.zeros((n, n))
    pos = 0
    for b in blocks:
        d = b.shape[0]
        out[pos:pos + d, pos:pos + d] = b
        pos += d
    return out


def _sl_expected_factors(n: int, m: int) -> tuple:
    return (2,) * max(n - 2 * m - 1, 0)


def _frac(text: str) -> float:
    return float(Fraction(text))


def _parse_entry(entry: str) -> complex:
    re_part, im_part = entry.split(":")
    return complex(_frac(re_part), _frac(im_part))


@functools.lru_cache(maxsize=1)
def _catalog_table():
    """Rows of the shipped Cartan class table, keyed by descriptor text."""
    text = (
        importlib.resources.files("liepower")
        .joinpath("data/cartan_classes.txt")
        .read_text(encoding="utf-8")
    )
    table = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        desc_text, label, sig, factors, seed = [f.strip() for f in line.split("|")]
        signature = tuple(int(x) for x in sig.split(","))
        invariant = () if factors == "-" else tuple(int(x) for x in factors.split(","))
        rows = []
        for row in seed.split(";"):
            rows.append([_parse_entry(e) for e in row.split(",")])
        mat = np.array(rows)
        if np.abs(mat.imag).max() == 0.0:
            mat = mat.real
        table.setdefault(desc_text, []).append((label, signature, invariant, mat))
    return table


def _complete_from_seed(desc, label, expected_sig, expected_factors, seed):
    res = groups.membership_residual(seed, desc)
    if res > 1e-9:
        raise ComponentConsistencyError(
            f"table seed for {desc.render()}/{label} violates membership ({res:.2e})"
        )
    g = GroupElement(matrix=seed, descriptor=desc)
    partial = cartan_subalgebra_from_regular(g)
    partial.label = label
    completed = centralizer_components(partial, desc)
    completed.source = "catalog"
    if expected_factors is not None and completed.component_group.torsion != tuple(expected_factors):
        raise ComponentConsistencyError(
            f"{desc.render()}/{label}: computed component group "
            f"{completed.component_group} does not match the table "
            f"{FGAbelian(0, tuple(expected_factors))}"
        )
    if expected_sig is not None and completed.signature != tuple(expected_sig):
        raise ComponentConsistencyError(
            f"{desc.render()}/{label}: computed signature {completed.signature} "
            f"does not match the table {tuple(expected_sig)}"
        )
    return completed


@functools.lru_cache(maxsize=None)
def enumerate_cartan_classes(G: GroupDescriptor):
    """One completed representative per conjugacy class of Cartan subgroups."""
    if not G.is_matrix:
        raise UnsupportedFamily(
            "cover descriptors have no matrix Cartan realization; "
            "use cover_cartan_classes"
        )
    out = []
    if G.family == "SL_R":
        n = G.params[0]
        for m in range(n // 2 + 1):
            label = "split" if m == 0 else f"m={m}"
            seed = _sl_seed(n, m)
            out.append(
                _complete_from_seed(G, label, None, _sl_expected_factors(n, m), seed)
            )
    elif G.family == "SL_C":
        n = G.params[0]
        seed = _sl_seed(n, 0).astype(complex)
        out.append(_complete_from_seed(G, "torus", None, (), seed))
    else:
        table = _catalog_table()
        key = G.render()
        if key not in table:
            raise UnsupportedFamily(f"no Cartan class table for {key}")
        for label, signature, invariant, seed in table[key]:
            out.append(_complete_from_seed(G, label, signature, invariant, seed))
    return tuple(out)


def cover_cartan_classes(desc: GroupDescriptor):
    """Symbolic Cartan classes of covers/quotients of PSL(2,R).

    The split Cartan subgroup of the base is simply connected, so its
    preimage in a cover picks up the full deck group as component group; the
    compact one unwinds to a connected line or circle.
    """
    if not desc.is_cover:
        raise UnsupportedFamily("expected a cover descriptor")
    split = CartanClass(
        descriptor=desc,
        label="split-cover",
        source="catalog",
        signature=(0, 1, 0),
        component_group=desc.center_mod_kernel,
    )
    compact = CartanClass(
        descriptor=desc,
        label="compact-cover",
        source="catalog",
        signature=(1, 0, 1),
        component_group=FGAbelian(),
    )
    return (split, compact)
