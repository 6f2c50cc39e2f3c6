"""Global numerical tolerance, overridable via the LIEPOWER_TOL env var."""

import os

DEFAULT_TOL = 1e-9


def global_tol() -> float:
    """Base relative tolerance for rank/kernel decisions (default 1e-9)."""
    raw = os.environ.get("LIEPOWER_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise ValueError(f"LIEPOWER_TOL is not a number: {raw!r}") from exc
    if not 0.0 < tol < 1.0:
        raise ValueError(f"LIEPOWER_TOL out of range (0, 1): {tol}")
    return tol
