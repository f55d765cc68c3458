"""Iteration stopping rules shared by the Taylor and Picard integrators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from strapdown.polynomials import ChebPoly

DEFAULT_TOL = 1e-14
DEFAULT_MAX_ITER = 50


@dataclass(frozen=True)
class StopRule:
    """When to stop iterating.

    ``kind`` is ``"hot"``, ``"dpc"`` or ``"maxiter"``. A tolerance rule is read
    by each family through its native test: the Taylor engine checks the
    highest-order term, the Picard solvers check the coefficient discrepancy
    between successive iterates. ``"maxiter"`` runs exactly ``max_iter``
    iterations (Taylor: series order ``max_iter``, capped at ``m_T``).
    """

    kind: str = "dpc"
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    strict: bool = False

    def __post_init__(self):
        if self.kind not in ("hot", "dpc", "maxiter"):
            raise ValueError(f"unknown stop rule kind {self.kind!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.kind != "maxiter" and not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")

    @property
    def fixed(self) -> bool:
        return self.kind == "maxiter"

    @classmethod
    def parse(cls, text: str) -> StopRule:
        """Parse ``hot:1e-15``, ``dpc:1e-14`` or ``maxiter:7``."""
        kind, _, value = text.strip().partition(":")
        kind = kind.strip().lower()
        if kind == "maxiter":
            return cls(kind="maxiter", max_iter=int(value))
        return cls(kind=kind, tol=float(value) if value else DEFAULT_TOL)

    def label(self) -> str:
        if self.fixed:
            return f"maxiter:{self.max_iter}"
        return f"{self.kind}:{self.tol:g}"


def hot_check(poly, m_t: int, tol: float, span: float | None = None) -> bool:
    """True when the degree-``m_t`` term is negligible over the interval.

    Monomial polynomials need the interval length ``span``: the term's size is
    ``|b_m| span**m``. For a Chebyshev series ``|F_m| <= 1`` so ``|b_m|`` is used.
    """
    if poly.coeffs.shape[0] == 0:
        raise ValueError("empty polynomial")
    if m_t > poly.degree:
        return True
    mag = float(np.linalg.norm(poly.coeffs[m_t]))
    if not isinstance(poly, ChebPoly):
        if span is None:
            raise ValueError("span is required for a monomial polynomial")
        mag *= abs(span) ** m_t
    return mag < tol
