"""Sector parameter: the site-averaged projector onto an elementary family.

For a family of N normalized single-site states phi_alpha the sector
parameter is X = (1/N) sum_alpha |phi_alpha><phi_alpha| (x) identity.
Acting on a product state psi_1 (x) ... (x) psi_N it gives exactly

    X |Psi> = (1 - M/N) |Psi>
              + (1/N) sum_{alpha modified} <phi_a|psi_a> |Psi with site a -> phi_a>

where M counts the sites at which psi differs from phi.  The defining
product state is therefore an eigenvector with eigenvalue 1, and

    <Psi| X |Psi> = 1 + (1/N) sum_{alpha modified} (|<phi_a|psi_a>|^2 - 1).

Two sector parameters built on families phi, phi' satisfy an exact 1/N
commutator law: the site-alpha terms commute across sites, so
||[X, X']|| = (1/N^2) sum_alpha ||[P_alpha, P'_alpha]||, which for
site-repeated families is max_alpha ||[P_alpha, P'_alpha]|| / N.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .hilbert import DimensionLimitError, dimension_guard

STATE_NORM_TOL = 1e-12
MODIFIED_SITE_TOL = 1e-12
_COEF_DROP_TOL = 1e-14


def _checked_site_vectors(vectors, what: str) -> tuple[np.ndarray, ...]:
    out = []
    for idx, vec in enumerate(vectors):
        arr = np.ascontiguousarray(vec, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError(f"{what}[{idx}] must be a vector of dimension >= 2")
        if abs(np.linalg.norm(arr) - 1.0) > STATE_NORM_TOL:
            raise ValueError(
                f"{what}[{idx}] must be normalized, |norm - 1| = "
                f"{abs(np.linalg.norm(arr) - 1.0):.3e}"
            )
        out.append(arr)
    if not out:
        raise ValueError(f"{what} needs at least one site")
    return tuple(out)


@dataclass(frozen=True)
class ElementaryFamily:
    """One normalized reference state per site."""

    phi: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "phi", _checked_site_vectors(self.phi, "phi"))

    @property
    def n_sites(self) -> int:
        return len(self.phi)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(v.size for v in self.phi)


@dataclass(frozen=True)
class ProductState:
    """Unentangled state stored as one normalized vector per site."""

    psi: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "psi", _checked_site_vectors(self.psi, "psi"))

    @property
    def n_sites(self) -> int:
        return len(self.psi)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(v.size for v in self.psi)


@dataclass(frozen=True)
class SectorAction:
    """Result of applying a sector parameter: sum of weighted product states."""

    terms: tuple[tuple[complex, ProductState], ...]


def _check_compatible(family: ElementaryFamily, state: ProductState) -> None:
    if family.dims != state.dims:
        raise ValueError(
            f"family sites {family.dims} do not match state sites {state.dims}"
        )


def modified_sites(family: ElementaryFamily, state: ProductState,
                   tol: float = MODIFIED_SITE_TOL) -> tuple[int, ...]:
    """Indices where the state's site vector differs from the family's."""
    _check_compatible(family, state)
    return tuple(
        alpha
        for alpha, (phi, psi) in enumerate(zip(family.phi, state.psi))
        if np.max(np.abs(phi - psi)) > tol
    )


def modified_fraction(family: ElementaryFamily, state: ProductState) -> float:
    """M/N, the fraction of sites carrying a modification."""
    return len(modified_sites(family, state)) / family.n_sites


def sector_expectation(family: ElementaryFamily, state: ProductState) -> float:
    """<Psi| X |Psi> = 1 + (1/N) sum over modified sites of (|<phi|psi>|^2 - 1)."""
    _check_compatible(family, state)
    n = family.n_sites
    total = 1.0
    for alpha in modified_sites(family, state):
        overlap = np.vdot(family.phi[alpha], state.psi[alpha])
        total += (abs(overlap) ** 2 - 1.0) / n
    return float(total)


def sector_apply(family: ElementaryFamily, state: ProductState) -> SectorAction:
    """Exact action of the sector parameter on a product state.

    Returns the passthrough term (1 - M/N) |Psi> followed by one
    single-site replacement term per modified site; terms whose
    coefficient vanishes are dropped.
    """
    _check_compatible(family, state)
    n = family.n_sites
    modified = modified_sites(family, state)
    terms: list[tuple[complex, ProductState]] = []
    passthrough = 1.0 - len(modified) / n
    if abs(passthrough) > _COEF_DROP_TOL:
        terms.append((complex(passthrough), state))
    for alpha in modified:
        coef = np.vdot(family.phi[alpha], state.psi[alpha]) / n
        if abs(coef) <= _COEF_DROP_TOL:
            continue
        replaced = list(state.psi)
        replaced[alpha] = family.phi[alpha]
        terms.append((complex(coef), ProductState(tuple(replaced))))
    return SectorAction(terms=tuple(terms))


def dense_product_state(vectors) -> np.ndarray:
    """Flat amplitude vector of a product state, site 0 fastest-varying."""
    vecs = [np.ascontiguousarray(v, dtype=np.complex128) for v in vectors]
    # kron's second factor varies fastest, so fold from the last site down
    return functools.reduce(np.kron, reversed(vecs))


def dense_action(action: SectorAction) -> np.ndarray:
    """Densify a sector action by expanding and summing its terms."""
    if not action.terms:
        raise ValueError("cannot densify an empty action without site dimensions")
    total = np.zeros(math.prod(action.terms[0][1].dims), dtype=np.complex128)
    for coef, state in action.terms:
        total += coef * dense_product_state(state.psi)
    return total


def _check_operator_guard(dims, guard: int | None) -> None:
    total = math.prod(dims)
    limit = dimension_guard() if guard is None else int(guard)
    if total * total > limit:
        raise DimensionLimitError(
            f"dense operator needs {total}x{total} entries, guard is {limit}"
        )


def _embed_site_operator(dims, site: int, op: np.ndarray) -> np.ndarray:
    mats = [np.eye(d, dtype=np.complex128) for d in dims]
    mats[site] = op
    # site 0 fastest-varying puts it last in the kron chain
    return functools.reduce(np.kron, reversed(mats))


def dense_sector_operator(family: ElementaryFamily, guard: int | None = None) -> np.ndarray:
    """Assemble (1/N) sum_alpha |phi_a><phi_a| (x) identity as a dense matrix."""
    dims = family.dims
    _check_operator_guard(dims, guard)
    total_dim = math.prod(dims)
    out = np.zeros((total_dim, total_dim), dtype=np.complex128)
    for alpha, phi in enumerate(family.phi):
        out += _embed_site_operator(dims, alpha, np.outer(phi, phi.conj()))
    return out / family.n_sites


def commutator_norm(family_a: ElementaryFamily, family_b: ElementaryFamily,
                    method: str = "analytic", guard: int | None = None) -> float:
    """Operator norm of [X_a, X_b] for two sector parameters.

    ``analytic`` sums the per-site commutator norms and divides by N^2;
    it is exact for any families and costs O(N d^3).  ``dense`` builds
    both operators and takes the spectral norm of the commutator.
    """
    if family_a.dims != family_b.dims:
        raise ValueError(
            f"families act on different sites: {family_a.dims} vs {family_b.dims}"
        )
    if method == "analytic":
        n = family_a.n_sites
        total = 0.0
        for phi, chi in zip(family_a.phi, family_b.phi):
            p = np.outer(phi, phi.conj())
            q = np.outer(chi, chi.conj())
            total += float(np.linalg.norm(p @ q - q @ p, 2))
        return total / (n * n)
    if method == "dense":
        op_a = dense_sector_operator(family_a, guard)
        op_b = dense_sector_operator(family_b, guard)
        return float(np.linalg.norm(op_a @ op_b - op_b @ op_a, 2))
    raise ValueError(f"method must be 'analytic' or 'dense', got {method!r}")
