"""Dense state vectors over small ordered collections of finite sites.

Conventions used throughout the package:

* Site 0 is the fastest-varying index of the flat amplitude vector, so a
  basis assignment (b_0, b_1, ..., b_{S-1}) lives at flat index
  sum_s b_s * prod_{s'<s} d_{s'}.
* Amplitudes are complex double precision.
* Two-site gates store their matrix in the product basis of the targeted
  pair with the first site of the pair fastest-varying, and must be
  unitary to within ``UNITARITY_TOL``.

Dense objects are capped at ``dimension_guard()`` amplitudes (2**26 by
default, overridable through the ``SECTORSIM_DIM_GUARD`` environment
variable) so an accidental large request fails fast instead of paging.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

DEFAULT_DIM_GUARD = 1 << 26
UNITARITY_TOL = 1e-12
NORM_TOL = 1e-10


class DimensionLimitError(ValueError):
    """A dense object would exceed the amplitude-count guard."""


def dimension_guard() -> int:
    """Active amplitude-count cap; SECTORSIM_DIM_GUARD overrides the default."""
    raw = os.environ.get("SECTORSIM_DIM_GUARD", "").strip()
    if not raw:
        return DEFAULT_DIM_GUARD
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"SECTORSIM_DIM_GUARD is not an integer: {raw!r}") from exc
    if value < 2:
        raise ValueError(f"SECTORSIM_DIM_GUARD must be >= 2, got {value}")
    return value


def _checked_dims(dims, guard: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("a state needs at least one site")
    if any(d < 2 for d in dims):
        raise ValueError(f"every site dimension must be >= 2, got {dims}")
    total = math.prod(dims)
    limit = dimension_guard() if guard is None else int(guard)
    if total > limit:
        raise DimensionLimitError(
            f"requested {total} amplitudes over {len(dims)} sites, guard is {limit}"
        )
    return dims


@dataclass(frozen=True)
class DenseState:
    """Flat complex amplitude vector plus the ordered site dimensions."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = _checked_dims(self.dims)
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if amps.shape != (math.prod(dims),):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, dims {dims} need "
                f"({math.prod(dims)},)"
            )
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True)
class TwoSiteGate:
    """Unitary acting on an ordered pair of sites.

    ``matrix`` is (d_i*d_j, d_i*d_j) in the pair's product basis with
    ``sites[0]`` fastest-varying; column index encodes the input.
    """

    sites: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        i, j = (int(s) for s in self.sites)
        if i < 0 or j < 0:
            raise ValueError(f"gate sites must be non-negative, got ({i}, {j})")
        if i == j:
            raise ValueError(f"gate needs two distinct sites, got ({i}, {j})")
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"gate matrix must be square, got shape {mat.shape}")
        deviation = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
        if deviation > UNITARITY_TOL:
            raise ValueError(f"gate matrix is not unitary (max deviation {deviation:.3e})")
        object.__setattr__(self, "sites", (i, j))
        object.__setattr__(self, "matrix", mat)


def flat_index(dims, labels) -> int:
    """Flat position of a basis assignment, site 0 fastest-varying."""
    dims = tuple(int(d) for d in dims)
    labels = tuple(int(b) for b in labels)
    if len(labels) != len(dims):
        raise ValueError(f"{len(dims)} sites but {len(labels)} labels")
    idx = 0
    stride = 1
    for b, d in zip(labels, dims):
        if not 0 <= b < d:
            raise ValueError(f"label {b} out of range for dimension {d}")
        idx += b * stride
        stride *= d
    return idx


def basis_state(dims, labels, guard: int | None = None) -> DenseState:
    """Computational basis state with the given per-site labels."""
    dims = _checked_dims(dims, guard)
    amps = np.zeros(math.prod(dims), dtype=np.complex128)
    amps[flat_index(dims, labels)] = 1.0
    return DenseState(dims, amps)


def tensor_product(a: DenseState, b: DenseState, guard: int | None = None) -> DenseState:
    """Concatenate site lists; ``a``'s sites come first (fastest-varying)."""
    dims = _checked_dims(a.dims + b.dims, guard)
    # kron's second factor is fastest-varying, matching site order (a, b)
    return DenseState(dims, np.kron(b.amps, a.amps))


def inner_product(a: DenseState, b: DenseState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dims != b.dims:
        raise ValueError(f"site mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amps, b.amps))


def apply_two_site_gate(state: DenseState, gate: TwoSiteGate) -> DenseState:
    """Apply a two-site unitary, leaving all other sites untouched."""
    i, j = gate.sites
    n = state.n_sites
    if i >= n or j >= n:
        raise ValueError(f"gate targets sites ({i}, {j}) but state has {n} sites")
    di, dj = state.dims[i], state.dims[j]
    if gate.matrix.shape[0] != di * dj:
        raise ValueError(
            f"gate matrix is {gate.matrix.shape[0]}x{gate.matrix.shape[0]}, "
            f"target sites have dimensions {di}x{dj}"
        )
    arr = state.amps.reshape(state.dims, order="F")
    g4 = gate.matrix.reshape((di, dj, di, dj), order="F")
    out = np.tensordot(g4, arr, axes=([2, 3], [i, j]))
    out = np.moveaxis(out, (0, 1), (i, j))
    return DenseState(state.dims, out.reshape(-1, order="F"))
