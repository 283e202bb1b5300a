"""Avalanche cascade inside a single detector register.

A register holds ``n_dopants`` two-level electrons (``GROUND`` = 0,
``EXCITED`` = 1).  A cascade starts from one seed electron in the excited
state; at each generation every touched electron scatters a fresh
ground-state partner through the two-site collision gate, so generation n
has touched exactly 2**n electrons.  The schedule pairs electron k with
electron k + 2**(n-1).

The collision gate with amplitude eta acts as

    |excited, ground>  ->  |excited> (x) (sqrt(1-|eta|^2)|ground> + eta|excited>)
    |ground,  ground>  ->  unchanged

These two rows fix the physics; the remaining two columns are completed
to the nearest unitary that leaves them intact, namely the rotation
|ground, excited> -> itself and
|excited, excited> -> sqrt(1-|eta|^2)|excited,excited> - conj(eta)|excited,ground>.
The naive completion (mapping |ground,excited> onto |ground,ground>)
collides with the ground row and is not unitary for any eta; cascade
dynamics never exercise the completed columns because every collision
partner starts in the ground state.

Besides the dense state-vector engine there is an exact factorised
engine: after n generations the register state splits into entangled
blocks Z_0 .. Z_n plus an untouched remainder,

    Z_0(i)     = |excited_i>
    Z_l(slots) = sqrt(1-|eta|^2) * |all ground>
                 + eta * Z_0 (x) Z_1 (x) ... (x) Z_{l-1}   (slots split
                   positionally: 1, 1, 2, 4, ..., 2**(l-2) slots each)

which gives O(n) evaluation of the cascade/no-cascade overlap
|<seed, all ground | state_n>| = (1 - |eta|^2)**(n/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import DenseState, TwoSiteGate, apply_two_site_gate, basis_state, flat_index

GROUND = 0
EXCITED = 1

ETA_TOL = 1e-12


def _check_eta(eta: complex) -> complex:
    eta = complex(eta)
    if abs(eta) > 1.0 + ETA_TOL:
        raise ValueError(f"collision amplitude needs |eta| <= 1, got |eta| = {abs(eta)}")
    return eta


def _survival(eta: complex) -> float:
    """sqrt(1 - |eta|^2), clamped against roundoff at the boundary."""
    return math.sqrt(max(0.0, 1.0 - abs(eta) ** 2))


@dataclass(frozen=True)
class AvalancheParams:
    """Register size, collision amplitude, and deepest generation."""

    n_dopants: int
    eta: complex
    n_max: int

    def __post_init__(self):
        n_dopants = int(self.n_dopants)
        n_max = int(self.n_max)
        eta = _check_eta(self.eta)
        if n_dopants < 1:
            raise ValueError(f"need at least one dopant electron, got {n_dopants}")
        if n_max < 0:
            raise ValueError(f"generation count must be >= 0, got {n_max}")
        if (1 << n_max) > n_dopants:
            raise ValueError(
                f"generation {n_max} touches {1 << n_max} electrons but the "
                f"register only has {n_dopants}"
            )
        object.__setattr__(self, "n_dopants", n_dopants)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "n_max", n_max)


def _check_generation(params: AvalancheParams, n: int) -> int:
    n = int(n)
    if n < 0:
        raise ValueError(f"generation must be >= 0, got {n}")
    if n > params.n_max:
        raise ValueError(f"generation {n} exceeds configured n_max = {params.n_max}")
    return n


def scattering_matrix(eta: complex) -> np.ndarray:
    """4x4 collision unitary in the (exciter, partner) product basis."""
    eta = _check_eta(eta)
    s = _survival(eta)
    mat = np.zeros((4, 4), dtype=np.complex128)
    # basis order (exciter fastest): gg=0, eg=1, ge=2, ee=3
    mat[0, 0] = 1.0
    mat[1, 1] = s
    mat[3, 1] = eta
    mat[2, 2] = 1.0
    mat[1, 3] = -np.conj(eta)
    mat[3, 3] = s
    return mat


def scattering_gate(eta: complex, exciter: int = 0, partner: int = 1) -> TwoSiteGate:
    """Collision gate bound to an (exciter, partner) site pair."""
    return TwoSiteGate((exciter, partner), scattering_matrix(eta))


def generation_pairs(n: int) -> list[tuple[int, int]]:
    """Collision pairs fired at generation n >= 1: (k, k + 2**(n-1))."""
    n = int(n)
    if n < 1:
        raise ValueError(f"collisions start at generation 1, got {n}")
    half = 1 << (n - 1)
    return [(k, k + half) for k in range(half)]


def ground_register(n_dopants: int, guard: int | None = None) -> DenseState:
    """All-ground register state."""
    return basis_state((2,) * int(n_dopants), (GROUND,) * int(n_dopants), guard)


def seeded_register(n_dopants: int, guard: int | None = None) -> DenseState:
    """Register with the seed electron (site 0) excited, rest ground."""
    labels = (EXCITED,) + (GROUND,) * (int(n_dopants) - 1)
    return basis_state((2,) * int(n_dopants), labels, guard)


def dense_avalanche(params: AvalancheParams, n: int, guard: int | None = None) -> DenseState:
    """State vector after n cascade generations from the seeded register."""
    n = _check_generation(params, n)
    state = seeded_register(params.n_dopants, guard)
    for g in range(1, n + 1):
        for exciter, partner in generation_pairs(g):
            state = apply_two_site_gate(state, scattering_gate(params.eta, exciter, partner))
    return state


@dataclass(frozen=True)
class ZBlockPartition:
    """Which electrons belong to which entangled block after n generations.

    ``levels[l]`` is the ascending index list of block Z_l; electrons at
    and beyond 2**n form the untouched ``remainder``.
    """

    generation: int
    levels: tuple[tuple[int, ...], ...]
    remainder: range


@dataclass(frozen=True)
class StructuredAvalancheState:
    """Factorised cascade state: parameters plus its block partition."""

    params: AvalancheParams
    generation: int
    partition: ZBlockPartition


def _canonical_levels(n: int) -> list[np.ndarray]:
    """Per-block electron indices in construction (slot) order.

    Slot order matters for amplitude evaluation: block Z_l splits
    positionally into sub-blocks Z_0 | Z_1 | ... | Z_{l-1}.  Each
    generation with offset d sends block Z_l with slots (o_1, ..., o_m)
    to Z_{l+1} with slots (o_1, o_1+d, o_2, o_2+d, ...), while the seed
    block Z_0 spawns a fresh Z_1 at its partner index.
    """
    levels = [np.zeros(1, dtype=np.int64)]
    for g in range(1, n + 1):
        d = 1 << (g - 1)
        new = [levels[0], np.array([d], dtype=np.int64)]
        for old in levels[1:]:
            inter = np.empty(2 * old.size, dtype=np.int64)
            inter[0::2] = old
            inter[1::2] = old + d
            new.append(inter)
        levels = new
    return levels


def structured_avalanche(params: AvalancheParams, n: int) -> StructuredAvalancheState:
    """Factorised representation of the cascade after n generations."""
    n = _check_generation(params, n)
    levels = tuple(tuple(sorted(lv.tolist())) for lv in _canonical_levels(n))
    partition = ZBlockPartition(
        generation=n,
        levels=levels,
        remainder=range(1 << n, params.n_dopants),
    )
    return StructuredAvalancheState(params=params, generation=n, partition=partition)


def _z_amplitude(level: int, slots: np.ndarray, bits, s: float, eta: complex) -> complex:
    if level == 0:
        return 1.0 + 0j if bits[slots[0]] else 0j
    value = complex(s) if not any(bits[q] for q in slots) else 0j
    prod = _z_amplitude(0, slots[0:1], bits, s, eta)
    for m in range(1, level):
        if prod == 0:
            break
        prod *= _z_amplitude(m, slots[1 << (m - 1) : 1 << m], bits, s, eta)
    return value + eta * prod


def structured_amplitude(state: StructuredAvalancheState, labels) -> complex:
    """Amplitude of a full-register basis configuration, no dense vector.

    ``labels`` holds one 0/1 entry per dopant electron.  Exact for every
    configuration: agrees with the dense engine amplitude by amplitude.
    """
    params = state.params
    bits = np.asarray(labels, dtype=np.int64)
    if bits.shape != (params.n_dopants,):
        raise ValueError(
            f"need {params.n_dopants} electron labels, got shape {bits.shape}"
        )
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("electron labels must be 0 (ground) or 1 (excited)")
    n = state.generation
    if np.any(bits[1 << n :]):
        return 0j
    s = _survival(params.eta)
    amp = 1.0 + 0j
    for level, slots in enumerate(_canonical_levels(n)):
        amp *= _z_amplitude(level, slots, bits, s, params.eta)
        if amp == 0:
            break
    return complex(amp)


def block_ground_overlap(level: int, eta: complex) -> complex:
    """<all ground | Z_level> from the block recursion.

    Level 0 is the seed block, orthogonal to the ground state, so its
    overlap is 0; that zero propagates through every higher level's
    product term, leaving sqrt(1 - |eta|^2) for all levels >= 1.
    """
    level = int(level)
    if level < 0:
        raise ValueError(f"block level must be >= 0, got {level}")
    eta = _check_eta(eta)
    s = _survival(eta)
    overlaps: list[complex] = [0j]
    for l in range(1, level + 1):
        prod = 1.0 + 0j
        for m in range(l):
            prod *= overlaps[m]
        overlaps.append(s + eta * prod)
    return complex(overlaps[level])


def overlap_no_avalanche(params: AvalancheParams, n: int) -> complex:
    """<seed excited, all others ground | state_n>, evaluated in O(n).

    The seed block contributes 1 and each of the n higher blocks
    contributes sqrt(1 - |eta|^2), so the closed form is
    (1 - |eta|^2)**(n/2).  The dense engine reproduces this exponent.
    """
    n = _check_generation(params, n)
    result = 1.0 + 0j
    for level in range(1, n + 1):
        result *= block_ground_overlap(level, params.eta)
    return complex(result)


def overlap_ground(params: AvalancheParams, n: int) -> complex:
    """<all ground | state_n>; exactly 0 because the seed stays excited."""
    _check_generation(params, n)
    return 0j


def dense_no_avalanche_overlap(params: AvalancheParams, n: int, guard: int | None = None) -> complex:
    """Dense-engine twin of :func:`overlap_no_avalanche` (oracle route)."""
    state = dense_avalanche(params, n, guard)
    labels = (EXCITED,) + (GROUND,) * (params.n_dopants - 1)
    return complex(state.amps[flat_index(state.dims, labels)])


def dense_ground_overlap(params: AvalancheParams, n: int, guard: int | None = None) -> complex:
    """Dense-engine twin of :func:`overlap_ground` (oracle route)."""
    state = dense_avalanche(params, n, guard)
    return complex(state.amps[0])
