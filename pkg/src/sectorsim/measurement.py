"""Photon polarisation measurement with two avalanche registers.

The joint system is one three-level photon site (``PHOTON_VAC`` = 0,
``PHOTON_H`` = 1, ``PHOTON_V`` = 2) followed by the H register's
electrons and then the V register's electrons, in that site order.

The story: a polarised photon h|H> + v|V> meets a polarising splitter;
with amplitude delta it is absorbed and excites the seed electron of the
matching register, after which the cascade runs n generations in
whichever register was seeded.  The two-outcome pointer observable

    P = |H click><H click| - |V click><V click|

is built from the cascaded register against the other register's ground
state.  Because a cascade state is exactly orthogonal to the all-ground
register, the pointer expectation is |delta|^2 (|h|^2 - |v|^2) at every
generation when the ground reference is used; the no_avalanche reference
instead tracks the seeded-but-frozen register overlap, giving the factor
1 - (1-|eta|^2)**(2n) that converges to the same limit as n grows.  Both
storylines are reported side by side and agree only under the ground
reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .avalanche import (
    GROUND,
    AvalancheParams,
    dense_avalanche,
    generation_pairs,
    ground_register,
    overlap_ground,
    overlap_no_avalanche,
    scattering_gate,
)
from .hilbert import (
    DenseState,
    apply_two_site_gate,
    basis_state,
    dimension_guard,
    inner_product,
    tensor_product,
)

PHOTON_VAC = 0
PHOTON_H = 1
PHOTON_V = 2

POLARISATION_NORM_TOL = 1e-12
AMPLITUDE_BOUND_TOL = 1e-12

REFERENCES = ("ground", "no_avalanche")


@dataclass(frozen=True)
class PhotonPolarisation:
    """Normalized photon amplitudes h|H> + v|V>."""

    h: complex
    v: complex

    def __post_init__(self):
        h = complex(self.h)
        v = complex(self.v)
        drift = abs(abs(h) ** 2 + abs(v) ** 2 - 1.0)
        if drift > POLARISATION_NORM_TOL:
            raise ValueError(f"|h|^2 + |v|^2 must be 1, off by {drift:.3e}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class MeasurementSetup:
    """Photon, absorption amplitude, collision amplitude, register sizes."""

    pol: PhotonPolarisation
    delta: complex
    eta: complex
    n_dopants_h: int
    n_dopants_v: int
    n_max: int

    def __post_init__(self):
        delta = complex(self.delta)
        if abs(delta) > 1.0 + AMPLITUDE_BOUND_TOL:
            raise ValueError(f"absorption amplitude needs |delta| <= 1, got {abs(delta)}")
        # reuse the register-side validation for eta / sizes / depth
        params_h = AvalancheParams(self.n_dopants_h, self.eta, self.n_max)
        params_v = AvalancheParams(self.n_dopants_v, self.eta, self.n_max)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "eta", params_h.eta)
        object.__setattr__(self, "n_dopants_h", params_h.n_dopants)
        object.__setattr__(self, "n_dopants_v", params_v.n_dopants)
        object.__setattr__(self, "n_max", params_h.n_max)

    @property
    def dims(self) -> tuple[int, ...]:
        return (3,) + (2,) * self.n_dopants_h + (2,) * self.n_dopants_v

    def register_params(self, port: str) -> AvalancheParams:
        if port == "H":
            return AvalancheParams(self.n_dopants_h, self.eta, self.n_max)
        if port == "V":
            return AvalancheParams(self.n_dopants_v, self.eta, self.n_max)
        raise ValueError(f"port must be 'H' or 'V', got {port!r}")


@dataclass(frozen=True)
class MeasurementRecord:
    """One generation's worth of pointer-observable numbers.

    ``expectation_direct`` is the dense sandwich <Psi_n| P |Psi_n>
    (None when the dense engine was not run); ``expectation_formula`` is
    the closed form |delta|^2 (|h|^2 - |v|^2) (1 - |x_H x_V|^2) with the
    selected reference overlaps; ``limit`` is the n -> infinity value.
    The two expectations coincide only under the ground reference.
    """

    n: int
    m_electrons: int
    expectation_direct: float | None
    expectation_formula: float
    overlap_h: complex
    overlap_v: complex
    limit: float
    reference: str


def _photon_ket(pol: PhotonPolarisation) -> DenseState:
    return DenseState((3,), np.array([0.0, pol.h, pol.v], dtype=np.complex128))


def initial_state(setup: MeasurementSetup, guard: int | None = None) -> DenseState:
    """Photon (x) ground H register (x) ground V register."""
    photon = _photon_ket(setup.pol)
    with_h = tensor_product(photon, ground_register(setup.n_dopants_h, guard), guard)
    return tensor_product(with_h, ground_register(setup.n_dopants_v, guard), guard)


def photoexcite(setup: MeasurementSetup, state: DenseState) -> DenseState:
    """Absorb the photon into the matching register's seed electron.

    |H photon, seed ground> -> sqrt(1-|delta|^2) |same> + delta |vacuum, seed excited>
    and the mirror rule for V; the photon-vacuum sector passes through.
    """
    if state.dims != setup.dims:
        raise ValueError(f"state sites {state.dims} do not match setup {setup.dims}")
    delta = setup.delta
    keep = math.sqrt(max(0.0, 1.0 - abs(delta) ** 2))
    n_axes = len(state.dims)
    h_seed_axis = 1
    v_seed_axis = 1 + setup.n_dopants_h

    def pick(photon_label: int, axis: int, bit: int) -> tuple:
        index: list = [slice(None)] * n_axes
        index[0] = photon_label
        index[axis] = bit
        return tuple(index)

    arr = state.amps.reshape(state.dims, order="F")
    out = arr.copy()
    src_h = arr[pick(PHOTON_H, h_seed_axis, 0)].copy()
    out[pick(PHOTON_H, h_seed_axis, 0)] = keep * src_h
    out[pick(PHOTON_VAC, h_seed_axis, 1)] += delta * src_h
    src_v = arr[pick(PHOTON_V, v_seed_axis, 0)].copy()
    out[pick(PHOTON_V, v_seed_axis, 0)] = keep * src_v
    out[pick(PHOTON_VAC, v_seed_axis, 1)] += delta * src_v
    return DenseState(state.dims, out.reshape(-1, order="F"))


def evolve(setup: MeasurementSetup, n: int, guard: int | None = None) -> DenseState:
    """Dense joint state after photoexcitation and n cascade generations.

    The collision schedule runs in both registers; on branches whose
    register holds no excited seed the gates act as the identity, so this
    equals seeding only the clicked register.
    """
    n = int(n)
    if n < 0 or n > setup.n_max:
        raise ValueError(f"generation {n} outside [0, n_max = {setup.n_max}]")
    state = photoexcite(setup, initial_state(setup, guard))
    h_offset = 1
    v_offset = 1 + setup.n_dopants_h
    for g in range(1, n + 1):
        for exciter, partner in generation_pairs(g):
            state = apply_two_site_gate(
                state, scattering_gate(setup.eta, h_offset + exciter, h_offset + partner)
            )
            state = apply_two_site_gate(
                state, scattering_gate(setup.eta, v_offset + exciter, v_offset + partner)
            )
    return state


def _pointer_ket(setup: MeasurementSetup, n: int, port: str, guard: int | None = None) -> DenseState:
    """|vacuum photon> (x) cascaded register for ``port`` (x) ground other register."""
    photon = basis_state((3,), (PHOTON_VAC,))
    if port == "H":
        reg_h = dense_avalanche(setup.register_params("H"), n, guard)
        reg_v = ground_register(setup.n_dopants_v, guard)
    else:
        reg_h = ground_register(setup.n_dopants_h, guard)
        reg_v = dense_avalanche(setup.register_params("V"), n, guard)
    return tensor_product(tensor_product(photon, reg_h, guard), reg_v, guard)


def _dense_feasible(setup: MeasurementSetup, guard: int | None = None) -> bool:
    limit = dimension_guard() if guard is None else int(guard)
    return 3 * 2 ** (setup.n_dopants_h + setup.n_dopants_v) <= limit


def sector_parameter_expectation(
    setup: MeasurementSetup,
    n: int,
    reference: str = "ground",
    compute_direct: bool | None = None,
    guard: int | None = None,
) -> MeasurementRecord:
    """Pointer expectation after n generations, by formula and (optionally) dense sandwich.

    ``compute_direct=None`` runs the dense sandwich whenever the joint
    dimension fits the guard; True forces it (raising if it cannot fit);
    False skips it, leaving only the O(n) structured evaluation.
    """
    n = int(n)
    if n < 0 or n > setup.n_max:
        raise ValueError(f"generation {n} outside [0, n_max = {setup.n_max}]")
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}, got {reference!r}")
    if reference == "ground":
        x_h = overlap_ground(setup.register_params("H"), n)
        x_v = overlap_ground(setup.register_params("V"), n)
    else:
        x_h = overlap_no_avalanche(setup.register_params("H"), n)
        x_v = overlap_no_avalanche(setup.register_params("V"), n)
    pol = setup.pol
    contrast = abs(setup.delta) ** 2 * (abs(pol.h) ** 2 - abs(pol.v) ** 2)
    formula = contrast * (1.0 - abs(x_h * x_v) ** 2)
    want_direct = _dense_feasible(setup, guard) if compute_direct is None else bool(compute_direct)
    direct = None
    if want_direct:
        psi = evolve(setup, n, guard)
        amp_h = inner_product(_pointer_ket(setup, n, "H", guard), psi)
        amp_v = inner_product(_pointer_ket(setup, n, "V", guard), psi)
        direct = float(abs(amp_h) ** 2 - abs(amp_v) ** 2)
    return MeasurementRecord(
        n=n,
        m_electrons=1 << n,
        expectation_direct=direct,
        expectation_formula=float(formula),
        overlap_h=complex(x_h),
        overlap_v=complex(x_v),
        limit=float(contrast),
        reference=reference,
    )


DENSITY_TERM_LABELS = (
    "no_click_diagonal",
    "h_diagonal",
    "v_diagonal",
    "no_click_h_cross",
    "no_click_v_cross",
    "h_v_cross",
)


def density_terms(setup: MeasurementSetup, n: int, guard: int | None = None) -> dict[str, float]:
    """Modulus of each branch family of the generation-n density operator.

    Each entry is |branch coefficient| times the modulus of the trace of
    the family's bra-ket overlap, computed from dense register states.
    The photon vacuum is orthogonal to any surviving photon, and a
    cascade state is orthogonal to the all-ground register, so all three
    cross families vanish identically.
    """
    n = int(n)
    if n < 0 or n > setup.n_max:
        raise ValueError(f"generation {n} outside [0, n_max = {setup.n_max}]")
    pol = setup.pol
    delta = setup.delta
    keep = math.sqrt(max(0.0, 1.0 - abs(delta) ** 2))
    photon = _photon_ket(pol)
    vacuum = basis_state((3,), (PHOTON_VAC,))
    photon_vac_overlap = inner_product(photon, vacuum)
    cascade_h = dense_avalanche(setup.register_params("H"), n, guard)
    cascade_v = dense_avalanche(setup.register_params("V"), n, guard)
    ground_h = ground_register(setup.n_dopants_h, guard)
    ground_v = ground_register(setup.n_dopants_v, guard)
    ground_cascade_h = inner_product(ground_h, cascade_h)
    ground_cascade_v = inner_product(ground_v, cascade_v)
    return {
        "no_click_diagonal": float(keep ** 2),
        "h_diagonal": float(abs(pol.h * delta) ** 2),
        "v_diagonal": float(abs(pol.v * delta) ** 2),
        "no_click_h_cross": float(
            abs(delta * pol.h) * keep * abs(photon_vac_overlap) * abs(ground_cascade_h)
        ),
        "no_click_v_cross": float(
            abs(delta * pol.v) * keep * abs(photon_vac_overlap) * abs(ground_cascade_v)
        ),
        "h_v_cross": float(
            abs(delta) ** 2 * abs(pol.h * pol.v) * abs(ground_cascade_h) * abs(ground_cascade_v)
        ),
    }


@dataclass(frozen=True)
class QndOutcome:
    """Exact outcome distribution and post-measurement photon states."""

    probabilities: dict[str, float]
    post_states: dict[str, DenseState]


def qnd_premeasure(pol: PhotonPolarisation) -> DenseState:
    """Entangle the photon with a polarisation meter: h|HH> + v|VV>.

    Both sites are two-level (H = 0, V = 1); site 0 is the photon, site 1
    the meter.  The Schmidt coefficients are (|h|, |v|).
    """
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = pol.h  # (H, H)
    amps[3] = pol.v  # (V, V)
    return DenseState((2, 2), amps)


def qnd_outcome(pol: PhotonPolarisation) -> QndOutcome:
    """Reading the meter gives H with |h|^2, V with |v|^2, and leaves the photon definite."""
    return QndOutcome(
        probabilities={"H": float(abs(pol.h) ** 2), "V": float(abs(pol.v) ** 2)},
        post_states={
            "H": basis_state((2,), (0,)),
            "V": basis_state((2,), (1,)),
        },
    )


def qnd_sample(pol: PhotonPolarisation, shots: int, seed: int) -> dict[str, int]:
    """Seeded outcome counts over ``shots`` independent meter readings."""
    shots = int(shots)
    if shots < 1:
        raise ValueError(f"need at least one shot, got {shots}")
    rng = np.random.default_rng(seed)
    n_h = int(np.count_nonzero(rng.random(shots) < abs(pol.h) ** 2))
    return {"H": n_h, "V": shots - n_h}


@dataclass(frozen=True)
class ScaleReport:
    """Device numbers for a biased diode: mean free path, depth, size, work."""

    l_over_a: float
    mean_free_path_m: float
    generations: float
    cascade_electrons: float
    work_ev: float


def physical_scales(bias_voltage_v: float, gap_energy_ev: float, lattice_m: float,
                    n_dopants: int) -> ScaleReport:
    """Scales for a register of ``n_dopants`` electrons a gap ``gap_energy_ev``
    below the conduction band under bias ``bias_voltage_v`` (e = 1, volts
    match electron-volts).

    An electron gains the gap energy over l = a * gap / (U e), each free
    flight multiplies the cascade by 2, so the depth is g = U e / gap and
    the cascade saturates at min(n_dopants, 2**g) electrons; the work
    extracted is gap * that count.
    """
    bias = float(bias_voltage_v)
    gap = float(gap_energy_ev)
    lattice = float(lattice_m)
    n_dopants = int(n_dopants)
    if bias <= 0 or gap <= 0 or lattice <= 0 or n_dopants < 1:
        raise ValueError("bias, gap, lattice constant must be positive and n_dopants >= 1")
    l_over_a = gap / bias
    generations = bias / gap
    cascade = 2.0 ** generations
    return ScaleReport(
        l_over_a=l_over_a,
        mean_free_path_m=lattice * l_over_a,
        generations=generations,
        cascade_electrons=cascade,
        work_ev=gap * min(float(n_dopants), cascade),
    )
