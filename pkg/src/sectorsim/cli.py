"""Command-line front end: deterministic sweeps written as CSV or JSON.

    simulate <kind> --config <path> [--set key=value ...] [--out <path>] [--format csv|json]

Kinds: avalanche-sweep, measurement-sweep, sector-commutator, qnd-demo,
oracle-check, scales.  The config file holds ``key = value`` lines;
``--set`` flags win over file entries.  Exit codes: 0 success, 2 bad
configuration, 3 dimension guard exceeded, 4 engine disagreement,
5 output I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from .avalanche import (
    AvalancheParams,
    dense_avalanche,
    dense_ground_overlap,
    dense_no_avalanche_overlap,
    overlap_ground,
    overlap_no_avalanche,
    structured_amplitude,
    structured_avalanche,
)
from .hilbert import DimensionLimitError
from .measurement import (
    MeasurementSetup,
    PhotonPolarisation,
    physical_scales,
    qnd_outcome,
    qnd_sample,
    sector_parameter_expectation,
)
from .sector import (
    ElementaryFamily,
    ProductState,
    commutator_norm,
    dense_action,
    dense_product_state,
    dense_sector_operator,
    sector_apply,
    sector_expectation,
)

KINDS = (
    "avalanche-sweep",
    "measurement-sweep",
    "sector-commutator",
    "qnd-demo",
    "oracle-check",
    "scales",
)

ENGINES = ("structured", "dense", "both")
REFERENCES = ("ground", "no_avalanche")
DISAGREEMENT_TOL = 1e-10


class ConfigError(ValueError):
    """Bad key, value, or combination in the experiment configuration."""


class EngineDisagreementError(RuntimeError):
    """The two engines disagreed beyond tolerance in ``both`` mode."""


@dataclass
class ExperimentConfig:
    kind: str = "oracle-check"
    eta_re: float = 0.6
    eta_im: float = 0.0
    delta_re: float = 1.0
    delta_im: float = 0.0
    h_re: float = 1.0
    h_im: float = 0.0
    v_re: float = 0.0
    v_im: float = 0.0
    A: int = 8
    A_H: int = 4
    A_V: int = 4
    n_max: int = 2
    N: int = 5
    engine: str = "structured"
    reference: str = "ground"
    seed: int = 12345
    shots: int = 100000
    U: float = 2.0
    Delta: float = 0.5
    a: float = 1e-06
    output_path: str = ""

    @property
    def eta(self) -> complex:
        return complex(self.eta_re, self.eta_im)

    @property
    def delta(self) -> complex:
        return complex(self.delta_re, self.delta_im)

    @property
    def h(self) -> complex:
        return complex(self.h_re, self.h_im)

    @property
    def v(self) -> complex:
        return complex(self.v_re, self.v_im)


_INT_KEYS = {"A", "A_H", "A_V", "n_max", "N", "seed", "shots"}
_FLOAT_KEYS = {
    "eta_re", "eta_im", "delta_re", "delta_im",
    "h_re", "h_im", "v_re", "v_im", "U", "Delta", "a",
}
_STR_KEYS = {"engine", "reference", "output_path"}


def parse_config_file(path: str) -> dict[str, str]:
    """Read ``key = value`` lines; '#' starts a comment, blanks ignored."""
    pairs: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
                key, value = line.split("=", 1)
                pairs[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return pairs


def build_config(kind: str, pairs: dict[str, str]) -> ExperimentConfig:
    """Typed config from string pairs; unknown keys and bad values are rejected."""
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    cfg = ExperimentConfig(kind=kind)
    known = {f.name for f in fields(ExperimentConfig)} - {"kind"}
    for key, value in pairs.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            if key in _INT_KEYS:
                setattr(cfg, key, int(value))
            elif key in _FLOAT_KEYS:
                setattr(cfg, key, float(value))
            else:
                setattr(cfg, key, value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from exc
    if cfg.engine not in ENGINES:
        raise ConfigError(f"engine must be one of {ENGINES}, got {cfg.engine!r}")
    if cfg.reference not in REFERENCES:
        raise ConfigError(f"reference must be one of {REFERENCES}, got {cfg.reference!r}")
    return cfg


def _config_echo(cfg: ExperimentConfig) -> dict:
    return {f.name: getattr(cfg, f.name) for f in fields(ExperimentConfig)}


def _nan() -> float:
    return float("nan")


def _run_avalanche_sweep(cfg: ExperimentConfig) -> tuple[list[dict], float]:
    params = AvalancheParams(cfg.A, cfg.eta, cfg.n_max)
    records = []
    worst = 0.0
    for n in range(cfg.n_max + 1):
        if cfg.engine == "structured":
            ovl = overlap_no_avalanche(params, n)
        else:
            ovl = dense_no_avalanche_overlap(params, n)
        row = {
            "n": n,
            "M": 1 << n,
            "overlap_re": ovl.real,
            "overlap_im": ovl.imag,
            "overlap_abs": abs(ovl),
        }
        if cfg.engine == "both":
            diff = abs(ovl - overlap_no_avalanche(params, n))
            row["abs_diff"] = diff
            worst = max(worst, diff)
        records.append(row)
    return records, worst


def _run_measurement_sweep(cfg: ExperimentConfig) -> tuple[list[dict], float]:
    setup = MeasurementSetup(
        pol=PhotonPolarisation(cfg.h, cfg.v),
        delta=cfg.delta,
        eta=cfg.eta,
        n_dopants_h=cfg.A_H,
        n_dopants_v=cfg.A_V,
        n_max=cfg.n_max,
    )
    want_direct = cfg.engine in ("dense", "both")
    records = []
    worst = 0.0
    for n in range(cfg.n_max + 1):
        rec = sector_parameter_expectation(
            setup, n, reference=cfg.reference, compute_direct=want_direct
        )
        direct = rec.expectation_direct if rec.expectation_direct is not None else _nan()
        diff = (
            abs(direct - rec.expectation_formula)
            if rec.expectation_direct is not None
            else _nan()
        )
        records.append({
            "n": n,
            "M": rec.m_electrons,
            "overlap_abs": abs(rec.overlap_h * rec.overlap_v),
            "expectation_direct": direct,
            "expectation_formula": rec.expectation_formula,
            "limit": rec.limit,
            "abs_diff": diff,
        })
        if cfg.engine == "both":
            worst = max(worst, diff)
    return records, worst


def _run_sector_commutator(cfg: ExperimentConfig) -> tuple[list[dict], float]:
    if cfg.N < 2:
        raise ConfigError(f"sector-commutator needs N >= 2, got {cfg.N}")
    base = np.array([1.0, 0.0], dtype=np.complex128)
    other = np.array([cfg.h, cfg.v], dtype=np.complex128)
    records = []
    worst = 0.0
    for n_sites in range(2, cfg.N + 1):
        family_a = ElementaryFamily(tuple(base for _ in range(n_sites)))
        family_b = ElementaryFamily(tuple(other for _ in range(n_sites)))
        analytic = commutator_norm(family_a, family_b, method="analytic")
        dense = commutator_norm(family_a, family_b, method="dense")
        row = {"N": n_sites, "analytic_norm": analytic, "dense_norm": dense}
        if cfg.engine == "both":
            diff = abs(analytic - dense)
            row["abs_diff"] = diff
            worst = max(worst, diff)
        records.append(row)
    return records, worst


def _run_qnd_demo(cfg: ExperimentConfig) -> tuple[list[dict], float]:
    pol = PhotonPolarisation(cfg.h, cfg.v)
    outcome = qnd_outcome(pol)
    counts = qnd_sample(pol, cfg.shots, cfg.seed)
    records = []
    for label in ("H", "V"):
        records.append({
            "outcome": label,
            "probability": outcome.probabilities[label],
            "sample_frequency": counts[label] / cfg.shots,
            "shots": cfg.shots,
        })
    return records, 0.0


def _run_scales(cfg: ExperimentConfig) -> tuple[list[dict], float]:
    report = physical_scales(cfg.U, cfg.Delta, cfg.a, cfg.A)
    return [{
        "bias_voltage_v": cfg.U,
        "gap_energy_ev": cfg.Delta,
        "lattice_m": cfg.a,
        "n_dopants": cfg.A,
        "l_over_a": report.l_over_a,
        "mean_free_path_m": report.mean_free_path_m,
        "generations": report.generations,
        "cascade_electrons": report.cascade_electrons,
        "work_ev": report.work_ev,
    }], 0.0


def _run_oracle_check(cfg: ExperimentConfig) -> tuple[list[dict], float]:
    records = []
    worst_fail = 0.0

    # cascade: structured amplitudes and overlaps against the dense engine
    worst = 0.0
    cases = 0
    for n_dopants in (4, 6, 8):
        for n in range(4):
            if (1 << n) > n_dopants:
                continue
            for eta in (0.0, 0.3, 0.6, 1.0):
                params = AvalancheParams(n_dopants, eta, n)
                dense = dense_avalanche(params, n)
                st = structured_avalanche(params, n)
                for idx in range(1 << n_dopants):
                    bits = [(idx >> k) & 1 for k in range(n_dopants)]
                    worst = max(worst, abs(dense.amps[idx] - structured_amplitude(st, bits)))
                    cases += 1
                worst = max(worst, abs(overlap_no_avalanche(params, n)
                                       - dense_no_avalanche_overlap(params, n)))
                worst = max(worst, abs(overlap_ground(params, n)
                                       - dense_ground_overlap(params, n)))
    records.append(_check_row("cascade_engines", cases, worst, 1e-12))

    # sector algebra against the dense operator
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    cases = 0
    for n_sites in range(2, 7):
        family = ElementaryFamily(tuple(_random_qubit(rng) for _ in range(n_sites)))
        psi = list(family.phi)
        for alpha in range(0, n_sites, 2):
            psi[alpha] = _random_qubit(rng)
        state = ProductState(tuple(psi))
        op = dense_sector_operator(family)
        vec = dense_product_state(state.psi)
        worst = max(worst, abs(sector_expectation(family, state)
                               - float(np.real(np.vdot(vec, op @ vec)))))
        worst = max(worst, float(np.max(np.abs(dense_action(sector_apply(family, state))
                                               - op @ vec))))
        defining = dense_product_state(family.phi)
        worst = max(worst, float(np.max(np.abs(op @ defining - defining))))
        cases += 1
    records.append(_check_row("sector_algebra", cases, worst, 1e-12))

    # commutator 1/N law, analytic against dense
    worst = 0.0
    t = 1.0 / math.sqrt(2.0)
    tilted = np.array([t, t], dtype=np.complex128)
    base = np.array([1.0, 0.0], dtype=np.complex128)
    reference_product = None
    for n_sites in (2, 3, 4, 5):
        family_a = ElementaryFamily(tuple(base for _ in range(n_sites)))
        family_b = ElementaryFamily(tuple(tilted for _ in range(n_sites)))
        dense = commutator_norm(family_a, family_b, method="dense")
        analytic = commutator_norm(family_a, family_b, method="analytic")
        worst = max(worst, abs(dense - analytic))
        if reference_product is None:
            reference_product = dense * n_sites
        worst = max(worst, abs(dense * n_sites - reference_product))
    records.append(_check_row("commutator_decay", 4, worst, 1e-10))

    # measurement: dense sandwich against the closed form (ground reference)
    worst = 0.0
    cases = 0
    for delta in (0.6, 1.0):
        for h_sq in (0.3, 1.0):
            pol = PhotonPolarisation(math.sqrt(h_sq), math.sqrt(1.0 - h_sq))
            setup = MeasurementSetup(pol=pol, delta=delta, eta=0.6,
                                     n_dopants_h=4, n_dopants_v=4, n_max=2)
            for n in range(3):
                rec = sector_parameter_expectation(setup, n, compute_direct=True)
                worst = max(worst, abs(rec.expectation_direct - rec.expectation_formula))
                cases += 1
    records.append(_check_row("measurement_pointer", cases, worst, 1e-10))

    for row in records:
        if row["status"] == "fail":
            worst_fail = max(worst_fail, row["max_abs_error"])
    return records, worst_fail


def _check_row(name: str, cases: int, worst: float, tol: float) -> dict:
    return {
        "check": name,
        "cases": cases,
        "max_abs_error": worst,
        "tolerance": tol,
        "status": "ok" if worst <= tol else "fail",
    }


def _random_qubit(rng: np.random.Generator) -> np.ndarray:
    vec = rng.normal(size=2) + 1j * rng.normal(size=2)
    return vec / np.linalg.norm(vec)


_RUNNERS = {
    "avalanche-sweep": _run_avalanche_sweep,
    "measurement-sweep": _run_measurement_sweep,
    "sector-commutator": _run_sector_commutator,
    "qnd-demo": _run_qnd_demo,
    "oracle-check": _run_oracle_check,
    "scales": _run_scales,
}


def run_experiment(cfg: ExperimentConfig) -> tuple[list[dict], float]:
    """Produce the sweep's records and the worst engine disagreement."""
    return _RUNNERS[cfg.kind](cfg)


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _render_csv(records: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(records[0].keys())
    for record in records:
        writer.writerow(_format_cell(v) for v in record.values())
    return buffer.getvalue()


def _render_json(records: list[dict], cfg: ExperimentConfig) -> str:
    def clean(value):
        if isinstance(value, float) and math.isnan(value):
            return None
        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, np.floating):
            return float(value)
        return value

    payload = {
        "config": _config_echo(cfg),
        "records": [{k: clean(v) for k, v in rec.items()} for rec in records],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def emit(records: list[dict], fmt: str, path: str, cfg: ExperimentConfig) -> None:
    """Serialise records deterministically (floats at 17 significant digits)."""
    if not records:
        raise ConfigError("experiment produced no records")
    if fmt == "csv":
        text = _render_csv(records)
    elif fmt == "json":
        text = _render_json(records, cfg)
    else:
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")
    if not path or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Run a deterministic sweep and write CSV or JSON records.",
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--config", help="key = value text file")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config entry (repeatable; wins over the file)")
    parser.add_argument("--out", help="output path ('-' or omitted: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        pairs: dict[str, str] = {}
        if args.config:
            pairs.update(parse_config_file(args.config))
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set needs KEY=VALUE, got {item!r}")
            key, value = item.split("=", 1)
            pairs[key.strip()] = value.strip()
        cfg = build_config(args.kind, pairs)
        records, disagreement = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DimensionLimitError as exc:
        print(f"dimension guard: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_path = args.out if args.out is not None else cfg.output_path
    try:
        emit(records, args.format, out_path, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 5
    if cfg.kind == "oracle-check" and any(r["status"] == "fail" for r in records):
        print("engine disagreement: one or more oracle checks failed", file=sys.stderr)
        return 4
    if cfg.engine == "both" and disagreement > DISAGREEMENT_TOL:
        print(
            f"engine disagreement: max |difference| = {disagreement:.3e} "
            f"exceeds {DISAGREEMENT_TOL:.1e}",
            file=sys.stderr,
        )
        return 4
    return 0


def console_main() -> None:
    raise SystemExit(main())
