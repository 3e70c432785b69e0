"""Ensemble scans, boundary curves, extremal searches, thresholds and Table 1."""

from __future__ import annotations

import csv
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .classify import COLUMNS as CLASS_COLUMNS
from .classify import DEFAULT_EPSILON, StateClass, classify_columns, classify_negativities
from .entanglement import COLUMNS as N_COLUMNS
from .entanglement import EntanglementReport, negativity_table
from .linalg import ContractError
from .optimize import golden_section
from .squeezing import COLUMNS as LAMBDA_COLUMNS
from .squeezing import FIELD_MODES, SqueezeReport, closed_form_lambdas, squeeze_table
from .states import (
    CANONICAL_KETS,
    AmplitudeMode,
    Family,
    FamilySpec,
    SamplerConfig,
    build_state,
    pure_density,
    sample_amplitudes,
    states_from_amplitudes,
    support_kets,
)

CLOSED_FORM_TOL = 1e-9
CHUNK = 20_000
GRID_BUDGET = 250_000
GRID_BUDGET_NEGATIVITY = 40_000  # eigensolves make negativity grids ~10x dearer
FIELDS = N_COLUMNS + LAMBDA_COLUMNS
CLOSED_COLUMNS = tuple("closed_" + c for c in LAMBDA_COLUMNS)
SCAN_HEADER = ("index", "spec") + FIELDS + CLOSED_COLUMNS + CLASS_COLUMNS
STUDIED = (Family.III_0, Family.III_1A, Family.III_1B, Family.III_2, Family.III_3)


class ClosedFormMismatch(RuntimeError):
    def __init__(self, spec: FamilySpec, column: str, numeric: float, closed: float):
        self.spec = spec
        super().__init__(
            f"{column}: numeric {numeric!r} vs closed form {closed!r} for {spec.dumps()}"
        )


class ScanIOError(OSError):
    pass


def fmt(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(x), ".17g")


def sql(column: str) -> float:
    return float(len(FIELD_MODES[column]))


def check_field(name: str) -> str:
    if name not in FIELDS:
        raise ContractError(f"unknown field {name!r}; choose from {FIELDS}")
    return name


# --------------------------------------------------------------- evaluation


def _evaluate_chunk(states, epsilon):
    rho = pure_density(states)
    table = negativity_table(rho, check=False)
    table.update(squeeze_table(rho, check=False))
    table.update(classify_columns(table, epsilon))
    return table


def evaluate_states(states, epsilon: float = DEFAULT_EPSILON, workers: int = 1) -> dict[str, np.ndarray]:
    """Negativities, principal variances and class columns for ``(N, 8)`` pure states."""
    states = np.asarray(states, dtype=complex).reshape(-1, 8)
    chunks = [states[s : s + CHUNK] for s in range(0, len(states), CHUNK)] or [states]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _evaluate_chunk(c, epsilon), chunks))
    else:
        parts = [_evaluate_chunk(c, epsilon) for c in chunks]
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def evaluate_probabilities(family, probabilities, pivot="i", epsilon: float = DEFAULT_EPSILON):
    amps = np.sqrt(np.clip(np.asarray(probabilities, dtype=float), 0.0, None))
    return evaluate_states(states_from_amplitudes(family, amps, pivot), epsilon)


def evaluate_field(family, probabilities, name: str, pivot="i") -> np.ndarray:
    """One column for ``(M, n)`` family probabilities, computing only what it needs."""
    amps = np.sqrt(np.clip(np.asarray(probabilities, dtype=float), 0.0, None))
    rho = pure_density(states_from_amplitudes(family, amps, pivot))
    if check_field(name) in LAMBDA_COLUMNS:
        return squeeze_table(rho, check=False)[name]
    return negativity_table(rho, check=False)[name]


def evaluate_spec(spec: FamilySpec, epsilon: float = DEFAULT_EPSILON) -> dict[str, float]:
    table = evaluate_states(build_state(spec)[None, :], epsilon)
    return {k: v[0].item() for k, v in table.items()}


@dataclass(frozen=True)
class Ensemble:
    family: Family
    pivot: str
    amplitudes: np.ndarray
    table: dict
    closed: dict | None

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def spec(self, n: int) -> FamilySpec:
        return FamilySpec(self.family, tuple(self.amplitudes[n]), self.pivot)


def closed_form_applies(family, cfg: SamplerConfig) -> bool:
    return Family.parse(family) is not Family.GENERAL and cfg.amplitude_mode is AmplitudeMode.REAL_NONNEGATIVE


@lru_cache(maxsize=32)
def ensemble(family, cfg: SamplerConfig, pivot="i", epsilon: float = DEFAULT_EPSILON, workers: int = 1) -> Ensemble:
    """Sample and evaluate a family once per configuration (cached)."""
    family = Family.parse(family)
    amps = sample_amplitudes(family, cfg)
    table = evaluate_states(states_from_amplitudes(family, amps, pivot), epsilon, workers)
    closed = None
    if closed_form_applies(family, cfg):
        closed = closed_form_lambdas(family, np.abs(amps) ** 2, pivot)
        for column in LAMBDA_COLUMNS:
            dev = np.abs(closed[column] - table[column])
            if len(dev) and dev.max() >= CLOSED_FORM_TOL:
                n = int(np.argmax(dev))
                raise ClosedFormMismatch(
                    FamilySpec(family, tuple(amps[n]), pivot),
                    column,
                    float(table[column][n]),
                    float(closed[column][n]),
                )
    return Ensemble(family, pivot, amps, table, closed)


# --------------------------------------------------------------------- scans


@dataclass(frozen=True)
class ScanRecord:
    spec: FamilySpec
    entanglement: EntanglementReport
    squeeze_numeric: SqueezeReport
    state_class: StateClass
    squeeze_closed: SqueezeReport | None = None

    def __post_init__(self):
        if self.squeeze_closed is not None:
            for column in LAMBDA_COLUMNS:
                a = getattr(self.squeeze_numeric, column)
                b = getattr(self.squeeze_closed, column)
                if not abs(a - b) < CLOSED_FORM_TOL:
                    raise ClosedFormMismatch(self.spec, column, a, b)

    def as_row(self) -> dict[str, str]:
        row = {"spec": self.spec.dumps()}
        row.update({k: fmt(v) for k, v in self.entanglement.as_row().items()})
        row.update({k: fmt(v) for k, v in self.squeeze_numeric.as_row().items()})
        closed = self.squeeze_closed.as_row() if self.squeeze_closed else {}
        row.update({"closed_" + c: fmt(closed[c]) if closed else "" for c in LAMBDA_COLUMNS})
        row.update(self.state_class.as_row())
        return row


def scan_records(family, cfg: SamplerConfig, pivot="i", epsilon: float = DEFAULT_EPSILON):
    """Yield one :class:`ScanRecord` per sample."""
    ens = ensemble(family, cfg, pivot, epsilon)
    for n in range(len(ens.amplitudes)):
        row = {c: float(ens.table[c][n]) for c in FIELDS}
        closed = None
        if ens.closed is not None:
            closed = SqueezeReport(*(float(ens.closed[c][n]) for c in LAMBDA_COLUMNS))
        yield ScanRecord(
            ens.spec(n),
            EntanglementReport.from_row(row),
            SqueezeReport(*(row[c] for c in LAMBDA_COLUMNS)),
            classify_negativities(row, epsilon),
            closed,
        )


def _scan_rows(ens: Ensemble):
    t = ens.table
    for n in range(len(ens.amplitudes)):
        row = [str(n), ens.spec(n).dumps()]
        row += [fmt(t[c][n]) for c in FIELDS]
        if ens.closed is not None:
            row += [fmt(ens.closed[c][n]) for c in LAMBDA_COLUMNS]
        else:
            row += [""] * len(LAMBDA_COLUMNS)
        row += [str(t[c][n]) for c in CLASS_COLUMNS]
        yield row


def write_csv(path, header: Sequence[str], rows) -> None:
    try:
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise ScanIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def run_scan(
    family,
    cfg: SamplerConfig,
    out,
    pivot="i",
    epsilon: float = DEFAULT_EPSILON,
    workers: int = 1,
) -> dict:
    """Sample, evaluate and write one CSV row per state; return a min/max summary."""
    ens = ensemble(family, cfg, pivot, epsilon, workers)
    write_csv(out, SCAN_HEADER, _scan_rows(ens))
    summary = {
        "family": ens.family.value,
        "pivot": ens.pivot,
        "count": int(len(ens.amplitudes)),
        "seed": int(cfg.seed),
        "path": os.fspath(out),
        "min": {},
        "max": {},
    }
    for c in FIELDS:
        values = ens.table[c]
        summary["min"][c] = float(values.min()) if len(values) else math.nan
        summary["max"][c] = float(values.max()) if len(values) else math.nan
    return summary


# ----------------------------------------------------------- boundary curves


def boundary_pins(family) -> list[tuple[int, ...]]:
    """Positions of canonical kets to pin to zero so exactly two remain free."""
    n = len(CANONICAL_KETS[Family.parse(family)])
    return [combo for combo in itertools.combinations(range(n), n - 2)]


@dataclass(frozen=True)
class BoundaryCurve:
    family: Family
    constraint: tuple[str, ...]
    parameter: str
    x_field: str
    y_field: str
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = self.samples[:, 0]
        if len(t) < 2 or np.any(np.diff(t) <= 0):
            raise ContractError("boundary curve parameter must increase strictly over >= 2 points")

    @property
    def name(self) -> str:
        if not self.constraint:
            return f"{self.family.value}_free"
        return f"{self.family.value}_" + "_".join(f"P{k}zero" for k in self.constraint)

    def rows(self):
        for t, x, y in self.samples:
            yield [fmt(t), fmt(x), fmt(y)]


def boundary_curve(
    family,
    pinned: Sequence[int],
    x_field: str,
    y_field: str,
    points: int = 1000,
    pivot="i",
    include: Sequence[float] = (),
) -> BoundaryCurve:
    """Sweep the probability of the first free ket over [0, 1] with ``pinned`` kets at zero.

    ``pinned`` holds positions into the family's ket list. ``include`` adds
    extra parameter values (e.g. a known extremum) to the uniform grid.
    """
    family = Family.parse(family)
    kets = support_kets(family, pivot)
    free = [n for n in range(len(kets)) if n not in pinned]
    if len(free) != 2:
        raise ContractError("a boundary curve needs exactly two free kets")
    t = np.union1d(np.linspace(0.0, 1.0, points), np.clip(np.asarray(include, dtype=float), 0, 1))
    probs = np.zeros((len(t), len(kets)))
    probs[:, free[0]] = t
    probs[:, free[1]] = 1.0 - t
    table = evaluate_probabilities(family, probs, pivot)
    samples = np.column_stack([t, table[check_field(x_field)], table[check_field(y_field)]])
    return BoundaryCurve(family, tuple(kets[n] for n in pinned), kets[free[0]], x_field, y_field, samples)


# ---------------------------------------------------------- extremum search


def _stick_breaking(u: np.ndarray, mass: float) -> np.ndarray:
    """Map ``(M, d)`` points of the unit box onto ``d + 1`` probabilities summing to ``mass``."""
    u = np.clip(u, 0.0, 1.0)
    out = np.empty((u.shape[0], u.shape[1] + 1))
    rest = np.full(u.shape[0], float(mass))
    for c in range(u.shape[1]):
        out[:, c] = rest * u[:, c]
        rest = rest - out[:, c]
    out[:, -1] = np.clip(rest, 0.0, None)
    return out


def _refine(f, u0: np.ndarray, width: float, tol: float, max_cycles: int = 200):
    """Coordinate golden-section sweeps plus a line search along each sweep's net move."""
    u = np.array(u0, dtype=float)
    fu = f(u)
    d = len(u)

    def line(direction, lo, hi):
        nonlocal u, fu
        t, ft = golden_section(lambda s: f(u + s * direction), lo, hi, tol=tol)
        if ft < fu:
            u, fu = np.clip(u + t * direction, 0.0, 1.0), ft

    for _ in range(max_cycles):
        start, f_start = u.copy(), fu
        for c in range(d):
            e = np.zeros(d)
            e[c] = 1.0
            line(e, max(-u[c], -width), min(1.0 - u[c], width))
        move = u - start
        size = np.max(np.abs(move))
        if d > 1 and size > 0:
            direction = move / size
            bounds = []
            for c in range(d):
                if direction[c] > 0:
                    bounds.append(((0.0 - u[c]) / direction[c], (1.0 - u[c]) / direction[c]))
                elif direction[c] < 0:
                    bounds.append(((1.0 - u[c]) / direction[c], (0.0 - u[c]) / direction[c]))
            lo = max(b[0] for b in bounds)
            hi = min(b[1] for b in bounds)
            line(direction, max(lo, -4 * width), min(hi, 4 * width))
        width = max(min(width, 4 * size), 10 * tol)
        if size <= tol and f_start - fu <= 1e-15:
            break
    return u, fu


@dataclass(frozen=True)
class ExtremumResult:
    family: Family
    objective: str
    arg: FamilySpec
    value: float
    constraint: dict
    maximize: bool = False

    def probabilities(self) -> dict[str, float]:
        return dict(zip(self.arg.kets, self.arg.probabilities.tolist()))

    def fields(self) -> dict[str, float]:
        return evaluate_spec(self.arg)


def _objective(family, field_name, pivot, kets, pinned, free, mass, sign):
    def batch(u):
        probs = np.zeros((u.shape[0], len(kets)))
        probs[:, free] = _stick_breaking(u, mass)
        for n, value in pinned.items():
            probs[:, n] = value
        return sign * evaluate_field(family, probs, field_name, pivot)

    return batch


def find_extremum(
    family,
    objective: str,
    constraints: Mapping[str, float] | None = None,
    resolution: int = 201,
    maximize: bool = False,
    pivot="i",
    tol: float = 1e-10,
) -> ExtremumResult:
    """Grid search over the family's free probabilities, then local refinement.

    ``constraints`` pins ket probabilities, e.g. ``{"000": 0.0}``. The grid has
    ``resolution`` points per free dimension, capped so the whole grid stays
    within ``GRID_BUDGET`` evaluations.
    """
    family = Family.parse(family)
    if family is Family.GENERAL:
        raise ContractError("extremum search needs a parametric family")
    check_field(objective)
    kets = support_kets(family, pivot)
    constraints = dict(constraints or {})
    pinned = {}
    for ket, value in constraints.items():
        if ket not in kets:
            raise ContractError(f"ket {ket} is not in the {family.value} support {kets}")
        pinned[kets.index(ket)] = float(value)
    mass = 1.0 - sum(pinned.values())
    free = [n for n in range(len(kets)) if n not in pinned]
    d = len(free) - 1
    if d < 1 or mass < 0:
        raise ContractError("constraints leave no free parameter")

    sign = -1.0 if maximize else 1.0
    batch = _objective(family, objective, pivot, kets, pinned, free, mass, sign)
    budget = GRID_BUDGET if objective in LAMBDA_COLUMNS else GRID_BUDGET_NEGATIVITY
    res = max(3, min(resolution, int(budget ** (1.0 / d))))
    axis = np.linspace(0.0, 1.0, res)
    grid = np.array(list(itertools.product(axis, repeat=d)))
    values = batch(grid)
    u0 = grid[int(np.argmin(values))]
    u, _ = _refine(lambda v: float(batch(v[None, :])[0]), u0, 1.0 / (res - 1), tol)

    probs = np.zeros(len(kets))
    probs[free] = _stick_breaking(u[None, :], mass)[0]
    for n, value in pinned.items():
        probs[n] = value
    spec = FamilySpec.from_probabilities(family, probs, pivot)
    value = evaluate_spec(spec)[objective]
    return ExtremumResult(family, objective, spec, value, constraints, maximize)


# ---------------------------------------------------------------- thresholds


@dataclass(frozen=True)
class ThresholdResult:
    family: Family
    value: float
    found: bool
    witness: FamilySpec | None


def squeeze_threshold(
    family,
    cfg: SamplerConfig,
    pivot="i",
    epsilon: float = DEFAULT_EPSILON,
    points: int = 1000,
) -> ThresholdResult:
    """Largest N_ijk among states with lambda_ijk below the three-mode limit.

    Combines the sampled ensemble, every pinned-probability boundary curve and
    a local refinement of the best witness.
    """
    family = Family.parse(family)
    limit = sql("lambda_ijk") - epsilon
    candidates = []
    ens = ensemble(family, cfg, pivot, epsilon)
    mask = ens.table["lambda_ijk"] < limit
    if mask.any():
        n = int(np.argmax(np.where(mask, ens.table["N_ijk"], -np.inf)))
        candidates.append((float(ens.table["N_ijk"][n]), ens.probabilities[n]))
    kets = support_kets(family, pivot)
    for pins in boundary_pins(family):
        curve = boundary_curve(family, pins, "N_ijk", "lambda_ijk", points, pivot)
        m = curve.samples[:, 2] < limit
        if m.any():
            n = int(np.argmax(np.where(m, curve.samples[:, 1], -np.inf)))
            probs = np.zeros(len(kets))
            free = [q for q in range(len(kets)) if q not in pins]
            probs[free[0]] = curve.samples[n, 0]
            probs[free[1]] = 1.0 - curve.samples[n, 0]
            candidates.append((float(curve.samples[n, 1]), probs))
    if not candidates:
        return ThresholdResult(family, 0.0, False, None)

    value, probs = max(candidates, key=lambda c: c[0])
    free = list(range(len(kets)))

    def penalized(u):
        p = _stick_breaking(u[None, :], 1.0)
        table = evaluate_probabilities(family, p, pivot)
        if table["lambda_ijk"][0] >= limit:
            return math.inf
        return -float(table["N_ijk"][0])

    u0 = _probabilities_to_box(probs)
    u, fu = _refine(penalized, u0, 0.02, 1e-10, max_cycles=50)
    if -fu > value:
        probs = _stick_breaking(u[None, :], 1.0)[0]
    spec = FamilySpec.from_probabilities(family, probs, pivot)
    fields = evaluate_spec(spec)
    if fields["lambda_ijk"] >= limit:
        return ThresholdResult(family, value, True, None)
    return ThresholdResult(family, fields["N_ijk"], True, spec)


def _probabilities_to_box(p: np.ndarray) -> np.ndarray:
    """Inverse of :func:`_stick_breaking` for ``mass = 1``."""
    p = np.asarray(p, dtype=float)
    u = np.empty(len(p) - 1)
    rest = 1.0
    for c in range(len(p) - 1):
        u[c] = p[c] / rest if rest > 0 else 0.0
        rest -= p[c]
    return np.clip(u, 0.0, 1.0)


# ------------------------------------------------------------------- Table 1

TABLE_ROWS = ("N_ij", "N_jk", "N_ik", "N_ijk", "lambda_ij", "lambda_jk", "lambda_ik", "lambda_ijk")
TABLE_COLUMNS = STUDIED

_Y, _N = True, False
REFERENCE_TABLE_ONE = {
    "N_ij": (_N, _N, _N, _Y, _Y),
    "N_jk": (_N, _Y, _Y, _N, _Y),
    "N_ik": (_N, _N, _N, _Y, _Y),
    "N_ijk": (_Y, _Y, _Y, _Y, _Y),
    "lambda_ij": (_N, _Y, _N, _Y, _Y),
    "lambda_jk": (_N, _Y, _Y, _Y, _N),
    "lambda_ik": (_N, _Y, _N, _Y, _Y),
    "lambda_ijk": (_N, _Y, _Y, _Y, _Y),
}


@dataclass(frozen=True)
class TableOne:
    cells: dict
    witnesses: dict

    def matrix(self) -> dict[str, tuple[bool, ...]]:
        return {r: tuple(self.cells[r, f] for f in TABLE_COLUMNS) for r in TABLE_ROWS}

    def mismatches(self) -> list[tuple[str, str]]:
        return [
            (r, f.value)
            for r in TABLE_ROWS
            for f, expected in zip(TABLE_COLUMNS, REFERENCE_TABLE_ONE[r])
            if self.cells[r, f] != expected
        ]

    def format(self) -> str:
        width = 12
        lines = [" " * width + "".join(f.value.rjust(8) for f in TABLE_COLUMNS)]
        for r in TABLE_ROWS:
            cells = "".join(("yes" if self.cells[r, f] else "no").rjust(8) for f in TABLE_COLUMNS)
            lines.append(r.ljust(width) + cells)
        return "\n".join(lines)


def _witness(value: float, row: str, epsilon: float) -> bool:
    if row.startswith("N_"):
        return value > epsilon
    return value < sql(row) - epsilon


def table_one(cfg: SamplerConfig, epsilon: float = DEFAULT_EPSILON) -> TableOne:
    """Yes/no witness matrix: nonzero negativities and sub-limit variances per family."""
    cells, witnesses = {}, {}
    for family in TABLE_COLUMNS:
        ens = ensemble(family, cfg, "i", epsilon)
        for row in TABLE_ROWS:
            values = ens.table[row]
            n = int(np.argmax(values) if row.startswith("N_") else np.argmin(values))
            if _witness(float(values[n]), row, epsilon):
                cells[row, family] = True
                witnesses[row, family] = (ens.spec(n), float(values[n]))
                continue
            ext = find_extremum(family, row, maximize=row.startswith("N_"))
            cells[row, family] = _witness(ext.value, row, epsilon)
            witnesses[row, family] = (ext.arg, ext.value)
    return TableOne(cells, witnesses)

