"""Scatter and boundary-curve datasets for each figure panel."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .classify import DEFAULT_EPSILON
from .linalg import ContractError
from .scan import (
    ScanIOError,
    boundary_curve,
    boundary_pins,
    ensemble,
    find_extremum,
    fmt,
    sql,
    write_csv,
)
from .squeezing import COLUMNS as LAMBDA_COLUMNS
from .states import Family, SamplerConfig, support_kets


@dataclass(frozen=True)
class Panel:
    """One plotted relation; ``series`` lists ``(family, x_field, y_field)``."""

    figure: str
    series: tuple[tuple[Family, str, str], ...]

    @property
    def families(self) -> tuple[Family, ...]:
        return tuple(dict.fromkeys(f for f, _, _ in self.series))


def _panel(figure, family, *pairs):
    fams = family if isinstance(family, tuple) else (family,)
    return Panel(figure, tuple((f, x, y) for f in fams for x, y in pairs))


_A, _B = Family.III_1A, Family.III_1B

FIGURES: dict[str, Panel] = {
    "F2": _panel("F2", Family.III_0, ("N_ijk", "lambda_ijk")),
    "F5": _panel("F5", (_A, _B), ("N_jk", "N_ijk")),
    "F6a": _panel("F6a", Family.III_2, ("N_ij", "N_ijk")),
    "F6b": _panel("F6b", Family.III_2, ("N_ik", "N_ijk")),
    "F7a": _panel("F7a", Family.III_2, ("N_ij", "lambda_ij"), ("N_ik", "lambda_ik")),
    "F7b": _panel("F7b", Family.III_2, ("lambda_ij", "lambda_jk")),
    "F7c": _panel("F7c", Family.III_2, ("lambda_ik", "lambda_jk")),
    "F7d": _panel("F7d", Family.III_2, ("N_ijk", "lambda_ijk")),
    "F7e": _panel("F7e", Family.III_2, ("lambda_ij", "lambda_ijk")),
    "F7f": _panel("F7f", Family.III_2, ("lambda_ik", "lambda_ijk")),
    "F7g": _panel("F7g", Family.III_2, ("lambda_jk", "lambda_ijk")),
    "F8a": _panel("F8a", Family.III_3, ("N_ij", "N_ijk")),
    "F8b": _panel("F8b", Family.III_3, ("N_jk", "N_ijk")),
    "F9a": _panel("F9a", Family.III_3, ("N_ij", "lambda_ij"), ("N_ik", "lambda_ik")),
    "F9b": _panel("F9b", Family.III_3, ("N_jk", "lambda_jk")),
    "F9c": _panel("F9c", Family.III_3, ("lambda_ij", "lambda_jk")),
    "F9d": _panel("F9d", Family.III_3, ("N_ijk", "lambda_ijk")),
    "F9e": _panel("F9e", Family.III_3, ("lambda_ij", "lambda_ijk")),
    "F9f": _panel("F9f", Family.III_3, ("lambda_jk", "lambda_ijk")),
}
# F3 and F4 share one layout, for III-1A and III-1B respectively.
for _fig, _fam in (("F3", _A), ("F4", _B)):
    for _letter, _pair in zip(
        "abcde",
        (
            ("N_jk", "lambda_jk"),
            ("lambda_jk", "lambda_ij"),
            ("N_ijk", "lambda_ijk"),
            ("lambda_jk", "lambda_ijk"),
            ("lambda_ij", "lambda_ijk"),
        ),
    ):
        FIGURES[_fig + _letter] = _panel(_fig + _letter, _fam, _pair)

FIGURE_IDS = tuple(sorted(FIGURES, key=lambda f: (int(f[1]), f[2:])))

SCATTER_HEADER = ("series", "family", "x", "y", "squeezed") + tuple(
    "P_" + format(n, "03b") for n in range(8)
)


def _squeezed(table, fields) -> np.ndarray:
    lam = [f for f in fields if f in LAMBDA_COLUMNS]
    if not lam:
        return None
    if "lambda_ijk" in lam:
        return table["lambda_ijk"] < sql("lambda_ijk")
    return np.any([table[f] < sql(f) for f in lam], axis=0)


def _curve_extremum(family, pins, y_field, pivot="i"):
    kets = support_kets(family, pivot)
    constraint = {kets[n]: 0.0 for n in pins}
    free = [n for n in range(len(kets)) if n not in pins]
    ext = find_extremum(family, y_field, constraint, maximize=not y_field.startswith("lambda"))
    return ext, ext.arg.probability(kets[free[0]])


def figure_dataset(
    figure_id: str,
    cfg: SamplerConfig,
    out,
    epsilon: float = DEFAULT_EPSILON,
    points: int = 1000,
) -> list[str]:
    """Write ``scatter.csv``, one CSV per boundary curve and ``manifest.json`` into ``out``.

    Each boundary curve also carries the parameter of its own extremum of the
    plotted y quantity, so the curve passes exactly through that point.
    """
    if figure_id not in FIGURES:
        raise ContractError(f"unknown figure {figure_id!r}; known: {', '.join(FIGURE_IDS)}")
    panel = FIGURES[figure_id]
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise ScanIOError(f"cannot create {out}: {exc.strerror or exc}") from exc

    files = []
    rows = []
    for n_series, (family, x_field, y_field) in enumerate(panel.series):
        ens = ensemble(family, cfg, "i", epsilon)
        flag = _squeezed(ens.table, (x_field, y_field))
        probs = np.zeros((len(ens.amplitudes), 8))
        kets = support_kets(family)
        probs[:, [int(k, 2) for k in kets]] = ens.probabilities
        x, y = ens.table[x_field], ens.table[y_field]
        for n in range(len(x)):
            squeezed = "" if flag is None else str(int(flag[n]))
            rows.append([str(n_series), family.value, fmt(x[n]), fmt(y[n]), squeezed] + [fmt(p) for p in probs[n]])
    path = os.path.join(out, "scatter.csv")
    write_csv(path, SCATTER_HEADER, rows)
    files.append(path)

    curves = []
    for n_series, (family, x_field, y_field) in enumerate(panel.series):
        for pins in boundary_pins(family):
            ext, t = _curve_extremum(family, pins, y_field)
            extremum = {"value": ext.value, "parameter": t}
            curve = boundary_curve(family, pins, x_field, y_field, points, include=(t,))
            path = os.path.join(out, f"curve_s{n_series}_{curve.name}.csv")
            write_csv(path, ("parameter", "x", "y"), curve.rows())
            files.append(path)
            curves.append(
                {
                    "file": os.path.basename(path),
                    "series": n_series,
                    "family": family.value,
                    "pinned_zero": list(curve.constraint),
                    "parameter": "P_" + curve.parameter,
                    "x": x_field,
                    "y": y_field,
                    "extremum": extremum,
                }
            )

    manifest = {
        "figure": figure_id,
        "family": [f.value for f in panel.families],
        "series": [{"family": f.value, "x": x, "y": y} for f, x, y in panel.series],
        "seed": int(cfg.seed),
        "count": {f.value: cfg.resolved_count(f) for f in panel.families},
        "measure": cfg.measure.value,
        "amplitude_mode": cfg.amplitude_mode.value,
        "epsilon": epsilon,
        "curve_points": points,
        "curves": curves,
        "tool_version": __version__,
    }
    path = os.path.join(out, "manifest.json")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise ScanIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
    files.append(path)
    return files
