"""Parameter sweeps, temperature sensitivities, design tables and flat-file output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .design import CircuitSpec, analyze
from .errors import QCapError, SweepError, ValidationError
from .qcap import CapacitorNetwork, QCapModel

log = logging.getLogger(__name__)

QUANTITIES = ("f_actual", "anharmonicity", "tau", "v_zp", "n_zp")

# (area [mm^2], design [GHz], T [mK], C_S [fF] or None, actual [GHz], A [%])
PUBLISHED_TABLES: Dict[int, tuple] = {
    1: (
        (1.0, 2.5, 25.0, None, 2.29, 3.9),
        (1.0, 5.0, 25.0, None, 4.41, 6.04),
        (1.0, 10.0, 25.0, None, 8.31, 8.26),
    ),
    2: (
        (1.0, 2.5, 25.0, 100.0, 2.39, 0.44),
        (1.0, 5.0, 25.0, 100.0, 4.77, 0.76),
        (1.0, 10.0, 25.0, 1000.0, 8.71, 5.67),
    ),
    3: (
        (0.1, 10.0, 25.0, None, 6.42, 11.2),
        (0.1, 15.0, 25.0, None, 11.1, 9.02),
        (0.1, 20.0, 25.0, None, 11.5, 11.1),
    ),
}


def _axis(values, name: str, upper: float) -> tuple:
    vals = tuple(float(v) for v in values)
    if not vals:
        raise ValidationError(f"{name} range is empty")
    if any(not (0 < v <= upper) or not math.isfinite(v) for v in vals):
        raise ValidationError(f"{name} values must lie in (0, {upper:g}]")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValidationError(f"{name} values must be strictly increasing")
    return vals


@dataclass(frozen=True)
class SweepSpec:
    """Grid of temperatures [K] and areas [m^2] applied to a circuit template.

    Axes left as ``None`` take the template's own value. If the template
    was built from a design frequency, every grid point is re-designed to
    that frequency; otherwise the template's inductance is kept.
    """

    template: CircuitSpec
    temperatures: Optional[Sequence[float]] = None
    areas: Optional[Sequence[float]] = None
    quantities: Sequence[str] = QUANTITIES
    n_levels: int = 3

    def __post_init__(self):
        qc = self.template.network.qcap
        if not isinstance(qc, QCapModel):
            raise ValidationError("sweep template needs a quantum capacitor")
        temps = self.temperatures if self.temperatures is not None else (qc.temperature,)
        areas = self.areas if self.areas is not None else (qc.area,)
        object.__setattr__(self, "temperatures", _axis(temps, "temperature", 1.0))
        object.__setattr__(self, "areas", _axis(areas, "area", 1e-4))
        unknown = set(self.quantities) - set(QUANTITIES)
        if unknown or not self.quantities:
            raise ValidationError(f"quantities must be a non-empty subset of {QUANTITIES}")
        object.__setattr__(self, "quantities", tuple(self.quantities))

    def points(self):
        for T in self.temperatures:
            for S in self.areas:
                yield T, S


def _evaluate(spec: SweepSpec, T: float, S: float) -> dict:
    row = {"temperature": T, "area": S}
    try:
        circuit = spec.template.with_qcap(temperature=T, area=S)
        row["inductance"] = circuit.inductance
        sol = analyze(circuit, spec.n_levels)
        full = sol.as_row()
        row["design_frequency"] = full["design_frequency"]
        for q in spec.quantities:
            row[q] = full[q]
        row["error"] = ""
    except QCapError as exc:
        row.setdefault("inductance", math.nan)
        row["design_frequency"] = math.nan
        for q in spec.quantities:
            row[q] = math.nan
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep(spec: SweepSpec, workers: int = 1) -> List[dict]:
    """Evaluate every grid point; rows are temperature-major, then area.

    A failing point yields a row with NaN quantities and the error text;
    only an all-failed sweep raises.
    """
    pts = list(spec.points())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: _evaluate(spec, *p), pts))
    else:
        rows = [_evaluate(spec, T, S) for T, S in pts]
    failed = sum(1 for r in rows if r["error"])
    if failed:
        log.warning("%d of %d sweep points failed", failed, len(rows))
    if failed == len(rows):
        raise SweepError(f"all {len(rows)} sweep points failed; first: {rows[0]['error']}")
    return rows


@dataclass(frozen=True)
class SensitivityReport:
    """Temperature sensitivities at ``temperature``.

    ``df_dT`` is in Hz/K and ``dA_dT`` in percent per kelvin; the
    normalized sensitivities ``S_f_T`` and ``S_A_T`` are in percent.
    """

    temperature: float
    f_actual: float
    anharmonicity: float
    df_dT: float
    dA_dT: float
    step_used: float
    richardson_error: float

    @property
    def S_f_T(self) -> float:
        return self.df_dT * self.temperature / self.f_actual * 100.0

    @property
    def S_A_T(self) -> float:
        return self.dA_dT * self.temperature / self.anharmonicity * 100.0

    def as_row(self) -> dict:
        return {
            "temperature": self.temperature,
            "f_actual": self.f_actual,
            "anharmonicity": self.anharmonicity,
            "df_dt": self.df_dT,
            "da_dt": self.dA_dT,
            "s_f_t": self.S_f_T,
            "s_a_t": self.S_A_T,
            "step_used": self.step_used,
            "richardson_error": self.richardson_error,
        }


def _fa(circuit: CircuitSpec, T: float):
    sol = analyze(circuit.with_qcap(temperature=T))
    return sol.f_actual, sol.anharmonicity


def sensitivities(circuit: CircuitSpec, T0: Optional[float] = None, dT: float = 1e-3) -> SensitivityReport:
    """Central differences of frequency and anharmonicity with respect to temperature.

    The inductor is held fixed. The derivative is repeated with ``dT/2``;
    the larger relative disagreement of the two estimates is reported as
    ``richardson_error``.
    """
    if T0 is None:
        T0 = circuit.temperature
    if T0 is None:
        raise ValidationError("circuit has no temperature dependence")
    if not (dT > 0 and T0 - dT > 0):
        raise ValidationError("need 0 < dT < T0")
    fixed = circuit.with_fixed_inductance()
    f0, A0 = _fa(fixed, T0)

    def central(h):
        fp, ap = _fa(fixed, T0 + h)
        fm, am = _fa(fixed, T0 - h)
        return (fp - fm) / (2 * h), (ap - am) / (2 * h)

    df1, dA1 = central(dT)
    df2, dA2 = central(dT / 2)

    def rel(a, b):
        scale = max(abs(a), abs(b))
        return 0.0 if scale == 0 else abs(a - b) / scale

    return SensitivityReport(
        temperature=T0,
        f_actual=f0,
        anharmonicity=A0,
        df_dT=df1,
        dA_dT=dA1,
        step_used=dT,
        richardson_error=max(rel(df1, df2), rel(dA1, dA2)),
    )


def temperature_exponent(circuit: CircuitSpec, temperatures: Sequence[float] = (0.025, 0.05, 0.075, 0.1)) -> float:
    """Slope of log A versus log T at fixed inductance (least squares)."""
    fixed = circuit.with_fixed_inductance()
    A = [_fa(fixed, T)[1] for T in temperatures]
    slope, _ = np.polyfit(np.log(temperatures), np.log(A), 1)
    return float(slope)


def table_circuit(area_mm2: float, design_ghz: float, temp_mk: float, cs_ff: Optional[float], **qcap_kwargs) -> CircuitSpec:
    net = CapacitorNetwork(
        QCapModel(area=area_mm2 * 1e-6, temperature=temp_mk * 1e-3, **qcap_kwargs),
        series_cs=None if cs_ff is None else cs_ff * 1e-15,
    )
    return CircuitSpec(net, design_frequency=design_ghz * 1e9)


def reproduce_tables(which=(1, 2, 3), **qcap_kwargs) -> List[dict]:
    """Recompute the published design tables next to the published values.

    Rows use the table units (mm^2, GHz, mK, fF, percent). Relative
    deviations are ``computed / published - 1``.
    """
    if isinstance(which, int):
        which = (which,)
    rows = []
    for t in which:
        if t not in PUBLISHED_TABLES:
            raise ValidationError(f"no table {t!r}; choose from 1, 2, 3")
        for area, design, temp, cs, pub_f, pub_a in PUBLISHED_TABLES[t]:
            sol = analyze(table_circuit(area, design, temp, cs, **qcap_kwargs))
            f = sol.f_actual / 1e9
            rows.append(
                {
                    "table": t,
                    "area_mm2": area,
                    "design_ghz": design,
                    "temperature_mk": temp,
                    "cs_ff": cs,
                    "actual_ghz": f,
                    "anharmonicity_pct": sol.anharmonicity,
                    "published_actual_ghz": pub_f,
                    "published_anharmonicity_pct": pub_a,
                    "actual_rel_dev": f / pub_f - 1.0,
                    "anharmonicity_rel_dev": sol.anharmonicity / pub_a - 1.0,
                }
            )
    return rows


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else f"{float(value):.8e}"
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if not math.isfinite(value) else value
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(rows: Sequence[dict], fmt: str = "csv") -> str:
    if not rows:
        raise ValidationError("nothing to emit")
    keys = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(keys)
        for r in rows:
            writer.writerow([_csv_cell(r.get(k)) for k in keys])
        return buf.getvalue()
    if fmt == "json":
        data = [{k: _json_value(r.get(k)) for k in keys} for r in rows]
        return json.dumps(data, indent=2) + "\n"
    raise ValidationError(f"unknown format {fmt!r}; use csv or json")


def emit(rows: Sequence[dict], fmt: str = "csv", destination=None) -> None:
    """Write rows as CSV (9 significant digits, RFC 4180) or JSON.

    ``destination`` is a path, or ``None``/``"-"`` for standard output.
    """
    text = render(rows, fmt)
    if destination is None or destination == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
