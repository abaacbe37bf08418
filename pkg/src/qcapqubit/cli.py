"""Command-line front end.

Subcommands: ``cq``, ``design``, ``sweep``, ``tables``, ``sens``, ``check``
and ``kerr``. Physical inputs accept SI-suffixed strings such as ``25mK``,
``60nH``, ``5e4um2`` or ``100fF``; bare numbers are SI. A JSON file given
with ``--config`` supplies defaults that explicit flags override.

Exit status: 0 success, 2 validation/usage error, 3 numeric/solver error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from typing import Dict, Optional, Sequence

import numpy as np

from . import __version__
from .design import ZERO_POINT_CONVENTIONS, CircuitSpec, analyze, check_feasibility
from .errors import NumericDomainError, SolverError, SweepError, ValidationError
from .qcap import CapacitorNetwork, QCapModel, charge_of_voltage, energy_of_voltage
from .spectrum import KerrParams, solve_fock_kerr
from .units import HBAR
from .sweep import (
    QUANTITIES,
    SweepSpec,
    emit,
    reproduce_tables,
    sensitivities,
    sweep,
    temperature_exponent,
)

log = logging.getLogger("qcapqubit")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 2, 3

_PREFIX = {
    "": 1.0, "G": 1e9, "M": 1e6, "k": 1e3, "m": 1e-3,
    "u": 1e-6, "µ": 1e-6, "n": 1e-9, "p": 1e-12, "f": 1e-15,
}  # fmt: skip

# kind -> (unit symbol, power applied to the prefix)
_UNITS = {
    "temperature": ("K", 1),
    "inductance": ("H", 1),
    "capacitance": ("F", 1),
    "frequency": ("Hz", 1),
    "velocity": ("m/s", 0),
    "voltage": ("V", 1),
    "area": ("m2", 2),
    "density": ("cm-2", 0),
    "depth": ("eV", 1),
}

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def parse_quantity(text, kind: str) -> float:
    """Parse ``"25mK"``-style strings into SI floats.

    Puddle density is returned in cm^-2 and puddle depth in meV, matching
    the library's units for those two inputs.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    else:
        s = str(text).strip().replace(" ", "")
        unit, power = _UNITS[kind]
        m = re.fullmatch(rf"({_NUMBER})(.*)", s)
        if not m:
            raise ValidationError(f"cannot parse {kind} {text!r}")
        number, suffix = float(m.group(1)), m.group(2)
        if suffix == "":
            value = number
        elif kind == "depth":
            if not suffix.endswith("eV") or suffix[:-2] not in _PREFIX:
                raise ValidationError(f"bad energy unit in {text!r}")
            # depth is expressed in meV
            value = number * _PREFIX[suffix[:-2]] * 1e3
        elif kind == "velocity":
            if suffix != unit:
                raise ValidationError(f"bad velocity unit in {text!r}")
            value = number
        elif kind == "density":
            if suffix != unit:
                raise ValidationError(f"bad density unit in {text!r}; use cm-2")
            value = number
        else:
            if not suffix.endswith(unit):
                raise ValidationError(f"expected unit {unit!r} in {text!r}")
            prefix = suffix[: -len(unit)]
            if kind == "area" and prefix == "c":
                scale = 1e-2
            elif prefix in _PREFIX:
                scale = _PREFIX[prefix]
            else:
                raise ValidationError(f"unknown prefix {prefix!r} in {text!r}")
            value = number * scale**power
    if not math.isfinite(value):
        raise ValidationError(f"{kind} must be finite")
    return value


def parse_axis(text, kind: str):
    """Comma list ``"15mK,25mK"`` or ``"linspace(15mK,100mK,10)"``; JSON lists also accepted."""
    if isinstance(text, (list, tuple)):
        return [parse_quantity(t, kind) for t in text]
    s = str(text).strip()
    m = re.fullmatch(r"linspace\((.+),(.+),(\d+)\)", s.replace(" ", ""))
    if m:
        lo, hi = parse_quantity(m.group(1), kind), parse_quantity(m.group(2), kind)
        return [float(v) for v in np.linspace(lo, hi, int(m.group(3)))]
    return [parse_quantity(t, kind) for t in s.split(",") if t]


# config key -> (argparse dest, parser)
CONFIG_KEYS = {
    "area": lambda v: parse_quantity(v, "area"),
    "temperature": lambda v: parse_quantity(v, "temperature"),
    "fermi_velocity": lambda v: parse_quantity(v, "velocity"),
    "vf_scale": float,
    "series_cs": lambda v: parse_quantity(v, "capacitance"),
    "parallel_cp": lambda v: parse_quantity(v, "capacitance"),
    "inductance": lambda v: parse_quantity(v, "inductance"),
    "design_frequency": lambda v: parse_quantity(v, "frequency"),
    "linear_stub": bool,
    "n_levels": int,
    "n_points": int,
    "n_trunc": int,
    "tolerance": float,
    "zero_point_convention": str,
    "temperatures": lambda v: parse_axis(v, "temperature"),
    "areas": lambda v: parse_axis(v, "area"),
    "quantities": lambda v: list(v) if isinstance(v, list) else str(v).split(","),
    "puddle_density": lambda v: parse_quantity(v, "density"),
    "puddle_depth": lambda v: parse_quantity(v, "depth"),
    "format": str,
    "output": str,
    "which": lambda v: [int(x) for x in (v if isinstance(v, list) else str(v).split(","))],
    "step": lambda v: parse_quantity(v, "temperature"),
    "vmax": lambda v: parse_quantity(v, "voltage"),
    "num": int,
    "omega": float,
    "alpha": float,
    "tau": float,
}


def load_config(path: str) -> Dict[str, object]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("config must be a JSON object")
    unknown = sorted(set(raw) - set(CONFIG_KEYS))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    try:
        return {k: CONFIG_KEYS[k](v) for k, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad config value: {exc}") from exc


def _q(kind):
    def conv(text):
        try:
            return parse_quantity(text, kind)
        except ValidationError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return conv


def _axis(kind):
    def conv(text):
        try:
            return parse_axis(text, kind)
        except ValidationError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return conv


def _add_circuit(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("circuit")
    g.add_argument("--area", type=_q("area"), help="capacitor area, e.g. 5e4um2 or 1mm2")
    g.add_argument("--temp", dest="temperature", type=_q("temperature"), help="temperature, e.g. 25mK")
    g.add_argument("--vf", dest="fermi_velocity", type=_q("velocity"), help="Fermi velocity [m/s]")
    g.add_argument("--vf-scale", dest="vf_scale", type=float, help="Fermi-velocity multiplier in (0, 1]")
    g.add_argument("--cs", dest="series_cs", type=_q("capacitance"), help="series capacitor, e.g. 100fF")
    g.add_argument("--cp", dest="parallel_cp", type=_q("capacitance"), help="parallel capacitor")
    g.add_argument("--inductance", type=_q("inductance"), help="inductor, e.g. 60nH")
    g.add_argument("--design-freq", dest="design_frequency", type=_q("frequency"), help="linearized design frequency, e.g. 10GHz")
    g.add_argument("--linear-stub", dest="linear_stub", action="store_true", default=None,
                   help="replace the quantum capacitor by its zero-bias value (harmonic limit)")
    s = p.add_argument_group("solver")
    s.add_argument("--n-levels", dest="n_levels", type=int)
    s.add_argument("--n-points", dest="n_points", type=int)
    s.add_argument("--tolerance", type=float)
    s.add_argument("--zero-point", dest="zero_point_convention", choices=sorted(ZERO_POINT_CONVENTIONS))


def _add_output(p: argparse.ArgumentParser, formats=("csv", "json")) -> None:
    p.add_argument("--format", choices=formats)
    p.add_argument("--output", "-o", help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcapqubit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="JSON config file; explicit flags win")
    parser.add_argument("--verbose", "-v", action="store_true", help="diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cq", help="dump the quantum capacitance curve C_Q(V)")
    _add_circuit(p)
    p.add_argument("--vmax", type=_q("voltage"), help="largest bias (default 20 x 2k_BT/e)")
    p.add_argument("--num", type=int, help="number of points (default 201)")
    _add_output(p)

    p = sub.add_parser("design", help="analyze one circuit")
    _add_circuit(p)
    p.add_argument("--puddle-density", dest="puddle_density", type=_q("density"))
    p.add_argument("--puddle-depth", dest="puddle_depth", type=_q("depth"))
    _add_output(p, ("text", "csv", "json"))

    p = sub.add_parser("sweep", help="temperature/area grid")
    _add_circuit(p)
    p.add_argument("--temps", dest="temperatures", type=_axis("temperature"),
                   help="e.g. 15mK,25mK,50mK or linspace(15mK,100mK,10)")
    p.add_argument("--areas", dest="areas", type=_axis("area"))
    p.add_argument("--quantities", type=lambda s: s.split(","), help=f"subset of {','.join(QUANTITIES)}")
    p.add_argument("--workers", type=int, default=1)
    _add_output(p)

    p = sub.add_parser("tables", help="recompute the published design tables")
    p.add_argument("--which", type=lambda s: [int(x) for x in s.split(",")], help="e.g. 1 or 1,2,3")
    p.add_argument("--vf", dest="fermi_velocity", type=_q("velocity"))
    _add_output(p)

    p = sub.add_parser("sens", help="temperature sensitivities")
    _add_circuit(p)
    p.add_argument("--step", type=_q("temperature"), help="finite-difference step (default 1mK)")
    _add_output(p, ("text", "csv", "json"))

    p = sub.add_parser("check", help="feasibility checks only")
    _add_circuit(p)
    p.add_argument("--puddle-density", dest="puddle_density", type=_q("density"))
    p.add_argument("--puddle-depth", dest="puddle_depth", type=_q("depth"))
    p.add_argument("--freq", dest="f_actual", type=_q("frequency"), help="qubit frequency (default: linearized)")
    _add_output(p, ("text", "json"))

    p = sub.add_parser("kerr", help="levels of the quartic oscillator in a Fock basis")
    p.add_argument("--omega", type=float, help="angular frequency [rad/s]")
    p.add_argument("--alpha", type=float)
    p.add_argument("--tau", type=float, help="[s]")
    p.add_argument("--n-trunc", dest="n_trunc", type=int)
    p.add_argument("--n-levels", dest="n_levels", type=int)
    _add_output(p)
    return parser


DEFAULTS = {
    "area": 5e-8,
    "temperature": 0.025,
    "fermi_velocity": 1e6,
    "vf_scale": 1.0,
    "n_levels": 3,
    "zero_point_convention": "half_quantum",
    "puddle_density": 0.0,
    "puddle_depth": 0.0,
    "n_trunc": 40,
    "alpha": 0.0,
    "tau": 0.0,
}


def _settings(args: argparse.Namespace) -> Dict[str, object]:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(load_config(args.config))
    given = {k: v for k, v in vars(args).items() if v is not None}
    # an explicit flag for one way of fixing L overrides the other from config
    if "inductance" in given:
        merged.pop("design_frequency", None)
    if "design_frequency" in given:
        merged.pop("inductance", None)
    merged.update(given)
    return merged


def make_circuit(cfg: Dict[str, object]) -> CircuitSpec:
    qc = QCapModel(
        area=cfg["area"],
        temperature=cfg["temperature"],
        fermi_velocity=cfg["fermi_velocity"],
        vf_scale=cfg["vf_scale"],
    )
    net = CapacitorNetwork(qc, series_cs=cfg.get("series_cs"), parallel_cp=cfg.get("parallel_cp"))
    L, f = cfg.get("inductance"), cfg.get("design_frequency")
    if L is None and f is None:
        L = 60e-9
    if L is not None and f is not None:
        raise ValidationError("give either --inductance or --design-freq, not both")
    circuit = CircuitSpec(net, inductance=L, design_frequency=f)
    if cfg.get("linear_stub"):
        circuit = circuit.linear_stub()
    return circuit


def _analyze_kwargs(cfg):
    kw = {"n_levels": cfg["n_levels"], "zero_point_convention": cfg["zero_point_convention"]}
    if cfg.get("n_points") is not None:
        kw["n_points"] = cfg["n_points"]
    if cfg.get("tolerance") is not None:
        kw["tol"] = cfg["tolerance"]
    return kw


def _write_text(lines, destination):
    text = "\n".join(lines) + "\n"
    if destination in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_cq(cfg):
    qc = make_circuit(cfg).network.qcap
    vmax = cfg.get("vmax") or 20.0 * qc.thermal_voltage
    V = np.linspace(-vmax, vmax, int(cfg.get("num") or 201))
    C = qc.capacitance(V)
    Q = charge_of_voltage(qc, V)
    E = energy_of_voltage(qc, V)
    rows = [
        {"voltage": float(v), "capacitance": float(c), "charge": float(q), "energy": float(e)}
        for v, c, q, e in zip(V, C, Q, E)
    ]
    emit(rows, cfg.get("format") or "csv", cfg.get("output"))


def _cmd_design(cfg):
    circuit = make_circuit(cfg)
    sol = analyze(
        circuit,
        puddle_density=cfg["puddle_density"],
        puddle_depth=cfg["puddle_depth"],
        **_analyze_kwargs(cfg),
    )
    fmt = cfg.get("format") or "text"
    row = {"inductance": circuit.inductance, **sol.as_row(), "feasible": sol.feasible.ok}
    if fmt == "text":
        lines = [
            f"inductance        {circuit.inductance:.6e} H",
            f"design frequency  {sol.design_frequency / 1e9:.6f} GHz",
            f"actual frequency  {sol.f_actual / 1e9:.6f} GHz",
            f"anharmonicity     {sol.anharmonicity:.6f} %",
            f"tau               {sol.tau:.6e} s",
            f"V_zp              {sol.v_zp * 1e6:.6f} uV",
            f"n_zp              {sol.n_zp:.6f}",
            f"converged         {sol.spectrum.converged} (refinement {sol.spectrum.refinement_error:.2e})",
        ]
        lines += [f"check             {m}" for m in sol.feasible.messages]
        _write_text(lines, cfg.get("output"))
    else:
        emit([row], fmt, cfg.get("output"))


def _cmd_sweep(cfg):
    spec = SweepSpec(
        make_circuit(cfg),
        temperatures=cfg.get("temperatures"),
        areas=cfg.get("areas"),
        quantities=cfg.get("quantities") or QUANTITIES,
        n_levels=cfg["n_levels"],
    )
    rows = sweep(spec, workers=int(cfg.get("workers") or 1))
    emit(rows, cfg.get("format") or "csv", cfg.get("output"))


def _cmd_tables(cfg):
    rows = reproduce_tables(cfg.get("which") or (1, 2, 3), fermi_velocity=cfg["fermi_velocity"])
    emit(rows, cfg.get("format") or "csv", cfg.get("output"))


def _cmd_sens(cfg):
    circuit = make_circuit(cfg)
    rep = sensitivities(circuit, dT=cfg.get("step") or 1e-3)
    exponent = temperature_exponent(circuit)
    fmt = cfg.get("format") or "text"
    row = {**rep.as_row(), "temperature_exponent": exponent}
    if fmt == "text":
        _write_text(
            [
                f"temperature       {rep.temperature * 1e3:.4f} mK",
                f"frequency         {rep.f_actual / 1e9:.6f} GHz",
                f"anharmonicity     {rep.anharmonicity:.6f} %",
                f"df/dT             {rep.df_dT / 1e9:.6f} MHz/mK",
                f"dA/dT             {rep.dA_dT / 1e3:.6f} %/mK",
                f"S_f^T             {rep.S_f_T:.4f} %",
                f"S_A^T             {rep.S_A_T:.4f} %",
                f"richardson error  {rep.richardson_error:.2e}",
                f"log A / log T     {exponent:.4f}  (fit over 25-100 mK)",
            ],
            cfg.get("output"),
        )
    else:
        emit([row], fmt, cfg.get("output"))


def _cmd_check(cfg):
    circuit = make_circuit(cfg)
    rep = check_feasibility(circuit, cfg["puddle_density"], cfg["puddle_depth"], cfg.get("f_actual"))
    fmt = cfg.get("format") or "text"
    if fmt == "json":
        data = {
            "puddle_density_ok": rep.puddle_density_ok,
            "puddle_depth_ok": rep.puddle_depth_ok,
            "temperature_ok": rep.temperature_ok,
            "messages": list(rep.messages),
        }
        _write_text([json.dumps(data, indent=2)], cfg.get("output"))
    else:
        flags = [
            f"puddle_density_ok {rep.puddle_density_ok}",
            f"puddle_depth_ok   {rep.puddle_depth_ok}",
            f"temperature_ok    {rep.temperature_ok}",
        ]
        _write_text(flags + list(rep.messages), cfg.get("output"))


def _cmd_kerr(cfg):
    if cfg.get("omega") is None:
        raise ValidationError("kerr needs --omega")
    params = KerrParams(cfg["omega"], cfg["alpha"], cfg["tau"], cfg["n_trunc"])
    spec = solve_fock_kerr(params, cfg["n_levels"])
    hw = HBAR * params.omega
    rows = [{"level": i, "energy": float(E), "energy_hbar_omega": float(E / hw)} for i, E in enumerate(spec.levels)]
    emit(rows, cfg.get("format") or "csv", cfg.get("output"))


COMMANDS = {
    "cq": _cmd_cq,
    "design": _cmd_design,
    "sweep": _cmd_sweep,
    "tables": _cmd_tables,
    "sens": _cmd_sens,
    "check": _cmd_check,
    "kerr": _cmd_kerr,
}


def _fail(code: int, kind: str, message: str) -> int:
    print(f"error code={code} kind={kind}: {message}", file=sys.stderr)
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = int(exc.code or 0)
        if code:
            # argparse has already printed the usage and the reason
            return _fail(EXIT_VALIDATION, "usage", "invalid command line")
        return code
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    log.info("qcapqubit %s", __version__)
    try:
        cfg = _settings(args)
        COMMANDS[args.command](cfg)
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, "validation", str(exc))
    except OSError as exc:
        return _fail(EXIT_VALIDATION, "io", str(exc))
    except (NumericDomainError, SolverError, SweepError) as exc:
        return _fail(EXIT_NUMERIC, "numeric", str(exc))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
