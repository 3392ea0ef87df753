"""Command-line frontend: scenario file in, CSV curve out.

Scenario files are JSON. Every physical quantity carries an explicit unit
suffix, ``_db`` or ``_linear``; conversion happens once, while parsing, and
``--dump-config`` echoes the resolved configuration in linear units so that
it re-parses to the identical configuration.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from rocbound import __version__
from rocbound.channel_mi import (
    GammaMixture,
    Prior,
    averaged_deficit,
    biawgn_deficit,
    biawgn_mi_asymptotic,
    rayleigh_gamma_mixture,
)
from rocbound.energy_detector import (
    EnergyDetectorConfig,
    decision_threshold,
    default_theta_grid,
    pfa_analytic,
    pmd_analytic,
    pmd_rayleigh,
    pmd_rayleigh_at_energy,
    rule_operating_point,
)
from rocbound.monte_carlo import (
    EnergyPmf,
    FixedGains,
    FixedSignal,
    RayleighGains,
    Scenario,
    estimate_detector_roc,
)
from rocbound.roc_bound import (
    equilibrium_asymptotic,
    equilibrium_probability,
    roc_lower_bound,
)
from rocbound.special_functions import regularized_gamma_upper

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
COMMANDS = ("bound", "energy-roc", "equilibrium", "asymptotic")
SWEEP_KINDS = ("roc", "equilibrium", "asymptotic")


class ConfigError(Exception):
    pass


class NumericalFailure(Exception):
    pass


# --------------------------------------------------------------------------
# schema
# --------------------------------------------------------------------------

_NUM = {"type": "number"}
_POS_INT = {"type": "integer", "minimum": 1}
_NUM_LIST = {"type": "array", "items": _NUM, "minItems": 1}
_RANGE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["start", "stop", "num"],
    "properties": {"start": _NUM, "stop": _NUM, "num": _POS_INT},
}
_GRID = {"oneOf": [_NUM_LIST, _RANGE]}


def _with_unit(name: str, value_schema: dict, extra: dict | None = None,
               required: tuple[str, ...] = ()) -> dict:
    props = {f"{name}_db": value_schema, f"{name}_linear": value_schema}
    props.update(extra or {})
    return {
        "type": "object",
        "additionalProperties": False,
        "properties": props,
        "required": list(required),
        "oneOf": [{"required": [f"{name}_db"]}, {"required": [f"{name}_linear"]}],
    }


SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["prior", "sensors", "gains", "signal"],
    "properties": {
        "prior": {
            "type": "object",
            "additionalProperties": False,
            "required": ["alpha"],
            "properties": {"alpha": {"type": "number", "minimum": 0, "maximum": 1}},
        },
        "sensors": _with_unit("noise_vars", _NUM_LIST, {"k": _POS_INT}, ("k",)),
        "gains": _with_unit(
            "values", _NUM_LIST, {"model": {"enum": ["fixed", "rayleigh"]}}, ("model",)
        ),
        "signal": {
            "oneOf": [
                _with_unit("energy", _NUM, {"model": {"const": "fixed"}}, ("model",)),
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["model", "values"],
                    "properties": {
                        "model": {"const": "pmf"},
                        "values": {
                            "type": "array",
                            "minItems": 1,
                            "items": _with_unit(
                                "energy", _NUM,
                                {"p": {"type": "number", "minimum": 0, "maximum": 1}}, ("p",)
                            ),
                        },
                    },
                },
            ]
        },
        "sampling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"n": _POS_INT},
        },
        "simulation": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "seed": {"type": "integer", "minimum": 0},
                "trials": {"type": "integer", "minimum": 1000},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "what": {"enum": list(SWEEP_KINDS)},
                "snr_db": _GRID,
                "snr_linear": _GRID,
                "alphas": {
                    "type": "array", "minItems": 1,
                    "items": {"type": "number", "minimum": 0, "maximum": 1},
                },
                "pfa_grid": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "min": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                        "max": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                        "num": {"type": "integer", "minimum": 2},
                        "spacing": {"enum": ["linear", "log"]},
                    },
                },
                "theta_points": {"type": "integer", "minimum": 2},
                "kn_values": {"type": "array", "minItems": 1, "items": _POS_INT},
                "depth": {"type": "integer", "minimum": 0, "maximum": 9},
                "form": {"enum": ["additive", "half_snr"]},
            },
            "not": {"required": ["snr_db", "snr_linear"]},
        },
    },
}


# --------------------------------------------------------------------------
# resolved configuration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Sweep:
    what: str = "roc"
    snr_grid: tuple[float, ...] | None = None  # linear
    alphas: tuple[float, ...] | None = None
    pfa_min: float = 1e-4
    pfa_max: float = 0.9999
    pfa_num: int = 200
    pfa_spacing: str = "log"
    theta_points: int = 400
    kn_values: tuple[int, ...] | None = None
    depth: int = 4
    form: str = "additive"


@dataclass(frozen=True)
class ResolvedConfig:
    alpha: float
    k: int
    n: int
    noise_vars: tuple[float, ...]
    gain_model: str
    gain_powers: tuple[float, ...]
    signal_model: str
    signal_pmf: tuple[tuple[float, float], ...]  # (energy, probability)
    seed: int
    trials: int
    sweep: Sweep

    @property
    def is_random(self) -> bool:
        return self.gain_model == "rayleigh" or self.signal_model == "pmf"

    @property
    def per_sensor_snr(self) -> tuple[float, ...]:
        return tuple(g / v for g, v in zip(self.gain_powers, self.noise_vars))

    @property
    def snr(self) -> float:
        """Mean additive SNR, linear."""
        energy = math.fsum(e * p for e, p in self.signal_pmf)
        return math.fsum(self.per_sensor_snr) * energy

    def mixture(self) -> GammaMixture:
        if self.gain_model == "rayleigh":
            return rayleigh_gamma_mixture(self.per_sensor_snr, self.signal_pmf)
        base = math.fsum(self.per_sensor_snr)
        return GammaMixture((), tuple((p, base * e) for e, p in self.signal_pmf))

    def scenario(self, n: int | None = None) -> Scenario:
        n = self.n if n is None else n
        if self.gain_model == "rayleigh":
            gains = RayleighGains(self.gain_powers)
        else:
            gains = FixedGains(tuple(complex(math.sqrt(g)) for g in self.gain_powers))
        if self.signal_model == "fixed":
            amp = math.sqrt(self.signal_pmf[0][0] / n)
            signal = FixedSignal((complex(amp),) * n)
        else:
            signal = EnergyPmf(self.signal_pmf)
        return Scenario(self.k, n, self.alpha, gains, signal, self.noise_vars, self.seed)


def _db(x: float) -> float:
    return 10.0 ** (x / 10.0)


def _unit(section: dict, name: str):
    if f"{name}_db" in section:
        v = section[f"{name}_db"]
        return [_db(x) for x in v] if isinstance(v, list) else _db(v)
    return section[f"{name}_linear"]


def _grid(grid, to_linear) -> tuple[float, ...]:
    vals = (np.linspace(grid["start"], grid["stop"], grid["num"])
            if isinstance(grid, dict) else np.asarray(grid, dtype=float))
    return tuple(float(to_linear(v)) for v in vals)


def parse_scenario(doc: dict) -> ResolvedConfig:
    """Validate a scenario document and resolve it to linear units."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"scenario invalid at {where}: {exc.message}") from None

    k = doc["sensors"]["k"]
    noise = tuple(float(v) for v in _unit(doc["sensors"], "noise_vars"))
    gains = tuple(float(v) for v in _unit(doc["gains"], "values"))
    if len(noise) != k or len(gains) != k:
        raise ConfigError(f"k={k} but {len(noise)} noise variances and {len(gains)} gains")
    if any(v <= 0 for v in noise) or any(g <= 0 for g in gains):
        raise ConfigError("noise variances and gain powers must be positive")

    sig = doc["signal"]
    if sig["model"] == "fixed":
        pmf = ((float(_unit(sig, "energy")), 1.0),)
    else:
        pmf = tuple((float(_unit(v, "energy")), float(v["p"])) for v in sig["values"])
        if abs(math.fsum(p for _, p in pmf) - 1.0) > 1e-10:
            raise ConfigError("signal energy probabilities must sum to 1")
    if any(e <= 0 for e, _ in pmf):
        raise ConfigError("signal energies must be positive")

    sim = doc.get("simulation", {})
    sw = doc.get("sweep", {})
    snr_grid = None
    if "snr_db" in sw:
        snr_grid = _grid(sw["snr_db"], _db)
    elif "snr_linear" in sw:
        snr_grid = _grid(sw["snr_linear"], float)
    if snr_grid is not None and any(s < 0 for s in snr_grid):
        raise ConfigError("snr grid values must be nonnegative")
    pfa = sw.get("pfa_grid", {})
    sweep = Sweep(
        what=sw.get("what", "roc"),
        snr_grid=snr_grid,
        alphas=tuple(float(a) for a in sw["alphas"]) if "alphas" in sw else None,
        pfa_min=float(pfa.get("min", Sweep.pfa_min)),
        pfa_max=float(pfa.get("max", Sweep.pfa_max)),
        pfa_num=int(pfa.get("num", Sweep.pfa_num)),
        pfa_spacing=pfa.get("spacing", Sweep.pfa_spacing),
        theta_points=int(sw.get("theta_points", Sweep.theta_points)),
        kn_values=tuple(sw["kn_values"]) if "kn_values" in sw else None,
        depth=int(sw.get("depth", Sweep.depth)),
        form=sw.get("form", Sweep.form),
    )
    if sweep.pfa_min >= sweep.pfa_max:
        raise ConfigError("pfa_grid min must be below max")
    if sweep.kn_values and any(kn % k for kn in sweep.kn_values):
        raise ConfigError(f"every kn value must be a multiple of k={k}")

    cfg = ResolvedConfig(
        alpha=float(doc["prior"]["alpha"]), k=k, n=doc.get("sampling", {}).get("n", 1),
        noise_vars=noise, gain_model=doc["gains"]["model"], gain_powers=gains,
        signal_model=sig["model"], signal_pmf=pmf,
        seed=int(sim.get("seed", 0)), trials=int(sim.get("trials", 100_000)), sweep=sweep,
    )
    try:
        cfg.mixture()
    except ValueError as exc:
        raise ConfigError(f"SNR distribution: {exc}") from None
    return cfg


def dump_config(cfg: ResolvedConfig) -> dict:
    """Scenario document (linear units) that parses back to ``cfg``."""
    sw = cfg.sweep
    sweep: dict = {
        "what": sw.what,
        "pfa_grid": {"min": sw.pfa_min, "max": sw.pfa_max, "num": sw.pfa_num,
                     "spacing": sw.pfa_spacing},
        "theta_points": sw.theta_points,
        "depth": sw.depth,
        "form": sw.form,
    }
    if sw.snr_grid is not None:
        sweep["snr_linear"] = list(sw.snr_grid)
    if sw.alphas is not None:
        sweep["alphas"] = list(sw.alphas)
    if sw.kn_values is not None:
        sweep["kn_values"] = list(sw.kn_values)
    if cfg.signal_model == "fixed":
        signal = {"model": "fixed", "energy_linear": cfg.signal_pmf[0][0]}
    else:
        signal = {"model": "pmf",
                  "values": [{"energy_linear": e, "p": p} for e, p in cfg.signal_pmf]}
    return {
        "prior": {"alpha": cfg.alpha},
        "sensors": {"k": cfg.k, "noise_vars_linear": list(cfg.noise_vars)},
        "gains": {"model": cfg.gain_model, "values_linear": list(cfg.gain_powers)},
        "signal": signal,
        "sampling": {"n": cfg.n},
        "simulation": {"seed": cfg.seed, "trials": cfg.trials},
        "sweep": sweep,
    }


def bundled_scenarios() -> list[str]:
    root = resources.files("rocbound") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def load_scenario(path: str | Path) -> ResolvedConfig:
    """Read a scenario file; a bare bundled name such as ``fig_roc1`` also works."""
    p = Path(path)
    try:
        if p.exists():
            text = p.read_text()
        else:
            name = p.name if p.suffix == ".json" else p.name + ".json"
            if name not in bundled_scenarios():
                raise ConfigError(f"no scenario file {str(path)!r}")
            text = (resources.files("rocbound") / "scenarios" / name).read_text()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read scenario {str(path)!r}: {exc}") from None
    return parse_scenario(doc)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

@dataclass
class Table:
    columns: list[str]
    rows: list[tuple]
    meta: dict
    warnings: list[str]


def _to_db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def _deficit(cfg: ResolvedConfig, alpha: float, snr: float | None = None) -> float:
    """``H_b - I`` for the scenario, optionally rescaled to mean SNR ``snr``."""
    if cfg.is_random:
        mix = cfg.mixture()
        if snr is not None:
            if snr == 0.0:
                return Prior(alpha).entropy
            mix = mix.scaled_to_mean(snr)
        return averaged_deficit(alpha, mix)
    return biawgn_deficit(alpha, cfg.snr if snr is None else snr)


def _pfa_grid(sw: Sweep) -> np.ndarray:
    if sw.pfa_spacing == "log":
        return np.geomspace(sw.pfa_min, sw.pfa_max, sw.pfa_num)
    return np.linspace(sw.pfa_min, sw.pfa_max, sw.pfa_num)


def cmd_bound(cfg: ResolvedConfig) -> Table:
    prior = Prior(cfg.alpha)
    snrs = cfg.sweep.snr_grid or (cfg.snr,)
    grid = _pfa_grid(cfg.sweep)
    rows, warnings, mis = [], [], []
    for snr in snrs:
        d = _deficit(cfg, cfg.alpha, snr if cfg.sweep.snr_grid else None)
        mi = prior.entropy - d
        mis.append(mi)
        if d <= 0.0:
            warnings.append(f"snr {snr!r}: mutual information reaches H_b(alpha); the bound is Pmd = 0")
        curve = roc_lower_bound(prior, mi, grid)
        rows += [(_to_db(snr), mi, pt.pfa, pt.pmd) for pt in curve]
    meta = {"mi_bits": mis if len(mis) > 1 else mis[0]}
    return Table(["snr_db", "mi_bits", "pfa", "pmd_bound"], rows, meta, warnings)


def cmd_energy_roc(cfg: ResolvedConfig, simulate: bool = False) -> Table:
    alpha, snr = cfg.alpha, cfg.snr
    prior = Prior(alpha)
    mi = prior.entropy - _deficit(cfg, alpha)
    mix = cfg.mixture() if cfg.is_random else None
    cols = ["kn", "theta", "pfa", "pmd", "pfa_rule", "pmd_rule", "pmd_bound"]
    if simulate:
        cols += ["pfa_mc", "pfa_mc_low", "pfa_mc_high", "pmd_mc", "pmd_mc_low", "pmd_mc_high"]
    rows = []
    for kn in cfg.sweep.kn_values or (cfg.k * cfg.n,):
        thetas = default_theta_grid(kn, snr, alpha, cfg.sweep.theta_points)
        pts = []
        for theta in thetas:
            theta = float(theta)
            if mix is None:
                c = EnergyDetectorConfig(kn, snr, alpha, theta)
                rule = rule_operating_point(c)
                pts.append((theta, pfa_analytic(c), pmd_analytic(c), rule.pfa, rule.pmd))
            else:
                pfa = pfa_analytic(EnergyDetectorConfig(kn, 0.0, alpha, theta))
                u = decision_threshold(alpha, theta)
                pfa_r = 1.0 if u <= 0 else regularized_gamma_upper(kn, u)
                pmd_r = pmd_rayleigh_at_energy(kn, mix, u)
                pts.append((theta, pfa, pmd_rayleigh(kn, mix, alpha, theta), pfa_r, pmd_r))
        bound = roc_lower_bound(prior, mi, [p[3] for p in pts])
        lookup = dict(zip(bound.pfa, bound.pmd))
        mc = None
        if simulate:
            mc = estimate_detector_roc(cfg.scenario(n=kn // cfg.k), thetas, cfg.trials)
        for i, (theta, pfa, pmd, pfa_r, pmd_r) in enumerate(pts):
            row = (kn, theta, pfa, pmd, pfa_r, pmd_r, lookup[pfa_r])
            if mc is not None:
                e = mc[i]
                row += (e.pfa.value, e.pfa.ci_low, e.pfa.ci_high,
                        e.pmd.value, e.pmd.ci_low, e.pmd.ci_high)
            rows.append(row)
    meta = {"mi_bits": mi, "decision": "busy when energy > theta + ln(min(alpha, 1 - alpha))"}
    return Table(cols, rows, meta, [])


def cmd_equilibrium(cfg: ResolvedConfig) -> Table:
    snrs = cfg.sweep.snr_grid or _grid({"start": 0.0, "stop": 20.0, "num": 21}, _db)
    rows = []
    for alpha in cfg.sweep.alphas or (cfg.alpha,):
        for snr in snrs:
            peq = equilibrium_probability(alpha, deficit=_deficit(cfg, alpha, snr))
            asym = equilibrium_asymptotic(snr) if snr > 0 else 1.0
            rows.append((alpha, _to_db(snr), snr, peq, asym))
    return Table(["alpha", "snr_db", "snr_linear", "peq", "peq_asymptotic"], rows, {}, [])


def cmd_asymptotic(cfg: ResolvedConfig, depth: int, form: str) -> Table:
    if cfg.is_random:
        raise ConfigError("the large-SNR series applies to known gains and signal only")
    snrs = cfg.sweep.snr_grid or _grid({"start": 10.0, "stop": 20.0, "num": 11}, _db)
    cols = (["alpha", "snr_db", "snr_linear", "mi_quadrature"]
            + [f"partial_{n}" for n in range(depth + 1)] + ["bracket_ok", "deficit_quadrature"]
            + [f"deficit_{n}" for n in range(depth + 1)])
    rows = []
    for alpha in cfg.sweep.alphas or (cfg.alpha,):
        prior = Prior(alpha)
        for snr in snrs:
            if snr <= 0:
                raise ConfigError("the large-SNR series needs positive SNR values")
            exact = biawgn_deficit(prior, snr)
            est = biawgn_mi_asymptotic(prior, snr, depth + 1, form)
            d = est.partial_deficits
            ok = all(min(d[i], d[i + 1]) <= exact <= max(d[i], d[i + 1])
                     for i in range(depth + 1))
            partials = [prior.entropy - x for x in d[: depth + 1]]
            # deficits keep full precision where the MI columns round to H_b
            rows.append((alpha, _to_db(snr), snr, prior.entropy - exact, *partials, ok,
                         exact, *d[: depth + 1]))
    return Table(cols, rows, {"depth": depth, "series_form": form}, [])


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_csv(command: str, cfg: ResolvedConfig, table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# generator: rocbound {__version__}\n")
    buf.write(f"# command: {command}\n")
    buf.write(f"# alpha: {cfg.alpha!r}\n")
    buf.write(f"# snr_linear: {cfg.snr!r}\n")
    buf.write(f"# snr_db: {_to_db(cfg.snr)!r}\n")
    for key, val in table.meta.items():
        buf.write(f"# {key}: {json.dumps(val)}\n")
    for w in table.warnings:
        buf.write(f"# warning: {w}\n")
    buf.write(f"# config: {json.dumps(dump_config(cfg), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _check_finite(table: Table):
    for row in table.rows:
        for v in row:
            if isinstance(v, float) and math.isnan(v):
                raise NumericalFailure("computation produced NaN")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rocbound",
        description="Information-theoretic ROC lower bounds and energy-detector baselines.",
    )
    parser.add_argument("--version", action="version", version=f"rocbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True,
                       help="scenario JSON file, or the name of a bundled scenario")
        p.add_argument("--out", help="CSV destination (default: stdout)")
        p.add_argument("--trials", type=int, help="override simulation.trials")
        p.add_argument("--seed", type=int, help="override simulation.seed")
        p.add_argument("--depth", type=int, help="override sweep.depth (series truncation)")
        p.add_argument("--series-form", choices=["additive", "half_snr"],
                       help="override sweep.form")
        p.add_argument("--simulate", action="store_true",
                       help="add Monte-Carlo columns (energy-roc)")
        p.add_argument("--dump-config", action="store_true",
                       help="print the resolved scenario as JSON and exit")
    return parser


def _apply_overrides(cfg: ResolvedConfig, args) -> ResolvedConfig:
    if args.trials is not None:
        if args.trials < 1000:
            raise ConfigError("--trials must be at least 1000")
        cfg = replace(cfg, trials=args.trials)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be nonnegative")
        cfg = replace(cfg, seed=args.seed)
    if args.depth is not None:
        if not 0 <= args.depth <= 9:
            raise ConfigError("--depth must lie in [0, 9]")
        cfg = replace(cfg, sweep=replace(cfg.sweep, depth=args.depth))
    if args.series_form is not None:
        cfg = replace(cfg, sweep=replace(cfg.sweep, form=args.series_form))
    return cfg


def run(args) -> str:
    cfg = _apply_overrides(load_scenario(args.scenario), args)
    if args.dump_config:
        return json.dumps(dump_config(cfg), indent=2, sort_keys=True) + "\n"
    if args.command == "bound":
        table = cmd_bound(cfg)
    elif args.command == "energy-roc":
        table = cmd_energy_roc(cfg, args.simulate)
    elif args.command == "equilibrium":
        table = cmd_equilibrium(cfg)
    else:
        table = cmd_asymptotic(cfg, cfg.sweep.depth, cfg.sweep.form)
    _check_finite(table)
    for w in table.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return render_csv(args.command, cfg, table)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = run(args)
    except ConfigError as exc:
        print(f"rocbound: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, ArithmeticError, ValueError) as exc:
        print(f"rocbound: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"rocbound: cannot write {args.out!r}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
