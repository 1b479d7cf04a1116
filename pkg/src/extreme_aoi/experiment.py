"""
Experiment configuration, presets and the report-producing commands.

Configuration is layered: preset < config file < command-line flags. Each
layer is a flat mapping of ``"section.key"`` strings to raw values; the
merged mapping is validated into an :class:`ExperimentConfig`.

Config file grammar (INI, parsed with :mod:`configparser`)::

    file     := { comment | section | entry }
    comment  := ("#" | ";") text EOL
    section  := "[" name "]" EOL        ; system, run, risk, tolerances,
                                        ; output, sweep, tail
    entry    := key ("=" | ":") value EOL

Keys are case-sensitive. Lists are comma-separated. Power keys may carry a
``_dbm`` suffix (``tx_power_Pt_dbm``, ``noise_power_N0_dbm``); every other
value is in SI units. ``[system]`` takes either physical keys or the
direct override pair ``g`` and ``p``, never both in one layer.
"""
import configparser
import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field, fields
from typing import Dict, Optional, Tuple

import numpy as np

from . import analytics, risk
from .analytics import RegimeWarning
from .model import SystemParams, dbm_to_watts, derive
from .sim import RunConfig, replicate_and_merge, stream
from .specfun import DomainError

SCHEMA_VERSION = 1

SYSTEM_KEYS = tuple(f.name for f in fields(SystemParams))
OVERRIDE_KEYS = ("g", "p")
SWEEPABLE = ("alpha", "tx_power_Pt", "antennas_N", "capacitor_size_S", "dist_comm_dc")

DEFAULT_ALPHAS = (0.7, 0.8, 0.9, 0.95, 0.99)
DEFAULT_TOLERANCES = {"mean": 0.005, "variance": 0.02, "success_rate": 0.005, "var_0.95": 0.10}

_FIG_COMMON = {
    "system.conversion_eta": 0.5,
    "system.atten_w": 1e3,
    "system.pathloss_alpha": 2.4,
    "system.rate_R": 0.1,
    "system.antennas_N": 1,
    "system.tx_power_Pt_dbm": 40.0,
}

# The noise power is not given for any figure; each preset picks N0 and the
# implied outage probability is reported with every analysis.
PRESETS: Dict[str, Dict[str, object]] = {
    # g ~ 10, N0 chosen so that p ~ 0.5
    "fig2-g10": {**_FIG_COMMON, "system.capacitor_size_S": 2e-4, "system.noise_power_N0": 7.69e-9,
                 "system.dist_comm_dc": 10.0, "system.dist_energy_de": 10.0},
    # g ~ 100, N0 chosen so that p ~ 0.2
    "fig2-g100": {**_FIG_COMMON, "system.capacitor_size_S": 2e-4, "system.noise_power_N0": 2.5e-10,
                  "system.dist_comm_dc": 26.0, "system.dist_energy_de": 26.0},
    # N0 = 1e-9 W keeps p low at d = 10 m (p ~ 0.165 here, ~ 0.018 for S = 1e-3)
    "fig3-S1e-4": {**_FIG_COMMON, "system.capacitor_size_S": 1e-4, "system.noise_power_N0": 1e-9,
                   "system.dist_comm_dc": 10.0, "system.dist_energy_de": 10.0},
    "fig3-S1e-3": {**_FIG_COMMON, "system.capacitor_size_S": 1e-3, "system.noise_power_N0": 1e-9,
                   "system.dist_comm_dc": 10.0, "system.dist_energy_de": 10.0},
    # N0 = 1e-9 W: p ~ 0.086 at d = 10 m and ~ 0.59 at d = 26 m for N = 1
    "fig4": {**_FIG_COMMON, "system.capacitor_size_S": 2e-4, "system.noise_power_N0": 1e-9,
             "system.dist_comm_dc": 10.0, "system.dist_energy_de": 10.0,
             "sweep.param": "tx_power_Pt", "sweep.scale": "dbm", "sweep.from": 30.0,
             "sweep.to": 50.0, "sweep.steps": 21, "risk.alphas": "0.95"},
    # unbounded antenna array: direct override with p = 0
    "massive-n": {"system.g": 10.0, "system.p": 0.0},
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"

    def grid(self):
        if self.steps < 1:
            raise ConfigError("sweep.steps", "grid is empty")
        if self.scale == "log":
            if self.start <= 0 or self.stop <= 0:
                raise ConfigError("sweep.from", "log scale needs positive bounds")
            values = np.geomspace(self.start, self.stop, self.steps)
        elif self.scale in ("linear", "dbm"):
            values = np.linspace(self.start, self.stop, self.steps)
        else:
            raise ConfigError("sweep.scale", f"unknown scale {self.scale!r}")
        values = values.tolist()
        if self.param == "antennas_N":
            values = [float(round(v)) for v in values]
        diffs = np.diff(values)
        if len(values) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigError("sweep", "grid must be strictly monotone")
        return values


@dataclass(frozen=True)
class ExperimentConfig:
    system: Optional[SystemParams] = None
    g: Optional[float] = None
    p: Optional[float] = None
    mode: str = "analytic"
    cycles: int = 10 ** 6
    replications: int = 1
    seed: int = 20220101
    block_B: int = 1
    workers: int = 1
    alphas: Tuple[float, ...] = DEFAULT_ALPHAS
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out: Optional[str] = None
    format: str = "json"
    sweep: Optional[SweepSpec] = None
    self_test: bool = False
    tail_depth: float = 0.99
    bins: int = 200

    def gp(self):
        """``(g, p, theta)``; theta is None for a direct override."""
        if self.system is not None:
            d = derive(self.system)
            return d.g, d.p, d.snr_threshold_theta
        return self.g, self.p, None

    def run_config(self):
        return RunConfig(mode=self.mode, params=self.system, g=self.g, p=self.p, block_B=self.block_B)


# -- layering ----------------------------------------------------------------

def read_config_file(path):
    """Parse an INI config file into a flat ``section.key`` layer."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError("config", str(exc)) from exc
    return {f"{s}.{k}": v for s in parser.sections() for k, v in parser.items(s)}


def _system_kind(layer):
    keys = {k.split(".", 1)[1] for k in layer if k.startswith("system.")}
    has_override = bool(keys & set(OVERRIDE_KEYS))
    has_physical = bool(keys - set(OVERRIDE_KEYS))
    if has_override and has_physical:
        raise ConfigError("system", "give either physical parameters or the (g, p) override, not both")
    return "override" if has_override else ("physical" if has_physical else None)


def merge_layers(*layers):
    """
    Merge layers left to right; later layers win key by key.

    A layer that sets the ``(g, p)`` override drops physical system keys
    from earlier layers, and vice versa.
    """
    merged = {}
    for layer in layers:
        if not layer:
            continue
        kind = _system_kind(layer)
        if kind == "override":
            merged = {k: v for k, v in merged.items()
                      if not (k.startswith("system.") and k.split(".", 1)[1] not in OVERRIDE_KEYS)}
        elif kind == "physical":
            merged = {k: v for k, v in merged.items()
                      if k not in ("system.g", "system.p")}
        for key in layer:
            # a watts key and its _dbm twin name the same quantity
            twin = key[:-4] if key.endswith("_dbm") else key + "_dbm"
            merged.pop(twin, None)
        merged.update(layer)
    return merged


def _num(layer, key, kind=float, default=None):
    if key not in layer:
        return default
    raw = layer[key]
    try:
        if kind is int:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind is bool:
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text in ("1", "true", "yes", "on"):
                return True
            if text in ("0", "false", "no", "off"):
                return False
            raise ValueError
        value = float(raw)
        if not math.isfinite(value):
            raise ValueError
        return value
    except (TypeError, ValueError):
        raise ConfigError(key.split(".", 1)[1] if key.count(".") else key,
                          f"cannot parse {raw!r} as {kind.__name__}") from None


def parse_alphas(raw):
    if isinstance(raw, str):
        parts = [s for s in raw.replace(" ", "").split(",") if s]
    else:
        parts = list(raw)
    try:
        alphas = tuple(float(a) for a in parts)
    except ValueError:
        raise ConfigError("alphas", f"cannot parse {raw!r}") from None
    if not alphas:
        raise ConfigError("alphas", "at least one confidence level is required")
    if any(not 0.0 < a < 1.0 for a in alphas):
        raise ConfigError("alphas", "every confidence level must lie in (0, 1)")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ConfigError("alphas", "confidence levels must be strictly increasing")
    return alphas


def parse_tolerances(layer):
    tol = {}
    for key, raw in layer.items():
        if key.startswith("tolerances."):
            name = key.split(".", 1)[1]
            try:
                value = float(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"tolerances.{name}", f"cannot parse {raw!r}") from None
            if not value >= 0:
                raise ConfigError(f"tolerances.{name}", "tolerance must be >= 0")
            tol[name] = value
    return tol


def build_config(layer):
    """Validate a merged layer into an :class:`ExperimentConfig`."""
    known_sections = {"system", "run", "risk", "tolerances", "output", "sweep", "tail"}
    for key in layer:
        if "." not in key or key.split(".", 1)[0] not in known_sections:
            raise ConfigError(key, "unknown section")

    kind = _system_kind(layer)
    system = g = p = None
    if kind == "override":
        g = _num(layer, "system.g")
        p = _num(layer, "system.p")
        if g is None or p is None:
            raise ConfigError("system", "the override needs both g and p")
        if not g > 0:
            raise ConfigError("g", "must be > 0")
        if not 0.0 <= p < 1.0:
            raise ConfigError("p", "must lie in [0, 1)")
    elif kind == "physical":
        kwargs = {}
        for key in layer:
            if not key.startswith("system."):
                continue
            name = key.split(".", 1)[1]
            if name.endswith("_dbm"):
                base = name[:-4]
                if base not in ("tx_power_Pt", "noise_power_N0"):
                    raise ConfigError(name, "only powers accept a _dbm suffix")
                kwargs[base] = dbm_to_watts(_num(layer, key))
            elif name in SYSTEM_KEYS:
                kwargs[name] = _num(layer, key, int if name == "antennas_N" else float)
            else:
                raise ConfigError(name, "unknown system parameter")
        for required in ("capacitor_size_S",):
            if required not in kwargs:
                raise ConfigError(required, "missing")
        if "noise_power_N0" not in kwargs:
            if kwargs.get("snr_scale") is None:
                raise ConfigError("noise_power_N0", "missing (or give snr_scale)")
            kwargs["noise_power_N0"] = kwargs["capacitor_size_S"] / kwargs["snr_scale"]
        try:
            system = SystemParams(**kwargs)
            derive(system)
        except DomainError as exc:
            name = str(exc).split(" ", 1)[0]
            raise ConfigError(name if name in SYSTEM_KEYS else "system", str(exc)) from None
    else:
        raise ConfigError("system", "no system parameters, preset or (g, p) override given")

    mode = str(layer.get("run.mode", "analytic"))
    if mode not in ("physical", "analytic"):
        raise ConfigError("mode", f"must be physical or analytic, got {mode!r}")
    if mode == "physical" and system is None:
        raise ConfigError("mode", "physical mode needs physical system parameters")
    cycles = _num(layer, "run.cycles", int, 10 ** 6)
    if cycles < 1:
        raise ConfigError("cycles", "must be >= 1")
    replications = _num(layer, "run.replications", int, 1)
    if not 1 <= replications <= cycles:
        raise ConfigError("replications", "must lie in 1..cycles")
    seed = _num(layer, "run.seed", int, 20220101)
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("seed", "must be an unsigned 64-bit integer")
    block_B = _num(layer, "run.block_B", int, 1)
    if block_B < 1:
        raise ConfigError("block_B", "must be >= 1")
    workers = _num(layer, "run.workers", int, 1)

    alphas = parse_alphas(layer.get("risk.alphas", DEFAULT_ALPHAS))
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(parse_tolerances(layer))

    fmt = str(layer.get("output.format", "json"))
    if fmt not in ("json", "csv"):
        raise ConfigError("format", f"must be csv or json, got {fmt!r}")
    out = layer.get("output.path")

    sweep = None
    if "sweep.param" in layer:
        param = str(layer["sweep.param"])
        if param not in SWEEPABLE:
            raise ConfigError("sweep.param", f"unknown parameter {param!r}; choose from {', '.join(SWEEPABLE)}")
        start = _num(layer, "sweep.from")
        stop = _num(layer, "sweep.to")
        if start is None or stop is None:
            raise ConfigError("sweep", "from and to are required")
        scale = str(layer.get("sweep.scale", "linear"))
        if scale == "dbm" and param != "tx_power_Pt":
            raise ConfigError("sweep.scale", "dbm scale only applies to tx_power_Pt")
        sweep = SweepSpec(param=param, start=start, stop=stop,
                          steps=_num(layer, "sweep.steps", int, 10), scale=scale)

    tail_depth = _num(layer, "tail.depth", float, 0.99)
    if not 0.0 < tail_depth < 1.0:
        raise ConfigError("tail.depth", "must lie in (0, 1)")
    bins = _num(layer, "tail.bins", int, 200)
    if bins < 1:
        raise ConfigError("tail.bins", "must be >= 1")

    return ExperimentConfig(system=system, g=g, p=p, mode=mode, cycles=cycles,
                            replications=replications, seed=seed, block_B=block_B,
                            workers=workers, alphas=alphas, tolerances=tolerances, out=out,
                            format=fmt, sweep=sweep,
                            self_test=_num(layer, "tail.self_test", bool, False),
                            tail_depth=tail_depth, bins=bins)


def load_config(preset=None, config_path=None, flags=None):
    """Resolve preset < config file < flags into an :class:`ExperimentConfig`."""
    layers = []
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        layers.append(dict(PRESETS[preset]))
    if config_path is not None:
        layers.append(read_config_file(config_path))
    if flags:
        layers.append(flags)
    return build_config(merge_layers(*layers))


# -- rendering ---------------------------------------------------------------

def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and not all(isinstance(item, dict) for item in obj):
        # a list of scalars becomes one semicolon-joined cell
        yield prefix[:-1], ";".join(_fmt(item) for item in obj)
    elif isinstance(obj, list):
        for item in obj:
            key = item.get("alpha", item.get("metric")) if isinstance(item, dict) else None
            rest = {k: v for k, v in item.items() if k not in ("alpha", "metric")}
            yield from _flatten(rest, f"{prefix}{key}.")
    else:
        yield prefix[:-1], obj


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(report, fmt):
    """Render a report dict as JSON (stable key order) or two-column CSV."""
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False, allow_nan=True) + "\n"
    return csv_text(("key", "value"), [(k, _fmt(v)) for k, v in _flatten(report)])


def csv_text(header, rows, comments=()):
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# -- commands ----------------------------------------------------------------

def _fit(g, p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        return analytics.gumbel_fit(analytics.aoi_moments(g, p))


def analyze(config):
    """Closed-form pipeline: g, p, AoI moments, Gumbel fit, VaR/CVaR per alpha."""
    g, p, theta = config.gp()
    moments = analytics.aoi_moments(g, p)
    fit = _fit(g, p)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "g": g,
        "p": p,
        "theta": theta,
        "mean_aoi": moments.mean_aoi,
        "var_aoi": moments.var_aoi,
        "gumbel": {"mu": fit.mu_hat, "sigma": fit.sigma_hat, "validity_Lg": fit.validity_Lg,
                   "regime_warning": fit.regime_warning},
        "risk": [{"alpha": a, "var": risk.var_at(fit, a), "cvar": risk.cvar_at(fit, a)}
                 for a in config.alphas],
    }


def run_simulation(config):
    return replicate_and_merge(config.run_config(), config.cycles, config.replications,
                               config.seed, workers=config.workers)


def _tail_samples(stats):
    return stats.block_maxima if stats.block_B > 1 else stats.peak_samples


def simulate(config, stats=None):
    """Simulation pipeline; returns ``(report, stats)``."""
    if stats is None:
        stats = run_simulation(config)
    g, p, _ = config.gp()
    samples = _tail_samples(stats)
    rows = []
    for a in config.alphas:
        try:
            rows.append({"alpha": a, "var": risk.empirical_var(samples, a),
                         "cvar": risk.empirical_cvar(samples, a)})
        except risk.InsufficientSamplesError:
            rows.append({"alpha": a, "var": None, "cvar": None})
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "mode": config.mode,
        "seed": config.seed,
        "cycles": stats.cycles_K,
        "replications": config.replications,
        "block_B": config.block_B,
        "g": g,
        "p": p,
        "empirical": {
            "mean_aoi": stats.empirical_mean_aoi,
            "var_cycle": stats.empirical_var_cycle,
            "var_sawtooth": stats.empirical_var_sawtooth,
            "success_rate": stats.success_rate,
            "total_slots": stats.total_slots_M,
            "attempts": stats.attempts,
        },
        "risk": rows,
    }
    return report, stats


def _rel(emp, ref):
    if ref == 0:
        return abs(emp)
    return abs(emp - ref) / abs(ref)


def validate(config, stats=None):
    """
    Compare simulation against closed forms.

    Metrics: ``mean``, ``variance``, ``success_rate``, ``var_<alpha>`` and
    ``cvar_<alpha>`` (empirical tail of the peak samples vs. the Gumbel
    fit). A metric passes when its relative error is strictly below its
    tolerance. With ``p == 0`` the unbounded-array limits are checked too.
    """
    if stats is None:
        stats = run_simulation(config)
    g, p, _ = config.gp()
    moments = analytics.aoi_moments(g, p)
    fit = _fit(g, p)
    samples = _tail_samples(stats)
    metrics = []

    def add(name, tol_key, emp, ref):
        if tol_key not in config.tolerances:
            return
        err = _rel(emp, ref)
        tol = config.tolerances[tol_key]
        metrics.append({"metric": name, "analytic": ref, "empirical": emp,
                        "rel_error": err, "tolerance": tol, "pass": bool(err < tol)})

    add("mean", "mean", stats.empirical_mean_aoi, moments.mean_aoi)
    add("variance", "variance", stats.empirical_var_cycle, moments.var_aoi)
    add("success_rate", "success_rate", stats.success_rate, 1.0 - p)
    if p == 0.0:
        add("mean_massive_n", "mean", stats.empirical_mean_aoi, analytics.average_aoi_massive_n(g))
        add("variance_massive_n", "variance", stats.empirical_var_cycle,
            analytics.aoi_variance_massive_n(g))
    for key in sorted(config.tolerances):
        for prefix, emp_fn, ref_fn in (("var_", risk.empirical_var, risk.var_at),
                                       ("cvar_", risk.empirical_cvar, risk.cvar_at)):
            if key.startswith(prefix):
                try:
                    a = float(key[len(prefix):])
                except ValueError:
                    raise ConfigError(f"tolerances.{key}", "expected var_<alpha> or cvar_<alpha>") from None
                add(key, key, emp_fn(samples, a), ref_fn(fit, a))
    failed = [m["metric"] for m in metrics if not m["pass"]]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "validate",
        "mode": config.mode,
        "seed": config.seed,
        "cycles": stats.cycles_K,
        "replications": config.replications,
        "g": g,
        "p": p,
        "metrics": metrics,
        "failed": failed,
        "passed": not failed,
    }
    return report


def _alpha_label(a):
    return repr(float(a))


def sweep(config):
    """
    Closed-form sweep of one parameter; returns CSV text.

    Columns ``param,value,g,p,mean_aoi,var_aoi`` then ``var_<a>`` and
    ``cvar_<a>`` per configured alpha. An ``alpha`` sweep instead ends in
    ``var,cvar`` evaluated at the row's own level. For the ``dbm`` scale the
    parameter is reported as ``tx_power_Pt_dbm`` and the value in dBm.
    """
    spec = config.sweep
    if spec is None:
        raise ConfigError("sweep", "no sweep parameter given")
    grid = spec.grid()
    if spec.param != "alpha" and config.system is None:
        raise ConfigError("sweep.param", f"sweeping {spec.param} needs physical system parameters")

    if spec.param == "alpha":
        header = ["param", "value", "g", "p", "mean_aoi", "var_aoi", "var", "cvar"]
        if any(not 0.0 < a < 1.0 for a in grid):
            raise ConfigError("sweep", "alpha grid must lie in (0, 1)")
    else:
        header = ["param", "value", "g", "p", "mean_aoi", "var_aoi"]
        header += [f"var_{_alpha_label(a)}" for a in config.alphas]
        header += [f"cvar_{_alpha_label(a)}" for a in config.alphas]

    rows = []
    for value in grid:
        if spec.param == "alpha":
            g, p, _ = config.gp()
            alphas = (value,)
            name = "alpha"
        else:
            if spec.scale == "dbm":
                system = config.system.with_(tx_power_Pt=dbm_to_watts(value))
                name = "tx_power_Pt_dbm"
            else:
                system = config.system.with_(**{spec.param: int(value) if spec.param == "antennas_N"
                                                else value})
                name = spec.param
            d = derive(system)
            g, p = d.g, d.p
            alphas = config.alphas
        fit = _fit(g, p)
        row = [name, _fmt(value), _fmt(g), _fmt(p), _fmt(analytics.average_aoi(g, p)),
               _fmt(analytics.aoi_variance(g, p))]
        row += [_fmt(risk.var_at(fit, a)) for a in alphas]
        row += [_fmt(risk.cvar_at(fit, a)) for a in alphas]
        rows.append(row)
    return csv_text(header, rows)


TAIL_QUANTILES = (0.9, 0.95, 0.99, 0.999)


def tail(config, stats=None):
    """
    Empirical vs. Gumbel distribution of the extreme AoI; returns CSV text.

    Samples are the per-cycle peak AoI (block maxima when ``block_B > 1``),
    or, in self-test mode, ``cycles`` draws from the fitted Gumbel law
    itself. Columns ``x,ecdf,gumbel_cdf,epdf,gumbel_pdf``: ``x`` is a bin
    center, ``ecdf`` the fraction of samples ``<= x``, ``epdf`` the bin
    count over ``n * bin_width``. Integer samples use unit bins centered on
    the integers; continuous samples use ``bins`` equal bins over the
    sample range. Comment rows carry ``bin_width`` and the right-tail
    comparison at quantiles 0.9 to 0.999.
    """
    g, p, _ = config.gp()
    fit = _fit(g, p)
    if config.self_test:
        rng = stream(config.seed, 0)
        u = rng.random(config.cycles)
        samples = fit.mu_hat - fit.sigma_hat * np.log(-np.log(u))
        integer = False
    else:
        if stats is None:
            stats = run_simulation(config)
        samples = _tail_samples(stats)
        integer = True
    n = samples.size
    if n == 0:
        raise risk.InsufficientSamplesError("no samples")
    need = math.ceil(1.0 / (1.0 - config.tail_depth) - 1e-9)
    if n < need:
        raise risk.InsufficientSamplesError(
            f"tail depth {config.tail_depth} needs at least {need} samples, got {n}")

    sorted_samples = np.sort(samples)
    lo, hi = float(sorted_samples[0]), float(sorted_samples[-1])
    if integer:
        width = 1.0
        centers = np.arange(lo, hi + 1.0)
        counts = np.bincount((samples - int(lo)).astype(np.int64), minlength=centers.size)
    else:
        width = (hi - lo) / config.bins if hi > lo else 1.0
        edges = lo + width * np.arange(config.bins + 1)
        counts, _ = np.histogram(samples, bins=edges)
        centers = 0.5 * (edges[:-1] + edges[1:])
    ecdf = np.searchsorted(sorted_samples, centers, side="right") / n
    epdf = counts / (n * width)

    comments = [f"bin_width={_fmt(float(width))}", f"n={n}",
                f"source={'gumbel_self_test' if config.self_test else 'peak_aoi'}",
                f"gumbel_mu={_fmt(fit.mu_hat)}", f"gumbel_sigma={_fmt(fit.sigma_hat)}"]
    for q in TAIL_QUANTILES:
        if n >= math.ceil(1.0 / (1.0 - q) - 1e-9) and q <= max(config.tail_depth, TAIL_QUANTILES[0]):
            emp = risk.empirical_var(samples, q)
            comments.append(f"tail q={q} empirical={_fmt(emp)} gumbel={_fmt(risk.var_at(fit, q))} "
                            f"gumbel_cdf_at_empirical={_fmt(analytics.gumbel_cdf(emp, fit))}")
    rows = [(_fmt(float(x)), _fmt(float(e)), _fmt(analytics.gumbel_cdf(float(x), fit)),
             _fmt(float(d)), _fmt(analytics.gumbel_pdf(float(x), fit)))
            for x, e, d in zip(centers, ecdf, epdf)]
    return csv_text(("x", "ecdf", "gumbel_cdf", "epdf", "gumbel_pdf"), rows, comments)
