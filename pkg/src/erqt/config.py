"""Scenario files: parsing, validation, normalization and execution.

The on-disk format is YAML; ``docs/config_format.md`` documents the grammar.
"""

from __future__ import annotations

import csv
import itertools
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
import yaml

from .current import (
    MARKOVIAN_ONLY,
    Method,
    compute_current,
    continuum_transmission,
    current_landauer_continuum,
)
from .errors import (
    ConfigError,
    ErqtError,
    NotProportionalError,
    QuadratureError,
    SingularMatrixError,
    UndampedSubspaceError,
    UnsupportedKindError,
)
from .model import (
    BiasSpec,
    JunctionModel,
    RelaxationKind,
    Reservoir,
    Side,
    discretize_band,
    make_proportional_right,
)
from .quadrature import QuadratureSpec

CSV_HEADER = [
    "scenario", "param_name", "param_value", "method", "current",
    "abs_error", "n_eval", "wall_time_s", "diagnostics",
]
SWEEP_PARAMETERS = ("gamma_scale", "bias_delta", "n_modes")
ERROR_FLAGS = frozenset({
    "not_proportional", "quadrature_warn", "undamped_subspace",
    "unsupported_kind", "singular_matrix", "error",
})


@dataclass(frozen=True)
class ExplicitModes:
    # (omega, gamma, coupling) per mode
    modes: tuple[tuple[float, float, tuple[complex, ...]], ...]


@dataclass(frozen=True)
class ProportionalTo:
    lam: float


@dataclass(frozen=True)
class BandSpec:
    profile: float | tuple[tuple[float, ...], tuple[float, ...]]
    omega_range: tuple[float, float]
    n_modes: int
    scheme: str = "uniform"
    gamma_rule: str = "spacing"
    gamma: float = 1.0
    site: int = 0


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    hamiltonian: tuple[tuple[complex, ...], ...]
    left: ExplicitModes | BandSpec
    right: ExplicitModes | BandSpec | ProportionalTo
    bias: BiasSpec
    kind: RelaxationKind
    methods: tuple[Method, ...]
    sweep: SweepSpec | None = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    output_path: str | None = None
    output_format: str = "csv"

    @property
    def n_system(self) -> int:
        return len(self.hamiltonian)


# --- parsing ------------------------------------------------------------------


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads ``1e-5`` (no decimal point) as a float."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
    |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
    |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
    |[-+]?\.(?:inf|Inf|INF)
    |\.(?:nan|NaN|NAN))$""", re.VERBOSE),
    list("-+0123456789."),
)


def _take(d: dict, path: str, allowed: set[str]):
    if not isinstance(d, dict):
        raise ConfigError("expected a mapping", path)
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) {sorted(extra)}", path)
    return d


def _num(x, path, *, positive=False, nonneg=False) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"expected a number, got {x!r}", path)
    x = float(x)
    if not math.isfinite(x):
        raise ConfigError("must be finite", path)
    if positive and not x > 0:
        raise ConfigError(f"must be > 0, got {x}", path)
    if nonneg and x < 0:
        raise ConfigError(f"must be >= 0, got {x}", path)
    return x


def _cplx(x, path) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(_num(x[0], path), _num(x[1], path))
    return complex(_num(x, path), 0.0)


def _parse_system(d, path):
    d = _take(d, path, {"preset", "epsilon", "hamiltonian"})
    if ("preset" in d) == ("hamiltonian" in d):
        raise ConfigError("give exactly one of 'preset' or 'hamiltonian'", path)
    if "preset" in d:
        if d["preset"] != "single-level":
            raise ConfigError(f"unknown preset {d['preset']!r} (known: single-level)", path + ".preset")
        eps = _num(d.get("epsilon", 0.0), path + ".epsilon")
        return ((complex(eps),),)
    if "epsilon" in d:
        raise ConfigError("'epsilon' only applies to a preset", path)
    rows = d["hamiltonian"]
    p = path + ".hamiltonian"
    if not isinstance(rows, list) or not rows:
        raise ConfigError("expected a nonempty list of rows", p)
    H = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(rows):
            raise ConfigError(f"row must have {len(rows)} entries", f"{p}[{i}]")
        H.append(tuple(_cplx(x, f"{p}[{i}][{j}]") for j, x in enumerate(row)))
    arr = np.array(H)
    scale = max(np.max(np.abs(arr)), 1e-300)
    if np.max(np.abs(arr - arr.conj().T)) > 1e-12 * scale:
        raise ConfigError("hamiltonian is not Hermitian", p)
    return tuple(H)


def _parse_modes(items, path, n_system):
    if not isinstance(items, list) or not items:
        raise ConfigError("expected a nonempty list of modes", path)
    modes = []
    for i, m in enumerate(items):
        p = f"{path}[{i}]"
        m = _take(m, p, {"omega", "gamma", "coupling"})
        for key in ("omega", "gamma", "coupling"):
            if key not in m:
                raise ConfigError(f"missing '{key}'", p)
        omega = _num(m["omega"], p + ".omega")
        gamma = _num(m["gamma"], p + ".gamma")
        if not gamma > 0:
            raise ConfigError(f"mode {i}: gamma must be > 0, got {gamma}", p + ".gamma")
        c = m["coupling"]
        if not isinstance(c, list):
            raise ConfigError("coupling must be a list of [re, im] pairs", p + ".coupling")
        if len(c) != n_system:
            raise ConfigError(f"coupling has {len(c)} entries, system has {n_system}", p + ".coupling")
        modes.append((omega, gamma, tuple(_cplx(x, f"{p}.coupling[{j}]") for j, x in enumerate(c))))
    return ExplicitModes(tuple(modes))


def _parse_band(d, path, n_system):
    d = _take(d, path, {"profile", "range", "n_modes", "scheme", "gamma_rule", "site"})
    for key in ("profile", "range", "n_modes"):
        if key not in d:
            raise ConfigError(f"missing '{key}'", path)
    prof = _take(d["profile"], path + ".profile", {"flat", "tabulated"})
    if len(prof) != 1:
        raise ConfigError("give exactly one of 'flat' or 'tabulated'", path + ".profile")
    if "flat" in prof:
        profile = _num(prof["flat"], path + ".profile.flat", nonneg=True)
    else:
        p = path + ".profile.tabulated"
        tab = _take(prof["tabulated"], p, {"omega", "values"})
        grid = tuple(_num(x, p + ".omega") for x in tab.get("omega", []))
        vals = tuple(_num(x, p + ".values", nonneg=True) for x in tab.get("values", []))
        if len(grid) < 2 or len(grid) != len(vals) or any(b <= a for a, b in itertools.pairwise(grid)):
            raise ConfigError("needs matching, increasing 'omega' and 'values' lists", p)
        profile = (grid, vals)
    rng = d["range"]
    if not isinstance(rng, list) or len(rng) != 2:
        raise ConfigError("expected [omega_min, omega_max]", path + ".range")
    lo, hi = (_num(x, path + ".range") for x in rng)
    if not hi > lo:
        raise ConfigError("omega_max must exceed omega_min", path + ".range")
    n = d["n_modes"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigError("must be a positive integer", path + ".n_modes")
    scheme = d.get("scheme", "uniform")
    if scheme not in ("uniform", "midpoint-gauss"):
        raise ConfigError(f"unknown scheme {scheme!r}", path + ".scheme")
    rule = _take(d.get("gamma_rule", {"spacing": 1.0}), path + ".gamma_rule", {"spacing", "constant"})
    if len(rule) != 1:
        raise ConfigError("give exactly one of 'spacing' or 'constant'", path + ".gamma_rule")
    (rule_name, c), = rule.items()
    c = _num(c, f"{path}.gamma_rule.{rule_name}", positive=True)
    site = d.get("site", 0)
    if isinstance(site, bool) or not isinstance(site, int) or not 0 <= site < n_system:
        raise ConfigError(f"site must be an integer in [0, {n_system})", path + ".site")
    return BandSpec(profile, (lo, hi), n, scheme, rule_name, c, site)


def _parse_reservoir(d, path, n_system, allow_proportional):
    d = _take(d, path, {"modes", "band", "proportional"})
    present = [k for k in ("modes", "band", "proportional") if k in d]
    if len(present) != 1:
        raise ConfigError("give exactly one of 'modes', 'band' or 'proportional'", path)
    key = present[0]
    if key == "modes":
        return _parse_modes(d["modes"], path + ".modes", n_system)
    if key == "band":
        return _parse_band(d["band"], path + ".band", n_system)
    if not allow_proportional:
        raise ConfigError("'proportional' is only allowed for the right reservoir", path)
    p = _take(d["proportional"], path + ".proportional", {"lambda"})
    if "lambda" not in p:
        raise ConfigError("missing 'lambda'", path + ".proportional")
    return ProportionalTo(_num(p["lambda"], path + ".proportional.lambda", nonneg=True))


def _from_tree(tree: Any) -> ScenarioConfig:
    top = _take(tree, "<root>", {"scenario", "system", "reservoirs", "bias", "relaxation", "run", "output"})
    for key in ("system", "reservoirs", "bias", "run"):
        if key not in top:
            raise ConfigError(f"missing section '{key}'", "<root>")
    scenario = str(top.get("scenario", "scenario"))
    if any(ch in scenario for ch in ",\n\r\""):
        raise ConfigError("scenario id may not contain commas, quotes or newlines", "scenario")
    H = _parse_system(top["system"], "system")
    ns = len(H)

    res = _take(top["reservoirs"], "reservoirs", {"left", "right"})
    if "left" not in res or "right" not in res:
        raise ConfigError("both 'left' and 'right' are required", "reservoirs")
    left = _parse_reservoir(res["left"], "reservoirs.left", ns, False)
    right = _parse_reservoir(res["right"], "reservoirs.right", ns, True)

    b = _take(top["bias"], "bias", {"mu_L", "mu_R", "T_L", "T_R"})
    for key in ("mu_L", "mu_R"):
        if key not in b:
            raise ConfigError(f"missing '{key}'", "bias")
    bias = BiasSpec(
        _num(b["mu_L"], "bias.mu_L"), _num(b["mu_R"], "bias.mu_R"),
        _num(b.get("T_L", 0.0), "bias.T_L", nonneg=True), _num(b.get("T_R", 0.0), "bias.T_R", nonneg=True),
    )

    rel = _take(top.get("relaxation", {}), "relaxation", {"kind"})
    try:
        kind = RelaxationKind(rel.get("kind", "markovian"))
    except ValueError:
        raise ConfigError("kind must be 'markovian' or 'nonmarkovian'", "relaxation.kind") from None

    run = _take(top["run"], "run", {"methods", "sweep", "quadrature"})
    raw_methods = run.get("methods")
    if not isinstance(raw_methods, list) or not raw_methods:
        raise ConfigError("expected a nonempty list of methods", "run.methods")
    methods = []
    for i, m in enumerate(raw_methods):
        try:
            method = Method(m)
        except ValueError:
            raise ConfigError(
                f"unknown method {m!r} (known: {', '.join(x.value for x in Method)})", f"run.methods[{i}]"
            ) from None
        if method in MARKOVIAN_ONLY and kind is not RelaxationKind.MARKOVIAN:
            raise ConfigError(
                f"method '{method.value}' is unsupported for relaxation kind '{kind.value}' "
                "(defined only for Markovian relaxation)", f"run.methods[{i}]",
            )
        if method is Method.LANDAUER_CONTINUUM and not isinstance(left, BandSpec):
            raise ConfigError("landauer_continuum needs band reservoirs", f"run.methods[{i}]")
        if method is Method.LANDAUER_CONTINUUM and isinstance(right, ExplicitModes):
            raise ConfigError("landauer_continuum needs band reservoirs", f"run.methods[{i}]")
        if method in methods:
            raise ConfigError(f"method '{method.value}' listed twice", f"run.methods[{i}]")
        methods.append(method)

    sweep = None
    if run.get("sweep") is not None:
        sw = _take(run["sweep"], "run.sweep", {"parameter", "values"})
        param = sw.get("parameter")
        if param not in SWEEP_PARAMETERS:
            raise ConfigError(f"parameter must be one of {list(SWEEP_PARAMETERS)}", "run.sweep.parameter")
        vals = sw.get("values")
        if not isinstance(vals, list) or not vals:
            raise ConfigError("expected a nonempty list", "run.sweep.values")
        if param == "n_modes":
            if not (isinstance(left, BandSpec) or isinstance(right, BandSpec)):
                raise ConfigError("n_modes sweeps need a band reservoir", "run.sweep.parameter")
            if any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in vals):
                raise ConfigError("n_modes values must be positive integers", "run.sweep.values")
            values = tuple(float(v) for v in vals)
        else:
            values = tuple(
                _num(v, f"run.sweep.values[{i}]", positive=(param == "gamma_scale")) for i, v in enumerate(vals)
            )
        sweep = SweepSpec(param, values)

    q = _take(run.get("quadrature", {}), "run.quadrature",
              {"abs_tol", "rel_tol", "max_subdivisions", "window_padding_factor"})
    defaults = QuadratureSpec()
    mx = q.get("max_subdivisions", defaults.max_subdivisions)
    if isinstance(mx, bool) or not isinstance(mx, int) or mx < 1:
        raise ConfigError("must be a positive integer", "run.quadrature.max_subdivisions")
    quad = QuadratureSpec(
        _num(q.get("abs_tol", defaults.abs_tol), "run.quadrature.abs_tol", positive=True),
        _num(q.get("rel_tol", defaults.rel_tol), "run.quadrature.rel_tol", positive=True),
        mx,
        _num(q.get("window_padding_factor", defaults.window_padding_factor),
             "run.quadrature.window_padding_factor", positive=True),
    )

    out = _take(top.get("output", {}), "output", {"path", "format"})
    fmt = out.get("format", "csv")
    if fmt != "csv":
        raise ConfigError("only 'csv' output is supported", "output.format")
    path = out.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("must be a string", "output.path")

    cfg = ScenarioConfig(scenario, H, left, right, bias, kind, tuple(methods), sweep, quad, path, fmt)
    try:
        build_junction(cfg)
    except ErqtError as exc:
        raise ConfigError(str(exc), "reservoirs") from None
    return cfg


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate a YAML scenario."""
    try:
        tree = yaml.load(text, Loader=_Loader)  # a SafeLoader subclass
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else None
        raise ConfigError(f"YAML parse error: {exc.problem}", f"line {line}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"YAML parse error: {exc}") from None
    return _from_tree(tree)


# --- normalization ------------------------------------------------------------


def _pair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def _reservoir_tree(r):
    if isinstance(r, ExplicitModes):
        return {"modes": [
            {"omega": w, "gamma": g, "coupling": [_pair(c) for c in v]} for w, g, v in r.modes
        ]}
    if isinstance(r, ProportionalTo):
        return {"proportional": {"lambda": r.lam}}
    if isinstance(r.profile, tuple):
        profile = {"tabulated": {"omega": list(r.profile[0]), "values": list(r.profile[1])}}
    else:
        profile = {"flat": r.profile}
    return {"band": {
        "profile": profile, "range": list(r.omega_range), "n_modes": r.n_modes,
        "scheme": r.scheme, "gamma_rule": {r.gamma_rule: r.gamma}, "site": r.site,
    }}


def config_to_tree(cfg: ScenarioConfig) -> dict:
    run = {"methods": [m.value for m in cfg.methods]}
    if cfg.sweep is not None:
        values = list(cfg.sweep.values)
        if cfg.sweep.parameter == "n_modes":
            values = [int(v) for v in values]
        run["sweep"] = {"parameter": cfg.sweep.parameter, "values": values}
    q = cfg.quadrature
    run["quadrature"] = {
        "abs_tol": q.abs_tol, "rel_tol": q.rel_tol,
        "max_subdivisions": q.max_subdivisions, "window_padding_factor": q.window_padding_factor,
    }
    out = {"format": cfg.output_format}
    if cfg.output_path is not None:
        out["path"] = cfg.output_path
    return {
        "scenario": cfg.scenario,
        "system": {"hamiltonian": [[_pair(c) for c in row] for row in cfg.hamiltonian]},
        "reservoirs": {"left": _reservoir_tree(cfg.left), "right": _reservoir_tree(cfg.right)},
        "bias": {"mu_L": cfg.bias.mu_L, "mu_R": cfg.bias.mu_R, "T_L": cfg.bias.T_L, "T_R": cfg.bias.T_R},
        "relaxation": {"kind": cfg.kind.value},
        "run": run,
        "output": out,
    }


def dump_config(cfg: ScenarioConfig) -> str:
    """Normalized YAML with every default spelled out."""
    return yaml.safe_dump(config_to_tree(cfg), sort_keys=False, default_flow_style=None)


# --- building models ----------------------------------------------------------


def _build_reservoir(spec, n_system, side, n_modes=None):
    if isinstance(spec, ExplicitModes):
        return Reservoir(
            [m[0] for m in spec.modes], [m[1] for m in spec.modes],
            np.array([m[2] for m in spec.modes], dtype=complex), side,
        )
    return discretize_band(
        spec.profile, spec.omega_range, n_modes or spec.n_modes, scheme=spec.scheme,
        gamma=spec.gamma, gamma_rule=spec.gamma_rule, site=spec.site, n_system=n_system, label=side,
    )


def build_junction(cfg: ScenarioConfig, *, n_modes: int | None = None, gamma_scale: float = 1.0) -> JunctionModel:
    ns = cfg.n_system
    left = _build_reservoir(cfg.left, ns, Side.L, n_modes)
    if isinstance(cfg.right, ProportionalTo):
        right = make_proportional_right(left, cfg.right.lam)
    else:
        right = _build_reservoir(cfg.right, ns, Side.R, n_modes)
    j = JunctionModel(np.array(cfg.hamiltonian, dtype=complex), left, right, cfg.kind)
    return j if gamma_scale == 1.0 else j.scaled_gammas(gamma_scale)


def _band_broadening(spec: BandSpec, n_system):
    """Continuum broadening on the coupled site as a function of frequency."""
    lo, hi = spec.omega_range
    if isinstance(spec.profile, tuple):
        grid, vals = (np.asarray(x) for x in spec.profile)
        dens = lambda w: np.interp(w, grid, vals, left=0.0, right=0.0)
    else:
        dens = lambda w: np.full(np.shape(w), spec.profile)

    def gamma(w):
        w = np.atleast_1d(w)
        out = np.zeros((w.size, n_system, n_system), dtype=complex)
        inside = (w >= lo) & (w <= hi)
        out[:, spec.site, spec.site] = np.where(inside, dens(w), 0.0)
        return out

    return gamma


def build_transmission(cfg: ScenarioConfig):
    """Relaxation-free continuum transmission for band reservoirs."""
    ns = cfg.n_system
    gl = _band_broadening(cfg.left, ns)
    if isinstance(cfg.right, ProportionalTo):
        lam = cfg.right.lam
        gr = lambda w: lam * gl(w)
        band = cfg.left.omega_range
    else:
        gr = _band_broadening(cfg.right, ns)
        band = (min(cfg.left.omega_range[0], cfg.right.omega_range[0]),
                max(cfg.left.omega_range[1], cfg.right.omega_range[1]))
    return continuum_transmission(np.array(cfg.hamiltonian, dtype=complex), gl, gr, band=band)


# --- running --------------------------------------------------------------------


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    param_name: str
    param_value: float | None
    method: str
    current: float
    abs_error: float
    n_eval: int
    wall_time_s: float
    diagnostics: tuple[str, ...] = ()

    @property
    def is_error(self) -> bool:
        return any(flag in ERROR_FLAGS for flag in self.diagnostics)


def _flag_for(exc: Exception) -> str:
    if isinstance(exc, NotProportionalError):
        return "not_proportional"
    if isinstance(exc, QuadratureError):
        return "quadrature_warn"
    if isinstance(exc, UndampedSubspaceError):
        return "undamped_subspace"
    if isinstance(exc, UnsupportedKindError):
        return "unsupported_kind"
    if isinstance(exc, SingularMatrixError):
        return "singular_matrix"
    return "error"


def _point_setup(cfg: ScenarioConfig, value: float | None):
    bias, n_modes, scale = cfg.bias, None, 1.0
    if cfg.sweep is not None:
        if cfg.sweep.parameter == "gamma_scale":
            scale = value
        elif cfg.sweep.parameter == "n_modes":
            n_modes = int(value)
        else:
            center = 0.5 * (cfg.bias.mu_L + cfg.bias.mu_R)
            bias = BiasSpec(center + 0.5 * value, center - 0.5 * value, cfg.bias.T_L, cfg.bias.T_R)
    return bias, n_modes, scale


def _run_point(cfg: ScenarioConfig, value: float | None) -> list[ResultRow]:
    name = cfg.sweep.parameter if cfg.sweep is not None else ""
    bias, n_modes, scale = _point_setup(cfg, value)
    rows = []
    try:
        junction = build_junction(cfg, n_modes=n_modes, gamma_scale=scale)
        setup_error = None
    except ErqtError as exc:
        setup_error = exc
    for method in cfg.methods:
        t0 = time.perf_counter()
        flags = []
        current, err, n_eval = math.nan, math.nan, 0
        try:
            if setup_error is not None:
                raise setup_error
            if method is Method.LANDAUER_CONTINUUM:
                res = current_landauer_continuum(build_transmission(cfg), bias, cfg.quadrature)
            else:
                res = compute_current(junction, bias, method, cfg.quadrature)
            current, err, n_eval = res.value, res.abs_error_estimate, res.n_evaluations
        except (ErqtError, np.linalg.LinAlgError) as exc:
            flags.append(_flag_for(exc))
            if isinstance(exc, QuadratureError) and exc.value is not None:
                current = float(np.real(exc.value))
                err = float(exc.abs_error)
                n_eval = exc.n_evaluations
        if bias.is_equilibrium and math.isfinite(current) and abs(current) > 10 * cfg.quadrature.abs_tol:
            flags.append("zero_bias_anomaly")
        rows.append(ResultRow(
            cfg.scenario, name, value, method.value, float(current), float(err), int(n_eval),
            time.perf_counter() - t0, tuple(flags),
        ))
    return rows


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> list[ResultRow]:
    """Evaluate every (sweep value, method) pair; rows come back in declared order."""
    points = list(cfg.sweep.values) if cfg.sweep is not None else [None]
    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda v: _run_point(cfg, v), points))
    else:
        chunks = [_run_point(cfg, v) for v in points]
    return [row for chunk in chunks for row in chunk]


def _fmt(x: float) -> str:
    return format(x, ".17g")


def emit_csv(rows: list[ResultRow], path) -> None:
    """Write rows with the fixed header; floats use 17 significant digits."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_csv_rows(rows, fh)
    except OSError as exc:
        raise ErqtError(f"cannot write {path}: {exc}") from exc


def write_csv_rows(rows: list[ResultRow], fh) -> None:
    """Write the header and rows to an open text stream."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.scenario, r.param_name,
            "" if r.param_value is None else _fmt(r.param_value),
            r.method, _fmt(r.current), _fmt(r.abs_error), str(r.n_eval),
            _fmt(r.wall_time_s), ";".join(r.diagnostics),
        ])


def with_output(cfg: ScenarioConfig, path: str | None) -> ScenarioConfig:
    return cfg if path is None else replace(cfg, output_path=path)
