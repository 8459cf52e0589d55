"""Parameter sweeps, presets, CSV output, and the oracle report.

``run_scan`` evaluates one swap branch over a time grid with both engines,
the closed-form expressions and the generic tensor pipeline, and refuses to
emit anything on which the two disagree.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, EngineMismatch, ZeroProbabilityBranch
from .oracle import OracleParams, dispersive_deviation
from .params import SingleModeParams, TwoModeParams
from .protocol import (
    BELL_LABELS,
    CaseLabel,
    METHODS,
    closed_form_grid,
    evolve_segment,
    herald_inner_pair,
    heralded_swap,
    qed_swap,
)

# Engines must agree to this tolerance on every grid point.
ENGINE_TOLERANCE = 1e-8
# Branch probabilities below this are treated as "branch never fires":
# the row reports concurrence 0 and the engines' concurrences are not
# compared (the pipeline has no state to compare on such rows).
NEGLIGIBLE_PROBABILITY = 1e-12

DEFAULT_POINTS = 1001
DEFAULT_SPAN = 20.0

_QED_SELECTORS = ("eg", "ge")


def _config_error(message: str) -> ConfigInvalid:
    return ConfigInvalid(message)


@dataclass(frozen=True)
class ScanConfig:
    """One swap branch swept over a uniform time grid.

    ``sweep`` names the swept coordinate: ``"t"`` (segment interaction
    time) or, for the qed method only, ``"tau"`` (end of the swap stage)
    with ``fixed`` holding the frozen coordinate.
    """

    method: str
    case: CaseLabel
    selector: str
    two_mode: TwoModeParams
    start: float
    stop: float
    points: int = DEFAULT_POINTS
    sweep: str = "t"
    single_mode: SingleModeParams | None = None
    fixed: float | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise _config_error(f"method must be one of {METHODS}, got {self.method!r}")
        if self.points < 2:
            raise _config_error(f"points must be at least 2, got {self.points}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise _config_error("grid bounds must be finite")
        if not self.start < self.stop:
            raise _config_error(f"start must be below stop, got [{self.start}, {self.stop}]")
        if self.method == "bsm":
            if self.selector not in BELL_LABELS:
                raise _config_error(
                    f"bsm selector must be one of {BELL_LABELS}, got {self.selector!r}"
                )
            if self.sweep != "t":
                raise _config_error("bsm scans sweep 't' only")
            if self.start < 0:
                raise _config_error("times must be nonnegative")
        else:
            if self.selector not in _QED_SELECTORS:
                raise _config_error(
                    f"qed selector must be one of {_QED_SELECTORS}, got {self.selector!r}"
                )
            if self.single_mode is None:
                raise _config_error("qed scans need single-mode cavity parameters")
            if self.sweep not in ("t", "tau"):
                raise _config_error(f"sweep must be 't' or 'tau', got {self.sweep!r}")
            if self.fixed is None or not np.isfinite(self.fixed):
                raise _config_error("qed scans need the non-swept time in 'fixed'")
            if self.sweep == "tau":
                # fixed is t; the whole tau grid must satisfy tau >= t >= 0.
                if self.fixed < 0:
                    raise _config_error("times must be nonnegative")
                if self.start < self.fixed:
                    raise _config_error(
                        f"tau grid must start at or after t={self.fixed}, got {self.start}"
                    )
            else:
                # fixed is tau; the whole t grid must satisfy 0 <= t <= tau.
                if self.start < 0:
                    raise _config_error("times must be nonnegative")
                if self.stop > self.fixed:
                    raise _config_error(
                        f"t grid must end at or before tau={self.fixed}, got {self.stop}"
                    )

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def _format_value(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class ScanTable:
    """Result of one scan, one row per grid point."""

    times: np.ndarray
    concurrence: np.ndarray
    probability: np.ndarray
    case: str
    method: str
    outcome: str

    HEADER = "time,concurrence,probability,case,method,outcome"

    def to_csv_text(self) -> str:
        lines = [self.HEADER]
        for t, c, p in zip(self.times, self.concurrence, self.probability):
            lines.append(
                f"{_format_value(t)},{_format_value(c)},{_format_value(p)},"
                f"{self.case},{self.method},{self.outcome}"
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OracleReportTable:
    """Per-time deviation of the exact propagator from the effective one."""

    times: np.ndarray
    deviation: np.ndarray
    leakage: np.ndarray

    HEADER = "time,deviation,leakage"

    def to_csv_text(self) -> str:
        lines = [self.HEADER]
        for t, d, l in zip(self.times, self.deviation, self.leakage):
            lines.append(f"{_format_value(t)},{_format_value(d)},{_format_value(l)}")
        return "\n".join(lines) + "\n"


def emit_csv(table, path) -> None:
    """Write a result table as CSV with LF line endings."""
    with open(path, "w", newline="") as fh:
        fh.write(table.to_csv_text())


def _pipeline_point(cfg: ScanConfig, value: float) -> tuple[float, float]:
    try:
        if cfg.method == "bsm":
            result = heralded_swap(cfg.case, "bsm", cfg.two_mode, value, cfg.selector)
        elif cfg.sweep == "t":
            result = heralded_swap(
                cfg.case,
                "qed",
                cfg.two_mode,
                value,
                cfg.selector,
                single_mode=cfg.single_mode,
                tau=cfg.fixed,
            )
        else:  # handled separately in run_scan; kept for completeness
            result = heralded_swap(
                cfg.case,
                "qed",
                cfg.two_mode,
                cfg.fixed,
                cfg.selector,
                single_mode=cfg.single_mode,
                tau=value,
            )
    except ZeroProbabilityBranch:
        return 0.0, 0.0
    return result.concurrence, result.probability


def _pipeline_curve(cfg: ScanConfig, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    conc = np.empty(grid.size)
    prob = np.empty(grid.size)
    if cfg.method == "qed" and cfg.sweep == "tau":
        # The heralded segments do not depend on tau; build them once.
        left = herald_inner_pair(evolve_segment(cfg.two_mode, cfg.fixed), cfg.case.left, (2, 3))
        right = herald_inner_pair(evolve_segment(cfg.two_mode, cfg.fixed), cfg.case.right, (6, 7))
        for i, tau in enumerate(grid):
            try:
                result = qed_swap(left, right, cfg.single_mode, cfg.fixed, float(tau), cfg.selector)
                conc[i], prob[i] = result.concurrence, result.probability
            except ZeroProbabilityBranch:
                conc[i], prob[i] = 0.0, 0.0
        return conc, prob
    for i, value in enumerate(grid):
        conc[i], prob[i] = _pipeline_point(cfg, float(value))
    return conc, prob


def run_scan(cfg: ScanConfig) -> ScanTable:
    """Sweep one swap branch and cross-check the two engines on every row.

    Returns
    -------
    ScanTable
        Closed-form values; rows whose branch probability falls below
        ``NEGLIGIBLE_PROBABILITY`` report concurrence 0.

    Raises
    ------
    EngineMismatch
        If closed form and pipeline disagree beyond ``ENGINE_TOLERANCE``
        anywhere on the grid.
    """
    grid = cfg.grid()
    if cfg.method == "bsm":
        t_arr, tau_arr = grid, None
    elif cfg.sweep == "tau":
        t_arr, tau_arr = np.full(grid.size, float(cfg.fixed)), grid
    else:
        t_arr, tau_arr = grid, np.full(grid.size, float(cfg.fixed))

    conc_formula, prob_formula = closed_form_grid(
        cfg.case,
        cfg.method,
        cfg.two_mode,
        t_arr,
        selector=cfg.selector,
        single_mode=cfg.single_mode,
        tau=tau_arr,
    )
    conc_pipeline, prob_pipeline = _pipeline_curve(cfg, grid)

    prob_gap = np.abs(prob_formula - prob_pipeline)
    if np.any(prob_gap > ENGINE_TOLERANCE):
        i = int(np.argmax(prob_gap))
        raise EngineMismatch(
            f"probability gap {prob_gap[i]:.3e} at grid point {i} "
            f"({'tau' if cfg.sweep == 'tau' else 't'}={grid[i]:.6g})"
        )
    comparable = np.minimum(prob_formula, prob_pipeline) >= NEGLIGIBLE_PROBABILITY
    conc_gap = np.abs(conc_formula - conc_pipeline)
    bad = comparable & (conc_gap > ENGINE_TOLERANCE)
    if np.any(bad):
        i = int(np.argmax(np.where(bad, conc_gap, 0.0)))
        raise EngineMismatch(
            f"concurrence gap {conc_gap[i]:.3e} at grid point {i} "
            f"({'tau' if cfg.sweep == 'tau' else 't'}={grid[i]:.6g})"
        )

    concurrence = np.where(prob_formula >= NEGLIGIBLE_PROBABILITY, conc_formula, 0.0)
    return ScanTable(
        times=grid,
        concurrence=concurrence,
        probability=prob_formula,
        case=str(cfg.case),
        method=cfg.method,
        outcome=cfg.selector,
    )


def run_oracle_report(
    params: OracleParams,
    start: float = 0.0,
    stop: float = 10.0,
    points: int = 201,
) -> OracleReportTable:
    """Tabulate exact-versus-effective deviation over a time grid."""
    if points < 2:
        raise _config_error(f"points must be at least 2, got {points}")
    if not (np.isfinite(start) and np.isfinite(stop)) or not start < stop or start < 0:
        raise _config_error(f"bad oracle time grid [{start}, {stop}]")
    times = np.linspace(start, stop, points)
    deviation, leakage = dispersive_deviation(params, times)
    return OracleReportTable(times=times, deviation=deviation, leakage=leakage)


# ---------------------------------------------------------------------------
# Presets


@dataclass(frozen=True)
class Preset:
    config: ScanConfig
    note: str


def _bsm_preset(g2: float, g3: float, delta3: float, bell: str, note: str) -> Preset:
    return Preset(
        ScanConfig(
            method="bsm",
            case=CaseLabel("ge", "ge"),
            selector=bell,
            two_mode=TwoModeParams(g2=g2, g3=g3, delta2=2.0, delta3=delta3),
            start=0.0,
            stop=DEFAULT_SPAN,
        ),
        note,
    )


def _qed_preset(case: CaseLabel, g3: float, delta3: float, gt: float, note: str) -> Preset:
    return Preset(
        ScanConfig(
            method="qed",
            case=case,
            selector="eg",
            two_mode=TwoModeParams(g2=1.0, g3=g3, delta2=2.0, delta3=delta3),
            single_mode=SingleModeParams(g=1.0, delta=2.0),
            sweep="tau",
            fixed=gt,
            start=gt,
            stop=gt + DEFAULT_SPAN,
        ),
        note,
    )


_CASE_A = CaseLabel("ge", "ge")
_CASE_B = CaseLabel("eg", "eg")
_CASE_C = CaseLabel("ge", "eg")


def _build_presets() -> dict[str, Preset]:
    presets: dict[str, Preset] = {}

    # Bell-measurement sweeps: equal couplings against a 3x asymmetry.
    for panel, bell, what in (("a", "psi_plus", "concurrence"), ("b", "phi_plus", "success")):
        presets[f"fig2{panel}-symmetric"] = _bsm_preset(
            1.0, 1.0, 3.0, bell, f"swap {what}, equal couplings, detunings 2 and 3"
        )
        presets[f"fig2{panel}-asymmetric"] = _bsm_preset(
            1.0, 3.0, 3.0, bell, f"swap {what}, 3x coupling asymmetry, detunings 2 and 3"
        )

    # Bell-measurement sweeps: raising the second detuning halves the period.
    for panel, bell, what in (("a", "psi_plus", "concurrence"), ("b", "phi_plus", "success")):
        presets[f"fig3{panel}-delta3g"] = _bsm_preset(
            1.0, 3.0, 3.0, bell, f"swap {what}, asymmetric couplings, second detuning 3"
        )
        presets[f"fig3{panel}-delta10g"] = _bsm_preset(
            1.0, 3.0, 10.0, bell, f"swap {what}, asymmetric couplings, second detuning 10"
        )

    # Cavity-swap sweeps over the stage end time tau at fixed t.
    for panel, case in (("a", _CASE_A), ("b", _CASE_B), ("c", _CASE_C)):
        presets[f"fig4{panel}-delta3g"] = _qed_preset(
            case, 5.0, 3.0, 10.0, f"cavity swap, case {case}, second detuning 3, t=10"
        )
        presets[f"fig4{panel}-delta20g"] = _qed_preset(
            case, 5.0, 20.0, 10.0, f"cavity swap, case {case}, second detuning 20, t=10"
        )
        presets[f"fig5{panel}-gt2"] = _qed_preset(
            case, 5.0, 3.0, 2.0, f"cavity swap, case {case}, heralded early at t=2"
        )
        presets[f"fig5{panel}-gt10"] = _qed_preset(
            case, 5.0, 3.0, 10.0, f"cavity swap, case {case}, heralded late at t=10"
        )
        presets[f"fig6{panel}-coupling1g"] = _qed_preset(
            case, 1.0, 10.0, 10.0, f"cavity swap, case {case}, equal couplings, detuning 10"
        )
        presets[f"fig6{panel}-coupling5g"] = _qed_preset(
            case, 5.0, 10.0, 10.0, f"cavity swap, case {case}, 5x coupling, detuning 10"
        )
    return presets


PRESETS: dict[str, Preset] = _build_presets()


def preset_config(name: str) -> ScanConfig:
    """Configuration of a named preset; raises ConfigInvalid if unknown."""
    try:
        return PRESETS[name].config
    except KeyError:
        raise _config_error(f"unknown preset {name!r}; see 'list-presets'") from None


# ---------------------------------------------------------------------------
# Flat key = value configuration files


def parse_key_values(path) -> dict[str, str]:
    """Read a flat ``key = value`` file with ``#`` comments."""
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise _config_error(f"cannot read config file {path}: {exc}") from exc
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise _config_error(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        if key in mapping:
            raise _config_error(f"{path}:{lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def _take_float(mapping: dict[str, str], key: str, default: float | None = None) -> float | None:
    if key not in mapping:
        return default
    try:
        return float(mapping[key])
    except ValueError:
        raise _config_error(f"key {key!r} must be a number, got {mapping[key]!r}") from None


def _take_int(mapping: dict[str, str], key: str, default: int) -> int:
    if key not in mapping:
        return default
    try:
        return int(mapping[key])
    except ValueError:
        raise _config_error(f"key {key!r} must be an integer, got {mapping[key]!r}") from None


_SCAN_KEYS = {
    "method",
    "case",
    "selector",
    "g2",
    "g3",
    "delta2",
    "delta3",
    "qed_g",
    "qed_delta",
    "sweep",
    "start",
    "stop",
    "points",
    "fixed",
}


def scan_config_from_mapping(mapping: dict[str, str]) -> ScanConfig:
    """Build a ScanConfig from a flat key/value mapping."""
    unknown = sorted(set(mapping) - _SCAN_KEYS)
    if unknown:
        raise _config_error(f"unknown scan keys: {', '.join(unknown)}")
    for key in ("method", "case", "selector", "g2", "g3", "delta2", "delta3"):
        if key not in mapping:
            raise _config_error(f"missing required scan key {key!r}")
    method = mapping["method"]
    try:
        case = CaseLabel.from_string(mapping["case"])
        two_mode = TwoModeParams(
            g2=_take_float(mapping, "g2"),
            g3=_take_float(mapping, "g3"),
            delta2=_take_float(mapping, "delta2"),
            delta3=_take_float(mapping, "delta3"),
        )
    except ValueError as exc:
        raise _config_error(str(exc)) from None

    single_mode = None
    if method == "qed":
        for key in ("qed_g", "qed_delta", "fixed"):
            if key not in mapping:
                raise _config_error(f"missing required qed key {key!r}")
        try:
            single_mode = SingleModeParams(
                g=_take_float(mapping, "qed_g"), delta=_take_float(mapping, "qed_delta")
            )
        except ValueError as exc:
            raise _config_error(str(exc)) from None
    elif "qed_g" in mapping or "qed_delta" in mapping or "fixed" in mapping:
        raise _config_error("qed_g/qed_delta/fixed apply to the qed method only")

    sweep = mapping.get("sweep", "t" if method == "bsm" else "tau")
    fixed = _take_float(mapping, "fixed")
    if method == "bsm":
        start = _take_float(mapping, "start", 0.0)
        stop = _take_float(mapping, "stop", DEFAULT_SPAN)
    elif sweep == "tau":
        start = _take_float(mapping, "start", fixed)
        stop = _take_float(mapping, "stop", (fixed or 0.0) + DEFAULT_SPAN)
    else:
        start = _take_float(mapping, "start", 0.0)
        stop = _take_float(mapping, "stop", fixed)
    return ScanConfig(
        method=method,
        case=case,
        selector=mapping["selector"],
        two_mode=two_mode,
        single_mode=single_mode,
        sweep=sweep,
        start=start,
        stop=stop,
        points=_take_int(mapping, "points", DEFAULT_POINTS),
        fixed=fixed,
    )


_ORACLE_KEYS = {
    "kind",
    "omega",
    "omega_prime",
    "omega2",
    "omega3",
    "g2",
    "g3",
    "atom_omega",
    "g",
    "start",
    "stop",
    "points",
}


def oracle_config_from_mapping(
    mapping: dict[str, str],
) -> tuple[OracleParams, tuple[float, float, int]]:
    """Build oracle parameters and a report grid from a flat mapping."""
    unknown = sorted(set(mapping) - _ORACLE_KEYS)
    if unknown:
        raise _config_error(f"unknown oracle keys: {', '.join(unknown)}")
    kind = mapping.get("kind")
    if kind not in ("two_mode", "single_mode"):
        raise _config_error("oracle key 'kind' must be 'two_mode' or 'single_mode'")
    try:
        if kind == "two_mode":
            for key in ("omega", "omega_prime", "omega2", "omega3", "g2", "g3"):
                if key not in mapping:
                    raise _config_error(f"missing required oracle key {key!r}")
            params = OracleParams.two_mode(
                omega=_take_float(mapping, "omega"),
                omega_prime=_take_float(mapping, "omega_prime"),
                atom_omegas=(_take_float(mapping, "omega2"), _take_float(mapping, "omega3")),
                couplings=(_take_float(mapping, "g2"), _take_float(mapping, "g3")),
            )
        else:
            for key in ("omega", "atom_omega", "g"):
                if key not in mapping:
                    raise _config_error(f"missing required oracle key {key!r}")
            params = OracleParams.single_mode(
                omega=_take_float(mapping, "omega"),
                atom_omega=_take_float(mapping, "atom_omega"),
                coupling=_take_float(mapping, "g"),
            )
    except ValueError as exc:
        raise _config_error(str(exc)) from None
    grid = (
        _take_float(mapping, "start", 0.0),
        _take_float(mapping, "stop", 10.0),
        _take_int(mapping, "points", 201),
    )
    return params, grid
