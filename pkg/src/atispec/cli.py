"""Command-line front end.

Subcommands: `ati spectrum`, `ati rate`, `ati sweep`, `ati selftest`.
Configuration is a flat JSON file; command-line flags override file values.
Inputs are in eV (converted with the fixed electron rest energy
510998.95 eV); all outputs are in natural units (m = 1).

Outputs are deterministic: identical configuration produces byte-identical
CSV/JSON regardless of worker count or repetition.  Exit codes: 0 ok,
1 selftest failure, 2 configuration error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .constants import ATOMIC_FIELD_V_PER_CM, E_CHARGE, ELECTRON_MASS_EV
from .kinematics import (
    Atom,
    ChannelExplosionError,
    LaserField,
    derive_params,
    threshold_n,
)
from .rates import (
    AsymptoticsError,
    DegenerateSaddleError,
    GridSpec,
    RateSummary,
    rate_airy,
    rate_closed,
    rate_direct,
    saddle_point,
    REGIME_MULTIPHOTON,
    REGIME_TUNNELING,
)
from .selftest import run_checks
from .spectra import dwdo_circular, dwdo_general, dwdo_linear, dwdo_nonrel

__all__ = ["main", "RunConfig", "ConfigError", "run_spectrum", "run_rate", "run_sweep"]

CSV_HEADER = "N,theta_rad,phi_rad,dwdo,kfr_only_dwdo,rescatter_factor,formula_tag"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    photon_energy_ev: float
    intensity_xi: float | None = None
    peak_field_v_per_cm: float | None = None
    polarization: str = "circular"
    zeta: float | None = None
    z_a: int = 1
    binding_energy_ev: float | None = None
    theta_points: int = 24
    phi_points: int = 8
    n_range: object = "auto"
    mode: str = "on"
    output_path: str = "ati_out"
    formula: str = "relativistic"
    workers: int = 1
    channel_cap: int = 200_000

    _ALLOWED = (
        "photon_energy_ev", "intensity_xi", "peak_field_v_per_cm", "polarization",
        "zeta", "z_a", "binding_energy_ev", "theta_points", "phi_points",
        "n_range", "mode", "output_path", "formula", "workers", "channel_cap",
    )

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        for key in raw:
            if key not in cls._ALLOWED:
                raise ConfigError(f"unknown config field '{key}'")
        if "photon_energy_ev" not in raw:
            raise ConfigError("missing required field 'photon_energy_ev'")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self):
        if not self.photon_energy_ev > 0:
            raise ConfigError("field 'photon_energy_ev' must be positive")
        have = [k for k in ("intensity_xi", "peak_field_v_per_cm") if getattr(self, k) is not None]
        if len(have) != 1:
            raise ConfigError(
                "exactly one of 'intensity_xi' / 'peak_field_v_per_cm' must be given"
            )
        if self.polarization not in ("circular", "linear", "elliptic"):
            raise ConfigError("field 'polarization' must be circular | linear | elliptic")
        if self.polarization == "elliptic" and self.zeta is None:
            raise ConfigError("field 'zeta' is required for elliptic polarization")
        if self.zeta is not None and not abs(self.zeta) <= 1:
            raise ConfigError("field 'zeta' must satisfy |zeta| <= 1")
        if int(self.z_a) < 1:
            raise ConfigError("field 'z_a' must be a positive integer")
        if self.theta_points < 8:
            raise ConfigError("field 'theta_points' must be >= 8")
        if self.phi_points < 1:
            raise ConfigError("field 'phi_points' must be >= 1")
        if self.mode not in ("on", "off"):
            raise ConfigError("field 'mode' must be on | off")
        if self.formula not in ("relativistic", "nonrelativistic", "both"):
            raise ConfigError("field 'formula' must be relativistic | nonrelativistic | both")
        if self.n_range != "auto":
            ok = (isinstance(self.n_range, (list, tuple)) and len(self.n_range) == 2
                  and all(isinstance(v, int) for v in self.n_range)
                  and self.n_range[0] <= self.n_range[1])
            if not ok:
                raise ConfigError("field 'n_range' must be 'auto' or [n_lo, n_hi]")
        if self.workers < 1:
            raise ConfigError("field 'workers' must be >= 1")

    # -- unit conversion ---------------------------------------------------
    @property
    def omega(self) -> float:
        return self.photon_energy_ev / ELECTRON_MASS_EV

    @property
    def xi(self) -> float:
        if self.intensity_xi is not None:
            return float(self.intensity_xi)
        f_internal = (self.peak_field_v_per_cm / ATOMIC_FIELD_V_PER_CM) * E_CHARGE**5
        return E_CHARGE * f_internal / self.omega

    @property
    def zeta_value(self) -> float:
        if self.polarization == "circular":
            return 1.0
        if self.polarization == "linear":
            return 0.0
        return float(self.zeta)

    def field(self) -> LaserField:
        return LaserField(self.omega, self.xi, self.zeta_value)

    def atom(self) -> Atom:
        if self.binding_energy_ev is None:
            return Atom.from_charge(int(self.z_a))
        return Atom.with_binding(int(self.z_a), self.binding_energy_ev / ELECTRON_MASS_EV)


def load_config(path: str, overrides: dict) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_dict(raw)


# --------------------------------------------------------------------------
# deterministic serialization

def _fmt(x) -> str:
    """Shortest round-trip decimal of a double."""
    return repr(float(x))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n",
                    newline="\n")


def _saddle_dict(field, atom):
    try:
        s = saddle_point(field, atom)
    except (DegenerateSaddleError, ValueError) as exc:
        return None, str(exc)
    return {
        "n_m": s.n_m, "theta_m": s.theta_m, "y_m": s.y_m,
        "delta_n": s.delta_n, "delta_theta": s.delta_theta, "regime": s.regime,
    }, None


def _summary(cfg: RunConfig, warnings: list[str]) -> dict:
    field, atom = cfg.field(), cfg.atom()
    dp = derive_params(field, atom)
    saddle, saddle_note = _saddle_dict(field, atom)
    out = {
        "derived": {
            "omega": field.omega, "xi": field.xi, "zeta": field.zeta,
            "m_star": dp.m_star, "alpha_prime": dp.alpha_prime, "n0": dp.n0,
            "f0": dp.f0, "f_at": dp.f_at, "v_mean": dp.v_mean,
            "born_ratio": None if math.isinf(dp.born_ratio) else dp.born_ratio,
        },
        "atom": {
            "z_a": atom.z_a, "binding_energy": atom.e_b,
            "hydrogenic": atom.hydrogenic, "radius": atom.a,
        },
        "saddle": saddle,
        "validity": {
            "born_ok": dp.born_ok,
            "field_off": field.xi == 0.0,
        },
        "warnings": list(warnings),
    }
    if saddle_note:
        out["saddle_note"] = saddle_note
    if not dp.born_ok:
        out["warnings"].append(
            "Born condition violated: born_ratio exceeds the configured limit"
        )
    return out


# --------------------------------------------------------------------------
# spectrum

def _auto_n_range(field, atom, cap) -> tuple[int, int]:
    n0 = threshold_n(field, atom)
    try:
        s = saddle_point(field, atom)
        hi = int(math.ceil(s.n_m + 6.0 * s.delta_n))
    except (DegenerateSaddleError, ValueError):
        hi = n0 + 50
    if hi - n0 + 1 > cap:
        raise ChannelExplosionError(f"{hi - n0 + 1} channels exceed cap {cap}")
    return n0, hi


def _spectrum_evaluator(cfg: RunConfig, field, atom, tagset: str):
    resc = cfg.mode == "on"
    if tagset == "relativistic":
        if abs(field.zeta) == 1.0:
            return lambda n, th, ph: dwdo_circular(field, atom, n, th, resc)
        if field.zeta == 0.0:
            return lambda n, th, ph: dwdo_linear(field, atom, n, th, ph, resc)
        return lambda n, th, ph: dwdo_general(field, atom, n, th, ph, resc)
    pol = cfg.polarization
    if pol == "elliptic":
        raise ConfigError("nonrelativistic formulas support circular or linear polarization only")
    return lambda n, th, ph: dwdo_nonrel(field, atom, n, th, pol, resc)


def run_spectrum(cfg: RunConfig) -> int:
    field, atom = cfg.field(), cfg.atom()
    if cfg.n_range == "auto":
        n_lo, n_hi = _auto_n_range(field, atom, cfg.channel_cap)
    else:
        n_lo, n_hi = int(cfg.n_range[0]), int(cfg.n_range[1])
        if n_hi - n_lo + 1 > cfg.channel_cap:
            raise ChannelExplosionError(
                f"{n_hi - n_lo + 1} channels exceed cap {cfg.channel_cap}"
            )
    thetas = np.linspace(0.0, math.pi, cfg.theta_points)
    phis = 2.0 * math.pi * np.arange(cfg.phi_points) / cfg.phi_points

    tagsets = {"relativistic": ["relativistic"],
               "nonrelativistic": ["nonrelativistic"],
               "both": ["relativistic", "nonrelativistic"]}[cfg.formula]

    outdir = Path(cfg.output_path)
    outdir.mkdir(parents=True, exist_ok=True)
    lines = [CSV_HEADER]
    for tagset in tagsets:
        ev = _spectrum_evaluator(cfg, field, atom, tagset)
        for n in range(n_lo, n_hi + 1):
            for th in thetas:
                for ph in phis:
                    pt = ev(n, float(th), float(ph))
                    lines.append(",".join([
                        str(pt.n), _fmt(th), _fmt(ph), _fmt(pt.dwdo),
                        _fmt(pt.dwdo_kfr_only), _fmt(pt.rescatter_factor),
                        str(pt.formula_tag),
                    ]))
    (outdir / "spectrum.csv").write_text("\n".join(lines) + "\n", newline="\n")
    _write_json(outdir / "summary.json", _summary(cfg, []))
    return 0


# --------------------------------------------------------------------------
# rate

def _rate_entry(rs: RateSummary) -> dict:
    return {"w_total": rs.w_total, "grid_report": rs.grid_report,
            "warnings": list(rs.warnings)}


def collect_rates(cfg: RunConfig) -> dict:
    field, atom = cfg.field(), cfg.atom()
    grid = GridSpec(theta_points=max(cfg.theta_points, 8),
                    phi_points=cfg.phi_points,
                    n_cut=None if cfg.n_range == "auto" else int(cfg.n_range[1]),
                    channel_cap=cfg.channel_cap,
                    workers=cfg.workers)
    resc = cfg.mode == "on"
    methods: dict = {}
    direct = rate_direct(field, atom, grid, rescattering=resc)
    methods["direct"] = _rate_entry(direct)
    regime = direct.regime
    if abs(field.zeta) == 1.0:
        try:
            methods["airy_numeric"] = _rate_entry(rate_airy(field, atom))
        except AsymptoticsError:
            pass
    if regime == REGIME_MULTIPHOTON:
        methods["strongfield_closed"] = _rate_entry(rate_closed(field, atom))
    elif regime == REGIME_TUNNELING:
        methods["tunneling_closed"] = _rate_entry(rate_closed(field, atom))
    saddle, _ = _saddle_dict(field, atom)
    return {"regime": regime, "saddle": saddle, "methods": methods}


def run_rate(cfg: RunConfig) -> int:
    outdir = Path(cfg.output_path)
    outdir.mkdir(parents=True, exist_ok=True)
    payload = _summary(cfg, [])
    payload.update(collect_rates(cfg))
    _write_json(outdir / "rate.json", payload)
    return 0


# --------------------------------------------------------------------------
# sweep

SWEEPABLE = ("intensity_xi", "photon_energy_ev", "z_a", "binding_energy_ev")


def run_sweep(cfg: RunConfig, vary: str, values: list[float]) -> int:
    key = {"xi": "intensity_xi"}.get(vary, vary)
    if key not in SWEEPABLE:
        raise ConfigError(f"--vary must be one of {('xi',) + SWEEPABLE}")
    outdir = Path(cfg.output_path)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = ["value,n0,n_m,theta_m,y_m,regime,w_direct,w_airy,w_closed,closed_method"]
    detail = []
    for v in values:
        v_cast = int(v) if key == "z_a" else float(v)
        # every swept point gets its own auto channel window
        sub = replace(cfg, **{key: v_cast}, n_range="auto")
        sub.validate()
        field, atom = sub.field(), sub.atom()
        data = collect_rates(sub)
        saddle = data["saddle"] or {}
        methods = data["methods"]
        closed_name = next((k for k in ("strongfield_closed", "tunneling_closed") if k in methods), "")
        rows.append(",".join([
            _fmt(v_cast),
            str(threshold_n(field, atom)),
            _fmt(saddle.get("n_m", math.nan)),
            _fmt(saddle.get("theta_m", math.nan)),
            _fmt(saddle.get("y_m", math.nan)),
            data["regime"],
            _fmt(methods["direct"]["w_total"]),
            _fmt(methods["airy_numeric"]["w_total"]) if "airy_numeric" in methods else "",
            _fmt(methods[closed_name]["w_total"]) if closed_name else "",
            closed_name,
        ]))
        detail.append({"value": v_cast, **data})
    (outdir / "sweep.csv").write_text("\n".join(rows) + "\n", newline="\n")
    _write_json(outdir / "sweep.json", {"vary": key, "rows": detail})
    return 0


# --------------------------------------------------------------------------
# selftest

def run_selftest(json_mode: bool, fault: float) -> int:
    records = run_checks(bessel_fault=fault)
    passed = all(r["passed"] for r in records)
    if json_mode:
        print(json.dumps(_jsonable({"records": records, "passed": passed}),
                         sort_keys=True, indent=2))
    else:
        width = max(len(r["name"]) for r in records)
        for r in records:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"{r['name']:<{width}}  residual {r['residual']:10.3e}  "
                  f"tol {r['tolerance']:8.1e}  {status}")
        print(f"selftest: {'PASS' if passed else 'FAIL'} "
              f"({sum(r['passed'] for r in records)}/{len(records)} checks)")
    return 0 if passed else 1


# --------------------------------------------------------------------------
# argument parsing

def _add_common(p):
    p.add_argument("-c", "--config", required=True, help="JSON config file")
    p.add_argument("-o", "--output", help="output directory (overrides config)")
    p.add_argument("--xi", type=float, help="override intensity_xi")
    p.add_argument("--photon-energy-ev", type=float)
    p.add_argument("--z-a", type=int)
    p.add_argument("--binding-energy-ev", type=float)
    p.add_argument("--polarization", choices=["circular", "linear", "elliptic"])
    p.add_argument("--zeta", type=float)
    p.add_argument("--theta-points", type=int)
    p.add_argument("--phi-points", type=int)
    p.add_argument("--mode", choices=["on", "off"])
    p.add_argument("--formula", choices=["relativistic", "nonrelativistic", "both"])
    p.add_argument("--workers", type=int)


def _overrides(args) -> dict:
    pairs = {
        "output_path": args.output, "intensity_xi": args.xi,
        "photon_energy_ev": args.photon_energy_ev, "z_a": args.z_a,
        "binding_energy_ev": args.binding_energy_ev,
        "polarization": args.polarization, "zeta": args.zeta,
        "theta_points": args.theta_points, "phi_points": args.phi_points,
        "mode": args.mode, "formula": args.formula, "workers": args.workers,
    }
    return {k: v for k, v in pairs.items() if v is not None}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ati",
        description="Relativistic above-threshold-ionization spectra and rates "
                    "of hydrogen-like atoms in strong laser fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="differential spectrum over an (N, theta, phi) grid")
    _add_common(p_spec)
    p_rate = sub.add_parser("rate", help="total ionization rate by every applicable method")
    _add_common(p_rate)
    p_sweep = sub.add_parser("sweep", help="rate sweep over one config key")
    _add_common(p_sweep)
    p_sweep.add_argument("--vary", required=True, help="config key to vary (e.g. xi)")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_self = sub.add_parser("selftest", help="run the built-in consistency suite")
    p_self.add_argument("--json", action="store_true", help="machine-readable report")
    p_self.add_argument("--inject-bessel-error", type=float, default=0.0,
                        help="testing hook: perturb the Bessel primitive")

    args = parser.parse_args(argv)
    try:
        if args.command == "selftest":
            return run_selftest(args.json, args.inject_bessel_error)
        cfg = load_config(args.config, _overrides(args))
        if args.command == "spectrum":
            return run_spectrum(cfg)
        if args.command == "rate":
            return run_rate(cfg)
        if args.command == "sweep":
            values = [float(v) for v in args.values.split(",") if v.strip()]
            if not values:
                raise ConfigError("--values must list at least one number")
            return run_sweep(cfg, args.vary, values)
        raise AssertionError(args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ChannelExplosionError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
