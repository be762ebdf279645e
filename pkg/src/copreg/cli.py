"""Command-line interface.

Subcommands ``simulate``, ``fit``, ``regress``, ``vine``, ``mse``, ``sweep``
and ``contour`` each write one CSV (or text) output plus ``<out>.manifest``
holding the fully resolved configuration and the package version.

Settings resolve in the order flags, then ``--config`` file (flat
``key=value`` lines), then built-in defaults. Exit codes: 0 on success, 2 on
configuration errors, 3 on numerical failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from copreg import __version__
from copreg.copula import parse_family
from copreg.errors import ConfigError, NumericError
from copreg.experiments import (
    DEFAULT_SIGMA,
    MODELS,
    SWEEP_HEADER,
    DgpSpec,
    Estimator,
    contour_density,
    estimate_on_grid,
    monotonicity_sweep,
    run_mse_study,
    simulate_dgp,
)
from copreg.fitting import CSV_HEADER, default_candidates, fit_l2, fit_pml, select_by_aic
from copreg.io import load_dataset, write_csv, write_dataset
from copreg.margins import ecdf_transform
from copreg.vine import fit_vine

__all__ = ["main", "dispatch", "load_dataset", "resolve_config", "DEFAULTS"]

COMMANDS = ("simulate", "fit", "regress", "vine", "mse", "sweep", "contour")

DEFAULTS: dict[str, object] = {
    "model": "m1",
    "n": 100,
    "sigma": DEFAULT_SIGMA,
    "seed": 0,
    "family": "auto-aic",
    "rotation": None,
    "fit": "pml",
    "reps": 1000,
    "grid": 51,
    "out": None,
    "candidates": "default",
    "workers": 1,
    "data": None,
    "bandwidth": "auto",
}

_INT_KEYS = {"n", "seed", "reps", "grid", "workers"}
_FLOAT_KEYS = {"sigma"}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="copreg", description="Copula-based regression and Monte-Carlo studies.")
    p.add_argument("--version", action="version", version=f"copreg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        # SUPPRESS keeps unset flags out of the namespace so config values can apply
        d = argparse.SUPPRESS
        s.add_argument("--config", default=d, help="flat key=value file")
        s.add_argument("--model", default=d, help=f"one of {', '.join(MODELS)}")
        s.add_argument("--n", default=d, help="sample size")
        s.add_argument("--sigma", default=d, help="noise standard deviation")
        s.add_argument("--seed", default=d, help="seed (base seed for mse)")
        s.add_argument("--family", default=d, help="family[@rotation], 'vine' or 'auto-aic'")
        s.add_argument("--rotation", default=d, help="0, 90, 180 or 270")
        s.add_argument("--fit", default=d, choices=("pml", "l2"))
        s.add_argument("--reps", default=d)
        s.add_argument("--grid", default=d, help="grid points per axis")
        s.add_argument("--out", default=d, help="output path")
        s.add_argument("--candidates", default=d, help="comma list or 'default'")
        s.add_argument("--workers", default=d)
        s.add_argument("--data", default=d, help="input CSV instead of simulating")
        s.add_argument("--bandwidth", default=d, help="contour bandwidth or 'auto'")
    return p


def read_config_file(path) -> dict[str, str]:
    """Parse a flat ``key=value`` file; ``#`` starts a comment."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}: no such config file")
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _coerce(key: str, value):
    if value is None or value == "":
        return None if key in ("rotation", "out", "data") else value
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "rotation":
            return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    return value


def resolve_config(command: str, flags: dict, file_values: dict | None = None) -> dict:
    """Merge defaults, config-file values and flags (later wins) and validate."""
    cfg = dict(DEFAULTS)
    cfg.update(file_values or {})
    cfg.update(flags)
    cfg = {k: _coerce(k, v) for k, v in cfg.items()}
    cfg["command"] = command
    if cfg["out"] is None:
        raise ConfigError("--out is required")
    for key in ("n", "reps", "grid", "workers"):
        if cfg[key] < 1:
            raise ConfigError(f"{key} must be at least 1, got {cfg[key]}")
    if cfg["model"] not in MODELS:
        raise ConfigError(f"unknown model {cfg['model']!r}; valid models: {', '.join(MODELS)}")
    if cfg["fit"] not in ("pml", "l2"):
        raise ConfigError(f"fit method must be 'pml' or 'l2', got {cfg['fit']!r}")
    fam = str(cfg["family"]).strip().lower()
    if fam not in ("vine", "auto-aic"):
        fam = parse_family(fam, cfg["rotation"]).tag
    cfg["family"] = fam
    cfg["candidates"] = _candidates(cfg["candidates"])
    return cfg


def _candidates(text) -> str:
    text = str(text).strip().lower()
    if text == "default":
        return text
    tags = [parse_family(t).tag for t in text.split(",") if t.strip()]
    if not tags:
        raise ConfigError("empty candidate list")
    return ",".join(tags)


def _candidate_tuple(cfg) -> tuple | None:
    return None if cfg["candidates"] == "default" else tuple(cfg["candidates"].split(","))


def write_manifest(out: Path, cfg: dict) -> Path:
    path = Path(str(out) + ".manifest")
    lines = [f"version={__version__}"]
    lines += [f"{k}={'' if cfg[k] is None else cfg[k]}" for k in sorted(cfg)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _dataset(cfg) -> np.ndarray:
    if cfg["data"]:
        return load_dataset(cfg["data"])
    return simulate_dgp(DgpSpec(cfg["model"], cfg["n"], cfg["sigma"], cfg["seed"]))


def _x_grid(cfg) -> np.ndarray:
    return np.linspace(0.0, 1.0, cfg["grid"])


def _estimator(cfg) -> Estimator:
    fam = cfg["family"]
    cands = _candidate_tuple(cfg)
    if fam == "vine":
        return Estimator("vine", fit=cfg["fit"], candidates=cands)
    if fam == "auto-aic":
        return Estimator("auto-aic", fit=cfg["fit"], candidates=cands)
    return Estimator("copula", fam, cfg["fit"])


# Subcommands --------------------------------------------------------------------------


def _cmd_simulate(cfg, out):
    write_dataset(out, _dataset(cfg))


def _cmd_fit(cfg, out):
    data = _dataset(cfg)
    pseudo = ecdf_transform(data)
    if pseudo.d != 1:
        raise ConfigError("fit takes a one-predictor dataset; use 'vine' for two")
    pairs = pseudo.columns()
    fam = cfg["family"]
    if fam == "vine":
        raise ConfigError("family 'vine' needs the vine subcommand")
    if fam == "auto-aic":
        cands = _candidate_tuple(cfg) or tuple(c.tag for c in default_candidates())
        if cfg["fit"] == "pml":
            res = select_by_aic(cands, pairs, workers=cfg["workers"])
        else:
            res = max((fit_l2(c, pseudo) for c in cands), key=lambda f: f.loglik)
    elif cfg["fit"] == "pml":
        res = fit_pml(fam, pairs)
    else:
        res = fit_l2(fam, pseudo)
    write_csv(out, CSV_HEADER, [res.csv_fields()])


def _cmd_regress(cfg, out):
    data = _dataset(cfg)
    est = estimate_on_grid(data, cfg["model"], _estimator(cfg), _x_grid(cfg))
    header = ["x", "m_hat", "extrapolated"] if est.d == 1 else ["x1", "x2", "m_hat", "extrapolated"]
    write_csv(out, header, est.rows())


def _cmd_vine(cfg, out):
    data = _dataset(cfg)
    pseudo = ecdf_transform(data)
    if pseudo.d != 2:
        raise ConfigError("vine needs a two-predictor dataset")
    model = fit_vine(pseudo, _candidate_tuple(cfg), workers=cfg["workers"])
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(model.to_text(), encoding="utf-8")


def _cmd_mse(cfg, out):
    dgp = DgpSpec(cfg["model"], cfg["n"], cfg["sigma"], cfg["seed"])
    res = run_mse_study(
        dgp, _estimator(cfg), cfg["reps"], _x_grid(cfg), base_seed=cfg["seed"],
        workers=cfg["workers"],
    )
    write_csv(out, res.header(), res.rows())


def _cmd_sweep(cfg, out):
    rows = monotonicity_sweep(grid_points=cfg["grid"], workers=cfg["workers"])
    write_csv(out, SWEEP_HEADER, [r.fields() for r in rows])


def _cmd_contour(cfg, out):
    bw = cfg["bandwidth"]
    if bw != "auto":
        try:
            bw = float(bw)
        except ValueError:
            raise ConfigError(f"bandwidth must be a number or 'auto', got {bw!r}") from None
    dgp = DgpSpec(cfg["model"], 1, cfg["sigma"], cfg["seed"])
    res = contour_density(dgp, cfg["n"], cfg["grid"], bw)
    write_csv(out, ["u_y", "u_x", "density"], res.rows())


_HANDLERS = {
    "simulate": _cmd_simulate,
    "fit": _cmd_fit,
    "regress": _cmd_regress,
    "vine": _cmd_vine,
    "mse": _cmd_mse,
    "sweep": _cmd_sweep,
    "contour": _cmd_contour,
}


def dispatch(argv: list[str]) -> int:
    """Run one command; returns the process exit code."""
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    try:
        file_values = read_config_file(ns.config) if getattr(ns, "config", None) else {}
        cfg = resolve_config(ns.command, flags, file_values)
        out = Path(cfg["out"])
        _HANDLERS[ns.command](cfg, out)
        write_manifest(out, cfg)
    except ConfigError as exc:
        print(f"copreg: error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, FloatingPointError) as exc:
        print(f"copreg: numeric failure: {exc}", file=sys.stderr)
        return 3
    return 0


def main(argv: list[str] | None = None) -> None:
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
