"""Command-line front end.

Subcommands: expand, invert, pseudo-invert, basis, verify.  Inputs are
coefficient JSON documents or CSV files of uniform boundary samples
(converted to Fourier coefficients by FFT, bandlimited below Nyquist).
Results are written as deterministic JSON; solver runs also emit a CSV
residual report and companion figures next to the output file.

Precedence for settings: command-line flags and HARDYPURSUIT_* env vars
override the optional JSON config file, which overrides built-in
defaults.
"""

from __future__ import annotations

import csv as _csv
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .basis import BasisPlan, basis_build, basis_invert, expand_on_system
from .errors import (
    DegeneratePlanError,
    ExhaustedDictionaryError,
    HardyPursuitError,
    IllConditionedError,
    MalformedInputError,
    ParameterDomainError,
)
from .hardy import (
    BoundaryFunction,
    DiscFunction,
    analytic_lift,
    apply_L,
    function_from_json,
)
from .oracle import DEFAULT_SEED, run_verification
from .poafd import PoafdConfig, SelectionGrid
from .report import render_figures, write_expansion_csv
from .solvers import solve_expansion, solve_inversion, solve_pseudo_inverse

EXIT_CODES = {
    "MalformedInputError": 3,
    "ParameterDomainError": 4,
    "DegeneratePlanError": 5,
    "ExhaustedDictionaryError": 6,
    "IllConditionedError": 7,
    "VerificationFailed": 8,
}

_EXIT_HELP = """\b
Exit codes:
  0  success
  2  usage error
  3  malformed input file
  4  parameter outside its domain
  5  degenerate parameter plan
  6  selection dictionary exhausted
  7  ill-conditioned linear system
  8  verification found failures
"""


def ingest(path: str | Path, trunc_n: int = 256) -> DiscFunction | BoundaryFunction:
    """Read a coefficient JSON document or a CSV of uniform samples.

    Sampled input is converted to two-sided Fourier coefficients and
    bandlimited to min(M/2 - 1, trunc_n) to avoid Nyquist ambiguity.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read input file: {exc}") from exc
    if not text.strip():
        raise MalformedInputError(f"input file {path} is empty")
    if text.lstrip().startswith("{"):
        try:
            payload = json.loads(text)
            return function_from_json(payload)
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedInputError(f"invalid coefficient document: {exc}") from exc
    return _ingest_samples(text, path, trunc_n)


def _ingest_samples(text: str, path: Path, trunc_n: int) -> BoundaryFunction:
    rows = [row for row in _csv.reader(text.splitlines()) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise MalformedInputError(f"input file {path} contains no samples")
    samples = []
    for lineno, row in enumerate(rows, 1):
        cells = [cell.strip() for cell in row if cell.strip()]
        if len(cells) not in (1, 2):
            raise MalformedInputError(f"{path}:{lineno}: expected 1 or 2 numeric columns, got {len(cells)}")
        try:
            re = float(cells[0])
            im = float(cells[1]) if len(cells) == 2 else 0.0
        except ValueError as exc:
            raise MalformedInputError(f"{path}:{lineno}: non-numeric sample") from exc
        samples.append(complex(re, im))
    f = np.asarray(samples, dtype=np.complex128)
    if not np.all(np.isfinite(f)):
        raise MalformedInputError(f"{path}: samples must be finite")
    m = len(f)
    if m < 4:
        raise MalformedInputError(f"{path}: need at least 4 samples, got {m}")
    band = min(m // 2 - 1, trunc_n)
    spectrum = np.fft.fft(f) / m
    coeffs = np.zeros(2 * band + 1, dtype=np.complex128)
    for k in range(-band, band + 1):
        coeffs[k + band] = spectrum[k % m]
    return BoundaryFunction(coeffs)


def emit(obj, path: str | Path | None = None) -> str:
    """Deterministic JSON serialization; writes to path when given."""
    doc = obj.to_json_dict() if hasattr(obj, "to_json_dict") else obj
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _load_plan(path: str | Path) -> BasisPlan:
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise MalformedInputError(f"cannot read plan file: {exc}") from exc
    if not isinstance(payload, list) or not payload:
        raise MalformedInputError("plan file must hold a nonempty JSON list of [re, im] pairs")
    try:
        points = [complex(float(p[0]), float(p[1])) for p in payload]
    except (TypeError, ValueError, IndexError) as exc:
        raise MalformedInputError("plan entries must be [re, im] pairs") from exc
    return BasisPlan.from_points(points)


def _fail(exc: Exception, code: int) -> None:
    doc = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    click.echo(json.dumps(doc, sort_keys=True), err=True)
    sys.exit(code)


def _guarded(fn):
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MalformedInputError as exc:
            _fail(exc, EXIT_CODES["MalformedInputError"])
        except ParameterDomainError as exc:
            _fail(exc, EXIT_CODES["ParameterDomainError"])
        except DegeneratePlanError as exc:
            _fail(exc, EXIT_CODES["DegeneratePlanError"])
        except ExhaustedDictionaryError as exc:
            _fail(exc, EXIT_CODES["ExhaustedDictionaryError"])
        except IllConditionedError as exc:
            _fail(exc, EXIT_CODES["IllConditionedError"])
        except HardyPursuitError as exc:
            _fail(exc, EXIT_CODES["MalformedInputError"])
        except ValueError as exc:
            _fail(exc, 2)  # configuration outside its documented range

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


_SOLVER_PARAMS = (
    "mode",
    "rho",
    "grid_radial",
    "grid_angular",
    "r_max",
    "max_terms",
    "tol_residual",
    "trunc_n",
    "eps_coincide",
    "delta_span",
    "refine_steps",
)


def _solver_options(fn):
    options = [
        click.option("--input", "input_path", required=True, type=click.Path(exists=False), help="coefficient JSON or sample CSV"),
        click.option("--output", "output_path", type=click.Path(), default=None, help="result JSON path (stdout when omitted)"),
        click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config merged under flags"),
        click.option("--mode", type=click.Choice(["full", "weak"]), default="full", show_default=True),
        click.option("--rho", type=float, default=None, help="weak-mode acceptance fraction in (0, 1)"),
        click.option("--grid-radial", type=int, default=64, show_default=True),
        click.option("--grid-angular", type=int, default=128, show_default=True),
        click.option("--r-max", type=float, default=0.95, show_default=True),
        click.option("--max-terms", type=int, default=64, show_default=True),
        click.option("--tol-residual", type=float, default=None, help="absolute stop tolerance (default 1e-8 * input norm)"),
        click.option("--trunc-n", type=int, default=256, show_default=True),
        click.option("--eps-coincide", type=float, default=1e-9, show_default=True),
        click.option("--delta-span", type=float, default=1e-12, show_default=True),
        click.option("--refine-steps", type=int, default=3, show_default=True),
        click.option("--no-figures", is_flag=True, help="skip the companion PNG figures"),
        click.option("--archive-system", is_flag=True, help="include the orthonormal system in the JSON result"),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


def _merge_config(ctx: click.Context, config_path: str | None) -> dict:
    """Flags and env vars win; config file fills the rest; defaults last."""
    merged = {name: ctx.params[name] for name in _SOLVER_PARAMS if name in ctx.params}
    if not config_path:
        return merged
    try:
        doc = json.loads(Path(config_path).read_text())
    except (OSError, ValueError) as exc:
        raise MalformedInputError(f"cannot read config file: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInputError("config file must hold a JSON object")
    explicit = (click.core.ParameterSource.COMMANDLINE, click.core.ParameterSource.ENVIRONMENT)
    for name in _SOLVER_PARAMS:
        if name in doc and ctx.get_parameter_source(name) not in explicit:
            merged[name] = doc[name]
    return merged


def _build_config(settings: dict) -> PoafdConfig:
    grid = SelectionGrid.polar(
        radial_count=int(settings["grid_radial"]),
        angular_count=int(settings["grid_angular"]),
        r_max=float(settings["r_max"]),
    )
    return PoafdConfig(
        mode=str(settings["mode"]),
        rho=None if settings["rho"] is None else float(settings["rho"]),
        max_terms=int(settings["max_terms"]),
        tol_residual=None if settings["tol_residual"] is None else float(settings["tol_residual"]),
        eps_coincide=float(settings["eps_coincide"]),
        delta_span=float(settings["delta_span"]),
        grid=grid,
        refine_steps=int(settings["refine_steps"]),
        n_trunc=int(settings["trunc_n"]),
    )


def _write_solver_outputs(doc, result_expansion, output_path, no_figures, defect=None, r_max=None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output_path is None:
        click.echo(text, nl=False)
        return
    out = Path(output_path)
    out.write_text(text)
    csv_path = out.with_suffix(".csv")
    write_expansion_csv(csv_path, result_expansion)
    if not no_figures:
        render_figures(result_expansion, out.with_suffix(""), defect=defect, r_max=r_max)


@click.group(epilog=_EXIT_HELP)
@click.version_option(version=__version__, prog_name="hardypursuit")
def cli():
    """Sparse kernel expansion, inversion, and pseudo-inversion on the disc."""


@cli.command()
@_solver_options
@click.pass_context
@_guarded
def expand(ctx, input_path, output_path, config_path, no_figures, archive_system, **_):
    """Adaptive expansion of a disc function (coefficient JSON input)."""
    settings = _merge_config(ctx, config_path)
    config = _build_config(settings)
    F = ingest(input_path, trunc_n=config.n_trunc)
    if not isinstance(F, DiscFunction):
        raise MalformedInputError(
            "expand needs a disc coefficient document; for boundary data use pseudo-invert"
        )
    result = solve_expansion(F, config)
    doc = {
        "subcommand": "expand",
        "settings": _echo_settings(settings),
        "input_norm": F.norm(),
        "expansion": result.to_json_dict(include_system=archive_system),
        "reconstruction": result.reconstruct().to_json_dict(),
    }
    _write_solver_outputs(doc, result, output_path, no_figures, r_max=config.resolved_grid().r_max)


@cli.command()
@_solver_options
@click.pass_context
@_guarded
def invert(ctx, input_path, output_path, config_path, no_figures, archive_system, **_):
    """Minimum-norm boundary preimage of a disc function."""
    settings = _merge_config(ctx, config_path)
    config = _build_config(settings)
    F = ingest(input_path, trunc_n=config.n_trunc)
    if not isinstance(F, DiscFunction):
        raise MalformedInputError(
            "invert needs a disc coefficient document; for boundary data use pseudo-invert"
        )
    result = solve_inversion(F, config)
    doc = {
        "subcommand": "invert",
        "settings": _echo_settings(settings),
        "input_norm": F.norm(),
        "result": result.to_json_dict(include_system=archive_system),
    }
    _write_solver_outputs(doc, result.expansion, output_path, no_figures, r_max=config.resolved_grid().r_max)


@cli.command("pseudo-invert")
@_solver_options
@click.pass_context
@_guarded
def pseudo_invert(ctx, input_path, output_path, config_path, no_figures, archive_system, **_):
    """Moore-Penrose pseudo-inversion of boundary data (two-sided spectrum).

    Disc input is accepted as already-analytic boundary data (zero defect).
    """
    settings = _merge_config(ctx, config_path)
    config = _build_config(settings)
    data = ingest(input_path, trunc_n=config.n_trunc)
    if isinstance(data, DiscFunction):
        data = analytic_lift(data)
    result = solve_pseudo_inverse(data, config)
    doc = {
        "subcommand": "pseudo-invert",
        "settings": _echo_settings(settings),
        "input_norm": data.norm(),
        "result": result.to_json_dict(include_system=archive_system),
    }
    _write_solver_outputs(
        doc,
        result.expansion,
        output_path,
        no_figures,
        defect=result.defect,
        r_max=config.resolved_grid().r_max,
    )


@cli.command()
@click.option("--plan-file", required=True, type=click.Path(), help="JSON list of [re, im] parameters")
@_solver_options
@click.pass_context
@_guarded
def basis(ctx, plan_file, input_path, output_path, config_path, no_figures, archive_system, **_):
    """Fixed-plan solvers: expansion and inversion for disc input,
    pseudo-inversion for boundary input."""
    settings = _merge_config(ctx, config_path)
    plan = _load_plan(plan_file)
    n_trunc = int(settings["trunc_n"])
    r_max = float(settings["r_max"])
    delta_span = float(settings["delta_span"])
    data = ingest(input_path, trunc_n=n_trunc)
    system = basis_build(plan, n_trunc, r_max, delta_span)
    doc = {
        "subcommand": "basis",
        "settings": {"trunc_n": n_trunc, "r_max": r_max, "delta_span": delta_span},
        "plan": [p.to_json_dict() for p in plan.params],
    }
    if isinstance(data, DiscFunction):
        doc["expansion"] = expand_on_system(data, system).to_json_dict()
        doc["inverse"] = basis_invert(data, plan, n_trunc, r_max).to_json_dict()
    else:
        projection = apply_L(data)
        doc["projection"] = projection.to_json_dict()
        doc["pseudo_inverse"] = basis_invert(projection, plan, n_trunc, r_max).to_json_dict()
    if archive_system:
        doc["system"] = system.to_json_dict()
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output_path is None:
        click.echo(text, nl=False)
    else:
        Path(output_path).write_text(text)


@cli.command()
@click.option("--output", "output_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--trials", type=int, default=100, show_default=True)
@_guarded
def verify(output_path, seed, trials):
    """Run the oracle cross-check suite and report pass/fail per check."""
    report = run_verification(seed=seed, trials=trials)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output_path is None:
        click.echo(text, nl=False)
    else:
        Path(output_path).write_text(text)
    if not report["all_passed"]:
        sys.exit(EXIT_CODES["VerificationFailed"])


def _echo_settings(settings: dict) -> dict:
    return {k: settings[k] for k in sorted(settings)}


def main():
    cli(auto_envvar_prefix="HARDYPURSUIT")


if __name__ == "__main__":
    main()
