"""Command-line front end: experiment orchestration and artifact emission.

Verbs:

* ``kernel-check``  kernel sanity table (normalization, symmetry, peak,
                    tail mass vs bound, moments vs bounds)
* ``approx``        convergence sweeps with measured error vs bound
* ``taylor``        Taylor-corrected residuals vs their refined bounds
* ``iterate``       self-composed or mixed-chain operators vs bounds
* ``report``        aggregate earlier JSON summaries into one index

Outputs are deterministic: CSV uses '.' decimals with 17 significant
digits, JSON is sorted-key with fixed indentation, and SVG plots are
self-contained static files.  Exit status is 0 only when every
hypothesis-met bound check passed.

Configuration may come from a flat key=value file with section headers
([common] plus one section per verb); explicit flags win over the config
file, which wins over environment defaults.
"""

from __future__ import annotations

import configparser
import json
import math
from pathlib import Path

import click
import numpy as np
from click.core import ParameterSource
from scipy.optimize import minimize_scalar

from . import bounds as bounds_mod
from . import kernel
from .analysis import (
    CATALOG,
    MeasurementGrid,
    fit_rate,
    get_test_function,
    run_convergence_sweep,
)
from .errors import HypothesisNotMetError
from .kernel import KernelParams
from .operators import (
    OperatorKind,
    OperatorSpec,
    apply_on_grid,
    central_moment,
    compose_mixed,
    iterate as iterate_operator,
)
from .quadrature import QuadratureConfig, TailEnvelope, integrate_interval, integrate_real_line, moment_truncation_radius
from .svgplot import Series, render_loglog

_ALL_KINDS = ("basic", "kantorovich", "quadrature")
_DEFAULT_WEIGHTS = "0.25,0.25,0.25,0.25"
_RESIDUAL_CEILING = 1e-6


def _fmt(x) -> str:
    if x is None:
        return "nan"
    return format(float(x), ".17g")


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated reals, got {text!r}")
    if not values:
        raise click.UsageError(f"{flag} must not be empty")
    return values


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated integers, got {text!r}")
    if not values:
        raise click.UsageError(f"{flag} must not be empty")
    return values


def _parse_domain(text: str) -> tuple[float, float]:
    values = _parse_floats(text, "--domain")
    if len(values) != 2 or values[1] <= values[0]:
        raise click.UsageError(f"--domain expects 'a,b' with b > a, got {text!r}")
    return values


def _parse_formats(text: str) -> set[str]:
    formats = {v.strip() for v in text.split(",") if v.strip()}
    unknown = formats - {"csv", "json", "svg"}
    if unknown:
        raise click.UsageError(f"--format accepts csv,json,svg; got {sorted(unknown)}")
    return formats


# config keys are flag names; map them onto the parameter variable names
_CONFIG_ALIASES = {"n": "ns", "fn": "fns", "kind": "kinds", "format": "formats"}

_CONFIG_PARSERS = {
    "q": float,
    "beta": float,
    "alpha": float,
    "quad_tol": float,
    "grid_points": int,
    "nodes": int,
    "taylor_order": int,
    "iterations": int,
    "ns": lambda s: _parse_ints(s, "n"),
    "fns": lambda s: tuple(v.strip() for v in s.split(",") if v.strip()),
    "kinds": lambda s: tuple(v.strip() for v in s.split(",") if v.strip()),
    "weights": str,
    "domain": str,
    "out": str,
    "formats": str,
    "chain": str,
}


def _merge_config(ctx: click.Context, verb: str, values: dict) -> dict:
    """Fold config-file values under explicitly given flags."""
    path = values.pop("config", None)
    if not path:
        return values
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise click.UsageError(f"cannot read config file {path!r}")
    for section in ("common", verb):
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            name = key.replace("-", "_")
            name = _CONFIG_ALIASES.get(name, name)
            if name not in values:
                raise click.UsageError(f"unknown config key {key!r} in section [{section}]")
            if ctx.get_parameter_source(name) is ParameterSource.COMMANDLINE:
                continue
            convert = _CONFIG_PARSERS.get(name, str)
            try:
                values[name] = convert(raw)
            except (ValueError, click.UsageError) as exc:
                raise click.UsageError(f"bad config value {key}={raw!r}: {exc}")
    return values


def _out_dir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write(path: Path, text: str):
    try:
        path.write_text(text)
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _positive(value: float, flag: str) -> float:
    if not value > 0:
        raise click.UsageError(f"{flag} must be positive, got {value}")
    return value


def _make_params(q: float, beta: float) -> KernelParams:
    try:
        return KernelParams(q, beta)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _make_cfg(quad_tol: float) -> QuadratureConfig:
    _positive(quad_tol, "--quad-tol")
    return QuadratureConfig(abs_tol=quad_tol, rel_tol=quad_tol)


def _resolve_functions(names) -> list:
    try:
        return [get_test_function(name) for name in names]
    except KeyError as exc:
        raise click.UsageError(str(exc.args[0]))


def _kind_weights(kind: str, weights_text: str):
    if kind != "quadrature":
        return None
    weights = _parse_floats(weights_text, "--weights")
    if any(w < 0 for w in weights):
        raise click.UsageError(f"--weights must be nonnegative, got {list(weights)}")
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise click.UsageError(f"--weights must sum to 1, got sum {math.fsum(weights)!r}")
    return weights


@click.group()
@click.version_option(package_name="actconv")
def main():
    """Verify convolution-operator error bounds numerically."""


# ----------------------------------------------------------------------
# kernel-check
# ----------------------------------------------------------------------


@main.command("kernel-check")
@click.option("--q", type=float, default=1.0, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--alpha", type=float, default=0.5, show_default=True)
@click.option("--n", "ns", type=int, multiple=True, default=(9, 16, 25, 36), show_default=True)
@click.option("--quad-tol", type=float, default=1e-10, show_default=True)
@click.option("--out", envvar="ACTCONV_OUT", default=None, help="Write CSV/JSON artifacts here.")
@click.option("--format", "formats", default="csv,json", show_default=True)
@click.option("--config", type=click.Path(exists=False), default=None)
@click.pass_context
def kernel_check(ctx, **kw):
    """Check kernel identities and bounds; nonzero exit on any failure."""
    kw = _merge_config(ctx, "kernel-check", kw)
    params = _make_params(kw["q"], kw["beta"])
    cfg = _make_cfg(kw["quad_tol"])
    alpha = kw["alpha"]
    if not (0.0 < alpha < 1.0):
        raise click.UsageError(f"--alpha must lie in (0, 1), got {alpha}")
    formats = _parse_formats(kw["formats"])

    rows: list[dict] = []

    def record(check: str, measured: float, limit: float, status: str | None = None):
        if status is None:
            status = "PASS" if measured <= limit else "FAIL"
        rows.append({"check": check, "measured": measured, "limit": limit, "status": status})

    norm = integrate_real_line(lambda h: kernel.psi(params, h), TailEnvelope(params), cfg)
    record("normalization |int psi - 1|", abs(norm.value - 1.0), 1e-8)

    xs = np.linspace(0.0, 40.0, 1601)
    record(
        "evenness max |psi(x) - psi(-x)|",
        float(np.abs(kernel.psi(params, xs) - kernel.psi(params, -xs)).max()),
        1e-14,
    )
    mirror = KernelParams(1.0 / params.q, params.beta)
    gx = kernel.g(params, -xs)
    gm = kernel.g(mirror, xs)
    record(
        "deformed symmetry max |g_q(-x) - g_1/q(x)|",
        float(np.abs(gx - gm).max() / max(np.abs(gm).max(), 1e-300)),
        1e-14,
    )

    target = params.g_argmax
    found = minimize_scalar(
        lambda x: -kernel.g(params, x),
        bounds=(target - 5.0, target + 5.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    record("peak location |argmax - ln(q)/beta|", abs(found.x - target), 1e-6)
    record("peak value |g(argmax) - closed form|", abs(kernel.g(params, target) - params.g_max_value), 1e-10)

    for n in kw["ns"]:
        try:
            bound = kernel.tail_mass_bound(params, n, alpha)
        except HypothesisNotMetError:
            rows.append(
                {
                    "check": f"tail mass n={n} alpha={alpha}",
                    "measured": math.nan,
                    "limit": math.nan,
                    "status": "hypothesis not met",
                }
            )
            continue
        m = float(n) ** (1.0 - alpha)
        radius = moment_truncation_radius(params, 0, cfg.truncation_eps)
        tail = 2.0 * integrate_interval(lambda h: kernel.psi(params, h), m, max(radius, m + 1.0), cfg).value
        record(f"tail mass n={n} alpha={alpha}", tail, bound)

    for k in range(1, 6):
        radius = moment_truncation_radius(params, k, cfg.truncation_eps)
        moment = 2.0 * integrate_interval(lambda h: h**k * kernel.psi(params, h), 0.0, radius, cfg).value
        record(f"absolute moment k={k}", moment, kernel.moment_bound(params, k))

    width = max(len(r["check"]) for r in rows) + 2
    click.echo(f"kernel check  q={_fmt(params.q)}  beta={_fmt(params.beta)}")
    for r in rows:
        click.echo(
            f"  {r['check']:<{width}} measured={r['measured']:<12.6g} "
            f"limit={r['limit']:<12.6g} {r['status']}"
        )
    failed = [r for r in rows if r["status"] == "FAIL"]

    if kw["out"]:
        out = _out_dir(kw["out"])
        if "csv" in formats:
            _write(
                out / "kernel_check.csv",
                _csv_text(
                    ["check", "measured", "limit", "status"],
                    [[r["check"], _fmt(r["measured"]), _fmt(r["limit"]), r["status"]] for r in rows],
                ),
            )
        if "json" in formats:
            payload = {
                "command": "kernel-check",
                "parameters": {"q": params.q, "beta": params.beta, "alpha": alpha, "ns": list(kw["ns"])},
                "checks": [
                    {"check": r["check"], "measured": r["measured"], "limit": r["limit"], "status": r["status"]}
                    for r in rows
                ],
                "all_satisfied": not failed,
            }
            _write(out / "kernel_check_summary.json", _json_text(payload))

    if failed:
        click.echo(f"FAILED: {len(failed)} check(s)", err=True)
        ctx.exit(1)
    click.echo("all kernel checks passed")


# ----------------------------------------------------------------------
# approx
# ----------------------------------------------------------------------


def _sweep_options(fn):
    fn = click.option("--config", type=click.Path(exists=False), default=None)(fn)
    fn = click.option("--quad-tol", type=float, default=1e-10, show_default=True)(fn)
    fn = click.option("--format", "formats", default="csv,json,svg", show_default=True)(fn)
    fn = click.option(
        "--out", envvar="ACTCONV_OUT", default="actconv_out", show_default=True,
        help="Output directory (env ACTCONV_OUT; flags win).",
    )(fn)
    fn = click.option("--grid-points", type=int, default=2001, show_default=True)(fn)
    fn = click.option("--domain", default="-3,3", show_default=True)(fn)
    fn = click.option("--weights", default=_DEFAULT_WEIGHTS, show_default=True,
                      help="Quadrature-kind weights w1,...,wr.")(fn)
    fn = click.option("--beta", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("--q", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("--alpha", type=float, default=0.5, show_default=True)(fn)
    return fn


def _grid_from(kw) -> MeasurementGrid:
    domain = _parse_domain(kw["domain"])
    points = kw["grid_points"]
    if points < 2:
        raise click.UsageError(f"--grid-points must be >= 2, got {points}")
    return MeasurementGrid.uniform(domain, points)


@main.command()
@click.option("--fn", "fns", multiple=True, default=("sin",), show_default=True)
@click.option("--kind", "kinds", multiple=True, default=_ALL_KINDS, show_default=True)
@click.option("--n", "ns", type=int, multiple=True, default=(9, 16, 25, 36, 49), show_default=True)
@_sweep_options
@click.pass_context
def approx(ctx, **kw):
    """Sweep measured sup error against the first-order bounds."""
    kw = _merge_config(ctx, "approx", kw)
    if not kw["ns"]:
        raise click.UsageError("--n must be given at least once")
    params = _make_params(kw["q"], kw["beta"])
    cfg = _make_cfg(kw["quad_tol"])
    grid = _grid_from(kw)
    formats = _parse_formats(kw["formats"])
    functions = _resolve_functions(kw["fns"])
    out = _out_dir(kw["out"])

    offenders = []
    summary_results = []
    for f in functions:
        for kind in kw["kinds"]:
            if kind not in _ALL_KINDS:
                raise click.UsageError(f"--kind must be one of {_ALL_KINDS}, got {kind!r}")
            weights = _kind_weights(kind, kw["weights"])
            records = run_convergence_sweep(
                f, kind, kw["ns"], kw["alpha"], params, grid, weights=weights, cfg=cfg
            )
            csv_rows = []
            rates = []
            for i, rec in enumerate(records):
                rate = math.nan
                if i >= 2:
                    try:
                        rate = fit_rate(records[: i + 1])
                    except ValueError:
                        rate = math.nan
                rates.append(rate)
                satisfied = "skipped" if rec.satisfied is None else str(rec.satisfied).lower()
                csv_rows.append(
                    [str(rec.n), _fmt(rec.measured_sup_error), _fmt(rec.bound_value), satisfied, _fmt(rate)]
                )
                if rec.note:
                    offenders.append(f"{f.name}/{kind}/n={rec.n}: {rec.note}")
                elif rec.satisfied is False:
                    offenders.append(
                        f"{f.name}/{kind}/n={rec.n}: measured {rec.measured_sup_error!r} "
                        f"exceeds bound {rec.bound_value!r}"
                    )
                click.echo(
                    f"{f.name:>6s} {kind:<12s} n={rec.n:<3d} "
                    f"err={rec.measured_sup_error:.6e} bound={_fmt(rec.bound_value)} {satisfied}"
                )
            stem = f"approx_{f.name}_{kind}"
            if "csv" in formats:
                _write(out / f"{stem}.csv", _csv_text(["n", "sup_error", "bound", "satisfied", "rate_so_far"], csv_rows))
            if "svg" in formats:
                ok = [r for r in records if r.bound_value is not None]
                if ok:
                    svg = render_loglog(
                        f"sup error vs bound: {f.name}, {kind}",
                        "n",
                        "sup error",
                        [
                            Series("measured", tuple(r.n for r in ok), tuple(r.measured_sup_error for r in ok)),
                            Series("bound", tuple(r.n for r in ok), tuple(r.bound_value for r in ok), dashed=True),
                        ],
                    )
                    _write(out / f"{stem}.svg", svg)
            summary_results.append(
                {
                    "function": f.name,
                    "kind": kind,
                    "records": [
                        {
                            "n": r.n,
                            "sup_error": r.measured_sup_error,
                            "bound": r.bound_value,
                            "satisfied": r.satisfied,
                            "hypothesis_met": r.hypothesis_met,
                            "note": r.note,
                        }
                        for r in records
                    ],
                    "rate_final": rates[-1] if rates else math.nan,
                }
            )

    if "json" in formats:
        payload = {
            "command": "approx",
            "parameters": {
                "q": params.q,
                "beta": params.beta,
                "alpha": kw["alpha"],
                "ns": sorted(int(n) for n in kw["ns"]),
                "functions": [f.name for f in functions],
                "kinds": list(kw["kinds"]),
                "domain": list(_parse_domain(kw["domain"])),
                "grid_points": kw["grid_points"],
                "quad_tol": kw["quad_tol"],
            },
            "results": summary_results,
            "all_satisfied": not offenders,
        }
        _write(out / "approx_summary.json", _json_text(payload))

    if offenders:
        for line in offenders:
            click.echo(f"BOUND VIOLATION: {line}", err=True)
        ctx.exit(1)
    click.echo("all bounds satisfied")


# ----------------------------------------------------------------------
# taylor
# ----------------------------------------------------------------------


@main.command()
@click.option("--fn", "fns", multiple=True, default=("sin",), show_default=True)
@click.option("--kind", "kinds", multiple=True, default=_ALL_KINDS, show_default=True)
@click.option("--n", "ns", type=int, multiple=True, default=(16, 25, 36), show_default=True)
@click.option("--taylor-order", type=int, default=2, show_default=True)
@_sweep_options
@click.pass_context
def taylor(ctx, **kw):
    """Check Taylor-corrected residuals against the refined bounds."""
    kw = _merge_config(ctx, "taylor", kw)
    order = kw["taylor_order"]
    if order < 1:
        raise click.UsageError(f"--taylor-order must be >= 1, got {order}")
    if not kw["ns"]:
        raise click.UsageError("--n must be given at least once")
    params = _make_params(kw["q"], kw["beta"])
    cfg = _make_cfg(kw["quad_tol"])
    grid = _grid_from(kw)
    formats = _parse_formats(kw["formats"])
    functions = _resolve_functions(kw["fns"])
    out = _out_dir(kw["out"])

    offenders = []
    summary_results = []
    for f in functions:
        if len(f.derivatives) < order:
            click.echo(f"{f.name}: skipped (needs {order} analytic derivatives, has {len(f.derivatives)})")
            continue
        deriv_n = f.derivative(order)
        if deriv_n.modulus is None:
            click.echo(f"{f.name}: skipped (no closed-form modulus for derivative {order})")
            continue
        for kind in kw["kinds"]:
            if kind not in _ALL_KINDS:
                raise click.UsageError(f"--kind must be one of {_ALL_KINDS}, got {kind!r}")
            weights = _kind_weights(kind, kw["weights"])
            csv_rows = []
            recs = []
            for n in sorted(int(v) for v in kw["ns"]):
                spec = OperatorSpec(kind=OperatorKind(kind), n=n, params=params, alpha=kw["alpha"], weights=weights)
                try:
                    report = bounds_mod.taylor_bound(
                        kind,
                        deriv_n.modulus(bounds_mod.omega_argument(kind, n, kw["alpha"])),
                        params,
                        n,
                        kw["alpha"],
                        order,
                        f.derivative_sup_norms[order - 1],
                    )
                except HypothesisNotMetError as exc:
                    click.echo(f"{f.name:>6s} {kind:<12s} n={n:<3d} hypothesis not met: {exc}")
                    csv_rows.append([str(n), "nan", "nan", "skipped"])
                    recs.append({"n": n, "residual": None, "bound": None, "satisfied": None})
                    continue
                values = apply_on_grid(f, spec, grid.points, cfg)
                correction = np.zeros_like(grid.points)
                for k in range(1, order + 1):
                    moment = central_moment(spec, 0.0, k, cfg)
                    correction += np.asarray(f.derivatives[k - 1](grid.points), dtype=float) * (
                        moment / math.factorial(k)
                    )
                residual = float(
                    np.abs(values - np.asarray(f.eval(grid.points), dtype=float) - correction).max()
                )
                satisfied = residual <= report.value
                if not satisfied:
                    offenders.append(
                        f"{f.name}/{kind}/n={n}: residual {residual!r} exceeds taylor bound {report.value!r}"
                    )
                csv_rows.append([str(n), _fmt(residual), _fmt(report.value), str(satisfied).lower()])
                recs.append({"n": n, "residual": residual, "bound": report.value, "satisfied": satisfied})
                click.echo(
                    f"{f.name:>6s} {kind:<12s} n={n:<3d} N={order} "
                    f"residual={residual:.6e} bound={report.value:.6e} {str(satisfied).lower()}"
                )
            stem = f"taylor_{f.name}_{kind}"
            if "csv" in formats:
                _write(out / f"{stem}.csv", _csv_text(["n", "residual", "bound", "satisfied"], csv_rows))
            if "svg" in formats:
                ok = [r for r in recs if r["bound"] is not None and r["residual"]]
                if ok:
                    svg = render_loglog(
                        f"Taylor residual (N={order}): {f.name}, {kind}",
                        "n",
                        "residual",
                        [
                            Series("residual", tuple(r["n"] for r in ok), tuple(r["residual"] for r in ok)),
                            Series("bound", tuple(r["n"] for r in ok), tuple(r["bound"] for r in ok), dashed=True),
                        ],
                    )
                    _write(out / f"{stem}.svg", svg)
            summary_results.append({"function": f.name, "kind": kind, "order": order, "records": recs})

    if "json" in formats:
        payload = {
            "command": "taylor",
            "parameters": {
                "q": params.q,
                "beta": params.beta,
                "alpha": kw["alpha"],
                "ns": sorted(int(n) for n in kw["ns"]),
                "functions": [f.name for f in functions],
                "kinds": list(kw["kinds"]),
                "taylor_order": order,
            },
            "results": summary_results,
            "all_satisfied": not offenders,
        }
        _write(out / "taylor_summary.json", _json_text(payload))

    if offenders:
        for line in offenders:
            click.echo(f"BOUND VIOLATION: {line}", err=True)
        ctx.exit(1)
    click.echo("all taylor bounds satisfied")


# ----------------------------------------------------------------------
# iterate
# ----------------------------------------------------------------------


@main.command()
@click.option("--fn", "fns", multiple=True, default=("sin",), show_default=True)
@click.option("--kind", "kinds", multiple=True, default=("basic",), show_default=True)
@click.option("--n", "ns", type=int, multiple=True, default=(32,), show_default=True)
@click.option("--iterations", type=int, default=3, show_default=True, help="Self-composition count r.")
@click.option("--chain", default=None, help="Ascending resolutions k1,k2,... (overrides --iterations).")
@click.option("--nodes", type=int, default=64, show_default=True, help="Approximant nodes per stage.")
@_sweep_options
@click.pass_context
def iterate(ctx, **kw):
    """Check iterated-operator errors against r-fold and per-step bounds."""
    kw = _merge_config(ctx, "iterate", kw)
    params = _make_params(kw["q"], kw["beta"])
    cfg = _make_cfg(kw["quad_tol"])
    grid = _grid_from(kw)
    formats = _parse_formats(kw["formats"])
    functions = _resolve_functions(kw["fns"])
    out = _out_dir(kw["out"])
    domain = _parse_domain(kw["domain"])
    chain = _parse_ints(kw["chain"], "--chain") if kw["chain"] else None
    if chain and any(b < a for a, b in zip(chain, chain[1:])):
        raise click.UsageError(f"--chain must be ascending, got {list(chain)}")
    if not chain:
        if kw["iterations"] < 1:
            raise click.UsageError(f"--iterations must be >= 1, got {kw['iterations']}")
        if len(kw["ns"]) != 1:
            raise click.UsageError("iterate without --chain expects exactly one --n")

    offenders = []
    summary_results = []
    slack = (len(chain) if chain else kw["iterations"]) * _RESIDUAL_CEILING
    for f in functions:
        for kind in kw["kinds"]:
            if kind not in _ALL_KINDS:
                raise click.UsageError(f"--kind must be one of {_ALL_KINDS}, got {kind!r}")
            weights = _kind_weights(kind, kw["weights"])

            def _jackson(n: int):
                return bounds_mod.jackson_bound(
                    kind,
                    f.modulus(bounds_mod.omega_argument(kind, n, kw["alpha"])),
                    params,
                    n,
                    kw["alpha"],
                    f.sup_norm,
                )

            if chain:
                approx = compose_mixed(
                    f, kind, chain, params, kw["alpha"], domain, kw["nodes"], weights=weights, cfg=cfg,
                    residual_ceiling=_RESIDUAL_CEILING,
                )
                measured = float(np.abs(approx(grid.points) - f.eval(grid.points)).max())
                per_step = [_jackson(n) for n in chain]
                mixed = bounds_mod.mixed_iterated_bound(kind, per_step)
                satisfied = measured <= mixed.value + slack
                click.echo(
                    f"{f.name:>6s} {kind:<12s} chain={list(chain)} measured={measured:.6e} "
                    f"sum_bound={mixed.value:.6e} coarse={mixed.inputs['coarse']:.6e} "
                    f"slack={slack:.1e} {str(satisfied).lower()}"
                )
                if not satisfied:
                    offenders.append(f"{f.name}/{kind}/chain={list(chain)}: {measured!r} > {mixed.value!r} + slack")
                stem = f"iterate_{f.name}_{kind}"
                if "csv" in formats:
                    _write(
                        out / f"{stem}.csv",
                        _csv_text(
                            ["chain", "measured", "sum_bound", "coarse_bound", "slack", "satisfied"],
                            [[
                                ";".join(str(c) for c in chain),
                                _fmt(measured),
                                _fmt(mixed.value),
                                _fmt(mixed.inputs["coarse"]),
                                _fmt(slack),
                                str(satisfied).lower(),
                            ]],
                        ),
                    )
                summary_results.append(
                    {
                        "function": f.name,
                        "kind": kind,
                        "chain": list(chain),
                        "measured": measured,
                        "sum_bound": mixed.value,
                        "coarse_bound": mixed.inputs["coarse"],
                        "slack": slack,
                        "satisfied": satisfied,
                    }
                )
            else:
                n = int(kw["ns"][0])
                r = kw["iterations"]
                spec = OperatorSpec(kind=OperatorKind(kind), n=n, params=params, alpha=kw["alpha"], weights=weights)
                approx = iterate_operator(
                    f, spec, r, domain, kw["nodes"], cfg=cfg, residual_ceiling=_RESIDUAL_CEILING
                )
                measured = float(np.abs(approx(grid.points) - f.eval(grid.points)).max())
                single = _jackson(n)
                total = bounds_mod.iterated_bound(kind, single, r)
                satisfied = measured <= total.value + slack
                click.echo(
                    f"{f.name:>6s} {kind:<12s} n={n} r={r} measured={measured:.6e} "
                    f"single_bound={single.value:.6e} iterated_bound={total.value:.6e} "
                    f"slack={slack:.1e} {str(satisfied).lower()}"
                )
                if not satisfied:
                    offenders.append(f"{f.name}/{kind}/n={n}/r={r}: {measured!r} > {total.value!r} + slack")
                stem = f"iterate_{f.name}_{kind}"
                if "csv" in formats:
                    _write(
                        out / f"{stem}.csv",
                        _csv_text(
                            ["r", "n", "measured", "single_step_bound", "iterated_bound", "slack", "satisfied"],
                            [[
                                str(r),
                                str(n),
                                _fmt(measured),
                                _fmt(single.value),
                                _fmt(total.value),
                                _fmt(slack),
                                str(satisfied).lower(),
                            ]],
                        ),
                    )
                summary_results.append(
                    {
                        "function": f.name,
                        "kind": kind,
                        "n": n,
                        "r": r,
                        "measured": measured,
                        "single_step_bound": single.value,
                        "iterated_bound": total.value,
                        "slack": slack,
                        "satisfied": satisfied,
                    }
                )

    if "json" in formats:
        payload = {
            "command": "iterate",
            "parameters": {
                "q": params.q,
                "beta": params.beta,
                "alpha": kw["alpha"],
                "functions": [f.name for f in functions],
                "kinds": list(kw["kinds"]),
                "nodes": kw["nodes"],
                "chain": list(chain) if chain else None,
                "iterations": None if chain else kw["iterations"],
                "ns": None if chain else [int(kw["ns"][0])],
            },
            "results": summary_results,
            "all_satisfied": not offenders,
        }
        _write(out / "iterate_summary.json", _json_text(payload))

    if offenders:
        for line in offenders:
            click.echo(f"BOUND VIOLATION: {line}", err=True)
        ctx.exit(1)
    click.echo("all iterated bounds satisfied")


# ----------------------------------------------------------------------
# report
# ----------------------------------------------------------------------


@main.command()
@click.option("--out", envvar="ACTCONV_OUT", default="actconv_out", show_default=True)
@click.pass_context
def report(ctx, out):
    """Aggregate prior JSON summaries in the output directory into one index."""
    directory = Path(out)
    if not directory.is_dir():
        raise click.UsageError(f"output directory {out!r} does not exist")
    entries = []
    for path in sorted(directory.glob("*_summary.json")):
        try:
            payload = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise click.ClickException(f"cannot read summary {path}: {exc}")
        entries.append(
            {
                "file": path.name,
                "command": payload.get("command", "unknown"),
                "all_satisfied": bool(payload.get("all_satisfied", False)),
            }
        )
    if not entries:
        click.echo(f"no *_summary.json files under {out!r}")
        ctx.exit(1)
    all_ok = all(e["all_satisfied"] for e in entries)
    index = {"command": "report", "summaries": entries, "all_satisfied": all_ok}
    _write(directory / "index.json", _json_text(index))
    for e in entries:
        click.echo(f"{e['file']:<40s} {e['command']:<14s} satisfied={str(e['all_satisfied']).lower()}")
    click.echo(f"index written to {directory / 'index.json'}")
    if not all_ok:
        ctx.exit(1)


if __name__ == "__main__":
    main()
