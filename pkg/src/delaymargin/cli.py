"""Command-line front end.

Subcommands: intervals, analyze, stability, imaginary, verify. Plants are
read from JSON files holding either pole-zero-gain data or rational
coefficients (ascending powers):

    {"name": "example", "num": [3, 1, 2], "den": [4, 3, 2, 1]}
    {"gain": 2.0, "zeros": [[-0.25, 1.199]], "poles": [[-1.65, 0], ...]}

Exit codes: 0 success, 1 usage/input error, 2 analysis error (error class
name on stderr), 3 assumption-violation warning escalated by --strict.
Set DELAYMARGIN_LOG=quiet|info|debug to control stderr diagnostics.
"""

import json
import logging
import math
import os
import sys
import warnings

import click
import numpy as np

from . import boundary as _boundary
from . import delays as _delays
from . import numutil, oracle
from .errors import BoundaryPerturbationWarning, DelayMarginError
from .plant import BoundaryConfig, PoleZeroGain, from_rational, validate

log = logging.getLogger("delaymargin")

FULL = "%.17g"


class InputError(Exception):
    """Malformed input file or option combination (exit 1)."""


def _setup_logging():
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("DELAYMARGIN_LOG", "quiet").lower(), logging.ERROR
    )
    logging.basicConfig(stream=sys.stderr, level=level, format="%(name)s: %(message)s")


def load_plant(path):
    """Read a PlantSpec JSON file; returns (plant, name).

    Accepts a bare plant spec or a previously emitted report with an
    embedded "plant" object (round-tripping analyze output into verify).
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read plant file {path}: {exc}") from exc
    spec = data.get("plant", data)
    name = spec.get("name") or data.get("name") or os.path.basename(path)
    has_pzk = "gain" in spec
    has_ratio = "num" in spec or "den" in spec
    if has_pzk == has_ratio:
        raise InputError("plant spec needs exactly one of {gain,zeros,poles} or {num,den}")
    if has_ratio:
        if "num" not in spec or "den" not in spec:
            raise InputError("rational form needs both num and den")
        G = from_rational(spec["num"], spec["den"])
    else:
        zeros = [complex(re, im) for re, im in spec.get("zeros", [])]
        poles = [complex(re, im) for re, im in spec.get("poles", [])]
        G = PoleZeroGain(spec["gain"], zeros, poles)
        validate(G)
    return G, name, data


def _plant_payload(G, name):
    return {
        "name": name,
        "gain": G.gain,
        "zeros": [[z.real, z.imag] for z in G.zeros],
        "poles": [[p.real, p.imag] for p in G.poles],
    }


def _fmt_interval(lo, hi, decimals=3):
    left = "[" if lo == 0.0 else "("
    hi_s = "inf" if math.isinf(hi) else f"{hi:.{decimals}f}"
    return f"{left}{lo:.{decimals}f}, {hi_s})"


def _emit_curves(bf, cap, path):
    w = np.linspace(0.0, cap, 2000)
    hv = bf.H(w)
    pv = bf.phi(w)
    with open(path, "w") as fh:
        fh.write("omega,H,phi\n")
        for wi, hi, pi in zip(w, hv, pv):
            fh.write(f"{FULL % wi},{FULL % hi},{FULL % pi}\n")


def _catch_warnings():
    ctx = warnings.catch_warnings(record=True)
    caught = ctx.__enter__()
    warnings.simplefilter("always")
    return ctx, caught


def _flush_warnings(ctx, caught, strict):
    ctx.__exit__(None, None, None)
    perturbed = False
    for w in caught:
        click.echo(f"warning: {w.message}", err=True)
        if issubclass(w.category, BoundaryPerturbationWarning):
            perturbed = True
    if strict and perturbed:
        click.echo("strict mode: boundary assumptions were perturbed", err=True)
        sys.exit(3)


sigma_option = click.option("--sigma", type=float, required=True, help="boundary Re(s) = sigma0 (< 0)")
format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table"
)
strict_option = click.option("--strict", is_flag=True, help="escalate assumption warnings to exit 3")
cap_option = click.option("--omega-cap", type=float, default=None, help="override the frequency scan cap")
tol_option = click.option("--bisect-tol", type=float, default=None, help="override the bisection tolerance")
curves_option = click.option("--emit-curves", type=click.Path(), default=None, help="write (omega, H, phi) samples to a CSV file")


@click.group()
def cli():
    """Relative stability analysis of SISO dead-time systems."""
    _setup_logging()


def _common_prep(sigma, bisect_tol):
    if bisect_tol is not None:
        numutil.set_bisect_tol(bisect_tol)
    return BoundaryConfig(sigma)


@cli.command()
@click.argument("plant_file", type=click.Path(exists=True))
@sigma_option
@format_option
@strict_option
@cap_option
@tol_option
@curves_option
def intervals(plant_file, sigma, fmt, strict, omega_cap, bisect_tol, emit_curves):
    """Feasible intervals with invariant crossing direction on the boundary."""
    G, name, _ = load_plant(plant_file)
    cfg = _common_prep(sigma, bisect_tol)
    ctx, caught = _catch_warnings()
    res = _delays.prepare_intervals(G, cfg, omega_cap)
    if emit_curves:
        bf = _boundary.boundary_functions(G, BoundaryConfig(res.sigma0))
        _emit_curves(bf, res.omega_cap, emit_curves)
    _flush_warnings(ctx, caught, strict)
    if fmt == "json":
        payload = {
            "plant": _plant_payload(G, name),
            "sigma0": res.sigma0,
            "feasible": [[lo, hi] for lo, hi in res.feasible],
            "direction": [[lo, hi, s] for lo, hi, s in res.direction],
            "intervals": [
                {
                    "omega_lo": iv.omega_lo,
                    "omega_hi": iv.omega_hi,
                    "h_sign": iv.h_sign,
                    "phi_sign": iv.phi_sign,
                    "crossing_direction": iv.crossing_direction,
                    "tangential": iv.tangential,
                }
                for iv in res.intervals
            ],
        }
        click.echo(json.dumps(payload, sort_keys=True))
        return
    if fmt == "csv":
        click.echo("omega_lo,omega_hi,h_sign,phi_sign,crossing_direction")
        for iv in res.intervals:
            click.echo(
                f"{FULL % iv.omega_lo},{FULL % iv.omega_hi},"
                f"{iv.h_sign},{iv.phi_sign},{iv.crossing_direction}"
            )
        return
    click.echo(f"{name}: boundary Re(s) = {res.sigma0:g}")
    click.echo("I_h: " + ", ".join(_fmt_interval(lo, hi) for lo, hi in res.feasible))
    click.echo("I_d: " + ", ".join(_fmt_interval(lo, hi) for lo, hi, _ in res.direction))
    click.echo(f"{'I':<22}{'H_i':>5}{'Phi_i':>7}{'CD_i':>6}")
    for iv in res.intervals:
        word = "entering" if iv.crossing_direction > 0 else "leaving"
        if iv.tangential:
            word = "tangential"
        click.echo(
            f"{_fmt_interval(iv.omega_lo, iv.omega_hi):<22}"
            f"{iv.h_sign:>+5d}{iv.phi_sign:>+7d}{iv.crossing_direction:>+6d}  ({word})"
        )


def _report_rows(reports):
    rows = []
    prev_event = None
    for rep in reports:
        rows.append((rep, prev_event))
        prev_event = rep.event_at_hi
    return rows


def _analyze_payload(G, name, result):
    return {
        "plant": _plant_payload(G, name),
        "sigma0": result.sigma0,
        "h_max": result.h_max,
        "capped": result.capped,
        "verdict_flag": result.verdict_flag,
        "reports": [
            {
                "h_lo": rep.h_lo,
                "h_hi": rep.h_hi,
                "count": rep.count,
                "crossing_omega": ev.omega if ev else None,
                "crossing_direction": ev.direction if ev else None,
            }
            for rep, ev in _report_rows(result.reports)
        ],
        "events": [
            {
                "delay": e.delay,
                "omega": e.omega,
                "root": [e.root.real, e.root.imag],
                "direction": e.direction,
            }
            for e in result.events
        ],
    }


def _print_analyze_table(result):
    click.echo(f"{'delay interval':<24}{'roots in C_s':>14}  crossing root")
    for rep, ev in _report_rows(result.reports):
        count = "inf" if rep.count is None else str(rep.count)
        root = "-"
        if ev is not None:
            root = f"{ev.root.real:.3f}{ev.root.imag:+.3f}j"
        click.echo(f"{_fmt_interval(rep.h_lo, rep.h_hi):<24}{count:>14}  {root}")


@cli.command()
@click.argument("plant_file", type=click.Path(exists=True))
@sigma_option
@click.option("--hmax", type=float, required=True, help="delay horizon")
@format_option
@strict_option
@cap_option
@tol_option
@curves_option
def analyze(plant_file, sigma, hmax, fmt, strict, omega_cap, bisect_tol, emit_curves):
    """Delay intervals and root counts for h in [0, hmax] (problem 1)."""
    G, name, _ = load_plant(plant_file)
    cfg = _common_prep(sigma, bisect_tol)
    ctx, caught = _catch_warnings()
    result = _delays.analyze_up_to(G, cfg, hmax, omega_cap=omega_cap)
    if emit_curves and result.verdict_flag != "biproper_unit_or_more":
        bf = _boundary.boundary_functions(G, BoundaryConfig(result.sigma0))
        _emit_curves(bf, _boundary.default_omega_cap(bf), emit_curves)
    _flush_warnings(ctx, caught, strict)
    if result.verdict_flag == "biproper_unit_or_more":
        click.echo("bi-proper plant with |G(inf)| >= 1: infinitely many "
                   "characteristic roots inside C_s for all delays")
        return
    if fmt == "json":
        click.echo(json.dumps(_analyze_payload(G, name, result), sort_keys=True))
        return
    if fmt == "csv":
        click.echo("h_lo,h_hi,count,crossing_omega,crossing_direction")
        for rep, ev in _report_rows(result.reports):
            count = "" if rep.count is None else rep.count
            omega = "" if ev is None else FULL % ev.omega
            cd = "" if ev is None else f"{ev.direction:+d}"
            click.echo(f"{FULL % rep.h_lo},{FULL % rep.h_hi},{count},{omega},{cd}")
        return
    click.echo(f"{name}: sigma0 = {result.sigma0:g}, h_max = {result.h_max:g}")
    if result.capped:
        click.echo(
            "note: bi-proper plant; beyond h = ln|d|/sigma0 the loop is "
            "unstable with infinitely many roots inside C_s"
        )
    _print_analyze_table(result)


def _stable_text(stable):
    if not stable:
        return "stable: (none)"
    return "stable: " + ", ".join(_fmt_interval(lo, hi) for lo, hi in stable)


@cli.command()
@click.argument("plant_file", type=click.Path(exists=True))
@sigma_option
@format_option
@strict_option
@cap_option
@tol_option
@curves_option
def stability(plant_file, sigma, fmt, strict, omega_cap, bisect_tol, emit_curves):
    """Stable delay intervals over all h in [0, inf) (problem 2)."""
    G, name, _ = load_plant(plant_file)
    cfg = _common_prep(sigma, bisect_tol)
    ctx, caught = _catch_warnings()
    verdict = _delays.analyze_all_delays(G, cfg, omega_cap=omega_cap)
    if emit_curves and verdict.verdict_flag != "biproper_unit_or_more":
        bf = _boundary.boundary_functions(G, BoundaryConfig(verdict.sigma0))
        _emit_curves(bf, _boundary.default_omega_cap(bf), emit_curves)
    _flush_warnings(ctx, caught, strict)
    if verdict.verdict_flag == "biproper_unit_or_more":
        click.echo("bi-proper plant with |G(inf)| >= 1: infinitely many "
                   "characteristic roots inside C_s for all delays")
        click.echo("stable: (none)")
        return
    if fmt == "json":
        payload = {
            "plant": _plant_payload(G, name),
            "sigma0": verdict.sigma0,
            "stable_intervals": [[lo, hi] for lo, hi in verdict.stable_intervals],
            "leaving_budget": verdict.leaving_budget,
            "termination_delay": verdict.termination_delay,
            "verdict_flag": verdict.verdict_flag,
        }
        click.echo(json.dumps(payload, sort_keys=True))
        return
    if fmt == "csv":
        click.echo("h_lo,h_hi")
        for lo, hi in verdict.stable_intervals:
            click.echo(f"{FULL % lo},{FULL % hi}")
        return
    click.echo(f"{name}: sigma0 = {verdict.sigma0:g}")
    click.echo(_stable_text(verdict.stable_intervals))


@cli.command()
@click.argument("plant_file", type=click.Path(exists=True))
@click.option("--hmax", type=float, required=True, help="delay horizon")
@format_option
@strict_option
@tol_option
def imaginary(plant_file, hmax, fmt, strict, bisect_tol):
    """Imaginary-axis analysis (sigma0 = 0) up to hmax."""
    G, name, _ = load_plant(plant_file)
    if bisect_tol is not None:
        numutil.set_bisect_tol(bisect_tol)
    ctx, caught = _catch_warnings()
    result = _delays.imaginary_axis_analysis(G, hmax)
    _flush_warnings(ctx, caught, strict)
    stable = _delays.stable_from_reports(result.reports)
    if fmt == "json":
        payload = {
            "plant": _plant_payload(G, name),
            "sigma0": 0.0,
            "h_max": hmax,
            "reports": [
                {"h_lo": r.h_lo, "h_hi": r.h_hi, "count": r.count}
                for r in result.reports
            ],
            "stable_intervals": [[lo, hi] for lo, hi in stable],
            "tangential_delays": list(result.tangential_delays),
            "critical_frequencies": [
                {"omega": w, "base_delay": h0, "direction": d}
                for w, h0, d in result.critical_frequencies
            ],
        }
        click.echo(json.dumps(payload, sort_keys=True))
        return
    if fmt == "csv":
        click.echo("h_lo,h_hi,count")
        for rep in result.reports:
            click.echo(f"{FULL % rep.h_lo},{FULL % rep.h_hi},{rep.count}")
        return
    click.echo(f"{name}: sigma0 = 0 (imaginary axis), h_max = {hmax:g}")
    for rep in result.reports:
        click.echo(f"{_fmt_interval(rep.h_lo, rep.h_hi):<24}{rep.count:>6}")
    click.echo(_stable_text(stable))
    if result.tangential_delays:
        pts = ", ".join(f"{t:.3f}" for t in result.tangential_delays)
        click.echo(f"except tangential touchings at h = {pts}")
    if result.zero_frequency_hit:
        click.echo("warning: |G(j0)| = 1; zero-frequency crossing skipped", err=True)


@cli.command()
@click.argument("plant_file", type=click.Path(exists=True))
@click.option("--sigma", type=float, default=None, help="boundary (defaults to the embedded value)")
@click.option("--hmax", type=float, default=None, help="delay horizon (defaults to the embedded value)")
@strict_option
@tol_option
def verify(plant_file, sigma, hmax, strict, bisect_tol):
    """Run analyze, then cross-check counts and directions with the oracle."""
    G, name, data = load_plant(plant_file)
    sigma = sigma if sigma is not None else data.get("sigma0")
    hmax = hmax if hmax is not None else data.get("h_max")
    if sigma is None or hmax is None:
        raise InputError("verify needs --sigma and --hmax (or an analyze JSON report)")
    if bisect_tol is not None:
        numutil.set_bisect_tol(bisect_tol)
    ctx, caught = _catch_warnings()
    result = _delays.analyze_up_to(G, BoundaryConfig(sigma), hmax)
    _flush_warnings(ctx, caught, strict)
    failures = 0
    expected = {}
    for rep in data.get("reports", []):
        expected[(round(rep["h_lo"], 9), round(rep["h_hi"], 9))] = rep["count"]
    for rep in result.reports:
        if rep.count is None or rep.h_hi <= rep.h_lo:
            continue
        mid = 0.5 * (rep.h_lo + (rep.h_hi if not math.isinf(rep.h_hi) else rep.h_lo + 1.0))
        region = oracle.enclosure_bounds(G, mid, result.sigma0)
        got = oracle.count_roots(G, mid, region)
        status = "ok" if got == rep.count else "MISMATCH"
        failures += status != "ok"
        click.echo(
            f"count {_fmt_interval(rep.h_lo, rep.h_hi)}: reported {rep.count}, "
            f"oracle {got} [{status}]"
        )
        key = (round(rep.h_lo, 9), round(rep.h_hi, 9))
        if key in expected and expected[key] != rep.count:
            failures += 1
            click.echo(f"  embedded report disagrees: {expected[key]}")
    for ev in result.events:
        got = oracle.numeric_crossing_direction(G, ev.delay, ev.root)
        status = "ok" if got == ev.direction else "MISMATCH"
        failures += status != "ok"
        click.echo(
            f"direction h={ev.delay:.3f} omega={ev.omega:.3f}: "
            f"reported {ev.direction:+d}, tracked {got:+d} [{status}]"
        )
    if failures:
        click.echo(f"{failures} verification mismatch(es)", err=True)
        sys.exit(2)
    click.echo("verification passed")


def main(argv=None):
    try:
        return cli(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(1)
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(1)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)
    except DelayMarginError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
