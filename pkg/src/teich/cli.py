"""Command-line front end.

Exit codes: 0 success, 1 a domain-level failure (a verdict or a geometric
error), 2 usage and parse errors. Outputs are written atomically; with ``--out``
a run manifest ``<out>.manifest.json`` is written beside the output, and the
output names it.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
import os
import sys

import click
import numpy as np

from teich import __version__
from teich.curves import Slope, SurfaceKind
from teich.identities import IdentityError, campaign, verify_set1, verify_set2, Verdict
from teich.reconstruct import ReconstructionError, reconstruct, reconstruct_shirt, reconstruct_torus
from teich.spectrum import (
    SpectrumError,
    atomic_write,
    compare,
    dumps,
    enumerate_spectrum,
    loads,
    multiplicity_report,
)
from teich.surface import (
    ConfigError,
    SurfaceError,
    build_surface,
    curve_length,
    format_word,
    four_holed_sphere_graph,
    one_holed_torus_graph,
    pinch_path,
    read_config,
    sample_fn,
)

USAGE_ERROR = 2
DOMAIN_ERROR = 1


class DomainFailure(click.ClickException):
    exit_code = DOMAIN_ERROR

    def show(self, file=None):
        click.echo(f"error: {self.message}", err=True)


class UsageFailure(click.ClickException):
    exit_code = USAGE_ERROR

    def show(self, file=None):
        click.echo(f"error: {self.message}", err=True)


def _threads() -> int:
    raw = os.environ.get("TEICH_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageFailure(f"TEICH_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageFailure(f"TEICH_THREADS must be a positive integer, got {raw!r}")
    return n


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _manifest_name(out: str) -> str:
    return os.path.basename(out) + ".manifest.json"


def _emit(out: str | None, text: str, command: str, started: str, *, config=None, seed=None,
          inputs=()) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    threads = _threads()
    atomic_write(out, text)
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "config": os.fspath(config) if config is not None else None,
        "inputs": [os.fspath(p) for p in inputs],
        "seed": seed,
        "tool_version": __version__,
        "threads": threads,
        "started": started,
        "finished": _now(),
        "outputs": [os.fspath(out)],
    }
    atomic_write(os.path.join(os.path.dirname(os.path.abspath(out)), _manifest_name(out)), _json(manifest))


def _load(config):
    try:
        return read_config(config)
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except OSError as exc:
        raise UsageFailure(f"cannot read {config}: {exc.strerror}")


def _build(graph, point):
    try:
        return build_surface(graph, point)
    except (SurfaceError, ValueError) as exc:
        raise DomainFailure(str(exc))


def _read_spectrum(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise UsageFailure(f"cannot read {path}: {exc.strerror}")
    except SpectrumError as exc:
        raise UsageFailure(f"{path}: {exc}")


def _with_manifest_header(text: str, out: str | None) -> str:
    if out is None:
        return text
    head, _, rest = text.partition("\n")
    rec = json.loads(head)
    rec["manifest"] = _manifest_name(out)
    return json.dumps(rec, sort_keys=True) + "\n" + rest


@click.group()
@click.version_option(__version__, prog_name="teich")
def main():
    """Hyperbolic surfaces, simple length spectra and their reconstruction."""


@main.command("surface")
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--word", "words", multiple=True, help="Extra curve word to measure; repeatable.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_surface(config, words, out):
    """Build the surface described by CONFIG and report lengths and relator residuals."""
    started = _now()
    graph, point = _load(config)
    s = _build(graph, point)
    lengths = {f"C{e}": curve_length(s, s.curve_word(e)) for e in range(len(graph.gluings))}
    for k in range(len(graph.boundaries)):
        lengths[f"boundary{k}"] = curve_length(s, s.boundary_word(k))
    for w in words:
        try:
            lengths[w] = curve_length(s, w)
        except (KeyError, ValueError) as exc:
            raise UsageFailure(f"cannot measure word {w!r}: {exc}")
    residuals = s.relator_residuals()
    report = {
        "kind": s.kind,
        "pants": graph.n_pants,
        "generators": s.generator_names(),
        "lengths": lengths,
        "relators": [format_word(r) for r in s.relators],
        "max_relator_residual": max(residuals, default=0.0),
        "valid": True,
    }
    if out is not None:
        report["manifest"] = _manifest_name(out)
    _emit(out, _json(report), "surface", started, config=config)


@main.command("spectrum")
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--cutoff", type=float, required=True, help="Length cutoff L.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--boundary/--no-boundary", default=True, help="List boundary curves in the spectrum.")
def cmd_spectrum(config, cutoff, out, boundary):
    """Enumerate the simple length spectrum up to the cutoff as JSON lines."""
    started = _now()
    if not math.isfinite(cutoff) or cutoff <= 0:
        raise UsageFailure(f"cutoff must be a finite positive number, got {cutoff}")
    graph, point = _load(config)
    s = _build(graph, point)
    try:
        spec = enumerate_spectrum(s, cutoff, include_boundary=boundary)
    except SpectrumError as exc:
        raise DomainFailure(str(exc))
    _emit(out, _with_manifest_header(dumps(spec), out), "spectrum", started, config=config)


@main.command("verify")
@click.argument("config", type=click.Path(dir_okay=False), required=False)
@click.option("--family", type=click.Choice(["set1", "set2"]), required=True)
@click.option("--range", "range_", type=click.IntRange(min=0), default=5, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=None, help="Verify on sampled surfaces instead of CONFIG.")
@click.option("--seed", type=int, default=None, help="Required with --samples.")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_verify(config, family, range_, samples, seed, tol, out):
    """Check the length identities on CONFIG or on seeded random surfaces."""
    started = _now()
    if (config is None) == (samples is None):
        raise UsageFailure("give either CONFIG or --samples")
    if samples is not None and seed is None:
        raise UsageFailure("--seed is required when sampling")
    if not tol > 0:
        raise UsageFailure(f"tolerance must be positive, got {tol}")
    if samples is not None:
        try:
            report = campaign(family, samples, seed, range_, tol)
        except IdentityError as exc:
            raise UsageFailure(str(exc))
    else:
        graph, point = _load(config)
        s = _build(graph, point)
        want = "S11" if family == "set1" else "S04"
        if s.kind != want:
            raise UsageFailure(f"family {family} needs a {want} surface, got {s.kind}")
        verify = verify_set1 if family == "set1" else verify_set2
        reports = verify(s, Slope(1, 0), Slope(0, 1), range_, tol)
        by_family: dict[str, float] = {}
        for r in reports:
            by_family[r.family] = max(by_family.get(r.family, 0.0), r.relative)
        failures = sum(r.verdict is not Verdict.IDENTITY for r in reports)
        report = {
            "family": family,
            "samples": 1,
            "seed": None,
            "range": range_,
            "tolerance": tol,
            "reports": len(reports),
            "failures": failures,
            "max_residual": max(by_family.values(), default=0.0),
            "max_residual_by_family": dict(sorted(by_family.items())),
            "verdict": "Identity" if failures == 0 else "Nonzero",
        }
    if out is not None:
        report["manifest"] = _manifest_name(out)
    _emit(out, _json(report), "verify", started, config=config, seed=seed)
    if report["failures"]:
        raise DomainFailure(f"{report['failures']} of {report['reports']} residuals exceed {tol}")


def _parse_grid(text: str) -> list[float]:
    text = text.strip()
    if not text:
        raise UsageFailure("the r grid is empty")
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1 or start <= 0 or stop <= 0:
                raise ValueError
            grid = np.geomspace(start, stop, n).tolist() if n > 1 else [start]
        else:
            grid = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageFailure(f"cannot parse r grid {text!r}; use START:STOP:COUNT or a comma list")
    if not grid:
        raise UsageFailure("the r grid is empty")
    if any(not (math.isfinite(r) and r > 0) for r in grid):
        raise UsageFailure("grid values must be positive")
    return grid


@main.command("pinch")
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--curve", type=click.IntRange(min=0), required=True, help="Index of the gluing to pinch.")
@click.option("--r-grid", "grid", required=True, help="START:STOP:COUNT (geometric) or a comma list.")
@click.option("--track", "tracks", multiple=True, help="Curve word to follow; repeatable.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_pinch(config, curve, grid, tracks, out):
    """Shrink one decomposition curve along a grid and tabulate lengths and length / ln r."""
    started = _now()
    rs = _parse_grid(grid)
    graph, point = _load(config)
    s = _build(graph, point)
    if curve >= len(graph.gluings):
        raise UsageFailure(f"curve {curve} is not a gluing (there are {len(graph.gluings)})")
    if not tracks:
        tracks = tuple(s.aliases) or tuple(format_word(s.curve_word(e)) for e in range(len(graph.gluings)))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if out is not None:
        buf.write(f"# manifest: {_manifest_name(out)}\n")
    writer.writerow(["r"] + [f"l({w})" for w in tracks] + [f"l({w})/ln r" for w in tracks])
    for r in rs:
        try:
            x = pinch_path(s, curve, r)
            lengths = [curve_length(x, w) for w in tracks]
        except KeyError as exc:
            raise UsageFailure(f"unknown generator in tracked word: {exc}")
        except (SurfaceError, ValueError) as exc:
            raise DomainFailure(f"r = {r}: {exc}")
        ratios = [l / math.log(r) if r != 1.0 else math.nan for l in lengths]
        writer.writerow([repr(r)] + [repr(v) for v in lengths] + [repr(v) for v in ratios])
    _emit(out, buf.getvalue(), "pinch", started, config=config)


@main.command("sample")
@click.option("--kind", type=click.Choice(["S11", "S04"], case_sensitive=False), required=True)
@click.option("--samples", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--cutoff", type=float, default=8.0, show_default=True)
@click.option("--window", type=float, default=1e-9, show_default=True, help="Multiplicity window.")
@click.option("--length-range", nargs=2, type=float, default=(0.5, 3.0), show_default=True)
@click.option("--twist-range", nargs=2, type=float, default=(-1.0, 1.0), show_default=True)
@click.option("--distribution", type=click.Choice(["log-uniform", "wp-like"]), default="log-uniform", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_sample(kind, samples, seed, cutoff, window, length_range, twist_range, distribution, out):
    """Genericity campaign: count length coincidences in the spectra of random surfaces."""
    started = _now()
    graph = one_holed_torus_graph() if kind.upper() == "S11" else four_holed_sphere_graph()
    states = np.random.SeedSequence(seed).generate_state(samples)
    rows = []
    with_clusters = 0
    try:
        for k in states:
            point = sample_fn(graph, length_range, twist_range, int(k), distribution=distribution,
                              boundary_range=length_range)
            spec = enumerate_spectrum(build_surface(graph, point), cutoff, include_boundary=False)
            clusters = multiplicity_report(spec, window)
            with_clusters += bool(clusters)
            rows.append({"point": point.to_dict(), "entries": len(spec.entries), "clusters": len(clusters)})
    except (SurfaceError, SpectrumError, ValueError) as exc:
        raise UsageFailure(str(exc))
    report = {
        "kind": kind.upper(),
        "samples": samples,
        "seed": seed,
        "cutoff": cutoff,
        "window": window,
        "distribution": distribution,
        "surfaces_with_clusters": with_clusters,
        "results": rows,
    }
    if out is not None:
        report["manifest"] = _manifest_name(out)
    _emit(out, _json(report), "sample", started, seed=seed)


def _parse_boundary(text):
    if text is None:
        return None
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageFailure(f"cannot parse boundary lengths {text!r}")
    if len(values) != 4 or any(not (math.isfinite(v) and v >= 0) for v in values):
        raise UsageFailure("need four comma-separated non-negative boundary lengths")
    return values


@main.command("reconstruct")
@click.argument("spectrum", type=click.Path(dir_okay=False))
@click.option("--kind", type=click.Choice(["S11", "S04"], case_sensitive=False), default=None,
              help="Expected kind; defaults to the file header.")
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--boundary", default=None, help="d1,d2,d3,d4 for a four-holed sphere; fixes the labels.")
@click.option("--both-markings", is_flag=True, help="Also report the mirror marking of a torus.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_reconstruct(spectrum, kind, tol, boundary, both_markings, out):
    """Recover a surface up to isometry from its simple length spectrum."""
    started = _now()
    spec = _read_spectrum(spectrum)
    if kind is not None and SurfaceKind.parse(kind) is not spec.kind:
        raise UsageFailure(f"{spectrum} holds a {spec.kind.value} spectrum, not {kind}")
    bd = _parse_boundary(boundary)
    try:
        if spec.kind is SurfaceKind.ONE_HOLED_TORUS:
            if bd is not None:
                raise UsageFailure("--boundary applies to four-holed spheres only")
            result = reconstruct_torus(spec, tol, both_markings=both_markings)
        elif bd is not None:
            result = reconstruct_shirt(spec, bd, tol)
        else:
            result = reconstruct(spec, tol)
    except ReconstructionError as exc:
        raise DomainFailure(str(exc))
    report = result.to_dict()
    if out is not None:
        report["manifest"] = _manifest_name(out)
    _emit(out, _json(report), "reconstruct", started, inputs=(spectrum,))


@main.command("compare")
@click.argument("a", type=click.Path(dir_okay=False))
@click.argument("b", type=click.Path(dir_okay=False))
@click.option("--tol", type=float, default=1e-7, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_compare(a, b, tol, out):
    """Compare two spectrum files as unmarked multisets; exit 1 if they differ."""
    started = _now()
    sa, sb = _read_spectrum(a), _read_spectrum(b)
    if sa.kind is not sb.kind:
        raise UsageFailure(f"cannot compare a {sa.kind.value} spectrum with a {sb.kind.value} spectrum")
    # compare on the common range
    common = min(sa.cutoff, sb.cutoff)
    sa, sb = sa.truncate(common), sb.truncate(common)
    try:
        diff = compare(sa, sb, tol)
    except SpectrumError as exc:
        raise UsageFailure(str(exc))
    report = {
        "verdict": "SpectraEqual" if diff.all_matched else "SpectraDiffer",
        "matched": diff.matched,
        "only_left": list(diff.only_left),
        "only_right": list(diff.only_right),
        "max_deviation": diff.max_deviation,
        "near_cutoff": diff.near_cutoff,
        "tolerance": tol,
    }
    if out is not None:
        report["manifest"] = _manifest_name(out)
    _emit(out, _json(report), "compare", started, inputs=(a, b))
    if not diff.all_matched:
        raise DomainFailure(f"spectra differ: {len(diff.only_left)} entries only in {a}, "
                            f"{len(diff.only_right)} only in {b}")


if __name__ == "__main__":
    main()
