"""
The `yamabe` command: validate complexes, report curvature, run flows and
run the oracle suite.

    yamabe validate --facets 5cell
    yamabe curvature --facets cyclic9 --radii random:0.5,2 --out k.json
    yamabe flow --facets 5cell.txt --radii r0.txt --t-max 10 --out traj.csv
    yamabe check --samples 1000 --seed 42
"""

import os
import sys
from typing import Optional
from typing import Sequence

from . import __desc__
from .app import EXIT_INTERNAL
from .app import EXIT_OK
from .app import App
from .complex import BUILTINS
from .complex import Complex
from .complex import build_complex
from .complex import load_builtin
from .complex import read_facet_file
from .complex import validate_closed
from .constants import Q_MIN
from .curvature import check_bounds
from .curvature import curvature_csv
from .curvature import curvature_field
from .curvature import curvature_json
from .errors import DegenerateTetrahedron
from .errors import InputError
from .errors import UsageError
from .flow import FlowConfig
from .flow import run_flow
from .flow import summary_json
from .flow import trajectory_csv
from .metric import MetricStructure
from .metric import read_radii
from .oracle import CHECK_COUNT
from .oracle import check_report_json
from .oracle import run_checks
from .ui import Table
from .ui import progressbar

app = App("yamabe", description=__desc__)

FACETS_HELP = "facet list file, or a shipped complex: %s" % (", ".join(sorted(BUILTINS)))
RADII_HELP = "ones, random:LO,HI (log-uniform, seeded) or a radii file"


def load_complex(facets: str) -> Complex:
    """
    An existing file is read as a facet list; otherwise a shipped complex is
    looked up by name, with or without the `.txt` suffix.
    """

    if os.path.isfile(facets):
        return build_complex(read_facet_file(facets))

    name = os.path.basename(facets)
    if name.endswith(".txt"):
        name = name[: -len(".txt")]

    if name in BUILTINS:
        return build_complex(load_builtin(name))

    raise InputError("No such facet file or shipped complex: %s" % (facets))


def initial_radii(source: str, c: Complex, seed: int = 0) -> MetricStructure:
    """
    Parameters:
    ---
        source (str):
            `ones`, `random:LO,HI` or the path of a radii file.
    """

    if source == "ones":
        return MetricStructure.ones(c.vertices)

    if source.startswith("random:"):
        try:
            low, high = (float(x) for x in source[len("random:"):].split(","))
        except ValueError:
            raise InputError("Expected random:LO,HI, got %r" % (source))
        return MetricStructure.log_uniform(c.vertices, low, high, seed)

    if not os.path.isfile(source):
        raise InputError("No such radii file: %s" % (source))

    return read_radii(source, c.vertices)


def write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


@app.command(option_help={"facets": FACETS_HELP})
def validate(facets: str):
    """Check that every triangle lies in exactly two tetrahedra"""

    c = load_complex(facets)
    diagnostics = validate_closed(c)

    if diagnostics.closed:
        app.echo("closed pseudomanifold, %d vertices, d_max = %d" % (c.n_vertices, c.d_max))
        return EXIT_OK

    app.echo("[yellow]not a closed pseudomanifold[/]: %d problem(s)" % (len(diagnostics)))

    table = Table(headers=["simplex", "tetrahedra"])
    for tri, count in diagnostics.bad_triangles:
        table.add_row([" ".join(map(str, tri)), count])
    for v in diagnostics.isolated_vertices:
        table.add_row([str(v), 0])

    app.echo(table())
    return EXIT_OK


@app.command(
    option_help={
        "facets": FACETS_HELP,
        "radii": RADII_HELP,
        "out": "write the report here instead of printing a table",
        "format": "csv or json, by default from the --out extension",
        "q_min": "degeneracy floor on the normalized Q",
        "seed": "seed for random radii",
    }
)
def curvature(
    facets: str,
    radii: str = "ones",
    out: Optional[str] = None,
    format: Optional[str] = None,
    q_min: Optional[float] = None,
    seed: int = 0,
):
    """Compute the curvature of every vertex"""

    if format is None and out is not None:
        format = "json" if out.endswith(".json") else "csv"

    if format not in (None, "csv", "json"):
        raise UsageError("--format must be csv or json, got %r" % (format))

    c = load_complex(facets)
    validate_closed(c)

    m = initial_radii(radii, c, seed)
    try:
        field = curvature_field(c, m, Q_MIN if q_min is None else q_min)
    except DegenerateTetrahedron as e:
        raise InputError("Metric is degenerate: %s" % (e))
    check_bounds(c, field)

    if format is None:
        table = Table(headers=["vertex", "r", "K"])
        for v, r, K in zip(field.vertex_ids, m.radii, field.K):
            table.add_row([v, float(r), float(K)])

        app.echo(table())
        app.echo("k = %.12g, T = %.12g, spread = %.6g" % (field.k, field.T, field.spread))
        return EXIT_OK

    text = curvature_json(field) if format == "json" else curvature_csv(field)
    if out is None:
        app.echo(text.rstrip("\n"))
    else:
        write_text(out, text)

    return EXIT_OK


@app.command(
    option_help={
        "facets": FACETS_HELP,
        "radii": RADII_HELP,
        "config": "JSON file of flow settings, overridden by the flags below",
        "out": "trajectory CSV",
        "summary": "summary JSON",
        "dt": "initial time step",
        "t_max": "time horizon",
        "tol_converge": "stop once max K - min K is below this",
        "delta_collapse": "collapse threshold on r_i / sum r",
        "q_min": "degeneracy floor on the normalized Q",
        "normalize": "keep sum r constant",
        "sample_every": "accepted steps between trajectory rows",
        "max_halvings": "step halvings before a rejection is a pinch",
        "seed": "seed for random radii",
    }
)
def flow(
    facets: str,
    radii: str = "ones",
    config: Optional[str] = None,
    out: Optional[str] = None,
    summary: Optional[str] = None,
    dt: Optional[float] = None,
    t_max: Optional[float] = None,
    tol_converge: Optional[float] = None,
    delta_collapse: Optional[float] = None,
    q_min: Optional[float] = None,
    normalize: Optional[bool] = None,
    sample_every: Optional[int] = None,
    max_halvings: Optional[int] = None,
    seed: Optional[int] = None,
):
    """Run the Yamabe flow until it converges, collapses, pinches or reaches t_max"""

    c = load_complex(facets)
    validate_closed(c)

    overrides = {
        "dt": dt,
        "t_max": t_max,
        "tol_converge": tol_converge,
        "delta_collapse": delta_collapse,
        "q_min": q_min,
        "normalize": normalize,
        "sample_every": sample_every,
        "max_halvings": max_halvings,
        "seed": seed,
    }
    cfg = FlowConfig.merged(config, overrides).validate(c.n_vertices)
    r0 = initial_radii(radii, c, cfg.seed)

    with progressbar(title="flow", enabled=not app.quiet) as bar:
        report = run_flow(c, r0, cfg, on_step=lambda state: bar())

    if out is not None:
        write_text(out, trajectory_csv(report))

    text = summary_json(report)
    if summary is not None:
        write_text(summary, text)

    app.echo(text.rstrip("\n"))
    return EXIT_OK


@app.command(
    option_help={
        "samples": "number of random tetrahedra",
        "seed": "seed of the sample",
        "out": "JSON report",
    }
)
def check(samples: int = 1000, seed: int = 42, out: Optional[str] = None):
    """Compare the closed forms against independent numerical oracles"""

    if samples < 1:
        raise UsageError("--samples must be positive, got %d" % (samples))

    with progressbar(CHECK_COUNT, title="checks", enabled=not app.quiet) as bar:
        results = run_checks(samples, seed, on_check=bar)

    table = Table(headers=["test", "samples", "max defect", "threshold", "result"])
    for r in results:
        table.add_row(
            [r.test, r.samples, "%.3g" % (r.max_defect), "%.0e" % (r.threshold), "ok" if r.passed else "FAILED"]
        )
    app.echo(table())

    if out is not None:
        write_text(out, check_report_json(results))

    failed = [r.test for r in results if not r.passed]
    if failed:
        app.echo("[red]%d check(s) failed[/]: %s" % (len(failed), ", ".join(failed)), err=True)
        return EXIT_INTERNAL

    return EXIT_OK


def run_cli(args: Optional[Sequence[str]] = None) -> int:
    """Run the command line on `args` (sys.argv[1:] by default), returning the exit code."""

    return app.run(args)


def main():
    sys.exit(run_cli())
