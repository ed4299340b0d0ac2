import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional

import click
import typer
from rich.progress import Progress, SpinnerColumn, TextColumn
from sympy import Poly, QQ

from toda_cells.complex import (
    build_complex,
    cohomology,
    homology,
    local_complex,
    schubert_complex,
    split_by_last_node,
)
from toda_cells.divisor import divisor_table
from toda_cells.errors import DomainError, TodaCellsError, VerificationError
from toda_cells.formats import (
    divisor_csv,
    divisor_text,
    dumps,
    graph_csv,
    graph_to_dot,
    homology_csv,
    homology_json,
    homology_text,
    incidence_csv,
    incidence_text,
    tau_text,
    trajectory_csv,
    trajectory_text,
)
from toda_cells.incidence import graph_report, incidence_entries
from toda_cells.lie import RootDatum, root_datum
from toda_cells.models import HomologyReport, SplitReport, TauReport
from toda_cells.tau import format_poly, tau_system
from toda_cells.toda import (
    TodaState,
    eigenvalues,
    final_state,
    integrate,
    tau_initial_state,
)
from toda_cells.utils import (
    Settings,
    console,
    load_settings,
    parse_subset,
    write_artifact,
)
from toda_cells.verification import SUITES, run_suite

app = typer.Typer(
    help="Cell complexes, incidence graphs and tau-functions of nilpotent Toda lattices",
    no_args_is_help=True,
)

COEFFICIENTS = ("Z", "Q", "Z2")
VARIANTS = ("standard", "schubert", "local")

FamilyOption = typer.Option(..., "--family", "-f", help="Family: A, B, C, D, E, F or G")
RankOption = typer.Option(..., "--rank", "-r", help="Rank l")
OutOption = typer.Option(None, "--out", "-o", help="Write to this file instead of stdout")
ConfigOption = typer.Option(None, "--config", help="YAML settings file")
VerboseOption = typer.Option(False, "--verbose", "-v", help="Enable verbose output")


@contextmanager
def _reporting() -> Iterator[None]:
    """Map library errors to exit codes: 2 for failed checks, 1 otherwise."""
    try:
        yield
    except VerificationError as e:
        console.print(f"[red]{e}[/red]")
        raise typer.Exit(code=2)
    except TodaCellsError as e:
        console.print(f"[red]{e}[/red]")
        raise typer.Exit(code=1)


def _choice(name: str, value: str, allowed: tuple[str, ...]) -> str:
    if value not in allowed:
        raise DomainError(f"Invalid {name} {value!r}; choose from {', '.join(allowed)}")
    return value


def _datum(family: str, rank: int) -> RootDatum:
    return root_datum(family.strip().upper(), rank)


def _settings(config: Optional[Path], budget: Optional[float] = None) -> Settings:
    settings = load_settings(config)
    if budget is not None:
        settings = settings.model_copy(update={"budget_seconds": budget})
    return settings


def _group_report(
    datum: RootDatum, coeff: str, variant: str, kind: str
) -> HomologyReport:
    if variant == "standard":
        complex_ = build_complex(datum)
    elif variant == "schubert":
        complex_ = schubert_complex(datum)
    else:
        complex_ = local_complex(datum)
    compute = homology if kind == "homology" else cohomology
    return HomologyReport(
        family=datum.family,
        rank=datum.rank,
        coefficients=coeff,
        kind=kind,
        variant=variant,
        groups=compute(complex_, coeff),
    )


def _emit_groups(report: HomologyReport, format: str, out: Optional[Path]) -> None:
    if format == "json":
        text = homology_json(report)
    elif format == "csv":
        text = homology_csv(report)
    else:
        text = homology_text(report)
    write_artifact(text, out)


def _groups_command(
    kind: str,
    family: str,
    rank: int,
    coeff: str,
    format: str,
    variant: str,
    split: bool,
    out: Optional[Path],
    verbose: bool,
) -> None:
    with _reporting():
        _choice("coefficient ring", coeff, COEFFICIENTS)
        _choice("format", format, ("json", "csv", "text"))
        _choice("variant", variant, VARIANTS)
        datum = _datum(family, rank)
        if split:
            sub, quotient = split_by_last_node(datum)
            report = SplitReport(
                family=datum.family, rank=datum.rank, sub=sub, quotient=quotient
            )
            if format == "text":
                text = f"sub: {sub}\nquotient: {quotient}\n"
            else:
                text = dumps(report)
            write_artifact(text, out)
            return
        if verbose:
            console.print(f"[dim]Building the {variant} complex of {datum.label}[/dim]")
        report = _group_report(datum, coeff, variant, kind)
        _emit_groups(report, format, out)


@app.command(name="homology")
def homology_command(
    family: str = FamilyOption,
    rank: int = RankOption,
    coeff: str = typer.Option("Z", "--coeff", "-c", help="Coefficients: Z, Q or Z2"),
    format: str = typer.Option("json", "--format", help="json, csv or text"),
    variant: str = typer.Option(
        "standard", "--variant", help="standard, schubert or local complex"
    ),
    split: bool = typer.Option(
        False, "--split", help="Rational Betti numbers of the last-node split"
    ),
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """
    Homology of the compactified isospectral variety.

    Example usage:
        toda-cells homology -f A -r 3 --coeff Z --format json
    """
    _groups_command("homology", family, rank, coeff, format, variant, split, out, verbose)


@app.command(name="cohomology")
def cohomology_command(
    family: str = FamilyOption,
    rank: int = RankOption,
    coeff: str = typer.Option("Z", "--coeff", "-c", help="Coefficients: Z, Q or Z2"),
    format: str = typer.Option("json", "--format", help="json, csv or text"),
    variant: str = typer.Option(
        "standard", "--variant", help="standard, schubert or local complex"
    ),
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """Cohomology of the cell complex or of one of its type A variants."""
    _groups_command("cohomology", family, rank, coeff, format, variant, False, out, verbose)


@app.command()
def incidence(
    family: str = FamilyOption,
    rank: int = RankOption,
    format: str = typer.Option("text", "--format", help="json, csv or text"),
    nonzero: bool = typer.Option(False, "--nonzero", help="Only nonzero entries"),
    subset: Optional[str] = typer.Option(
        None, "--subset", "-J", help="Only edges leaving J, e.g. '(*0*)' or '2'"
    ),
    out: Optional[Path] = OutOption,
):
    """Every incidence number [J; J u {alpha_k}] of a type."""
    with _reporting():
        _choice("format", format, ("json", "csv", "text"))
        datum = _datum(family, rank)
        J = parse_subset(subset, datum.rank) if subset is not None else None
        entries = incidence_entries(datum, nonzero_only=nonzero, subset=J)
        if format == "json":
            text = dumps(entries)
        elif format == "csv":
            text = incidence_csv(entries)
        else:
            text = incidence_text(entries)
        write_artifact(text, out)


@app.command()
def graph(
    family: str = FamilyOption,
    rank: int = RankOption,
    kind: str = typer.Option("G", "--kind", "-k", help="G (weighted) or GL (local)"),
    format: str = typer.Option("dot", "--format", help="dot, json or csv"),
    out: Optional[Path] = OutOption,
):
    """
    Incidence graph on the subsets of simple roots.

    Example usage:
        toda-cells graph -f A -r 2 --format dot
    """
    with _reporting():
        _choice("graph kind", kind, ("G", "GL"))
        _choice("format", format, ("dot", "json", "csv"))
        report = graph_report(_datum(family, rank), kind)
        if format == "dot":
            text = graph_to_dot(report)
        elif format == "csv":
            text = graph_csv(report)
        else:
            text = dumps(report)
        write_artifact(text, out)


@app.command()
def tau(
    family: str = FamilyOption,
    rank: int = RankOption,
    format: str = typer.Option("text", "--format", help="text or json"),
    out: Optional[Path] = OutOption,
):
    """tau-functions of A_l, B_l, C_l or G2 as polynomials in the times."""
    with _reporting():
        _choice("format", format, ("json", "text"))
        datum = _datum(family, rank)
        system = tau_system(datum.family, datum.rank)
        constraint = None
        if system.constraint is not None:
            flat = Poly(system.constraint.as_expr(), *system.gens, domain=QQ)
            constraint = format_poly(flat)
        report = TauReport(
            family=datum.family,
            rank=datum.rank,
            taus=[format_poly(t) for t in system.taus],
            constraint=constraint,
        )
        write_artifact(dumps(report) if format == "json" else tau_text(report), out)


@app.command()
def divisor(
    rank: int = RankOption,
    range_: bool = typer.Option(False, "--range", help="All l from 2 up to --rank"),
    format: str = typer.Option("csv", "--format", help="csv, json or text"),
    out: Optional[Path] = OutOption,
):
    """Real divisor components through the top cell of A_l."""
    with _reporting():
        _choice("format", format, ("json", "csv", "text"))
        ranks = range(2, rank + 1) if range_ else [rank]
        rows = divisor_table(ranks)
        if format == "json":
            text = dumps(rows)
        elif format == "csv":
            text = divisor_csv(rows)
        else:
            text = divisor_text(rows)
        write_artifact(text, out)


@app.command()
def simulate(
    family: str = FamilyOption,
    rank: int = RankOption,
    t0: float = typer.Option(1.0, "--t0", help="Initial time"),
    t_end: float = typer.Option(3.0, "--t-end", help="Final time"),
    dt: float = typer.Option(1e-3, "--dt", help="Step size"),
    t3: float = typer.Option(0.0, "--t3", help="Frozen t3 for B, C and G2 tau data"),
    branch: Optional[int] = typer.Option(
        None, "--branch", help="G2 only: index of the real t5 root, ascending"
    ),
    spectrum: bool = typer.Option(
        False, "--spectrum", help="Type A only: print the Lax eigenvalues at both ends"
    ),
    a: Optional[List[float]] = typer.Option(None, "--a", help="Initial a_i (repeat)"),
    b: Optional[List[float]] = typer.Option(None, "--b", help="Initial b_i (repeat)"),
    format: str = typer.Option("csv", "--format", help="csv, json or text"),
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
):
    """
    Integrate the Toda equations with a fixed-step Runge-Kutta scheme.

    Without --a/--b the initial data is read off the tau-solution at t0.
    """
    with _reporting():
        _choice("format", format, ("json", "csv", "text"))
        settings = _settings(config)
        datum = _datum(family, rank)
        if a or b:
            state = TodaState(a=a or [0.0] * datum.rank, b=b or [0.0] * datum.rank, t=t0)
        else:
            system = tau_system(datum.family, datum.rank)
            state = tau_initial_state(system, t0, {"t3": t3}, branch=branch)
        traj = integrate(datum, state, t_end, dt, threshold=settings.blowup_threshold)
        if spectrum:
            for label, end in (("start", state), ("end", final_state(traj))):
                values = " ".join(f"{v:.6g}" for v in eigenvalues(datum, end))
                console.print(f"[dim]eigenvalues at {label}: {values}[/dim]")
        if traj.blowup:
            console.print(
                f"[yellow]Blow-up after t={traj.blowup_time}: divisor crossed[/yellow]"
            )
        if format == "json":
            text = dumps(traj)
        elif format == "csv":
            text = trajectory_csv(traj)
        else:
            text = trajectory_text(traj)
        write_artifact(text, out)


@app.command()
def verify(
    suite: str = typer.Option("paper", "--suite", help="paper (everything) or quick"),
    criterion: Optional[List[str]] = typer.Option(
        None, "--criterion", help="Run only the named criteria (repeat)"
    ),
    budget: Optional[float] = typer.Option(
        None, "--budget", help="Seconds available for the E7/E8 checks"
    ),
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """
    Run the acceptance criteria; exit 2 if any fails.

    Example usage:
        toda-cells verify --suite paper
        TODA_CELLS_BUDGET=600 toda-cells verify
    """
    with _reporting():
        _choice("suite", suite, SUITES)
        settings = _settings(config, budget)
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
            transient=True,
        ) as progress:
            task = progress.add_task("Verifying...", total=None)
            tally = run_suite(settings, suite=suite, only=criterion, verbose=verbose)
            progress.update(task, completed=True)
        write_artifact("\n".join(tally.lines()) + "\n", out)
        tally.print_summary()
        if not tally.ok:
            raise VerificationError(f"{tally.count('FAIL')} criteria failed")


def _version_callback(value: bool):
    if value:
        from toda_cells import __version__

        typer.echo(f"toda-cells version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        False, "--version", "-V", callback=_version_callback, is_eager=True
    ),
):
    pass


def run() -> None:
    """Console entry point; usage errors exit with status 1."""
    try:
        code = app(standalone_mode=False)
    except click.UsageError as e:
        console.print(f"[red]{e.format_message()}[/red]")
        if e.ctx is not None:
            console.print(e.ctx.get_usage())
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    run()
