"""Command-line surface.

Subcommands pool pre-computed per-imputation tables (pool-f,
pool-chisq, pool-welch, pool-tests3), run the bundled end-to-end
examples (run-example) or the Monte Carlo calibration harness
(simulate).  Exit codes: 0 success, 2 schema or validation problem,
3 numeric or convergence failure, 4 I/O failure.
"""

from __future__ import annotations

import functools
import sys

import click
import pandas as pd

from . import pipeline, tables
from .errors import InvalidArgumentError, MiPoolError, NumericError

EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _mapped_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NumericError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)
        except MiPoolError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO)
    return wrapper


def _emit(frame: pd.DataFrame, output: str | None, precision: str) -> None:
    click.echo(tables.render_table(frame, precision))
    if output is not None:
        tables.write_table(frame, output)


def _parse_list(flag: str, raw: str, kind):
    try:
        return tuple(kind(v) for v in raw.split(","))
    except ValueError:
        raise InvalidArgumentError(
            f"{flag} expects comma-separated {kind.__name__} values, got {raw!r}")


_input_option = click.option(
    "--input", "input_path", required=True,
    type=click.Path(dir_okay=False), help="Input CSV table.")
_output_option = click.option(
    "--output", "output_path", default=None, type=click.Path(dir_okay=False),
    help="Write the result table to this CSV (full precision).")
_precision_option = click.option(
    "--precision", type=click.Choice(["display", "full"]), default="display",
    show_default=True, help="Console rendering precision.")
_chisq_scaling_option = click.option(
    "--chisq-scaling", type=click.Choice(["macro", "text"]), default="macro",
    show_default=True,
    help="Pooled chi-square scaling: r/A (macro) or 1/A (text).")
_sfa_variant_option = click.option(
    "--sfa-variant", type=click.Choice(["macro", "text"]), default="macro",
    show_default=True,
    help="Shrinking-factor variant; macro keeps the nu1-2 refinement term.")
_jobs_option = click.option(
    "--jobs", default=1, show_default=True, type=click.IntRange(min=1),
    help="Worker threads for the per-imputation analysis fan-out.")


@click.group()
def main() -> None:
    """Pool F and chi-square tests across multiply imputed datasets."""


@main.command("pool-f")
@_input_option
@_output_option
@_precision_option
@_mapped_errors
def pool_f(input_path: str, output_path: str | None, precision: str) -> None:
    """Pool fractional-form F-tests (columns Imputation, Source, DF, MS,
    de_DF, MSE)."""
    table = tables.read_imputed_table(input_path, "fractional-f")
    results = tables.pool_fractional_table(table)
    _emit(tables.combined_table(results, roster="f"), output_path, precision)


@main.command("pool-chisq")
@_input_option
@_output_option
@_chisq_scaling_option
@_precision_option
@_mapped_errors
def pool_chisq(input_path: str, output_path: str | None, chisq_scaling: str,
               precision: str) -> None:
    """Pool chi-square tests (columns Imputation, Source, DF, ChiSq)."""
    table = tables.read_imputed_table(input_path, "chisq")
    results = tables.pool_chisq_table(table, scaling=chisq_scaling)
    _emit(tables.combined_table(results, roster="chisq"), output_path, precision)


@main.command("pool-welch")
@_input_option
@_output_option
@_precision_option
@_mapped_errors
def pool_welch(input_path: str, output_path: str | None, precision: str) -> None:
    """Pool a stacked Welch ODS table (effect rows plus Error rows)."""
    table = tables.read_imputed_table(input_path, "welch")
    results = tables.pool_welch_table(table)
    _emit(tables.combined_table(results, roster="f"), output_path, precision)


@main.command("pool-tests3")
@_input_option
@_output_option
@_sfa_variant_option
@_chisq_scaling_option
@_precision_option
@_mapped_errors
def pool_tests3(input_path: str, output_path: str | None, sfa_variant: str,
                chisq_scaling: str, precision: str) -> None:
    """Pool Type-III F-tests (columns Imputation, Effect, NumDF, DenDF,
    FValue) via the shrinking-factor chi-square route."""
    table = tables.read_imputed_table(input_path, "tests3")
    results = tables.pool_tests3_table(table, variant=sfa_variant,
                                       scaling=chisq_scaling)
    _emit(tables.combined_table(results, roster="tests3"), output_path, precision)


@main.command("run-example")
@click.argument("name", type=click.Choice(["upsit", "growth"]))
@click.option("--m", default=100, show_default=True, type=click.IntRange(min=1),
              help="Number of imputations.")
@click.option("--seed", default=20240301, show_default=True, type=int,
              help="Master seed for the imputation streams.")
@click.option("--output", "output_dir", default=None, type=click.Path(file_okay=False),
              help="Directory for <name>_complete.csv and <name>_pooled.csv.")
@_jobs_option
@_sfa_variant_option
@_chisq_scaling_option
@_precision_option
@_mapped_errors
def run_example(name: str, m: int, seed: int, output_dir: str | None, jobs: int,
                sfa_variant: str, chisq_scaling: str, precision: str) -> None:
    """Impute, analyze and pool one bundled example dataset."""
    report = pipeline.run_example(name, m=m, seed=seed, output_dir=output_dir,
                                  jobs=jobs, sfa_variant=sfa_variant,
                                  chisq_scaling=chisq_scaling)
    click.echo(f"== {name}: complete-data reference ==")
    click.echo(tables.render_table(report.complete, precision))
    click.echo("")
    click.echo(f"== {name}: pooled over M={m} imputations (seed {seed}) ==")
    click.echo(tables.render_table(report.pooled, precision))
    if report.pooled_path:
        click.echo(f"\nwrote {report.complete_path} and {report.pooled_path}")


@main.command("simulate")
@click.option("--means", default="0,0,0", show_default=True,
              help="Comma-separated group means.")
@click.option("--sds", default="1,2,3", show_default=True,
              help="Comma-separated group standard deviations.")
@click.option("--sizes", default="20,30,40", show_default=True,
              help="Comma-separated group sizes.")
@click.option("--missing-fraction", default=0.2, show_default=True, type=float,
              help="MCAR deletion probability on the response.")
@click.option("--replications", default=2000, show_default=True,
              type=click.IntRange(min=1))
@click.option("--m", default=20, show_default=True, type=click.IntRange(min=1),
              help="Imputations per replication.")
@click.option("--seed", default=20240301, show_default=True, type=int)
@click.option("--alpha", default=0.05, show_default=True, type=float,
              help="Rejection threshold for the pooled p-value.")
@_output_option
@_jobs_option
@_precision_option
@_mapped_errors
def simulate(means: str, sds: str, sizes: str, missing_fraction: float,
             replications: int, m: int, seed: int, alpha: float,
             output_path: str | None, jobs: int, precision: str) -> None:
    """Monte Carlo calibration of the Welch pooling pipeline."""
    config = pipeline.SimulationConfig(
        group_means=_parse_list("--means", means, float),
        group_sds=_parse_list("--sds", sds, float),
        group_sizes=_parse_list("--sizes", sizes, int),
        missing_fraction=missing_fraction,
        replications=replications,
        m=m,
        seed=seed,
        alpha=alpha,
    )
    report = pipeline.simulate(config, jobs=jobs)
    frame = pd.DataFrame(
        [(replications, report.rejections, report.rejection_rate,
          report.standard_error, alpha, m)],
        columns=["Replications", "Rejections", "Rejection rate",
                 "Binomial SE", "alpha", "M"])
    _emit(frame, output_path, precision)


if __name__ == "__main__":
    main()
