"""bench 命令：运行压测并输出报告"""

import asyncio
import sys
from pathlib import Path
from typing import Dict, Optional, Tuple

import click
from loguru import logger

from pqtls.bench import (
    BenchError,
    BenchMode,
    BenchPlan,
    BenchReport,
    NetworkModel,
    PlanValidationError,
    emit_report,
    render_plot,
    run_live,
    run_modeled,
)
from pqtls.config import parse_cost_overrides
from pqtls.crypto_suite import CONTROL_PAIR_NAMES, build_default_registry
from pqtls.db import open_database
from pqtls.handshake import HandshakeConfigError
from pqtls.service import report_service
from pqtls.transport import TransportError

from ..shared import EXIT_PLAN_ERROR, EXIT_TRANSPORT_ERROR, parse_pair, split_list


def _parse_acceleration(values: Tuple[str, ...]) -> Dict[str, float]:
    acceleration: Dict[str, float] = {}
    for item in values:
        name, sep, factor = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected NAME=FACTOR, got {item!r}")
        try:
            acceleration[name.strip()] = float(factor)
        except ValueError as e:
            raise click.BadParameter(f"invalid acceleration factor in {item!r}") from e
    return acceleration


async def _save(database_url: str, report: BenchReport) -> Optional[int]:
    async with open_database(database_url):
        return await report_service.save_report(report)


@click.command()
@click.option("--host", default="self", show_default=True, help="Server address host:port, or 'self'")
@click.option("--pairs", default="", help="Comma-separated KEM:SIG pairs")
@click.option("--control", default=":".join(CONTROL_PAIR_NAMES), show_default=True, help="Control KEM:SIG pair")
@click.option("--clients", default=8, show_default=True, type=int)
@click.option("--duration", default=5.0, show_default=True, type=float, help="Measurement window (s)")
@click.option("--warmup", default=1.0, show_default=True, type=float, help="Warmup before the window (s)")
@click.option("--repetitions", default=1, show_default=True, type=int)
@click.option("--workers", default=1, show_default=True, type=int, help="Server workers (self host / model)")
@click.option("--mode", type=click.Choice(["live", "modeled"]), default="modeled", show_default=True)
@click.option("--rtt", "rtt_ms", default=0.0, show_default=True, type=float, help="Modeled RTT (ms)")
@click.option("--bandwidth", default=None, type=float, help="Modeled bandwidth (bytes/s)")
@click.option("--unit-time-ns", default=None, type=float, help="Modeled time per cost unit (ns)")
@click.option("--accel", "acceleration", multiple=True, help="NAME=FACTOR, divides modeled op time")
@click.option("--costs", "costs", default=None, help="Cost overrides name=keygen:op:verify;...")
@click.option("--identity-seed", default="00" * 32, help="32-byte hex seed shared with the server")
@click.option("--root-sig", default=None, help="Root CA signature algorithm of the server")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False), help="Report file (default stdout)")
@click.option("--format", "fmt", type=click.Choice(["csv", "markdown", "plotdata"]), default="csv", show_default=True)
@click.option("--plot", "plot_path", default=None, type=click.Path(dir_okay=False), help="Render a PNG bar chart")
@click.option("--db", "database_url", default=None, help="Store results (default PQTLS_DATABASE_URL)")
@click.pass_obj
def bench(config, **options) -> None:
    """Measure handshakes per second for KEM:SIG pairs."""
    try:
        pairs = [parse_pair(item) for item in split_list(options["pairs"])]
        cost_overrides = dict(config.cost_overrides)
        cost_overrides.update(parse_cost_overrides(options["costs"]))
        plan = BenchPlan.create(
            pairs=pairs,
            control_pair=parse_pair(options["control"]),
            clients=options["clients"],
            duration_s=options["duration"],
            warmup_s=options["warmup"],
            repetitions=options["repetitions"],
            workers=options["workers"],
            mode=options["mode"],
            network=NetworkModel(rtt_s=options["rtt_ms"] / 1000, bandwidth_Bps=options["bandwidth"]),
            unit_time_ns=options["unit_time_ns"] or config.unit_time_ns,
            acceleration=_parse_acceleration(options["acceleration"]),
            cost_overrides=cost_overrides,
            hashsig_height=config.hashsig_height,
            identity_seed_hex=options["identity_seed"],
            root_sig_alg=options["root_sig"],
            subject=config.server_subject,
            seed=options["seed"],
            host=options["host"],
        )
        registry = build_default_registry(hashsig_height=plan.hashsig_height)
        plan.resolve(registry)
    except (PlanValidationError, click.BadParameter, ValueError) as e:
        # pydantic 的 ValidationError 也是 ValueError
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_PLAN_ERROR)

    try:
        if plan.mode is BenchMode.LIVE:
            report = run_live(plan, registry)
        else:
            report = run_modeled(plan, registry)
    except (PlanValidationError, HandshakeConfigError) as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_PLAN_ERROR)
    except TransportError as e:
        click.echo(f"Transport error: {e}", err=True)
        sys.exit(EXIT_TRANSPORT_ERROR)

    output = emit_report(report, options["fmt"])
    if options["out_path"]:
        Path(options["out_path"]).write_bytes(output)
        logger.info(f"Wrote {len(report.rows)} rows to {options['out_path']}")
    else:
        click.echo(output.decode("utf-8"), nl=False)

    if options["plot_path"]:
        try:
            render_plot(report, options["plot_path"])
        except BenchError as e:
            logger.warning(f"Plot skipped: {e}")

    database_url = options["database_url"] or config.database_url
    if database_url:
        run_id = asyncio.run(_save(database_url, report))
        if run_id is not None:
            logger.info(f"Stored bench run {run_id}")
