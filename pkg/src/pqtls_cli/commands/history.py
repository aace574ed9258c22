"""history 命令：列出已保存的压测运行"""

import asyncio
from typing import List, Optional

import click

from pqtls.db import open_database
from pqtls.db.repo import BenchRunData
from pqtls.service import report_service


async def _load(database_url: str, limit: int) -> List[BenchRunData]:
    async with open_database(database_url):
        return await report_service.list_runs(limit)


@click.command()
@click.option("--db", "database_url", default=None, help="Database URL (default PQTLS_DATABASE_URL)")
@click.option("--limit", default=10, show_default=True, type=click.IntRange(min=1))
@click.pass_obj
def history(config, database_url: Optional[str], limit: int) -> None:
    """List stored bench runs, newest first."""
    database_url = database_url or config.database_url
    if not database_url:
        raise click.UsageError("No database configured: pass --db or set PQTLS_DATABASE_URL")
    runs = asyncio.run(_load(database_url, limit))
    if not runs:
        click.echo("no runs stored")
        return
    for run in runs:
        created = run.created_at.isoformat(timespec="seconds") if run.created_at else "-"
        click.echo(f"#{run.id} {created} mode={run.mode} seed={run.seed} rows={len(run.rows)}")
        for row in run.rows:
            marker = " (control)" if row.is_control else ""
            click.echo(f"    {row.pair}{marker}: {row.cps:.1f} cps, ratio {row.ratio_to_control:.3f}")
