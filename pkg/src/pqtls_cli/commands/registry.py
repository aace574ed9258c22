"""registry 命令组"""

import click

from pqtls.crypto_suite import get_registry


@click.group()
def registry() -> None:
    """Inspect the algorithm registry."""


@registry.command("dump")
def dump() -> None:
    """Print every registered algorithm as CSV."""
    click.echo(get_registry().dump_csv(), nl=False)
