"""debug 命令组：toy 实现的中间值输出"""

from typing import Optional

import click

from pqtls.toy_mlkem import kem512_decap, kem512_encap, kem512_keygen

from ..shared import parse_hex


@click.group()
def debug() -> None:
    """Debugging helpers for the toy implementations."""


@debug.command("mlkem")
@click.option("--seed", required=True, help="32-byte hex keygen seed")
@click.option("--randomness", default=None, help="32-byte hex encapsulation randomness")
def mlkem(seed: str, randomness: Optional[str]) -> None:
    """Print toy ML-KEM-512 pk (and ct / ss when --randomness is given)."""
    public_key, secret_key = kem512_keygen(parse_hex(seed, "--seed"))
    click.echo(f"pk: {public_key.hex()}")
    if randomness is None:
        return
    ciphertext, shared_secret = kem512_encap(public_key, parse_hex(randomness, "--randomness"))
    click.echo(f"ct: {ciphertext.hex()}")
    click.echo(f"ss: {shared_secret.hex()}")
    if kem512_decap(secret_key, ciphertext) != shared_secret:
        raise click.ClickException("decapsulation mismatch")
