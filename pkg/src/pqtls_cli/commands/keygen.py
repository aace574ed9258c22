"""keygen 命令：按种子确定性地生成密钥对"""

import click

from pqtls.crypto_suite import AlgorithmKind, UnknownAlgorithmError, get_registry

from ..shared import parse_hex


@click.command()
@click.option("--alg", required=True, help="Algorithm name or wire code")
@click.option("--seed", required=True, help="32-byte hex seed")
def keygen(alg: str, seed: str) -> None:
    """Derive a keypair from a seed and print it as hex."""
    registry = get_registry()
    try:
        meta = registry.metadata(alg)
    except UnknownAlgorithmError as e:
        raise click.BadParameter(str(e)) from e
    seed_bytes = parse_hex(seed, "--seed")
    if meta.kind is AlgorithmKind.KEM:
        keypair = registry.kem_keygen(meta.wire_code, seed_bytes)
    else:
        keypair = registry.sig_keygen(meta.wire_code, seed_bytes)
    click.echo(f"alg: {meta.name} (0x{meta.wire_code:04x})")
    click.echo(f"pk: {keypair.public_key.hex()}")
    click.echo(f"sk: {keypair.secret_key.hex()}")
