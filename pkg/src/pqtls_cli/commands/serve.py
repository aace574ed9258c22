"""serve 命令：启动握手服务端，直到收到 SIGINT / SIGTERM"""

import asyncio
import signal
import sys
from typing import Optional

import click
from loguru import logger

from pqtls.crypto_suite import AlgorithmKind, get_registry
from pqtls.crypto_suite.primitives import hash_h
from pqtls.transport import HandshakeServer, ServerConfig, TransportError

from ..shared import EXIT_TRANSPORT_ERROR, parse_hex, resolve_codes, split_list


async def _serve_forever(server: HandshakeServer) -> None:
    stop_event = asyncio.Event()
    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        try:
            loop.add_signal_handler(sig, stop_event.set)
        except NotImplementedError:  # Windows
            pass

    await server.start()
    anchor = server.trust_anchor
    if anchor is not None:
        logger.info(
            f"Trust anchor: sig_alg=0x{anchor.sig_alg:04x} "
            f"fingerprint={hash_h(anchor.public_key).hex()[:16]}"
        )
    click.echo(f"listening on {server.address}")
    try:
        await stop_event.wait()
    finally:
        await server.stop()
        logger.info(f"Served {server.stats.successes} handshakes, {server.stats.failures} failed")


@click.command()
@click.option("--listen", default="127.0.0.1:4433", show_default=True, help="host:port")
@click.option("--kem", "kems", required=True, help="KEM names or codes, comma-separated")
@click.option("--sig", "sigs", required=True, help="SIG names or codes, comma-separated")
@click.option("--workers", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--max-connections", default=64, show_default=True, type=click.IntRange(min=1))
@click.option("--subject", default=None, help="Certificate subject (default PQTLS_SERVER_SUBJECT)")
@click.option("--identity-seed", default="00" * 32, help="32-byte hex seed for the CA and server keys")
@click.option("--root-sig", default=None, help="Root CA signature algorithm (default: first --sig)")
@click.option("--echo-key-hash", is_flag=True, help="Send a KeyEcho frame after accepting Finished")
@click.pass_obj
def serve(
    config,
    listen: str,
    kems: str,
    sigs: str,
    workers: int,
    max_connections: int,
    subject: Optional[str],
    identity_seed: str,
    root_sig: Optional[str],
    echo_key_hash: bool,
) -> None:
    """Run a handshake server."""
    registry = get_registry()
    kem_codes = resolve_codes(registry, split_list(kems), AlgorithmKind.KEM)
    sig_codes = resolve_codes(registry, split_list(sigs), AlgorithmKind.SIG)
    root_code = resolve_codes(registry, [root_sig], AlgorithmKind.SIG)[0] if root_sig else None
    try:
        server_config = ServerConfig(
            listen=listen,
            kem_algs=kem_codes,
            sig_algs=sig_codes,
            workers=workers,
            max_connections=max_connections,
            subject=subject or config.server_subject,
            identity_seed=parse_hex(identity_seed, "--identity-seed"),
            root_sig_alg=root_code,
            echo_key_hash=echo_key_hash,
        )
    except ValueError as e:
        raise click.BadParameter(str(e)) from e

    try:
        asyncio.run(_serve_forever(HandshakeServer(server_config, registry)))
    except TransportError as e:
        logger.error(f"Server failed: {e}")
        sys.exit(EXIT_TRANSPORT_ERROR)
