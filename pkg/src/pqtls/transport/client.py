"""握手客户端

run_client_handshake 在任意 FrameEndpoint 上完成 CH → SH → Finished；
服务端接受 Finished 的信号是没有告警的干净关闭（启用 echo 时先收到 KeyEcho）。
"""

import asyncio
import logging
import secrets
import time
from typing import Optional, Tuple

from ..config import get_config_or_default
from ..crypto_suite.registry import ProviderRegistry, get_registry
from ..handshake.client import client_begin, client_process_server_hello
from ..handshake.exceptions import DecodeError, HandshakeAlertError
from ..handshake.types import Alert, ClientConfig, KeyEcho, ServerHello, SessionKeys
from .endpoint import FrameEndpoint, StreamEndpoint
from .exceptions import ConnectionRefusedTransportError, HandshakeTimeoutError, TransportError
from .types import ConnStats, HandshakeOutcome, parse_address

logger = logging.getLogger(__name__)


def _raise_if_alert(message: object) -> None:
    if isinstance(message, Alert):
        raise HandshakeAlertError(message.code, message.detail, remote=True)


async def run_client_handshake(
    endpoint: FrameEndpoint,
    config: ClientConfig,
    rng_seed: Optional[bytes] = None,
    registry: Optional[ProviderRegistry] = None,
    stats: Optional[ConnStats] = None,
) -> Tuple[SessionKeys, ConnStats]:
    """在已建立的端点上执行客户端握手

    Raises:
        HandshakeAlertError: 本地检测到的错误（已发送告警）或收到的对端告警
        HandshakeConfigError: 本地配置错误（未发送任何字节）
    """
    registry = registry or get_registry()
    stats = stats or ConnStats(role="client", started_ns=time.perf_counter_ns())
    try:
        client_hello, pending = client_begin(config, rng_seed or secrets.token_bytes(32), registry)
        await endpoint.send_message(client_hello)

        server_hello = await endpoint.recv_message()
        _raise_if_alert(server_hello)
        if not isinstance(server_hello, ServerHello):
            raise DecodeError(f"expected ServerHello, got {type(server_hello).__name__}")
        try:
            keys, finished = client_process_server_hello(pending, server_hello, registry)
        except HandshakeAlertError as e:
            await endpoint.send_message(Alert.create(e.code, e.detail))
            raise
        await endpoint.send_message(finished)

        while True:
            reply = await endpoint.recv_message()
            if reply is None:
                break
            _raise_if_alert(reply)
            if isinstance(reply, KeyEcho):
                stats.key_echo = reply.key_hash
                continue
            raise DecodeError(f"unexpected {type(reply).__name__} after Finished")

        stats.outcome = HandshakeOutcome.SUCCESS
        stats.phases.update(pending.timings)
        return keys, stats
    except HandshakeAlertError as e:
        stats.outcome = HandshakeOutcome.ALERT
        stats.alert = e.code
        stats.error = e.detail
        raise
    finally:
        stats.finished_ns = time.perf_counter_ns()
        stats.latency_ns = stats.finished_ns - stats.started_ns
        stats.bytes_sent = endpoint.bytes_sent
        stats.bytes_received = endpoint.bytes_received
        await endpoint.close()


async def connect_and_handshake(
    config: ClientConfig,
    address: str,
    rng_seed: Optional[bytes] = None,
    registry: Optional[ProviderRegistry] = None,
) -> Tuple[SessionKeys, ConnStats]:
    """连接 host:port 并完成一次握手

    超时取 config.timeout_ms，未设置时取 PQTLS_TIMEOUT_MS（默认 10 秒）。

    Raises:
        ConnectionRefusedTransportError: 无法连接
        HandshakeTimeoutError: 超时
        HandshakeAlertError: 握手告警
    """
    host, port = parse_address(address)
    timeout_ms = config.timeout_ms or get_config_or_default().timeout_ms
    stats = ConnStats(role="client", started_ns=time.perf_counter_ns())

    async def _run() -> Tuple[SessionKeys, ConnStats]:
        try:
            reader, writer = await asyncio.open_connection(host, port)
        except (ConnectionRefusedError, OSError) as e:
            raise ConnectionRefusedTransportError(address, str(e)) from e
        endpoint = StreamEndpoint(reader, writer)
        try:
            return await run_client_handshake(endpoint, config, rng_seed, registry, stats)
        except (ConnectionResetError, BrokenPipeError) as e:
            raise TransportError(f"Connection to {address} lost: {e}") from e

    try:
        return await asyncio.wait_for(_run(), timeout=timeout_ms / 1000)
    except asyncio.TimeoutError as e:
        stats.outcome = HandshakeOutcome.TIMEOUT
        logger.warning(f"Handshake with {address} timed out after {timeout_ms} ms")
        raise HandshakeTimeoutError(timeout_ms) from e
