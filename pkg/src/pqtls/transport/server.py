"""并发握手服务端

每个连接一个协程；握手计算（server_respond / server_process_finished）提交到
max_workers=W 的线程池，因此同时在算的握手最多 W 个。单个连接的任何错误只记入
它自己的 ConnStats，不会影响服务端和其他连接。
"""

import asyncio
import functools
import logging
import secrets
import struct
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Optional, Set, TypeVar

from ..crypto_suite.exceptions import StateExhaustedError
from ..crypto_suite.primitives import hash_h
from ..crypto_suite.registry import ProviderRegistry, get_registry
from ..handshake.certificate import build_server_identity
from ..handshake.exceptions import DecodeError, HandshakeAlertError
from ..handshake.server import ServerHandshakeState, server_process_finished, server_respond
from ..handshake.types import (
    Alert,
    AlertCode,
    ClientHello,
    Finished,
    KeyEcho,
    ServerIdentity,
    TrustAnchor,
)
from .endpoint import FrameEndpoint, StreamEndpoint
from .exceptions import ServerBindError
from .loopback import LoopbackEndpoint, loopback_pair
from .types import ConnStats, HandshakeOutcome, ServerConfig, ServerStats, parse_address

logger = logging.getLogger(__name__)

T = TypeVar("T")


class HandshakeServer:
    """握手服务端（启动 / 停止，与调度器同样的生命周期）"""

    def __init__(self, config: ServerConfig, registry: Optional[ProviderRegistry] = None):
        """初始化服务端

        Args:
            config: 服务端配置
            registry: 算法注册表，默认使用全局注册表
        """
        self.config = config
        self.registry = registry or get_registry()
        self.is_running = False
        self.run_id: Optional[str] = None
        self.stats = ServerStats()
        self.identity: ServerIdentity
        self.trust_anchor: Optional[TrustAnchor] = config.trust_anchor
        if config.identity is not None:
            self.identity = config.identity
        else:
            self.identity, self.trust_anchor = build_server_identity(
                config.kem_algs,
                config.sig_algs,
                config.identity_seed,
                subject=config.subject,
                root_alg=config.root_sig_alg,
                registry=self.registry,
            )
        self._server: Optional[asyncio.AbstractServer] = None
        self._executor: Optional[ThreadPoolExecutor] = None
        self._tasks: Set[asyncio.Task] = set()
        self._active = 0
        self._conn_counter = 0
        self._lock = threading.Lock()

    # ---------------------------------------------------------------- 生命周期

    @property
    def address(self) -> str:
        """实际监听地址 host:port"""
        if self._server is None or not self._server.sockets:
            return self.config.listen
        host, port = self._server.sockets[0].getsockname()[:2]
        return f"{host}:{port}"

    async def start(self) -> None:
        """启动服务（绑定 TCP 监听）

        Raises:
            ServerBindError: 地址无法绑定
        """
        if self.is_running:
            logger.warning("Handshake server is already running")
            return
        host, port = parse_address(self.config.listen)
        self.run_id = uuid.uuid4().hex[:8]
        self._executor = ThreadPoolExecutor(
            max_workers=self.config.workers, thread_name_prefix=f"pqtls-{self.run_id}"
        )
        try:
            self._server = await asyncio.start_server(self._on_tcp_client, host, port)
        except OSError as e:
            self._executor.shutdown(wait=False)
            self._executor = None
            raise ServerBindError(f"Cannot bind {self.config.listen}: {e}") from e
        self.is_running = True
        logger.info(
            f"[run_id={self.run_id}] Handshake server listening on {self.address} "
            f"(workers={self.config.workers}, max_connections={self.config.max_connections})"
        )

    async def start_in_memory(self) -> None:
        """只启动计算线程池，不监听端口（配合 connect_loopback 使用）"""
        if self.is_running:
            return
        self.run_id = uuid.uuid4().hex[:8]
        self._executor = ThreadPoolExecutor(
            max_workers=self.config.workers, thread_name_prefix=f"pqtls-{self.run_id}"
        )
        self.is_running = True
        logger.info(f"[run_id={self.run_id}] In-memory handshake server started")

    async def stop(self) -> None:
        """优雅停止：不再接受新连接，在 drain_timeout_s 内等待进行中的握手"""
        if not self.is_running:
            logger.warning("Handshake server is not running")
            return
        self.is_running = False
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None

        pending = {t for t in self._tasks if not t.done()}
        if pending:
            logger.info(f"[run_id={self.run_id}] Draining {len(pending)} in-flight handshakes")
            _, still_running = await asyncio.wait(pending, timeout=self.config.drain_timeout_s)
            for task in still_running:
                task.cancel()
            if still_running:
                await asyncio.gather(*still_running, return_exceptions=True)
                logger.warning(
                    f"[run_id={self.run_id}] Cancelled {len(still_running)} handshakes after drain deadline"
                )
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        logger.info(
            f"[run_id={self.run_id}] Handshake server stopped: "
            f"{self.stats.successes} succeeded, {self.stats.failures} failed"
        )

    async def __aenter__(self) -> "HandshakeServer":
        await self.start()
        return self

    async def __aexit__(self, *exc_info: Any) -> None:
        await self.stop()

    # ---------------------------------------------------------------- 连接入口

    async def _on_tcp_client(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        endpoint = StreamEndpoint(reader, writer, self.stats.counters)
        await self._track(self.handle_connection(endpoint))

    async def _track(self, coro) -> None:
        task = asyncio.current_task()
        if task is not None:
            self._tasks.add(task)
        try:
            await coro
        finally:
            if task is not None:
                self._tasks.discard(task)

    def connect_loopback(
        self, latency_s: float = 0.0, bandwidth_Bps: Optional[float] = None
    ) -> LoopbackEndpoint:
        """创建一条回环连接，返回客户端一侧的端点"""
        if not self.is_running:
            raise RuntimeError("Handshake server is not running")
        client_side, server_side = loopback_pair(latency_s, bandwidth_Bps)
        server_side.attach_counters(self.stats.counters)
        task = asyncio.ensure_future(self.handle_connection(server_side))
        self._tasks.add(task)
        task.add_done_callback(self._tasks.discard)
        return client_side

    # ---------------------------------------------------------------- 单个连接

    def _next_conn_id(self) -> int:
        with self._lock:
            self._conn_counter += 1
            return self._conn_counter

    def _connection_seed(self, conn_id: int) -> bytes:
        if self.config.rng_seed is not None:
            return hash_h(b"pqtls conn" + struct.pack(">Q", conn_id) + self.config.rng_seed)
        return secrets.token_bytes(32)

    async def _compute(self, func: Callable[..., T], *args: Any) -> T:
        """在线程池中执行握手计算，并记录计算窗口"""
        loop = asyncio.get_running_loop()

        def timed() -> T:
            started = time.perf_counter_ns()
            try:
                return func(*args)
            finally:
                self.stats.compute_windows.append((started, time.perf_counter_ns()))

        return await loop.run_in_executor(self._executor, functools.partial(timed))

    async def handle_connection(self, endpoint: FrameEndpoint) -> ConnStats:
        """处理单个连接：CH → SH → Finished →（可选 KeyEcho）→ 关闭"""
        stats = ConnStats(conn_id=self._next_conn_id(), role="server", started_ns=time.perf_counter_ns())
        self._active += 1
        try:
            if self._active > self.config.max_connections:
                await self._send_alert(endpoint, stats, AlertCode.SERVER_BUSY, "connection limit reached")
                return stats
            await asyncio.wait_for(self._run_handshake(endpoint, stats), timeout=self.config.read_timeout_s)
        except HandshakeAlertError as e:
            if e.remote:
                stats.outcome = HandshakeOutcome.ALERT
                stats.alert = e.code
                stats.error = f"client aborted: {e.detail}"
            else:
                await self._send_alert(endpoint, stats, e.code, e.detail)
        except StateExhaustedError as e:
            logger.error(f"[run_id={self.run_id} conn={stats.conn_id}] Signing key exhausted: {e}")
            await self._send_alert(endpoint, stats, AlertCode.SERVER_BUSY, "signing key exhausted")
        except asyncio.TimeoutError:
            stats.outcome = HandshakeOutcome.TIMEOUT
            stats.error = "client did not complete the handshake in time"
        except (ConnectionError, OSError) as e:
            stats.outcome = HandshakeOutcome.TRANSPORT_ERROR
            stats.error = str(e)
        except Exception as e:  # pylint: disable=broad-exception-caught
            # 单个连接的边界：任何异常都只记录到该连接
            stats.outcome = HandshakeOutcome.TRANSPORT_ERROR
            stats.error = f"{type(e).__name__}: {e}"
            logger.warning(f"[run_id={self.run_id} conn={stats.conn_id}] Unexpected error: {e}", exc_info=True)
        finally:
            self._active -= 1
            stats.finished_ns = time.perf_counter_ns()
            stats.latency_ns = stats.finished_ns - stats.started_ns
            stats.bytes_sent = endpoint.bytes_sent
            stats.bytes_received = endpoint.bytes_received
            await endpoint.close()
            self.stats.connections.append(stats)
        return stats

    async def _run_handshake(self, endpoint: FrameEndpoint, stats: ConnStats) -> None:
        client_hello = await endpoint.recv_message()
        if not isinstance(client_hello, ClientHello):
            raise DecodeError(f"expected ClientHello, got {type(client_hello).__name__}")

        server_hello, state = await self._compute(
            server_respond, self.identity, client_hello, self._connection_seed(stats.conn_id), self.registry
        )
        await endpoint.send_message(server_hello)

        finished = await endpoint.recv_message()
        if isinstance(finished, Alert):
            raise HandshakeAlertError(finished.code, finished.detail, remote=True)
        if not isinstance(finished, Finished):
            raise DecodeError(f"expected Finished, got {type(finished).__name__}")
        accepted = await self._compute(server_process_finished, state, finished)
        stats.phases.update(state.timings)
        if not accepted:
            raise HandshakeAlertError(AlertCode.BAD_FINISHED, "Finished mac mismatch")
        if self.config.echo_key_hash:
            await endpoint.send_message(KeyEcho(key_hash=state.keys.fingerprint()))
        stats.outcome = HandshakeOutcome.SUCCESS
        self._log_success(stats, state)

    def _log_success(self, stats: ConnStats, state: ServerHandshakeState) -> None:
        logger.debug(
            f"[run_id={self.run_id} conn={stats.conn_id}] Handshake accepted "
            f"kem=0x{state.chosen_kem:04x} sig=0x{state.chosen_sig:04x}"
        )

    async def _send_alert(self, endpoint: FrameEndpoint, stats: ConnStats, code: AlertCode, detail: str) -> None:
        stats.outcome = HandshakeOutcome.ALERT
        stats.alert = AlertCode(code)
        stats.error = detail
        logger.warning(f"[run_id={self.run_id} conn={stats.conn_id}] Sending alert {stats.alert.name}: {detail}")
        try:
            await endpoint.send_message(Alert.create(code, detail))
        except (ConnectionError, OSError) as e:
            logger.debug(f"[run_id={self.run_id} conn={stats.conn_id}] Alert not delivered: {e}")


async def serve(config: ServerConfig, registry: Optional[ProviderRegistry] = None) -> HandshakeServer:
    """启动服务端并返回可停止的句柄"""
    server = HandshakeServer(config, registry)
    await server.start()
    return server
