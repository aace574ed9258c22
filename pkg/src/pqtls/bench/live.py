"""实时模式压测

对每个算法对：预热（不计入）后，C 个客户端在 D 秒窗口内循环 连接→握手→关闭。
完成按客户端侧收到服务端接受的时间戳计入窗口；失败单独统计，超过 1% 标记 degraded。

host="self" 时为每个算法对在独立进程（spawn）中启动本地服务端；
in_process=True 时服务端与客户端共用当前事件循环（测试用）。
"""

import asyncio
import logging
import multiprocessing
import struct
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..crypto_suite.primitives import hash_h
from ..crypto_suite.registry import ProviderRegistry, build_default_registry, set_registry
from ..handshake.certificate import derive_trust_anchor
from ..handshake.exceptions import HandshakeError
from ..handshake.types import ClientConfig, TrustAnchor
from ..transport.client import connect_and_handshake
from ..transport.exceptions import TransportError
from ..transport.server import HandshakeServer
from ..transport.types import ServerConfig
from .exceptions import BenchError
from .types import BenchMode, BenchPlan, BenchReport, PairResult, apply_ratios, pair_label

logger = logging.getLogger(__name__)

DEGRADED_FAILURE_RATIO = 0.01
SERVER_START_TIMEOUT_S = 120.0


@dataclass
class _Sample:
    client_id: int
    done_at: float
    ok: bool
    latency_ns: int
    total_bytes: int


def _server_kwargs(plan: BenchPlan, kem_code: int, sig_code: int, root_code: Optional[int]) -> Dict[str, Any]:
    return {
        "listen": "127.0.0.1:0",
        "kem_algs": [kem_code],
        "sig_algs": [sig_code],
        "workers": plan.workers,
        "max_connections": max(64, plan.clients * 2),
        "subject": plan.subject,
        "identity_seed": bytes.fromhex(plan.identity_seed_hex),
        "root_sig_alg": root_code,
    }


def _serve_in_subprocess(server_kwargs: Dict[str, Any], hashsig_height: int, cost_overrides: Dict, conn) -> None:
    """子进程入口：按相同的注册表设置启动服务端，等待父进程的停止信号"""
    registry = build_default_registry(hashsig_height=hashsig_height, cost_overrides=cost_overrides)
    set_registry(registry)

    async def _main() -> None:
        try:
            server = HandshakeServer(ServerConfig(**server_kwargs), registry)
            await server.start()
        except Exception as e:  # pylint: disable=broad-exception-caught
            conn.send(("error", f"{type(e).__name__}: {e}"))
            return
        conn.send(("ready", server.address, server.trust_anchor))
        await asyncio.get_running_loop().run_in_executor(None, conn.recv)
        await server.stop()
        conn.send(("stopped", server.stats.successes, server.stats.failures))

    asyncio.run(_main())


class _SubprocessServer:
    """在独立进程中运行的本地服务端"""

    def __init__(self, server_kwargs: Dict[str, Any], plan: BenchPlan):
        context = multiprocessing.get_context("spawn")
        self._conn, child_conn = context.Pipe()
        self._process = context.Process(
            target=_serve_in_subprocess,
            args=(server_kwargs, plan.hashsig_height, dict(plan.cost_overrides), child_conn),
            daemon=True,
        )
        self.address = ""
        self.trust_anchor: Optional[TrustAnchor] = None

    async def start(self) -> None:
        self._process.start()
        loop = asyncio.get_running_loop()
        try:
            message = await asyncio.wait_for(
                loop.run_in_executor(None, self._conn.recv), timeout=SERVER_START_TIMEOUT_S
            )
        except (asyncio.TimeoutError, EOFError) as e:
            self._process.kill()
            raise TransportError("Local bench server did not start") from e
        if message[0] != "ready":
            self._process.join(timeout=5)
            raise TransportError(f"Local bench server failed: {message[1]}")
        _, self.address, self.trust_anchor = message

    async def stop(self) -> None:
        loop = asyncio.get_running_loop()
        try:
            self._conn.send("stop")
            await asyncio.wait_for(loop.run_in_executor(None, self._conn.recv), timeout=30)
        except (asyncio.TimeoutError, EOFError, BrokenPipeError) as e:
            logger.warning(f"Local bench server did not stop cleanly: {e}")
        await loop.run_in_executor(None, self._process.join, 10)
        if self._process.is_alive():
            self._process.kill()


async def _client_loop(
    client_id: int,
    deadline: float,
    address: str,
    config: ClientConfig,
    registry: ProviderRegistry,
    seed: int,
    samples: List[_Sample],
) -> None:
    loop = asyncio.get_running_loop()
    attempt = 0
    while loop.time() < deadline:
        rng_seed = hash_h(struct.pack(">QII", seed, client_id, attempt))
        attempt += 1
        try:
            _, stats = await connect_and_handshake(config, address, rng_seed, registry)
            samples.append(_Sample(client_id, loop.time(), True, stats.latency_ns, stats.total_bytes))
        except (HandshakeError, TransportError) as e:
            logger.debug(f"[client={client_id}] Handshake failed: {e}")
            samples.append(_Sample(client_id, loop.time(), False, 0, 0))
            await asyncio.sleep(0)


async def _measure_pair(
    plan: BenchPlan, address: str, config: ClientConfig, registry: ProviderRegistry, repetition: int
) -> Tuple[List[_Sample], float, float]:
    loop = asyncio.get_running_loop()
    window_start = loop.time() + plan.warmup_s
    window_end = window_start + plan.duration_s
    samples: List[_Sample] = []
    seed = plan.seed * 1000 + repetition
    await asyncio.gather(
        *(
            _client_loop(i, window_end, address, config, registry, seed, samples)
            for i in range(plan.clients)
        )
    )
    return samples, window_start, window_end


def _summarize(
    plan: BenchPlan, kem_name: str, sig_name: str, runs: List[Tuple[List[_Sample], float, float]]
) -> PairResult:
    cps_values: List[float] = []
    latencies: List[int] = []
    wire_bytes: List[int] = []
    per_client = [0] * plan.clients
    completed = failed = 0
    for samples, start, end in runs:
        in_window = [s for s in samples if start <= s.done_at < end]
        ok = [s for s in in_window if s.ok]
        cps_values.append(len(ok) / plan.duration_s)
        completed += len(ok)
        failed += len(in_window) - len(ok)
        for sample in ok:
            per_client[sample.client_id] += 1
            latencies.append(sample.latency_ns)
            wire_bytes.append(sample.total_bytes)

    p50, p95 = (np.percentile(latencies, [50, 95]) if latencies else (0.0, 0.0))
    attempts = completed + failed
    degraded = attempts > 0 and failed > DEGRADED_FAILURE_RATIO * attempts
    if degraded:
        logger.warning(f"{kem_name}:{sig_name}: {failed}/{attempts} handshakes failed, marking degraded")
    return PairResult(
        pair=pair_label(kem_name, sig_name),
        kem=kem_name,
        sig=sig_name,
        mode=BenchMode.LIVE,
        completed=completed,
        cps=completed / (len(runs) * plan.duration_s) if runs else 0.0,
        p50_ns=int(p50),
        p95_ns=int(p95),
        bytes_per_handshake=int(round(float(np.mean(wire_bytes)))) if wire_bytes else 0,
        failed=failed,
        degraded=degraded,
        repetitions=cps_values,
        client_completed=per_client,
    )


async def _run_against(
    plan: BenchPlan,
    address: str,
    anchor: TrustAnchor,
    kem_code: int,
    sig_code: int,
    registry: ProviderRegistry,
    repetition: int,
) -> Tuple[List[_Sample], float, float]:
    config = ClientConfig(kem_alg=kem_code, sig_algs=[sig_code], trust_anchor=anchor)
    return await _measure_pair(plan, address, config, registry, repetition)


async def _run_pair(
    plan: BenchPlan, kem_code: int, sig_code: int, registry: ProviderRegistry
) -> List[Tuple[List[_Sample], float, float]]:
    root = plan.resolve_root(registry)
    root_code = root.wire_code if root else None
    runs = []
    for repetition in range(plan.repetitions):
        if plan.host != "self":
            anchor = derive_trust_anchor(
                bytes.fromhex(plan.identity_seed_hex), root_code or sig_code, registry
            )
            runs.append(await _run_against(plan, plan.host, anchor, kem_code, sig_code, registry, repetition))
            continue

        kwargs = _server_kwargs(plan, kem_code, sig_code, root_code)
        if plan.in_process:
            server = HandshakeServer(ServerConfig(**kwargs), registry)
            await server.start()
            try:
                assert server.trust_anchor is not None
                runs.append(
                    await _run_against(plan, server.address, server.trust_anchor, kem_code, sig_code, registry, repetition)
                )
            finally:
                await server.stop()
        else:
            remote = _SubprocessServer(kwargs, plan)
            await remote.start()
            try:
                assert remote.trust_anchor is not None
                runs.append(
                    await _run_against(plan, remote.address, remote.trust_anchor, kem_code, sig_code, registry, repetition)
                )
            finally:
                await remote.stop()
    return runs


async def _preflight(plan: BenchPlan, kem_code: int, sig_code: int, registry: ProviderRegistry) -> None:
    """远端模式下先探测一次，不可达时直接失败"""
    root = plan.resolve_root(registry)
    root_code = root.wire_code if root else sig_code
    anchor = derive_trust_anchor(bytes.fromhex(plan.identity_seed_hex), root_code, registry)
    config = ClientConfig(kem_alg=kem_code, sig_algs=[sig_code], trust_anchor=anchor)
    try:
        await connect_and_handshake(config, plan.host, hash_h(b"pqtls preflight"), registry)
    except HandshakeError as e:
        logger.warning(f"Preflight handshake against {plan.host} failed: {e}")


async def run_live_async(plan: BenchPlan, registry: Optional[ProviderRegistry] = None) -> BenchReport:
    """实时模式压测（协程版本）

    Raises:
        ConnectionRefusedTransportError: 远端服务不可达
        TransportError: 本地服务端无法启动
    """
    if plan.mode is not BenchMode.LIVE:
        raise BenchError(f"run_live requires mode=live, got {plan.mode.value}")
    if registry is None:
        registry = build_default_registry(hashsig_height=plan.hashsig_height)
    started = time.monotonic()
    rows = []
    with registry.cost_overrides_applied(plan.cost_overrides):
        pairs = plan.resolve(registry)
        if plan.host != "self":
            await _preflight(plan, *pairs[0], registry)

        for index, (kem_code, sig_code) in enumerate(pairs):
            kem_name, sig_name = registry.metadata(kem_code).name, registry.metadata(sig_code).name
            logger.info(f"Benchmarking {kem_name}:{sig_name} with {plan.clients} clients for {plan.duration_s}s")
            runs = await _run_pair(plan, kem_code, sig_code, registry)
            row = _summarize(plan, kem_name, sig_name, runs)
            row.is_control = index == 0
            rows.append(row)
            logger.info(f"{row.pair}: {row.completed} completed, {row.cps:.1f} cps, {row.failed} failed")
    apply_ratios(rows)
    return BenchReport(
        mode=BenchMode.LIVE,
        plan=plan.echo(),
        seed=plan.seed,
        wall_clock_s=time.monotonic() - started,
        rows=rows,
    )


def run_live(plan: BenchPlan, registry: Optional[ProviderRegistry] = None) -> BenchReport:
    """实时模式压测（同步入口）"""
    return asyncio.run(run_live_async(plan, registry))
