"""内存回环端点

字节按序、可靠、原样送达。可选注入单向时延 latency_s 与带宽 bandwidth_Bps：
每条链路串行发送，一次写入 L 字节在 max(now, 链路空闲时刻) + L/B 发完，
再经过 latency_s 到达对端。
"""

import asyncio
from typing import Optional, Tuple

from ..handshake.exceptions import DecodeError
from .endpoint import FrameEndpoint
from .types import ByteCounters


class _Link:
    """单向链路"""

    def __init__(self, latency_s: float, bandwidth_Bps: Optional[float]):
        self.latency_s = latency_s
        self.bandwidth_Bps = bandwidth_Bps
        self.queue: "asyncio.Queue[Tuple[float, Optional[bytes]]]" = asyncio.Queue()
        self._free_at = 0.0

    def schedule(self, data: Optional[bytes]) -> None:
        loop = asyncio.get_running_loop()
        start = max(loop.time(), self._free_at)
        if data and self.bandwidth_Bps:
            start += len(data) / self.bandwidth_Bps
        self._free_at = start
        self.queue.put_nowait((start + self.latency_s, data))


class LoopbackEndpoint(FrameEndpoint):
    """回环端点（必须在同一个事件循环中使用）"""

    def __init__(self, outgoing: _Link, incoming: _Link, counters: Optional[ByteCounters] = None):
        super().__init__(counters)
        self._outgoing = outgoing
        self._incoming = incoming
        self._buffer = bytearray()
        self._eof = False
        self._closed = False

    async def send_raw(self, data: bytes) -> None:
        if self._closed:
            raise ConnectionResetError("loopback endpoint is closed")
        self._outgoing.schedule(bytes(data))
        self._account(sent=len(data))

    async def _fill(self) -> bool:
        if self._eof:
            return False
        deliver_at, chunk = await self._incoming.queue.get()
        delay = deliver_at - asyncio.get_running_loop().time()
        if delay > 0:
            await asyncio.sleep(delay)
        if chunk is None:
            self._eof = True
            return False
        self._buffer.extend(chunk)
        return True

    async def recv_exactly(self, length: int) -> Optional[bytes]:
        while len(self._buffer) < length:
            if not await self._fill():
                if not self._buffer:
                    return None
                partial = len(self._buffer)
                self._buffer.clear()
                raise DecodeError(f"connection closed after {partial} of {length} bytes")
        data = bytes(self._buffer[:length])
        del self._buffer[:length]
        self._account(received=length)
        return data

    async def close(self) -> None:
        if not self._closed:
            self._closed = True
            self._outgoing.schedule(None)


def loopback_pair(
    latency_s: float = 0.0,
    bandwidth_Bps: Optional[float] = None,
    counters: Optional[ByteCounters] = None,
) -> Tuple[LoopbackEndpoint, LoopbackEndpoint]:
    """创建一对相连的回环端点 (a, b)

    Args:
        latency_s: 单向时延（秒）
        bandwidth_Bps: 每个方向的带宽（字节/秒），None 表示不限
        counters: 两端共用的字节计数器
    """
    if latency_s < 0:
        raise ValueError("latency_s must be non-negative")
    if bandwidth_Bps is not None and bandwidth_Bps <= 0:
        raise ValueError("bandwidth_Bps must be positive")
    a_to_b = _Link(latency_s, bandwidth_Bps)
    b_to_a = _Link(latency_s, bandwidth_Bps)
    return (
        LoopbackEndpoint(a_to_b, b_to_a, counters),
        LoopbackEndpoint(b_to_a, a_to_b, counters),
    )
