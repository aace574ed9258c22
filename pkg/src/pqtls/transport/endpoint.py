"""帧端点接口

FrameEndpoint 负责按帧收发并累计字节数；具体实现有 TCP（StreamEndpoint）
和内存回环（loopback 模块）。recv_frame 在干净的 EOF 上返回 None。
"""

import asyncio
import logging
from abc import ABC, abstractmethod
from typing import Optional, Tuple

from ..handshake.codec import decode_payload, encode_message, parse_frame_header
from ..handshake.exceptions import DecodeError
from ..handshake.types import FRAME_HEADER_LEN, HandshakeMessage
from .types import ByteCounters

logger = logging.getLogger(__name__)

Frame = Tuple[int, bytes]


class FrameEndpoint(ABC):
    """帧端点接口"""

    def __init__(self, counters: Optional[ByteCounters] = None):
        self.bytes_sent = 0
        self.bytes_received = 0
        self._counters = counters

    def attach_counters(self, counters: ByteCounters) -> None:
        """把后续收发计入共享计数器"""
        self._counters = counters

    def _account(self, sent: int = 0, received: int = 0) -> None:
        self.bytes_sent += sent
        self.bytes_received += received
        if self._counters is not None:
            self._counters.add(sent=sent, received=received)

    @abstractmethod
    async def send_raw(self, data: bytes) -> None:
        """发送原始字节"""
        raise NotImplementedError("FrameEndpoint.send_raw must be implemented by subclasses")

    @abstractmethod
    async def recv_exactly(self, length: int) -> Optional[bytes]:
        """读取恰好 length 字节；在任何字节之前遇到 EOF 返回 None

        Raises:
            DecodeError: 读到一半遇到 EOF
        """
        raise NotImplementedError("FrameEndpoint.recv_exactly must be implemented by subclasses")

    @abstractmethod
    async def close(self) -> None:
        """关闭端点（发送 EOF）"""
        raise NotImplementedError("FrameEndpoint.close must be implemented by subclasses")

    async def send_message(self, msg: HandshakeMessage) -> int:
        """编码并发送一条消息，返回帧字节数"""
        frame = encode_message(msg)
        await self.send_raw(frame)
        return len(frame)

    async def recv_frame(self) -> Optional[Frame]:
        """读取一帧，返回 (type, payload)；对端干净关闭时返回 None"""
        header = await self.recv_exactly(FRAME_HEADER_LEN)
        if header is None:
            return None
        frame_type, length = parse_frame_header(header)
        payload = await self.recv_exactly(length) if length else b""
        if payload is None:
            raise DecodeError(f"connection closed inside a {length}-byte frame")
        return frame_type, payload

    async def recv_message(self) -> Optional[HandshakeMessage]:
        """读取并解码一条消息"""
        frame = await self.recv_frame()
        if frame is None:
            return None
        return decode_payload(*frame)


class StreamEndpoint(FrameEndpoint):
    """基于 asyncio 流（TCP）的端点"""

    def __init__(
        self,
        reader: asyncio.StreamReader,
        writer: asyncio.StreamWriter,
        counters: Optional[ByteCounters] = None,
    ):
        super().__init__(counters)
        self._reader = reader
        self._writer = writer

    @property
    def peer(self) -> str:
        """对端地址"""
        peer = self._writer.get_extra_info("peername")
        return f"{peer[0]}:{peer[1]}" if peer else "unknown"

    async def send_raw(self, data: bytes) -> None:
        self._writer.write(data)
        await self._writer.drain()
        self._account(sent=len(data))

    async def recv_exactly(self, length: int) -> Optional[bytes]:
        try:
            data = await self._reader.readexactly(length)
        except asyncio.IncompleteReadError as e:
            self._account(received=len(e.partial))
            if not e.partial:
                return None
            raise DecodeError(f"connection closed after {len(e.partial)} of {length} bytes") from e
        self._account(received=len(data))
        return data

    async def close(self) -> None:
        if self._writer.is_closing():
            return
        try:
            self._writer.close()
            await self._writer.wait_closed()
        except (ConnectionError, OSError) as e:
            logger.debug(f"Ignoring error while closing stream: {e}")
