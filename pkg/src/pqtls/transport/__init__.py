"""传输模块

- endpoint: 帧端点接口与 TCP 实现
- loopback: 带时延 / 带宽注入的内存回环
- server: W 路并行的握手服务端
- client: 握手客户端
"""

from .client import connect_and_handshake, run_client_handshake
from .endpoint import FrameEndpoint, StreamEndpoint
from .exceptions import (
    ConnectionRefusedTransportError,
    HandshakeTimeoutError,
    ServerBindError,
    TransportError,
)
from .loopback import LoopbackEndpoint, loopback_pair
from .server import HandshakeServer, serve
from .types import (
    ByteCounters,
    ConnStats,
    HandshakeOutcome,
    ServerConfig,
    ServerStats,
    parse_address,
)

__all__ = [
    "connect_and_handshake",
    "run_client_handshake",
    "FrameEndpoint",
    "StreamEndpoint",
    "ConnectionRefusedTransportError",
    "HandshakeTimeoutError",
    "ServerBindError",
    "TransportError",
    "LoopbackEndpoint",
    "loopback_pair",
    "HandshakeServer",
    "serve",
    "ByteCounters",
    "ConnStats",
    "HandshakeOutcome",
    "ServerConfig",
    "ServerStats",
    "parse_address",
]
