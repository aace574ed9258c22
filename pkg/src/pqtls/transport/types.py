"""传输层类型定义"""

import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..handshake.types import AlertCode, ServerIdentity, TrustAnchor


class HandshakeOutcome(str, Enum):
    """单个连接的握手结果"""

    SUCCESS = "success"
    ALERT = "alert"
    TRANSPORT_ERROR = "transport_error"
    TIMEOUT = "timeout"


@dataclass
class ConnStats:
    """单个连接的统计

    bytes_* 为线上帧的实际字节数；phases 为各阶段耗时（纳秒）。
    """

    conn_id: int = 0
    role: str = "client"
    outcome: HandshakeOutcome = HandshakeOutcome.TRANSPORT_ERROR
    alert: Optional[AlertCode] = None
    error: Optional[str] = None
    latency_ns: int = 0
    bytes_sent: int = 0
    bytes_received: int = 0
    phases: Dict[str, int] = field(default_factory=dict)
    started_ns: int = 0
    finished_ns: int = 0
    key_echo: Optional[bytes] = None

    @property
    def ok(self) -> bool:
        """握手是否成功"""
        return self.outcome is HandshakeOutcome.SUCCESS

    @property
    def total_bytes(self) -> int:
        """双向字节总数"""
        return self.bytes_sent + self.bytes_received


class ByteCounters:
    """传输层字节计数（线程安全）"""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.bytes_sent = 0
        self.bytes_received = 0

    def add(self, sent: int = 0, received: int = 0) -> None:
        """累加"""
        with self._lock:
            self.bytes_sent += sent
            self.bytes_received += received

    def snapshot(self) -> Tuple[int, int]:
        """(sent, received)"""
        with self._lock:
            return self.bytes_sent, self.bytes_received


@dataclass
class ServerStats:
    """服务端聚合统计：只追加"""

    connections: List[ConnStats] = field(default_factory=list)
    compute_windows: List[Tuple[int, int]] = field(default_factory=list)
    counters: ByteCounters = field(default_factory=ByteCounters)

    @property
    def successes(self) -> int:
        """成功握手数"""
        return sum(1 for c in self.connections if c.ok)

    @property
    def failures(self) -> int:
        """失败握手数"""
        return sum(1 for c in self.connections if not c.ok)

    def alerts(self, code: AlertCode) -> int:
        """发出某种告警的连接数"""
        return sum(1 for c in self.connections if c.alert is code)


def parse_address(address: str) -> Tuple[str, int]:
    """解析 host:port（IPv6 用 [::1]:port）

    Raises:
        ValueError: 格式错误或端口越界
    """
    host, sep, port_text = address.rpartition(":")
    if not sep or not host:
        raise ValueError(f"Invalid address {address!r}, expected host:port")
    if host.startswith("[") and host.endswith("]"):
        host = host[1:-1]
    try:
        port = int(port_text)
    except ValueError as e:
        raise ValueError(f"Invalid port in address {address!r}") from e
    if not 0 <= port <= 0xFFFF:
        raise ValueError(f"Port out of range in address {address!r}")
    return host, port


class ServerConfig(BaseModel):
    """服务端配置

    identity 为空时由 identity_seed 生成 root CA 与服务端证书。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    listen: str = "127.0.0.1:0"
    kem_algs: List[int] = Field(default_factory=list)
    sig_algs: List[int] = Field(default_factory=list)
    workers: int = Field(default=1, ge=1)
    max_connections: int = Field(default=64, ge=1)
    subject: str = "pqtls-server"
    identity_seed: bytes = b"\x00" * 32
    root_sig_alg: Optional[int] = None
    identity: Optional[ServerIdentity] = None
    trust_anchor: Optional[TrustAnchor] = None
    echo_key_hash: bool = False
    drain_timeout_s: float = Field(default=5.0, ge=0)
    read_timeout_s: float = Field(default=10.0, gt=0)
    rng_seed: Optional[bytes] = None

    @field_validator("listen")
    @classmethod
    def _check_listen(cls, value: str) -> str:
        parse_address(value)
        return value

    @field_validator("identity_seed")
    @classmethod
    def _check_seed(cls, value: bytes) -> bytes:
        if len(value) != 32:
            raise ValueError("identity_seed must be 32 bytes")
        return value
