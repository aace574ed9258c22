"""握手类型定义

定义了握手过程中使用的消息结构、会话密钥、信任锚和服务端身份。
所有整数在线上均为大端编码，详见 codec 模块。
"""

import hashlib
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

PROTOCOL_VERSION = 0x0001
RANDOM_LEN = 32
MAC_LEN = 32
KEY_HASH_LEN = 32
MAX_SIG_ALGS = 8
MAX_SUBJECT_BYTES = 255
MAX_DETAIL_BYTES = 255
FRAME_HEADER_LEN = 5  # type:u8 ‖ length:u32
MAX_FRAME_PAYLOAD = 1 << 20  # 1 MiB


class FrameType(IntEnum):
    """帧类型"""

    CLIENT_HELLO = 1
    SERVER_HELLO = 2
    FINISHED = 3
    ALERT = 4
    KEY_ECHO = 5  # 测试用扩展：服务端会话密钥摘要


class AlertCode(IntEnum):
    """告警码（全部是致命告警）"""

    DECODE_ERROR = 1
    BAD_SIGNATURE = 2
    BAD_CERTIFICATE = 3
    UNSUPPORTED_ALGORITHM = 4
    BAD_FINISHED = 5
    SERVER_BUSY = 6


@dataclass(frozen=True)
class ClientHello:
    """ClientHello：客户端提议的 KEM、签名算法列表以及临时 KEM 公钥"""

    client_random: bytes
    kem_alg: int
    sig_algs: Tuple[int, ...]
    kem_public_key: bytes
    version: int = PROTOCOL_VERSION


@dataclass(frozen=True)
class Certificate:
    """单层证书：root CA 对 subject ‖ sig_alg ‖ subject_pk 的签名"""

    subject: str
    sig_alg: int
    subject_pk: bytes
    issuer_sig: bytes

    @property
    def subject_bytes(self) -> bytes:
        """UTF-8 编码的 subject"""
        return self.subject.encode("utf-8")


@dataclass(frozen=True)
class ServerHello:
    """ServerHello：选定的算法、证书、KEM 密文和对转录的签名"""

    server_random: bytes
    chosen_kem: int
    chosen_sig: int
    certificate: Certificate
    kem_ciphertext: bytes
    signature: bytes = b""
    version: int = PROTOCOL_VERSION


@dataclass(frozen=True)
class Finished:
    """Finished：HMAC(client_finished_key, TH₂)"""

    mac: bytes


@dataclass(frozen=True)
class Alert:
    """致命告警"""

    code: AlertCode
    detail: str = ""

    @classmethod
    def create(cls, code: AlertCode, detail: str = "") -> "Alert":
        """构建告警，detail 按 UTF-8 截断到 255 字节"""
        raw = detail.encode("utf-8")[:MAX_DETAIL_BYTES]
        return cls(code=AlertCode(code), detail=raw.decode("utf-8", errors="ignore"))


@dataclass(frozen=True)
class KeyEcho:
    """服务端接受 Finished 后回显的会话密钥摘要（仅测试启用）"""

    key_hash: bytes


HandshakeMessage = Union[ClientHello, ServerHello, Finished, Alert, KeyEcho]


@dataclass(frozen=True)
class SessionKeys:
    """会话密钥（各 32 字节）"""

    client_traffic: bytes
    server_traffic: bytes
    client_finished_key: bytes
    server_finished_key: bytes

    def fingerprint(self) -> bytes:
        """SHA3-256(四个密钥拼接)，用于 KeyEcho 比对"""
        return hashlib.sha3_256(
            self.client_traffic
            + self.server_traffic
            + self.client_finished_key
            + self.server_finished_key
        ).digest()


@dataclass(frozen=True)
class TrustAnchor:
    """信任锚：root CA 的签名算法与公钥"""

    sig_alg: int
    public_key: bytes


@dataclass(frozen=True)
class ServerCredential:
    """服务端某个签名算法下的证书与长期私钥"""

    sig_alg: int
    certificate: Certificate
    secret_key: bytes = field(repr=False)


@dataclass(frozen=True)
class ServerIdentity:
    """服务端身份：支持的 KEM 列表和每个签名算法的凭据"""

    kem_algs: Tuple[int, ...]
    credentials: Tuple[ServerCredential, ...]

    @property
    def sig_algs(self) -> Tuple[int, ...]:
        """支持的签名算法（按配置顺序）"""
        return tuple(c.sig_alg for c in self.credentials)

    def credential_for(self, sig_alg: int) -> Optional[ServerCredential]:
        """查找某个签名算法的凭据"""
        for credential in self.credentials:
            if credential.sig_alg == sig_alg:
                return credential
        return None


class ClientConfig(BaseModel):
    """客户端配置

    sig_algs 的合法性（非空、不超过 8 个、无重复）在 client_begin 中检查，
    以便在发出任何字节之前给出本地错误。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kem_alg: int
    sig_algs: List[int] = Field(default_factory=list)
    trust_anchor: TrustAnchor
    timeout_ms: Optional[int] = Field(default=None, gt=0)


PhaseTimings = Dict[str, int]
