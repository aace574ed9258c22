"""握手模块

- types: 消息、会话密钥、信任锚与服务端身份
- codec: 按位精确的帧编解码
- key_schedule: 转录哈希与密钥派生
- certificate: 单层证书签发与验证
- client / server: 双方状态机
"""

from .certificate import (
    build_server_identity,
    cert_issue,
    cert_verify,
    certificate_tbs,
    derive_trust_anchor,
)
from .client import PendingClient, client_begin, client_process_server_hello
from .codec import (
    decode_certificate,
    decode_message,
    decode_payload,
    encode_certificate,
    encode_frame,
    encode_message,
    encode_payload,
    parse_frame_header,
    server_hello_signed_prefix,
)
from .exceptions import DecodeError, HandshakeAlertError, HandshakeConfigError, HandshakeError
from .key_schedule import finished_mac, key_schedule, transcript_hash, verify_finished
from .server import (
    ServerHandshakeState,
    negotiate,
    server_process_finished,
    server_respond,
    sign_server_hello,
)
from .types import (
    FRAME_HEADER_LEN,
    MAX_FRAME_PAYLOAD,
    PROTOCOL_VERSION,
    Alert,
    AlertCode,
    Certificate,
    ClientConfig,
    ClientHello,
    Finished,
    FrameType,
    HandshakeMessage,
    KeyEcho,
    ServerCredential,
    ServerHello,
    ServerIdentity,
    SessionKeys,
    TrustAnchor,
)

__all__ = [
    "build_server_identity",
    "cert_issue",
    "cert_verify",
    "certificate_tbs",
    "derive_trust_anchor",
    "PendingClient",
    "client_begin",
    "client_process_server_hello",
    "decode_certificate",
    "decode_message",
    "decode_payload",
    "encode_certificate",
    "encode_frame",
    "encode_message",
    "encode_payload",
    "parse_frame_header",
    "server_hello_signed_prefix",
    "DecodeError",
    "HandshakeAlertError",
    "HandshakeConfigError",
    "HandshakeError",
    "finished_mac",
    "key_schedule",
    "transcript_hash",
    "verify_finished",
    "ServerHandshakeState",
    "negotiate",
    "server_process_finished",
    "server_respond",
    "sign_server_hello",
    "FRAME_HEADER_LEN",
    "MAX_FRAME_PAYLOAD",
    "PROTOCOL_VERSION",
    "Alert",
    "AlertCode",
    "Certificate",
    "ClientConfig",
    "ClientHello",
    "Finished",
    "FrameType",
    "HandshakeMessage",
    "KeyEcho",
    "ServerCredential",
    "ServerHello",
    "ServerIdentity",
    "SessionKeys",
    "TrustAnchor",
]
