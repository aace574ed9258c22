"""握手报文编解码（按位精确）

frame     = type:u8 ‖ length:u32 ‖ payload
CH        = version:u16 ‖ client_random:32 ‖ kem_alg:u16 ‖ sig_alg_count:u8 ‖ sig_algs:u16× ‖ pk_len:u32 ‖ pk
SH        = version:u16 ‖ server_random:32 ‖ chosen_kem:u16 ‖ chosen_sig:u16 ‖ cert_len:u32 ‖ cert
            ‖ ct_len:u32 ‖ ct ‖ sig_len:u32 ‖ sig
cert      = subject_len:u16 ‖ subject ‖ sig_alg:u16 ‖ pk_len:u32 ‖ pk ‖ sig_len:u32 ‖ issuer_sig
Finished  = mac:32
Alert     = code:u16 ‖ detail_len:u8 ‖ detail
KeyEcho   = key_hash:32

解码对截断、尾随字节、未知类型和越界长度一律抛 DecodeError，对任意输入都不会抛其他异常。
"""

import struct
from typing import Tuple

from .exceptions import DecodeError
from .types import (
    FRAME_HEADER_LEN,
    KEY_HASH_LEN,
    MAC_LEN,
    MAX_DETAIL_BYTES,
    MAX_FRAME_PAYLOAD,
    MAX_SIG_ALGS,
    MAX_SUBJECT_BYTES,
    RANDOM_LEN,
    Alert,
    AlertCode,
    Certificate,
    ClientHello,
    Finished,
    FrameType,
    HandshakeMessage,
    KeyEcho,
    ServerHello,
)

__all__ = [
    "encode_message",
    "decode_message",
    "encode_payload",
    "decode_payload",
    "encode_frame",
    "parse_frame_header",
    "encode_certificate",
    "decode_certificate",
    "server_hello_signed_prefix",
    "message_type",
]

_HEADER = struct.Struct(">BI")
_FRAME_TYPES = frozenset(int(t) for t in FrameType)


class _Reader:
    """顺序读取器，越界即 DecodeError"""

    def __init__(self, data: bytes, what: str):
        self._data = data
        self._pos = 0
        self._what = what

    def take(self, length: int) -> bytes:
        if length < 0 or self._pos + length > len(self._data):
            raise DecodeError(f"{self._what}: truncated at offset {self._pos}")
        chunk = self._data[self._pos:self._pos + length]
        self._pos += length
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def vector32(self) -> bytes:
        return self.take(self.u32())

    def finish(self) -> None:
        if self._pos != len(self._data):
            raise DecodeError(f"{self._what}: {len(self._data) - self._pos} trailing bytes")


def _u16(value: int) -> bytes:
    return struct.pack(">H", value)


def _u32(value: int) -> bytes:
    return struct.pack(">I", value)


def _fixed(what: str, data: bytes, length: int) -> bytes:
    if len(data) != length:
        raise ValueError(f"{what} must be {length} bytes, got {len(data)}")
    return data


# ---------------------------------------------------------------- 证书


def encode_certificate(cert: Certificate) -> bytes:
    """证书编码"""
    subject = cert.subject_bytes
    if len(subject) > MAX_SUBJECT_BYTES:
        raise ValueError(f"certificate subject exceeds {MAX_SUBJECT_BYTES} bytes")
    return (
        _u16(len(subject))
        + subject
        + _u16(cert.sig_alg)
        + _u32(len(cert.subject_pk))
        + cert.subject_pk
        + _u32(len(cert.issuer_sig))
        + cert.issuer_sig
    )


def _read_certificate(reader: _Reader) -> Certificate:
    subject_len = reader.u16()
    if subject_len > MAX_SUBJECT_BYTES:
        raise DecodeError(f"certificate subject length {subject_len} exceeds {MAX_SUBJECT_BYTES}")
    try:
        subject = reader.take(subject_len).decode("utf-8")
    except UnicodeDecodeError as e:
        raise DecodeError(f"certificate subject is not UTF-8: {e}") from e
    sig_alg = reader.u16()
    subject_pk = reader.vector32()
    issuer_sig = reader.vector32()
    return Certificate(subject=subject, sig_alg=sig_alg, subject_pk=subject_pk, issuer_sig=issuer_sig)


def decode_certificate(data: bytes) -> Certificate:
    """证书解码"""
    reader = _Reader(data, "Certificate")
    cert = _read_certificate(reader)
    reader.finish()
    return cert


# ---------------------------------------------------------------- 负载


def _encode_client_hello(msg: ClientHello) -> bytes:
    if not 1 <= len(msg.sig_algs) <= MAX_SIG_ALGS:
        raise ValueError(f"ClientHello must offer 1..{MAX_SIG_ALGS} signature algorithms")
    return (
        _u16(msg.version)
        + _fixed("client_random", msg.client_random, RANDOM_LEN)
        + _u16(msg.kem_alg)
        + bytes([len(msg.sig_algs)])
        + b"".join(_u16(code) for code in msg.sig_algs)
        + _u32(len(msg.kem_public_key))
        + msg.kem_public_key
    )


def _decode_client_hello(payload: bytes) -> ClientHello:
    reader = _Reader(payload, "ClientHello")
    version = reader.u16()
    client_random = reader.take(RANDOM_LEN)
    kem_alg = reader.u16()
    count = reader.u8()
    if not 1 <= count <= MAX_SIG_ALGS:
        raise DecodeError(f"ClientHello: sig_alg_count {count} outside 1..{MAX_SIG_ALGS}")
    sig_algs = tuple(reader.u16() for _ in range(count))
    if len(set(sig_algs)) != len(sig_algs):
        raise DecodeError("ClientHello: duplicate signature algorithms")
    kem_public_key = reader.vector32()
    reader.finish()
    return ClientHello(
        version=version,
        client_random=client_random,
        kem_alg=kem_alg,
        sig_algs=sig_algs,
        kem_public_key=kem_public_key,
    )


def server_hello_signed_prefix(msg: ServerHello) -> bytes:
    """ServerHello 负载中截止到 kem_ciphertext（含）的前缀，即签名覆盖的部分"""
    cert = encode_certificate(msg.certificate)
    return (
        _u16(msg.version)
        + _fixed("server_random", msg.server_random, RANDOM_LEN)
        + _u16(msg.chosen_kem)
        + _u16(msg.chosen_sig)
        + _u32(len(cert))
        + cert
        + _u32(len(msg.kem_ciphertext))
        + msg.kem_ciphertext
    )


def _encode_server_hello(msg: ServerHello) -> bytes:
    return server_hello_signed_prefix(msg) + _u32(len(msg.signature)) + msg.signature


def _decode_server_hello(payload: bytes) -> ServerHello:
    reader = _Reader(payload, "ServerHello")
    version = reader.u16()
    server_random = reader.take(RANDOM_LEN)
    chosen_kem = reader.u16()
    chosen_sig = reader.u16()
    certificate = decode_certificate(reader.vector32())
    kem_ciphertext = reader.vector32()
    signature = reader.vector32()
    reader.finish()
    return ServerHello(
        version=version,
        server_random=server_random,
        chosen_kem=chosen_kem,
        chosen_sig=chosen_sig,
        certificate=certificate,
        kem_ciphertext=kem_ciphertext,
        signature=signature,
    )


def _encode_alert(msg: Alert) -> bytes:
    detail = msg.detail.encode("utf-8")
    if len(detail) > MAX_DETAIL_BYTES:
        raise ValueError(f"alert detail exceeds {MAX_DETAIL_BYTES} bytes")
    return _u16(int(msg.code)) + bytes([len(detail)]) + detail


def _decode_alert(payload: bytes) -> Alert:
    reader = _Reader(payload, "Alert")
    raw_code = reader.u16()
    try:
        code = AlertCode(raw_code)
    except ValueError as e:
        raise DecodeError(f"Alert: unknown code {raw_code}") from e
    try:
        detail = reader.take(reader.u8()).decode("utf-8")
    except UnicodeDecodeError as e:
        raise DecodeError(f"Alert: detail is not UTF-8: {e}") from e
    reader.finish()
    return Alert(code=code, detail=detail)


def _decode_fixed(payload: bytes, length: int, what: str) -> bytes:
    reader = _Reader(payload, what)
    value = reader.take(length)
    reader.finish()
    return value


def message_type(msg: HandshakeMessage) -> FrameType:
    """消息对应的帧类型"""
    if isinstance(msg, ClientHello):
        return FrameType.CLIENT_HELLO
    if isinstance(msg, ServerHello):
        return FrameType.SERVER_HELLO
    if isinstance(msg, Finished):
        return FrameType.FINISHED
    if isinstance(msg, Alert):
        return FrameType.ALERT
    if isinstance(msg, KeyEcho):
        return FrameType.KEY_ECHO
    raise TypeError(f"Not a handshake message: {type(msg).__name__}")


def encode_payload(msg: HandshakeMessage) -> bytes:
    """编码消息负载（不含帧头）"""
    frame_type = message_type(msg)
    if frame_type is FrameType.CLIENT_HELLO:
        return _encode_client_hello(msg)  # type: ignore[arg-type]
    if frame_type is FrameType.SERVER_HELLO:
        return _encode_server_hello(msg)  # type: ignore[arg-type]
    if frame_type is FrameType.FINISHED:
        return _fixed("Finished mac", msg.mac, MAC_LEN)  # type: ignore[union-attr]
    if frame_type is FrameType.ALERT:
        return _encode_alert(msg)  # type: ignore[arg-type]
    return _fixed("KeyEcho hash", msg.key_hash, KEY_HASH_LEN)  # type: ignore[union-attr]


def decode_payload(frame_type: int, payload: bytes) -> HandshakeMessage:
    """按帧类型解码负载"""
    if frame_type == FrameType.CLIENT_HELLO:
        return _decode_client_hello(payload)
    if frame_type == FrameType.SERVER_HELLO:
        return _decode_server_hello(payload)
    if frame_type == FrameType.FINISHED:
        return Finished(mac=_decode_fixed(payload, MAC_LEN, "Finished"))
    if frame_type == FrameType.ALERT:
        return _decode_alert(payload)
    if frame_type == FrameType.KEY_ECHO:
        return KeyEcho(key_hash=_decode_fixed(payload, KEY_HASH_LEN, "KeyEcho"))
    raise DecodeError(f"unknown frame type {frame_type}")


def encode_frame(frame_type: int, payload: bytes) -> bytes:
    """加上 5 字节帧头"""
    if len(payload) > MAX_FRAME_PAYLOAD:
        raise ValueError(f"frame payload of {len(payload)} bytes exceeds {MAX_FRAME_PAYLOAD}")
    return _HEADER.pack(frame_type, len(payload)) + payload


def parse_frame_header(header: bytes) -> Tuple[int, int]:
    """解析帧头，返回 (type, length)"""
    if len(header) != FRAME_HEADER_LEN:
        raise DecodeError(f"frame header: expected {FRAME_HEADER_LEN} bytes, got {len(header)}")
    frame_type, length = _HEADER.unpack(header)
    if frame_type not in _FRAME_TYPES:
        raise DecodeError(f"unknown frame type {frame_type}")
    if length > MAX_FRAME_PAYLOAD:
        raise DecodeError(f"frame length {length} exceeds {MAX_FRAME_PAYLOAD}")
    return frame_type, length


def encode_message(msg: HandshakeMessage) -> bytes:
    """编码完整帧"""
    return encode_frame(message_type(msg), encode_payload(msg))


def decode_message(data: bytes) -> HandshakeMessage:
    """解码恰好一个完整帧"""
    frame_type, length = parse_frame_header(data[:FRAME_HEADER_LEN])
    payload = data[FRAME_HEADER_LEN:]
    if len(payload) < length:
        raise DecodeError(f"frame truncated: expected {length} payload bytes, got {len(payload)}")
    if len(payload) > length:
        raise DecodeError(f"frame has {len(payload) - length} trailing bytes")
    return decode_payload(frame_type, payload)
