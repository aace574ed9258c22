"""握手报文编解码测试"""

import random

import pytest

from pqtls.handshake import (
    MAX_FRAME_PAYLOAD,
    Alert,
    AlertCode,
    Certificate,
    ClientHello,
    DecodeError,
    Finished,
    FrameType,
    KeyEcho,
    ServerHello,
    decode_certificate,
    decode_message,
    encode_certificate,
    encode_frame,
    encode_message,
    encode_payload,
    parse_frame_header,
    server_hello_signed_prefix,
)

CERT = Certificate(subject="test-server", sig_alg=0x0104, subject_pk=b"\x11" * 40, issuer_sig=b"\x22" * 50)
CLIENT_HELLO = ClientHello(
    client_random=b"\x01" * 32, kem_alg=0x0003, sig_algs=(0x0104, 0x0102), kem_public_key=b"\x33" * 64
)
SERVER_HELLO = ServerHello(
    server_random=b"\x02" * 32,
    chosen_kem=0x0003,
    chosen_sig=0x0104,
    certificate=CERT,
    kem_ciphertext=b"\x44" * 48,
    signature=b"\x55" * 60,
)
MESSAGES = [
    CLIENT_HELLO,
    SERVER_HELLO,
    Finished(mac=b"\x66" * 32),
    Alert(code=AlertCode.BAD_SIGNATURE, detail="transcript signature does not verify"),
    KeyEcho(key_hash=b"\x77" * 32),
]


def test_minimal_client_hello_is_75_bytes():
    hello = ClientHello(client_random=bytes(32), kem_alg=0x0001, sig_algs=(0x0101,), kem_public_key=bytes(32))
    payload = encode_payload(hello)
    assert len(payload) == 75
    frame = encode_message(hello)
    assert frame[:5] == bytes([FrameType.CLIENT_HELLO, 0, 0, 0, 75])
    assert payload[:2] == b"\x00\x01"
    assert payload[34:37] == b"\x00\x01\x01"


@pytest.mark.parametrize("message", MESSAGES, ids=lambda m: type(m).__name__)
def test_roundtrip(message):
    assert decode_message(encode_message(message)) == message


def test_signed_prefix_is_prefix_of_payload():
    payload = encode_payload(SERVER_HELLO)
    prefix = server_hello_signed_prefix(SERVER_HELLO)
    assert payload.startswith(prefix)
    assert payload[len(prefix):] == len(SERVER_HELLO.signature).to_bytes(4, "big") + SERVER_HELLO.signature


@pytest.mark.parametrize("message", MESSAGES, ids=lambda m: type(m).__name__)
def test_every_truncation_is_a_decode_error(message):
    frame = encode_message(message)
    for cut in range(len(frame)):
        with pytest.raises(DecodeError):
            decode_message(frame[:cut])


def test_trailing_bytes_rejected():
    with pytest.raises(DecodeError):
        decode_message(encode_message(Finished(mac=bytes(32))) + b"\x00")
    # 帧头长度与 Finished 负载长度不一致
    with pytest.raises(DecodeError):
        decode_message(encode_frame(FrameType.FINISHED, bytes(33)))


def test_frame_header_checks():
    assert parse_frame_header(bytes([2, 0, 0, 1, 0])) == (2, 256)
    with pytest.raises(DecodeError):
        parse_frame_header(bytes([9, 0, 0, 0, 0]))
    with pytest.raises(DecodeError):
        parse_frame_header(bytes([1]) + (MAX_FRAME_PAYLOAD + 1).to_bytes(4, "big"))
    with pytest.raises(DecodeError):
        parse_frame_header(b"\x01\x00")


def test_client_hello_validation():
    payload = bytearray(encode_payload(CLIENT_HELLO))
    payload[36] = 0  # sig_alg_count
    with pytest.raises(DecodeError):
        decode_message(encode_frame(FrameType.CLIENT_HELLO, bytes(payload)))
    duplicate = ClientHello(
        client_random=bytes(32), kem_alg=1, sig_algs=(0x0104,), kem_public_key=b""
    )
    raw = bytearray(encode_payload(duplicate))
    raw[36] = 2
    raw[39:39] = b"\x01\x04"
    with pytest.raises(DecodeError):
        decode_message(encode_frame(FrameType.CLIENT_HELLO, bytes(raw)))
    with pytest.raises(ValueError):
        encode_payload(ClientHello(client_random=bytes(32), kem_alg=1, sig_algs=tuple(range(9)), kem_public_key=b""))
    with pytest.raises(ValueError):
        encode_payload(ClientHello(client_random=bytes(31), kem_alg=1, sig_algs=(1,), kem_public_key=b""))


def test_alert_codes_and_detail():
    with pytest.raises(DecodeError):
        decode_message(encode_frame(FrameType.ALERT, b"\x00\x63\x00"))
    alert = Alert.create(AlertCode.SERVER_BUSY, "x" * 300)
    assert len(alert.detail) == 255
    assert decode_message(encode_message(alert)) == alert


def test_certificate_codec():
    assert decode_certificate(encode_certificate(CERT)) == CERT
    with pytest.raises(ValueError):
        encode_certificate(Certificate(subject="s" * 256, sig_alg=1, subject_pk=b"", issuer_sig=b""))
    broken = bytearray(encode_certificate(CERT))
    broken[2] = 0xFF  # subject 首字节不是合法 UTF-8
    with pytest.raises(DecodeError):
        decode_certificate(bytes(broken))


def _fuzz(iterations: int) -> None:
    rng = random.Random(1234)
    valid = [encode_message(m) for m in MESSAGES]
    for _ in range(iterations):
        choice = rng.random()
        if choice < 0.3:
            data = rng.randbytes(rng.randrange(0, 64)) if hasattr(rng, "randbytes") else bytes(
                rng.randrange(256) for _ in range(rng.randrange(0, 64))
            )
        else:
            frame = bytearray(rng.choice(valid))
            for _ in range(rng.randrange(1, 4)):
                frame[rng.randrange(len(frame))] = rng.randrange(256)
            data = bytes(frame)
        try:
            decode_message(data)
        except DecodeError:
            pass


def test_fuzz_only_raises_decode_error():
    _fuzz(2_000)


@pytest.mark.slow
def test_fuzz_full():
    _fuzz(100_000)
