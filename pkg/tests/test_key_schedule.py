"""转录哈希与密钥调度测试"""

import hashlib
import hmac

import pytest

from pqtls.crypto_suite import WrongLengthError
from pqtls.handshake import Finished, finished_mac, key_schedule, transcript_hash, verify_finished
from pqtls.handshake.key_schedule import (
    LABEL_CLIENT_FINISHED,
    LABEL_CLIENT_TRAFFIC,
    LABEL_SERVER_FINISHED,
    LABEL_SERVER_TRAFFIC,
)

SS = bytes(range(32))
TH = hashlib.sha3_256(b"transcript").digest()


def _expand(prk: bytes, label: bytes) -> bytes:
    return hmac.new(prk, label + b"\x01", hashlib.sha256).digest()


def test_transcript_hash_is_sha3_of_concatenation():
    assert transcript_hash(b"client", b"server") == hashlib.sha3_256(b"clientserver").digest()
    assert transcript_hash() == hashlib.sha3_256(b"").digest()


def test_key_schedule_matches_hmac_construction():
    prk = hmac.new(TH, SS, hashlib.sha256).digest()
    keys = key_schedule(SS, TH)
    assert keys.client_traffic == _expand(prk, LABEL_CLIENT_TRAFFIC)
    assert keys.server_traffic == _expand(prk, LABEL_SERVER_TRAFFIC)
    assert keys.client_finished_key == _expand(prk, LABEL_CLIENT_FINISHED)
    assert keys.server_finished_key == _expand(prk, LABEL_SERVER_FINISHED)
    assert LABEL_CLIENT_TRAFFIC == b"pqtls c traffic"


def test_keys_are_distinct_and_bound_to_inputs():
    keys = key_schedule(SS, TH)
    values = {keys.client_traffic, keys.server_traffic, keys.client_finished_key, keys.server_finished_key}
    assert len(values) == 4
    assert key_schedule(SS, hashlib.sha3_256(b"other").digest()) != keys
    assert key_schedule(bytes(32), TH) != keys


def test_input_lengths():
    with pytest.raises(WrongLengthError):
        key_schedule(SS[:16], TH)
    with pytest.raises(WrongLengthError):
        key_schedule(SS, TH + b"\x00")


def test_finished_mac():
    keys = key_schedule(SS, TH)
    finished = finished_mac(keys, TH)
    assert finished.mac == hmac.new(keys.client_finished_key, TH, hashlib.sha256).digest()
    assert verify_finished(keys, TH, finished)
    assert not verify_finished(keys, TH, Finished(mac=bytes(32)))
    assert not verify_finished(keys, hashlib.sha3_256(b"x").digest(), finished)


def test_fingerprint():
    keys = key_schedule(SS, TH)
    expected = hashlib.sha3_256(
        keys.client_traffic + keys.server_traffic + keys.client_finished_key + keys.server_finished_key
    ).digest()
    assert keys.fingerprint() == expected


def test_all_zero_inputs_match_pinned_vector():
    """ss = TH = 32 字节 0 的固定向量（独立 HMAC-SHA-256 实现算出）"""
    keys = key_schedule(bytes(32), bytes(32))
    assert keys.client_traffic.hex() == "97f58ef71bbd2e913fb447afaaddad86ce8e9d600117d78e3a78ba334f3f4a21"
    assert keys.server_traffic.hex() == "ce775b8ee4e012bea959b033790898d8137939e410323bd80bd7db4f9f68d3eb"
    assert keys.client_finished_key.hex() == "c2b94445b6eeea2c76ac96ecb968f6e5aaa29dab330d4956a4341af03ff93590"
    assert keys.server_finished_key.hex() == "d451e175fc42b57deda1b44d44573978587489ca709d884d7a7169cab9b7ae31"
