"""密钥调度与转录哈希

prk = HMAC-SHA-256(key = TH, msg = ss)
out = HMAC-SHA-256(prk, label ‖ 0x01)
"""

import hashlib
import hmac

from ..crypto_suite.exceptions import WrongLengthError
from ..crypto_suite.primitives import hmac_sha256
from .types import Finished, SessionKeys

LABEL_CLIENT_TRAFFIC = b"pqtls c traffic"
LABEL_SERVER_TRAFFIC = b"pqtls s traffic"
LABEL_CLIENT_FINISHED = b"pqtls c finished"
LABEL_SERVER_FINISHED = b"pqtls s finished"


def transcript_hash(*parts: bytes) -> bytes:
    """TH = SHA3-256(各部分按序拼接)"""
    digest = hashlib.sha3_256()
    for part in parts:
        digest.update(part)
    return digest.digest()


def key_schedule(shared_secret: bytes, th: bytes) -> SessionKeys:
    """由共享密钥和转录哈希派生四个会话密钥"""
    if len(shared_secret) != 32:
        raise WrongLengthError("shared secret", 32, len(shared_secret))
    if len(th) != 32:
        raise WrongLengthError("transcript hash", 32, len(th))
    prk = hmac_sha256(th, shared_secret)
    return SessionKeys(
        client_traffic=hmac_sha256(prk, LABEL_CLIENT_TRAFFIC + b"\x01"),
        server_traffic=hmac_sha256(prk, LABEL_SERVER_TRAFFIC + b"\x01"),
        client_finished_key=hmac_sha256(prk, LABEL_CLIENT_FINISHED + b"\x01"),
        server_finished_key=hmac_sha256(prk, LABEL_SERVER_FINISHED + b"\x01"),
    )


def finished_mac(keys: SessionKeys, th: bytes) -> Finished:
    """客户端 Finished"""
    return Finished(mac=hmac_sha256(keys.client_finished_key, th))


def verify_finished(keys: SessionKeys, th: bytes, finished: Finished) -> bool:
    """常量时间比较 Finished mac"""
    return hmac.compare_digest(finished_mac(keys, th).mac, finished.mac)
