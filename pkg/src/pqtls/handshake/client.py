"""客户端握手状态机

client_begin 生成临时 KEM 密钥对和 ClientHello；
client_process_server_hello 按固定顺序处理 ServerHello：
证书 → 转录签名 → 解封装 → 派生密钥 → Finished。
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..crypto_suite.exceptions import CryptoSuiteError, WrongLengthError
from ..crypto_suite.primitives import hash_h
from ..crypto_suite.registry import ProviderRegistry, get_registry
from ..crypto_suite.types import SEED_LEN, AlgorithmKind, KemKeyPair
from .certificate import cert_verify
from .codec import encode_payload, server_hello_signed_prefix
from .exceptions import DecodeError, HandshakeAlertError, HandshakeConfigError
from .key_schedule import finished_mac, key_schedule, transcript_hash
from .types import (
    MAX_SIG_ALGS,
    PROTOCOL_VERSION,
    AlertCode,
    ClientConfig,
    ClientHello,
    Finished,
    PhaseTimings,
    ServerHello,
    SessionKeys,
)

logger = logging.getLogger(__name__)


@dataclass
class PendingClient:
    """发送 ClientHello 后等待 ServerHello 的客户端状态"""

    config: ClientConfig
    client_hello: ClientHello
    ch_payload: bytes
    kem_keypair: KemKeyPair = field(repr=False)
    timings: PhaseTimings = field(default_factory=dict)
    th2: Optional[bytes] = None


def _validate_config(config: ClientConfig, registry: ProviderRegistry) -> None:
    if not config.sig_algs:
        raise HandshakeConfigError("client must offer at least one signature algorithm", "sig_algs")
    if len(config.sig_algs) > MAX_SIG_ALGS:
        raise HandshakeConfigError(f"client may offer at most {MAX_SIG_ALGS} signature algorithms", "sig_algs")
    if len(set(config.sig_algs)) != len(config.sig_algs):
        raise HandshakeConfigError("duplicate signature algorithms offered", "sig_algs")
    try:
        kind = registry.metadata(config.kem_alg).kind
    except CryptoSuiteError as e:
        raise HandshakeConfigError(f"client KEM not available: {e}", "kem_alg") from e
    if kind is not AlgorithmKind.KEM:
        raise HandshakeConfigError(f"0x{config.kem_alg:04x} is not a KEM", "kem_alg")


def client_begin(
    config: ClientConfig, rng_seed: bytes, registry: Optional[ProviderRegistry] = None
) -> Tuple[ClientHello, PendingClient]:
    """生成临时 KEM 密钥对并构造 ClientHello

    Raises:
        HandshakeConfigError: 配置非法（在发送任何字节之前）
    """
    registry = registry or get_registry()
    _validate_config(config, registry)
    if len(rng_seed) != SEED_LEN:
        raise HandshakeConfigError(f"rng_seed must be {SEED_LEN} bytes", "rng_seed")

    started = time.perf_counter_ns()
    kem_keypair = registry.kem_keygen(config.kem_alg, hash_h(b"pqtls client kem" + rng_seed))
    keygen_ns = time.perf_counter_ns() - started

    client_hello = ClientHello(
        client_random=hash_h(b"pqtls client random" + rng_seed),
        kem_alg=kem_keypair.alg.wire_code,
        sig_algs=tuple(config.sig_algs),
        kem_public_key=kem_keypair.public_key,
    )
    pending = PendingClient(
        config=config,
        client_hello=client_hello,
        ch_payload=encode_payload(client_hello),
        kem_keypair=kem_keypair,
        timings={"keygen": keygen_ns},
    )
    return client_hello, pending


def client_process_server_hello(
    pending: PendingClient, server_hello: ServerHello, registry: Optional[ProviderRegistry] = None
) -> Tuple[SessionKeys, Finished]:
    """验证 ServerHello，解封装并派生会话密钥

    Raises:
        HandshakeAlertError: bad_certificate / bad_signature / unsupported_algorithm / decode_error
    """
    registry = registry or get_registry()
    hello = pending.client_hello
    if server_hello.version != PROTOCOL_VERSION:
        raise DecodeError(f"unsupported protocol version 0x{server_hello.version:04x}")
    if server_hello.chosen_kem != hello.kem_alg or server_hello.chosen_sig not in hello.sig_algs:
        raise HandshakeAlertError(
            AlertCode.UNSUPPORTED_ALGORITHM,
            f"server chose kem=0x{server_hello.chosen_kem:04x} sig=0x{server_hello.chosen_sig:04x} which were not offered",
        )

    # (1) 证书链
    started = time.perf_counter_ns()
    cert = server_hello.certificate
    if cert.sig_alg != server_hello.chosen_sig or not cert_verify(pending.config.trust_anchor, cert, registry):
        raise HandshakeAlertError(AlertCode.BAD_CERTIFICATE, f"certificate for {cert.subject!r} not trusted")

    # (2) 转录签名
    th1 = transcript_hash(pending.ch_payload, server_hello_signed_prefix(server_hello))
    try:
        signature_ok = registry.sig_verify(server_hello.chosen_sig, cert.subject_pk, th1, server_hello.signature)
    except WrongLengthError as e:
        raise HandshakeAlertError(AlertCode.BAD_SIGNATURE, str(e)) from e
    if not signature_ok:
        raise HandshakeAlertError(AlertCode.BAD_SIGNATURE, "transcript signature does not verify")
    verify_ns = time.perf_counter_ns() - started

    # (3) 解封装
    started = time.perf_counter_ns()
    try:
        shared_secret = registry.kem_decap(hello.kem_alg, pending.kem_keypair.secret_key, server_hello.kem_ciphertext)
    except WrongLengthError as e:
        raise DecodeError(str(e)) from e
    decap_ns = time.perf_counter_ns() - started

    # (4) 派生密钥 (5) Finished
    started = time.perf_counter_ns()
    th2 = transcript_hash(pending.ch_payload, encode_payload(server_hello))
    keys = key_schedule(shared_secret, th2)
    finished = finished_mac(keys, th2)
    kdf_ns = time.perf_counter_ns() - started

    pending.th2 = th2
    pending.timings.update({"verify": verify_ns, "decap": decap_ns, "kdf": kdf_ns})
    logger.debug(
        f"Client processed ServerHello: kem=0x{hello.kem_alg:04x} sig=0x{server_hello.chosen_sig:04x}"
    )
    return keys, finished
