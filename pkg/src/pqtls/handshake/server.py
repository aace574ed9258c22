"""服务端握手状态机

server_respond：协商算法 → 封装 → 对 TH₁ 签名 → 用 TH₂ 派生密钥；
server_process_finished：校验客户端 Finished。
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..crypto_suite.exceptions import CryptoSuiteError, WrongLengthError
from ..crypto_suite.primitives import hash_h
from ..crypto_suite.registry import ProviderRegistry, get_registry
from ..crypto_suite.types import SEED_LEN, AlgorithmKind
from .codec import encode_payload, server_hello_signed_prefix
from .exceptions import DecodeError, HandshakeAlertError, HandshakeConfigError
from .key_schedule import key_schedule, transcript_hash, verify_finished
from .types import (
    PROTOCOL_VERSION,
    AlertCode,
    ClientHello,
    Finished,
    PhaseTimings,
    ServerCredential,
    ServerHello,
    ServerIdentity,
    SessionKeys,
)

logger = logging.getLogger(__name__)


@dataclass
class ServerHandshakeState:
    """发送 ServerHello 后等待 Finished 的服务端状态"""

    keys: SessionKeys = field(repr=False)
    th2: bytes
    chosen_kem: int
    chosen_sig: int
    timings: PhaseTimings = field(default_factory=dict)


def negotiate(
    identity: ServerIdentity, client_hello: ClientHello, registry: ProviderRegistry
) -> Tuple[int, ServerCredential]:
    """选择 KEM 与签名算法：签名取 ClientHello 顺序中第一个双方都支持的

    Raises:
        HandshakeAlertError: unsupported_algorithm
    """
    if client_hello.kem_alg not in identity.kem_algs or not registry.has(client_hello.kem_alg):
        raise HandshakeAlertError(
            AlertCode.UNSUPPORTED_ALGORITHM, f"KEM 0x{client_hello.kem_alg:04x} not supported"
        )
    for code in client_hello.sig_algs:
        credential = identity.credential_for(code)
        if credential is not None and registry.has(code):
            return client_hello.kem_alg, credential
    offered = ",".join(f"0x{c:04x}" for c in client_hello.sig_algs)
    raise HandshakeAlertError(AlertCode.UNSUPPORTED_ALGORITHM, f"no mutual signature algorithm in [{offered}]")


def sign_server_hello(
    credential: ServerCredential,
    ch_payload: bytes,
    server_hello: ServerHello,
    registry: Optional[ProviderRegistry] = None,
) -> ServerHello:
    """对 TH₁ = SHA3-256(CH_payload ‖ SH 前缀) 签名，返回带签名的 ServerHello"""
    registry = registry or get_registry()
    th1 = transcript_hash(ch_payload, server_hello_signed_prefix(server_hello))
    signature = registry.sig_sign(credential.sig_alg, credential.secret_key, th1)
    return ServerHello(
        version=server_hello.version,
        server_random=server_hello.server_random,
        chosen_kem=server_hello.chosen_kem,
        chosen_sig=server_hello.chosen_sig,
        certificate=server_hello.certificate,
        kem_ciphertext=server_hello.kem_ciphertext,
        signature=signature,
    )


def server_respond(
    identity: ServerIdentity,
    client_hello: ClientHello,
    rng_seed: bytes,
    registry: Optional[ProviderRegistry] = None,
) -> Tuple[ServerHello, ServerHandshakeState]:
    """处理 ClientHello，返回 ServerHello 和包含会话密钥的服务端状态

    Raises:
        HandshakeAlertError: unsupported_algorithm / decode_error
    """
    registry = registry or get_registry()
    if len(rng_seed) != SEED_LEN:
        raise HandshakeConfigError(f"rng_seed must be {SEED_LEN} bytes", "rng_seed")
    if client_hello.version != PROTOCOL_VERSION:
        raise DecodeError(f"unsupported protocol version 0x{client_hello.version:04x}")
    kem_code, credential = negotiate(identity, client_hello, registry)
    if registry.metadata(kem_code).kind is not AlgorithmKind.KEM:
        raise HandshakeAlertError(AlertCode.UNSUPPORTED_ALGORITHM, f"0x{kem_code:04x} is not a KEM")

    ch_payload = encode_payload(client_hello)
    started = time.perf_counter_ns()
    try:
        ciphertext, shared_secret = registry.kem_encap(
            kem_code, client_hello.kem_public_key, hash_h(b"pqtls server kem" + rng_seed)
        )
    except WrongLengthError as e:
        raise DecodeError(str(e)) from e
    encap_ns = time.perf_counter_ns() - started

    unsigned = ServerHello(
        server_random=hash_h(b"pqtls server random" + rng_seed),
        chosen_kem=kem_code,
        chosen_sig=credential.sig_alg,
        certificate=credential.certificate,
        kem_ciphertext=ciphertext,
    )
    started = time.perf_counter_ns()
    try:
        server_hello = sign_server_hello(credential, ch_payload, unsigned, registry)
    except CryptoSuiteError:
        logger.error(f"Server signing failed for sig=0x{credential.sig_alg:04x}", exc_info=True)
        raise
    sign_ns = time.perf_counter_ns() - started

    started = time.perf_counter_ns()
    th2 = transcript_hash(ch_payload, encode_payload(server_hello))
    keys = key_schedule(shared_secret, th2)
    kdf_ns = time.perf_counter_ns() - started

    state = ServerHandshakeState(
        keys=keys,
        th2=th2,
        chosen_kem=kem_code,
        chosen_sig=credential.sig_alg,
        timings={"encap": encap_ns, "sign": sign_ns, "kdf": kdf_ns},
    )
    return server_hello, state


def server_process_finished(state: ServerHandshakeState, finished: Finished) -> bool:
    """accept iff mac == HMAC(client_finished_key, TH₂)"""
    started = time.perf_counter_ns()
    accepted = verify_finished(state.keys, state.th2, finished)
    state.timings["finished"] = time.perf_counter_ns() - started
    return accepted
