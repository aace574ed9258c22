"""最小证书链（深度恰好为 1：root → server）"""

import logging
import struct
from typing import Iterable, Optional, Tuple

from ..crypto_suite.exceptions import CryptoSuiteError
from ..crypto_suite.primitives import hash_h
from ..crypto_suite.registry import AlgorithmRef, ProviderRegistry, get_registry
from ..crypto_suite.types import SEED_LEN, SigKeyPair
from .exceptions import HandshakeConfigError
from .types import MAX_SUBJECT_BYTES, Certificate, ServerCredential, ServerIdentity, TrustAnchor

logger = logging.getLogger(__name__)


def certificate_tbs(subject: str, sig_alg: int, subject_pk: bytes) -> bytes:
    """待签名部分：subject ‖ sig_alg:u16 ‖ subject_pk"""
    return subject.encode("utf-8") + struct.pack(">H", sig_alg) + subject_pk


def cert_issue(
    root_alg: int,
    root_sk: bytes,
    subject: str,
    subject_keypair: SigKeyPair,
    registry: Optional[ProviderRegistry] = None,
) -> Certificate:
    """用 root 私钥签发证书"""
    registry = registry or get_registry()
    if len(subject.encode("utf-8")) > MAX_SUBJECT_BYTES:
        raise HandshakeConfigError(f"subject exceeds {MAX_SUBJECT_BYTES} bytes", "subject")
    sig_alg = subject_keypair.alg.wire_code
    issuer_sig = registry.sig_sign(
        root_alg, root_sk, certificate_tbs(subject, sig_alg, subject_keypair.public_key)
    )
    return Certificate(
        subject=subject,
        sig_alg=sig_alg,
        subject_pk=subject_keypair.public_key,
        issuer_sig=issuer_sig,
    )


def cert_verify(
    anchor: TrustAnchor, cert: Certificate, registry: Optional[ProviderRegistry] = None
) -> bool:
    """用信任锚验证证书；长度错误或未知算法同样视为验证失败"""
    registry = registry or get_registry()
    try:
        return registry.sig_verify(
            anchor.sig_alg,
            anchor.public_key,
            certificate_tbs(cert.subject, cert.sig_alg, cert.subject_pk),
            cert.issuer_sig,
        )
    except CryptoSuiteError as e:
        logger.debug(f"Certificate for {cert.subject!r} rejected: {e}")
        return False


def derive_seed(master_seed: bytes, label: str, code: int = 0) -> bytes:
    """从主种子派生 32 字节子种子"""
    return hash_h(label.encode("ascii") + struct.pack(">H", code) + master_seed)


def derive_root_keypair(seed: bytes, root_alg: AlgorithmRef, registry: Optional[ProviderRegistry] = None) -> SigKeyPair:
    """由主种子确定性地派生 root CA 密钥对"""
    registry = registry or get_registry()
    code = registry.metadata(root_alg).wire_code
    return registry.sig_keygen(code, derive_seed(seed, "pqtls root", code))


def derive_trust_anchor(
    seed: bytes, root_alg: AlgorithmRef, registry: Optional[ProviderRegistry] = None
) -> TrustAnchor:
    """与 build_server_identity 使用同一主种子时得到相同的信任锚"""
    root = derive_root_keypair(seed, root_alg, registry)
    return TrustAnchor(sig_alg=root.alg.wire_code, public_key=root.public_key)


def build_server_identity(
    kem_algs: Iterable[AlgorithmRef],
    sig_algs: Iterable[AlgorithmRef],
    seed: bytes,
    subject: str = "pqtls-server",
    root_alg: Optional[AlgorithmRef] = None,
    registry: Optional[ProviderRegistry] = None,
) -> Tuple[ServerIdentity, TrustAnchor]:
    """生成 root CA 和服务端长期签名密钥，并为每个签名算法签发证书

    root_alg 默认与第一个服务端签名算法相同。
    """
    registry = registry or get_registry()
    kem_codes = tuple(registry.metadata(code).wire_code for code in kem_algs)
    sig_codes = tuple(registry.metadata(code).wire_code for code in sig_algs)
    if not kem_codes or not sig_codes:
        raise HandshakeConfigError("server needs at least one KEM and one signature algorithm")
    if len(seed) != SEED_LEN:
        raise HandshakeConfigError(f"identity seed must be {SEED_LEN} bytes", "seed")

    root_code = registry.metadata(root_alg).wire_code if root_alg is not None else sig_codes[0]
    root = derive_root_keypair(seed, root_code, registry)
    credentials = []
    for code in sig_codes:
        keypair = registry.sig_keygen(code, derive_seed(seed, "pqtls server", code))
        cert = cert_issue(root_code, root.secret_key, subject, keypair, registry)
        credentials.append(ServerCredential(sig_alg=code, certificate=cert, secret_key=keypair.secret_key))
    logger.info(
        f"Server identity ready: subject={subject} root=0x{root_code:04x} "
        f"kems={[f'0x{c:04x}' for c in kem_codes]} sigs={[f'0x{c:04x}' for c in sig_codes]}"
    )
    identity = ServerIdentity(kem_algs=kem_codes, credentials=tuple(credentials))
    return identity, TrustAnchor(sig_alg=root_code, public_key=root.public_key)
