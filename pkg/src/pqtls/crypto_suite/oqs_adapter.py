"""liboqs 外部 provider 适配（可选）

安装 liboqs-python（`pip install pqtls[oqs]`）后，可以把真实的 Kyber / Dilithium /
Falcon / SPHINCS+ 实现注册进注册表，替换同名 mock 做绝对性能对比。

注意：
- liboqs 不支持由种子派生密钥，keygen 忽略 seed，结果不可复现；
- encap 忽略外部 randomness；
- Falcon 等签名长度可变，这里编码为 len:u16 ‖ sig ‖ 零填充，sig_len = 最大长度 + 2。
"""

import logging
import struct
from typing import Dict, List, Optional, Tuple

from .base import KemProvider, SigProvider
from .registry import ProviderRegistry
from .types import SS_LEN, AlgorithmId, AlgorithmKind, CostUnits, SchemeMetadata

logger = logging.getLogger(__name__)

# (本地名称, wire_code, liboqs 方案名)
OQS_KEMS: List[Tuple[str, int, str]] = [
    ("kem.oqs.kyber512", 0x0202, "Kyber512"),
    ("kem.oqs.kyber768", 0x0203, "Kyber768"),
]
OQS_SIGS: List[Tuple[str, int, str]] = [
    ("sig.oqs.dilithium2", 0x0302, "Dilithium2"),
    ("sig.oqs.falcon512", 0x0304, "Falcon-512"),
    ("sig.oqs.sphincs128s", 0x0306, "SPHINCS+-SHA2-128s-simple"),
]


def _load_oqs():
    """导入 oqs；未安装时返回 None"""
    try:
        import oqs  # type: ignore[import-not-found]

        return oqs
    except ImportError:
        return None


class OqsKemProvider(KemProvider):
    """liboqs KEM 适配器"""

    def __init__(self, oqs_module, scheme: str):
        self._oqs = oqs_module
        self.scheme = scheme

    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        with self._oqs.KeyEncapsulation(self.scheme) as kem:
            public_key = kem.generate_keypair()
            return bytes(public_key), bytes(kem.export_secret_key())

    def encap(self, meta: SchemeMetadata, public_key: bytes, randomness: bytes) -> Tuple[bytes, bytes]:
        with self._oqs.KeyEncapsulation(self.scheme) as kem:
            ciphertext, shared_secret = kem.encap_secret(public_key)
            return bytes(ciphertext), bytes(shared_secret)

    def decap(self, meta: SchemeMetadata, secret_key: bytes, ciphertext: bytes) -> bytes:
        with self._oqs.KeyEncapsulation(self.scheme, secret_key) as kem:
            return bytes(kem.decap_secret(ciphertext))


class OqsSigProvider(SigProvider):
    """liboqs 签名适配器（长度前缀 + 零填充到固定长度）"""

    def __init__(self, oqs_module, scheme: str):
        self._oqs = oqs_module
        self.scheme = scheme

    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        with self._oqs.Signature(self.scheme) as sig:
            public_key = sig.generate_keypair()
            return bytes(public_key), bytes(sig.export_secret_key())

    def sign(self, meta: SchemeMetadata, secret_key: bytes, message: bytes) -> bytes:
        with self._oqs.Signature(self.scheme, secret_key) as sig:
            raw = bytes(sig.sign(message))
        padded = struct.pack(">H", len(raw)) + raw
        return padded + b"\x00" * (int(meta.sig_len or 0) - len(padded))

    def verify(
        self, meta: SchemeMetadata, public_key: bytes, message: bytes, signature: bytes
    ) -> bool:
        (raw_len,) = struct.unpack(">H", signature[:2])
        if raw_len > len(signature) - 2 or any(signature[2 + raw_len:]):
            return False
        with self._oqs.Signature(self.scheme) as sig:
            return bool(sig.verify(message, signature[2:2 + raw_len], public_key))


def register_oqs_schemes(registry: ProviderRegistry, oqs_module=None) -> List[str]:
    """把可用的 liboqs 方案注册进注册表

    Returns:
        成功注册的算法名称列表；oqs 未安装时为空
    """
    oqs_module = oqs_module or _load_oqs()
    if oqs_module is None:
        logger.info("liboqs-python not installed; external providers unavailable")
        return []

    enabled = set(oqs_module.get_enabled_kem_mechanisms()) | set(
        oqs_module.get_enabled_sig_mechanisms()
    )
    registered: List[str] = []
    for name, code, scheme in OQS_KEMS:
        if scheme not in enabled:
            continue
        details: Dict = oqs_module.KeyEncapsulation(scheme).details
        if details["length_shared_secret"] != SS_LEN:
            logger.warning(f"Skipping {scheme}: shared secret is not {SS_LEN} bytes")
            continue
        meta = SchemeMetadata(
            id=AlgorithmId(AlgorithmKind.KEM, name, code),
            pk_len=details["length_public_key"],
            sk_len=details["length_secret_key"],
            ct_len=details["length_ciphertext"],
            ss_len=SS_LEN,
            cost_units=CostUnits(),
            is_mock=False,
            description=f"liboqs {scheme}",
        )
        registry.register(meta, OqsKemProvider(oqs_module, scheme))
        registered.append(name)
    for name, code, scheme in OQS_SIGS:
        if scheme not in enabled:
            continue
        details = oqs_module.Signature(scheme).details
        meta = SchemeMetadata(
            id=AlgorithmId(AlgorithmKind.SIG, name, code),
            pk_len=details["length_public_key"],
            sk_len=details["length_secret_key"],
            sig_len=details["length_signature"] + 2,
            cost_units=CostUnits(),
            is_mock=False,
            description=f"liboqs {scheme}",
        )
        registry.register(meta, OqsSigProvider(oqs_module, scheme))
        registered.append(name)
    logger.info(f"Registered liboqs providers: {registered}")
    return registered


def oqs_available(oqs_module: Optional[object] = None) -> bool:
    """liboqs-python 是否可用"""
    return (oqs_module or _load_oqs()) is not None
