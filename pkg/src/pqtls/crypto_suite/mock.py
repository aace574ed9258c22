"""确定性 mock provider（不安全！）

仅用于驱动协议测试和按尺寸/开销标定的压测，绝不能用于保护真实数据：

- KEM：sk = seed；pk = XOF(sk ‖ 0x01, pk_len)；
  encap(pk, r)：ct = r ‖ XOF(r ‖ 0x02, ct_len − 32)，ss = H(pk ‖ r)；
  decap(sk, ct)：由 sk 重算 pk，ss = H(pk ‖ ct[0:32])。
- SIG：sk = seed；pk = seed ‖ XOF(seed ‖ 0x03, pk_len − 32)（公钥直接暴露种子，
  验证方借此重算）；sign：tag = HMAC(seed, m)，sig = tag ‖ XOF(tag, sig_len − 32)。

每个操作按元数据中的 cost_units 执行对应次数的哈希压缩。
"""

import hmac
from typing import Tuple

from .base import KemProvider, SigProvider
from .primitives import burn_cost, hash_h, hmac_sha256, xof
from .types import SEED_LEN, SchemeMetadata


class MockKemProvider(KemProvider):
    """mock KEM（构造即正确，INSECURE）"""

    @staticmethod
    def _public_key(meta: SchemeMetadata, secret_key: bytes) -> bytes:
        return xof(secret_key + b"\x01", meta.pk_len)

    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        burn_cost(meta.cost_units.keygen)
        secret_key = bytes(seed)
        return self._public_key(meta, secret_key), secret_key

    def encap(self, meta: SchemeMetadata, public_key: bytes, randomness: bytes) -> Tuple[bytes, bytes]:
        burn_cost(meta.cost_units.encap_or_sign)
        r = bytes(randomness[:SEED_LEN])
        ciphertext = r + xof(r + b"\x02", int(meta.ct_len or 0) - SEED_LEN)
        return ciphertext, hash_h(public_key + r)

    def decap(self, meta: SchemeMetadata, secret_key: bytes, ciphertext: bytes) -> bytes:
        burn_cost(meta.cost_units.decap_or_verify)
        public_key = self._public_key(meta, secret_key)
        return hash_h(public_key + ciphertext[:SEED_LEN])


class MockSigProvider(SigProvider):
    """mock 签名（公钥内嵌种子，INSECURE）"""

    @staticmethod
    def _public_key(meta: SchemeMetadata, seed: bytes) -> bytes:
        return seed + xof(seed + b"\x03", meta.pk_len - SEED_LEN)

    @staticmethod
    def _signature(meta: SchemeMetadata, seed: bytes, message: bytes) -> bytes:
        tag = hmac_sha256(seed, message)
        return tag + xof(tag, int(meta.sig_len or 0) - len(tag))

    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        burn_cost(meta.cost_units.keygen)
        secret_key = bytes(seed)
        return self._public_key(meta, secret_key), secret_key

    def sign(self, meta: SchemeMetadata, secret_key: bytes, message: bytes) -> bytes:
        burn_cost(meta.cost_units.encap_or_sign)
        return self._signature(meta, secret_key, message)

    def verify(
        self, meta: SchemeMetadata, public_key: bytes, message: bytes, signature: bytes
    ) -> bool:
        burn_cost(meta.cost_units.decap_or_verify)
        seed = public_key[:SEED_LEN]
        if not hmac.compare_digest(self._public_key(meta, seed), public_key):
            return False
        return hmac.compare_digest(self._signature(meta, seed, message), signature)
