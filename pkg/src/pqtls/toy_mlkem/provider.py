"""toy ML-KEM-512 的 KemProvider 实现"""

from typing import Tuple

from ..crypto_suite.base import KemProvider
from ..crypto_suite.types import AlgorithmId, AlgorithmKind, CostUnits, SchemeMetadata
from .kem import kem512_decap, kem512_encap, kem512_keygen
from .params import CT_LEN, PK_LEN, SK_LEN, SS_LEN

TOY_MLKEM_NAME = "kem.toy_mlkem512"
TOY_MLKEM_WIRE_CODE = 0x0001
TOY_MLKEM_COSTS = CostUnits(keygen=45, encap_or_sign=60, decap_or_verify=75)


class ToyMlKemProvider(KemProvider):
    """真实（非 mock）的 Module-LWE KEM；开销来自实际运算，不额外消耗 cost_units"""

    @staticmethod
    def default_metadata() -> SchemeMetadata:
        """注册表默认条目；cost_units 只供 modeled 压测使用"""
        return SchemeMetadata(
            id=AlgorithmId(kind=AlgorithmKind.KEM, name=TOY_MLKEM_NAME, wire_code=TOY_MLKEM_WIRE_CODE),
            pk_len=PK_LEN,
            sk_len=SK_LEN,
            ct_len=CT_LEN,
            ss_len=SS_LEN,
            cost_units=TOY_MLKEM_COSTS,
            is_mock=False,
            description="toy Module-LWE KEM, ML-KEM-512 shape",
        )

    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        return kem512_keygen(seed)

    def encap(self, meta: SchemeMetadata, public_key: bytes, randomness: bytes) -> Tuple[bytes, bytes]:
        return kem512_encap(public_key, randomness)

    def decap(self, meta: SchemeMetadata, secret_key: bytes, ciphertext: bytes) -> bytes:
        return kem512_decap(secret_key, ciphertext)
