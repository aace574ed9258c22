"""toy 哈希签名的 SigProvider 实现

sk = seed，pk = Merkle root。每个 seed 对应一份签名状态，由 provider 持有并加锁管理。
状态只存在于进程内存中，重启后从叶子 0 重新开始。
"""

import logging
import threading
from typing import Dict, Tuple

from ..crypto_suite.base import SigProvider
from ..crypto_suite.exceptions import WrongLengthError
from ..crypto_suite.types import AlgorithmId, AlgorithmKind, CostUnits, SchemeMetadata
from .params import DEFAULT_HEIGHT, LEN, N_BYTES, W, signature_length
from .wots import hash_counter
from .xmss import HashSigSignature, MerkleState, xmss_keygen, xmss_sign, xmss_verify

logger = logging.getLogger(__name__)

TOY_HASHSIG_NAME = "sig.toy_wots_merkle"
TOY_HASHSIG_WIRE_CODE = 0x0101


def default_costs(height: int) -> CostUnits:
    """按哈希调用次数估算的 cost_units

    keygen 覆盖整棵树；sign / verify 取平均情况（约 len·(w−1)/2 次链函数加上 PRF 与路径）。
    """
    leaves = 1 << height
    keygen = leaves * (LEN + LEN * (W - 1) + 1) + (leaves - 1)
    return CostUnits(keygen=keygen, encap_or_sign=560, decap_or_verify=520)


class ToyHashSigProvider(SigProvider):
    """WOTS + 单棵 Merkle 树签名"""

    def __init__(self, height: int = DEFAULT_HEIGHT):
        self.height = height
        self._states: Dict[bytes, MerkleState] = {}
        self._lock = threading.Lock()
        self._signatures = 0

    def default_metadata(self) -> SchemeMetadata:
        """注册表默认条目"""
        return SchemeMetadata(
            id=AlgorithmId(kind=AlgorithmKind.SIG, name=TOY_HASHSIG_NAME, wire_code=TOY_HASHSIG_WIRE_CODE),
            pk_len=N_BYTES,
            sk_len=N_BYTES,
            sig_len=signature_length(self.height),
            cost_units=default_costs(self.height),
            is_mock=False,
            description=f"toy WOTS + Merkle tree, h={self.height}",
        )

    def state_for(self, secret_key: bytes) -> MerkleState:
        """取得（必要时构建）某个 seed 的签名状态

        建树在锁外进行；两个线程同时为同一 seed 建树时，先登记的状态生效，另一份丢弃。
        """
        key = bytes(secret_key)
        with self._lock:
            state = self._states.get(key)
        if state is not None:
            return state
        _, built = xmss_keygen(key, self.height)
        with self._lock:
            return self._states.setdefault(key, built)

    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        state = self.state_for(seed)
        return state.root, bytes(seed)

    def sign(self, meta: SchemeMetadata, secret_key: bytes, message: bytes) -> bytes:
        state = self.state_for(secret_key)
        signature = xmss_sign(state, message)
        with self._lock:
            self._signatures += 1
        if state.remaining == 0:
            logger.warning(f"Hash-based signing state exhausted after leaf {signature.leaf_index}")
        return signature.encode()

    def verify(
        self, meta: SchemeMetadata, public_key: bytes, message: bytes, signature: bytes
    ) -> bool:
        try:
            decoded = HashSigSignature.decode(signature, self.height)
        except WrongLengthError:
            return False
        return xmss_verify(public_key, message, decoded)

    def metrics(self) -> Dict[str, int]:
        """观测指标：累计哈希调用、签名次数、已加载的状态数"""
        with self._lock:
            return {
                "hash_calls": hash_counter.total,
                "signatures": self._signatures,
                "states": len(self._states),
            }
