"""基础哈希原语

H = SHA3-256，XOF = SHAKE128，MAC = HMAC-SHA-256。固定下来以便金向量可跨实现复现。
"""

import hashlib
import hmac
import threading


def hash_h(data: bytes) -> bytes:
    """H = SHA3-256"""
    return hashlib.sha3_256(data).digest()


def xof(data: bytes, length: int) -> bytes:
    """XOF = SHAKE128，length 为 0 时返回空串"""
    if length <= 0:
        return b""
    return hashlib.shake_128(data).digest(length)


def hmac_sha256(key: bytes, message: bytes) -> bytes:
    """HMAC-SHA-256"""
    return hmac.new(key, message, hashlib.sha256).digest()


class _BurnCounter:
    """累计的哈希压缩次数（供测试和压测读取）"""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._total = 0

    def add(self, units: int) -> None:
        """累加"""
        with self._lock:
            self._total += units

    @property
    def total(self) -> int:
        """总次数"""
        with self._lock:
            return self._total


burn_counter = _BurnCounter()


def burn_cost(units: int) -> bytes:
    """执行恰好 units 次迭代 SHA-256 压缩（32 字节输入 = 单个压缩块）

    mock provider 用它把 cost_units 变成真实的计算时间。
    """
    state = b"\x00" * 32
    for _ in range(units):
        state = hashlib.sha256(state).digest()
    if units:
        burn_counter.add(units)
    return state
