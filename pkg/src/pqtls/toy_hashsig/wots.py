"""WOTS 一次性签名

链函数 F(addr ‖ iteration ‖ value) = SHA3-256(...)。叶子私钥不落盘，
按 PRF(seed, leaf_index ‖ chain_index) 现算。所有哈希调用都计入 hash_counter。
"""

import hashlib
import struct
import threading
from typing import List, Sequence

from ..crypto_suite.exceptions import ChainOverflowError, WrongLengthError
from .params import LEN, LEN1, LOG_W, N_BYTES, SECRET_PREFIX, W


class HashCallCounter:
    """哈希调用计数器（线程安全）"""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._total = 0

    def add(self, count: int) -> None:
        """累加"""
        if count:
            with self._lock:
                self._total += count

    @property
    def total(self) -> int:
        """累计调用次数"""
        with self._lock:
            return self._total


hash_counter = HashCallCounter()


def hash_n(data: bytes) -> bytes:
    """计数的 SHA3-256"""
    hash_counter.add(1)
    return hashlib.sha3_256(data).digest()


def chain_address(leaf_index: int, chain_index: int) -> bytes:
    """链标签：leaf_index(u32) ‖ chain_index(u16)"""
    return struct.pack(">IH", leaf_index, chain_index)


def chain(x: bytes, start: int, steps: int, addr: bytes) -> bytes:
    """从第 start 步开始迭代 steps 次 F

    Raises:
        ChainOverflowError: start + steps > w − 1 或参数为负
        WrongLengthError: x 不是 32 字节
    """
    if start < 0 or steps < 0 or start + steps > W - 1:
        raise ChainOverflowError(f"chain({start}, {steps}) exceeds w-1={W - 1}")
    if len(x) != N_BYTES:
        raise WrongLengthError("chain value", N_BYTES, len(x))
    value = x
    for iteration in range(start, start + steps):
        value = hashlib.sha3_256(addr + bytes([iteration]) + value).digest()
    hash_counter.add(steps)
    return value


def message_digits(digest: bytes) -> List[int]:
    """摘要拆成 64 个 base-16 数字，附加 3 位大端校验和"""
    if len(digest) != N_BYTES:
        raise WrongLengthError("WOTS digest", N_BYTES, len(digest))
    digits: List[int] = []
    for byte in digest:
        digits.append(byte >> LOG_W)
        digits.append(byte & (W - 1))
    csum = sum(W - 1 - d for d in digits[:LEN1])
    digits.extend([(csum >> 8) & 0xF, (csum >> 4) & 0xF, csum & 0xF])
    return digits


def leaf_secrets(seed: bytes, leaf_index: int) -> List[bytes]:
    """叶子的 67 个链起点"""
    prefix = SECRET_PREFIX + seed + struct.pack(">I", leaf_index)
    secrets = [hashlib.sha3_256(prefix + struct.pack(">H", i)).digest() for i in range(LEN)]
    hash_counter.add(LEN)
    return secrets


def wots_public_key(seed: bytes, leaf_index: int) -> bytes:
    """叶子公钥：67 条完整链的终点拼接"""
    secrets = leaf_secrets(seed, leaf_index)
    return b"".join(chain(sk, 0, W - 1, chain_address(leaf_index, i)) for i, sk in enumerate(secrets))


def wots_sign(sk_leaf: Sequence[bytes], digest: bytes, leaf_index: int = 0) -> bytes:
    """把每条链推进到消息数字 m_i，返回 len·n 字节"""
    if len(sk_leaf) != LEN:
        raise WrongLengthError("WOTS secret chains", LEN, len(sk_leaf))
    digits = message_digits(digest)
    return b"".join(
        chain(sk, 0, digits[i], chain_address(leaf_index, i)) for i, sk in enumerate(sk_leaf)
    )


def wots_recover_pk(digest: bytes, chains: bytes, leaf_index: int = 0) -> bytes:
    """把签名中的每条链补完到 w−1，得到候选叶子公钥"""
    if len(chains) != LEN * N_BYTES:
        raise WrongLengthError("WOTS chains", LEN * N_BYTES, len(chains))
    digits = message_digits(digest)
    ends = []
    for i in range(LEN):
        value = chains[i * N_BYTES:(i + 1) * N_BYTES]
        ends.append(chain(value, digits[i], W - 1 - digits[i], chain_address(leaf_index, i)))
    return b"".join(ends)
