"""单棵 Merkle 树上的有状态签名（XMSS 形态）

- 叶子 = H(0x00 ‖ WOTS 公钥)，内部节点 = H(0x01 ‖ 左 ‖ 右)；
- 消息摘要 = SHA3-256(message)；
- 签名编码：leaf_index(u32 大端) ‖ chains(len·n) ‖ auth_path(h·n)。

xmss_sign 是唯一会修改状态的操作：先在锁内 compare-and-claim 叶子序号，
再在锁外计算签名，因此并发签名不会重复使用同一个叶子。
"""

import hmac
import logging
import struct
import threading
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..crypto_suite.exceptions import StateExhaustedError, WrongLengthError
from .params import LEAF_INDEX_BYTES, LEAF_PREFIX, LEN, MAX_HEIGHT, MIN_HEIGHT, N_BYTES, NODE_PREFIX
from .wots import hash_n, leaf_secrets, wots_public_key, wots_recover_pk, wots_sign

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HashSigSignature:
    """签名结构"""

    leaf_index: int
    wots_chains: bytes
    auth_path: Tuple[bytes, ...]

    @property
    def height(self) -> int:
        """树高 = 认证路径长度"""
        return len(self.auth_path)

    def encode(self) -> bytes:
        """序列化"""
        return struct.pack(">I", self.leaf_index) + self.wots_chains + b"".join(self.auth_path)

    @classmethod
    def decode(cls, data: bytes, height: int) -> "HashSigSignature":
        """反序列化

        Raises:
            WrongLengthError: 长度与树高不符
        """
        expected = LEAF_INDEX_BYTES + LEN * N_BYTES + height * N_BYTES
        if len(data) != expected:
            raise WrongLengthError("hash-based signature", expected, len(data))
        (leaf_index,) = struct.unpack(">I", data[:LEAF_INDEX_BYTES])
        chains_end = LEAF_INDEX_BYTES + LEN * N_BYTES
        path = tuple(
            data[chains_end + i * N_BYTES:chains_end + (i + 1) * N_BYTES] for i in range(height)
        )
        return cls(leaf_index=leaf_index, wots_chains=data[LEAF_INDEX_BYTES:chains_end], auth_path=path)


@dataclass
class MerkleState:
    """签名状态：种子、树高、下一个可用叶子以及缓存的整棵树"""

    seed: bytes
    height: int
    levels: List[List[bytes]]  # levels[0] 为叶子，levels[-1] 为 [root]
    leaf_index: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    @property
    def root(self) -> bytes:
        """根（即公钥）"""
        return self.levels[-1][0]

    @property
    def capacity(self) -> int:
        """总叶子数 2^h"""
        return 1 << self.height

    @property
    def remaining(self) -> int:
        """剩余可用叶子数"""
        with self._lock:
            return self.capacity - self.leaf_index

    def claim_leaf(self) -> int:
        """原子地领取下一个叶子序号

        Raises:
            StateExhaustedError: 叶子已用完
        """
        with self._lock:
            if self.leaf_index >= self.capacity:
                raise StateExhaustedError(f"all {self.capacity} leaves of the Merkle tree are used")
            claimed = self.leaf_index
            self.leaf_index += 1
            return claimed

    def auth_path(self, leaf_index: int) -> Tuple[bytes, ...]:
        """叶子的认证路径（自底向上的兄弟节点）"""
        path = []
        index = leaf_index
        for level in self.levels[:-1]:
            path.append(level[index ^ 1])
            index >>= 1
        return tuple(path)


def leaf_hash(wots_pk: bytes) -> bytes:
    """叶子压缩"""
    return hash_n(LEAF_PREFIX + wots_pk)


def node_hash(left: bytes, right: bytes) -> bytes:
    """内部节点"""
    return hash_n(NODE_PREFIX + left + right)


def message_digest(message: bytes) -> bytes:
    """消息摘要"""
    return hash_n(message)


def xmss_keygen(seed: bytes, height: int) -> Tuple[bytes, MerkleState]:
    """生成整棵树，返回 (root, state)"""
    if len(seed) != N_BYTES:
        raise WrongLengthError("hash-based signature seed", N_BYTES, len(seed))
    if not MIN_HEIGHT <= height <= MAX_HEIGHT:
        raise ValueError(f"Merkle height must be in [{MIN_HEIGHT}, {MAX_HEIGHT}], got {height}")
    leaves = [leaf_hash(wots_public_key(seed, i)) for i in range(1 << height)]
    levels = [leaves]
    while len(levels[-1]) > 1:
        below = levels[-1]
        levels.append([node_hash(below[i], below[i + 1]) for i in range(0, len(below), 2)])
    state = MerkleState(seed=bytes(seed), height=height, levels=levels)
    logger.debug(f"Built Merkle tree: height={height} leaves={len(leaves)}")
    return state.root, state


def xmss_sign(state: MerkleState, message: bytes) -> HashSigSignature:
    """签名并推进 leaf_index

    Raises:
        StateExhaustedError: leaf_index = 2^h
    """
    leaf_index = state.claim_leaf()
    digest = message_digest(message)
    chains = wots_sign(leaf_secrets(state.seed, leaf_index), digest, leaf_index)
    return HashSigSignature(leaf_index=leaf_index, wots_chains=chains, auth_path=state.auth_path(leaf_index))


def root_from_signature(message: bytes, signature: HashSigSignature) -> Optional[bytes]:
    """由签名重算根；叶子序号越界时返回 None"""
    if signature.leaf_index >= (1 << signature.height):
        return None
    digest = message_digest(message)
    node = leaf_hash(wots_recover_pk(digest, signature.wots_chains, signature.leaf_index))
    index = signature.leaf_index
    for sibling in signature.auth_path:
        node = node_hash(sibling, node) if index & 1 else node_hash(node, sibling)
        index >>= 1
    return node


def xmss_verify(root: bytes, message: bytes, signature: HashSigSignature) -> bool:
    """验签：重算根并与公钥比较"""
    candidate = root_from_signature(message, signature)
    return candidate is not None and hmac.compare_digest(candidate, root)
