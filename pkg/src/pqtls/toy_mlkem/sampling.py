"""采样器

- sample_uniform：从 XOF 流中拒绝采样 12 比特候选值（< q），直接得到 NTT 域多项式；
- sample_cbd：中心二项分布，每个系数为 η 个比特之和减去 η 个比特之和。
"""

import hashlib
from typing import Protocol

import numpy as np

from ..crypto_suite.exceptions import WrongLengthError
from .params import N, Q
from .poly import Domain, Polynomial

_XOF_BLOCK = 168 * 3  # SHAKE128 rate 的整数倍，也是 3 的倍数


class XofStream(Protocol):
    """可按长度取前缀的 XOF（hashlib.shake_128 对象满足该协议）"""

    def digest(self, length: int) -> bytes:
        """返回输出流的前 length 字节"""
        ...  # pylint: disable=unnecessary-ellipsis


def xof_stream(rho: bytes, i: int, j: int) -> XofStream:
    """矩阵元素 Â[i][j] 的 XOF：SHAKE128(ρ ‖ j ‖ i)"""
    return hashlib.shake_128(rho + bytes([j, i]))


def prf(eta: int, seed: bytes, nonce: int) -> bytes:
    """PRF_η(s, b) = SHAKE256(s ‖ b)，输出 64·η 字节"""
    return hashlib.shake_256(seed + bytes([nonce])).digest(64 * eta)


def _parse_candidates(data: bytes) -> np.ndarray:
    triples = np.frombuffer(data, dtype=np.uint8).reshape(-1, 3).astype(np.int64)
    d1 = triples[:, 0] | ((triples[:, 1] & 0x0F) << 8)
    d2 = (triples[:, 1] >> 4) | (triples[:, 2] << 4)
    return np.stack([d1, d2], axis=1).reshape(-1)


def sample_uniform(stream: XofStream) -> Polynomial:
    """拒绝采样均匀多项式（NTT 域）

    按流的字节顺序消费候选值，流不够时取更长的前缀重来，结果与逐字节消费一致。
    """
    length = _XOF_BLOCK
    while True:
        candidates = _parse_candidates(stream.digest(length))
        accepted = candidates[candidates < Q]
        if accepted.size >= N:
            return Polynomial.from_coeffs(accepted[:N], Domain.NTT)
        length += _XOF_BLOCK


def sample_cbd(eta: int, prf_bytes: bytes) -> Polynomial:
    """中心二项分布采样，系数落在 {q−η, …, q−1, 0, …, η}"""
    if len(prf_bytes) != 64 * eta:
        raise WrongLengthError(f"CBD_{eta} input", 64 * eta, len(prf_bytes))
    bits = np.unpackbits(np.frombuffer(prf_bytes, dtype=np.uint8), bitorder="little")
    pairs = bits.reshape(N, 2, eta).astype(np.int64).sum(axis=2)
    return Polynomial.from_coeffs(pairs[:, 0] - pairs[:, 1])
