"""系数打包与压缩

byte_encode / byte_decode 使用小端比特序（与 ML-KEM 相同）；
compress_d(x) = round((2^d / q)·x) mod 2^d，decompress_d(y) = round((q / 2^d)·y)。
"""

from typing import Union

import numpy as np

from ..crypto_suite.exceptions import WrongLengthError
from .params import N, Q
from .poly import Domain, Polynomial

IntOrArray = Union[int, np.ndarray]


def compress(x: IntOrArray, d: int) -> IntOrArray:
    """压缩到 d 比特（标量或数组）"""
    if isinstance(x, np.ndarray):
        return (((x.astype(np.int64) << d) + Q // 2) // Q) % (1 << d)
    return (((int(x) << d) + Q // 2) // Q) % (1 << d)


def decompress(y: IntOrArray, d: int) -> IntOrArray:
    """从 d 比特解压（标量或数组）"""
    if isinstance(y, np.ndarray):
        return ((y.astype(np.int64) * Q + (1 << (d - 1))) >> d) % Q
    return ((int(y) * Q + (1 << (d - 1))) >> d) % Q


def byte_encode(values: np.ndarray, d: int) -> bytes:
    """把 256 个 d 比特整数打包成 32·d 字节"""
    values = np.asarray(values, dtype=np.int64)
    bits = ((values[:, None] >> np.arange(d, dtype=np.int64)) & 1).astype(np.uint8)
    return np.packbits(bits.reshape(-1), bitorder="little").tobytes()


def byte_decode(data: bytes, d: int) -> np.ndarray:
    """把 32·d 字节解包为 256 个 d 比特整数"""
    if len(data) != 32 * d:
        raise WrongLengthError(f"{d}-bit packed polynomial", 32 * d, len(data))
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    weights = np.int64(1) << np.arange(d, dtype=np.int64)
    return bits.reshape(N, d).astype(np.int64) @ weights


def encode_poly12(p: Polynomial) -> bytes:
    """12 比特编码（公钥 / 私钥中的 NTT 域多项式）"""
    return byte_encode(p.coeffs, 12)


def decode_poly12(data: bytes, domain: Domain = Domain.NTT) -> Polynomial:
    """12 比特解码；大于等于 q 的值规约 mod q"""
    return Polynomial.from_coeffs(byte_decode(data, 12), domain)


def compress_poly(p: Polynomial, d: int) -> bytes:
    """压缩并打包"""
    return byte_encode(compress(p.coeffs, d), d)


def decompress_poly(data: bytes, d: int) -> Polynomial:
    """解包并解压"""
    return Polynomial.from_coeffs(decompress(byte_decode(data, d), d))
