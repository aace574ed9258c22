"""Provider 接口

定义 KEM 与签名 provider 的抽象契约。注册表负责长度前置/后置检查，
provider 只需实现算法本身。
"""

from abc import ABC, abstractmethod
from typing import Tuple

from .types import SchemeMetadata


class KemProvider(ABC):
    """KEM provider 接口

    所有 provider 都必须是种子确定的纯函数，可被多个握手并发调用。
    """

    @abstractmethod
    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        """由 32 字节种子生成 (public_key, secret_key)"""
        raise NotImplementedError("KemProvider.keygen must be implemented by subclasses")

    @abstractmethod
    def encap(self, meta: SchemeMetadata, public_key: bytes, randomness: bytes) -> Tuple[bytes, bytes]:
        """封装，返回 (ciphertext, shared_secret)"""
        raise NotImplementedError("KemProvider.encap must be implemented by subclasses")

    @abstractmethod
    def decap(self, meta: SchemeMetadata, secret_key: bytes, ciphertext: bytes) -> bytes:
        """解封装，返回 shared_secret

        对长度正确但内容被篡改的密文不得抛异常，应返回确定性的值（隐式拒绝）。
        """
        raise NotImplementedError("KemProvider.decap must be implemented by subclasses")


class SigProvider(ABC):
    """签名 provider 接口"""

    @abstractmethod
    def keygen(self, meta: SchemeMetadata, seed: bytes) -> Tuple[bytes, bytes]:
        """由 32 字节种子生成 (public_key, secret_key)"""
        raise NotImplementedError("SigProvider.keygen must be implemented by subclasses")

    @abstractmethod
    def sign(self, meta: SchemeMetadata, secret_key: bytes, message: bytes) -> bytes:
        """签名，输出严格为 sig_len 字节"""
        raise NotImplementedError("SigProvider.sign must be implemented by subclasses")

    @abstractmethod
    def verify(
        self, meta: SchemeMetadata, public_key: bytes, message: bytes, signature: bytes
    ) -> bool:
        """验签；内容不匹配返回 False 而不是抛异常"""
        raise NotImplementedError("SigProvider.verify must be implemented by subclasses")
