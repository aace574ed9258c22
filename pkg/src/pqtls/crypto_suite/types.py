"""密码套件类型定义

定义算法标识、尺寸/开销元数据以及密钥对等数据结构。
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

SEED_LEN = 32
SS_LEN = 32  # 所有 KEM 的共享密钥长度固定为 32 字节


class AlgorithmKind(str, Enum):
    """算法类型"""

    KEM = "KEM"
    SIG = "SIG"


@dataclass(frozen=True)
class AlgorithmId:
    """算法标识（cipher suite 的基本单元）"""

    kind: AlgorithmKind
    name: str  # 例如 kem.mock.kyber768
    wire_code: int  # u16，注册表内唯一

    def __post_init__(self) -> None:
        if not 0 <= self.wire_code <= 0xFFFF:
            raise ValueError(f"wire_code out of u16 range: {self.wire_code}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class CostUnits:
    """合成开销（mock 哈希迭代次数）

    keygen / encap_or_sign / decap_or_verify 三项，均为非负整数。
    """

    keygen: int = 0
    encap_or_sign: int = 0
    decap_or_verify: int = 0

    def __post_init__(self) -> None:
        if min(self.keygen, self.encap_or_sign, self.decap_or_verify) < 0:
            raise ValueError("cost units must be non-negative")

    def scaled(self, factor: float) -> "CostUnits":
        """按比例缩放（向最近整数取整）"""
        return CostUnits(
            keygen=int(round(self.keygen * factor)),
            encap_or_sign=int(round(self.encap_or_sign * factor)),
            decap_or_verify=int(round(self.decap_or_verify * factor)),
        )


@dataclass(frozen=True)
class SchemeMetadata:
    """算法元数据：字节尺寸 + 合成开销

    KEM 使用 ct_len / ss_len，SIG 使用 sig_len。
    mock provider 必须严格输出这里声明的长度。
    """

    id: AlgorithmId
    pk_len: int
    sk_len: int
    cost_units: CostUnits = field(default_factory=CostUnits)
    ct_len: Optional[int] = None
    sig_len: Optional[int] = None
    ss_len: Optional[int] = None
    is_mock: bool = True
    description: str = ""

    def __post_init__(self) -> None:
        if self.pk_len <= 0 or self.sk_len <= 0:
            raise ValueError(f"{self.id.name}: key lengths must be positive")
        if self.id.kind is AlgorithmKind.KEM:
            if not self.ct_len or self.ct_len <= 0:
                raise ValueError(f"{self.id.name}: KEM requires a positive ct_len")
            if self.ss_len != SS_LEN:
                raise ValueError(f"{self.id.name}: KEM ss_len must be {SS_LEN}")
        elif not self.sig_len or self.sig_len <= 0:
            raise ValueError(f"{self.id.name}: SIG requires a positive sig_len")

    @property
    def name(self) -> str:
        """算法名称"""
        return self.id.name

    @property
    def wire_code(self) -> int:
        """线上编码"""
        return self.id.wire_code

    @property
    def kind(self) -> AlgorithmKind:
        """算法类型"""
        return self.id.kind

    @property
    def ct_or_sig_len(self) -> int:
        """KEM 返回 ct_len，SIG 返回 sig_len"""
        if self.id.kind is AlgorithmKind.KEM:
            return int(self.ct_len or 0)
        return int(self.sig_len or 0)

    def with_costs(self, cost_units: CostUnits) -> "SchemeMetadata":
        """返回替换了 cost_units 的副本"""
        return replace(self, cost_units=cost_units)


@dataclass(frozen=True)
class KemKeyPair:
    """KEM 密钥对"""

    public_key: bytes
    secret_key: bytes
    alg: AlgorithmId


@dataclass(frozen=True)
class SigKeyPair:
    """签名密钥对"""

    public_key: bytes
    secret_key: bytes
    alg: AlgorithmId
