"""密码套件模块

包含 provider 接口、算法注册表和 mock 实现：
- base: KemProvider / SigProvider 抽象契约
- types: AlgorithmId / SchemeMetadata / 密钥对
- mock: 确定性、不安全的 mock provider
- registry: 注册表和默认算法表
- oqs_adapter: 可选的 liboqs 适配
"""

from .base import KemProvider, SigProvider
from .exceptions import (
    ChainOverflowError,
    CryptoSuiteError,
    DomainMismatchError,
    StateExhaustedError,
    UnknownAlgorithmError,
    WrongKindError,
    WrongLengthError,
)
from .mock import MockKemProvider, MockSigProvider
from .registry import (
    CONTROL_PAIR_NAMES,
    DEFAULT_MOCK_SCHEMES,
    REGISTRY_CSV_HEADER,
    OperationCounters,
    ProviderRegistry,
    build_default_registry,
    get_registry,
    mock_metadata,
    set_registry,
)
from .types import (
    SEED_LEN,
    SS_LEN,
    AlgorithmId,
    AlgorithmKind,
    CostUnits,
    KemKeyPair,
    SchemeMetadata,
    SigKeyPair,
)

__all__ = [
    "KemProvider",
    "SigProvider",
    "CryptoSuiteError",
    "UnknownAlgorithmError",
    "WrongKindError",
    "WrongLengthError",
    "DomainMismatchError",
    "ChainOverflowError",
    "StateExhaustedError",
    "MockKemProvider",
    "MockSigProvider",
    "CONTROL_PAIR_NAMES",
    "DEFAULT_MOCK_SCHEMES",
    "REGISTRY_CSV_HEADER",
    "OperationCounters",
    "ProviderRegistry",
    "build_default_registry",
    "get_registry",
    "set_registry",
    "mock_metadata",
    "SEED_LEN",
    "SS_LEN",
    "AlgorithmId",
    "AlgorithmKind",
    "CostUnits",
    "KemKeyPair",
    "SchemeMetadata",
    "SigKeyPair",
]
