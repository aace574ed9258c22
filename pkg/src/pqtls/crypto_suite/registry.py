"""算法注册表

维护 wire_code → (SchemeMetadata, provider) 映射，提供带长度检查的
kem_* / sig_* 操作入口，以及默认注册表（mock + toy 实现）。
"""

import io
import csv
import logging
import threading
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from .base import KemProvider, SigProvider
from .exceptions import UnknownAlgorithmError, WrongKindError, WrongLengthError
from .mock import MockKemProvider, MockSigProvider
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

logger = logging.getLogger(__name__)

AlgorithmRef = Union[AlgorithmId, SchemeMetadata, str, int]

REGISTRY_CSV_HEADER = [
    "wire_code",
    "name",
    "kind",
    "pk_len",
    "sk_len",
    "ct_or_sig_len",
    "cost_keygen",
    "cost_op",
    "cost_verify",
]

# (kind, name, wire_code, pk_len, sk_len, ct_or_sig_len, (keygen, op, verify), 说明)
# 尺寸取自各方案公开参数表；cost 是标定旋钮，只保证相对顺序符合定性结论：
# SPHINCS+ 签名 ≫ Dilithium 签名 > Falcon 签名，Falcon 验签最便宜。
DEFAULT_MOCK_SCHEMES: List[Tuple[AlgorithmKind, str, int, int, int, int, Tuple[int, int, int], str]] = [
    (AlgorithmKind.KEM, "kem.mock.kyber512", 0x0002, 800, 32, 768, (45, 60, 75), "Kyber512 sizes"),
    (AlgorithmKind.KEM, "kem.mock.kyber768", 0x0003, 1184, 32, 1088, (70, 90, 105), "Kyber768 sizes"),
    (AlgorithmKind.KEM, "kem.mock.kyber1024", 0x0004, 1568, 32, 1568, (100, 125, 145), "Kyber1024 sizes"),
    (AlgorithmKind.KEM, "kem.mock.ecdhe_x25519", 0x00F0, 32, 32, 32, (60, 120, 60), "control: X25519 ephemeral"),
    (AlgorithmKind.SIG, "sig.mock.dilithium2", 0x0102, 1312, 32, 2420, (120, 450, 130), "Dilithium2 sizes"),
    (AlgorithmKind.SIG, "sig.mock.dilithium3", 0x0103, 1952, 32, 3293, (200, 700, 210), "Dilithium3 sizes"),
    (AlgorithmKind.SIG, "sig.mock.falcon512", 0x0104, 897, 32, 666, (8000, 350, 35), "Falcon-512 sizes"),
    (AlgorithmKind.SIG, "sig.mock.falcon1024", 0x0105, 1793, 32, 1280, (24000, 700, 70), "Falcon-1024 sizes"),
    (AlgorithmKind.SIG, "sig.mock.sphincs128s", 0x0106, 32, 32, 7856, (30000, 60000, 1500), "SPHINCS+-128s sizes"),
    (AlgorithmKind.SIG, "sig.mock.sphincs128f", 0x0107, 32, 32, 17088, (1500, 20000, 4000), "SPHINCS+-128f sizes"),
    (AlgorithmKind.SIG, "sig.mock.rsa2048", 0x01F0, 270, 32, 256, (50000, 1500, 40), "control: RSA-2048"),
]

CONTROL_PAIR_NAMES = ("kem.mock.ecdhe_x25519", "sig.mock.rsa2048")


@dataclass(frozen=True)
class RegistryEntry:
    """注册表条目"""

    metadata: SchemeMetadata
    provider: Union[KemProvider, SigProvider]


class OperationCounters:
    """按 (算法, 操作) 统计调用次数（线程安全）"""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._counts: Counter = Counter()

    def increment(self, name: str, op: str) -> None:
        """计数 +1"""
        with self._lock:
            self._counts[(name, op)] += 1

    def get(self, name: str, op: str) -> int:
        """读取单项计数"""
        with self._lock:
            return self._counts[(name, op)]

    def total(self, op: str) -> int:
        """某操作在所有算法上的总次数"""
        with self._lock:
            return sum(count for (_, o), count in self._counts.items() if o == op)

    def snapshot(self) -> Dict[Tuple[str, str], int]:
        """当前计数快照"""
        with self._lock:
            return dict(self._counts)


def _check_len(what: str, data: bytes, expected: int) -> None:
    if len(data) != expected:
        raise WrongLengthError(what, expected, len(data))


class ProviderRegistry:
    """算法注册表

    wire_code 与 name 之间是双射；查找未注册的算法抛 UnknownAlgorithmError。
    """

    def __init__(self) -> None:
        self._by_code: Dict[int, RegistryEntry] = {}
        self._by_name: Dict[str, int] = {}
        self.counters = OperationCounters()

    # ---------------------------------------------------------------- 注册与查找

    def register(self, metadata: SchemeMetadata, provider: Union[KemProvider, SigProvider]) -> None:
        """注册算法

        Raises:
            ValueError: wire_code 或 name 冲突，或 provider 类型与 kind 不符
        """
        code, name = metadata.wire_code, metadata.name
        if code in self._by_code and self._by_code[code].metadata.name != name:
            raise ValueError(f"wire_code 0x{code:04x} already used by {self._by_code[code].metadata.name}")
        if name in self._by_name and self._by_name[name] != code:
            raise ValueError(f"Algorithm name {name} already registered")
        expected_type = KemProvider if metadata.kind is AlgorithmKind.KEM else SigProvider
        if not isinstance(provider, expected_type):
            raise ValueError(f"{name}: provider {type(provider).__name__} does not match kind {metadata.kind.value}")
        self._by_code[code] = RegistryEntry(metadata=metadata, provider=provider)
        self._by_name[name] = code

    def override_costs(self, name: str, cost_units: CostUnits) -> None:
        """替换某算法的 cost_units"""
        entry = self.entry(name)
        self._by_code[entry.metadata.wire_code] = RegistryEntry(
            metadata=entry.metadata.with_costs(cost_units), provider=entry.provider
        )

    def apply_cost_overrides(self, overrides: Mapping[str, Tuple[int, int, int]]) -> None:
        """批量覆盖 cost_units；未知算法名记录警告后跳过"""
        for name, (keygen, op, verify) in overrides.items():
            try:
                self.override_costs(name, CostUnits(keygen, op, verify))
            except UnknownAlgorithmError:
                logger.warning(f"Cost override for unknown algorithm {name!r} ignored")

    @contextmanager
    def cost_overrides_applied(self, overrides: Mapping[str, Tuple[int, int, int]]) -> Iterator[None]:
        """在 with 块内生效的 cost 覆盖，退出时恢复原来的条目"""
        saved = dict(self._by_code)
        try:
            self.apply_cost_overrides(overrides)
            yield
        finally:
            self._by_code.update(saved)

    def entry(self, alg: AlgorithmRef) -> RegistryEntry:
        """按 AlgorithmId / 名称 / wire_code 查找条目"""
        if isinstance(alg, SchemeMetadata):
            alg = alg.id
        if isinstance(alg, AlgorithmId):
            code: Optional[int] = alg.wire_code
        elif isinstance(alg, int):
            code = alg
        else:
            code = self._by_name.get(alg)
            if code is None:
                code = _parse_code(alg)
        if code is None or code not in self._by_code:
            raise UnknownAlgorithmError(f"Unknown algorithm: {alg!r}")
        return self._by_code[code]

    def metadata(self, alg: AlgorithmRef) -> SchemeMetadata:
        """查找元数据"""
        return self.entry(alg).metadata

    def has(self, alg: AlgorithmRef) -> bool:
        """是否已注册"""
        try:
            self.entry(alg)
            return True
        except UnknownAlgorithmError:
            return False

    def _typed(self, alg: AlgorithmRef, kind: AlgorithmKind) -> RegistryEntry:
        entry = self.entry(alg)
        if entry.metadata.kind is not kind:
            raise WrongKindError(entry.metadata.name, kind.value, entry.metadata.kind.value)
        return entry

    def all_metadata(self, kind: Optional[AlgorithmKind] = None) -> List[SchemeMetadata]:
        """按 wire_code 排序的元数据列表"""
        return [
            self._by_code[code].metadata
            for code in sorted(self._by_code)
            if kind is None or self._by_code[code].metadata.kind is kind
        ]

    # ---------------------------------------------------------------- KEM 操作

    def kem_keygen(self, alg: AlgorithmRef, seed: bytes) -> KemKeyPair:
        """KEM 密钥生成（种子确定）"""
        entry = self._typed(alg, AlgorithmKind.KEM)
        meta = entry.metadata
        _check_len("seed", seed, SEED_LEN)
        self.counters.increment(meta.name, "keygen")
        public_key, secret_key = entry.provider.keygen(meta, seed)
        _check_len(f"{meta.name} public key", public_key, meta.pk_len)
        _check_len(f"{meta.name} secret key", secret_key, meta.sk_len)
        return KemKeyPair(public_key=public_key, secret_key=secret_key, alg=meta.id)

    def kem_encap(self, alg: AlgorithmRef, public_key: bytes, randomness: bytes) -> Tuple[bytes, bytes]:
        """KEM 封装，返回 (ciphertext, shared_secret)"""
        entry = self._typed(alg, AlgorithmKind.KEM)
        meta = entry.metadata
        _check_len(f"{meta.name} public key", public_key, meta.pk_len)
        _check_len("randomness", randomness, SEED_LEN)
        self.counters.increment(meta.name, "encap")
        ciphertext, shared_secret = entry.provider.encap(meta, public_key, randomness)
        _check_len(f"{meta.name} ciphertext", ciphertext, int(meta.ct_len or 0))
        _check_len(f"{meta.name} shared secret", shared_secret, SS_LEN)
        return ciphertext, shared_secret

    def kem_decap(self, alg: AlgorithmRef, secret_key: bytes, ciphertext: bytes) -> bytes:
        """KEM 解封装（对篡改密文返回确定性拒绝值）"""
        entry = self._typed(alg, AlgorithmKind.KEM)
        meta = entry.metadata
        _check_len(f"{meta.name} secret key", secret_key, meta.sk_len)
        _check_len(f"{meta.name} ciphertext", ciphertext, int(meta.ct_len or 0))
        self.counters.increment(meta.name, "decap")
        shared_secret = entry.provider.decap(meta, secret_key, ciphertext)
        _check_len(f"{meta.name} shared secret", shared_secret, SS_LEN)
        return shared_secret

    # ---------------------------------------------------------------- SIG 操作

    def sig_keygen(self, alg: AlgorithmRef, seed: bytes) -> SigKeyPair:
        """签名密钥生成（种子确定）"""
        entry = self._typed(alg, AlgorithmKind.SIG)
        meta = entry.metadata
        _check_len("seed", seed, SEED_LEN)
        self.counters.increment(meta.name, "keygen")
        public_key, secret_key = entry.provider.keygen(meta, seed)
        _check_len(f"{meta.name} public key", public_key, meta.pk_len)
        _check_len(f"{meta.name} secret key", secret_key, meta.sk_len)
        return SigKeyPair(public_key=public_key, secret_key=secret_key, alg=meta.id)

    def sig_sign(self, alg: AlgorithmRef, secret_key: bytes, message: bytes) -> bytes:
        """签名，输出严格 sig_len 字节"""
        entry = self._typed(alg, AlgorithmKind.SIG)
        meta = entry.metadata
        _check_len(f"{meta.name} secret key", secret_key, meta.sk_len)
        self.counters.increment(meta.name, "sign")
        signature = entry.provider.sign(meta, secret_key, message)
        _check_len(f"{meta.name} signature", signature, int(meta.sig_len or 0))
        return signature

    def sig_verify(self, alg: AlgorithmRef, public_key: bytes, message: bytes, signature: bytes) -> bool:
        """验签；内容不匹配返回 False，长度不符抛 WrongLengthError"""
        entry = self._typed(alg, AlgorithmKind.SIG)
        meta = entry.metadata
        _check_len(f"{meta.name} public key", public_key, meta.pk_len)
        _check_len(f"{meta.name} signature", signature, int(meta.sig_len or 0))
        self.counters.increment(meta.name, "verify")
        return bool(entry.provider.verify(meta, public_key, message, signature))

    # ---------------------------------------------------------------- 导出

    def dump_csv(self) -> str:
        """导出 CSV（含表头），每个算法一行"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(REGISTRY_CSV_HEADER)
        for meta in self.all_metadata():
            cost = meta.cost_units
            writer.writerow(
                [
                    f"0x{meta.wire_code:04x}",
                    meta.name,
                    meta.kind.value,
                    meta.pk_len,
                    meta.sk_len,
                    meta.ct_or_sig_len,
                    cost.keygen,
                    cost.encap_or_sign,
                    cost.decap_or_verify,
                ]
            )
        return buffer.getvalue()


def _parse_code(text: str) -> Optional[int]:
    """把 '0x0003' / '3' 解析为 wire_code；失败返回 None"""
    try:
        return int(text, 0)
    except (TypeError, ValueError):
        return None


def mock_metadata(
    kind: AlgorithmKind,
    name: str,
    wire_code: int,
    pk_len: int,
    sk_len: int,
    ct_or_sig_len: int,
    costs: Tuple[int, int, int],
    description: str = "",
) -> SchemeMetadata:
    """构建 mock 算法的元数据"""
    alg = AlgorithmId(kind=kind, name=name, wire_code=wire_code)
    cost_units = CostUnits(*costs)
    if kind is AlgorithmKind.KEM:
        return SchemeMetadata(
            id=alg,
            pk_len=pk_len,
            sk_len=sk_len,
            ct_len=ct_or_sig_len,
            ss_len=SS_LEN,
            cost_units=cost_units,
            description=description,
        )
    return SchemeMetadata(
        id=alg,
        pk_len=pk_len,
        sk_len=sk_len,
        sig_len=ct_or_sig_len,
        cost_units=cost_units,
        description=description,
    )


def build_default_registry(
    hashsig_height: int = 10,
    cost_overrides: Optional[Mapping[str, Tuple[int, int, int]]] = None,
    extra_schemes: Iterable[Tuple[SchemeMetadata, Union[KemProvider, SigProvider]]] = (),
) -> ProviderRegistry:
    """构建默认注册表：toy ML-KEM-512、toy WOTS+Merkle 以及全部 mock 方案

    Args:
        hashsig_height: toy 哈希签名的 Merkle 树高度
        cost_overrides: {name: (keygen, op, verify)} 覆盖表
        extra_schemes: 额外注册的 (metadata, provider)
    """
    # 延迟导入：toy 实现依赖本包的 base / exceptions
    from ..toy_hashsig.provider import ToyHashSigProvider
    from ..toy_mlkem.provider import ToyMlKemProvider

    registry = ProviderRegistry()
    mlkem = ToyMlKemProvider()
    registry.register(mlkem.default_metadata(), mlkem)
    hashsig = ToyHashSigProvider(height=hashsig_height)
    registry.register(hashsig.default_metadata(), hashsig)

    kem_provider, sig_provider = MockKemProvider(), MockSigProvider()
    for kind, name, code, pk_len, sk_len, size, costs, description in DEFAULT_MOCK_SCHEMES:
        meta = mock_metadata(kind, name, code, pk_len, sk_len, size, costs, description)
        registry.register(meta, kem_provider if kind is AlgorithmKind.KEM else sig_provider)

    for meta, provider in extra_schemes:
        registry.register(meta, provider)
    if cost_overrides:
        registry.apply_cost_overrides(cost_overrides)
    return registry


# 注册表单例管理器（避免使用全局变量）
class _RegistryManager:
    """注册表管理器（单例模式）"""

    _instance: Optional["_RegistryManager"] = None
    _registry: Optional[ProviderRegistry] = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def set_registry(self, registry: ProviderRegistry) -> None:
        """设置注册表实例"""
        self._registry = registry

    def get_registry(self) -> ProviderRegistry:
        """获取注册表实例；未设置时按当前配置懒加载默认注册表"""
        with self._lock:
            if self._registry is None:
                from ..config import get_config_or_default

                config = get_config_or_default()
                self._registry = build_default_registry(
                    hashsig_height=config.hashsig_height,
                    cost_overrides=config.cost_overrides,
                )
            return self._registry


_registry_manager = _RegistryManager()


def set_registry(registry: ProviderRegistry) -> None:
    """设置全局注册表"""
    _registry_manager.set_registry(registry)


def get_registry() -> ProviderRegistry:
    """获取全局注册表"""
    return _registry_manager.get_registry()
