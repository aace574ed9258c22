"""压测类型定义

BenchPlan 为 pydantic 模型；pydantic 的校验错误统一转换为 PlanValidationError。
"""

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..crypto_suite.exceptions import CryptoSuiteError
from ..crypto_suite.registry import CONTROL_PAIR_NAMES, ProviderRegistry
from ..crypto_suite.types import AlgorithmKind, SchemeMetadata
from .exceptions import PlanValidationError

DEFAULT_KDF_COST_UNITS = 2


class BenchMode(str, Enum):
    """压测模式"""

    LIVE = "live"
    MODELED = "modeled"


class NetworkModel(BaseModel):
    """建模模式的网络参数"""

    rtt_s: float = Field(default=0.0, ge=0)
    bandwidth_Bps: Optional[float] = Field(default=None, gt=0)  # None 表示不限


class BenchPlan(BaseModel):
    """压测计划

    pairs / control_pair 中的算法可写名称或 wire_code（"0x0003"），由 resolve() 统一解析。
    """

    pairs: List[Tuple[str, str]] = Field(default_factory=list)
    control_pair: Tuple[str, str] = CONTROL_PAIR_NAMES
    clients: int = Field(default=8, ge=1)
    duration_s: float = Field(default=5.0, gt=0)
    warmup_s: float = Field(default=1.0, ge=0)
    mode: BenchMode = BenchMode.MODELED
    network: NetworkModel = Field(default_factory=NetworkModel)
    repetitions: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    seed: int = 0
    host: str = "self"
    unit_time_ns: float = Field(default=1000.0, gt=0)
    kdf_cost_units: int = Field(default=DEFAULT_KDF_COST_UNITS, ge=0)
    cost_overrides: Dict[str, Tuple[int, int, int]] = Field(default_factory=dict)
    acceleration: Dict[str, float] = Field(default_factory=dict)
    hashsig_height: int = Field(default=10, ge=1, le=20)
    in_process: bool = False
    identity_seed_hex: str = "00" * 32
    root_sig_alg: Optional[str] = None
    subject: str = "pqtls-server"

    @field_validator("identity_seed_hex")
    @classmethod
    def _check_identity_seed(cls, value: str) -> str:
        if len(bytes.fromhex(value)) != 32:
            raise ValueError("identity seed must be 32 bytes of hex")
        return value

    @field_validator("cost_overrides")
    @classmethod
    def _check_costs(cls, value: Dict[str, Tuple[int, int, int]]) -> Dict[str, Tuple[int, int, int]]:
        for name, costs in value.items():
            if min(costs) < 0:
                raise ValueError(f"cost override for {name} must be non-negative")
        return value

    @field_validator("acceleration")
    @classmethod
    def _check_acceleration(cls, value: Dict[str, float]) -> Dict[str, float]:
        for name, factor in value.items():
            if factor <= 0:
                raise ValueError(f"acceleration factor for {name} must be positive")
        return value

    @model_validator(mode="after")
    def _check_host(self) -> "BenchPlan":
        if self.mode is BenchMode.LIVE and not self.host:
            raise ValueError("live mode requires host (address or 'self')")
        return self

    @classmethod
    def create(cls, **kwargs: Any) -> "BenchPlan":
        """构建计划，校验失败抛 PlanValidationError"""
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise PlanValidationError(f"Invalid bench plan: {e}") from e

    def all_pairs(self) -> List[Tuple[str, str]]:
        """对照组在前，其余按计划顺序去重"""
        ordered = [tuple(self.control_pair)]
        for pair in self.pairs:
            if tuple(pair) not in ordered:
                ordered.append(tuple(pair))
        return ordered  # type: ignore[return-value]

    def resolve(self, registry: ProviderRegistry) -> List[Tuple[int, int]]:
        """把 all_pairs() 解析为 wire_code 对并检查类型

        Raises:
            PlanValidationError: 未注册或类型不符
        """
        resolved = []
        for kem, sig in self.all_pairs():
            try:
                kem_meta, sig_meta = registry.metadata(kem), registry.metadata(sig)
            except CryptoSuiteError as e:
                raise PlanValidationError(f"Pair {kem}:{sig}: {e}") from e
            if kem_meta.kind is not AlgorithmKind.KEM or sig_meta.kind is not AlgorithmKind.SIG:
                raise PlanValidationError(f"Pair {kem}:{sig} must be KEM:SIG")
            resolved.append((kem_meta.wire_code, sig_meta.wire_code))
        return resolved

    def resolve_root(self, registry: ProviderRegistry) -> Optional[SchemeMetadata]:
        """root_sig_alg 对应的元数据；未指定时返回 None（root 与服务端签名算法相同）

        Raises:
            PlanValidationError: 未注册或不是签名算法
        """
        if not self.root_sig_alg:
            return None
        try:
            meta = registry.metadata(self.root_sig_alg)
        except CryptoSuiteError as e:
            raise PlanValidationError(f"Root signature algorithm: {e}") from e
        if meta.kind is not AlgorithmKind.SIG:
            raise PlanValidationError(f"Root algorithm {meta.name} must be a signature scheme")
        return meta

    def echo(self) -> Dict[str, Any]:
        """报告中回显的计划（JSON 友好）"""
        return self.model_dump(mode="json")


def pair_label(kem_name: str, sig_name: str) -> str:
    """kem.mock.kyber768 + sig.mock.falcon512 → kyber768-falcon512"""
    return f"{kem_name.rsplit('.', 1)[-1]}-{sig_name.rsplit('.', 1)[-1]}"


@dataclass
class PairResult:
    """单个算法对的结果行"""

    pair: str
    kem: str
    sig: str
    mode: BenchMode
    completed: int
    cps: float
    ratio_to_control: float = 0.0
    p50_ns: int = 0
    p95_ns: int = 0
    bytes_per_handshake: int = 0
    failed: int = 0
    degraded: bool = False
    is_control: bool = False
    repetitions: List[float] = field(default_factory=list)
    client_completed: List[int] = field(default_factory=list)


@dataclass
class BenchReport:
    """压测报告；rows[0] 总是对照组"""

    mode: BenchMode
    plan: Dict[str, Any]
    seed: int
    wall_clock_s: float
    rows: List[PairResult] = field(default_factory=list)

    @property
    def control(self) -> Optional[PairResult]:
        """对照组行"""
        return next((row for row in self.rows if row.is_control), None)

    @property
    def total_completed(self) -> int:
        """所有行完成数之和"""
        return sum(row.completed for row in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        data = asdict(self)
        data["mode"] = self.mode.value
        for row in data["rows"]:
            row["mode"] = row["mode"].value if isinstance(row["mode"], Enum) else row["mode"]
        return data


def apply_ratios(rows: List[PairResult]) -> None:
    """以对照组为基准计算 ratio_to_control；对照组自身恰为 1.0"""
    control = next((row for row in rows if row.is_control), None)
    for row in rows:
        if row.is_control:
            row.ratio_to_control = 1.0
        elif control is None or control.cps <= 0:
            row.ratio_to_control = 0.0
        else:
            row.ratio_to_control = row.cps / control.cps
