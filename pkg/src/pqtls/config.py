"""配置：环境变量 → PQTLSConfig，以及进程内的当前配置"""

import logging
import os
from typing import Dict, Optional, Protocol, Tuple

from pydantic import BaseModel

logger = logging.getLogger(__name__)

__all__ = [
    "Config",
    "PQTLSConfig",
    "set_config",
    "get_config",
    "get_config_or_default",
    "parse_cost_overrides",
]


class Config(Protocol):
    """核心包读取的配置字段"""

    @property
    def timeout_ms(self) -> int:
        """客户端握手超时（毫秒）"""
        ...  # pylint: disable=unnecessary-ellipsis

    @property
    def unit_time_ns(self) -> int:
        """建模模式下每个 cost unit 对应的时间（纳秒）"""
        ...  # pylint: disable=unnecessary-ellipsis

    @property
    def hashsig_height(self) -> int:
        """toy 哈希签名 Merkle 树高度"""
        ...  # pylint: disable=unnecessary-ellipsis

    @property
    def cost_overrides(self) -> Dict[str, Tuple[int, int, int]]:
        """算法 cost_units 覆盖表 {name: (keygen, op, verify)}"""
        ...  # pylint: disable=unnecessary-ellipsis


class _ConfigHolder:
    """当前配置（单例）；未设置时 current 为 None"""

    _instance: Optional["_ConfigHolder"] = None
    current: Optional[Config] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance


_holder = _ConfigHolder()


def set_config(config: Config) -> None:
    """设置当前配置"""
    _holder.current = config


def get_config() -> Config:
    """获取当前配置

    Raises:
        RuntimeError: 尚未调用 set_config()
    """
    if _holder.current is None:
        raise RuntimeError("PQTLS config not initialized; the CLI calls set_config() at startup")
    return _holder.current


def get_config_or_default() -> Config:
    """库方式调用时使用：未设置配置就用默认值"""
    return _holder.current if _holder.current is not None else PQTLSConfig()


def parse_cost_overrides(raw: Optional[str]) -> Dict[str, Tuple[int, int, int]]:
    """解析 cost 覆盖字符串

    格式：`name=keygen:op:verify;name=keygen:op:verify`，例如
    `sig.mock.sphincs128s=30000:60000:1500`。

    Raises:
        ValueError: 格式错误或数值为负
    """
    overrides: Dict[str, Tuple[int, int, int]] = {}
    for item in filter(None, (part.strip() for part in (raw or "").split(";"))):
        name, sep, values = item.partition("=")
        parts = values.split(":")
        if not sep or len(parts) != 3:
            raise ValueError(f"Invalid cost override entry: {item!r}")
        keygen, op, verify = (int(p) for p in parts)
        if min(keygen, op, verify) < 0:
            raise ValueError(f"Cost units must be non-negative: {item!r}")
        overrides[name.strip()] = (keygen, op, verify)
    return overrides


def _env(name: str) -> Optional[str]:
    """读取环境变量；未设置或全是空白时返回 None"""
    value = os.getenv(name, "").strip()
    return value or None


def _positive_int_env(name: str) -> Optional[int]:
    raw = _env(name)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Invalid integer in {name}: {raw!r}, ignored")
        return None
    return value if value > 0 else None


HASHSIG_HEIGHT_RANGE = (2, 16)


class PQTLSConfig(BaseModel):
    """PQTLS 配置实现（与命令行框架无关，实现 Config Protocol）"""

    timeout_ms: int = 10_000
    unit_time_ns: int = 1_000  # 建模模式：1 µs / unit
    hashsig_height: int = 10  # 1024 个签名，5 秒压测不会耗尽
    server_subject: str = "pqtls-server"
    database_url: Optional[str] = None  # 设置后才持久化压测结果
    cost_overrides: Dict[str, Tuple[int, int, int]] = {}
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "PQTLSConfig":
        """读取 PQTLS_* 环境变量；缺失或无效的项使用字段默认值"""
        values: Dict[str, object] = {}

        for field_name in ("timeout_ms", "unit_time_ns"):
            number = _positive_int_env(f"PQTLS_{field_name.upper()}")
            if number is not None:
                values[field_name] = number

        height = _positive_int_env("PQTLS_HASHSIG_HEIGHT")
        if height is not None:
            low, high = HASHSIG_HEIGHT_RANGE
            values["hashsig_height"] = min(max(height, low), high)

        for field_name in ("server_subject", "database_url"):
            text = _env(f"PQTLS_{field_name.upper()}")
            if text is not None:
                values[field_name] = text

        log_level = _env("PQTLS_LOG_LEVEL")
        if log_level is not None:
            values["log_level"] = log_level.upper()

        try:
            values["cost_overrides"] = parse_cost_overrides(_env("PQTLS_COST_OVERRIDES"))
        except ValueError as e:
            logger.warning(f"Ignoring PQTLS_COST_OVERRIDES: {e}")

        return cls(**values)
