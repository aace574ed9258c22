"""命令之间共享的解析工具和退出码"""

from typing import List, Tuple

import click

from pqtls.crypto_suite import AlgorithmKind, ProviderRegistry, UnknownAlgorithmError

EXIT_OK = 0
EXIT_PLAN_ERROR = 2
EXIT_TRANSPORT_ERROR = 3


def split_list(raw: str) -> List[str]:
    """逗号分隔列表，忽略空项"""
    return [item.strip() for item in raw.split(",") if item.strip()]


def parse_pair(raw: str) -> Tuple[str, str]:
    """解析 kem:sig

    Raises:
        click.BadParameter: 格式错误
    """
    kem, sep, sig = raw.partition(":")
    if not sep or not kem.strip() or not sig.strip():
        raise click.BadParameter(f"expected KEM:SIG, got {raw!r}")
    return kem.strip(), sig.strip()


def parse_hex(raw: str, what: str, length: int = 32) -> bytes:
    """解析定长十六进制参数"""
    try:
        value = bytes.fromhex(raw)
    except ValueError as e:
        raise click.BadParameter(f"{what} is not valid hex: {e}") from e
    if len(value) != length:
        raise click.BadParameter(f"{what} must be {length} bytes, got {len(value)}")
    return value


def resolve_codes(registry: ProviderRegistry, names: List[str], kind: AlgorithmKind) -> List[int]:
    """名称或 wire_code 列表 → wire_code 列表"""
    codes = []
    for name in names:
        try:
            meta = registry.metadata(name)
        except UnknownAlgorithmError as e:
            raise click.BadParameter(str(e)) from e
        if meta.kind is not kind:
            raise click.BadParameter(f"{meta.name} is a {meta.kind.value}, expected {kind.value}")
        codes.append(meta.wire_code)
    return codes
