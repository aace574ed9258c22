"""测试公共 fixture"""

import pytest

from pqtls.crypto_suite import build_default_registry, set_registry
from pqtls.handshake import ClientConfig, build_server_identity

# 小树高：keygen 只需几万次哈希，足够单个测试内的签名次数
SMALL_HEIGHT = 6

SEED_A = bytes(range(32))
SEED_B = bytes(range(32, 64))


@pytest.fixture
def registry():
    """每个测试独立的注册表（toy 哈希签名状态互不干扰）"""
    reg = build_default_registry(hashsig_height=SMALL_HEIGHT)
    set_registry(reg)
    return reg


@pytest.fixture
def make_identity(registry):
    """按算法名称构建服务端身份与信任锚"""

    def _make(kem: str, sig: str, seed: bytes = SEED_A, root=None):
        return build_server_identity([kem], [sig], seed, subject="test-server", root_alg=root, registry=registry)

    return _make


@pytest.fixture
def client_config_for(registry):
    """按算法名称构建客户端配置"""

    def _make(kem: str, sigs, anchor, timeout_ms=None) -> ClientConfig:
        if isinstance(sigs, str):
            sigs = [sigs]
        return ClientConfig(
            kem_alg=registry.metadata(kem).wire_code,
            sig_algs=[registry.metadata(s).wire_code for s in sigs],
            trust_anchor=anchor,
            timeout_ms=timeout_ms,
        )

    return _make
