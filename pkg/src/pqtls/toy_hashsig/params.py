"""WOTS / Merkle 参数"""

import math

N_BYTES = 32  # 哈希输出字节数
W = 16
LOG_W = 4
LEN1 = math.ceil(8 * N_BYTES / LOG_W)  # 64
LEN2 = math.floor(math.log2(LEN1 * (W - 1)) / LOG_W) + 1  # 3
LEN = LEN1 + LEN2  # 67

DEFAULT_HEIGHT = 10
MIN_HEIGHT = 1
MAX_HEIGHT = 20

LEAF_INDEX_BYTES = 4

# 域分隔前缀
LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"
SECRET_PREFIX = b"pqtls.wots.sk"


def signature_length(height: int) -> int:
    """sig_len = 4 + len·n + h·n（h=10 时为 2468）"""
    return LEAF_INDEX_BYTES + LEN * N_BYTES + height * N_BYTES


def _check_parameters() -> None:
    if (LEN1, LEN2, LEN) != (64, 3, 67):
        raise RuntimeError(f"Unexpected WOTS parameters: len1={LEN1} len2={LEN2}")
    if signature_length(DEFAULT_HEIGHT) != 2468:
        raise RuntimeError("Unexpected default signature length")


_check_parameters()
