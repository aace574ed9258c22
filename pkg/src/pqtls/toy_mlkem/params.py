"""toy ML-KEM-512 参数

k 是模块级常量（level-1 形状），不支持运行时切换。
"""

import numpy as np

N = 256
Q = 3329
K = 2
ETA1 = 3
ETA2 = 2
DU = 10
DV = 4
ZETA = 17  # 模 3329 的 256 次本原单位根

# 派生尺寸
POLY_BYTES = 12 * N // 8  # 384
PK_LEN = K * POLY_BYTES + 32  # 800
SK_PKE_LEN = K * POLY_BYTES  # 768
SK_LEN = SK_PKE_LEN + PK_LEN + 32 + 32  # 1632
CT_LEN = (DU * K * N + DV * N) // 8  # 768
SS_LEN = 32


def bitrev7(value: int) -> int:
    """7 位比特反转"""
    return int(f"{value:07b}"[::-1], 2)


def _check_parameters() -> None:
    """启动时校验单位根与派生尺寸"""
    if pow(ZETA, 128, Q) != Q - 1 or pow(ZETA, 256, Q) != 1:
        raise RuntimeError(f"{ZETA} is not a primitive 256th root of unity mod {Q}")
    if PK_LEN != 800 or CT_LEN != 768:
        raise RuntimeError(f"Unexpected ML-KEM-512 sizes: pk={PK_LEN} ct={CT_LEN}")


_check_parameters()

# NTT 蝶形使用的 ζ^br7(i)，以及基乘使用的 ζ^(2·br7(i)+1)
ZETAS = np.array([pow(ZETA, bitrev7(i), Q) for i in range(128)], dtype=np.int64)
GAMMAS = np.array([pow(ZETA, 2 * bitrev7(i) + 1, Q) for i in range(128)], dtype=np.int64)
N_INV_HALF = pow(128, -1, Q)  # 3303：逆变换的 (n/2)^-1 缩放
