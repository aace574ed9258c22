"""toy ML-KEM-512 模块

- params: 参数与派生尺寸
- poly: 多项式、NTT、基乘
- sampling: 均匀采样与中心二项采样
- encoding: 打包 / 压缩
- pke: K-PKE
- kem: FO 变换 + 隐式拒绝
- provider: 注册表 provider
"""

from .encoding import byte_decode, byte_encode, compress, decompress
from .kem import kem512_decap, kem512_encap, kem512_keygen, rejection_secret
from .params import CT_LEN, PK_LEN, Q, SK_LEN
from .pke import pke_decrypt, pke_encrypt, pke_keygen
from .poly import Domain, Polynomial, ntt_forward, ntt_inverse, pointwise_mul
from .provider import TOY_MLKEM_NAME, ToyMlKemProvider
from .sampling import prf, sample_cbd, sample_uniform, xof_stream

__all__ = [
    "byte_decode",
    "byte_encode",
    "compress",
    "decompress",
    "kem512_keygen",
    "kem512_encap",
    "kem512_decap",
    "rejection_secret",
    "CT_LEN",
    "PK_LEN",
    "Q",
    "SK_LEN",
    "pke_keygen",
    "pke_encrypt",
    "pke_decrypt",
    "Domain",
    "Polynomial",
    "ntt_forward",
    "ntt_inverse",
    "pointwise_mul",
    "TOY_MLKEM_NAME",
    "ToyMlKemProvider",
    "prf",
    "sample_cbd",
    "sample_uniform",
    "xof_stream",
]
