"""多项式与 NTT

环 Z_q[X]/(X^256 + 1) 上的多项式运算。NTT 为 7 层不完全变换：
输出表示 p 对 128 个二次式 (X² − ζ^(2·br7(i)+1)) 取模的结果，
系数按标准的比特反转布局排列。

每层蝶形用 numpy 整层向量化，系数在每次公开操作后都规约到 [0, q)。
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Tuple

import numpy as np

from ..crypto_suite.exceptions import DomainMismatchError, WrongLengthError
from .params import GAMMAS, N, N_INV_HALF, Q, ZETAS


class Domain(str, Enum):
    """多项式所在域"""

    NORMAL = "normal"
    NTT = "ntt"


def _as_coeffs(values: Iterable[int]) -> np.ndarray:
    coeffs = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.int64)
    if coeffs.shape != (N,):
        raise WrongLengthError("polynomial coefficients", N, int(coeffs.size))
    coeffs = np.mod(coeffs, Q)
    coeffs.setflags(write=False)
    return coeffs


@dataclass(frozen=True, eq=False)
class Polynomial:
    """256 个系数的多项式（不可变）"""

    coeffs: np.ndarray
    domain: Domain = Domain.NORMAL

    @classmethod
    def from_coeffs(cls, values: Iterable[int], domain: Domain = Domain.NORMAL) -> "Polynomial":
        """由任意整数序列构建（自动规约 mod q）"""
        return cls(_as_coeffs(values), domain)

    @classmethod
    def zero(cls, domain: Domain = Domain.NORMAL) -> "Polynomial":
        """零多项式"""
        return cls.from_coeffs(np.zeros(N, dtype=np.int64), domain)

    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        """常数多项式"""
        coeffs = np.zeros(N, dtype=np.int64)
        coeffs[0] = value
        return cls.from_coeffs(coeffs)

    def __post_init__(self) -> None:
        if __debug__ and (self.coeffs.min() < 0 or self.coeffs.max() >= Q):
            raise ValueError("polynomial coefficient out of [0, q)")

    def _same_domain(self, other: "Polynomial") -> None:
        if self.domain is not other.domain:
            raise DomainMismatchError(f"cannot combine {self.domain.value} with {other.domain.value}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._same_domain(other)
        return Polynomial.from_coeffs(self.coeffs + other.coeffs, self.domain)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._same_domain(other)
        return Polynomial.from_coeffs(self.coeffs - other.coeffs, self.domain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.domain is other.domain and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.domain, self.coeffs.tobytes()))

    def to_list(self) -> list:
        """系数列表（Python int）"""
        return [int(c) for c in self.coeffs]


def ntt_forward(p: Polynomial) -> Polynomial:
    """正向 NTT（normal → ntt）

    Raises:
        DomainMismatchError: 输入已在 NTT 域
    """
    if p.domain is not Domain.NORMAL:
        raise DomainMismatchError("ntt_forward expects a polynomial in the normal domain")
    f = p.coeffs.copy()
    k = 1
    length = 128
    while length >= 2:
        blocks = N // (2 * length)
        view = f.reshape(blocks, 2, length)
        zetas = ZETAS[k:k + blocks].reshape(blocks, 1)
        k += blocks
        t = (zetas * view[:, 1, :]) % Q
        lo = (view[:, 0, :] + t) % Q
        hi = (view[:, 0, :] - t) % Q
        view[:, 0, :] = lo
        view[:, 1, :] = hi
        length //= 2
    return Polynomial.from_coeffs(f, Domain.NTT)


def ntt_inverse(p: Polynomial) -> Polynomial:
    """逆 NTT（ntt → normal），包含 (n/2)^-1 缩放

    Raises:
        DomainMismatchError: 输入不在 NTT 域
    """
    if p.domain is not Domain.NTT:
        raise DomainMismatchError("ntt_inverse expects a polynomial in the ntt domain")
    f = p.coeffs.copy()
    k = 127
    length = 2
    while length <= 128:
        blocks = N // (2 * length)
        view = f.reshape(blocks, 2, length)
        # 块 b 使用 ZETAS[k - b]
        zetas = ZETAS[k - blocks + 1:k + 1][::-1].reshape(blocks, 1)
        k -= blocks
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] = (lo + hi) % Q
        view[:, 1, :] = (zetas * ((hi - lo) % Q)) % Q
        length *= 2
    return Polynomial.from_coeffs((f * N_INV_HALF) % Q, Domain.NORMAL)


def pointwise_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """NTT 域乘法（基乘）

    对每个 i：(a0+a1X)(b0+b1X) mod (X² − z_i) = (a0b0 + a1b1·z_i) + (a0b1 + a1b0)X
    """
    if a.domain is not Domain.NTT or b.domain is not Domain.NTT:
        raise DomainMismatchError("pointwise_mul expects two polynomials in the ntt domain")
    pa = a.coeffs.reshape(128, 2)
    pb = b.coeffs.reshape(128, 2)
    out = np.empty((128, 2), dtype=np.int64)
    out[:, 0] = (pa[:, 0] * pb[:, 0] + ((pa[:, 1] * pb[:, 1]) % Q) * GAMMAS) % Q
    out[:, 1] = (pa[:, 0] * pb[:, 1] + pa[:, 1] * pb[:, 0]) % Q
    return Polynomial.from_coeffs(out.reshape(N), Domain.NTT)


# ---------------------------------------------------------------- PolyVec / PolyMatrix

PolyVec = Tuple[Polynomial, ...]
PolyMatrix = Tuple[PolyVec, ...]


def _shared_domain(polys: Sequence[Polynomial]) -> Domain:
    domains = {p.domain for p in polys}
    if len(domains) != 1:
        raise DomainMismatchError("all entries of a vector must share the same domain")
    return domains.pop()


def polyvec_ntt(vec: PolyVec) -> PolyVec:
    """向量逐项 NTT"""
    _shared_domain(vec)
    return tuple(ntt_forward(p) for p in vec)


def polyvec_ntt_inverse(vec: PolyVec) -> PolyVec:
    """向量逐项逆 NTT"""
    _shared_domain(vec)
    return tuple(ntt_inverse(p) for p in vec)


def polyvec_add(a: PolyVec, b: PolyVec) -> PolyVec:
    """向量加法"""
    return tuple(x + y for x, y in zip(a, b))


def polyvec_dot(a: PolyVec, b: PolyVec) -> Polynomial:
    """NTT 域内积 Σ a_i ∘ b_i"""
    if _shared_domain(a) is not Domain.NTT or _shared_domain(b) is not Domain.NTT:
        raise DomainMismatchError("polyvec_dot expects ntt-domain vectors")
    acc = np.zeros(N, dtype=np.int64)
    for x, y in zip(a, b):
        acc += pointwise_mul(x, y).coeffs
    return Polynomial.from_coeffs(acc, Domain.NTT)


def matrix_vec_mul(matrix: PolyMatrix, vec: PolyVec, transpose: bool = False) -> PolyVec:
    """NTT 域矩阵 × 向量（transpose=True 时使用 Âᵀ）"""
    size = len(vec)
    if transpose:
        rows = tuple(tuple(matrix[j][i] for j in range(size)) for i in range(size))
    else:
        rows = matrix
    return tuple(polyvec_dot(row, vec) for row in rows)
