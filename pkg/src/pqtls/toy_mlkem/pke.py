"""K-PKE：Module-LWE 公钥加密（CPA 安全）

keygen：Â ← XOF(ρ)，s, e ← CBD_η1，t̂ = Â∘ŝ + ê，pk = encode12(t̂) ‖ ρ；
encrypt：u = INTT(Âᵀ∘r̂) + e1，v = INTT(t̂ᵀ∘r̂) + e2 + decompress_1(m)，
         ct = compress_du(u) ‖ compress_dv(v)；
decrypt：m = compress_1(v′ − INTT(ŝᵀ∘NTT(u′)))。
"""

import hashlib
from typing import Tuple

from ..crypto_suite.exceptions import WrongLengthError
from .encoding import (
    byte_decode,
    byte_encode,
    compress,
    compress_poly,
    decode_poly12,
    decompress,
    decompress_poly,
    encode_poly12,
)
from .params import CT_LEN, DU, DV, ETA1, ETA2, K, PK_LEN, POLY_BYTES, SK_PKE_LEN
from .poly import (
    Polynomial,
    PolyMatrix,
    PolyVec,
    matrix_vec_mul,
    ntt_forward,
    ntt_inverse,
    polyvec_add,
    polyvec_dot,
    polyvec_ntt,
    polyvec_ntt_inverse,
)
from .sampling import prf, sample_cbd, sample_uniform, xof_stream


def _check(what: str, data: bytes, expected: int) -> None:
    if len(data) != expected:
        raise WrongLengthError(what, expected, len(data))


def expand_matrix(rho: bytes) -> PolyMatrix:
    """由 ρ 生成 NTT 域矩阵 Â"""
    return tuple(tuple(sample_uniform(xof_stream(rho, i, j)) for j in range(K)) for i in range(K))


def pke_keygen(seed: bytes) -> Tuple[bytes, bytes]:
    """K-PKE 密钥生成，返回 (pk, sk_pke)"""
    _check("K-PKE seed", seed, 32)
    digest = hashlib.sha3_512(seed + bytes([K])).digest()
    rho, sigma = digest[:32], digest[32:]
    a_hat = expand_matrix(rho)
    s = tuple(sample_cbd(ETA1, prf(ETA1, sigma, i)) for i in range(K))
    e = tuple(sample_cbd(ETA1, prf(ETA1, sigma, K + i)) for i in range(K))
    s_hat = polyvec_ntt(s)
    t_hat = polyvec_add(matrix_vec_mul(a_hat, s_hat), polyvec_ntt(e))
    public_key = b"".join(encode_poly12(p) for p in t_hat) + rho
    secret_key = b"".join(encode_poly12(p) for p in s_hat)
    return public_key, secret_key


def _decode_vec12(data: bytes) -> PolyVec:
    return tuple(decode_poly12(data[i * POLY_BYTES:(i + 1) * POLY_BYTES]) for i in range(K))


def pke_encrypt(public_key: bytes, message: bytes, coins: bytes) -> bytes:
    """K-PKE 加密 32 字节消息"""
    _check("K-PKE public key", public_key, PK_LEN)
    _check("K-PKE message", message, 32)
    _check("K-PKE coins", coins, 32)
    t_hat = _decode_vec12(public_key[:SK_PKE_LEN])
    a_hat = expand_matrix(public_key[SK_PKE_LEN:])

    r = tuple(sample_cbd(ETA1, prf(ETA1, coins, i)) for i in range(K))
    e1 = tuple(sample_cbd(ETA2, prf(ETA2, coins, K + i)) for i in range(K))
    e2 = sample_cbd(ETA2, prf(ETA2, coins, 2 * K))
    r_hat = polyvec_ntt(r)

    u = polyvec_add(polyvec_ntt_inverse(matrix_vec_mul(a_hat, r_hat, transpose=True)), e1)
    mu = Polynomial.from_coeffs(decompress(byte_decode(message, 1), 1))
    v = ntt_inverse(polyvec_dot(t_hat, r_hat)) + e2 + mu

    return b"".join(compress_poly(p, DU) for p in u) + compress_poly(v, DV)


def pke_decrypt(secret_key: bytes, ciphertext: bytes) -> bytes:
    """K-PKE 解密，返回 32 字节消息"""
    _check("K-PKE secret key", secret_key, SK_PKE_LEN)
    _check("K-PKE ciphertext", ciphertext, CT_LEN)
    u_bytes = 32 * DU
    u = tuple(decompress_poly(ciphertext[i * u_bytes:(i + 1) * u_bytes], DU) for i in range(K))
    v = decompress_poly(ciphertext[K * u_bytes:], DV)
    s_hat = _decode_vec12(secret_key)
    w = v - ntt_inverse(polyvec_dot(s_hat, tuple(ntt_forward(p) for p in u)))
    return byte_encode(compress(w.coeffs, 1), 1)
