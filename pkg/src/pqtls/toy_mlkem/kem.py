"""toy ML-KEM-512：在 K-PKE 之上做带隐式拒绝的 FO 变换

sk = sk_pke ‖ pk ‖ H(pk) ‖ z
encap：(K, r) = G(m ‖ H(pk))，ct = pke_encrypt(pk, m, r)，ss = K
decap：m′ = pke_decrypt，重算 (K′, r′) 并重新加密；ct 完全一致返回 K′，
       否则返回 SHAKE256(z ‖ ct, 32)。篡改的密文永远不会导致异常。
"""

import hashlib
import hmac
from typing import Tuple

from ..crypto_suite.exceptions import WrongLengthError
from .params import CT_LEN, PK_LEN, SK_LEN, SK_PKE_LEN, SS_LEN
from .pke import pke_decrypt, pke_encrypt, pke_keygen


def hash_g(data: bytes) -> Tuple[bytes, bytes]:
    """G = SHA3-512，按 32/32 拆分"""
    digest = hashlib.sha3_512(data).digest()
    return digest[:32], digest[32:]


def hash_h(data: bytes) -> bytes:
    """H = SHA3-256"""
    return hashlib.sha3_256(data).digest()


def rejection_secret(z: bytes, ciphertext: bytes) -> bytes:
    """隐式拒绝值 J(z, ct) = SHAKE256(z ‖ ct, 32)"""
    return hashlib.shake_256(z + ciphertext).digest(SS_LEN)


def _check(what: str, data: bytes, expected: int) -> None:
    if len(data) != expected:
        raise WrongLengthError(what, expected, len(data))


def kem512_keygen(seed: bytes) -> Tuple[bytes, bytes]:
    """由 32 字节种子派生 (d, z) 并生成 (pk, sk)"""
    _check("ML-KEM seed", seed, 32)
    expanded = hashlib.sha3_512(seed).digest()
    d, z = expanded[:32], expanded[32:]
    public_key, sk_pke = pke_keygen(d)
    secret_key = sk_pke + public_key + hash_h(public_key) + z
    return public_key, secret_key


def kem512_encap(public_key: bytes, randomness: bytes) -> Tuple[bytes, bytes]:
    """封装，randomness 即消息 m；返回 (ct, ss)"""
    _check("ML-KEM public key", public_key, PK_LEN)
    _check("ML-KEM randomness", randomness, 32)
    shared_secret, coins = hash_g(randomness + hash_h(public_key))
    ciphertext = pke_encrypt(public_key, randomness, coins)
    return ciphertext, shared_secret


def kem512_decap(secret_key: bytes, ciphertext: bytes) -> bytes:
    """解封装（隐式拒绝）"""
    _check("ML-KEM secret key", secret_key, SK_LEN)
    _check("ML-KEM ciphertext", ciphertext, CT_LEN)
    sk_pke = secret_key[:SK_PKE_LEN]
    public_key = secret_key[SK_PKE_LEN:SK_PKE_LEN + PK_LEN]
    pk_hash = secret_key[SK_PKE_LEN + PK_LEN:SK_PKE_LEN + PK_LEN + 32]
    z = secret_key[SK_PKE_LEN + PK_LEN + 32:]

    message = pke_decrypt(sk_pke, ciphertext)
    shared_secret, coins = hash_g(message + pk_hash)
    if hmac.compare_digest(pke_encrypt(public_key, message, coins), ciphertext):
        return shared_secret
    return rejection_secret(z, ciphertext)
