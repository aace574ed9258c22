"""toy 哈希签名模块（WOTS 链 + 单棵 Merkle 树）"""

from .params import DEFAULT_HEIGHT, LEN, LEN1, LEN2, N_BYTES, W, signature_length
from .provider import TOY_HASHSIG_NAME, ToyHashSigProvider, default_costs
from .wots import (
    chain,
    chain_address,
    hash_counter,
    leaf_secrets,
    message_digits,
    wots_public_key,
    wots_recover_pk,
    wots_sign,
)
from .xmss import HashSigSignature, MerkleState, xmss_keygen, xmss_sign, xmss_verify

__all__ = [
    "DEFAULT_HEIGHT",
    "LEN",
    "LEN1",
    "LEN2",
    "N_BYTES",
    "W",
    "signature_length",
    "TOY_HASHSIG_NAME",
    "ToyHashSigProvider",
    "default_costs",
    "chain",
    "chain_address",
    "hash_counter",
    "leaf_secrets",
    "message_digits",
    "wots_public_key",
    "wots_recover_pk",
    "wots_sign",
    "HashSigSignature",
    "MerkleState",
    "xmss_keygen",
    "xmss_sign",
    "xmss_verify",
]
