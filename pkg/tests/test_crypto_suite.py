"""注册表、mock provider 与 liboqs 适配测试"""

import hashlib
import random
import time
from types import SimpleNamespace

import numpy as np
import pytest

from pqtls.crypto_suite import (
    CONTROL_PAIR_NAMES,
    REGISTRY_CSV_HEADER,
    AlgorithmId,
    AlgorithmKind,
    CostUnits,
    MockKemProvider,
    MockSigProvider,
    ProviderRegistry,
    UnknownAlgorithmError,
    WrongKindError,
    WrongLengthError,
    mock_metadata,
)
from pqtls.crypto_suite import oqs_adapter
from pqtls.crypto_suite.primitives import burn_cost, burn_counter

SEED = bytes(range(32))
RAND = bytes(range(100, 132))

MOCK_KEMS = ["kem.mock.kyber512", "kem.mock.kyber768", "kem.mock.kyber1024", "kem.mock.ecdhe_x25519"]
MOCK_SIGS = [
    "sig.mock.dilithium2",
    "sig.mock.dilithium3",
    "sig.mock.falcon512",
    "sig.mock.falcon1024",
    "sig.mock.sphincs128s",
    "sig.mock.sphincs128f",
    "sig.mock.rsa2048",
]


class TestRegistryLookup:
    """查找与注册"""

    def test_default_sizes(self, registry):
        kyber = registry.metadata("kem.mock.kyber768")
        assert (kyber.pk_len, kyber.ct_len, kyber.ss_len) == (1184, 1088, 32)
        falcon = registry.metadata("sig.mock.falcon512")
        assert (falcon.pk_len, falcon.sig_len) == (897, 666)
        assert registry.metadata("sig.mock.sphincs128s").sig_len == 7856
        toy = registry.metadata("kem.toy_mlkem512")
        assert (toy.wire_code, toy.pk_len, toy.sk_len, toy.ct_len) == (0x0001, 800, 1632, 768)
        hashsig = registry.metadata("sig.toy_wots_merkle")
        assert hashsig.wire_code == 0x0101
        assert hashsig.sig_len == 4 + 67 * 32 + 6 * 32

    def test_lookup_by_code_name_and_hex(self, registry):
        by_name = registry.metadata("kem.mock.kyber768")
        assert registry.metadata(0x0003) is by_name
        assert registry.metadata("0x0003") is by_name
        assert registry.metadata(by_name.id) is by_name
        assert registry.has("sig.mock.rsa2048")
        assert not registry.has("kem.mock.kyber9000")

    def test_unknown_algorithm(self, registry):
        with pytest.raises(UnknownAlgorithmError):
            registry.metadata("kem.mock.kyber9000")
        with pytest.raises(UnknownAlgorithmError):
            registry.kem_keygen(0x7777, SEED)

    def test_wrong_kind(self, registry):
        with pytest.raises(WrongKindError):
            registry.kem_keygen("sig.mock.falcon512", SEED)
        with pytest.raises(WrongKindError):
            registry.sig_sign("kem.mock.kyber768", SEED, b"m")

    def test_register_conflicts(self):
        registry = ProviderRegistry()
        meta = mock_metadata(AlgorithmKind.KEM, "kem.test.a", 0x0900, 32, 32, 32, (0, 0, 0))
        registry.register(meta, MockKemProvider())
        clash_code = mock_metadata(AlgorithmKind.KEM, "kem.test.b", 0x0900, 32, 32, 32, (0, 0, 0))
        with pytest.raises(ValueError):
            registry.register(clash_code, MockKemProvider())
        clash_name = mock_metadata(AlgorithmKind.KEM, "kem.test.a", 0x0901, 32, 32, 32, (0, 0, 0))
        with pytest.raises(ValueError):
            registry.register(clash_name, MockKemProvider())
        sig_meta = mock_metadata(AlgorithmKind.SIG, "sig.test.c", 0x0902, 32, 32, 64, (0, 0, 0))
        with pytest.raises(ValueError):
            registry.register(sig_meta, MockKemProvider())

    def test_metadata_validation(self):
        with pytest.raises(ValueError):
            AlgorithmId(AlgorithmKind.KEM, "kem.bad", 0x10000)
        with pytest.raises(ValueError):
            CostUnits(keygen=-1)
        assert CostUnits(10, 20, 30).scaled(0.5) == CostUnits(5, 10, 15)

    def test_control_pair_registered(self, registry):
        kem, sig = CONTROL_PAIR_NAMES
        assert registry.metadata(kem).kind is AlgorithmKind.KEM
        assert registry.metadata(sig).kind is AlgorithmKind.SIG


class TestMockProviders:
    """mock KEM / SIG 正确性与长度"""

    @pytest.mark.parametrize("name", MOCK_KEMS)
    def test_kem_roundtrip(self, registry, name):
        meta = registry.metadata(name)
        keypair = registry.kem_keygen(name, SEED)
        assert len(keypair.public_key) == meta.pk_len
        ciphertext, shared = registry.kem_encap(name, keypair.public_key, RAND)
        assert len(ciphertext) == meta.ct_len
        assert registry.kem_decap(name, keypair.secret_key, ciphertext) == shared

    @pytest.mark.parametrize("name", MOCK_SIGS)
    def test_sig_roundtrip_and_bit_flip(self, registry, name):
        meta = registry.metadata(name)
        keypair = registry.sig_keygen(name, SEED)
        signature = registry.sig_sign(name, keypair.secret_key, b"transcript")
        assert len(signature) == meta.sig_len
        assert registry.sig_verify(name, keypair.public_key, b"transcript", signature)
        assert not registry.sig_verify(name, keypair.public_key, b"transcripT", signature)
        for position in (0, len(signature) - 1):
            flipped = bytearray(signature)
            flipped[position] ^= 0x01
            assert not registry.sig_verify(name, keypair.public_key, b"transcript", bytes(flipped))

    def test_keygen_is_seed_deterministic(self, registry):
        first = registry.sig_keygen("sig.mock.dilithium2", SEED)
        second = registry.sig_keygen("sig.mock.dilithium2", SEED)
        other = registry.sig_keygen("sig.mock.dilithium2", RAND)
        assert first == second
        assert first.public_key != other.public_key

    def test_length_checks(self, registry):
        keypair = registry.kem_keygen("kem.mock.kyber512", SEED)
        with pytest.raises(WrongLengthError):
            registry.kem_keygen("kem.mock.kyber512", SEED[:31])
        with pytest.raises(WrongLengthError):
            registry.kem_encap("kem.mock.kyber512", keypair.public_key[:-1], RAND)
        with pytest.raises(WrongLengthError):
            registry.kem_decap("kem.mock.kyber512", keypair.secret_key, b"\x00" * 767)
        sig_keys = registry.sig_keygen("sig.mock.falcon512", SEED)
        with pytest.raises(WrongLengthError):
            registry.sig_verify("sig.mock.falcon512", sig_keys.public_key, b"m", b"\x00" * 665)

    def test_cost_units_burn_exact_work(self, registry):
        before = burn_counter.total
        registry.kem_keygen("kem.mock.kyber768", SEED)
        assert burn_counter.total - before == registry.metadata("kem.mock.kyber768").cost_units.keygen
        assert burn_cost(0) == b"\x00" * 32

    def test_operation_counters(self, registry):
        keypair = registry.kem_keygen("kem.mock.kyber512", SEED)
        registry.kem_encap("kem.mock.kyber512", keypair.public_key, RAND)
        registry.kem_encap("kem.mock.kyber512", keypair.public_key, RAND)
        assert registry.counters.get("kem.mock.kyber512", "keygen") == 1
        assert registry.counters.get("kem.mock.kyber512", "encap") == 2
        assert registry.counters.total("decap") == 0


class TestRegistryExport:
    """CSV 导出与 cost 覆盖"""

    def test_dump_csv(self, registry):
        lines = registry.dump_csv().splitlines()
        assert lines[0] == ",".join(REGISTRY_CSV_HEADER)
        assert lines[0] == "wire_code,name,kind,pk_len,sk_len,ct_or_sig_len,cost_keygen,cost_op,cost_verify"
        assert len(lines) == 1 + 13
        assert lines[1].startswith("0x0001,kem.toy_mlkem512,KEM,800,1632,768,")
        assert "0x0003,kem.mock.kyber768,KEM,1184,32,1088,70,90,105" in lines

    def test_apply_cost_overrides(self, registry):
        registry.apply_cost_overrides({"sig.mock.falcon512": (1, 2, 3), "sig.unknown": (4, 5, 6)})
        assert registry.metadata("sig.mock.falcon512").cost_units == CostUnits(1, 2, 3)
        assert registry.metadata("sig.mock.falcon512").sig_len == 666

    def test_all_metadata_filter(self, registry):
        kems = registry.all_metadata(AlgorithmKind.KEM)
        assert [m.wire_code for m in kems] == sorted(m.wire_code for m in kems)
        assert all(m.kind is AlgorithmKind.KEM for m in kems)
        assert len(kems) == 5


class _FakeKem:
    details = {
        "length_public_key": 8,
        "length_secret_key": 8,
        "length_ciphertext": 8,
        "length_shared_secret": 32,
    }

    def __init__(self, scheme, secret_key=None):
        self.scheme = scheme
        self.secret_key = secret_key

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        return False

    def generate_keypair(self):
        return b"k" * 8

    def export_secret_key(self):
        return b"s" * 8

    def encap_secret(self, public_key):
        return b"c" * 8, hashlib.sha256(public_key).digest()

    def decap_secret(self, ciphertext):
        return hashlib.sha256(b"k" * 8).digest()


class _FakeSignature:
    details = {"length_public_key": 16, "length_secret_key": 16, "length_signature": 40}

    def __init__(self, scheme, secret_key=None):
        self.scheme = scheme
        self.secret_key = secret_key

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        return False

    def generate_keypair(self):
        return b"p" * 16

    def export_secret_key(self):
        return b"q" * 16

    @staticmethod
    def _raw(message):
        # 变长签名
        return hashlib.sha256(message).digest()[: 20 + len(message) % 10]

    def sign(self, message):
        return self._raw(message)

    def verify(self, message, signature, public_key):
        return signature == self._raw(message)


def _fake_oqs():
    return SimpleNamespace(
        get_enabled_kem_mechanisms=lambda: ["Kyber512"],
        get_enabled_sig_mechanisms=lambda: ["Falcon-512"],
        KeyEncapsulation=_FakeKem,
        Signature=_FakeSignature,
    )


class TestOqsAdapter:
    """liboqs 适配（使用替身模块）"""

    def test_missing_module(self, registry, monkeypatch):
        monkeypatch.setattr(oqs_adapter, "_load_oqs", lambda: None)
        assert oqs_adapter.register_oqs_schemes(registry) == []
        assert not oqs_adapter.oqs_available()

    def test_registers_enabled_schemes(self, registry):
        names = oqs_adapter.register_oqs_schemes(registry, _fake_oqs())
        assert names == ["kem.oqs.kyber512", "sig.oqs.falcon512"]
        assert not registry.metadata("kem.oqs.kyber512").is_mock
        assert registry.metadata("sig.oqs.falcon512").sig_len == 42

    def test_padded_signature_roundtrip(self, registry):
        oqs_adapter.register_oqs_schemes(registry, _fake_oqs())
        keypair = registry.sig_keygen("sig.oqs.falcon512", SEED)
        signature = registry.sig_sign("sig.oqs.falcon512", keypair.secret_key, b"abc")
        assert len(signature) == 42
        assert registry.sig_verify("sig.oqs.falcon512", keypair.public_key, b"abc", signature)
        tampered = signature[:-1] + b"\x01"
        assert not registry.sig_verify("sig.oqs.falcon512", keypair.public_key, b"abc", tampered)

    def test_kem_roundtrip(self, registry):
        oqs_adapter.register_oqs_schemes(registry, _fake_oqs())
        keypair = registry.kem_keygen("kem.oqs.kyber512", SEED)
        ciphertext, shared = registry.kem_encap("kem.oqs.kyber512", keypair.public_key, RAND)
        assert registry.kem_decap("kem.oqs.kyber512", keypair.secret_key, ciphertext) == shared


def test_mock_sig_provider_rejects_foreign_public_key(registry):
    meta = registry.metadata("sig.mock.falcon1024")
    provider = MockSigProvider()
    public_key, secret_key = provider.keygen(meta, SEED)
    signature = provider.sign(meta, secret_key, b"m")
    forged = public_key[:32] + bytes(len(public_key) - 32)
    assert not provider.verify(meta, forged, b"m", signature)


def test_cost_overrides_applied_restores_registry(registry):
    before = registry.metadata("sig.mock.falcon512")
    with registry.cost_overrides_applied({"sig.mock.falcon512": (1, 2, 3), "sig.unknown": (4, 5, 6)}):
        assert registry.metadata("sig.mock.falcon512").cost_units == CostUnits(1, 2, 3)
    assert registry.metadata("sig.mock.falcon512") is before

    with pytest.raises(RuntimeError):
        with registry.cost_overrides_applied({"sig.mock.falcon512": (7, 8, 9)}):
            raise RuntimeError("boom")
    assert registry.metadata("sig.mock.falcon512") is before


class TestMockProvidersAtScale:
    """大样本的 mock 行为（慢）"""

    @pytest.mark.slow
    @pytest.mark.parametrize("name", MOCK_KEMS)
    def test_kem_roundtrip_over_many_seeds(self, registry, name):
        for i in range(1000):
            seed = hashlib.sha3_256(b"seed" + i.to_bytes(4, "big")).digest()
            coins = hashlib.sha3_256(b"coins" + i.to_bytes(4, "big")).digest()
            keypair = registry.kem_keygen(name, seed)
            ciphertext, shared = registry.kem_encap(name, keypair.public_key, coins)
            assert registry.kem_decap(name, keypair.secret_key, ciphertext) == shared

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["sig.mock.falcon512", "sig.mock.dilithium2", "sig.mock.rsa2048"])
    def test_random_bit_flips_are_rejected(self, registry, name):
        rng = random.Random(name)
        keypair = registry.sig_keygen(name, SEED)
        signature = registry.sig_sign(name, keypair.secret_key, b"transcript")
        for _ in range(100):
            flipped = bytearray(signature)
            flipped[rng.randrange(len(flipped))] ^= 1 << rng.randrange(8)
            assert not registry.sig_verify(name, keypair.public_key, b"transcript", bytes(flipped))

    @pytest.mark.slow
    def test_burn_time_grows_with_cost_units(self):
        medians = []
        for units in (0, 10_000, 1_000_000):
            timings = []
            for _ in range(20):
                start = time.perf_counter_ns()
                burn_cost(units)
                timings.append(time.perf_counter_ns() - start)
            medians.append(float(np.median(timings)))
        assert medians[0] <= medians[1] <= medians[2]
