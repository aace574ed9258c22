"""建模模式压测测试"""

import pytest

from pqtls.bench import (
    BenchError,
    BenchMode,
    BenchPlan,
    NetworkModel,
    PairResult,
    PlanValidationError,
    apply_ratios,
    closed_form,
    emit_report,
    handshake_bytes,
    model_pair,
    pair_label,
    run_live,
    run_modeled,
)

KYBER = "kem.mock.kyber768"
PAIRS = [
    (KYBER, "sig.mock.falcon512"),
    (KYBER, "sig.mock.dilithium2"),
    (KYBER, "sig.mock.sphincs128s"),
]


def _plan(**overrides) -> BenchPlan:
    values = {"pairs": PAIRS, "hashsig_height": 6}
    values.update(overrides)
    return BenchPlan.create(**values)


def _cps(report):
    return {row.pair: row.cps for row in report.rows}


def test_closed_form_example():
    cps, total = closed_form(10, 4, 12_500, 0.005, 0.004, 0.001, 1.25e6)
    assert cps == pytest.approx(500)
    assert total == pytest.approx(0.020)


def test_closed_form_server_bound():
    cps, _ = closed_form(100, 1, 0, 0.001, 0.010)
    assert cps == pytest.approx(100)


def test_pq_ordering(registry):
    cps = _cps(run_modeled(_plan(), registry))
    assert cps["kyber768-falcon512"] >= cps["kyber768-dilithium2"] >= cps["kyber768-sphincs128s"]


def test_report_shape(registry):
    report = run_modeled(_plan(), registry)
    assert report.mode is BenchMode.MODELED
    assert [row.pair for row in report.rows] == [
        "ecdhe_x25519-rsa2048",
        "kyber768-falcon512",
        "kyber768-dilithium2",
        "kyber768-sphincs128s",
    ]
    control = report.rows[0]
    assert control.is_control
    assert report.control is control
    assert control.ratio_to_control == 1.0
    for row in report.rows[1:]:
        assert row.ratio_to_control == pytest.approx(row.cps / control.cps)
    falcon = report.rows[1]
    assert falcon.bytes_per_handshake == handshake_bytes(
        registry.metadata(KYBER), registry.metadata("sig.mock.falcon512")
    )
    assert report.plan["clients"] == 8


def test_report_is_deterministic(registry):
    first = emit_report(run_modeled(_plan(seed=3), registry))
    second = emit_report(run_modeled(_plan(seed=3), registry))
    assert first == second


def test_ratios_survive_uniform_slowdown(registry):
    base = run_modeled(_plan(), registry)
    slow = run_modeled(_plan(unit_time_ns=4000), registry)
    for fast_row, slow_row in zip(base.rows, slow.rows):
        assert slow_row.cps == pytest.approx(fast_row.cps / 4)
        assert slow_row.ratio_to_control == pytest.approx(fast_row.ratio_to_control)


def test_cost_sensitivity(registry):
    base = _cps(run_modeled(_plan(), registry))
    heavier = _cps(
        run_modeled(_plan(cost_overrides={"sig.mock.falcon512": (8000, 3500, 35)}), registry)
    )
    assert heavier["kyber768-falcon512"] < base["kyber768-falcon512"]
    assert heavier["kyber768-dilithium2"] == pytest.approx(base["kyber768-dilithium2"])


def test_acceleration_only_affects_named_algorithm(registry):
    base = _cps(run_modeled(_plan(), registry))
    accelerated = _cps(run_modeled(_plan(acceleration={"sig.mock.sphincs128s": 10.0}), registry))
    assert accelerated["kyber768-sphincs128s"] > base["kyber768-sphincs128s"]
    assert accelerated["kyber768-falcon512"] == pytest.approx(base["kyber768-falcon512"])


def test_network_cost_lowers_client_bound(registry):
    plan = _plan(workers=64, network=NetworkModel(rtt_s=0.05, bandwidth_Bps=1e6))
    row = model_pair(registry.metadata(KYBER), registry.metadata("sig.mock.dilithium2"), plan)
    wire = handshake_bytes(registry.metadata(KYBER), registry.metadata("sig.mock.dilithium2"))
    assert row.p50_ns > (0.05 + wire / 1e6) * 1e9
    assert row.cps < 8 / 0.05


def test_root_and_subject_reach_modeled_bytes(registry):
    """建模字节数计入 root 签名算法与证书主体长度"""
    subject = "x" * 200
    plan = _plan(pairs=[(KYBER, "sig.mock.falcon512")], root_sig_alg="sig.mock.rsa2048", subject=subject)
    report = run_modeled(plan, registry)
    kem, sig = registry.metadata(KYBER), registry.metadata("sig.mock.falcon512")
    expected = handshake_bytes(kem, sig, subject, registry.metadata("sig.mock.rsa2048"))
    assert report.rows[1].bytes_per_handshake == expected
    rsa_sig_len = registry.metadata("sig.mock.rsa2048").ct_or_sig_len
    assert expected == handshake_bytes(kem, sig) + (200 - len("pqtls-server")) - (sig.ct_or_sig_len - rsa_sig_len)


def test_unknown_root_algorithm_is_rejected(registry):
    with pytest.raises(PlanValidationError):
        run_modeled(_plan(root_sig_alg="sig.mock.nope"), registry)
    with pytest.raises(PlanValidationError):
        run_modeled(_plan(root_sig_alg=KYBER), registry)


def test_cost_overrides_leave_registry_untouched(registry):
    before = registry.metadata("sig.mock.falcon512").cost_units
    heavier = run_modeled(_plan(cost_overrides={"sig.mock.falcon512": (8000, 3500, 35)}), registry)
    assert registry.metadata("sig.mock.falcon512").cost_units == before
    again = run_modeled(_plan(), registry)
    assert _cps(again)["kyber768-falcon512"] > _cps(heavier)["kyber768-falcon512"]


def test_zero_cost_pair_is_rejected(registry):
    plan = _plan(
        pairs=[],
        kdf_cost_units=0,
        cost_overrides={"kem.mock.ecdhe_x25519": (0, 0, 0), "sig.mock.rsa2048": (0, 0, 0)},
    )
    with pytest.raises(PlanValidationError):
        run_modeled(plan, registry)


class TestPlan:
    """计划校验"""

    @pytest.mark.parametrize(
        "overrides",
        [
            {"duration_s": 0},
            {"clients": 0},
            {"repetitions": 0},
            {"identity_seed_hex": "00" * 31},
            {"acceleration": {"sig.mock.falcon512": 0}},
            {"cost_overrides": {"sig.mock.falcon512": (1, -1, 1)}},
            {"mode": "live", "host": ""},
        ],
    )
    def test_invalid_plans(self, overrides):
        with pytest.raises(PlanValidationError):
            _plan(**overrides)

    def test_unknown_or_swapped_pairs(self, registry):
        with pytest.raises(PlanValidationError):
            _plan(pairs=[(KYBER, "sig.mock.nothing")]).resolve(registry)
        with pytest.raises(PlanValidationError):
            _plan(pairs=[("sig.mock.falcon512", KYBER)]).resolve(registry)

    def test_control_first_and_deduplicated(self, registry):
        plan = _plan(pairs=[PAIRS[0], PAIRS[0], ("kem.mock.ecdhe_x25519", "sig.mock.rsa2048")])
        assert plan.all_pairs() == [("kem.mock.ecdhe_x25519", "sig.mock.rsa2048"), PAIRS[0]]
        assert plan.resolve(registry) == [(0x00F0, 0x01F0), (0x0003, 0x0104)]

    def test_pairs_by_wire_code(self, registry):
        plan = _plan(pairs=[("0x0003", "0x0104")])
        assert plan.resolve(registry)[1] == (0x0003, 0x0104)

    def test_run_live_requires_live_mode(self, registry):
        with pytest.raises(BenchError):
            run_live(_plan(), registry)


def test_pair_label():
    assert pair_label("kem.mock.kyber768", "sig.mock.falcon512") == "kyber768-falcon512"
    assert pair_label("kem.toy_mlkem512", "sig.toy_wots_merkle") == "toy_mlkem512-toy_wots_merkle"


def test_apply_ratios_without_control_throughput():
    rows = [
        PairResult(pair="a", kem="k", sig="s", mode=BenchMode.LIVE, completed=0, cps=0.0, is_control=True),
        PairResult(pair="b", kem="k", sig="s", mode=BenchMode.LIVE, completed=5, cps=5.0),
    ]
    apply_ratios(rows)
    assert [row.ratio_to_control for row in rows] == [1.0, 0.0]
