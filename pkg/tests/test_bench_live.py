"""实时模式压测测试（服务端与客户端在同一事件循环中）"""

import pytest

from pqtls.bench import BenchMode, BenchPlan, handshake_bytes, run_live_async
from pqtls.bench.live import _Sample, _summarize
from pqtls.transport import ConnectionRefusedTransportError, HandshakeServer, ServerConfig

PAIR = ("kem.mock.kyber768", "sig.mock.falcon512")


def _live_plan(**overrides) -> BenchPlan:
    values = {
        "pairs": [PAIR],
        "mode": "live",
        "in_process": True,
        "clients": 2,
        "duration_s": 0.4,
        "warmup_s": 0.1,
        "hashsig_height": 6,
    }
    values.update(overrides)
    return BenchPlan.create(**values)


async def test_in_process_live_run(registry):
    report = await run_live_async(_live_plan(), registry)
    assert report.mode is BenchMode.LIVE
    assert [row.pair for row in report.rows] == ["ecdhe_x25519-rsa2048", "kyber768-falcon512"]
    for row in report.rows:
        assert row.completed > 0
        assert row.failed == 0
        assert not row.degraded
        assert sum(row.client_completed) == row.completed
        assert row.cps == pytest.approx(row.completed / 0.4)
        assert 0 < row.p50_ns <= row.p95_ns
    assert report.rows[0].ratio_to_control == 1.0
    falcon = report.rows[1]
    assert falcon.bytes_per_handshake == handshake_bytes(
        registry.metadata(PAIR[0]), registry.metadata(PAIR[1])
    )


async def test_remote_host(registry):
    config = ServerConfig(kem_algs=[0x0003], sig_algs=[0x0104], workers=2)
    async with HandshakeServer(config, registry) as server:
        plan = _live_plan(host=server.address, in_process=False, control_pair=PAIR)
        report = await run_live_async(plan, registry)
    assert len(report.rows) == 1
    assert report.rows[0].completed > 0
    assert report.rows[0].ratio_to_control == 1.0
    assert server.stats.failures == 0


async def test_unreachable_host(registry):
    server = HandshakeServer(ServerConfig(kem_algs=[0x0003], sig_algs=[0x0104]), registry)
    await server.start()
    address = server.address
    await server.stop()
    with pytest.raises(ConnectionRefusedTransportError):
        await run_live_async(_live_plan(host=address, in_process=False), registry)


def test_summary_cps_matches_completed_over_all_repetitions():
    """cps 按所有重复的完成总数 / (R·D) 计算，repetitions 保留每轮的值"""
    plan = _live_plan(repetitions=3, duration_s=1.0)
    runs = []
    for count in (10, 20, 30):
        samples = [_Sample(i % plan.clients, 0.5, True, 1_000, 2_000) for i in range(count)]
        samples.append(_Sample(0, 1.5, True, 1_000, 2_000))  # 窗口外
        runs.append((samples, 0.0, 1.0))

    row = _summarize(plan, "kyber768", "falcon512", runs)
    assert row.completed == 60
    assert row.cps == pytest.approx(20.0)
    assert row.repetitions == [10.0, 20.0, 30.0]
    assert sum(row.client_completed) == row.completed


async def test_live_cost_overrides_leave_registry_untouched(registry):
    before = registry.metadata(PAIR[1]).cost_units
    plan = _live_plan(duration_s=0.2, cost_overrides={PAIR[1]: (1, 2, 3)})
    await run_live_async(plan, registry)
    assert registry.metadata(PAIR[1]).cost_units == before


@pytest.mark.slow
async def test_repetitions_share_one_rate(registry):
    report = await run_live_async(_live_plan(repetitions=3, clients=4), registry)
    for row in report.rows:
        assert len(row.repetitions) == 3
        assert row.cps == pytest.approx(row.completed / (3 * 0.4))
        assert min(row.repetitions) <= row.cps <= max(row.repetitions)


CONTROL = ("kem.mock.ecdhe_x25519", "sig.mock.rsa2048")


@pytest.mark.slow
async def test_ten_times_sign_cost_ranks_below_control(registry):
    """签名 cost 为对照组 10 倍的算法对，每一轮都慢于对照组"""
    control_sign = registry.metadata(CONTROL[1]).cost_units
    heavy = (CONTROL[0], "sig.mock.dilithium2")
    plan = _live_plan(
        pairs=[heavy],
        control_pair=CONTROL,
        repetitions=3,
        clients=4,
        duration_s=1.0,
        cost_overrides={
            heavy[1]: (control_sign.keygen, control_sign.encap_or_sign * 10, control_sign.decap_or_verify)
        },
    )
    report = await run_live_async(plan, registry)
    control, slow = report.rows
    assert slow.ratio_to_control < 1
    for control_cps, slow_cps in zip(control.repetitions, slow.repetitions):
        assert slow_cps < control_cps


@pytest.mark.slow
async def test_control_against_itself_is_stable(registry):
    plan = _live_plan(pairs=[], control_pair=CONTROL, repetitions=3, clients=4, duration_s=1.0)
    first = (await run_live_async(plan, registry)).rows[0]
    second = (await run_live_async(plan, registry)).rows[0]
    assert 0.8 <= second.cps / first.cps <= 1.25
