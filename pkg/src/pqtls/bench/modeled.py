"""建模模式：确定性的闭式吞吐模型

bytes    = |CH| + |SH| + |Finished| + 3·5（帧头）
T_client = t_keygen + t_verify + t_decap + t_kdf
T_server = t_encap + t_sign + t_kdf
T_net    = rtt + bytes / bandwidth
T        = T_net + T_client + T_server
cps      = min(C / T, W / T_server)

每个操作的时间 t = cost_units × unit_time_ns / acceleration[alg]；t_kdf = kdf_cost_units × unit_time_ns。
"""

import logging
from typing import Optional, Tuple

from ..crypto_suite.registry import ProviderRegistry, build_default_registry
from ..crypto_suite.types import SchemeMetadata
from ..handshake.types import FRAME_HEADER_LEN, MAC_LEN, RANDOM_LEN
from .exceptions import PlanValidationError
from .types import BenchMode, BenchPlan, BenchReport, PairResult, apply_ratios, pair_label

logger = logging.getLogger(__name__)

_NS = 1e-9


def client_hello_len(kem: SchemeMetadata, sig_alg_count: int = 1) -> int:
    """CH 负载长度"""
    return 2 + RANDOM_LEN + 2 + 1 + 2 * sig_alg_count + 4 + kem.pk_len


def certificate_len(sig: SchemeMetadata, root: SchemeMetadata, subject: str) -> int:
    """证书编码长度"""
    return 2 + len(subject.encode("utf-8")) + 2 + 4 + sig.pk_len + 4 + root.ct_or_sig_len


def server_hello_len(kem: SchemeMetadata, sig: SchemeMetadata, root: SchemeMetadata, subject: str) -> int:
    """SH 负载长度"""
    return (
        2 + RANDOM_LEN + 2 + 2
        + 4 + certificate_len(sig, root, subject)
        + 4 + kem.ct_or_sig_len
        + 4 + sig.ct_or_sig_len
    )


def handshake_bytes(
    kem: SchemeMetadata,
    sig: SchemeMetadata,
    subject: str = "pqtls-server",
    root: Optional[SchemeMetadata] = None,
) -> int:
    """一次握手在线上的总字节数（root CA 默认与服务端签名算法相同）"""
    root = root or sig
    return (
        client_hello_len(kem)
        + server_hello_len(kem, sig, root, subject)
        + MAC_LEN
        + 3 * FRAME_HEADER_LEN
    )


def closed_form(
    clients: int,
    workers: int,
    wire_bytes: int,
    t_client: float,
    t_server: float,
    rtt_s: float = 0.0,
    bandwidth_Bps: Optional[float] = None,
) -> Tuple[float, float]:
    """闭式模型本身，返回 (cps, 单次握手时间 T)"""
    t_net = rtt_s + (wire_bytes / bandwidth_Bps if bandwidth_Bps else 0.0)
    total = t_net + t_client + t_server
    client_limited = clients / total if total > 0 else float("inf")
    capacity = workers / t_server if t_server > 0 else float("inf")
    return min(client_limited, capacity), total


def _op_seconds(units: int, meta: SchemeMetadata, plan: BenchPlan) -> float:
    factor = plan.acceleration.get(meta.name, 1.0)
    return units * plan.unit_time_ns * _NS / factor


def model_pair(
    kem: SchemeMetadata, sig: SchemeMetadata, plan: BenchPlan, root: Optional[SchemeMetadata] = None
) -> PairResult:
    """单个算法对的闭式结果；证书主体取 plan.subject，root 为空时与 sig 相同"""
    t_kdf = plan.kdf_cost_units * plan.unit_time_ns * _NS
    t_client = (
        _op_seconds(kem.cost_units.keygen, kem, plan)
        + _op_seconds(sig.cost_units.decap_or_verify, sig, plan)
        + _op_seconds(kem.cost_units.decap_or_verify, kem, plan)
        + t_kdf
    )
    t_server = (
        _op_seconds(kem.cost_units.encap_or_sign, kem, plan)
        + _op_seconds(sig.cost_units.encap_or_sign, sig, plan)
        + t_kdf
    )
    wire_bytes = handshake_bytes(kem, sig, plan.subject, root)
    cps, total = closed_form(
        plan.clients,
        plan.workers,
        wire_bytes,
        t_client,
        t_server,
        plan.network.rtt_s,
        plan.network.bandwidth_Bps,
    )
    if cps == float("inf"):
        raise PlanValidationError(f"{kem.name}:{sig.name}: zero-cost handshake has unbounded throughput")
    latency_ns = int(round(total / _NS))
    return PairResult(
        pair=pair_label(kem.name, sig.name),
        kem=kem.name,
        sig=sig.name,
        mode=BenchMode.MODELED,
        completed=int(cps * plan.duration_s),
        cps=cps,
        p50_ns=latency_ns,
        p95_ns=latency_ns,
        bytes_per_handshake=wire_bytes,
    )


def run_modeled(plan: BenchPlan, registry: Optional[ProviderRegistry] = None) -> BenchReport:
    """建模模式压测：计划的纯函数，相同计划得到逐字节相同的报告"""
    if registry is None:
        registry = build_default_registry(hashsig_height=plan.hashsig_height)
    with registry.cost_overrides_applied(plan.cost_overrides):
        root = plan.resolve_root(registry)
        rows = []
        for index, (kem_code, sig_code) in enumerate(plan.resolve(registry)):
            row = model_pair(registry.metadata(kem_code), registry.metadata(sig_code), plan, root)
            row.is_control = index == 0
            row.repetitions = [row.cps] * plan.repetitions
            rows.append(row)
    apply_ratios(rows)
    logger.info(f"Modeled {len(rows)} pairs (control={rows[0].pair})")
    return BenchReport(mode=BenchMode.MODELED, plan=plan.echo(), seed=plan.seed, wall_clock_s=0.0, rows=rows)
