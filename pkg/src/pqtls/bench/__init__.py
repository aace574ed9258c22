"""压测模块

- types: BenchPlan / BenchReport
- modeled: 确定性闭式模型
- live: 实时压测
- report: csv / markdown / plotdata 渲染
- plot: matplotlib 柱状图
"""

from .exceptions import BenchError, PlanValidationError
from .live import run_live, run_live_async
from .modeled import closed_form, handshake_bytes, model_pair, run_modeled
from .plot import render_plot
from .report import CSV_COLUMNS, RENDERERS, emit_report
from .types import (
    BenchMode,
    BenchPlan,
    BenchReport,
    NetworkModel,
    PairResult,
    apply_ratios,
    pair_label,
)

__all__ = [
    "BenchError",
    "PlanValidationError",
    "run_live",
    "run_live_async",
    "closed_form",
    "handshake_bytes",
    "model_pair",
    "run_modeled",
    "render_plot",
    "CSV_COLUMNS",
    "RENDERERS",
    "emit_report",
    "BenchMode",
    "BenchPlan",
    "BenchReport",
    "NetworkModel",
    "PairResult",
    "apply_ratios",
    "pair_label",
]
