"""报告渲染器

定义了报告渲染的抽象接口以及 csv / markdown / plotdata 三种实现。
所有渲染器对相同报告输出逐字节相同的结果。
"""

import csv
import io
from abc import ABC, abstractmethod
from typing import Dict, List

from .types import BenchReport, PairResult

CSV_COLUMNS = [
    "pair",
    "kem",
    "sig",
    "mode",
    "completed",
    "cps",
    "ratio_to_control",
    "p50_ns",
    "p95_ns",
    "bytes_per_handshake",
]


class BaseReportRenderer(ABC):  # pylint: disable=too-few-public-methods
    """渲染器基类"""

    @abstractmethod
    def render(self, report: BenchReport) -> bytes:
        """渲染报告

        Args:
            report: 压测报告

        Returns:
            UTF-8 编码的输出
        """


class BaseTableRenderer(BaseReportRenderer):
    """表格渲染器基类（提供通用的单元格格式化）"""

    def _cells(self, row: PairResult) -> List[str]:
        """按 CSV_COLUMNS 顺序格式化一行"""
        return [
            row.pair,
            row.kem,
            row.sig,
            row.mode.value,
            str(row.completed),
            f"{row.cps:.3f}",
            f"{row.ratio_to_control:.4f}",
            str(row.p50_ns),
            str(row.p95_ns),
            str(row.bytes_per_handshake),
        ]


class CsvRenderer(BaseTableRenderer):
    """CSV：表头固定为 CSV_COLUMNS"""

    def render(self, report: BenchReport) -> bytes:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(self._cells(row))
        return buffer.getvalue().encode("utf-8")


class MarkdownRenderer(BaseTableRenderer):
    """Markdown 表格；degraded 的行在 pair 后面加标记"""

    def render(self, report: BenchReport) -> bytes:
        lines = [
            "| " + " | ".join(CSV_COLUMNS) + " |",
            "|" + "|".join("---" for _ in CSV_COLUMNS) + "|",
        ]
        for row in report.rows:
            cells = self._cells(row)
            if row.degraded:
                cells[0] += " (degraded)"
            lines.append("| " + " | ".join(cells) + " |")
        return ("\n".join(lines) + "\n").encode("utf-8")


class PlotDataRenderer(BaseReportRenderer):
    """两列数据（pair 标签, ratio），按计划顺序，制表符分隔"""

    def render(self, report: BenchReport) -> bytes:
        lines = ["pair\tratio"]
        lines.extend(f"{row.pair}\t{row.ratio_to_control:.4f}" for row in report.rows)
        return ("\n".join(lines) + "\n").encode("utf-8")


RENDERERS: Dict[str, BaseReportRenderer] = {
    "csv": CsvRenderer(),
    "markdown": MarkdownRenderer(),
    "plotdata": PlotDataRenderer(),
}


def emit_report(report: BenchReport, fmt: str = "csv") -> bytes:
    """按格式渲染报告

    Raises:
        ValueError: 未知格式
    """
    renderer = RENDERERS.get(fmt)
    if renderer is None:
        raise ValueError(f"Unknown report format {fmt!r}, expected one of {sorted(RENDERERS)}")
    return renderer.render(report)
