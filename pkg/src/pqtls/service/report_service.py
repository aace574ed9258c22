"""压测结果持久化服务"""

import logging
from typing import List, Optional

from sqlalchemy.exc import SQLAlchemyError

from ..bench.types import BenchReport
from ..db.database import get_database
from ..db.repo import BenchRowData, BenchRunData, BenchRunRepository

logger = logging.getLogger(__name__)


def report_to_data(report: BenchReport) -> BenchRunData:
    """BenchReport → Repository 层数据"""
    return BenchRunData(
        mode=report.mode.value,
        seed=report.seed,
        wall_clock_s=report.wall_clock_s,
        plan=report.plan,
        rows=[
            BenchRowData(
                pair=row.pair,
                kem=row.kem,
                sig=row.sig,
                completed=row.completed,
                cps=row.cps,
                ratio_to_control=row.ratio_to_control,
                p50_ns=row.p50_ns,
                p95_ns=row.p95_ns,
                bytes_per_handshake=row.bytes_per_handshake,
                failed=row.failed,
                degraded=row.degraded,
                is_control=row.is_control,
            )
            for row in report.rows
        ],
    )


class ReportService:
    """压测报告的保存与查询"""

    async def save_report(self, report: BenchReport) -> Optional[int]:
        """保存一次压测报告

        Args:
            report: 压测报告

        Returns:
            运行 ID；保存失败时返回 None（不影响已经输出的报告）
        """
        try:
            async with get_database().get_db_session() as session:
                saved = await BenchRunRepository(session).create(report_to_data(report))
                logger.info(f"Saved bench run {saved.id} ({len(saved.rows)} rows)")
                return saved.id
        except (SQLAlchemyError, RuntimeError, OSError) as e:
            logger.error(f"Failed to save bench report: {e}")
            return None

    async def list_runs(self, limit: int = 10) -> List[BenchRunData]:
        """列出最近的压测运行（新的在前）"""
        async with get_database().get_db_session() as session:
            return await BenchRunRepository(session).list_recent(limit)

    async def get_run(self, run_id: int) -> Optional[BenchRunData]:
        """按 ID 查询压测运行"""
        async with get_database().get_db_session() as session:
            return await BenchRunRepository(session).find_by_id(run_id)


# 全局服务实例
report_service = ReportService()
