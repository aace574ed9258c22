"""压测运行仓库

负责压测运行及其结果行的数据库操作。
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional

from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncSession

from ..models import BenchRowModel, BenchRunModel

logger = logging.getLogger(__name__)


@dataclass
class BenchRowData:
    """结果行数据（Repository 层）"""

    pair: str
    kem: str
    sig: str
    completed: int
    cps: float
    ratio_to_control: float = 0.0
    p50_ns: int = 0
    p95_ns: int = 0
    bytes_per_handshake: int = 0
    failed: int = 0
    degraded: bool = False
    is_control: bool = False


@dataclass
class BenchRunData:
    """压测运行数据（Repository 层）"""

    mode: str
    seed: int
    wall_clock_s: float
    plan: Dict[str, Any]
    rows: List[BenchRowData] = field(default_factory=list)
    id: Optional[int] = None  # 数据库 ID
    created_at: Optional[datetime] = None


class BenchRunRepository:
    """压测运行仓库"""

    def __init__(self, session: AsyncSession):
        """初始化仓库

        Args:
            session: 数据库会话（由 DB 层创建并维护）
        """
        self.session = session

    @staticmethod
    def _model_to_data(model: BenchRunModel) -> BenchRunData:
        """将 Model 转换为 Data"""
        return BenchRunData(
            mode=model.mode,
            seed=model.seed,
            wall_clock_s=model.wall_clock_s,
            plan=model.plan,
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
                for row in model.rows
            ],
            id=model.id,
            created_at=model.created_at,
        )

    async def create(self, data: BenchRunData) -> BenchRunData:
        """创建压测运行记录（连同结果行）

        Args:
            data: 压测运行数据

        Returns:
            带数据库 ID 的运行数据
        """
        run = BenchRunModel(
            mode=data.mode,
            seed=data.seed,
            wall_clock_s=data.wall_clock_s,
            plan=data.plan,
            rows=[
                BenchRowModel(
                    position=position,
                    pair=row.pair,
                    kem=row.kem,
                    sig=row.sig,
                    completed=row.completed,
                    failed=row.failed,
                    cps=row.cps,
                    ratio_to_control=row.ratio_to_control,
                    p50_ns=row.p50_ns,
                    p95_ns=row.p95_ns,
                    bytes_per_handshake=row.bytes_per_handshake,
                    degraded=row.degraded,
                    is_control=row.is_control,
                )
                for position, row in enumerate(data.rows)
            ],
        )
        self.session.add(run)
        await self.session.flush()
        logger.debug(f"Created bench run {run.id} with {len(data.rows)} rows")
        return self._model_to_data(run)

    async def find_by_id(self, run_id: int) -> Optional[BenchRunData]:
        """根据 ID 查找压测运行

        Returns:
            运行数据，不存在时返回 None
        """
        result = await self.session.execute(select(BenchRunModel).where(BenchRunModel.id == run_id))
        model = result.scalar_one_or_none()
        return self._model_to_data(model) if model is not None else None

    async def list_recent(self, limit: int = 10) -> List[BenchRunData]:
        """按创建时间倒序列出最近的运行"""
        result = await self.session.execute(
            select(BenchRunModel).order_by(BenchRunModel.id.desc()).limit(limit)
        )
        return [self._model_to_data(model) for model in result.scalars().all()]
