"""压测结果数据模型"""

from datetime import datetime

from sqlalchemy import JSON, Boolean, Column, DateTime, Float, ForeignKey, Integer, String
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class BenchRunModel(Base):  # pylint: disable=too-few-public-methods
    """一次压测运行

    plan 字段保存回显的 BenchPlan（JSON）。
    """

    __tablename__ = "bench_runs"

    id = Column(Integer, primary_key=True, index=True)
    mode = Column(String(20), nullable=False, index=True)
    seed = Column(Integer, nullable=False, default=0)
    wall_clock_s = Column(Float, nullable=False, default=0.0)
    plan = Column(JSON, nullable=False)
    created_at = Column(DateTime, default=datetime.utcnow, nullable=False, index=True)

    rows = relationship(
        "BenchRowModel",
        back_populates="run",
        cascade="all, delete-orphan",
        order_by="BenchRowModel.position",
        lazy="selectin",
    )


class BenchRowModel(Base):  # pylint: disable=too-few-public-methods
    """压测结果中的一行（一个算法对）"""

    __tablename__ = "bench_rows"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("bench_runs.id"), nullable=False, index=True)
    position = Column(Integer, nullable=False)  # 报告中的顺序，0 为对照组
    pair = Column(String(100), nullable=False, index=True)
    kem = Column(String(100), nullable=False)
    sig = Column(String(100), nullable=False)
    completed = Column(Integer, nullable=False, default=0)
    failed = Column(Integer, nullable=False, default=0)
    cps = Column(Float, nullable=False, default=0.0)
    ratio_to_control = Column(Float, nullable=False, default=0.0)
    p50_ns = Column(Integer, nullable=False, default=0)
    p95_ns = Column(Integer, nullable=False, default=0)
    bytes_per_handshake = Column(Integer, nullable=False, default=0)
    degraded = Column(Boolean, nullable=False, default=False)
    is_control = Column(Boolean, nullable=False, default=False)

    run = relationship("BenchRunModel", back_populates="rows")
