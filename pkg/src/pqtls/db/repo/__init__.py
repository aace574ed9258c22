"""Repository 模块

提供数据库访问的仓储层实现。
"""

from .bench_run_repository import BenchRowData, BenchRunData, BenchRunRepository

__all__ = [
    "BenchRowData",
    "BenchRunData",
    "BenchRunRepository",
]
