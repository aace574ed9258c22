"""数据库模块

- database: 数据库接口和实现
- models: SQLAlchemy 数据模型
- repo: 仓储层实现
"""

from .database import BenchDatabase, Database, get_database, has_database, open_database, set_database
from .models import Base, BenchRowModel, BenchRunModel

__all__ = [
    "BenchDatabase",
    "Database",
    "get_database",
    "has_database",
    "open_database",
    "set_database",
    "Base",
    "BenchRowModel",
    "BenchRunModel",
]
