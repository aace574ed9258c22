"""压测结果数据库

Database 接口 + 基于 SQLAlchemy 异步引擎的 BenchDatabase。
只有配置了数据库 URL 时才持久化结果；open_database() 供命令行一次性使用。
"""

import logging
from abc import ABC, abstractmethod
from contextlib import asynccontextmanager
from pathlib import Path
from typing import AsyncIterator, Optional

from sqlalchemy.engine import make_url
from sqlalchemy.ext.asyncio import AsyncEngine, AsyncSession, async_sessionmaker, create_async_engine

from .models import Base

logger = logging.getLogger(__name__)

__all__ = [
    "Database",
    "BenchDatabase",
    "open_database",
    "set_database",
    "get_database",
    "has_database",
]

SQLITE_LOCK_TIMEOUT_S = 30.0


class Database(ABC):  # pylint: disable=too-few-public-methods
    """数据库接口"""

    @abstractmethod
    def get_db_session(self):
        """返回一个异步上下文管理器，产出 AsyncSession"""

    async def dispose(self) -> None:
        """释放连接池"""


class _DatabaseManager:
    """全局数据库持有者（单例）"""

    _instance: Optional["_DatabaseManager"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance.current = None
        return cls._instance

    current: Optional[Database]


_manager = _DatabaseManager()


def set_database(database: Optional[Database]) -> None:
    """设置全局数据库（传 None 清除）"""
    _manager.current = database


def get_database() -> Database:
    """获取全局数据库

    Raises:
        RuntimeError: 尚未调用 set_database()
    """
    if _manager.current is None:
        raise RuntimeError("No bench database configured; call set_database() first")
    return _manager.current


def has_database() -> bool:
    """是否已设置全局数据库"""
    return _manager.current is not None


class BenchDatabase(Database):
    """压测结果库

    引擎在第一次取会话时创建，同时建表；SQLite 文件所在目录不存在时会先创建。
    """

    def __init__(self, database_url: str, base=Base):
        """
        Args:
            database_url: 例如 sqlite+aiosqlite:///./data/pqtls.db
            base: 声明式 Base，默认使用压测结果模型
        """
        self.database_url = database_url
        self.base = base
        self._engine: Optional[AsyncEngine] = None
        self._sessions: Optional[async_sessionmaker] = None

    @property
    def is_sqlite(self) -> bool:
        return make_url(self.database_url).get_backend_name() == "sqlite"

    def _sqlite_parent(self) -> Optional[Path]:
        database = make_url(self.database_url).database
        if not self.is_sqlite or not database or database == ":memory:":
            return None
        return Path(database).parent

    async def _connect(self) -> async_sessionmaker:
        if self._sessions is not None:
            return self._sessions

        connect_args = {}
        if self.is_sqlite:
            connect_args["timeout"] = SQLITE_LOCK_TIMEOUT_S
            parent = self._sqlite_parent()
            if parent is not None:
                parent.mkdir(parents=True, exist_ok=True)

        engine = create_async_engine(self.database_url, connect_args=connect_args, pool_pre_ping=True)
        async with engine.begin() as conn:
            await conn.run_sync(self.base.metadata.create_all)
        logger.debug(f"Bench database ready at {engine.url.render_as_string(hide_password=True)}")

        self._engine = engine
        self._sessions = async_sessionmaker(engine, class_=AsyncSession, expire_on_commit=False)
        return self._sessions

    @asynccontextmanager
    async def get_db_session(self) -> AsyncIterator[AsyncSession]:  # type: ignore[override]
        """会话：正常退出时提交，任何异常（包括取消）都回滚后重新抛出"""
        sessions = await self._connect()
        async with sessions() as session:
            try:
                yield session
                await session.commit()
            except BaseException as e:
                logger.error(f"Bench database transaction rolled back: {e}")
                await session.rollback()
                raise

    async def dispose(self) -> None:
        if self._engine is not None:
            await self._engine.dispose()
        self._engine = None
        self._sessions = None


@asynccontextmanager
async def open_database(database_url: str) -> AsyncIterator[BenchDatabase]:
    """打开数据库并设为全局实例，退出时释放连接并清除"""
    database = BenchDatabase(database_url)
    set_database(database)
    try:
        yield database
    finally:
        set_database(None)
        await database.dispose()
