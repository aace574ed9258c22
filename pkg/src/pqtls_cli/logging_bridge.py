"""标准 logging → loguru 桥接

核心包只使用 logging.getLogger(__name__)，命令行层把根 logger 的输出转交给 loguru。
"""

import logging
import sys

from loguru import logger


class LoguruHandler(logging.Handler):
    """把标准 logging 记录转发给 loguru"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        frame, depth = logging.currentframe(), 2
        while frame is not None and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging_bridge(level: str = "INFO") -> None:
    """配置 loguru 输出到 stderr，并在根 logger 上安装 LoguruHandler

    stdout 留给报告输出。重复调用只会更新级别。
    """
    logger.remove()
    logger.add(sys.stderr, level=level)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    if not any(isinstance(h, LoguruHandler) for h in root_logger.handlers):
        root_logger.addHandler(LoguruHandler())
        logger.debug("Configured LoguruHandler for standard Python logging")
