"""服务模块

- report_service: 压测结果持久化服务
"""

from .report_service import ReportService, report_service, report_to_data

__all__ = [
    "ReportService",
    "report_service",
    "report_to_data",
]
