"""压测相关异常"""


class BenchError(Exception):
    """压测异常基类"""


class PlanValidationError(BenchError, ValueError):
    """压测计划校验失败（命令行退出码 2）"""
