"""握手相关异常"""

from typing import Optional

from .types import AlertCode


class HandshakeError(Exception):
    """握手异常基类"""


class HandshakeAlertError(HandshakeError):
    """致命告警异常

    本地检测到的错误（remote=False）需要发给对端；对端发来的告警（remote=True）
    直接交给调用方。
    """

    def __init__(self, code: AlertCode, detail: str = "", remote: bool = False):
        self.code = AlertCode(code)
        self.detail = detail
        self.remote = remote
        origin = "received" if remote else "raised"
        super().__init__(f"Alert {self.code.name.lower()} ({origin}): {detail}")


class DecodeError(HandshakeAlertError):
    """报文格式错误（decode_error）"""

    def __init__(self, detail: str = "", remote: bool = False):
        super().__init__(AlertCode.DECODE_ERROR, detail, remote)


class HandshakeConfigError(HandshakeError, ValueError):
    """本地配置错误，在发出任何字节之前抛出"""

    def __init__(self, message: str, field_name: Optional[str] = None):
        self.field_name = field_name
        super().__init__(message)
