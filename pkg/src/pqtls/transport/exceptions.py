"""传输层异常"""


class TransportError(Exception):
    """传输层异常基类"""


class ConnectionRefusedTransportError(TransportError):
    """连接被拒绝（端口未监听）"""

    def __init__(self, address: str, reason: str = ""):
        self.address = address
        super().__init__(f"Connection to {address} refused{': ' + reason if reason else ''}")


class HandshakeTimeoutError(TransportError):
    """握手超时"""

    def __init__(self, timeout_ms: int):
        self.timeout_ms = timeout_ms
        super().__init__(f"Handshake did not complete within {timeout_ms} ms")


class ServerBindError(TransportError):
    """监听地址绑定失败"""
