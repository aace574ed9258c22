"""密码套件相关异常"""


class CryptoSuiteError(Exception):
    """密码套件异常基类"""


class UnknownAlgorithmError(CryptoSuiteError):
    """算法未注册异常"""


class WrongKindError(UnknownAlgorithmError):
    """算法类型不匹配异常（例如把 SIG 当作 KEM 使用）"""

    def __init__(self, name: str, expected: str, actual: str):
        self.name = name
        self.expected = expected
        self.actual = actual
        super().__init__(f"Algorithm {name} is {actual}, expected {expected}")


class WrongLengthError(CryptoSuiteError):
    """输入字节长度与注册表元数据不一致"""

    def __init__(self, what: str, expected: int, actual: int):
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected {expected} bytes, got {actual}")


class DomainMismatchError(CryptoSuiteError):
    """多项式所在域（normal / ntt）不符合操作要求"""


class ChainOverflowError(CryptoSuiteError):
    """WOTS 哈希链越界（start + steps > w - 1）"""


class StateExhaustedError(CryptoSuiteError):
    """有状态签名的叶子已全部用完"""
