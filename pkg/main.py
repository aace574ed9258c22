"""PQTLS 命令行入口脚本

等价于安装后的 `pqtls` 命令，便于在源码目录直接运行。
"""

import sys
from pathlib import Path

# 将 src 目录添加到 Python 路径
src_path = Path(__file__).parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from pqtls_cli.main import cli  # noqa: E402  pylint: disable=wrong-import-position

if __name__ == "__main__":
    cli()  # pylint: disable=no-value-for-parameter
