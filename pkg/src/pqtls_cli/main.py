"""命令行入口

加载 .env、初始化配置与日志桥接，然后分发到各子命令。
"""

from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv
from loguru import logger

from pqtls.config import PQTLSConfig, set_config

from .commands.bench import bench
from .commands.debug import debug
from .commands.history import history
from .commands.keygen import keygen
from .commands.registry import registry
from .commands.serve import serve
from .logging_bridge import setup_logging_bridge


def _load_env(env_file: Optional[str]) -> None:
    """加载 .env 文件（如果存在）"""
    path = Path(env_file) if env_file else Path.cwd() / ".env"
    if path.exists():
        load_dotenv(path)


@click.group()
@click.option("--env-file", type=click.Path(dir_okay=False), default=None, help="Path to a .env file")
@click.option("--log-level", default=None, help="Override PQTLS_LOG_LEVEL")
@click.pass_context
def cli(ctx: click.Context, env_file: Optional[str], log_level: Optional[str]) -> None:
    """PQTLS: post-quantum handshake server, client and benchmark."""
    _load_env(env_file)
    config = PQTLSConfig.from_env()
    if log_level:
        config.log_level = log_level.upper()
    set_config(config)
    setup_logging_bridge(config.log_level)
    logger.debug(f"Loaded configuration: {config.model_dump(exclude={'cost_overrides'})}")
    ctx.obj = config


cli.add_command(serve)
cli.add_command(bench)
cli.add_command(registry)
cli.add_command(keygen)
cli.add_command(debug)
cli.add_command(history)


if __name__ == "__main__":
    cli()  # pylint: disable=no-value-for-parameter
