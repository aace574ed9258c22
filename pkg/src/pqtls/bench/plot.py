"""用 matplotlib 绘制 ratio 柱状图（需要 pqtls[plot]）"""

import logging
from pathlib import Path
from typing import Union

from .exceptions import BenchError
from .types import BenchReport

logger = logging.getLogger(__name__)


def render_plot(report: BenchReport, path: Union[str, Path], title: str = "Handshake connections relative to control") -> Path:
    """把每个算法对的 ratio_to_control 画成柱状图并保存

    Raises:
        BenchError: 未安装 matplotlib
    """
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as e:
        raise BenchError("Plotting requires matplotlib: pip install 'pqtls[plot]'") from e

    labels = [row.pair for row in report.rows]
    ratios = [row.ratio_to_control for row in report.rows]
    colors = ["tab:gray" if row.is_control else "tab:blue" for row in report.rows]

    fig, ax = plt.subplots(figsize=(max(6.0, 0.8 * len(labels) + 2), 4.5))
    ax.bar(labels, ratios, color=colors)
    ax.axhline(1.0, color="black", linewidth=0.8, linestyle="--")
    ax.set_ylabel("ratio to control (cps)")
    ax.set_title(f"{title} [{report.mode.value}]")
    ax.tick_params(axis="x", labelrotation=45)
    fig.tight_layout()

    output = Path(path)
    fig.savefig(output)
    plt.close(fig)
    logger.info(f"Saved plot to {output}")
    return output
