"""
CSV emission and optional SVG plots of experiment results
"""

import math
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

import aiofiles
import matplotlib
import numpy as np
from loguru import logger

from ..utils.stats import FitResult

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def format_value(value: Any) -> str:
    """Integers as is, reals with 17 significant digits, booleans as 0/1"""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    text = str(value)
    if "," in text or '"' in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


def render_csv(header: Sequence[str], rows: Iterable[dict]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(row.get(column, float("nan"))) for column in header))
    return "\n".join(lines) + "\n"


async def write_csv(path: Path, header: Sequence[str], rows: List[dict]) -> Path:
    """Write ``rows`` under a fixed header; missing cells are written as nan"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    async with aiofiles.open(path, 'w', encoding='utf-8', newline='') as f:
        await f.write(render_csv(header, rows))
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path


async def read_csv(path: Path) -> List[dict]:
    """Read back a CSV written by ``write_csv`` as dictionaries of strings"""
    async with aiofiles.open(path, 'r', encoding='utf-8') as f:
        content = await f.read()
    lines = [line for line in content.splitlines() if line]
    if not lines:
        return []
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def plot_loglog(path: Path, x: Sequence[float], y: Sequence[float], fit: Optional[FitResult],
                title: str, xlabel: str, ylabel: str, reference_slope: Optional[float] = None) -> Path:
    """Log-log scatter with the fitted line and an optional reference slope"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(x_arr, y_arr, "o", label="data")
    if fit is not None and x_arr.size:
        grid = np.geomspace(x_arr.min(), x_arr.max(), 50)
        ax.loglog(grid, np.exp(fit.intercept) * grid ** fit.slope, "-", label=f"fit slope {fit.slope:.3f}")
        if reference_slope is not None:
            anchor = np.exp(fit.intercept) * x_arr.min() ** fit.slope
            ax.loglog(grid, anchor * (grid / x_arr.min()) ** reference_slope, "--",
                      label=f"reference slope {reference_slope:.3f}")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"Wrote plot {path}")
    return path
