"""
Writes experiment reports to an output directory.

- report.csv        statistic,value rows, checks and the verdict
- summary.txt       human-readable summary
- <table>.csv       one file per report table
- ecdf_<name>.csv   sorted normalized samples (and ecdf_<name>.svg on request)

Artifacts hold no wall-clock or thread information, so two runs with the
same configuration and seed produce identical bytes.
"""

import io
import logging
from pathlib import Path
from typing import List, Union

import numpy as np

from ..artifacts import artifact_comment, write_csv, write_text
from .models import ExperimentReport

logger = logging.getLogger(__name__)


def write_ecdf_svg(values: np.ndarray, path: Path, title: str, seed: int) -> Path:
    """Empirical CDF against the standard normal CDF, rendered reproducibly."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from scipy import special

    x = np.sort(np.asarray(values, dtype=np.float64))
    m = len(x)
    grid = np.linspace(min(x[0], -4.0), max(x[-1], 4.0), 400)

    with matplotlib.rc_context({"svg.hashsalt": "linquench", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.step(x, np.arange(1, m + 1) / m, where="post", label="empirical")
        ax.plot(grid, special.ndtr(grid), linestyle="--", label="N(0, 1)")
        ax.set_title(title)
        ax.set_xlabel("normalized value")
        ax.set_ylabel("CDF")
        ax.legend(loc="lower right")
        buf = io.StringIO()
        fig.savefig(buf, format="svg", bbox_inches="tight", metadata={"Date": None})
        plt.close(fig)

    prolog, _, body = buf.getvalue().partition("\n")
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{prolog}\n<!-- {artifact_comment(seed)} -->\n{body}")
    return path


def write_report(report: ExperimentReport, out_dir: Union[str, Path], svg: bool = False) -> List[Path]:
    """Write every artifact of a report; returns the written paths in order."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    written.append(write_csv(out / "report.csv", ("statistic", "value"), report.to_rows(), report.seed))
    written.append(write_text(out / "summary.txt", report.to_text(), report.seed))

    for name, rows in report.tables.items():
        if not rows:
            continue
        written.append(write_csv(out / f"{name}.csv", list(rows[0].keys()), rows, report.seed))

    for name, values in report.samples.items():
        ordered = np.sort(np.asarray(values, dtype=np.float64))
        rows = ({"value": float(v)} for v in ordered)
        written.append(write_csv(out / f"ecdf_{name}.csv", ("value",), rows, report.seed))
        if svg:
            written.append(write_ecdf_svg(ordered, out / f"ecdf_{name}.svg", f"{report.name}: {name}", report.seed))

    logger.info(f"[report] {report.name}: {len(written)} artifacts in {out}")
    return written
