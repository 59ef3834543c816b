"""
Artifact plumbing shared by every writer.

Each artifact carries one comment line naming the version string and the
root seed. CSV and text files open with it, e.g.

    # linquench v0.4.0-3-gabc1234 seed=42

and SVG figures hold it as an XML comment right after the prolog.
"""

import csv
import logging
import subprocess
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from . import __version__

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@lru_cache(maxsize=1)
def version_string() -> str:
    """git-describe of the source checkout, or the package version outside a repo."""
    try:
        p = subprocess.run(
            ["git", "describe", "--tags", "--always"],
            cwd=str(Path(__file__).resolve().parent),
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            check=False,
            text=True,
        )
        described = (p.stdout or "").strip()
        if p.returncode == 0 and described:
            return described
    except Exception:
        pass
    return f"v{__version__}"


def artifact_comment(seed: int) -> str:
    return f"linquench {version_string()} seed={seed}"


def artifact_header(seed: int) -> str:
    return f"# {artifact_comment(seed)}"


def format_value(value: Any) -> str:
    """Shortest round-trip text for floats, plain str() for everything else."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(
    path: PathLike,
    fieldnames: Sequence[str],
    rows: Iterable[Dict[str, Any]],
    seed: int,
) -> Path:
    """Write a header-commented CSV with a fixed column order."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(artifact_header(seed) + "\n")
        w = csv.DictWriter(f, fieldnames=list(fieldnames), extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: format_value(v) for k, v in row.items()})
    logger.debug(f"[artifacts] wrote {path}")
    return path


def read_csv_rows(path: PathLike) -> List[Dict[str, str]]:
    """Read a CSV written by write_csv, skipping comment lines."""
    with open(path, "r", newline="", encoding="utf-8") as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))


def write_text(path: PathLike, body: str, seed: int) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(artifact_header(seed) + "\n")
        f.write(body.rstrip("\n") + "\n")
    return path
