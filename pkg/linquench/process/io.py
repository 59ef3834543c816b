"""
CSV interchange for coefficient sequences (columns: index, a_i).
"""

from pathlib import Path
from typing import Union

from ..artifacts import read_csv_rows, write_csv
from ..errors import InvalidSpecError, SpecFileNotFound
from .models import CoefficientSeq

COEFFICIENT_COLUMNS = ("index", "a_i")


def write_coefficients_csv(a: CoefficientSeq, path: Union[str, Path], seed: int) -> Path:
    rows = ({"index": i, "a_i": v} for i, v in enumerate(a.values))
    return write_csv(path, COEFFICIENT_COLUMNS, rows, seed)


def read_coefficients_csv(path: Union[str, Path], tail_l2: float = 0.0) -> CoefficientSeq:
    """
    Read a coefficient CSV back.

    Indices must run 0, 1, 2, ... without gaps; values are parsed with
    float() so a file written by write_coefficients_csv round-trips exactly.
    """
    path = Path(path)
    if not path.exists():
        raise SpecFileNotFound(f"coefficient file {path} does not exist")
    rows = read_csv_rows(path)
    values = []
    for expected, row in enumerate(rows):
        try:
            index = int(row["index"])
            value = float(row["a_i"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpecError(f"{path}: bad row {expected + 1}: {e}") from e
        if index != expected:
            raise InvalidSpecError(f"{path}: expected index {expected}, found {index}")
        values.append(value)
    return CoefficientSeq.of(values, tail_l2)
