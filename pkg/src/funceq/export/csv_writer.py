"""CSV writer for solution curves, histories and benchmark tables."""

import csv
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from funceq.exceptions import OutputFileError
from funceq.models.grid import GridFunction
from funceq.models.oracle import OracleEstimate
from funceq.models.reports import ConvergenceHistory
from funceq.utils.helpers import format_real
from funceq.utils.logging import LoggerMixin

Cell = Union[int, float, np.integer, np.floating]


def _format_cell(value: Cell) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format_real(value)


class CsvSeriesWriter(LoggerMixin):
    """Writes one CSV file: a fixed header, newline-terminated rows, 17 significant digits."""

    def __init__(self, path: Union[str, Path]):
        """
        Initialize the writer.

        Args:
            path: Destination file; parent directories are created on write
        """
        self.path = Path(path)

    def write(self, header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> Path:
        """Write the header and rows, replacing any existing file.

        Raises:
            OutputFileError: If the file cannot be created or written.
        """
        count = 0
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(header)
                for row in rows:
                    writer.writerow([_format_cell(v) for v in row])
                    count += 1
        except OSError as e:
            raise OutputFileError(str(self.path), e) from e
        self.logger.info(f"Wrote {count} rows to {self.path}")
        return self.path

    def write_columns(
        self, header: Sequence[str], columns: Sequence[np.ndarray]
    ) -> Path:
        """Write equal-length columns side by side."""
        return self.write(header, zip(*(np.asarray(c).tolist() for c in columns)))

    def write_solution(
        self, f: GridFunction, snapshots: Optional[Mapping[int, GridFunction]] = None
    ) -> Path:
        """Write "x,f", or "x,f,f<k>,..." with the requested iterates appended."""
        header = ["x", "f"]
        columns = [f.nodes, f.values]
        for k, g in sorted((snapshots or {}).items()):
            header.append(f"f{k}")
            columns.append(g.values)
        return self.write_columns(header, columns)

    def write_history(self, history: ConvergenceHistory) -> Path:
        """Write one row per Picard iteration.

        Args:
            history: Iteration records of a solve.

        Returns:
            Path of the written file, with columns n,d_sup,d_l2,d_lip,seconds.
        """
        return self.write(
            ["n", "d_sup", "d_l2", "d_lip", "seconds"],
            ((r.n, r.d_sup, r.d_l2, r.d_lip, r.seconds) for r in history.records),
        )

    def write_oracle(self, estimates: Sequence[OracleEstimate]) -> Path:
        """Write one row per oracle start point.

        Args:
            estimates: Oracle results in point order.

        Returns:
            Path of the written file, with columns x,p_hat,ci,timeouts.
        """
        return self.write(
            ["x", "p_hat", "ci", "timeouts"],
            ((e.x, e.p_hat, e.ci_halfwidth, e.timeouts) for e in estimates),
        )

    def write_error_series(self, errors: Sequence[float]) -> Path:
        """Write "n,error" starting at n = 0."""
        return self.write(["n", "error"], enumerate(errors))
