"""Export package for plot-ready CSV series."""

from funceq.export.csv_writer import CsvSeriesWriter

__all__ = ["CsvSeriesWriter"]
