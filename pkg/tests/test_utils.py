import inspect

import pytest

from funceq.core import mc_oracle
from funceq.core.approx import golden_section
from funceq.export.csv_writer import CsvSeriesWriter
from funceq.main import run
from funceq.utils.helpers import chunk_ranges, format_duration, format_real
from funceq.utils.logging import NO_COMMAND, LoggerMixin, command_context, logger, timed


@pytest.fixture
def records():
    captured = []
    sink = logger.add(lambda m: captured.append(m.record), level="TRACE", format="{message}")
    yield captured
    logger.remove(sink)


def test_records_carry_the_command(records):
    with command_context("solve"):
        logger.info("inside")
    logger.info("outside")
    assert [r["extra"]["command"] for r in records] == ["solve", NO_COMMAND]


def test_timed_measures_and_logs(records):
    with timed("grid iteration") as watch:
        sum(range(1000))
    assert watch.seconds > 0
    assert records[-1]["level"].name == "TRACE"
    assert records[-1]["message"].startswith("grid iteration: ")


def test_timed_without_label_is_silent(records):
    with timed() as watch:
        pass
    assert watch.seconds >= 0
    assert records == []


@pytest.mark.parametrize(
    "seconds, text",
    [(2e-6, "2.0us"), (0.0125, "12.5ms"), (3.0, "3.0s"), (90.0, "1.5m"), (5400.0, "1.5h")],
)
def test_format_duration(seconds, text):
    assert format_duration(seconds) == text


def test_chunks_cover_the_range_in_order():
    chunks = list(chunk_ranges(20_000, 8192))
    assert [(c.start, c.stop) for c in chunks] == [(0, 8192), (8192, 16384), (16384, 20000)]


def test_format_real_integers_stay_short():
    assert format_real(1.0) == "1"
    assert format_real(0.0) == "0"


@pytest.mark.parametrize(
    "obj",
    [
        mc_oracle.AbsorptionOracle.estimate_many,
        mc_oracle.simulate_path,
        mc_oracle.estimate,
        CsvSeriesWriter.write_history,
        CsvSeriesWriter.write_oracle,
        LoggerMixin.logger,
        golden_section,
    ],
)
def test_public_callables_document_their_results(obj):
    assert "Returns:" in inspect.getdoc(obj)


def test_entry_point_is_documented():
    assert "main" in inspect.getdoc(run)
