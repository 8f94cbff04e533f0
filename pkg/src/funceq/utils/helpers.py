"""Helper utilities and functions."""

import re
from typing import Iterator, Mapping


def format_real(value: float) -> str:
    """Format a real with 17 significant digits, enough to round-trip a double.

    Args:
        value: Number to format

    Returns:
        Decimal text without thousands separators
    """
    return format(float(value), ".17g")


def format_duration(seconds: float) -> str:
    """Format duration in seconds to human-readable string.

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted duration string
    """
    if seconds < 1e-3:
        return f"{seconds * 1e6:.1f}us"
    elif seconds < 1:
        return f"{seconds * 1e3:.1f}ms"
    elif seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = seconds / 60
        return f"{minutes:.1f}m"
    else:
        hours = seconds / 3600
        return f"{hours:.1f}h"


def chunk_ranges(total: int, chunk_size: int) -> Iterator[range]:
    """Split range(total) into consecutive ranges of at most chunk_size items.

    Args:
        total: Number of items
        chunk_size: Size of each chunk

    Returns:
        Iterator over the chunks in order
    """
    for start in range(0, total, chunk_size):
        yield range(start, min(start + chunk_size, total))


def substitute_parameters(source: str, params: Mapping[str, float]) -> str:
    """Replace whole-word parameter names by their parenthesised values.

    Args:
        source: Expression text, e.g. ``"alpha*x + 1 - alpha"``
        params: Parameter values by name

    Returns:
        Expression text containing only numbers and ``x``
    """
    for name in sorted(params, key=len, reverse=True):
        source = re.sub(
            rf"\b{re.escape(name)}\b", f"({float(params[name])!r})", source
        )
    return source
