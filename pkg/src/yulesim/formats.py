"""Shared text formats.

Two conventions are used everywhere output is produced:

* numbers print in decimal (never scientific) notation with 12 significant
  digits and no locale-dependent formatting, so outputs are byte-reproducible;
* visitor-count histograms travel as a tiny CSV with header ``n,count`` and
  rows in strictly ascending n.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import FormatError

HIST_HEADER = "n,count"


def fmt12(x: float) -> str:
    """Format a number with 12 significant digits in plain decimal notation.

    Integral values drop the trailing ``.0`` (alpha=3 renders as ``3``).
    """
    xf = float(x)
    if not math.isfinite(xf):
        return str(xf)
    return np.format_float_positional(
        xf, precision=12, unique=False, fractional=False, trim="-"
    )


def write_histogram(hist: Mapping[int, int], out: TextIO) -> None:
    """Write the shared ``n,count`` CSV, rows ascending in n."""
    out.write(HIST_HEADER + "\n")
    for n in sorted(hist):
        count = hist[n]
        if count:
            out.write(f"{n},{count}\n")


def read_histogram(lines: Iterable[str]) -> Counter:
    """Parse an ``n,count`` CSV back into a histogram.

    Raises FormatError on a missing header, malformed rows, non-positive n,
    negative counts, or out-of-order rows.
    """
    it = iter(lines)
    try:
        header = next(it)
    except StopIteration:
        raise FormatError("empty histogram input") from None
    if header.strip() != HIST_HEADER:
        raise FormatError(f"expected header {HIST_HEADER!r}, got {header.strip()!r}")
    hist: Counter = Counter()
    prev = 0
    for lineno, line in enumerate(it, start=2):
        line = line.strip()
        if not line:
            raise FormatError(f"blank line {lineno} in histogram input")
        try:
            n_str, count_str = line.split(",")
            n, count = int(n_str), int(count_str)
        except ValueError:
            raise FormatError(f"malformed histogram row {lineno}: {line!r}") from None
        if n < 1 or count < 0:
            raise FormatError(f"out-of-domain histogram row {lineno}: {line!r}")
        if n <= prev:
            raise FormatError(f"histogram rows must be strictly ascending in n (row {lineno})")
        prev = n
        if count:
            hist[n] = count
    return hist
