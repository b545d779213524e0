"""Access-log ingestion and synthesis.

Reduces line-oriented visit logs to unique-visitors-per-site histograms over
a time window (the measurement behind the visitor-count distribution), and
synthesizes logs from simulator runs so the whole pipeline can be exercised
end to end without proprietary data.

A trace file is plain text, one record per line, with a configurable
delimiter and column order; identifiers are UTF-8, the optional timestamp
column is integer seconds.  "Site" means the URL host when the site column
carries full URLs; path-level grouping is out of scope.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO
from urllib.parse import urlsplit

from .errors import DomainError, TraceFormatError, WindowError
from .urn import SimConfig, run_replica

__all__ = [
    "FormatSpec",
    "ParseStats",
    "SynthesisSummary",
    "TimeWindow",
    "TraceRecord",
    "VisitSummary",
    "host_of_url",
    "parse_trace",
    "synthesize_trace",
    "synthetic_records",
    "unique_visitors",
    "write_trace",
]

_COLUMN_NAMES = ("user", "site", "timestamp")


@dataclass(frozen=True)
class TraceRecord:
    """One log entry: user id, site id, optional timestamp (epoch seconds)."""

    user_id: str
    site_id: str
    timestamp: int | None = None


@dataclass(frozen=True)
class TimeWindow:
    """Half-open observation window [start, end); None bounds are unbounded."""

    start: int | None = None
    end: int | None = None

    def __post_init__(self) -> None:
        if self.start is not None and self.end is not None and not self.start < self.end:
            raise DomainError(f"window start must precede end, got [{self.start}, {self.end})")

    @property
    def bounded(self) -> bool:
        return self.start is not None or self.end is not None

    def contains(self, timestamp: int | None) -> bool:
        """Timestampless records pass only an unbounded window."""
        if timestamp is None:
            return not self.bounded
        if self.start is not None and timestamp < self.start:
            return False
        if self.end is not None and timestamp >= self.end:
            return False
        return True


@dataclass(frozen=True)
class FormatSpec:
    """Shape of one trace line.

    ``columns`` lists the declared fields in order, from {'user', 'site',
    'timestamp'}.  A trailing 'timestamp' column may be missing or empty on
    individual lines (the record then has no timestamp); extra input columns
    beyond the declared ones are ignored.  With ``site_is_url`` the site
    field is reduced to its lowercased host with any port stripped.
    """

    delimiter: str = ","
    columns: tuple[str, ...] = ("user", "site", "timestamp")
    site_is_url: bool = False

    def __post_init__(self) -> None:
        if not self.delimiter:
            raise DomainError("delimiter must be a nonempty string")
        if len(set(self.columns)) != len(self.columns):
            raise DomainError(f"duplicate column names in {self.columns!r}")
        for name in self.columns:
            if name not in _COLUMN_NAMES:
                raise DomainError(f"unknown column {name!r} (expected one of {_COLUMN_NAMES})")
        if "user" not in self.columns or "site" not in self.columns:
            raise DomainError("columns must include 'user' and 'site'")


@dataclass
class ParseStats:
    """Running tally filled in by :func:`parse_trace`."""

    records: int = 0
    skipped: int = 0


@dataclass(frozen=True)
class VisitSummary:
    """Distinct-entity totals over the analyzed window."""

    users: int
    sites: int

    def __str__(self) -> str:
        return f"{self.users:,} users visited {self.sites:,} sites"


@dataclass(frozen=True)
class SynthesisSummary:
    records: int
    users: int
    sites: int


def host_of_url(url: str) -> str | None:
    """Lowercased host component of a URL, port stripped; None if unextractable."""
    try:
        host = urlsplit(url).hostname
    except ValueError:
        return None
    if host is None and "//" not in url:
        # schemeless form like "example.com/page"
        try:
            host = urlsplit("//" + url).hostname
        except ValueError:
            return None
    return host or None


def parse_trace(
    lines: Iterable[str],
    fmt: FormatSpec = FormatSpec(),
    stats: ParseStats | None = None,
) -> Iterator[TraceRecord]:
    """Stream records off line-oriented text, one per nonempty line.

    Malformed lines (too few columns, empty identifiers, unparsable
    timestamps, unextractable hosts in URL mode) are counted in
    ``stats.skipped`` and dropped, never fatal per line.  If malformed lines
    end up the majority once the stream is exhausted, TraceFormatError is
    raised: the format spec almost certainly does not match the file.
    """
    if stats is None:
        stats = ParseStats()
    pos = {name: i for i, name in enumerate(fmt.columns)}
    u_pos, s_pos = pos["user"], pos["site"]
    t_pos = pos.get("timestamp")
    need = max(pos.values()) + 1
    # a trailing timestamp column may be absent from individual lines
    min_need = need - 1 if t_pos == need - 1 else need

    for raw in lines:
        line = raw.rstrip("\r\n")
        if not line:
            continue
        parts = line.split(fmt.delimiter)
        if len(parts) < min_need:
            stats.skipped += 1
            continue
        user = parts[u_pos].strip()
        site = parts[s_pos].strip()
        timestamp: int | None = None
        if t_pos is not None and t_pos < len(parts):
            ts_text = parts[t_pos].strip()
            if ts_text:
                try:
                    timestamp = int(ts_text)
                except ValueError:
                    stats.skipped += 1
                    continue
        if fmt.site_is_url:
            site = host_of_url(site) or ""
        if not user or not site:
            stats.skipped += 1
            continue
        stats.records += 1
        yield TraceRecord(user, site, timestamp)

    if stats.skipped > stats.records:
        total = stats.records + stats.skipped
        raise TraceFormatError(
            f"{stats.skipped} of {total} lines unparsable; format spec mismatch?"
        )


def unique_visitors(
    records: Iterable[TraceRecord], window: TimeWindow = TimeWindow()
) -> tuple[Counter, VisitSummary]:
    """Count distinct users per site inside the window.

    Repeat visits by the same user to the same site collapse to one.  Returns
    the histogram (n -> number of sites with exactly n distinct visitors)
    plus the distinct user/site totals over the window.  Raises WindowError
    when the window is bounded but no record carries a timestamp.
    """
    per_site: dict[str, set[str]] = {}
    users: set[str] = set()
    saw_timestamp = False
    for rec in records:
        if rec.timestamp is not None:
            saw_timestamp = True
        if not window.contains(rec.timestamp):
            continue
        users.add(rec.user_id)
        per_site.setdefault(rec.site_id, set()).add(rec.user_id)
    if window.bounded and not saw_timestamp:
        raise WindowError("window bounds given but no record carries a timestamp")
    hist = Counter(len(s) for s in per_site.values())
    return hist, VisitSummary(users=len(users), sites=len(per_site))


def synthetic_records(config: SimConfig) -> Iterator[TraceRecord]:
    """Simulated visits as trace records, one fresh user per visit.

    Step k emits user ``u<k>`` visiting site ``s<discovery-index>`` at
    timestamp k, so the unique-visitor reduction of the trace reproduces the
    simulator's own histogram exactly.
    """
    state = run_replica(config, 0)
    for k, site in enumerate(state.visit_sequence(), start=1):
        yield TraceRecord(f"u{k}", f"s{site + 1}", k)


def write_trace(
    records: Iterable[TraceRecord], out: TextIO, fmt: FormatSpec = FormatSpec()
) -> int:
    """Write records one per line in the given format; returns the line count."""
    written = 0
    for rec in records:
        fields = {
            "user": rec.user_id,
            "site": rec.site_id,
            "timestamp": "" if rec.timestamp is None else str(rec.timestamp),
        }
        out.write(fmt.delimiter.join(fields[c] for c in fmt.columns) + "\n")
        written += 1
    return written


def synthesize_trace(config: SimConfig, out: TextIO) -> SynthesisSummary:
    """Run the simulation and write one ``u<k>,s<site>,<k>`` line per visit.

    Output is deterministically ordered by step; line count equals
    ``config.steps``.
    """
    state = run_replica(config, 0)
    sequence = state.visit_sequence()
    for k, site in enumerate(sequence, start=1):
        out.write(f"u{k},s{site + 1},{k}\n")
    return SynthesisSummary(records=len(sequence), users=len(sequence), sites=state.num_sites)
