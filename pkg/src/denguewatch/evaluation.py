"""Scoring of flagged months against an actual-outbreak calendar."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import IngestionError, ParameterError
from .panel import MonthIndex

DEFAULT_MATCH_WINDOW = 1


@dataclass(frozen=True)
class OutbreakCalendar:
    months: tuple  # sorted MonthIndex

    def __post_init__(self):
        object.__setattr__(self, "months", tuple(sorted(set(self.months))))


@dataclass(frozen=True)
class EvalResult:
    matches: int
    false_positives: int
    false_negatives: int
    total_months: int
    error_rate: float

    def to_dict(self) -> dict:
        return {
            "matches": self.matches,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "total_months": self.total_months,
            "error_rate": self.error_rate,
        }


def score(
    predicted,
    actual: OutbreakCalendar,
    span,
    match_window: int = DEFAULT_MATCH_WINDOW,
) -> EvalResult:
    """Greedy chronological one-to-one matching within +-match_window months.

    Unmatched predictions are false positives, unmatched actual outbreaks
    false negatives; the error rate divides their sum by the span length.
    """
    if match_window < 0:
        raise ParameterError(f"match_window must be >= 0, got {match_window}")
    start, end = span
    if end < start:
        raise ParameterError(f"invalid span {start}..{end}")
    pred = sorted(set(predicted))
    act = list(actual.months)
    for t in pred:
        if t < start or t > end:
            raise ParameterError(f"predicted month {t} outside span {start}..{end}")
    for t in act:
        if t < start or t > end:
            raise ParameterError(f"actual month {t} outside span {start}..{end}")

    # Two-pointer sweep: a pair within the window is always matched, since
    # skipping it can never enable more matches later.
    matches = 0
    i = j = 0
    while i < len(pred) and j < len(act):
        delta = pred[i] - act[j]
        if abs(delta) <= match_window:
            matches += 1
            i += 1
            j += 1
        elif delta < 0:
            i += 1
        else:
            j += 1
    fp = len(pred) - matches
    fn = len(act) - matches
    total = end - start + 1
    return EvalResult(
        matches=matches,
        false_positives=fp,
        false_negatives=fn,
        total_months=total,
        error_rate=(fp + fn) / total,
    )


def load_calendar(path) -> OutbreakCalendar:
    """Read outbreak months from any CSV carrying a ``date`` column.

    Extra columns (ranks, flags, ...) are ignored, so both dedicated
    calendars and flagged-months artifacts are accepted.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise IngestionError(f"{path}: no data rows")
    header = [c.strip().lower() for c in rows[0]]
    if "date" not in header:
        raise IngestionError(f"{path}: no 'date' column in header")
    col = header.index("date")
    months = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or len(row) <= col or not row[col].strip():
            continue
        try:
            months.append(MonthIndex.parse(row[col]))
        except IngestionError as exc:
            raise IngestionError(f"{path}: line {lineno}: {exc}") from None
    return OutbreakCalendar(tuple(months))


def write_calendar(calendar: OutbreakCalendar, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date"])
        for t in calendar.months:
            writer.writerow([str(t)])


def _months(*pairs):
    return tuple(MonthIndex(y, m) for y, m in pairs)


def table2_fixture():
    """Published comparison rows: actual outbreaks and both methods' flags.

    Dashes in the source table are omitted; the duplicated multi-criteria
    month (July 2013 appears against two actual rows) collapses in the set.
    """
    actual = OutbreakCalendar(
        _months(
            (2010, 7),
            (2011, 7),
            (2011, 12),
            (2012, 6),
            (2012, 7),
            (2012, 8),
            (2012, 11),
            (2013, 7),
            (2013, 8),
            (2014, 1),
            (2014, 6),
            (2014, 11),
            (2015, 1),
            (2016, 1),
            (2016, 7),
            (2017, 1),
            (2017, 5),
            (2017, 6),
            (2017, 7),
            (2017, 8),
            (2017, 12),
            (2018, 7),
            (2018, 11),
        )
    )
    multicriteria = set(
        _months(
            (2010, 7),
            (2011, 7),
            (2011, 12),
            (2012, 7),
            (2013, 7),
            (2014, 6),
            (2015, 1),
            (2016, 1),
            (2016, 7),
            (2017, 1),
            (2017, 5),
            (2017, 6),
            (2017, 7),
            (2017, 8),
            (2018, 1),
            (2018, 7),
            (2018, 11),
        )
    )
    regression = set(
        _months(
            (2010, 8),
            (2011, 8),
            (2012, 1),
            (2012, 7),
            (2012, 11),
            (2013, 7),
            (2013, 8),
            (2013, 12),
            (2014, 7),
            (2014, 11),
            (2015, 1),
            (2016, 2),
            (2016, 8),
            (2017, 1),
            (2017, 6),
            (2017, 7),
            (2017, 8),
            (2017, 12),
            (2018, 8),
        )
    )
    return actual, multicriteria, regression
