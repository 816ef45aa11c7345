"""Gap and digit statistics of greedy runs, plus the expected-gap model.

Conventions (they are what reproduces the published tables exactly):

* A gap is the number of zeros after a nonzero digit, ``d[i+1] - d[i] - 1``.
  The gap histogram uses every recorded gap, including the one after the
  seed digit and the open run after the last committed digit.
* Quartile ``q`` is the cumulative prefix of the first
  ``n - (4 - q) * ceil(n / 4)`` gaps, which is ``q * n / 4`` whenever
  ``4`` divides ``n``.
* Digit frequencies count the odd digits ``b_2, b_3, ...``; the seed's units
  digit is even and excluded unless asked for.
* The digit/gap matrix only uses gaps closed on both sides by committed odd
  digits.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .greedy_engine import RunRecord

ODD_DIGITS = (1, 3, 5, 7, 9)
SLICES = ("q1", "q2", "q3", "q4", "full")


class EmptySliceError(ValueError):
    pass


@dataclass(frozen=True)
class GapHistogram:
    counts: dict[int, int]
    weighted: dict[int, int]
    average: Fraction

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class DigitGapMatrix:
    gap_sizes: list[int]
    counts: dict[int, dict[int, int]]
    probabilities: dict[int, dict[int, Fraction]]

    def row_total(self, digit: int) -> int:
        return sum(self.counts[digit].values())


def quartile_cut(n: int, q: int) -> int:
    """Number of leading gaps in cumulative quartile ``q`` of ``n`` gaps."""
    if not 1 <= q <= 4:
        raise ValueError(f"quartile must be 1..4, got {q}")
    return n - (4 - q) * math.ceil(n / 4)


def gap_slice(gaps: list[int], which: str = "full") -> list[int]:
    if which == "full":
        return list(gaps)
    if which not in SLICES:
        raise ValueError(f"unknown slice {which!r}; expected one of {SLICES}")
    return list(gaps[: max(quartile_cut(len(gaps), int(which[1])), 0)])


def histogram(gaps: list[int]) -> GapHistogram:
    if not gaps:
        raise EmptySliceError("no gaps in slice")
    c = Counter(gaps)
    sizes = range(0, max(c) + 1)
    counts = {g: c[g] for g in sizes}
    weighted = {g: g * c[g] for g in sizes}
    return GapHistogram(counts, weighted, Fraction(sum(weighted.values()), len(gaps)))


def gap_histogram(r: RunRecord, slice: str = "full") -> GapHistogram:
    return histogram(gap_slice(r.gaps, slice))


def digit_frequency(r: RunRecord, prefix: Optional[int] = None,
                    include_seed: bool = False) -> dict[int, tuple[int, Fraction]]:
    """Counts and proportions of the nonzero digits.

    ``prefix`` limits the count to the first ``prefix`` digits considered
    (after dropping the seed, unless ``include_seed``).
    """
    if not r.digits:
        raise EmptySliceError("record has no digits")
    digits = r.b if include_seed else r.b[1:]
    if prefix is not None:
        if prefix > len(digits):
            raise ValueError(f"prefix {prefix} exceeds the {len(digits)} available digits")
        digits = digits[:prefix]
    if not digits:
        raise EmptySliceError("no digits selected")
    c = Counter(digits)
    keys = sorted(set(c) | set(ODD_DIGITS))
    return {k: (c[k], Fraction(c[k], len(digits))) for k in keys}


def digit_gap_matrix(r: RunRecord) -> DigitGapMatrix:
    if not r.digits:
        raise EmptySliceError("record has no digits")
    rows = {b: Counter() for b in ODD_DIGITS}
    # the last gap is open: no committed digit closes it
    for (b, _), gap in zip(r.digits[:-1], r.gaps[:-1]):
        if b in rows:
            rows[b][gap] += 1
    seen = [g for row in rows.values() for g in row]
    sizes = list(range(min(seen), max(seen) + 1)) if seen else []
    counts = {b: {g: rows[b][g] for g in sizes} for b in ODD_DIGITS}
    probs = {}
    for b in ODD_DIGITS:
        total = sum(counts[b].values())
        probs[b] = {g: Fraction(n, total) if total else Fraction(0) for g, n in counts[b].items()}
    return DigitGapMatrix(sizes, counts, probs)


# -- expected-gap model ---------------------------------------------------------

def arithmetico_geometric(r: Fraction) -> Fraction:
    """``sum(n * r**n for n >= 0) == r / (1 - r)**2`` for ``|r| < 1``."""
    r = Fraction(r)
    if not -1 < r < 1:
        raise ValueError(f"series diverges for r = {r}")
    return r / (1 - r) ** 2


def tail_after_forced() -> Fraction:
    """Expected extra zeros when each further digit is zero with probability 1/2.

    ``sum(n / 2**(n+1) for n >= 1) == (1/2) * sum(n * (1/2)**n)``.
    """
    return Fraction(1, 2) * arithmetico_geometric(Fraction(1, 2))


def partial_tail(terms: int) -> Fraction:
    return sum((Fraction(n, 2 ** (n + 1)) for n in range(1, terms + 1)), Fraction(0))


def model_expected_gap() -> tuple[Fraction, Fraction, Fraction]:
    """``(N, M, E)``: expected zeros after a 3/5/7, after a 1/9, and overall.

    A 3, 5 or 7 is followed by two forced zeros, a 1 or 9 by three, each
    then followed by the geometric tail; 1 and 9 together make up a quarter
    of the digits.
    """
    tail = tail_after_forced()
    n = 2 + tail
    m = 3 + tail
    return n, m, Fraction(1, 4) * m + Fraction(3, 4) * n


# -- output ---------------------------------------------------------------------

def fmt_fraction(x: Fraction, places: int) -> str:
    """Decimal rendering of an exact rational, rounded half up."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = (2 * x.numerator * 10**places + x.denominator) // (2 * x.denominator)
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


@dataclass(frozen=True)
class Table:
    table_id: str
    column_labels: list[str]
    row_labels: list[str]
    cells: list[list[Union[int, str]]]
    average: Optional[Fraction] = None
    average_places: int = 9

    def to_json_obj(self) -> dict:
        obj = {
            "table": self.table_id,
            "column_labels": self.column_labels,
            "row_labels": self.row_labels,
            "cells": self.cells,
        }
        if self.average is not None:
            obj["average"] = {
                "numerator": self.average.numerator,
                "denominator": self.average.denominator,
                "decimal": fmt_fraction(self.average, self.average_places),
            }
        return obj

    def rows(self) -> list[list[str]]:
        out = [self.column_labels]
        for label, row in zip(self.row_labels, self.cells):
            out.append([label] + [str(c) for c in row])
        if self.average is not None:
            out.append(["Average", fmt_fraction(self.average, self.average_places)])
        return out


def gaps_table(h: GapHistogram, slice: str = "full") -> Table:
    sizes = sorted(h.counts)
    return Table(
        f"gaps-{slice}",
        ["Gap Size", "Frequency", "Weighted Sum"],
        [str(g) for g in sizes],
        [[h.counts[g], h.weighted[g]] for g in sizes],
        average=h.average,
    )


def digits_table(freq: dict[int, tuple[int, Fraction]], places: int = 3) -> Table:
    keys = sorted(freq)
    total = sum(c for c, _ in freq.values())
    return Table(
        "digits",
        ["Digit"] + [str(k) for k in keys] + ["Total"],
        ["Frequency", "Proportion"],
        [[freq[k][0] for k in keys] + [total],
         [fmt_fraction(freq[k][1], places) for k in keys] + [""]],
    )


def matrix_table(m: DigitGapMatrix) -> Table:
    return Table(
        "matrix",
        ["Digit"] + [str(g) for g in m.gap_sizes],
        [str(b) for b in ODD_DIGITS],
        [[m.counts[b][g] for g in m.gap_sizes] for b in ODD_DIGITS],
    )


def probabilities_table(m: DigitGapMatrix, places: int = 3) -> Table:
    return Table(
        "probabilities",
        ["Digit"] + [str(g) for g in m.gap_sizes],
        [str(b) for b in ODD_DIGITS],
        [[fmt_fraction(m.probabilities[b][g], places) for g in m.gap_sizes] for b in ODD_DIGITS],
    )


def render(tables: list[Table], fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps([t.to_json_obj() for t in tables], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for i, t in enumerate(tables):
            if i:
                w.writerow([])
            w.writerows(t.rows())
        return buf.getvalue()
    if fmt == "text":
        chunks = []
        for t in tables:
            rows = t.rows()
            width = max(len(c) for row in rows for c in row)
            lines = [f"# {t.table_id}"]
            lines += [" ".join(c.rjust(width) for c in row) for row in rows]
            chunks.append("\n".join(lines))
        return "\n\n".join(chunks) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
