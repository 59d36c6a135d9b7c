"""Cluster-allocation matrices: validation, classification, CSV I/O, hardening.

A cluster allocation assigns each point a nonnegative membership vector,
one coordinate per cluster. Allocations are classified as HARD (one-hot
rows), FUZZY (rows on the probability simplex), or POSSIBILISTIC (anything
else with nonnegative finite entries). The index machinery in this package
accepts HARD and FUZZY allocations only; possibilistic matrices are legal
at I/O time so they can be inspected and repaired.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ParseError, ValidationError

# Row sums must be within this of 1 to count as fuzzy. Generous for CSV
# round-trips, strict enough to catch modeling errors.
ROW_SUM_TOL = 1e-9
# Entries must be within this of {0, 1} to count as hard.
HARD_TOL = 1e-12


class Classification(Enum):
    """Nested allocation classes: HARD rows are fuzzy, fuzzy rows are possibilistic."""

    HARD = "hard"
    FUZZY = "fuzzy"
    POSSIBILISTIC = "possibilistic"

    @property
    def is_simplex(self) -> bool:
        """True when rows lie on the probability simplex (HARD or FUZZY)."""
        return self is not Classification.POSSIBILISTIC


@dataclass(frozen=True, eq=False)
class MembershipMatrix:
    """An n_points x n_clusters matrix of membership vectors, one row per point.

    Immutable after construction; the backing array is marked read-only so
    instances are safe to share across threads.
    """

    values: np.ndarray
    _hash: str = field(init=False, repr=False, default="")

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True, order="C")
        if arr.ndim != 2:
            raise ValidationError(f"membership matrix must be 2-D, got ndim={arr.ndim}")
        n_points, n_clusters = arr.shape
        if n_points < 1:
            raise ValidationError("membership matrix needs at least one row")
        if n_clusters < 1:
            raise ValidationError("membership matrix needs at least one column")
        bad = ~np.isfinite(arr)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValidationError(f"non-finite entry at row {i}, column {j}")
        neg = arr < 0
        if neg.any():
            i, j = np.argwhere(neg)[0]
            raise ValidationError(f"negative entry {arr[i, j]!r} at row {i}, column {j}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "_hash", "")

    @property
    def n_points(self) -> int:
        return self.values.shape[0]

    @property
    def n_clusters(self) -> int:
        return self.values.shape[1]

    def content_hash(self) -> str:
        """Stable hex digest of shape and values, usable as a cache key."""
        if not self._hash:
            h = hashlib.sha256()
            h.update(repr(self.values.shape).encode())
            h.update(self.values.tobytes())
            object.__setattr__(self, "_hash", h.hexdigest())
        return self._hash


def classify(m: MembershipMatrix) -> Classification:
    """Classify an allocation as HARD, FUZZY, or POSSIBILISTIC.

    HARD means every row has exactly one entry equal to 1 and the rest 0
    (within 1e-12); FUZZY means every row sums to 1 (within 1e-9).
    """
    arr = m.values
    near_one = np.abs(arr - 1.0) <= HARD_TOL
    near_zero = np.abs(arr) <= HARD_TOL
    hard_rows = (near_one.sum(axis=1) == 1) & ((near_one | near_zero).all(axis=1))
    if hard_rows.all():
        return Classification.HARD
    if np.all(np.abs(arr.sum(axis=1) - 1.0) <= ROW_SUM_TOL):
        return Classification.FUZZY
    return Classification.POSSIBILISTIC


def require_simplex(m: MembershipMatrix, what: str = "input") -> Classification:
    """Return the classification, rejecting possibilistic matrices."""
    c = classify(m)
    if not c.is_simplex:
        raise ValidationError(
            f"{what} must be a hard or fuzzy allocation (rows summing to 1); "
            "got a possibilistic matrix"
        )
    return c


def harden(m: MembershipMatrix) -> MembershipMatrix:
    """Replace each row by the indicator of its largest entry.

    Ties break toward the lowest column index, so the result is
    deterministic. Input must be HARD or FUZZY; hard rows pass through
    unchanged.
    """
    require_simplex(m)
    out = np.zeros_like(m.values)
    out[np.arange(m.n_points), np.argmax(m.values, axis=1)] = 1.0
    return MembershipMatrix(out)


def read_csv(path, has_header: bool = False) -> MembershipMatrix:
    """Read a membership matrix from a CSV file.

    One point per row, one cluster per column, '.' decimal separator,
    optional single header row. Raises ParseError with a 1-based line
    number on ragged rows, unparseable fields, or an empty file.
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, record in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if not record or all(f.strip() == "" for f in record):
                continue
            if width is None:
                width = len(record)
            elif len(record) != width:
                raise ParseError(
                    f"expected {width} columns, found {len(record)}", line=lineno
                )
            try:
                rows.append([float(f) for f in record])
            except ValueError:
                bad = next(f for f in record if not _parses_as_float(f))
                raise ParseError(f"unparseable field {bad!r}", line=lineno) from None
    if not rows:
        raise ParseError("no data rows in file", line=1)
    return MembershipMatrix(np.asarray(rows))


def _parses_as_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def write_csv(m: MembershipMatrix, path, header=None) -> None:
    """Write a membership matrix as CSV, the inverse of read_csv.

    Values are written with full precision so a read/write cycle
    round-trips exactly. ``header`` is an optional sequence of column names.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            if len(header) != m.n_clusters:
                raise ValidationError(
                    f"header has {len(header)} names for {m.n_clusters} columns"
                )
            writer.writerow(header)
        for row in m.values:
            writer.writerow([repr(float(v)) for v in row])
