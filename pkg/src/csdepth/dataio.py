"""Dataset and report serialization.

Two dataset formats are supported:

* CSV with header ``color,x0,x1,...,x{d-1}``, one point per row, coordinates
  as decimal strings parsed exactly (6.2 -> 31/5). Fractions whose decimal
  expansion does not terminate are written in ``p/q`` form, which the parser
  also accepts, so write-then-read reproduces coordinates exactly.
* JSON ``{"dim": d, "classes": [[["x", ...], ...], ...]}`` with coordinates
  as strings; rationals serialize as ``p/q``.
"""

from __future__ import annotations

import csv
import json
import os
from fractions import Fraction

from .errors import DatasetUnreadable
from .geometry import ColoredPointSet, Point, as_fraction


def parse_rational(text) -> Fraction:
    """Exact parse of a decimal or p/q coordinate string."""
    try:
        return as_fraction(text if not isinstance(text, str) else text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DatasetUnreadable(f"bad rational {text!r}: {exc}") from exc


def format_rational(value: Fraction) -> str:
    """Serialize a rational as p/q (or a plain integer when q == 1)."""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _decimal_or_ratio(value: Fraction) -> str:
    """Decimal string when the expansion terminates, p/q otherwise."""
    den = value.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        return format_rational(value)
    # scale to an integer over a power of ten
    exp = 0
    den = value.denominator
    while den % 2 == 0:
        den //= 2
        exp += 1
    twos = exp
    exp = 0
    den = value.denominator
    while den % 5 == 0:
        den //= 5
        exp += 1
    fives = exp
    digits = max(twos, fives)
    scaled = value * Fraction(10) ** digits
    assert scaled.denominator == 1
    if digits == 0:
        return str(scaled.numerator)
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    sign = "-" if scaled.numerator < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def save_csv(cps: ColoredPointSet, path: str) -> None:
    d = cps.dim
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["color"] + [f"x{i}" for i in range(d)])
        for color, cls in enumerate(cps.classes):
            for p in cls:
                writer.writerow([color] + [_decimal_or_ratio(c) for c in p.coords])


def load_csv(path: str) -> ColoredPointSet:
    if not os.path.exists(path):
        raise DatasetUnreadable(f"no such dataset: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0].strip().lower() != "color":
        raise DatasetUnreadable(f"{path}: expected header color,x0,...")
    d = len(rows[0]) - 1
    if d < 1:
        raise DatasetUnreadable(f"{path}: header names no coordinates")
    classes: dict[int, list[Point]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != d + 1:
            raise DatasetUnreadable(f"{path}:{lineno}: expected {d + 1} fields, got {len(row)}")
        try:
            color = int(row[0])
        except ValueError as exc:
            raise DatasetUnreadable(f"{path}:{lineno}: bad color {row[0]!r}") from exc
        coords = tuple(parse_rational(c) for c in row[1:])
        classes.setdefault(color, []).append(Point(coords))
    if set(classes) != set(range(d + 1)):
        raise DatasetUnreadable(
            f"{path}: colors must be exactly 0..{d}, got {sorted(classes)}"
        )
    return ColoredPointSet(tuple(tuple(classes[c]) for c in range(d + 1)))


def save_json(cps: ColoredPointSet, path: str) -> None:
    doc = {
        "dim": cps.dim,
        "classes": [
            [[format_rational(c) for c in p.coords] for p in cls] for cls in cps.classes
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_json(path: str) -> ColoredPointSet:
    if not os.path.exists(path):
        raise DatasetUnreadable(f"no such dataset: {path}")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetUnreadable(f"{path}: {exc}") from exc
    try:
        dim = int(doc["dim"])
        classes = doc["classes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetUnreadable(f"{path}: expected dim and classes fields") from exc
    if len(classes) != dim + 1:
        raise DatasetUnreadable(f"{path}: {len(classes)} classes for dim {dim}")
    return ColoredPointSet(
        tuple(
            tuple(Point(tuple(parse_rational(c) for c in coords)) for coords in cls)
            for cls in classes
        )
    )


def load_dataset(path: str) -> ColoredPointSet:
    """Load a dataset, dispatching on extension (.csv or .json)."""
    if path.endswith(".json"):
        return load_json(path)
    if path.endswith(".csv"):
        return load_csv(path)
    raise DatasetUnreadable(f"{path}: unknown dataset extension (want .csv or .json)")


def save_dataset(cps: ColoredPointSet, path: str) -> None:
    if path.endswith(".json"):
        save_json(cps, path)
    elif path.endswith(".csv"):
        save_csv(cps, path)
    else:
        raise DatasetUnreadable(f"{path}: unknown dataset extension (want .csv or .json)")
