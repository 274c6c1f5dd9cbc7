"""Deterministic number and table rendering.

All human-readable reports go through these helpers so that identical
inputs always produce byte-identical output: fixed column layout, ASCII
only, round-half-up at a fixed number of decimals, and no locale
dependence anywhere.
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from typing import Sequence

# Plenty of headroom for exact quantization of rational values.
_CTX = decimal.Context(prec=60, rounding=decimal.ROUND_HALF_UP)


def round_half_up(value: Fraction | int, decimals: int = 2) -> decimal.Decimal:
    """Round an exact rational half-up to a fixed number of decimals."""
    frac = Fraction(value)
    quotient = _CTX.divide(decimal.Decimal(frac.numerator), decimal.Decimal(frac.denominator))
    exponent = decimal.Decimal(1).scaleb(-decimals)
    quantized = quotient.quantize(exponent, context=_CTX)
    if quantized.is_zero():
        quantized = abs(quantized)  # never render "-0.00"
    return quantized


def fmt_decimal(value: Fraction | int, decimals: int = 2) -> str:
    """Render a rational as a fixed-point decimal string, half-up."""
    return str(round_half_up(value, decimals))


def fmt_pct(value: Fraction, decimals: int = 2) -> str:
    """Render a 0..100 percentage value."""
    return fmt_decimal(value, decimals)


def fmt_count(n: int) -> str:
    """Counts use a comma thousands separator (locale independent)."""
    return format(n, ",d")


def align_table(
    headers: Sequence[str],
    rows: Sequence[Sequence[str]],
    aligns: Sequence[str] | None = None,
) -> str:
    """Lay out a table with two-space gutters.

    `aligns` holds one of "l"/"r" per column; numbers should be
    right-aligned. Rows shorter than the header are padded with empty
    cells (used for section-heading rows).
    """
    ncols = len(headers)
    if aligns is None:
        aligns = ["l"] + ["r"] * (ncols - 1)
    cells = [list(headers)] + [list(r) + [""] * (ncols - len(r)) for r in rows]
    widths = [max(len(row[c]) for row in cells) for c in range(ncols)]
    lines = []
    for row in cells:
        parts = []
        for c in range(ncols):
            if aligns[c] == "r":
                parts.append(row[c].rjust(widths[c]))
            else:
                parts.append(row[c].ljust(widths[c]))
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines)
