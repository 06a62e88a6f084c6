"""Unit parsing and formatting at the text boundaries.

Internally everything is integer nanoseconds and integer bits/second;
decimal unit suffixes exist only in scenario files, trace files, and
printed statistics. Parsing is exact (no float round-trips) so that
"0.005s" means precisely 5_000_000 ns.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ScenarioError

NS_PER_SEC = 1_000_000_000

_TIME_UNITS = {"s": 1_000_000_000, "ms": 1_000_000, "us": 1_000, "ns": 1}
_BW_UNITS = {"Mb": 1_000_000, "kb": 1_000, "b": 1}


def parse_time(text: str) -> int:
    """Parse '<number>s|ms|us|ns' to integer nanoseconds, exactly."""
    for suffix in ("ms", "us", "ns", "s"):  # longest suffixes first
        if text.endswith(suffix):
            number = text[: -len(suffix)]
            try:
                value = Fraction(number) * _TIME_UNITS[suffix]
            except (ValueError, ZeroDivisionError):
                raise ScenarioError(f"bad time value {text!r}") from None
            if value.denominator != 1:
                raise ScenarioError(f"time {text!r} is not a whole number of nanoseconds")
            if value < 0:
                raise ScenarioError(f"time {text!r} is negative")
            return int(value)
    raise ScenarioError(f"unknown time unit in {text!r} (expected s, ms, us or ns)")


def parse_bandwidth(text: str) -> int:
    """Parse '<int>Mb|kb|b' (decimal) to integer bits/second."""
    for suffix in ("Mb", "kb", "b"):
        if text.endswith(suffix):
            number = text[: -len(suffix)]
            if not number.isdigit():
                raise ScenarioError(f"bad bandwidth value {text!r} (integer required)")
            value = int(number) * _BW_UNITS[suffix]
            if value <= 0:
                raise ScenarioError(f"bandwidth {text!r} must be positive")
            return value
    raise ScenarioError(f"unknown bandwidth unit in {text!r} (expected Mb, kb or b)")


def format_time_fixed(ns: int) -> str:
    """Nanoseconds as decimal seconds with exactly 9 fractional digits."""
    return f"{ns // NS_PER_SEC}.{ns % NS_PER_SEC:09d}"


def format_time_short(ns: int) -> str:
    """Nanoseconds as decimal seconds, trailing zeros trimmed ('500', '0.5')."""
    whole, frac = divmod(ns, NS_PER_SEC)
    if frac == 0:
        return str(whole)
    return f"{whole}.{frac:09d}".rstrip("0")


def render_time(ns: int) -> str:
    """Compact exact scenario-file spelling: largest unit with integer value."""
    for suffix, factor in (("s", 1_000_000_000), ("ms", 1_000_000), ("us", 1_000)):
        if ns % factor == 0:
            return f"{ns // factor}{suffix}"
    return f"{ns}ns"


def render_bandwidth(bps: int) -> str:
    for suffix, factor in (("Mb", 1_000_000), ("kb", 1_000)):
        if bps % factor == 0:
            return f"{bps // factor}{suffix}"
    return f"{bps}b"
