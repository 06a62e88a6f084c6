"""Offline trace analytics: throughput, loss, delay, utilization.

All functions stream over trace lines in a single pass with bounded
per-packet state (a packet's state is retired when it is received or
dropped), so results do not depend on how the input is chunked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import TraceError
from .trace import OPS, TraceRecord
from .units import NS_PER_SEC


@dataclass
class FlowStats:
    fid: int
    sent: int = 0
    received: int = 0
    dropped: int = 0
    bytes_received: int = 0
    mean_delay: float | None = None  # seconds; None when nothing received
    max_delay: float | None = None


def _parse_addr(field: str, lineno, what: str) -> tuple[int, int]:
    node, dot, port = field.partition(".")
    if not dot or not node.isdigit() or not port.isdigit():
        raise TraceError(f"bad {what} address {field!r}", lineno)
    return int(node), int(port)


def parse_line(text: str, lineno: int | None = None) -> TraceRecord:
    """Strict parse of one 12-field trace line back into a TraceRecord."""
    fields = text.split()
    if len(fields) != 12:
        raise TraceError(f"expected 12 fields, got {len(fields)}", lineno)
    op, time_s, frm, to, ptype, size, flags, fid, src, dst, seq, uid = fields
    if op not in OPS:
        raise TraceError(f"unknown event type {op!r}", lineno)
    whole, dot, frac = time_s.partition(".")
    if not dot or len(frac) != 9 or not whole.isdigit() or not frac.isdigit():
        raise TraceError(f"bad timestamp {time_s!r} (want 9 fractional digits)", lineno)
    if len(flags) != 7:
        raise TraceError(f"bad flags field {flags!r}", lineno)
    for name, value in (("from", frm), ("to", to), ("size", size),
                        ("fid", fid), ("seq", seq), ("uid", uid)):
        if not value.isdigit():
            raise TraceError(f"bad {name} field {value!r}", lineno)
    src_node, src_port = _parse_addr(src, lineno, "source")
    dst_node, dst_port = _parse_addr(dst, lineno, "destination")
    return TraceRecord(
        op=op,
        time=int(whole) * NS_PER_SEC + int(frac),
        from_node=int(frm),
        to_node=int(to),
        ptype=ptype,
        size=int(size),
        flags=flags,
        fid=int(fid),
        src_node=src_node,
        src_port=src_port,
        dst_node=dst_node,
        dst_port=dst_port,
        seq=int(seq),
        uid=int(uid),
    )


def iter_records(lines: Iterable[str]) -> Iterator[tuple[int, TraceRecord]]:
    """Yield (lineno, record) pairs; blank lines are skipped."""
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            yield lineno, parse_line(line, lineno)


def utilization(bytes_delivered: int, duration: float, bandwidth: float) -> float:
    """Delivered bits over link capacity, as a percentage.

    Evaluated exactly as bytes * 8 / (bandwidth * duration) * 100 in
    binary floating point, preserving that operation order.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    return bytes_delivered * 8.0 / (bandwidth * duration) * 100.0


def flow_stats(lines: Iterable[str], fid: int, source: int, sink: int) -> FlowStats:
    """Per-flow counters from a trace.

    sent counts a packet's first enqueue at its source node; received
    counts deliveries at the sink node; delay for a received packet runs
    from that first enqueue to delivery (first-hop transmission
    included).
    """
    stats = FlowStats(fid=fid)
    sent_at: dict[int, int] = {}  # uid -> first '+' time at source
    delay_total = 0
    delay_max = 0
    for _lineno, rec in iter_records(lines):
        if rec.fid != fid:
            continue
        if rec.op == "+":
            if rec.from_node == source and rec.uid not in sent_at:
                sent_at[rec.uid] = rec.time
                stats.sent += 1
        elif rec.op == "d":
            stats.dropped += 1
            sent_at.pop(rec.uid, None)
        elif rec.op == "r" and rec.to_node == sink:
            stats.received += 1
            stats.bytes_received += rec.size
            birth = sent_at.pop(rec.uid, None)
            if birth is not None:
                delay = rec.time - birth
                delay_total += delay
                delay_max = max(delay_max, delay)
    if stats.received:
        stats.mean_delay = delay_total / stats.received / NS_PER_SEC
        stats.max_delay = delay_max / NS_PER_SEC
    return stats


def conservation_check(lines: Iterable[str]) -> list[str]:
    """Validate every packet's lifecycle; returns violation descriptions.

    Grammar per uid: on each link, '+' then exactly one of '-' or 'd';
    'r' only downstream of a '-' on the incoming link; nothing after a
    drop or a delivery; timestamps never decrease. Packets still queued
    or in flight at end of trace are fine.
    """
    violations: list[str] = []
    # uid -> ("queued"|"transit", from_node, to_node); retired on r/d.
    state: dict[int, tuple] = {}
    last_time = 0
    for lineno, rec in iter_records(lines):
        if rec.time < last_time:
            violations.append(f"line {lineno}: time goes backwards")
        last_time = max(last_time, rec.time)
        cur = state.get(rec.uid)
        link = (rec.from_node, rec.to_node)
        if rec.op == "+":
            if cur is not None and cur[0] != "transit":
                violations.append(f"line {lineno}: uid {rec.uid} enqueued while queued")
            state[rec.uid] = ("queued",) + link
        elif rec.op == "-":
            if cur is None or cur[0] != "queued" or cur[1:] != link:
                violations.append(f"line {lineno}: '-' for uid {rec.uid} without matching '+'")
            state[rec.uid] = ("transit",) + link
        elif rec.op == "d":
            if cur is None or cur[0] != "queued" or cur[1:] != link:
                violations.append(f"line {lineno}: 'd' for uid {rec.uid} without matching '+'")
            state.pop(rec.uid, None)
        else:  # r
            if rec.from_node == rec.to_node and cur is None:
                pass  # delivery at the packet's own source node: no link events
            elif cur is None or cur[0] != "transit" or cur[1:] != link:
                violations.append(f"line {lineno}: 'r' for uid {rec.uid} without upstream '-'")
            state.pop(rec.uid, None)
    return violations


def throughput_series(
    lines: Iterable[str], fid: int, sink: int, bin_seconds: float
) -> list[tuple[float, float]]:
    """Received bits/s per time bin at the sink, bins anchored at t=0.

    Returns (bin start in seconds, bits/s) for every bin from 0 through
    the bin containing the last delivery; empty trace gives [].
    """
    if bin_seconds <= 0:
        raise ValueError(f"bin must be positive, got {bin_seconds}")
    bin_ns = round(bin_seconds * NS_PER_SEC)
    bytes_per_bin: dict[int, int] = {}
    last_bin = -1
    for _lineno, rec in iter_records(lines):
        if rec.op == "r" and rec.fid == fid and rec.to_node == sink:
            k = rec.time // bin_ns
            bytes_per_bin[k] = bytes_per_bin.get(k, 0) + rec.size
            last_bin = max(last_bin, k)
    return [
        (k * bin_ns / NS_PER_SEC, bytes_per_bin.get(k, 0) * 8 / bin_seconds)
        for k in range(last_bin + 1)
    ]
