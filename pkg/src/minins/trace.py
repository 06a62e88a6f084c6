"""Per-event trace file: the simulation's durable output.

One line per packet event in global dispatch order, 12 space-separated
fields, LF-terminated ASCII:

    op time from to ptype size flags fid src_addr dst_addr seq uid

op is one of + (enqueue), - (dequeue), r (receive), d (drop); +/-/d are
link events (from = queueing node, to = next hop) and r is delivery at
`to`. Time is decimal seconds with exactly 9 fractional digits so equal
runs produce byte-identical files. Addresses are node.port. The flags
field is reserved and always "-------".
"""

from __future__ import annotations

from dataclasses import dataclass

from .units import format_time_fixed

FLAGS = "-------"
OPS = ("+", "-", "r", "d")


@dataclass
class TraceRecord:
    op: str
    time: int  # ns
    from_node: int
    to_node: int
    ptype: str
    size: int
    flags: str
    fid: int
    src_node: int
    src_port: int
    dst_node: int
    dst_port: int
    seq: int
    uid: int


def format_fields(op, time, from_node, to_node, ptype, size, flags,
                  fid, src_node, src_port, dst_node, dst_port, seq, uid) -> str:
    return (
        f"{op} {format_time_fixed(time)} {from_node} {to_node} {ptype} {size}"
        f" {flags} {fid} {src_node}.{src_port} {dst_node}.{dst_port} {seq} {uid}\n"
    )


def format_line(rec: TraceRecord) -> str:
    """Render one record in the fixed 12-field format, newline included."""
    return format_fields(
        rec.op, rec.time, rec.from_node, rec.to_node, rec.ptype, rec.size,
        rec.flags, rec.fid, rec.src_node, rec.src_port,
        rec.dst_node, rec.dst_port, rec.seq, rec.uid,
    )


class TraceWriter:
    """Single-owner trace file writer; one line per record() call."""

    def __init__(self, path):
        self.path = path
        self._file = open(path, "w", encoding="ascii", newline="\n")

    def record(self, op: str, time: int, from_node: int, to_node: int, pkt) -> None:
        self._file.write(format_fields(
            op, time, from_node, to_node, pkt.ptype, pkt.size, FLAGS,
            pkt.fid, pkt.src, pkt.sport, pkt.dst, pkt.dport, pkt.seq, pkt.uid,
        ))

    def close_flush(self) -> None:
        """Flush and close; idempotent. Recording afterwards is an error."""
        if not self._file.closed:
            self._file.flush()
            self._file.close()


class NullTracer:
    """Tracer stand-in when no trace file was requested."""

    path = None

    def record(self, op, time, from_node, to_node, pkt) -> None:
        pass

    def close_flush(self) -> None:
        pass
