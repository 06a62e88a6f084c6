"""Transport agents and application-level traffic generators.

A UdpAgent stamps outgoing packets with its flow id and per-flow
sequence numbers; a SinkMonitor counts arrivals and infers losses from
sequence gaps. On top sit two generators: constant bit rate (fixed-size
packets at a fixed interval) and exponential on-off (alternating
exponentially distributed ON/OFF periods, sending at a fixed rate while
ON, starting with ON).

Randomness comes only from the on-off generator, which draws from its
own splitmix64 substream in a fixed order (ON duration, then OFF
duration, alternating), so a seed fully determines the schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InternalError, ScenarioError, SimulationError
from .netmodel import Packet, tx_time
from .rng import SplitMix64

Rng = SplitMix64


def exp_variate(mean: int, rng) -> int:
    """Exponential draw with the given mean (ns), floored to whole ns.

    Inverse transform: -mean * ln(1 - u) with u uniform in [0, 1).
    """
    if mean <= 0:
        raise SimulationError(f"exponential mean must be positive, got {mean}")
    return int(-mean * math.log1p(-rng.uniform()))


@dataclass(frozen=True)
class CbrConfig:
    size: int  # bytes
    interval: int  # ns between sends
    start: int  # ns
    stop: int  # ns

    def __post_init__(self):
        if self.size < 1:
            raise ScenarioError(f"packet size must be >= 1 byte, got {self.size}")
        if self.interval <= 0:
            raise ScenarioError(f"cbr interval must be positive, got {self.interval}")
        if self.start > self.stop:
            raise ScenarioError("cbr start must not exceed stop")


@dataclass(frozen=True)
class ExpOnOffConfig:
    size: int  # bytes
    burst_mean: int  # mean ON duration, ns
    idle_mean: int  # mean OFF duration, ns
    rate: int  # bits/s while ON
    start: int
    stop: int

    def __post_init__(self):
        if self.size < 1:
            raise ScenarioError(f"packet size must be >= 1 byte, got {self.size}")
        if self.burst_mean <= 0 or self.idle_mean <= 0 or self.rate <= 0:
            raise ScenarioError("exp burst, idle and rate must all be positive")
        if self.start > self.stop:
            raise ScenarioError("exp start must not exceed stop")


class UdpAgent:
    """Packet source bound to one node and port, sending to one peer."""

    def __init__(self, network, node: int, port: int, fid: int, alloc_uid, alloc_seq):
        self.network = network
        self.node = node
        self.port = port
        self.fid = fid
        self.peer_node: int | None = None
        self.peer_port: int | None = None
        self._alloc_uid = alloc_uid
        self._alloc_seq = alloc_seq

    def connect(self, peer_node: int, peer_port: int) -> None:
        self.peer_node = peer_node
        self.peer_port = peer_port

    @property
    def connected(self) -> bool:
        return self.peer_node is not None

    def send(self, size: int, ptype: str) -> Packet:
        if not self.connected:
            raise SimulationError("agent is not connected to a sink")
        pkt = Packet(
            uid=self._alloc_uid(),
            fid=self.fid,
            ptype=ptype,
            size=size,
            src=self.node,
            sport=self.port,
            dst=self.peer_node,
            dport=self.peer_port,
            seq=self._alloc_seq(self.fid),
            birth=self.network.engine.now(),
        )
        self.network.forward(self.node, pkt)
        return pkt


@dataclass
class MonitorReport:
    npkts: int
    bytes: int
    nlost: int
    last_arrival: int | None  # ns, None before any packet


class SinkMonitor:
    """Terminal agent: counts packets/bytes, infers losses from seq gaps."""

    def __init__(self, node: int, port: int, clock):
        self.node = node
        self.port = port
        self._clock = clock
        self.npkts = 0
        self.bytes = 0
        self.last_arrival: int | None = None
        self._highest_seq: dict[int, int] = {}
        self._received: dict[int, int] = {}

    def on_receive(self, pkt: Packet) -> None:
        if pkt.dst != self.node or pkt.dport != self.port:
            raise InternalError(
                f"misdelivery: packet for {pkt.dst}.{pkt.dport} "
                f"reached sink {self.node}.{self.port}"
            )
        self.npkts += 1
        self.bytes += pkt.size
        prev = self._highest_seq.get(pkt.fid)
        if prev is None or pkt.seq > prev:
            self._highest_seq[pkt.fid] = pkt.seq
        self._received[pkt.fid] = self._received.get(pkt.fid, 0) + 1
        self.last_arrival = self._clock()

    @property
    def nlost(self) -> int:
        return sum(
            high + 1 - self._received[fid] for fid, high in self._highest_seq.items()
        )

    def report(self) -> MonitorReport:
        return MonitorReport(self.npkts, self.bytes, self.nlost, self.last_arrival)


class CbrGenerator:
    """Constant bit rate: one `size`-byte packet every `interval` ns.

    Sends land exactly at start + k*interval. The stop event cancels the
    pending send, including one landing exactly at the stop instant
    (stop was scheduled at setup time, so it dispatches first).
    """

    ptype = "cbr"

    def __init__(self, engine, agent: UdpAgent, cfg: CbrConfig):
        self.engine = engine
        self.agent = agent
        self.cfg = cfg
        self.emitted = 0
        self._stopped = False
        self._pending = None

    def install(self) -> None:
        self.engine.schedule(self.cfg.start, self._start)
        self.engine.schedule(self.cfg.stop, self._stop)

    def _start(self) -> None:
        if self._stopped:
            return
        self._pending = self.engine.schedule(self.engine.now(), self._send)

    def _send(self) -> None:
        self.agent.send(self.cfg.size, self.ptype)
        self.emitted += 1
        self._pending = self.engine.schedule(self.engine.now() + self.cfg.interval, self._send)

    def _stop(self) -> None:
        self._stopped = True
        if self._pending is not None:
            self.engine.cancel(self._pending)
            self._pending = None


class ExpOnOffGenerator:
    """Exponential on-off: ON ~ Exp(burst_mean), OFF ~ Exp(idle_mean).

    The process starts in ON. While ON, packets go out with fixed
    spacing size*8/rate, the first at the period's opening instant; a
    send that would land at or past the period's end is deferred to the
    next ON opening. Stop cancels whatever is pending.
    """

    ptype = "exp"

    def __init__(self, engine, agent: UdpAgent, cfg: ExpOnOffConfig, rng):
        self.engine = engine
        self.agent = agent
        self.cfg = cfg
        self.rng = rng
        self.gap = tx_time(cfg.size, cfg.rate)  # ns between sends while ON
        self.emitted = 0
        self._stopped = False
        self._on_end = 0
        self._pending_send = None
        self._transition = None

    def install(self) -> None:
        self.engine.schedule(self.cfg.start, self._start)
        self.engine.schedule(self.cfg.stop, self._stop)

    def _start(self) -> None:
        if self._stopped:
            return
        self._begin_on()

    def _begin_on(self) -> None:
        now = self.engine.now()
        self._on_end = now + exp_variate(self.cfg.burst_mean, self.rng)
        if now < self._on_end:
            self._pending_send = self.engine.schedule(now, self._send)
        self._transition = self.engine.schedule(self._on_end, self._begin_off)

    def _send(self) -> None:
        self.agent.send(self.cfg.size, self.ptype)
        self.emitted += 1
        nxt = self.engine.now() + self.gap
        if nxt < self._on_end:
            self._pending_send = self.engine.schedule(nxt, self._send)
        else:
            self._pending_send = None  # deferred to the next ON opening

    def _begin_off(self) -> None:
        off = exp_variate(self.cfg.idle_mean, self.rng)
        self._transition = self.engine.schedule(self.engine.now() + off, self._begin_on)

    def _stop(self) -> None:
        self._stopped = True
        for pending in (self._pending_send, self._transition):
            if pending is not None:
                self.engine.cancel(pending)
        self._pending_send = None
        self._transition = None


def attach_cbr(engine, agent: UdpAgent, cfg: CbrConfig) -> CbrGenerator:
    """Install a CBR generator on an already-connected agent."""
    if not agent.connected:
        raise SimulationError("cannot attach cbr: agent is not connected to a sink")
    gen = CbrGenerator(engine, agent, cfg)
    gen.install()
    return gen


def attach_exp(engine, agent: UdpAgent, cfg: ExpOnOffConfig, rng) -> ExpOnOffGenerator:
    """Install an exponential on-off generator on a connected agent."""
    if not agent.connected:
        raise SimulationError("cannot attach exp: agent is not connected to a sink")
    gen = ExpOnOffGenerator(engine, agent, cfg, rng)
    gen.install()
    return gen


def attach_expoo_traffic(
    network, node: int, sink: SinkMonitor, cfg: ExpOnOffConfig, fid: int, rng,
    alloc_uid, alloc_seq,
) -> ExpOnOffGenerator:
    """Create a UDP agent on `node`, connect it to `sink`, and install an
    exponential on-off generator driving it (one-call convenience)."""
    if sink is None:
        raise SimulationError("cannot attach exp generator: unknown sink")
    agent = UdpAgent(network, node, network.allot_port(node), fid, alloc_uid, alloc_seq)
    agent.connect(sink.node, sink.port)
    return attach_exp(network.engine, agent, cfg, rng)
