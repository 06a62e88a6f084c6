"""Brute-force reference model for micro scenarios.

Deliberately primitive: plain-list FIFO queues, routing by exhaustive
path enumeration, and an event list scanned linearly for the minimum
(time, creation order) entry each step. No heap, no queue-discipline
classes, no shared code with the simulator beyond arithmetic on ints.
Creation order mirrors the simulator's documented FIFO tie-break: the
initial injections first, then events in the order causality creates
them (service completion, then arrival, then next service).
"""

import itertools
from dataclasses import dataclass


@dataclass
class MicroLink:
    limit: int
    bandwidth: int
    delay: int


@dataclass
class MicroScenario:
    node_count: int
    links: dict  # (a, b) -> MicroLink, both directions present
    injections: list  # (time, uid, src, dst, size) in schedule order


def next_hop(scenario: MicroScenario, at: int, dst: int):
    """Exhaustive shortest path: fewest hops, smallest next hop on ties."""
    best = None
    others = [n for n in range(scenario.node_count) if n not in (at, dst)]
    for hops in range(1, scenario.node_count):
        for mids in itertools.permutations(others, hops - 1):
            path = (at,) + mids + (dst,)
            if all((a, b) in scenario.links for a, b in zip(path, path[1:])):
                key = (hops, path[1])
                if best is None or key < best:
                    best = key
    return None if best is None else best[1]


def reference_outcome(scenario: MicroScenario):
    """Returns (delivered uid -> time, dropped uid set)."""
    queues = {pair: [] for pair in scenario.links}
    busy = {pair: False for pair in scenario.links}
    delivered = {}
    dropped = set()
    counter = itertools.count()
    pending = [
        [time, next(counter), "inject", None, (uid, src, dst, size)]
        for time, uid, src, dst, size in scenario.injections
    ]

    def serve(pair, now):
        uid, src, dst, size = queues[pair].pop(0)
        busy[pair] = True
        link = scenario.links[pair]
        done = now + size * 8 * 1_000_000_000 // link.bandwidth
        pending.append([done, next(counter), "complete", pair, (uid, src, dst, size)])

    def handle_at(node, pkt, now):
        uid, src, dst, size = pkt
        if node == dst:
            delivered[uid] = now
            return
        hop = next_hop(scenario, node, dst)
        assert hop is not None, "micro scenarios are always connected"
        pair = (node, hop)
        if len(queues[pair]) < scenario.links[pair].limit:
            queues[pair].append(pkt)
        else:
            dropped.add(uid)
            return
        if not busy[pair]:
            serve(pair, now)

    while pending:
        index = min(range(len(pending)), key=lambda i: (pending[i][0], pending[i][1]))
        now, _, kind, pair, pkt = pending.pop(index)
        if kind == "inject":
            handle_at(pkt[1], pkt, now)
        elif kind == "complete":
            link = scenario.links[pair]
            pending.append([now + link.delay, next(counter), "arrive", pair, pkt])
            busy[pair] = False
            if queues[pair]:
                serve(pair, now)
        else:  # arrive
            handle_at(pair[1], pkt, now)
    return delivered, dropped
