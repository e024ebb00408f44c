"""Deterministic seeded simulation of message-passing executions.

Three topologies are supported:

* ``complete``: a decentralized system where every scheduler step picks a
  process uniformly at random; it runs an internal event with probability
  ``pr_i`` and otherwise splits the remaining mass evenly between sends
  (uniform destination) and receives (uniform pick from its pending pool).
  A process that draws a receive with nothing pending yields the step, so
  no event is executed and the scheduler simply moves on.
* ``star``: clients exchanging request/reply rounds with one server that
  owns a single shared clock pair; the server handles a request atomically
  (receive, then reply send).
* ``broadcast``: every process sends once to all others, then drains its
  incoming broadcasts in random order.

Every event ticks both the vector clock and the Bloom clock of its process
and is stamped with a global sequence number (GSN) in execution order, so
the log is a linearization of the run: ``y`` happened-before ``z`` implies
``gsn(y) < gsn(z)``.  Delivery is not FIFO: pending messages form a pool
per destination and a receive consumes a uniformly random element.

Runs are pure functions of the configuration: the scheduler, destination
choices, pool draws and hash family all derive from one 64-bit seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .clocks import BloomClock, EventIndex, HashFamily, ProcessId, VectorClock
from .errors import ConfigurationError

TOPOLOGIES = ("complete", "star", "broadcast")
KINDS = ("internal", "send", "receive")


class ReplayError(Exception):
    """A recorded timestamp could not be reproduced from the log's linkage."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one seeded run.

    ``gsn_limit`` bounds the complete-graph run (default ``n**2``); star and
    broadcast runs terminate structurally instead.  ``messages_per_client``
    is the number of request/reply rounds per star client (default ``n``).
    """

    topology: str
    n: int
    m: int
    k: int
    pr_i: float = 0.0
    seed: int = 1
    gsn_limit: int | None = None
    messages_per_client: int | None = None

    def __post_init__(self) -> None:
        if self.topology not in TOPOLOGIES:
            raise ConfigurationError(f"unknown topology {self.topology!r}; expected one of {TOPOLOGIES}")
        # A star run with one client still has two clock-bearing entities
        # (client plus server); the peer topologies need two processes.
        min_n = 1 if self.topology == "star" else 2
        if self.n < min_n:
            raise ConfigurationError(f"need at least {min_n} processes for {self.topology}, got n={self.n}")
        if self.m < 1:
            raise ConfigurationError(f"clock width must be at least 1, got m={self.m}")
        if self.k < 1:
            raise ConfigurationError(f"need at least one hash function, got k={self.k}")
        if not 0.0 <= self.pr_i <= 1.0:
            raise ConfigurationError(f"pr_i must lie in [0, 1], got {self.pr_i}")
        if self.topology != "complete" and self.pr_i != 0.0:
            raise ConfigurationError(f"{self.topology} topology has no internal events; pr_i must be 0")
        if self.gsn_limit is not None and self.gsn_limit < 1:
            raise ConfigurationError(f"gsn_limit must be positive, got {self.gsn_limit}")
        if self.messages_per_client is not None and self.messages_per_client < 1:
            raise ConfigurationError(
                f"messages_per_client must be positive, got {self.messages_per_client}"
            )

    @property
    def event_budget(self) -> int:
        return self.gsn_limit if self.gsn_limit is not None else self.n * self.n

    @property
    def rounds_per_client(self) -> int:
        return self.messages_per_client if self.messages_per_client is not None else self.n

    @property
    def entities(self) -> int:
        """Number of clock-bearing entities: the star server is one extra."""
        return self.n + 1 if self.topology == "star" else self.n

    def hash_family(self) -> HashFamily:
        return HashFamily(k=self.k, m=self.m, seed=self.seed)


@dataclass(frozen=True)
class EventRecord:
    """One timestamped event.

    ``vector_ts`` and ``bloom_ts`` are the post-tick snapshots of the
    executing process's clocks.  ``send_gsn`` links a receive back to the
    GSN of the matched send so a log can be replayed without knowing the
    scheduler's random draws; broadcast sends leave ``receiver`` unset
    because one send fans out to every other process.
    """

    gsn: int
    pid: ProcessId
    kind: str
    event_index: EventIndex
    sender: ProcessId | None
    receiver: ProcessId | None
    send_gsn: int | None
    vector_ts: VectorClock
    bloom_ts: BloomClock


@dataclass(frozen=True)
class MessageItem:
    """A message in flight: payloads are snapshots taken at the send event."""

    origin: ProcessId
    destination: ProcessId | None
    send_gsn: int
    vector_payload: VectorClock
    bloom_payload: BloomClock


@dataclass(frozen=True)
class ExecutionLog:
    """A run's configuration echo plus its events ordered by GSN (contiguous from 1)."""

    config: ExperimentConfig
    events: tuple[EventRecord, ...]

    def __len__(self) -> int:
        return len(self.events)

    def event(self, gsn: int) -> EventRecord:
        if not 1 <= gsn <= len(self.events):
            raise ValueError(f"gsn {gsn} outside [1, {len(self.events)}]")
        return self.events[gsn - 1]


class _Engine:
    """Clock and event-log bookkeeping shared by the topology runners."""

    def __init__(self, config: ExperimentConfig, entities: int):
        self.family = config.hash_family()
        self.xs = [0] * entities
        self.vclocks = [VectorClock.zero(entities) for _ in range(entities)]
        self.bclocks = [BloomClock.zero(config.m) for _ in range(entities)]
        self.events: list[EventRecord] = []

    def _advance(self, pid: ProcessId) -> tuple[int, int]:
        self.xs[pid] += 1
        return len(self.events) + 1, self.xs[pid]

    def internal(self, pid: ProcessId) -> None:
        gsn, x = self._advance(pid)
        v = self.vclocks[pid].tick(pid)
        b = self.bclocks[pid].tick(self.family, pid, x)
        self.vclocks[pid], self.bclocks[pid] = v, b
        self.events.append(EventRecord(gsn, pid, "internal", x, None, None, None, v, b))

    def send(self, pid: ProcessId, dest: ProcessId | None) -> MessageItem:
        gsn, x = self._advance(pid)
        v = self.vclocks[pid].tick(pid)
        b = self.bclocks[pid].tick(self.family, pid, x)
        self.vclocks[pid], self.bclocks[pid] = v, b
        self.events.append(EventRecord(gsn, pid, "send", x, pid, dest, None, v, b))
        return MessageItem(pid, dest, gsn, v, b)

    def receive(self, pid: ProcessId, msg: MessageItem) -> None:
        gsn, x = self._advance(pid)
        v = self.vclocks[pid].merge(msg.vector_payload).tick(pid)
        b = self.bclocks[pid].merge(msg.bloom_payload).tick(self.family, pid, x)
        self.vclocks[pid], self.bclocks[pid] = v, b
        self.events.append(EventRecord(gsn, pid, "receive", x, msg.origin, pid, msg.send_gsn, v, b))


def _require_topology(config: ExperimentConfig, topology: str) -> None:
    if config.topology != topology:
        raise ConfigurationError(f"config topology is {config.topology!r}, expected {topology!r}")


def run(config: ExperimentConfig) -> ExecutionLog:
    """Run the topology named by the configuration."""
    if config.topology == "complete":
        return run_complete(config)
    if config.topology == "star":
        return run_star(config)
    return run_broadcast(config)


def run_complete(config: ExperimentConfig) -> ExecutionLog:
    """Decentralized complete-graph run, terminating when the GSN hits the budget.

    Scheduler steps that draw a receive for a process with an empty pending
    pool execute nothing; the GSN only advances on executed events.
    """
    _require_topology(config, "complete")
    rng = random.Random(config.seed)
    engine = _Engine(config, config.n)
    n = config.n
    pending: list[list[MessageItem]] = [[] for _ in range(n)]
    send_cut = config.pr_i + (1.0 - config.pr_i) / 2.0

    while len(engine.events) < config.event_budget:
        pid = rng.randrange(n)
        u = rng.random()
        if u < config.pr_i:
            engine.internal(pid)
        elif u < send_cut:
            dest = rng.randrange(n - 1)
            if dest >= pid:
                dest += 1
            pending[dest].append(engine.send(pid, dest))
        elif pending[pid]:
            pool = pending[pid]
            engine.receive(pid, pool.pop(rng.randrange(len(pool))))
        # else: a receive draw with an empty pool yields the step.
    return ExecutionLog(config, tuple(engine.events))


def run_star(config: ExperimentConfig) -> ExecutionLog:
    """Client-server run: each client plays ``rounds_per_client`` request/reply rounds.

    The server is entity ``n`` and owns the single shared clock pair.  The
    scheduler picks uniformly among clients that can act and, when requests
    are queued, the server; one server slot handles a uniformly chosen
    pending request atomically (receive, then reply send).
    """
    _require_topology(config, "star")
    rng = random.Random(config.seed)
    n = config.n
    server = n
    engine = _Engine(config, n + 1)
    remaining = [config.rounds_per_client] * n
    awaiting = [False] * n
    replies: list[MessageItem | None] = [None] * n
    requests: list[MessageItem] = []

    while True:
        ready = [c for c in range(n) if replies[c] is not None or (not awaiting[c] and remaining[c] > 0)]
        if requests:
            ready.append(server)
        if not ready:
            break
        actor = ready[rng.randrange(len(ready))]
        if actor == server:
            msg = requests.pop(rng.randrange(len(requests)))
            engine.receive(server, msg)
            replies[msg.origin] = engine.send(server, msg.origin)
        elif replies[actor] is not None:
            msg = replies[actor]
            replies[actor] = None
            engine.receive(actor, msg)
            awaiting[actor] = False
            remaining[actor] -= 1
        else:
            requests.append(engine.send(actor, server))
            awaiting[actor] = True
    return ExecutionLog(config, tuple(engine.events))


def run_broadcast(config: ExperimentConfig) -> ExecutionLog:
    """Broadcast run: every process sends once to all others, then drains its pool.

    The log holds exactly ``n`` send events and ``n*(n-1)`` receive events;
    a process always broadcasts before consuming any incoming message.
    """
    _require_topology(config, "broadcast")
    rng = random.Random(config.seed)
    n = config.n
    engine = _Engine(config, n)
    pending: list[list[MessageItem]] = [[] for _ in range(n)]
    sent = [False] * n

    while True:
        ready = [p for p in range(n) if not sent[p] or pending[p]]
        if not ready:
            break
        pid = ready[rng.randrange(len(ready))]
        if not sent[pid]:
            sent[pid] = True
            msg = engine.send(pid, None)
            for other in range(n):
                if other != pid:
                    pending[other].append(replace(msg, destination=other))
        else:
            pool = pending[pid]
            engine.receive(pid, pool.pop(rng.randrange(len(pool))))
    return ExecutionLog(config, tuple(engine.events))


def replay_timestamps(log: ExecutionLog) -> None:
    """Recompute every timestamp in the log from the protocol rules alone.

    Walks the events in GSN order with fresh clocks per entity, resolving
    receive payloads through the recorded send linkage.  Raises
    ``ReplayError`` on the first sequencing or timestamp mismatch; a clean
    return certifies the log is protocol-consistent bit for bit.
    """
    config = log.config
    entities = config.entities
    family = config.hash_family()
    xs = [0] * entities
    vclocks = [VectorClock.zero(entities) for _ in range(entities)]
    bclocks = [BloomClock.zero(config.m) for _ in range(entities)]
    payloads: dict[int, tuple[VectorClock, BloomClock]] = {}

    for position, rec in enumerate(log.events, start=1):
        if rec.gsn != position:
            raise ReplayError(f"gsn {rec.gsn} at position {position}: log is not contiguous")
        if not 0 <= rec.pid < entities:
            raise ReplayError(f"gsn {rec.gsn}: pid {rec.pid} outside [0, {entities})")
        if rec.event_index != xs[rec.pid] + 1:
            raise ReplayError(
                f"gsn {rec.gsn}: event index {rec.event_index} breaks process order "
                f"(expected {xs[rec.pid] + 1})"
            )
        xs[rec.pid] = rec.event_index
        if rec.kind == "receive":
            if rec.send_gsn not in payloads:
                raise ReplayError(f"gsn {rec.gsn}: receive links to unknown send gsn {rec.send_gsn}")
            pv, pb = payloads[rec.send_gsn]
            v = vclocks[rec.pid].merge(pv).tick(rec.pid)
            b = bclocks[rec.pid].merge(pb).tick(family, rec.pid, rec.event_index)
        elif rec.kind in ("internal", "send"):
            v = vclocks[rec.pid].tick(rec.pid)
            b = bclocks[rec.pid].tick(family, rec.pid, rec.event_index)
        else:
            raise ReplayError(f"gsn {rec.gsn}: unknown event kind {rec.kind!r}")
        if v != rec.vector_ts or b != rec.bloom_ts:
            raise ReplayError(f"gsn {rec.gsn}: replayed timestamps differ from the recorded ones")
        vclocks[rec.pid], bclocks[rec.pid] = v, b
        if rec.kind == "send":
            payloads[rec.gsn] = (v, b)
