"""Bounded FIFO channels and a dataflow runner with deterministic deadlock detection.

A :class:`Stream` is a single-producer/single-consumer FIFO.  Used on its own
(outside a pipeline) there is nobody else to make progress, so a push onto a
full stream or a pop from an empty open stream is reported as a deadlock
immediately.

A :class:`DataflowPipeline` wires stages together with streams.  Each stage
function handles one task per call (popping its inputs and pushing its
outputs); the runner keeps calling it until its first input is exhausted.
Stages run either concurrently, one thread per stage, or sequentially in
topological order with unbounded buffering.  For a valid pipeline both modes
give identical outputs.
"""
from __future__ import annotations

import graphlib
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable


class PipelineError(RuntimeError):
    """Structural problem (cycle, shared stream) or a failed run."""


class DeadlockError(PipelineError):
    def __init__(self, message: str, streams: tuple[str, ...] = ()):
        super().__init__(message)
        self.streams = streams


class EndOfStream(Exception):
    """Raised by :meth:`Stream.pop` once the stream is closed and drained."""


class _Scheduler:
    """Shared lock and blocked-thread bookkeeping for one concurrent run."""

    def __init__(self, n_threads: int):
        self.cond = threading.Condition()
        self.alive = n_threads
        self.blocked: dict[int, str] = {}
        self.deadlock: DeadlockError | None = None

    def wait(self, stream: "Stream", ready: Callable[[], bool]):
        me = threading.get_ident()
        while not ready():
            if self.deadlock is not None:
                raise self.deadlock
            self.blocked[me] = stream.name
            self._check()
            if self.deadlock is not None:
                raise self.deadlock
            self.cond.wait()
        self.blocked.pop(me, None)

    def progress(self):
        # any push/pop/close may unblock any waiter; they re-register after re-checking
        self.blocked.clear()
        self.cond.notify_all()

    def _check(self):
        if self.deadlock is None and self.alive and len(self.blocked) >= self.alive:
            names = tuple(sorted(set(self.blocked.values())))
            self.deadlock = DeadlockError(f"deadlock: all stages blocked on {', '.join(names)}", names)
            self.cond.notify_all()

    def retire(self):
        with self.cond:
            self.alive -= 1
            self._check()
            self.cond.notify_all()


class Stream:
    def __init__(self, name: str = "stream", capacity: int = 2):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.name = name
        self.capacity = capacity
        self.reads = 0
        self.writes = 0
        self.max_occupancy = 0
        self.closed = False
        self._q: deque = deque()
        self._sched: _Scheduler | None = None

    def __len__(self):
        return len(self._q)

    def __repr__(self):
        return f"Stream({self.name!r}, {len(self._q)}/{self.capacity})"

    def push(self, v: Any) -> None:
        if self.closed:
            raise PipelineError(f"push on closed stream {self.name}")
        sched = self._sched
        if sched is None:
            if len(self._q) >= self.capacity:
                raise DeadlockError(f"push on full stream {self.name} with no consumer", (self.name,))
            self._put(v)
            return
        with sched.cond:
            sched.wait(self, lambda: len(self._q) < self.capacity)
            self._put(v)
            sched.progress()

    def _put(self, v):
        self._q.append(v)
        self.writes += 1
        self.max_occupancy = max(self.max_occupancy, len(self._q))

    def pop(self) -> Any:
        sched = self._sched
        if sched is None:
            if not self._q:
                if self.closed:
                    raise EndOfStream(self.name)
                raise DeadlockError(f"pop on empty stream {self.name} with no producer", (self.name,))
            return self._get()
        with sched.cond:
            sched.wait(self, lambda: bool(self._q) or self.closed)
            if not self._q:
                raise EndOfStream(self.name)
            v = self._get()
            sched.progress()
            return v

    def _get(self):
        self.reads += 1
        return self._q.popleft()

    def close(self) -> None:
        sched = self._sched
        if sched is None:
            self.closed = True
            return
        with sched.cond:
            self.closed = True
            sched.progress()

    def extend(self, values) -> "Stream":
        for v in values:
            self.push(v)
        return self

    def drain(self) -> list:
        """Pop everything currently buffered (does not block)."""
        out = []
        while self._q:
            out.append(self._get())
        return out


def feed(name: str, values, capacity: int | None = None) -> Stream:
    """A closed environment stream pre-loaded with ``values``."""
    values = list(values)
    s = Stream(name, capacity or max(1, len(values)))
    s.extend(values)
    s.close()
    return s


@dataclass
class Stage:
    name: str
    fn: Callable[..., None]
    inputs: list[Stream]
    outputs: list[Stream]
    interval: int | None = None  # modeled cycles between task starts


@dataclass
class RunStats:
    invocations: dict[str, int]
    stage_intervals: dict[str, int]
    reads: dict[str, int]
    writes: dict[str, int]
    interval: int | None = None
    mode: str = "concurrent"


@dataclass
class DataflowPipeline:
    stages: list[Stage] = field(default_factory=list)

    def add(self, name: str, fn: Callable[..., None], inputs, outputs, interval: int | None = None) -> Stage:
        st = Stage(name, fn, list(inputs), list(outputs), interval)
        self.stages.append(st)
        return st

    def streams(self) -> list[Stream]:
        seen: dict[int, Stream] = {}
        for st in self.stages:
            for s in st.inputs + st.outputs:
                seen.setdefault(id(s), s)
        return list(seen.values())

    def validate(self) -> list[Stage]:
        """Check single producer/consumer per stream and acyclicity; return a topological order."""
        producer: dict[int, Stage] = {}
        consumer: dict[int, Stage] = {}
        for st in self.stages:
            if not st.inputs:
                raise PipelineError(f"stage {st.name} has no input stream")
            for s in st.outputs:
                if id(s) in producer:
                    raise PipelineError(f"stream {s.name} has multiple producers "
                                        f"({producer[id(s)].name}, {st.name})")
                producer[id(s)] = st
            for s in st.inputs:
                if id(s) in consumer:
                    raise PipelineError(f"stream {s.name} has multiple consumers "
                                        f"({consumer[id(s)].name}, {st.name})")
                consumer[id(s)] = st
        graph = {st.name: set() for st in self.stages}
        for st in self.stages:
            for s in st.inputs:
                if id(s) in producer:
                    graph[st.name].add(producer[id(s)].name)
        try:
            order = list(graphlib.TopologicalSorter(graph).static_order())
        except graphlib.CycleError as exc:
            raise PipelineError(f"cyclic stage graph: {' -> '.join(exc.args[1])}") from None
        by_name = {st.name: st for st in self.stages}
        if len(by_name) != len(self.stages):
            raise PipelineError("stage names must be unique")
        return [by_name[n] for n in order]

    def run(self, concurrent: bool = True) -> RunStats:
        order = self.validate()
        counts = {st.name: 0 for st in self.stages}
        if concurrent:
            self._run_threads(counts)
        else:
            self._run_sequential(order, counts)
        intervals = {st.name: st.interval for st in self.stages if st.interval is not None}
        streams = self.streams()
        return RunStats(
            invocations=counts,
            stage_intervals=intervals,
            reads={s.name: s.reads for s in streams},
            writes={s.name: s.writes for s in streams},
            interval=max(intervals.values()) if intervals else None,
            mode="concurrent" if concurrent else "sequential",
        )

    @staticmethod
    def _loop(st: Stage, counts: dict[str, int]):
        first = st.inputs[0]
        while True:
            before = first.reads
            try:
                st.fn(*st.inputs, *st.outputs)
            except EndOfStream:
                if first.reads != before:
                    raise PipelineError(f"stage {st.name} hit end of stream mid-task") from None
                break
            counts[st.name] += 1

    def _run_sequential(self, order: list[Stage], counts: dict[str, int]):
        saved = {id(s): s.capacity for s in self.streams()}
        try:
            for s in self.streams():
                s.capacity = 1 << 62
            for st in order:
                self._loop(st, counts)
                for s in st.outputs:
                    s.close()
        finally:
            for s in self.streams():
                s.capacity = saved[id(s)]

    def _run_threads(self, counts: dict[str, int]):
        sched = _Scheduler(len(self.stages))
        streams = self.streams()
        for s in streams:
            s._sched = sched
        errors: list[BaseException] = []

        def body(st: Stage):
            try:
                self._loop(st, counts)
            except BaseException as exc:  # reported after join
                errors.append(exc)
            finally:
                for s in st.outputs:
                    s.close()
                sched.retire()

        threads = [threading.Thread(target=body, args=(st,), name=st.name, daemon=True)
                   for st in self.stages]
        try:
            for t in threads:
                t.start()
            for t in threads:
                t.join()
        finally:
            for s in streams:
                s._sched = None
        if sched.deadlock is not None:
            raise sched.deadlock
        if errors:
            raise errors[0]
