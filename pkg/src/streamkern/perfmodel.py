"""Cycle-count and throughput arithmetic for loops and task pipelines."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LoopSpec:
    trip_count: int
    iteration_latency: int
    initiation_interval: int = 1
    pipelined: bool = False

    def __post_init__(self):
        if self.trip_count < 0:
            raise ValueError("trip_count must be >= 0")
        if self.iteration_latency < 1 or self.initiation_interval < 1:
            raise ValueError("latency and II must be >= 1")


def loop_latency(s: LoopSpec) -> int:
    """Sequential: ``N * IL``.  Pipelined: ``(N - 1) * II + IL``.

    The sequential count is often narrated as one cycle to enter the loop and one
    fewer on the last exit check; the two cancel.
    """
    n = s.trip_count
    if n == 0:
        return 0
    if s.pipelined:
        return (n - 1) * s.initiation_interval + s.iteration_latency
    return n * s.iteration_latency


def throughput_hz(clock_period_ns: float, cycles: float) -> float:
    """Results per second for one result every ``cycles`` clocks."""
    if clock_period_ns <= 0 or cycles <= 0:
        raise ValueError("clock period and cycle count must be positive")
    return 1.0 / (clock_period_ns * 1e-9 * cycles)


def dataflow_interval(stage_intervals) -> int:
    vals = list(stage_intervals)
    if not vals:
        raise ValueError("no stages")
    return max(vals)
