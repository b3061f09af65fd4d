"""Cycle-annotated record of datapath activity."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Unit(str, Enum):
    LOOKUP = "lookup"
    TREE_ADD = "tree_add"
    SERIAL_ADD = "serial_add"
    SUBTRACT = "subtract"
    SHIFT = "shift"
    FUSE = "fuse"
    ADJUST = "adjust"


@dataclass(frozen=True)
class TraceEvent:
    cycle: int
    unit: Unit
    note: str = ""

    def __str__(self):
        return f"{self.cycle:>6}  {self.unit.value:<10}  {self.note}"


@dataclass
class ReductionTrace:
    events: list[TraceEvent] = field(default_factory=list)
    # datapath observations (pre-adjust value, adjust count, ...) for bound checks
    stats: dict = field(default_factory=dict)

    def add(self, cycle: int, unit: Unit, note: str = "") -> None:
        if self.events and cycle < self.events[-1].cycle:
            raise ValueError(f"trace cycle went backwards: {cycle} < {self.events[-1].cycle}")
        self.events.append(TraceEvent(cycle, Unit(unit), note))

    @property
    def total_cycles(self) -> int:
        return self.events[-1].cycle if self.events else 0

    def by_unit(self, unit: Unit) -> list[TraceEvent]:
        return [e for e in self.events if e.unit == unit]

    def format(self) -> str:
        lines = [" cycle  unit        note"]
        lines.extend(str(e) for e in self.events)
        lines.append(f"total_cycles={self.total_cycles}")
        return "\n".join(lines)
