from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class CallCounters:
    """Tallies of robust cost calls, weight-function calls and current-model calls."""

    rcfc: int = 0
    cfc: int = 0
    cmc: int = 0

    def __add__(self, other: CallCounters) -> CallCounters:
        return CallCounters(self.rcfc + other.rcfc, self.cfc + other.cfc, self.cmc + other.cmc)

    def merge(self, other: CallCounters) -> None:
        self.rcfc += other.rcfc
        self.cfc += other.cfc
        self.cmc += other.cmc

    def snapshot(self) -> CallCounters:
        return CallCounters(self.rcfc, self.cfc, self.cmc)

    def as_dict(self) -> dict[str, int]:
        return asdict(self)
