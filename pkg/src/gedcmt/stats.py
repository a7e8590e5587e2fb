from __future__ import annotations

from dataclasses import dataclass, field, fields

COUNTER_FIELDS = (
    "exact_calls",
    "bound_calls",
    "lsap_calls",
    "verify_calls",
    "nodes_visited",
    "subtrees_confirmed",
    "subtrees_pruned",
    "mappings_expanded",
)


@dataclass
class QueryStats:
    """Operation counters for one build, query or scan.

    ``wall_time`` (seconds) is excluded from equality so that repeated runs
    compare equal on the deterministic counters alone.
    """

    exact_calls: int = 0
    bound_calls: int = 0
    lsap_calls: int = 0
    verify_calls: int = 0
    nodes_visited: int = 0
    subtrees_confirmed: int = 0
    subtrees_pruned: int = 0
    mappings_expanded: int = 0
    wall_time: float = field(default=0.0, compare=False)

    def counters(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in COUNTER_FIELDS}

    def add(self, other: "QueryStats") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    @property
    def distance_work(self) -> int:
        """Calls that cost a distance evaluation of some kind."""
        return self.exact_calls + self.bound_calls + self.verify_calls
