"""Resource bounds and run configuration.

Every potentially expensive search takes a Bounds value and fails loudly
with ResourceBoundExceeded instead of running away.  The defaults cover
groups of order up to ~32 comfortably; larger runs raise the relevant
field explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class Bounds:
    # Hard cap on |G| for group construction.
    max_group_order: int = 64
    # Catalog enumeration caps per filter.
    enum_all_order: int = 27
    enum_p_order: int = 81
    # Node budget for the partition-merge enumeration tree.
    enum_node_budget: int = 50_000_000
    # Node budget shared by scheme-automorphism and isomorphism backtracking.
    backtrack_node_budget: int = 5_000_000
    # Largest automorphism-group order iterated exhaustively; beyond this
    # Cayley isomorphisms fall back to column backtracking.
    aut_iteration_threshold: int = 100_000
    # Output cap for operations that list permutations explicitly.
    iso_list_limit: int = 200_000
    # Element budget for streaming over a permutation group (regular
    # subgroup search, intermediate subgroup search).
    regular_element_budget: int = 2_000_000
    between_element_budget: int = 1_000_000
    # Index cap for the intermediate-subgroup sweep used by 2-minimality.
    between_index_bound: int = 10_000
    # Order cap for full subgroup enumeration of a Cayley automorphism group.
    cayley_minimal_order_bound: int = 512
    # Degree cap for the all-of-Sym brute force CI check.
    bruteforce_order: int = 8


DEFAULT_BOUNDS = Bounds()


def extended_bounds() -> Bounds:
    """Bounds for the hours-scale runs (order-27 full sweeps and similar)."""
    return replace(
        DEFAULT_BOUNDS,
        enum_all_order=32,
        enum_node_budget=2_000_000_000,
        backtrack_node_budget=50_000_000,
        regular_element_budget=3_000_000,
    )


@dataclass
class RunConfig:
    """Configuration of one CLI run; echoed into every report."""

    group: str = ""
    command: str = ""
    seed: int = 0
    out: str = ""
    workers: int = 1
    time_limit: float | None = None
    bounds: Bounds = field(default_factory=lambda: DEFAULT_BOUNDS)

    def describe(self) -> dict:
        return {
            "group": self.group,
            "command": self.command,
            "seed": self.seed,
            "workers": self.workers,
            "time_limit": self.time_limit,
        }
