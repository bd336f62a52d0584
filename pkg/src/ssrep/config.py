"""Tool-wide bounds and defaults.

Every search in the library is total: it either finishes within the
configured bound or raises SearchExhausted.  Nothing is silently truncated.
"""

from dataclasses import dataclass
from math import lcm


@dataclass(frozen=True)
class ToolConfig:
    radius: int = 6            # BFS radius for coset/double-coset enumeration
    power_bound: int = 24      # witness power search bound (g^k scans)
    depth: int = 20            # central-series depth bound
    orbit_bound: int = 4096    # orbit size bound for Schreier stabilizers
    search_bound: int = 64     # quotient / index enumeration bound
    conductor: int = 24        # session cyclotomic conductor

    def __post_init__(self):
        for name in ("radius",):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        for name in ("power_bound", "depth", "orbit_bound", "search_bound", "conductor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT = ToolConfig()


def default_conductor(relative_orders, base=24):
    """Session default: base * lcm of the finite relative orders."""
    finite = [r for r in relative_orders if r is not None]
    return base * (lcm(*finite) if finite else 1)
